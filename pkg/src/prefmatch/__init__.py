"""Bipartite matching under one-sided preferences.

Exact AUPCR-maximizing matchings, the classic benchmark matchers,
instance generators, metrics, a brute-force oracle and an experiment harness.
"""

from .aupcr import AupcrValue, compute_aupcr, solve_amm, solve_mcamm
from .classic import solve_fm, solve_pom, solve_popular, solve_rmm
from .gen import GenSpec, generate
from .instance import (
    Instance,
    InvalidMatching,
    Matching,
    ParseError,
    Signature,
    compare_fair,
    compare_rank_maximal,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
    signature_of,
)
from .metrics import MetricsRecord, evaluate_all, unpopularity_margin
from .oracle import InstanceTooLarge, oracle_optima
from .wmatch import InfeasiblePerfect, WeightedBipartiteGraph, WeightVector, max_weight_matching

__version__ = "0.1.0"
