"""Area-under-profile-curve ratio and the two matching reductions that maximise it.

AUPC(M) = sum_i (|P| - i + 1) * n_i(M), TA = |A| * |P|, AUPCR = AUPC / TA.

Both solvers build a doubled graph G' with left side A1 + P2 and right side
P1 + A2. Every rank-i edge (a, p) appears as A1[a]-P1[p] and P2[p]-A2[a], and
every original vertex gets an identity edge to its copy (A1[a]-A2[a],
P2[p]-P1[p]). A maximum-weight perfect matching of G' restricted to A1 x P1 is
the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import FrozenSet, Tuple

from .instance import Instance, Matching, signature_of
from .wmatch import WeightedBipartiteGraph, max_weight_matching


@total_ordering
@dataclass(frozen=True)
class AupcrValue:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0 or not 0 <= self.numerator <= self.denominator:
            raise ValueError(f"invalid AUPCR {self.numerator}/{self.denominator}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __lt__(self, other: "AupcrValue") -> bool:
        return self.as_fraction() < other.as_fraction()

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def aupc_from_counts(n_posts: int, per_rank) -> int:
    return sum((n_posts - i + 1) * x for i, x in enumerate(per_rank, 1))


def compute_aupcr(inst: Instance, m: Matching) -> AupcrValue:
    sig = signature_of(inst, m)
    return AupcrValue(aupc_from_counts(inst.n_posts, sig.per_rank),
                      inst.n_applicants * inst.n_posts)


def rank_weight(inst: Instance, rank: int) -> int:
    return inst.n_posts - rank + 1


@dataclass(frozen=True)
class ReductionGraph:
    graph: WeightedBipartiteGraph
    n_applicants: int
    n_posts: int
    identity_edges: FrozenSet[Tuple[int, int]]

    # left vertex u: A1[u] for u < |A|, else P2[u - |A|]
    # right vertex v: P1[v] for v < |P|, else A2[v - |P|]
    def left_label(self, u: int) -> Tuple[str, int]:
        return ("A1", u) if u < self.n_applicants else ("P2", u - self.n_applicants)

    def right_label(self, v: int) -> Tuple[str, int]:
        return ("P1", v) if v < self.n_posts else ("A2", v - self.n_posts)

    def restrict_primary(self, full: Matching) -> Matching:
        """The A1-P1 part of a matching of G', as a matching of the instance."""
        return Matching.from_pairs(
            (u, v) for u, v in full.pairs if u < self.n_applicants and v < self.n_posts
        )

    def restrict_copy(self, full: Matching) -> Matching:
        """The P2-A2 part of a matching of G', re-expressed as (applicant, post)."""
        return Matching.from_pairs(
            (v - self.n_posts, u - self.n_applicants)
            for u, v in full.pairs
            if u >= self.n_applicants and v >= self.n_posts
        )


def _reduction(inst: Instance, scale: int, applicant_identity: int) -> ReductionGraph:
    n_a, n_p = inst.n_applicants, inst.n_posts
    edges = []
    for a, p, k in inst.edges():
        w = rank_weight(inst, k) * scale
        edges.append((a, p, w))
        edges.append((n_a + p, n_p + a, w))
    identity = []
    for a in range(n_a):
        identity.append((a, n_p + a))
        edges.append((a, n_p + a, applicant_identity))
    for p in range(n_p):
        identity.append((n_a + p, p))
        edges.append((n_a + p, p, 0))
    size = n_a + n_p
    return ReductionGraph(WeightedBipartiteGraph(size, size, tuple(edges)), n_a, n_p,
                          frozenset(identity))


def build_amm_reduction(inst: Instance) -> ReductionGraph:
    return _reduction(inst, scale=1, applicant_identity=0)


def build_mcamm_reduction(inst: Instance) -> ReductionGraph:
    """Same graph as the AUPCR reduction, rescaled to stay integral.

    Rank weights are multiplied by |A| + |P| and the applicant identity edges
    carry -1, which is the -1/(|A|+|P|) penalty after clearing denominators.
    """
    n = inst.n_applicants + inst.n_posts
    return _reduction(inst, scale=n, applicant_identity=-1)


def solve_reduction(red: ReductionGraph) -> Matching:
    """Maximum-weight perfect matching of G' (always exists via identity edges)."""
    return max_weight_matching(red.graph, require_perfect=True)


def solve_amm(inst: Instance) -> Matching:
    return _solve(build_amm_reduction(inst))


def solve_mcamm(inst: Instance) -> Matching:
    return _solve(build_mcamm_reduction(inst))


def _solve(red: ReductionGraph) -> Matching:
    return red.restrict_primary(solve_reduction(red))
