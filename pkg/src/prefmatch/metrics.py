"""Per-matching evaluation metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .aupcr import AupcrValue, compute_aupcr
from .instance import Instance, Matching
from .wmatch import solve_assignment


def best_response(inst: Instance, m: Matching) -> Tuple[int, Matching]:
    """Largest vote margin any matching achieves against ``m``, and one such matching.

    Applicant ``a`` scores +1 for a post it prefers to its current one, 0 for
    its current post and -1 for anything worse (staying unmatched counts as
    worse when ``a`` is matched, neutral otherwise). Scores are shifted by +1
    for matched applicants so that "stay unmatched" is always 0, turning this
    into a plain non-perfect max-weight matching.
    """
    ranks = inst.ranks_of(m)
    adj = []
    for a, lst in enumerate(inst.prefs):
        cur = ranks[a]
        row = []
        for k, p in enumerate(lst, 1):
            if cur is None:
                w = 1
            else:
                w = 2 if k < cur else 1 if k == cur else 0
            if w > 0:
                row.append((p, -w))
        adj.append(row)
    match_l = solve_assignment(inst.n_applicants, inst.n_posts, adj, perfect=False)
    witness = Matching.from_pairs((a, p) for a, p in enumerate(match_l) if p >= 0)
    total = 0
    for a, p in witness.pairs:
        cur = ranks[a]
        k = inst.rank(a, p)
        total += 1 if cur is None else 2 if k < cur else 1 if k == cur else 0
    return total - len(m), witness


def unpopularity_margin(inst: Instance, m: Matching) -> int:
    """max over M'' of p(M'', m) - p(m, M''); zero exactly when ``m`` is popular."""
    return best_response(inst, m)[0]


@dataclass(frozen=True)
class MetricsRecord:
    cardinality: int
    unpopularity: Fraction
    rank1: int
    aupcr: AupcrValue
    rhpl: int
    avg_rank: Optional[Fraction]
    worst_rank: Optional[int]
    wall_time_ms: float = 0.0
    heuristic_flag: bool = False

    def as_row(self) -> dict:
        return {
            "cardinality": self.cardinality,
            "unpopularity": fmt_decimal(self.unpopularity),
            "rank1": self.rank1,
            "aupcr": fmt_decimal(self.aupcr.as_fraction()),
            "rhpl": self.rhpl,
            "avg_rank": "" if self.avg_rank is None else fmt_decimal(self.avg_rank),
            "worst_rank": "" if self.worst_rank is None else self.worst_rank,
            "wall_time_ms": f"{self.wall_time_ms:.3f}",
            "heuristic_flag": int(self.heuristic_flag),
        }

    def as_json(self) -> dict:
        return {
            "cardinality": self.cardinality,
            "unpopularity": str(self.unpopularity),
            "rank1": self.rank1,
            "aupcr": str(self.aupcr),
            "rhpl": self.rhpl,
            "avg_rank": None if self.avg_rank is None else str(self.avg_rank),
            "worst_rank": self.worst_rank,
            "wall_time_ms": self.wall_time_ms,
            "heuristic_flag": self.heuristic_flag,
        }


def fmt_decimal(x: Fraction, digits: int = 6) -> str:
    scaled = round(Fraction(x) * 10**digits)  # round-half-even, exact
    sign = "-" if scaled < 0 else ""
    q, r = divmod(abs(scaled), 10**digits)
    return f"{sign}{q}.{r:0{digits}d}"


def evaluate_all(
    inst: Instance, m: Matching, wall_time_ms: float = 0.0, heuristic: bool = False
) -> MetricsRecord:
    ranks = inst.ranks_of(m)
    matched = [(a, k) for a, k in enumerate(ranks) if k is not None]
    rhpl = sum(1 for a, k in matched if k <= math.ceil(len(inst.prefs[a]) / 2))
    return MetricsRecord(
        cardinality=len(matched),
        unpopularity=Fraction(unpopularity_margin(inst, m), inst.n_applicants),
        rank1=sum(1 for _, k in matched if k == 1),
        aupcr=compute_aupcr(inst, m),
        rhpl=rhpl,
        avg_rank=Fraction(sum(k for _, k in matched), len(matched)) if matched else None,
        worst_rank=max((k for _, k in matched), default=None),
        wall_time_ms=wall_time_ms,
        heuristic_flag=heuristic,
    )
