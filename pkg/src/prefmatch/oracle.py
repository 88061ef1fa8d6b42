"""Exhaustive ground truth for small instances.

Everything here works on the full list of matchings, so it is only usable
for a handful of applicants. Nothing in this module calls the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Tuple

import numpy as np

from .aupcr import AupcrValue
from .instance import Instance, Matching, Signature

DEFAULT_CAP = 8
LATTICE_LIMIT = 20_000_000


class InstanceTooLarge(ValueError):
    pass


def _check_cap(inst: Instance, max_applicants: int) -> None:
    if inst.n_applicants > max_applicants:
        raise InstanceTooLarge(
            f"{inst.n_applicants} applicants exceeds the enumeration cap of {max_applicants}"
        )


def _assignments(inst: Instance) -> List[Tuple[int, ...]]:
    """Every matching as a per-applicant post tuple (-1 = unmatched)."""
    out = []
    n = inst.n_applicants
    cur = [-1] * n
    used = set()

    def rec(a):
        if a == n:
            out.append(tuple(cur))
            return
        cur[a] = -1
        rec(a + 1)
        for p in inst.prefs[a]:
            if p not in used:
                used.add(p)
                cur[a] = p
                rec(a + 1)
                used.discard(p)
        cur[a] = -1

    rec(0)
    return out


def enumerate_matchings(inst: Instance, max_applicants: int = DEFAULT_CAP) -> Iterator[Matching]:
    _check_cap(inst, max_applicants)
    for row in _assignments(inst):
        yield Matching.from_pairs((a, p) for a, p in enumerate(row) if p >= 0)


class _Table:
    """All matchings of an instance as integer arrays."""

    def __init__(self, inst: Instance, max_applicants: int = DEFAULT_CAP):
        _check_cap(inst, max_applicants)
        self.inst = inst
        self.rows = _assignments(inst)
        ranks = np.zeros((len(self.rows), inst.n_applicants), dtype=np.int16)
        for i, row in enumerate(self.rows):
            for a, p in enumerate(row):
                if p >= 0:
                    ranks[i, a] = inst.prefs[a].index(p) + 1
        self.ranks = ranks
        # badness: smaller is better, unmatched worst of all
        worst = inst.max_rank + 1
        self.worst = worst
        self.bad = np.where(ranks == 0, worst, ranks).astype(np.int16)
        self.card = (ranks > 0).sum(axis=1)
        r = inst.max_rank
        self.counts = np.stack([(ranks == k).sum(axis=1) for k in range(1, r + 1)], axis=1) \
            if r else np.zeros((len(self.rows), 0), dtype=np.int64)
        weights = np.array([inst.n_posts - k + 1 for k in range(1, r + 1)], dtype=np.int64)
        self.aupc = self.counts @ weights if r else np.zeros(len(self.rows), dtype=np.int64)
        self._below = None

    def badness_of(self, m: Matching) -> np.ndarray:
        ranks = self.inst.ranks_of(m)
        return np.array([self.worst if k is None else k for k in ranks], dtype=np.int16)

    def _below_counts(self):
        # below[b] = number of matchings whose badness is <= b componentwise;
        # badness vectors are distinct per matching, so b is Pareto optimal
        # exactly when below[b] == 1
        if self._below is None:
            shape = (self.worst,) * self.inst.n_applicants
            grid = np.zeros(shape, dtype=np.int32)
            grid[tuple((self.bad - 1).T)] = 1
            for axis in range(grid.ndim):
                np.cumsum(grid, axis=axis, out=grid)
            self._below = grid
        return self._below

    def _lattice_ok(self) -> bool:
        return self.worst ** self.inst.n_applicants <= LATTICE_LIMIT

    def dominated(self, b: np.ndarray) -> bool:
        if self._lattice_ok():
            return int(self._below_counts()[tuple(b - 1)]) > 1
        le = (self.bad <= b).all(axis=1)
        lt = (self.bad < b).any(axis=1)
        return bool((le & lt).any())

    def pareto_mask(self, block: int = 256) -> np.ndarray:
        if self._lattice_ok():
            return self._below_counts()[tuple((self.bad - 1).T)] == 1
        bad = self.bad
        out = np.zeros(len(bad), dtype=bool)
        for lo in range(0, len(bad), block):
            blk = bad[lo:lo + block]
            le = (bad[None, :, :] <= blk[:, None, :]).all(axis=2)
            lt = (bad[None, :, :] < blk[:, None, :]).any(axis=2)
            out[lo:lo + block] = ~(le & lt).any(axis=1)
        return out

    def margin(self, b: np.ndarray) -> int:
        # votes for each rival minus votes for b, maximised over all rivals
        return int(np.sign(b[None, :].astype(np.int32) - self.bad).sum(axis=1).max())

    def signature(self, i: int) -> Signature:
        return Signature(tuple(int(x) for x in self.counts[i]),
                         self.inst.n_applicants - int(self.card[i]))


@dataclass(frozen=True)
class OracleOptima:
    max_aupcr: AupcrValue
    mcamm_card: int
    rank_maximal_signature: Signature
    fair_signature: Signature
    max_cardinality: int
    min_margin: int
    popular_exists: bool
    pareto_set_check: Callable[[Matching], bool]
    margin_of: Callable[[Matching], int]
    n_matchings: int


def oracle_optima(inst: Instance, max_applicants: int = DEFAULT_CAP) -> OracleOptima:
    t = _Table(inst, max_applicants)
    n_a, n_p = inst.n_applicants, inst.n_posts

    best_aupc = int(t.aupc.max())
    mcamm_card = int(t.card[t.aupc == best_aupc].max())

    sigs = {tuple(int(x) for x in row) for row in t.counts}
    rm = max(sigs)
    max_card = int(t.card.max())
    fair = min((s for s in sigs if sum(s) == max_card), key=lambda s: s[::-1])

    # A Pareto improvement never increases the margin, so the minimum is
    # reached on the Pareto optimal matchings.
    po = np.flatnonzero(t.pareto_mask())
    min_margin = min(t.margin(t.bad[i]) for i in po)

    def pareto_set_check(m: Matching) -> bool:
        return not t.dominated(t.badness_of(m))

    return OracleOptima(
        max_aupcr=AupcrValue(best_aupc, n_a * n_p),
        mcamm_card=mcamm_card,
        rank_maximal_signature=Signature(rm, n_a - sum(rm)),
        fair_signature=Signature(fair, n_a - max_card),
        max_cardinality=max_card,
        min_margin=min_margin,
        popular_exists=min_margin <= 0,
        pareto_set_check=pareto_set_check,
        margin_of=lambda m: t.margin(t.badness_of(m)),
        n_matchings=len(t.rows),
    )


def oracle_margin(inst: Instance, m: Matching, max_applicants: int = DEFAULT_CAP) -> int:
    t = _Table(inst, max_applicants)
    return t.margin(t.badness_of(m))


def oracle_aupc_values(inst: Instance, max_applicants: int = DEFAULT_CAP) -> np.ndarray:
    """AUPC of every matching, in enumeration order."""
    return _Table(inst, max_applicants).aupc
