"""Exact maximum-weight bipartite matching over lexicographic integer vectors.

The solver is successive shortest augmenting paths with Dijkstra and vertex
potentials (the Hungarian method in its sparse form). Vector weights are packed
into single Python integers using a base wide enough that the packing is
order-preserving for every matching total, so the core only ever sees exact
scalar integers. Every result is checked against an LP dual certificate
before it is returned.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

from .instance import Matching

INF = float("inf")


class InfeasiblePerfect(Exception):
    """No perfect matching exists."""


class CertificateError(RuntimeError):
    """The dual certificate of a solve did not verify (solver bug)."""


@dataclass(frozen=True, order=True)
class WeightVector:
    components: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(int(c) for c in self.components))

    @classmethod
    def zero(cls, length: int) -> "WeightVector":
        return cls((0,) * length)

    @classmethod
    def unit(cls, length: int, index: int, value: int = 1) -> "WeightVector":
        comps = [0] * length
        comps[index] = value
        return cls(tuple(comps))

    def __len__(self) -> int:
        return len(self.components)

    def _check(self, other: "WeightVector"):
        if len(other) != len(self):
            raise ValueError("weight vectors differ in length")

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._check(other)
        return WeightVector(tuple(x + y for x, y in zip(self.components, other.components)))

    def __neg__(self) -> "WeightVector":
        return WeightVector(tuple(-x for x in self.components))

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return self + (-other)


Weight = Union[int, WeightVector]


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    left_count: int
    right_count: int
    edges: Tuple[Tuple[int, int, WeightVector], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.left_count < 0 or self.right_count < 0:
            raise ValueError("vertex counts must be non-negative")
        edges = []
        seen = set()
        dim = None
        for u, v, w in self.edges:
            if not isinstance(w, WeightVector):
                w = WeightVector((w,))
            if dim is None:
                dim = len(w)
            elif len(w) != dim:
                raise ValueError("all edge weights must share one vector length")
            if not (0 <= u < self.left_count and 0 <= v < self.right_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            edges.append((u, v, w))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def dim(self) -> int:
        return len(self.edges[0][2]) if self.edges else 1


def matching_weight(g: WeightedBipartiteGraph, m: Matching) -> WeightVector:
    lookup = {(u, v): w for u, v, w in g.edges}
    total = WeightVector.zero(g.dim)
    for pair in m.pairs:
        if pair not in lookup:
            raise ValueError(f"{pair} is not an edge of the graph")
        total = total + lookup[pair]
    return total


def _packing_base(g: WeightedBipartiteGraph) -> int:
    # Totals of any matching have components bounded by k*maxabs (k = max
    # matching size), so differences stay strictly inside (-base, base).
    maxabs = max((abs(c) for _, _, w in g.edges for c in w.components), default=0)
    k = min(g.left_count, g.right_count)
    return 2 * k * maxabs + 1 if maxabs else 2


def _pack(w: WeightVector, base: int) -> int:
    acc = 0
    for c in w.components:
        acc = acc * base + c
    return acc


def max_weight_matching(g: WeightedBipartiteGraph, require_perfect: bool = False) -> Matching:
    """Maximum-weight matching of ``g`` under lexicographic order.

    With ``require_perfect`` the optimum is taken over perfect matchings only
    (``left_count`` must equal ``right_count``); otherwise over all matchings,
    and only strictly profitable augmentations are applied, so zero-weight
    edges are left unmatched unless they come for free on a forced path.
    Ties are broken deterministically (lower left, then lower right index).
    """
    if require_perfect and g.left_count != g.right_count:
        raise ValueError("perfect mode needs left_count == right_count")
    base = _packing_base(g)
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(g.left_count)]
    for u, v, w in g.edges:
        adj[u].append((v, -_pack(w, base)))
    for row in adj:
        row.sort()
    match_l = solve_assignment(g.left_count, g.right_count, adj, require_perfect)
    return Matching.from_pairs((u, v) for u, v in enumerate(match_l) if v >= 0)


def solve_assignment(
    n_left: int,
    n_right: int,
    adj: Sequence[Sequence[Tuple[int, int]]],
    perfect: bool,
) -> List[int]:
    """Min-cost matching core on integer costs; returns the right partner per left vertex.

    ``adj[u]`` lists ``(v, cost)``. In perfect mode every left vertex is
    matched (raises :class:`InfeasiblePerfect` otherwise); in free mode paths
    are augmented only while their cost is negative.
    """
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    mcost = [0] * n_left  # cost of each left vertex's matched edge
    pl = [0] * n_left
    pr = [0] * n_right
    reached = [False] * n_right
    for row in adj:
        for v, c in row:
            if not reached[v] or c < pr[v]:
                pr[v] = c
                reached[v] = True

    if perfect:
        # greedy start on tight edges; feasibility of the duals is all that
        # perfect mode needs
        for u in range(n_left):
            for v, c in adj[u]:
                if match_r[v] < 0 and c == pr[v]:
                    match_l[u], match_r[v], mcost[u] = v, u, c
                    break
        pt = 0
    else:
        pt = min((pr[v] for v in range(n_right) if reached[v]), default=0)

    heappush, heappop = heapq.heappush, heapq.heappop
    while True:
        free = [u for u in range(n_left) if match_l[u] < 0]
        if not free:
            if not perfect and pt < 0:
                # nothing reachable from the source: every vertex takes the cap
                for pot in (pl, pr):
                    for i in range(len(pot)):
                        pot[i] -= pt
                pt = 0
            break
        dist_l = [INF] * n_left
        dist_r = [INF] * n_right
        prev_r = [-1] * n_right
        prev_c = [0] * n_right
        heap = []
        for u in free:
            d0 = 0 if perfect else -pl[u]
            dist_l[u] = d0
            heap.append((d0, 0, u))
        heapq.heapify(heap)
        best = INF
        end = -1
        while heap:
            d, side, x = heappop(heap)
            if d >= best:
                break
            if side == 0:
                if d > dist_l[x]:
                    continue
                base = d + pl[x]
                mv = match_l[x]
                for v, c in adj[x]:
                    if v == mv:
                        continue
                    nd = base + c - pr[v]
                    if nd < dist_r[v]:
                        dist_r[v] = nd
                        prev_r[v] = x
                        prev_c[v] = c
                        heappush(heap, (nd, 1, v))
            else:
                if d > dist_r[x]:
                    continue
                u2 = match_r[x]
                if u2 < 0:
                    cand = d if perfect else d + pr[x] - pt
                    if cand < best:
                        best, end = cand, x
                else:
                    nd = d + pr[x] - pl[u2] - mcost[u2]
                    if nd < dist_l[u2]:
                        dist_l[u2] = nd
                        heappush(heap, (nd, 0, u2))

        if end < 0:
            if perfect:
                raise InfeasiblePerfect("no perfect matching exists")
            cap = -pt if pt < 0 else 0
            _shift(pl, dist_l, cap)
            _shift(pr, dist_r, cap)
            pt = 0
            break
        if not perfect and best + pt >= 0:
            # most profitable path gains nothing; settle duals at pt = 0
            cap = -pt if pt < 0 else 0
            _shift(pl, dist_l, cap)
            _shift(pr, dist_r, cap)
            pt = 0
            break

        _shift(pl, dist_l, best)
        _shift(pr, dist_r, best)
        pt += best
        v = end
        while v >= 0:
            u = prev_r[v]
            nxt = match_l[u]
            match_l[u], match_r[v], mcost[u] = v, u, prev_c[v]
            v = nxt

    if not perfect and pt > 0:
        pt = 0
    _certify(n_left, n_right, adj, match_l, match_r, mcost, pl, pr, perfect)
    return match_l


def _shift(pot, dist, cap):
    for i, d in enumerate(dist):
        pot[i] += d if d < cap else cap


def _certify(n_left, n_right, adj, match_l, match_r, mcost, pl, pr, perfect):
    for u in range(n_left):
        mv = match_l[u]
        for v, c in adj[u]:
            red = c + pl[u] - pr[v]
            if red < 0 or (v == mv and red != 0):
                raise CertificateError(f"reduced cost violated on edge ({u}, {v})")
    if perfect:
        if any(v < 0 for v in match_l):
            raise CertificateError("matching is not perfect")
        return
    # free mode, sink potential 0: matched lefts >= 0 >= free lefts,
    # matched rights <= 0 <= free rights
    for u in range(n_left):
        if (match_l[u] >= 0) != (pl[u] >= 0) and pl[u] != 0:
            raise CertificateError(f"left potential sign violated at {u}")
    for v in range(n_right):
        if (match_r[v] >= 0) != (pr[v] <= 0) and pr[v] != 0:
            raise CertificateError(f"right potential sign violated at {v}")


def graph_from_edges(left_count: int, right_count: int, edges: Iterable) -> WeightedBipartiteGraph:
    return WeightedBipartiteGraph(left_count, right_count, tuple(edges))
