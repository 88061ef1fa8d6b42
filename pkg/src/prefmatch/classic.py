"""The benchmark matchers: Pareto optimal, rank-maximal, fair and popular."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .instance import Instance, Matching
from .metrics import best_response
from .wmatch import WeightedBipartiteGraph, WeightVector, max_weight_matching

log = logging.getLogger(__name__)

EXACT_UNPOPULAR_LIMIT = 8
DESCENT_ITERATIONS = 50


def hopcroft_karp(
    n_left: int,
    n_right: int,
    adj: Sequence[Sequence[int]],
    match_l: Optional[List[int]] = None,
    sources: Optional[Sequence[int]] = None,
) -> List[int]:
    """Maximum matching by Hopcroft-Karp, optionally warm-started.

    Only left vertices in ``sources`` may start augmenting paths, so a warm
    start never loses a matched vertex. Returns the partner list for the left side.
    """
    match_l = list(match_l) if match_l is not None else [-1] * n_left
    match_r = [-1] * n_right
    for u, v in enumerate(match_l):
        if v >= 0:
            match_r[v] = u
    sources = list(range(n_left)) if sources is None else list(sources)
    inf = n_left + n_right + 1

    while True:
        dist = [inf] * n_left
        q = deque()
        for u in sources:
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if not found:
            return match_l

        it = [0] * n_left

        def dfs(u):
            row = adj[u]
            while it[u] < len(row):
                v = row[it[u]]
                it[u] += 1
                w = match_r[v]
                if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in sources:
            if match_l[u] < 0:
                dfs(u)


def max_cardinality(inst: Instance) -> int:
    ml = hopcroft_karp(inst.n_applicants, inst.n_posts, inst.prefs)
    return sum(1 for v in ml if v >= 0)


def _to_matching(match_l) -> Matching:
    return Matching.from_pairs((a, p) for a, p in enumerate(match_l) if p >= 0)


# ---------------------------------------------------------------------------
# Pareto optimal


def _trade_in(inst: Instance, post_of: Dict[int, int]) -> None:
    taken = set(post_of.values())
    changed = True
    while changed:
        changed = False
        for a in sorted(post_of):
            cur = post_of[a]
            for p in inst.prefs[a]:
                if p == cur:
                    break
                if p not in taken:
                    taken.discard(cur)
                    taken.add(p)
                    post_of[a] = p
                    changed = True
                    break


def _top_trading_cycles(inst: Instance, post_of: Dict[int, int]) -> None:
    owner = {p: a for a, p in post_of.items()}
    done = set()
    ptr = {a: 0 for a in post_of}

    def target(a):
        # best post still held by an active applicant; the own post bounds the scan
        lst = inst.prefs[a]
        while True:
            p = lst[ptr[a]]
            o = owner.get(p)
            if o is not None and o not in done:
                return o
            ptr[a] += 1

    new_post = {}
    for start in sorted(post_of):
        if start in done:
            continue
        path: List[int] = []
        onpath: Dict[int, int] = {}
        a = start
        while True:
            if a in onpath:
                cut = onpath[a]
                cycle = path[cut:]
                for x in cycle:
                    new_post[x] = inst.prefs[x][ptr[x]]
                for x in cycle:
                    done.add(x)
                    del onpath[x]
                del path[cut:]
                if not path:
                    break
                a = path.pop()
                del onpath[a]
                continue
            onpath[a] = len(path)
            path.append(a)
            a = target(a)
    post_of.update(new_post)


def solve_pom(inst: Instance) -> Matching:
    """Maximum-cardinality Pareto optimal matching.

    Maximum matching first, then trade-ins (a matched applicant moves to a
    preferred free post) and finally top trading cycles among the matched
    applicants to remove every improving cyclic exchange.
    """
    ml = hopcroft_karp(inst.n_applicants, inst.n_posts, inst.prefs)
    post_of = {a: p for a, p in enumerate(ml) if p >= 0}
    _trade_in(inst, post_of)
    _top_trading_cycles(inst, post_of)
    return Matching.from_pairs(post_of.items())


# ---------------------------------------------------------------------------
# signature-optimal matchings through vector weights


def solve_rmm(inst: Instance) -> Matching:
    r = inst.max_rank
    if r == 0:
        return Matching()
    edges = [(a, p, WeightVector.unit(r, k - 1)) for a, p, k in inst.edges()]
    g = WeightedBipartiteGraph(inst.n_applicants, inst.n_posts, tuple(edges))
    return max_weight_matching(g)


def solve_fm(inst: Instance) -> Matching:
    # (1, -x_r, ..., -x_1): cardinality first, then fewest edges from the worst rank up
    r = inst.max_rank
    if r == 0:
        return Matching()
    edges = []
    for a, p, k in inst.edges():
        comps = [0] * (r + 1)
        comps[0] = 1
        comps[r - k + 1] = -1
        edges.append((a, p, WeightVector(tuple(comps))))
    g = WeightedBipartiteGraph(inst.n_applicants, inst.n_posts, tuple(edges))
    return max_weight_matching(g)


# ---------------------------------------------------------------------------
# popular


@dataclass(frozen=True)
class PopularResult:
    matching: Matching
    popular_exists: bool
    margin: int
    heuristic: bool = False


def popular_matching(inst: Instance) -> Optional[Matching]:
    """Maximum-cardinality popular matching, or None when none exists.

    Uses the f-post / s-post characterisation: with a private last-resort post
    appended to every list, a matching is popular iff every f-post is matched
    and every applicant holds its f-post or its s-post.
    """
    n_a = inst.n_applicants
    f = [lst[0] if lst else -1 for lst in inst.prefs]
    fposts = {p for p in f if p >= 0}
    s = []
    for lst in inst.prefs:
        s.append(next((p for p in lst if p not in fposts), -1))  # -1: last resort

    adj = [[x for x in (f[a], s[a]) if x >= 0] for a in range(n_a)]
    must = [a for a in range(n_a) if s[a] >= 0]
    ml = hopcroft_karp(n_a, inst.n_posts, adj, sources=must)
    if any(ml[a] < 0 for a in must):
        return None
    ml = hopcroft_karp(n_a, inst.n_posts, adj, match_l=ml)

    holder = {p: a for a, p in enumerate(ml) if p >= 0}
    for p in sorted(fposts):
        if p in holder:
            continue
        a = min(a for a in range(n_a) if f[a] == p)
        old = ml[a]
        if old >= 0:
            del holder[old]
        ml[a] = p
        holder[p] = a
    return _to_matching(ml)


def solve_popular(inst: Instance) -> PopularResult:
    m = popular_matching(inst)
    if m is not None:
        margin, _ = best_response(inst, m)
        return PopularResult(m, True, margin)
    m = least_unpopular_heuristic(inst)
    margin, _ = best_response(inst, m)
    return PopularResult(m, False, margin,
                         heuristic=inst.n_applicants > EXACT_UNPOPULAR_LIMIT)


def pareto_optimal_matchings(inst: Instance) -> List[Matching]:
    """Every Pareto optimal matching, as the outcomes of all serial dictatorships."""
    n_a = inst.n_applicants
    seen = set()
    out = set()
    stack = [((-2,) * n_a, frozenset())]
    while stack:
        assign, taken = stack.pop()
        if assign in seen:
            continue
        seen.add(assign)
        pending = [a for a in range(n_a) if assign[a] == -2]
        if not pending:
            out.add(assign)
            continue
        for a in pending:
            p = next((q for q in inst.prefs[a] if q not in taken), -1)
            nxt = assign[:a] + (p,) + assign[a + 1:]
            stack.append((nxt, taken | {p} if p >= 0 else taken))
    return [_to_matching(x) for x in sorted(out)]


def least_unpopular_heuristic(inst: Instance) -> Matching:
    """Matching with small unpopularity margin.

    Exact for small instances: the minimum margin is always attained by a
    Pareto optimal matching, and those are enumerated directly. Larger
    instances run best-response descent from the fair matching.
    """
    if inst.n_applicants <= EXACT_UNPOPULAR_LIMIT:
        best = None
        for m in pareto_optimal_matchings(inst):
            margin, _ = best_response(inst, m)
            if best is None or margin < best[0]:
                best = (margin, m)
        return best[1]

    cur = solve_fm(inst)
    cur_margin, witness = best_response(inst, cur)
    best = (cur_margin, cur)
    for _ in range(DESCENT_ITERATIONS):
        w_margin, w_witness = best_response(inst, witness)
        if w_margin >= cur_margin:
            break
        cur, cur_margin, witness = witness, w_margin, w_witness
        if cur_margin < best[0]:
            best = (cur_margin, cur)
    log.debug("descent settled at margin %d", best[0])
    return best[1]
