"""Instances, matchings and signatures for one-sided preference matching.

Applicants and posts are 0-based in memory. The text formats are 1-based:

    # instance file
    4 4
    1: 1
    2: 1 2
    3: 2 1 3
    4: 3 1 4

    # matching file
    1 1
    3 2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Tuple

Pair = Tuple[int, int]


class ParseError(ValueError):
    """Malformed instance or matching text. ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InvalidMatching(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    n_applicants: int
    n_posts: int
    prefs: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_applicants < 1 or self.n_posts < 1:
            raise ValueError("instance needs at least one applicant and one post")
        prefs = tuple(tuple(int(p) for p in lst) for lst in self.prefs)
        object.__setattr__(self, "prefs", prefs)
        if len(prefs) != self.n_applicants:
            raise ValueError(
                f"expected {self.n_applicants} preference lists, got {len(prefs)}"
            )
        for a, lst in enumerate(prefs):
            if len(set(lst)) != len(lst):
                raise ValueError(f"applicant {a + 1}: duplicate post in list")
            for p in lst:
                if not 0 <= p < self.n_posts:
                    raise ValueError(f"applicant {a + 1}: post {p + 1} out of range")

    @property
    def max_rank(self) -> int:
        return max((len(lst) for lst in self.prefs), default=0)

    @property
    def n_edges(self) -> int:
        return sum(len(lst) for lst in self.prefs)

    @cached_property
    def _ranks(self) -> Tuple[Mapping[int, int], ...]:
        return tuple({p: k for k, p in enumerate(lst, 1)} for lst in self.prefs)

    def rank(self, applicant: int, post: int) -> Optional[int]:
        """1-based rank of ``post`` on the applicant's list, None if unlisted."""
        return self._ranks[applicant].get(post)

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (applicant, post, rank) triples."""
        for a, lst in enumerate(self.prefs):
            for k, p in enumerate(lst, 1):
                yield a, p, k

    def check_matching(self, m: "Matching") -> None:
        for a, p in m.pairs:
            if not 0 <= a < self.n_applicants:
                raise InvalidMatching(f"applicant {a + 1} out of range")
            if self.rank(a, p) is None:
                raise InvalidMatching(f"({a + 1}, {p + 1}) is not an edge")

    def ranks_of(self, m: "Matching") -> list:
        """Per-applicant rank under ``m`` (None when unmatched)."""
        self.check_matching(m)
        out = [None] * self.n_applicants
        for a, p in m.pairs:
            out[a] = self.rank(a, p)
        return out


@dataclass(frozen=True)
class Matching:
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        pairs = frozenset((int(a), int(p)) for a, p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        left = [a for a, _ in pairs]
        right = [p for _, p in pairs]
        if len(set(left)) != len(left):
            raise InvalidMatching("an applicant is matched twice")
        if len(set(right)) != len(right):
            raise InvalidMatching("a post is matched twice")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair]) -> "Matching":
        return cls(frozenset(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    @cached_property
    def post_of(self) -> Mapping[int, int]:
        return dict(self.pairs)

    @cached_property
    def applicant_of(self) -> Mapping[int, int]:
        return {p: a for a, p in self.pairs}


@dataclass(frozen=True)
class Signature:
    """Matched counts per rank (rank 1 first) plus the unmatched count."""

    per_rank: Tuple[int, ...]
    unmatched: int

    def __post_init__(self):
        object.__setattr__(self, "per_rank", tuple(self.per_rank))
        if self.unmatched < 0 or any(x < 0 for x in self.per_rank):
            raise ValueError("signature counts must be non-negative")

    @property
    def cardinality(self) -> int:
        return sum(self.per_rank)

    def padded(self, r: int) -> "Signature":
        if r < len(self.per_rank):
            if any(self.per_rank[r:]):
                raise ValueError("cannot truncate non-zero signature entries")
            return Signature(self.per_rank[:r], self.unmatched)
        return Signature(self.per_rank + (0,) * (r - len(self.per_rank)), self.unmatched)

    def as_tuple(self) -> Tuple[int, ...]:
        return self.per_rank + (self.unmatched,)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.as_tuple())) + ")"


def signature_of(inst: Instance, m: Matching) -> Signature:
    counts = [0] * inst.max_rank
    for k in inst.ranks_of(m):
        if k is not None:
            counts[k - 1] += 1
    return Signature(tuple(counts), inst.n_applicants - len(m))


def _cmp(x, y) -> int:
    return (x > y) - (x < y)


def _common(s1: Signature, s2: Signature):
    r = max(len(s1.per_rank), len(s2.per_rank))
    return s1.padded(r), s2.padded(r)


def compare_rank_maximal(s1: Signature, s2: Signature) -> int:
    """Return 1 if ``s1`` is more rank-maximal than ``s2``, -1 if less, 0 if tied.

    Scans ranks from 1 upward; more edges at the first differing rank wins.
    The unmatched count does not take part.
    """
    s1, s2 = _common(s1, s2)
    return _cmp(s1.per_rank, s2.per_rank)


def compare_fair(s1: Signature, s2: Signature) -> int:
    """Return 1 if ``s1`` is fairer than ``s2``, -1 if less fair, 0 if tied.

    Scans from the unmatched slot down to rank 1; fewer applicants at the first
    differing position wins. Cardinality precedence is the caller's job.
    """
    s1, s2 = _common(s1, s2)
    return _cmp(s2.as_tuple()[::-1], s1.as_tuple()[::-1])


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers in {what}", lineno) from None


def parse_instance(text) -> Instance:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty instance file", 1) from None
    head = _ints(header.split(), lineno, "header")
    if len(head) != 2 or head[0] < 1 or head[1] < 1:
        raise ParseError("header must be '<n_applicants> <n_posts>' (both positive)", lineno)
    n_a, n_p = head

    prefs = {}
    for lineno, line in lines:
        if ":" not in line:
            raise ParseError("expected '<applicant_id>: <post_id> ...'", lineno)
        left, _, right = line.partition(":")
        ids = _ints(left.split(), lineno, "applicant id")
        if len(ids) != 1:
            raise ParseError("expected exactly one applicant id before ':'", lineno)
        a = ids[0]
        if not 1 <= a <= n_a:
            raise ParseError(f"applicant id {a} out of range 1..{n_a}", lineno)
        if a in prefs:
            raise ParseError(f"duplicate line for applicant {a}", lineno)
        posts = _ints(right.split(), lineno, "preference list")
        seen = set()
        for p in posts:
            if not 1 <= p <= n_p:
                raise ParseError(f"post id {p} out of range 1..{n_p}", lineno)
            if p in seen:
                raise ParseError(f"duplicate post {p} in list of applicant {a}", lineno)
            seen.add(p)
        prefs[a] = tuple(p - 1 for p in posts)

    missing = [a for a in range(1, n_a + 1) if a not in prefs]
    if missing:
        raise ParseError(f"missing preference line for applicant {missing[0]}")
    return Instance(n_a, n_p, tuple(prefs[a] for a in range(1, n_a + 1)))


def serialize_instance(inst: Instance) -> str:
    out = [f"{inst.n_applicants} {inst.n_posts}"]
    for a, lst in enumerate(inst.prefs, 1):
        out.append(f"{a}:" + "".join(f" {p + 1}" for p in lst))
    return "\n".join(out) + "\n"


def parse_matching(text, inst: Optional[Instance] = None) -> Matching:
    pairs = []
    seen_a, seen_p = set(), set()
    for lineno, line in _content_lines(text):
        vals = _ints(line.split(), lineno, "matching pair")
        if len(vals) != 2:
            raise ParseError("expected '<applicant_id> <post_id>'", lineno)
        a, p = vals[0] - 1, vals[1] - 1
        if a < 0 or p < 0:
            raise ParseError("ids are 1-based", lineno)
        if a in seen_a or p in seen_p:
            raise ParseError("endpoint matched twice", lineno)
        if inst is not None and (a >= inst.n_applicants or inst.rank(a, p) is None):
            raise ParseError(f"({a + 1}, {p + 1}) is not an edge of the instance", lineno)
        seen_a.add(a)
        seen_p.add(p)
        pairs.append((a, p))
    return Matching.from_pairs(pairs)


def serialize_matching(m: Matching) -> str:
    return "".join(f"{a + 1} {p + 1}\n" for a, p in m)
