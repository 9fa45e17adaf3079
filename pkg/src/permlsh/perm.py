"""Permutations of {1..n}: arithmetic, cycle statistics, LCS, and similarities.

Permutations are stored in one-line notation: ``entries[i]`` is the image of
position ``i + 1``.  All public values are 1-based; internal position arrays
are 0-based.  Every object is an immutable value and every function is pure.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class DuplicateValueError(ValueError):
    """A value occurs more than once in a would-be permutation."""


@dataclass(frozen=True)
class Permutation:
    """An element of S_n in one-line notation.

    >>> p = Permutation((3, 5, 1, 2, 4))
    >>> p(1), p(2)
    (3, 5)
    >>> str(p)
    '3,5,1,2,4'
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1:
            raise ValueError("a permutation needs at least one element")
        seen = [False] * n
        for v in self.entries:
            if not isinstance(v, int) or not 1 <= v <= n:
                raise ValueError(f"value {v!r} outside 1..{n}")
            if seen[v - 1]:
                raise DuplicateValueError(f"value {v} appears twice")
            seen[v - 1] = True

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError(f"position {i} outside 1..{self.n}")
        return self.entries[i - 1]

    @cached_property
    def positions(self) -> tuple[int, ...]:
        """0-based index of each value: ``positions[v - 1]`` locates ``v``."""
        pos = [0] * self.n
        for i, v in enumerate(self.entries):
            pos[v - 1] = i
        return tuple(pos)

    def position(self, v: int) -> int:
        """1-based position of value ``v``, i.e. the inverse image of ``v``."""
        if not 1 <= v <= self.n:
            raise ValueError(f"value {v} outside 1..{self.n}")
        return self.positions[v - 1] + 1

    def inverse(self) -> Permutation:
        return Permutation(tuple(i + 1 for i in self.positions))

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        return compose(self, other)

    def __str__(self) -> str:
        return format_permutation(self)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation mapping i to p(q(i)): apply ``q`` first, then ``p``."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p.entries[v - 1] for v in q.entries))


def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    """Build a permutation of {1..n} from disjoint cycles; fixed points implied.

    >>> str(from_cycles(5, [(1, 3), (2, 5, 4)]))
    '3,5,1,2,4'
    """
    entries = list(range(1, n + 1))
    used: set[int] = set()
    for cycle in cycles:
        for x in cycle:
            if not 1 <= x <= n:
                raise ValueError(f"cycle element {x} outside 1..{n}")
            if x in used:
                raise ValueError(f"element {x} in two cycles")
            used.add(x)
        for i, x in enumerate(cycle):
            entries[x - 1] = cycle[(i + 1) % len(cycle)]
    return Permutation(tuple(entries))


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))


@dataclass(frozen=True)
class CycleStats:
    """Cycle decomposition of a permutation plus the derived statistics."""

    cycles: tuple[tuple[int, ...], ...]
    count: int
    fixed: int
    two_cycles: int
    support: int
    sign: int


def cycle_stats(p: Permutation) -> CycleStats:
    """Cycle decomposition (each cycle led by its smallest element) and stats.

    >>> cycle_stats(Permutation((3, 5, 1, 2, 4))).cycles
    ((1, 3), (2, 5, 4))
    """
    n = p.n
    seen = [False] * n
    cycles = []
    for start in range(1, n + 1):
        if seen[start - 1]:
            continue
        cycle = []
        x = start
        while not seen[x - 1]:
            seen[x - 1] = True
            cycle.append(x)
            x = p.entries[x - 1]
        cycles.append(tuple(cycle))
    count = len(cycles)
    fixed = sum(1 for c in cycles if len(c) == 1)
    two = sum(1 for c in cycles if len(c) == 2)
    return CycleStats(
        cycles=tuple(cycles),
        count=count,
        fixed=fixed,
        two_cycles=two,
        support=n - fixed,
        sign=-1 if (n - count) % 2 else 1,
    )


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in non-increasing order; the conjugacy-class label."""
    return tuple(sorted((len(c) for c in cycle_stats(p).cycles), reverse=True))


def cycle_count(p: Permutation) -> int:
    return cycle_stats(p).count


def sign(p: Permutation) -> int:
    return cycle_stats(p).sign


def is_derangement(p: Permutation) -> bool:
    return all(p.entries[i] != i + 1 for i in range(p.n))


def precedes(p: Permutation, a: int, b: int) -> bool:
    """True iff ``a`` occurs strictly before ``b`` in the one-line form."""
    return p.position(a) < p.position(b)


def _lis_length(seq: Sequence[int]) -> int:
    # Patience sorting: tails[k] = smallest possible tail of an increasing
    # subsequence of length k + 1.  Entries are distinct.
    tails: list[int] = []
    for x in seq:
        k = bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return len(tails)


def lcs(p: Permutation, q: Permutation) -> int:
    """Length of the longest common subsequence of the one-line forms.

    Scanning p's entries and replacing each value by its position in q turns
    the problem into longest increasing subsequence, solved in O(n log n).
    """
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    qpos = q.positions
    return _lis_length([qpos[v - 1] for v in p.entries])


def lcs_witness(p: Permutation, q: Permutation) -> tuple[int, ...]:
    """One longest common subsequence, as values in their shared order.

    Ties between equally long subsequences are broken by the patience-sorting
    back-pointers, so the result is deterministic.
    """
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    qpos = q.positions
    seq = [qpos[v - 1] for v in p.entries]
    tails: list[int] = []          # value of seq at the top of each pile
    tail_idx: list[int] = []       # index into seq of that value
    back: list[int] = [-1] * len(seq)
    for i, x in enumerate(seq):
        k = bisect_left(tails, x)
        if k > 0:
            back[i] = tail_idx[k - 1]
        if k == len(tails):
            tails.append(x)
            tail_idx.append(i)
        else:
            tails[k] = x
            tail_idx[k] = i
    out = []
    i = tail_idx[-1]
    while i >= 0:
        out.append(p.entries[i])
        i = back[i]
    return tuple(reversed(out))


def ulam_similarity(p: Permutation, q: Permutation) -> Fraction:
    """LCS(p, q) / n as an exact rational; 1 iff p equals q."""
    return Fraction(lcs(p, q), p.n)


def cayley_similarity(p: Permutation, q: Permutation) -> Fraction:
    """Cycle count of p^-1 q over n; complements the transposition distance."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return Fraction(cycle_count(compose(p.inverse(), q)), p.n)


def wreath(outer: Permutation, inner: Permutation) -> Permutation:
    """Block product on {1..n^2}: blocks ordered by ``outer``, each block
    internally ordered by ``inner``.

    >>> str(wreath(Permutation((2, 1)), Permutation((1, 2))))
    '3,4,1,2'
    """
    n = outer.n
    if inner.n != n:
        raise ValueError(f"size mismatch: {outer.n} vs {inner.n}")
    entries = []
    for block in outer.entries:
        base = (block - 1) * n
        entries.extend(base + v for v in inner.entries)
    return Permutation(tuple(entries))


_SEP = re.compile(r"[,\s]+")


def parse_permutation(text: str) -> Permutation:
    """Parse comma- or whitespace-separated 1-based integers.

    >>> parse_permutation("3 5 1 2 4") == parse_permutation("3,5,1,2,4")
    True
    """
    tokens = [t for t in _SEP.split(text.strip()) if t]
    if not tokens:
        raise ValueError("empty permutation text")
    try:
        values = tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise ValueError(f"non-integer token in {text!r}") from exc
    return Permutation(values)


def format_permutation(p: Permutation) -> str:
    """Canonical text form: comma-separated 1-based values."""
    return ",".join(str(v) for v in p.entries)
