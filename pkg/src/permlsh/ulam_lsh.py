"""The record-maxima hash family for the Ulam similarity.

A hash function is parameterized by a reference permutation ``tau``, a start
element ``z``, and a probe element ``a``: it maps a permutation to the shared
token ``ONE`` when ``a`` is a new tau-maximum while scanning the one-line form
from ``z``, and to the permutation itself otherwise.  Under a uniform choice
of (tau, z, a) the collision probability of two distinct permutations is
sandwiched between 1/n and LCS/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations as _all_permutations
from typing import Union

import numpy as np

from .perm import Permutation, lcs


class _OneToken:
    """The shared hash bucket for record hits; equal only to itself."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "ONE"


ONE = _OneToken()

HashOutput = Union[_OneToken, Permutation]

BRUTE_MAX_N = 8  # full family enumeration costs n! * n^2 evaluations


@dataclass(frozen=True)
class HashDescriptor:
    """The triple (tau, z, a) selecting one function of the family."""

    tau: Permutation
    z: int
    a: int

    def __post_init__(self) -> None:
        n = self.tau.n
        if not 1 <= self.z <= n:
            raise ValueError(f"z={self.z} outside 1..{n}")
        if not 1 <= self.a <= n:
            raise ValueError(f"a={self.a} outside 1..{n}")


def record_set(tau: Permutation, z: int, p: Permutation) -> tuple[int, ...]:
    """New tau-maxima while scanning p's one-line form starting at ``z``.

    The result always contains ``z``, is ordered by position in ``p``, and is
    simultaneously strictly increasing in tau-order.
    """
    n = tau.n
    if p.n != n:
        raise ValueError(f"size mismatch: {tau.n} vs {p.n}")
    if not 1 <= z <= n:
        raise ValueError(f"z={z} outside 1..{n}")
    rank = tau.positions  # tau-order of each value
    out = [z]
    best = rank[z - 1]
    for i in range(p.positions[z - 1] + 1, n):
        v = p.entries[i]
        if rank[v - 1] > best:
            best = rank[v - 1]
            out.append(v)
    return tuple(out)


def hash_eval(d: HashDescriptor, p: Permutation) -> HashOutput:
    """ONE when d.a is a record for p, otherwise p itself."""
    if d.tau.n != p.n:
        raise ValueError(f"size mismatch: {d.tau.n} vs {p.n}")
    return ONE if d.a in record_set(d.tau, d.z, p) else p


def brute_collision(p: Permutation, q: Permutation) -> Fraction:
    """Exact collision probability by evaluating every (tau, z, a) function.

    Guarded at n <= 8: the family has n! * n^2 members.
    """
    n = p.n
    if q.n != n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    if n > BRUTE_MAX_N:
        raise ValueError(f"n={n} too large for full enumeration (max {BRUTE_MAX_N})")
    hits = 0
    for tau_entries in _all_permutations(range(1, n + 1)):
        tau = Permutation(tau_entries)
        for z in range(1, n + 1):
            for a in range(1, n + 1):
                d = HashDescriptor(tau, z, a)
                hits += hash_eval(d, p) == hash_eval(d, q)
    return Fraction(hits, math.factorial(n) * n * n)


def exact_collision(p: Permutation, q: Permutation) -> Fraction:
    """Exact collision probability via interval unions, in O(n^3) bit ops.

    For p != q a collision happens exactly when the probe element tops, under
    tau, the union of the two intervals it spans with the start element, and a
    uniform tau makes that event 1/|union|.  Summing over start and probe
    elements gives

        P = (1/n^2) * sum_{z, j reachable from z in both} 1 / W(z, j)

    with W(z, j) the size of the union of the two closed intervals.  The
    union sizes are tallied with vectorized dominance counts and the final
    sum is exact rational arithmetic over the W histogram.
    """
    n = p.n
    if q.n != n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    if p == q:
        return Fraction(1)
    pos_p = np.array(p.positions, dtype=np.int64)
    pos_q = np.array(q.positions, dtype=np.int64)
    counts = np.zeros(2 * n + 1, dtype=np.int64)
    for z0 in range(n):
        a = pos_p - pos_p[z0]
        b = pos_q - pos_q[z0]
        mask = (a >= 0) & (b >= 0)
        aj = a[mask]
        bj = b[mask]
        inside = (aj[None, :] <= aj[:, None]) & (bj[None, :] <= bj[:, None])
        union = aj + bj + 2 - inside.sum(axis=1)
        counts += np.bincount(union, minlength=2 * n + 1)
    total = sum(
        Fraction(int(c), int(w)) for w, c in enumerate(counts) if w and c
    )
    return total / (n * n)


@dataclass(frozen=True)
class CollisionEstimate:
    """Monte-Carlo estimate of a collision probability."""

    value: float
    samples: int
    stderr: float
    seed: int


def mc_collision(p: Permutation, q: Permutation, samples: int, seed: int) -> CollisionEstimate:
    """Unbiased sampled collision probability, deterministic given ``seed``.

    Draws (tau, z, a) with a Philox counter-based generator; tau via the
    generator's per-row Fisher-Yates shuffle.  Batches are vectorized: for
    p != q the hashes collide iff ``a`` is simultaneously a running
    tau-maximum from ``z`` in both one-line forms.
    """
    n = p.n
    if q.n != n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if p == q:
        return CollisionEstimate(1.0, samples, 0.0, seed)
    rng = np.random.Generator(np.random.Philox(seed))
    p0 = np.array(p.entries, dtype=np.int64) - 1
    q0 = np.array(q.entries, dtype=np.int64) - 1
    pos_p = np.array(p.positions, dtype=np.int64)
    pos_q = np.array(q.positions, dtype=np.int64)
    hits = 0
    done = 0
    batch_cap = max(1, (1 << 16) // n)
    while done < samples:
        b = min(batch_cap, samples - done)
        taus = rng.permuted(np.tile(np.arange(n), (b, 1)), axis=1)
        zs = rng.integers(0, n, size=b)
        avs = rng.integers(0, n, size=b)
        rank = np.argsort(taus, axis=1)  # rank[s, v] = position of v in tau_s
        rows = np.arange(b)[:, None]
        hits += int(
            (
                _record_hits(rank, p0, pos_p, zs, avs, rows)
                & _record_hits(rank, q0, pos_q, zs, avs, rows)
            ).sum()
        )
        done += b
    value = hits / samples
    stderr = math.sqrt(value * (1.0 - value) / samples)
    return CollisionEstimate(value, samples, stderr, seed)


def _record_hits(rank, one_line0, pos, zs, avs, rows):
    # a is a record iff it sits at or after z in the scan order and its rank
    # equals the running maximum of ranks over the window [pos(z), pos(a)].
    seq = rank[rows, one_line0[None, :]]
    zpos = pos[zs][:, None]
    windowed = np.where(np.arange(seq.shape[1])[None, :] >= zpos, seq, -1)
    running = np.maximum.accumulate(windowed, axis=1)
    apos = pos[avs]
    at_or_after = apos >= zpos[:, 0]
    a_rank = rank[np.arange(len(avs)), avs]
    return at_or_after & (running[np.arange(len(avs)), apos] == a_rank)


def interval_union_sizes(
    p: Permutation, q: Permutation, common: tuple[int, ...] | list[int]
) -> dict[tuple[int, int], int]:
    """Sizes of the pairwise closed-interval unions along a common subsequence.

    ``common`` must list values appearing in the same order in both p and q
    (typically an LCS witness), length >= 2.  Returns W keyed by 1-based
    (i, j) with i < j, where W[i, j] counts the elements lying between
    common[i] and common[j] in p or in q.
    """
    n = p.n
    if q.n != n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    c = tuple(common)
    if len(c) < 2:
        raise ValueError("common subsequence must have length >= 2")
    ppos = [p.position(v) - 1 for v in c]
    qpos = [q.position(v) - 1 for v in c]
    if ppos != sorted(ppos) or qpos != sorted(qpos) or len(set(c)) != len(c):
        raise ValueError("not a common subsequence of both permutations")
    out: dict[tuple[int, int], int] = {}
    for i in range(len(c) - 1):
        for j in range(i + 1, len(c)):
            in_p = set(p.entries[ppos[i] : ppos[j] + 1])
            in_q = set(q.entries[qpos[i] : qpos[j] + 1])
            out[(i + 1, j + 1)] = len(in_p | in_q)
    return out


@dataclass(frozen=True)
class BoundCheck:
    name: str
    applicable: bool
    passed: bool
    value: float
    bound: float
    slack: float

    @property
    def ok(self) -> bool:
        return self.passed or not self.applicable


@dataclass(frozen=True)
class KernelBoundsReport:
    n: int
    lcs: int
    exact: bool
    checks: tuple[BoundCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.ok for c in self.checks)


def verify_kernel_bounds(
    p: Permutation,
    q: Permutation,
    collision: Fraction | CollisionEstimate,
) -> KernelBoundsReport:
    """Check a collision probability against the sandwich and the two
    logarithmic lower bounds.

    * collision_lower / collision_upper: 1/n <= P <= LCS/n,
    * lcs_log_lower: P >= L^2 ln L / (32 n^3) once L >= 4,
    * similarity_lower: P >= (sqrt(ln n) / (64 n)) * LCS/n for n >= 3.

    Accepts an exact rational or a Monte-Carlo estimate; the report records
    which it was.  Rational bounds are compared exactly on the exact path;
    the logarithmic bounds are compared in floating point.
    """
    n = p.n
    if q.n != n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    exact = not isinstance(collision, CollisionEstimate)
    value: Fraction | float = collision if exact else collision.value
    length = lcs(p, q)

    def check(name, applicable, bound, lower=True):
        if not applicable:
            return BoundCheck(name, False, True, float(value), 0.0, 0.0)
        if isinstance(bound, Fraction) and isinstance(value, Fraction):
            passed = value >= bound if lower else value <= bound
        else:
            passed = float(value) >= float(bound) if lower else float(value) <= float(bound)
        slack = float(value) - float(bound) if lower else float(bound) - float(value)
        return BoundCheck(name, True, bool(passed), float(value), float(bound), slack)

    checks = [
        check("collision_lower", True, Fraction(1, n)),
        check("collision_upper", True, Fraction(length, n), lower=False),
        check(
            "lcs_log_lower",
            length >= 4,
            length * length * math.log(length) / (32 * n**3) if length >= 4 else 0.0,
        ),
        check(
            "similarity_lower",
            n >= 3,
            math.sqrt(math.log(n)) * length / (64 * n * n) if n >= 3 else 0.0,
        ),
    ]
    return KernelBoundsReport(n=n, lcs=length, exact=exact, checks=tuple(checks))
