"""Distortion lower-bound certificates for the Ulam similarity.

A witness is a pair of disjoint permutation lists A, B with identical
internal similarity matrices, together with non-negative symmetric matrices
U, V whose block matrix [[U, -V], [-V, U]] is PSD.  Its value
tr(V M_AB) / tr(U M_A) lower-bounds the distortion any collision kernel can
achieve on A union B, because such a kernel is PSD and entrywise at most the
similarity.  Wreath-product squaring amplifies a witness quadratically in
both the universe size and (multiplicatively) its value.

Everything on the certificate path is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .kernels import rational_psd_certificate
from .perm import Permutation, compose, parse_permutation, ulam_similarity, wreath

Matrix = tuple[tuple[Fraction, ...], ...]

# Full LCS re-derivation of an amplified similarity matrix is only affordable
# up to roughly this much work (entries times permutation size); above it a
# deterministic grid of entries is spot-checked instead.
_FULL_RECHECK_WORK = 500_000


def _freeze(rows: Sequence[Sequence[Fraction | int]]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise Ulam similarities between two permutation lists."""

    rows: tuple[Permutation, ...]
    cols: tuple[Permutation, ...]
    values: Matrix

    def __post_init__(self) -> None:
        if len(self.values) != len(self.rows) or any(
            len(r) != len(self.cols) for r in self.values
        ):
            raise ValueError("matrix shape does not match element lists")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))


def similarity_matrix(
    a: Sequence[Permutation], b: Sequence[Permutation]
) -> SimilarityMatrix:
    """Exact similarity matrix computed entry by entry from the LCS."""
    a = tuple(a)
    b = tuple(b)
    ns = {p.n for p in a} | {p.n for p in b}
    if len(ns) != 1:
        raise ValueError("all permutations must share one size")
    values = tuple(tuple(ulam_similarity(p, q) for q in b) for p in a)
    return SimilarityMatrix(a, b, values)


def kron(x: Sequence[Sequence], y: Sequence[Sequence]) -> Matrix:
    """Kronecker product of two matrices given as nested sequences."""
    ry, cy = len(y), len(y[0])
    return tuple(
        tuple(x[i][j] * y[k][l] for j in range(len(x[0])) for l in range(cy))
        for i in range(len(x))
        for k in range(ry)
    )


def trace_product(x: Sequence[Sequence], y: Sequence[Sequence]) -> Fraction:
    """tr(X Y) without forming the product matrix."""
    if len(y) != len(x[0]) or len(x) != len(y[0]):
        raise ValueError("shapes do not allow a square product")
    return sum(
        x[i][j] * y[j][i] for i in range(len(x)) for j in range(len(x[0]))
    )


class Witness:
    """Candidate certificate (A, B, U, V); validity is decided by
    :func:`witness_verify`, not by construction.

    Similarity matrices are derived from the LCS on first use.  Amplification
    injects product-structured matrices instead (see :func:`amplify`), since
    re-deriving them from scratch grows quartically.
    """

    def __init__(
        self,
        a: Sequence[Permutation],
        b: Sequence[Permutation],
        u: Sequence[Sequence[Fraction | int]],
        v: Sequence[Sequence[Fraction | int]],
        similarity: tuple[SimilarityMatrix, SimilarityMatrix, SimilarityMatrix] | None = None,
    ) -> None:
        self.a = tuple(a)
        self.b = tuple(b)
        if not self.a or len(self.a) != len(self.b):
            raise ValueError("A and B must be non-empty lists of equal length")
        ns = {p.n for p in self.a} | {p.n for p in self.b}
        if len(ns) != 1:
            raise ValueError("all permutations must share one size")
        self.n = ns.pop()
        m = len(self.a)
        self.u = _freeze(u)
        self.v = _freeze(v)
        if len(self.u) != m or any(len(r) != m for r in self.u):
            raise ValueError("U must be square of side |A|")
        if len(self.v) != m or any(len(r) != m for r in self.v):
            raise ValueError("V must be square of side |A|")
        self._similarity = similarity

    @property
    def size(self) -> int:
        return len(self.a)

    def _matrices(self) -> tuple[SimilarityMatrix, SimilarityMatrix, SimilarityMatrix]:
        if self._similarity is None:
            self._similarity = (
                similarity_matrix(self.a, self.a),
                similarity_matrix(self.b, self.b),
                similarity_matrix(self.a, self.b),
            )
        return self._similarity

    @property
    def m_a(self) -> SimilarityMatrix:
        return self._matrices()[0]

    @property
    def m_b(self) -> SimilarityMatrix:
        return self._matrices()[1]

    @property
    def m_ab(self) -> SimilarityMatrix:
        return self._matrices()[2]

    def block_certificate(self) -> Matrix:
        """The block matrix [[U, -V], [-V, U]] whose PSD-ness certifies."""
        m = self.size
        top = tuple(self.u[i] + tuple(-x for x in self.v[i]) for i in range(m))
        bottom = tuple(tuple(-x for x in self.v[i]) + self.u[i] for i in range(m))
        return top + bottom

    def __eq__(self, other) -> bool:
        if not isinstance(other, Witness):
            return NotImplemented
        return (self.a, self.b, self.u, self.v) == (other.a, other.b, other.u, other.v)


@dataclass(frozen=True)
class ClauseCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class WitnessReport:
    clauses: tuple[ClauseCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failed(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.clauses if not c.passed)


def witness_verify(w: Witness) -> WitnessReport:
    """Check every witness clause with exact arithmetic; PASS/FAIL each.

    Clauses: A and B disjoint; equal internal similarity matrices; U and V
    symmetric and entrywise non-negative; the block certificate PSD (exact
    LDL, any size); tr(U M_A) nonzero.
    """
    clauses = []
    disjoint = not (set(w.a) & set(w.b))
    unique = len(set(w.a)) == len(w.a) and len(set(w.b)) == len(w.b)
    clauses.append(
        ClauseCheck("disjoint_lists", disjoint and unique,
                    "A and B share or repeat permutations" if not (disjoint and unique) else "")
    )
    same = w.m_a.values == w.m_b.values
    clauses.append(ClauseCheck("equal_internal_similarity", same))
    sym_u = all(
        w.u[i][j] == w.u[j][i] for i in range(w.size) for j in range(i + 1, w.size)
    )
    sym_v = all(
        w.v[i][j] == w.v[j][i] for i in range(w.size) for j in range(i + 1, w.size)
    )
    clauses.append(ClauseCheck("u_v_symmetric", sym_u and sym_v))
    nonneg = all(x >= 0 for row in w.u for x in row) and all(
        x >= 0 for row in w.v for x in row
    )
    clauses.append(ClauseCheck("u_v_nonnegative", nonneg))
    psd = rational_psd_certificate(w.block_certificate())
    clauses.append(ClauseCheck("block_certificate_psd", psd))
    denom = trace_product(w.u, w.m_a.values)
    clauses.append(
        ClauseCheck("normalizer_nonzero", denom != 0, f"tr(U M_A) = {denom}")
    )
    return WitnessReport(tuple(clauses))


def witness_value(w: Witness) -> Fraction:
    """tr(V M_AB) / tr(U M_A); a distortion lower bound for valid witnesses."""
    denom = trace_product(w.u, w.m_a.values)
    if denom == 0:
        raise ZeroDivisionError("tr(U M_A) is zero")
    return trace_product(w.v, w.m_ab.values) / denom


_BASE_A = ("1,2,3,4,5,6,7,8", "4,3,2,1,8,7,6,5", "6,5,8,7,2,1,4,3", "7,8,5,6,3,4,1,2")
_BASE_RELABEL = "2,7,6,3,4,5,8,1"


def base_witness() -> Witness:
    """The built-in size-8 certificate of value 9/7.

    B is A relabeled by a fixed permutation (verified on construction, and
    forcing the two internal similarity matrices to agree); U = V = all-ones.
    """
    a = tuple(parse_permutation(s) for s in _BASE_A)
    tau = parse_permutation(_BASE_RELABEL)
    b = tuple(compose(tau, p) for p in a)
    ones = tuple(tuple(Fraction(1) for _ in a) for _ in a)
    w = Witness(a, b, ones, ones)
    if w.m_a.values != w.m_b.values:
        raise AssertionError("relabeled copy changed the internal similarities")
    return w


def _spot_indices(m: int, points: int = 6) -> list[int]:
    if m <= points:
        return list(range(m))
    return sorted({round(t * (m - 1) / (points - 1)) for t in range(points)})


def _check_similarity(sim: SimilarityMatrix) -> None:
    m, k = sim.shape
    full = m * k * sim.rows[0].n <= _FULL_RECHECK_WORK
    ridx = range(m) if full else _spot_indices(m)
    cidx = range(k) if full else _spot_indices(k)
    for i in ridx:
        for j in cidx:
            expect = ulam_similarity(sim.rows[i], sim.cols[j])
            if sim.values[i][j] != expect:
                raise AssertionError(
                    f"product-form similarity wrong at ({i},{j}): "
                    f"{sim.values[i][j]} vs {expect} from LCS"
                )


def amplify(w: Witness) -> Witness:
    """Square a witness: wreath the lists with themselves, Kronecker U and V.

    The amplified lists are ordered outer-index major, which makes each
    amplified similarity matrix exactly the Kronecker square of its parent;
    the matrices are built that way and re-checked against the LCS (fully
    while cheap, on a deterministic grid of entries beyond that).  The output
    must pass verification; a failure indicates an internal ordering bug.
    """
    a2 = tuple(wreath(p, q) for p in w.a for q in w.a)
    b2 = tuple(wreath(p, q) for p in w.b for q in w.b)
    u2 = kron(w.u, w.u)
    v2 = kron(w.v, w.v)
    m_a = SimilarityMatrix(a2, a2, kron(w.m_a.values, w.m_a.values))
    m_b = SimilarityMatrix(b2, b2, kron(w.m_b.values, w.m_b.values))
    m_ab = SimilarityMatrix(a2, b2, kron(w.m_ab.values, w.m_ab.values))
    for sim in (m_a, m_b, m_ab):
        _check_similarity(sim)
    out = Witness(a2, b2, u2, v2, similarity=(m_a, m_b, m_ab))
    report = witness_verify(out)
    if not report.all_passed:
        raise AssertionError(f"amplified witness failed: {report.failed()}")
    return out


@dataclass(frozen=True)
class ExponentReport:
    """Lower bound after k amplifications of the built-in witness."""

    k: int
    n: int
    lower_bound: Fraction
    exponent: float


def distortion_exponent(k: int) -> ExponentReport:
    """Universe size, distortion bound, and its exponent after k squarings.

    n = 8^(2^k) and the bound is (9/7)^(2^k), so the exponent
    log(bound)/log(n) is the constant log(9/7)/log(8) ~ 0.120857 for every k.
    Python integers do not overflow; the exponent is computed in log space so
    it stays finite for any k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    doublings = 2**k
    n = 8**doublings
    bound = Fraction(9, 7) ** doublings
    exponent = (
        (math.log(bound.numerator) - math.log(bound.denominator)) / math.log(n)
    )
    return ExponentReport(k, n, bound, exponent)
