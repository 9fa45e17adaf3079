"""Collision-kernel tooling: Gram matrices, PSD certificates, distortion.

Two PSD paths coexist on purpose.  Rational matrices up to 64x64 get an exact
LDL-style certificate with no floating point anywhere, so a PASS is a proof;
larger or floating matrices fall back to a symmetric eigensolver with a
relative tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations as _all_permutations
from typing import Callable, Sequence

import numpy as np

from .perm import Permutation, compose, cycle_type, identity, random_permutation

Kernel = Callable[[Permutation, Permutation], "Fraction | float"]

EXACT_PSD_MAX_SIDE = 64


class BudgetExceededError(RuntimeError):
    """Symmetrization would need more kernel evaluations than allowed."""


def uniform_hash_kernel(n: int) -> Kernel:
    """Collision kernel of a uniform hash into n buckets: 1 on the diagonal,
    1/n everywhere else."""

    off = Fraction(1, n)

    def kernel(p: Permutation, q: Permutation) -> Fraction:
        if p.n != n or q.n != n:
            raise ValueError("permutation size does not match kernel size")
        return Fraction(1) if p == q else off

    return kernel


@dataclass(frozen=True)
class KernelMatrix:
    """Pairwise kernel values over an ordered list of permutations."""

    elements: tuple[Permutation, ...]
    values: tuple[tuple[Fraction | float, ...], ...]
    exact: bool

    def __post_init__(self) -> None:
        m = len(self.elements)
        if len(self.values) != m or any(len(row) != m for row in self.values):
            raise ValueError("matrix shape does not match element count")
        for i in range(m):
            if self.values[i][i] != 1:
                raise ValueError(f"diagonal entry ({i},{i}) is not 1")
            for j in range(i + 1, m):
                if self.values[i][j] != self.values[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i},{j})")

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.values])


def gram_matrix(kernel: Kernel, elements: Sequence[Permutation]) -> KernelMatrix:
    """Evaluate a symmetric kernel on all pairs of ``elements``.

    Raises if the kernel leaves [0, 1].  Only the upper triangle is
    evaluated; symmetry holds by construction.
    """
    elems = tuple(elements)
    m = len(elems)
    rows: list[list[Fraction | float]] = [[Fraction(0)] * m for _ in range(m)]
    exact = True
    for i in range(m):
        for j in range(i, m):
            v = kernel(elems[i], elems[j])
            if not 0 <= v <= 1:
                raise ValueError(f"kernel value {v} outside [0, 1] at ({i},{j})")
            if not isinstance(v, (Fraction, int)):
                exact = False
            rows[i][j] = v
            rows[j][i] = v
    return KernelMatrix(elems, tuple(tuple(r) for r in rows), exact)


def _as_rows(matrix) -> list[list]:
    if isinstance(matrix, KernelMatrix):
        return [list(r) for r in matrix.values]
    if isinstance(matrix, np.ndarray):
        return matrix.tolist()
    return [list(r) for r in matrix]


def _is_rational(rows: list[list]) -> bool:
    return all(isinstance(v, (int, Fraction)) for row in rows for v in row)


def rational_psd_certificate(rows: Sequence[Sequence[Fraction | int]]) -> bool:
    """Exact PSD decision for a symmetric rational matrix.

    Repeatedly eliminates a positive diagonal pivot and recurses on the Schur
    complement.  A negative diagonal entry refutes PSD; once every remaining
    diagonal entry is zero the matrix is PSD iff the remaining block is zero.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    active = list(range(len(a)))
    while active:
        pivot = None
        for i in active:
            if a[i][i] < 0:
                return False
            if a[i][i] > 0 and pivot is None:
                pivot = i
        if pivot is None:
            return all(a[i][j] == 0 for i in active for j in active)
        active.remove(pivot)
        d = a[pivot][pivot]
        col = {j: a[j][pivot] for j in active}
        scaled = {j: col[j] / d for j in active}
        for j in active:
            cj = scaled[j]
            if cj == 0:
                continue
            row_j = a[j]
            for k in active:
                ck = col[k]
                if ck:
                    row_j[k] -= cj * ck
    return True


@dataclass(frozen=True)
class PsdReport:
    min_eigenvalue: float
    passed: bool
    exact_certificate: bool
    tol: float


def psd_check(matrix, tol: float = 1e-8) -> PsdReport:
    """Decide positive semidefiniteness of a symmetric matrix.

    Rational matrices up to 64x64 are certified exactly; otherwise the
    verdict is ``min eigenvalue >= -tol * max |entry|``.  The float minimum
    eigenvalue is reported either way.
    """
    rows = _as_rows(matrix)
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix is not square")
    for i in range(m):
        for j in range(i + 1, m):
            if float(rows[i][j]) != float(rows[j][i]):
                raise ValueError(f"matrix not symmetric at ({i},{j})")
    arr = np.array([[float(v) for v in row] for row in rows])
    min_eig = float(np.linalg.eigvalsh(arr).min()) if m else 0.0
    if _is_rational(rows) and m <= EXACT_PSD_MAX_SIDE:
        return PsdReport(min_eig, rational_psd_certificate(rows), True, tol)
    scale = float(np.abs(arr).max()) if m else 0.0
    return PsdReport(min_eig, min_eig >= -tol * scale, False, tol)


@dataclass(frozen=True)
class DistortionReport:
    """Worst multiplicative gap S/P over distinct pairs.

    ``delta`` is infinite when the kernel vanishes on a pair the similarity
    does not; ``violations`` lists pairs where the kernel exceeds the
    similarity, which a distortion certificate must not allow.  When
    ``covers_group`` is false the matrices span only a subset of S_n and
    ``delta`` is merely a lower bound on the distortion of the full space.
    """

    delta: Fraction | float
    violations: tuple[tuple[Permutation, Permutation], ...]
    argmax_pair: tuple[Permutation, Permutation] | None
    covers_group: bool


def measure_distortion(s: KernelMatrix, p: KernelMatrix) -> DistortionReport:
    """max S(x,y)/P(x,y) over x != y, with violation reporting.

    Exact when both matrices are exact.
    """
    if s.elements != p.elements:
        raise ValueError("element lists differ")
    m = s.size
    delta: Fraction | float = Fraction(1) if (s.exact and p.exact) else 1.0
    argmax = None
    violations = []
    for i in range(m):
        for j in range(i + 1, m):
            sv, pv = s.values[i][j], p.values[i][j]
            if pv > sv:
                violations.append((s.elements[i], s.elements[j]))
            if pv == 0:
                if sv > 0:
                    delta = math.inf
                    argmax = (s.elements[i], s.elements[j])
                continue
            ratio = sv / pv
            if ratio > delta:
                delta = ratio
                argmax = (s.elements[i], s.elements[j])
    covers = m > 0 and len(set(s.elements)) == math.factorial(s.elements[0].n)
    return DistortionReport(delta, tuple(violations), argmax, covers)


def symmetrize_kernel(
    kernel: Kernel,
    n: int,
    mode: str = "exact",
    budget: int | None = None,
    seed: int | None = None,
) -> Kernel:
    """Average a kernel over simultaneous left/right translations.

    The result P'(p, q) = avg over (alpha, beta) of kernel(alpha p beta,
    alpha q beta) is bi-invariant and keeps any similarity sandwich the input
    satisfies against a bi-invariant similarity.

    Exact mode (n <= 5) averages over the whole group.  Since the average
    depends only on the cycle type of p q^-1, it is tabulated per type with
    (n!)^2 kernel evaluations instead of (n!)^2 per query.  MC mode averages
    over ``budget`` sampled (alpha, beta) pairs drawn once with ``seed``; a
    shared sample keeps the result a positive-semidefinite average.
    """
    if mode == "exact":
        if n > 5:
            raise ValueError(f"exact symmetrization supports n <= 5, got {n}")
        cost = math.factorial(n) ** 2
        if budget is not None and cost > budget:
            raise BudgetExceededError(
                f"exact symmetrization needs {cost} evaluations, budget is {budget}"
            )
        elems = [Permutation(t) for t in _all_permutations(range(1, n + 1))]
        sums: dict[tuple[int, ...], Fraction | float] = {}
        counts: dict[tuple[int, ...], int] = {}
        for s_perm in elems:
            t = cycle_type(s_perm)
            acc = sums.get(t, Fraction(0))
            for g in elems:
                acc += kernel(compose(s_perm, g), g)
            sums[t] = acc
            counts[t] = counts.get(t, 0) + len(elems)
        table = {t: sums[t] / counts[t] for t in sums}

        def sym_exact(p: Permutation, q: Permutation) -> Fraction | float:
            if p.n != n or q.n != n:
                raise ValueError("permutation size does not match kernel size")
            return table[cycle_type(compose(p, q.inverse()))]

        return sym_exact

    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")
    if budget is None or budget < 1:
        raise ValueError("mc mode needs a positive sample budget")
    rng = np.random.Generator(np.random.Philox(0 if seed is None else seed))
    pairs = [
        (random_permutation(n, rng), random_permutation(n, rng)) for _ in range(budget)
    ]

    def sym_mc(p: Permutation, q: Permutation) -> float:
        if p.n != n or q.n != n:
            raise ValueError("permutation size does not match kernel size")
        total = 0.0
        for alpha, beta in pairs:
            total += float(kernel(compose(compose(alpha, p), beta), compose(compose(alpha, q), beta)))
        return total / budget

    return sym_mc


def all_permutations(n: int) -> list[Permutation]:
    """Every element of S_n in lexicographic one-line order."""
    return [Permutation(t) for t in _all_permutations(range(1, n + 1))]


def identity_matrix(m: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(m)) for i in range(m)
    )


__all__ = [
    "Kernel",
    "KernelMatrix",
    "PsdReport",
    "DistortionReport",
    "BudgetExceededError",
    "uniform_hash_kernel",
    "gram_matrix",
    "psd_check",
    "rational_psd_certificate",
    "measure_distortion",
    "symmetrize_kernel",
    "all_permutations",
    "identity_matrix",
]
