"""Partitions, hook-length dimensions, characters, and bi-invariant kernels.

Character values come from two independent routes: the Murnaghan-Nakayama
border-strip recursion (general), and closed forms from cycle statistics for
the five shapes (n), (1^n), (n-1,1), (n-2,2), (n-2,1,1).  A third route, the
brute-force count of tabloids fixed by a permutation, pins down the
permutation-module characters that the closed forms decompose.

Bi-invariant PSD kernels decompose as convex combinations of normalized
characters; the weights come from character orthogonality and are exact
whenever the kernel is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping

import numpy as np

from .perm import (
    Permutation,
    compose,
    cycle_stats,
    cycle_type,
    identity,
    is_derangement,
    random_permutation,
    sign,
)

Part = tuple[int, ...]


class BiInvarianceError(ValueError):
    """A kernel claimed bi-invariant changed under a translation."""


class NegativeWeightError(ValueError):
    """A character weight fell below tolerance: the input class function
    cannot come from a PSD bi-invariant kernel."""

    def __init__(self, weights: Mapping[Part, Fraction | float], tol: float):
        bad = {lam: w for lam, w in weights.items() if w < -tol}
        super().__init__(f"negative character weights beyond {tol}: {bad}")
        self.weights = dict(weights)


def check_partition(lam: Part) -> None:
    if not lam:
        raise ValueError("empty partition")
    if any(x < 1 for x in lam) or any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"{lam} is not a non-increasing positive sequence")


def partitions_of(n: int) -> list[Part]:
    """All partitions of n in descending lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[Part] = []

    def rec(remaining: int, cap: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def transpose(lam: Part) -> Part:
    """Conjugate partition: column lengths of the diagram."""
    check_partition(lam)
    return tuple(sum(1 for x in lam if x >= i) for i in range(1, lam[0] + 1))


def dimension(lam: Part) -> int:
    """Hook length formula: n! over the product of all hook lengths."""
    check_partition(lam)
    n = sum(lam)
    conj = transpose(lam)
    product = 1
    for i, row in enumerate(lam):
        for j in range(row):
            product *= (row - j) + (conj[j] - i) - 1
    return math.factorial(n) // product


@dataclass(frozen=True)
class DimensionBoundReport:
    lam: Part
    gamma: int
    dim: int
    bound: Fraction
    passed: bool


def dimension_bound_check(lam: Part) -> DimensionBoundReport:
    """Check dim >= (n / 2 gamma)^gamma for partitions with a dominant first
    row (first part at least 11n/12); gamma is the spillover n - lam[0]."""
    check_partition(lam)
    n = sum(lam)
    if 12 * lam[0] < 11 * n:
        raise ValueError(f"first part {lam[0]} below 11/12 of {n}")
    gamma = n - lam[0]
    if gamma == 0:
        return DimensionBoundReport(lam, 0, 1, Fraction(1), True)
    bound = Fraction(n, 2 * gamma) ** gamma
    dim = dimension(lam)
    return DimensionBoundReport(lam, gamma, dim, bound, dim >= bound)


def _shape_family(lam: Part, n: int) -> str | None:
    if lam == (n,):
        return "trivial"
    if lam == tuple([1] * n):
        return "sign"
    if n >= 4:
        if lam == (n - 1, 1):
            return "standard"
        if lam == (n - 2, 2):
            return "two_row"
        if lam == (n - 2, 1, 1):
            return "hook"
    return None


def char_closed(lam: Part, p: Permutation) -> int:
    """Character value from cycle statistics alone, for the five supported
    shapes.  The last three require n >= 4."""
    check_partition(lam)
    n = p.n
    if sum(lam) != n:
        raise ValueError(f"partition of {sum(lam)} against permutation of {n}")
    family = _shape_family(lam, n)
    if family is None:
        raise ValueError(f"no closed form for shape {lam}")
    if family == "trivial":
        return 1
    if family == "sign":
        return sign(p)
    stats = cycle_stats(p)
    f = stats.fixed
    if family == "standard":
        return f - 1
    if family == "two_row":
        return stats.two_cycles + math.comb(f, 2) - f
    return 1 - stats.two_cycles + f * (f - 3) // 2


@lru_cache(maxsize=None)
def character_mn(lam: Part, ct: Part) -> int:
    """Character of the irreducible labeled ``lam`` on the class ``ct``, by
    the Murnaghan-Nakayama border-strip recursion.

    Border strips of each cycle length are located through beta-numbers
    (first-column hook lengths): removing a strip of length L moves one beta
    value down by L, and the strip height is the number of beta values it
    jumps over.
    """
    if sum(lam) != sum(ct):
        raise ValueError(f"partition sizes differ: {sum(lam)} vs {sum(ct)}")
    if not ct:
        return 1
    strip, rest = ct[0], ct[1:]
    m = len(lam)
    beta = [lam[i] + (m - 1 - i) for i in range(m)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        target = b - strip
        if target < 0 or target in beta_set:
            continue
        height = sum(1 for x in beta if target < x < b)
        new_beta = sorted((x for x in beta if x != b), reverse=True)
        new_beta.append(target)
        new_beta.sort(reverse=True)
        new_lam = tuple(
            x - (m - 1 - i) for i, x in enumerate(new_beta) if x - (m - 1 - i) > 0
        )
        total += (-1) ** height * character_mn(new_lam, rest)
    return total


def class_size(ct: Part) -> int:
    """Number of permutations with the given cycle type: n! / prod k^m_k m_k!."""
    n = sum(ct)
    z = 1
    mult: dict[int, int] = {}
    for k in ct:
        mult[k] = mult.get(k, 0) + 1
    for k, m in mult.items():
        z *= k**m * math.factorial(m)
    return math.factorial(n) // z


def class_representative(ct: Part) -> Permutation:
    """A permutation of the given cycle type, built from consecutive blocks."""
    check_partition(ct)
    cycles = []
    start = 1
    for length in ct:
        cycles.append(tuple(range(start, start + length)))
        start += length
    from .perm import from_cycles

    return from_cycles(sum(ct), cycles)


CHARACTER_TABLE_MAX_N = 10


@dataclass(frozen=True)
class CharacterTable:
    """Integer character table of S_n: rows are partitions, columns classes."""

    n: int
    partitions: tuple[Part, ...]
    classes: tuple[Part, ...]
    entries: tuple[tuple[int, ...], ...]

    def chi(self, lam: Part, ct: Part) -> int:
        return self.entries[self.partitions.index(lam)][self.classes.index(ct)]

    def dimensions(self) -> tuple[int, ...]:
        ident = tuple([1] * self.n)
        col = self.classes.index(ident)
        return tuple(row[col] for row in self.entries)


@lru_cache(maxsize=None)
def character_table(n: int) -> CharacterTable:
    if not 1 <= n <= CHARACTER_TABLE_MAX_N:
        raise ValueError(f"character table supported for 1 <= n <= {CHARACTER_TABLE_MAX_N}")
    parts = tuple(partitions_of(n))
    entries = tuple(
        tuple(character_mn(lam, ct) for ct in parts) for lam in parts
    )
    return CharacterTable(n, parts, parts, entries)


TABLOID_MAX_N = 10
_TABLOID_SHAPES = ("standard", "two_row", "hook")


def tabloid_fixed_count(lam: Part, p: Permutation) -> int:
    """Count tabloids of the given shape fixed by the permutation, by direct
    enumeration.  A tabloid is an ordered tuple of disjoint row sets; it is
    fixed when the permutation maps every row onto itself.

    Supports the shapes (n-1,1), (n-2,2), (n-2,1,1) with n <= 10.
    """
    n = p.n
    if n > TABLOID_MAX_N:
        raise ValueError(f"tabloid enumeration supported for n <= {TABLOID_MAX_N}")
    if sum(lam) != n:
        raise ValueError(f"partition of {sum(lam)} against permutation of {n}")
    if _shape_family(lam, n) not in _TABLOID_SHAPES:
        raise ValueError(f"unsupported tabloid shape {lam}")
    count = 0
    for tabloid in _tabloids(frozenset(range(1, n + 1)), lam):
        if all(frozenset(p(x) for x in row) == row for row in tabloid):
            count += 1
    return count


def _tabloids(universe: frozenset[int], sizes: Part) -> Iterable[tuple[frozenset[int], ...]]:
    if not sizes:
        yield ()
        return
    for chosen in combinations(sorted(universe), sizes[0]):
        head = frozenset(chosen)
        for rest in _tabloids(universe - head, sizes[1:]):
            yield (head,) + rest


@dataclass(frozen=True)
class ClassFunction:
    """A function on S_n constant on conjugacy classes, keyed by cycle type."""

    n: int
    values: Mapping[Part, Fraction | float]

    def __call__(self, p: Permutation) -> Fraction | float:
        return self.values[cycle_type(p)]

    def on_type(self, ct: Part) -> Fraction | float:
        return self.values[ct]

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.values.values())


def class_function_of(
    kernel: Callable[[Permutation, Permutation], Fraction | float],
    n: int,
    samples: int = 20,
    seed: int = 0,
) -> ClassFunction:
    """Collapse a bi-invariant kernel to the class function p -> kernel(p, id).

    Bi-invariance is spot-checked on sampled translations, and for n <= 6 the
    collapsed function is verified constant on every conjugacy class by full
    enumeration.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    ident = identity(n)
    for _ in range(samples):
        p = random_permutation(n, rng)
        q = random_permutation(n, rng)
        t1 = random_permutation(n, rng)
        t2 = random_permutation(n, rng)
        before = kernel(p, q)
        after = kernel(compose(compose(t1, p), t2), compose(compose(t1, q), t2))
        if before != after and not math.isclose(float(before), float(after), rel_tol=1e-9):
            raise BiInvarianceError(
                f"kernel({p}, {q}) = {before} but translated value is {after}"
            )
    values: dict[Part, Fraction | float] = {}
    for ct in partitions_of(n):
        values[ct] = kernel(class_representative(ct), ident)
    if n <= 6:
        from itertools import permutations as _all

        for entries in _all(range(1, n + 1)):
            p = Permutation(entries)
            got = kernel(p, ident)
            expect = values[cycle_type(p)]
            if got != expect and not math.isclose(float(got), float(expect), rel_tol=1e-9):
                raise BiInvarianceError(
                    f"kernel(., id) not constant on class {cycle_type(p)}"
                )
    return ClassFunction(n, values)


WEIGHT_TOL = 1e-10


@dataclass(frozen=True)
class KernelDecomposition:
    """Weights of a bi-invariant PSD kernel over normalized characters."""

    n: int
    weights: Mapping[Part, Fraction | float]

    @property
    def w_trivial(self) -> Fraction | float:
        return self.weights[(self.n,)]

    @property
    def w_sign(self) -> Fraction | float:
        return self.weights[tuple([1] * self.n)]


def decompose_kernel(
    g: ClassFunction, n: int, tol: float = WEIGHT_TOL
) -> KernelDecomposition:
    """Invert the character expansion of a bi-invariant PSD kernel.

    w_lam = d_lam / n! * sum_p g(p) chi_lam(p), summed class by class.  The
    weights of a genuine collision kernel are non-negative and sum to 1; a
    negative weight beyond tolerance raises, which is exactly the evidence
    that no hash distribution realizes ``g``.  The expansion is re-checked by
    reconstructing g on every class.
    """
    if g.n != n:
        raise ValueError(f"class function is on S_{g.n}, not S_{n}")
    if n > CHARACTER_TABLE_MAX_N:
        raise ValueError(f"decomposition supported for n <= {CHARACTER_TABLE_MAX_N}")
    table = character_table(n)
    nfact = math.factorial(n)
    sizes = {ct: class_size(ct) for ct in table.classes}
    weights: dict[Part, Fraction | float] = {}
    for lam in table.partitions:
        acc: Fraction | float = Fraction(0)
        for ct in table.classes:
            acc += sizes[ct] * g.on_type(ct) * table.chi(lam, ct)
        weights[lam] = dimension(lam) * acc / nfact
    if any(w < -tol for w in weights.values()):
        raise NegativeWeightError(weights, tol)
    total = sum(weights.values())
    if abs(float(total) - 1.0) > tol:
        raise ValueError(f"weights sum to {total}, not 1: not a unit-diagonal kernel")
    for ct in table.classes:
        recon = sum(
            weights[lam] * Fraction(table.chi(lam, ct), dimension(lam))
            for lam in table.partitions
        )
        if abs(float(recon) - float(g.on_type(ct))) > 1e-8:
            raise ValueError(f"reconstruction mismatch on class {ct}")
    return KernelDecomposition(n, weights)


@dataclass(frozen=True)
class RoichmanParams:
    """The absolute constants of the character-ratio estimate; their true
    values are not published, so they stay runtime parameters."""

    phi: float
    q: float

    def __post_init__(self) -> None:
        if not self.phi > 0:
            raise ValueError("phi must be positive")
        if not 0 < self.q < 1:
            raise ValueError("q must lie in (0, 1)")


def roichman_bound(lam: Part, p: Permutation, params: RoichmanParams) -> float:
    """Character-ratio bound max{lam_1/n, k/n, q}^(phi * support)."""
    check_partition(lam)
    n = p.n
    if sum(lam) != n:
        raise ValueError(f"partition of {sum(lam)} against permutation of {n}")
    if n < 4:
        raise ValueError("bound stated for n >= 4")
    base = max(lam[0] / n, len(lam) / n, params.q)
    return base ** (params.phi * cycle_stats(p).support)


def alpha_bound(lam: Part, p: Permutation, params: RoichmanParams) -> float:
    """Derangement form of the bound: exp(-phi * alpha) with
    alpha = min{n - lam_1, n - k, (1-q) n}."""
    check_partition(lam)
    n = p.n
    if sum(lam) != n:
        raise ValueError(f"partition of {sum(lam)} against permutation of {n}")
    if n < 4:
        raise ValueError("bound stated for n >= 4")
    if not is_derangement(p):
        raise ValueError("alpha bound applies to derangements only")
    alpha = min(n - lam[0], n - len(lam), (1 - params.q) * n)
    return math.exp(-params.phi * alpha)


@dataclass(frozen=True)
class CayleyPairReport:
    sigma_cycles: int
    pi_cycles: int
    sigma_derangement: bool
    pi_derangement: bool
    signs_equal: bool
    sigma_similarity: Fraction
    pi_similarity: Fraction
    sigma_similarity_ok: bool  # >= 1/3
    pi_similarity_ok: bool  # <= 2/n

    @property
    def all_passed(self) -> bool:
        return (
            self.sigma_derangement
            and self.pi_derangement
            and self.signs_equal
            and self.sigma_similarity_ok
            and self.pi_similarity_ok
        )


def cayley_lb_pair(n: int) -> tuple[Permutation, Permutation, CayleyPairReport]:
    """Two same-sign derangements with opposite cycle regimes.

    sigma* is a product of 2-cycles (plus one leading 3-cycle when n is odd),
    so it has about n/2 cycles and Cayley similarity to the identity at least
    1/3.  pi* has at most two cycles, so its similarity is at most 2/n; it is
    the full n-cycle or an (n-3)-cycle times a 3-cycle, whichever matches
    sigma*'s sign.  Requires n >= 6.
    """
    from .perm import cayley_similarity, from_cycles

    if n < 6:
        raise ValueError("construction needs n >= 6")
    if n % 2 == 0:
        sigma = from_cycles(n, [(2 * i - 1, 2 * i) for i in range(1, n // 2 + 1)])
    else:
        cycles = [(1, 2, 3)] + [(2 * i, 2 * i + 1) for i in range(2, (n - 1) // 2 + 1)]
        sigma = from_cycles(n, cycles)
    sgn_sigma = sign(sigma)
    if (n % 2 == 0 and sgn_sigma == 1) or (n % 2 == 1 and sgn_sigma == -1):
        pi = from_cycles(n, [tuple(range(1, n - 2)), (n - 2, n - 1, n)])
    else:
        pi = from_cycles(n, [tuple(range(1, n + 1))])
    ident = identity(n)
    s_sigma = cayley_similarity(ident, sigma)
    s_pi = cayley_similarity(ident, pi)
    report = CayleyPairReport(
        sigma_cycles=cycle_stats(sigma).count,
        pi_cycles=cycle_stats(pi).count,
        sigma_derangement=is_derangement(sigma),
        pi_derangement=is_derangement(pi),
        signs_equal=sign(pi) == sgn_sigma,
        sigma_similarity=s_sigma,
        pi_similarity=s_pi,
        sigma_similarity_ok=s_sigma >= Fraction(1, 3),
        pi_similarity_ok=s_pi <= Fraction(2, n),
    )
    return sigma, pi, report


@dataclass(frozen=True)
class ResidualReport:
    """Contribution of all non-trivial, non-sign characters at a derangement."""

    residual: float
    holder_majorant: float


def cayley_residual(
    decomp: KernelDecomposition, p: Permutation, table: CharacterTable | None = None
) -> ResidualReport:
    """|sum over lam outside {(n), (1^n)} of w_lam chi_lam(p) / d_lam| for a
    derangement, together with the max normalized character magnitude over
    those shapes (the bound the sum cannot exceed)."""
    if not is_derangement(p):
        raise ValueError("residual is defined for derangements")
    n = p.n
    if decomp.n != n:
        raise ValueError(f"decomposition is on S_{decomp.n}, not S_{n}")
    if table is None:
        table = character_table(n)
    if table.n != n:
        raise ValueError(f"table is for S_{table.n}, not S_{n}")
    ct = cycle_type(p)
    excluded = {(n,), tuple([1] * n)}
    residual: Fraction | float = Fraction(0)
    majorant = 0.0
    for lam in table.partitions:
        if lam in excluded:
            continue
        ratio = Fraction(table.chi(lam, ct), dimension(lam))
        residual += decomp.weights[lam] * ratio
        majorant = max(majorant, abs(float(ratio)))
    return ResidualReport(abs(float(residual)), majorant)
