import math
from fractions import Fraction
from itertools import permutations as all_perms

import numpy as np
import pytest

from permlsh.kernels import (
    BudgetExceededError,
    KernelMatrix,
    all_permutations,
    gram_matrix,
    measure_distortion,
    psd_check,
    rational_psd_certificate,
    symmetrize_kernel,
    uniform_hash_kernel,
)
from permlsh.perm import Permutation, cayley_similarity, compose, cycle_type, identity
from permlsh.serialize import kernel_matrix_from_csv, kernel_matrix_to_csv
from permlsh.ulam_lsh import brute_collision, exact_collision
from permlsh.witness import base_witness


def test_gram_singleton():
    p = Permutation((2, 1))
    m = gram_matrix(exact_collision, [p])
    assert m.values == ((Fraction(1),),) and m.exact


def test_gram_on_base_list_is_psd_with_unit_diagonal():
    w = base_witness()
    m = gram_matrix(exact_collision, w.a)
    assert all(m.values[i][i] == 1 for i in range(4))
    assert psd_check(m, tol=1e-8).passed


def test_gram_uniform_kernel():
    elems = all_permutations(3)
    m = gram_matrix(uniform_hash_kernel(3), elems)
    for i in range(6):
        for j in range(6):
            assert m.values[i][j] == (1 if i == j else Fraction(1, 3))


def test_gram_rejects_out_of_range_kernel():
    with pytest.raises(ValueError):
        gram_matrix(lambda p, q: Fraction(2), [identity(2), Permutation((2, 1))])


def test_kernel_matrix_validation():
    p, q = identity(2), Permutation((2, 1))
    with pytest.raises(ValueError):
        KernelMatrix((p, q), ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))), True)
    with pytest.raises(ValueError):
        KernelMatrix((p, q), ((Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1))), True)


def test_psd_identity():
    report = psd_check([[1, 0], [0, 1]])
    assert report.passed and report.exact_certificate
    assert report.min_eigenvalue == pytest.approx(1.0)


def test_psd_block_certificate_spectrum():
    w = base_witness()
    cert = w.block_certificate()
    report = psd_check(cert)
    assert report.passed and report.exact_certificate
    eigs = sorted(np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in cert])))
    assert eigs[-1] == pytest.approx(8.0)
    assert max(abs(e) for e in eigs[:-1]) < 1e-12


def test_psd_rejects_indefinite():
    report = psd_check([[1, 2], [2, 1]])
    assert not report.passed
    assert report.min_eigenvalue == pytest.approx(-1.0)


def test_psd_rejects_non_symmetric():
    with pytest.raises(ValueError):
        psd_check([[1, 2], [0, 1]])


def test_psd_float_route_for_large_or_float_matrices():
    rng = np.random.Generator(np.random.Philox(2))
    a = rng.normal(size=(70, 70))
    gram = a @ a.T
    report = psd_check(gram)
    assert report.passed and not report.exact_certificate
    report2 = psd_check(np.array([[1.0, 0.5], [0.5, 1.0]]))
    assert report2.passed and not report2.exact_certificate


def test_rational_certificate_catches_scaled_off_diagonal():
    one, ten = Fraction(1), Fraction(10)
    j = [[one] * 4 for _ in range(4)]
    top = [row + [-ten * v for v in row] for row in j]
    bottom = [[-ten * v for v in row] + row for row in j]
    assert not rational_psd_certificate(top + bottom)
    plain = [row + [-v for v in row] for row in j] + [[-v for v in row] + row for row in j]
    assert rational_psd_certificate(plain)


def test_gram_of_collision_kernels_is_psd():
    elems = all_permutations(3)
    for kernel in (brute_collision, exact_collision):
        assert psd_check(gram_matrix(kernel, elems), tol=1e-8).passed


def test_distortion_of_self_is_one():
    elems = all_permutations(3)
    s = gram_matrix(cayley_similarity, elems)
    report = measure_distortion(s, s)
    assert report.delta == 1 and not report.violations


def test_distortion_uniform_vs_cayley_s4():
    elems = all_permutations(4)
    s = gram_matrix(cayley_similarity, elems)
    p = gram_matrix(uniform_hash_kernel(4), elems)
    report = measure_distortion(s, p)
    assert report.delta == Fraction(3)
    assert not report.violations
    assert report.covers_group
    subset = measure_distortion(
        gram_matrix(cayley_similarity, elems[:5]),
        gram_matrix(uniform_hash_kernel(4), elems[:5]),
    )
    assert not subset.covers_group


def test_distortion_scaling():
    elems = all_permutations(3)
    s = gram_matrix(cayley_similarity, elems)

    def halved(p, q):
        return Fraction(1) if p == q else cayley_similarity(p, q) / 2

    p_half = gram_matrix(halved, elems)
    base = measure_distortion(s, gram_matrix(cayley_similarity, elems))
    doubled = measure_distortion(s, p_half)
    assert doubled.delta == 2 * base.delta


def test_distortion_zero_entry_is_infinite():
    p, q = identity(2), Permutation((2, 1))
    s = KernelMatrix((p, q), ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1))), True)
    z = KernelMatrix((p, q), ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), True)
    report = measure_distortion(s, z)
    assert report.delta == math.inf


def test_distortion_reports_violations():
    p, q = identity(2), Permutation((2, 1))
    s = KernelMatrix((p, q), ((Fraction(1), Fraction(1, 4)), (Fraction(1, 4), Fraction(1))), True)
    big = KernelMatrix((p, q), ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1))), True)
    report = measure_distortion(s, big)
    assert report.violations == ((p, q),)


def test_distortion_requires_same_elements():
    m1 = gram_matrix(uniform_hash_kernel(2), all_permutations(2))
    m2 = gram_matrix(uniform_hash_kernel(2), list(reversed(all_permutations(2))))
    with pytest.raises(ValueError):
        measure_distortion(m1, m2)


def test_symmetrize_leaves_bi_invariant_kernel_unchanged():
    n = 4
    kernel = uniform_hash_kernel(n)
    sym = symmetrize_kernel(kernel, n, mode="exact")
    for p in all_permutations(n)[:8]:
        for q in all_permutations(n)[:8]:
            assert sym(p, q) == kernel(p, q)


def test_symmetrize_matches_direct_average():
    # oracle: literal average over every (alpha, beta) pair
    n = 3
    sym = symmetrize_kernel(exact_collision, n, mode="exact")
    elems = all_permutations(n)
    for p, q in [(elems[0], elems[3]), (elems[1], elems[4]), (elems[2], elems[2])]:
        direct = Fraction(0)
        for alpha in elems:
            for beta in elems:
                direct += exact_collision(
                    compose(compose(alpha, p), beta), compose(compose(alpha, q), beta)
                )
        direct /= len(elems) ** 2
        assert sym(p, q) == direct


def test_symmetrize_is_bi_invariant_and_orbit_determined():
    n = 4
    sym = symmetrize_kernel(exact_collision, n, mode="exact")
    elems = all_permutations(n)
    rng = np.random.Generator(np.random.Philox(37))
    for _ in range(60):
        p, q, t1, t2 = (elems[int(rng.integers(len(elems)))] for _ in range(4))
        assert sym(p, q) == sym(compose(compose(t1, p), t2), compose(compose(t1, q), t2))
    seen: dict[tuple[int, ...], Fraction] = {}
    for p in elems:
        for q in elems:
            orbit = cycle_type(compose(p, q.inverse()))
            value = sym(p, q)
            assert seen.setdefault(orbit, value) == value


def test_symmetrize_idempotent_exact():
    sym = symmetrize_kernel(exact_collision, 4, mode="exact")
    sym2 = symmetrize_kernel(sym, 4, mode="exact")
    for p in all_permutations(4)[:10]:
        for q in all_permutations(4)[:10]:
            assert sym(p, q) == sym2(p, q)


def test_symmetrize_preserves_psd():
    sym = symmetrize_kernel(exact_collision, 4, mode="exact")
    gram = gram_matrix(sym, all_permutations(4))
    assert psd_check(gram, tol=1e-8).passed


def test_symmetrize_preserves_similarity_sandwich():
    # a lopsided kernel wedged between S^C/2 and S^C stays wedged after
    # averaging, because the reference similarity is itself bi-invariant
    n = 4

    def lopsided(p, q):
        s = cayley_similarity(p, q)
        return s if p.entries[0] == q.entries[0] else s / 2

    sym = symmetrize_kernel(lopsided, n, mode="exact")
    for p in all_permutations(n):
        for q in all_permutations(n):
            s = cayley_similarity(p, q)
            assert s / 2 <= sym(p, q) <= s


def test_symmetrize_guards():
    with pytest.raises(ValueError):
        symmetrize_kernel(exact_collision, 6, mode="exact")
    with pytest.raises(BudgetExceededError):
        symmetrize_kernel(exact_collision, 4, mode="exact", budget=100)
    with pytest.raises(ValueError):
        symmetrize_kernel(exact_collision, 4, mode="nope")


def test_symmetrize_mc_mode():
    n = 4
    kernel = uniform_hash_kernel(n)
    sym = symmetrize_kernel(kernel, n, mode="mc", budget=50, seed=5)
    p, q = identity(n), Permutation((2, 1, 3, 4))
    assert sym(p, q) == pytest.approx(0.25)  # already bi-invariant
    sym_b = symmetrize_kernel(kernel, n, mode="mc", budget=50, seed=5)
    assert sym(p, q) == sym_b(p, q)


def test_kernel_matrix_csv_round_trip():
    elems = all_permutations(3)
    m = gram_matrix(exact_collision, elems)
    text = kernel_matrix_to_csv(m)
    back = kernel_matrix_from_csv(text)
    assert back.elements == m.elements
    assert back.values == m.values
    assert back.exact
