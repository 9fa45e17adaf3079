import math
from fractions import Fraction
from itertools import permutations as all_perms

import numpy as np
import pytest

from permlsh.perm import Permutation, identity, lcs, lcs_witness, random_permutation
from permlsh.ulam_lsh import (
    ONE,
    HashDescriptor,
    brute_collision,
    exact_collision,
    hash_eval,
    interval_union_sizes,
    mc_collision,
    record_set,
    verify_kernel_bounds,
)

from oracles import record_set_scan


def elements(n):
    return [Permutation(t) for t in all_perms(range(1, n + 1))]


def test_record_set_identity_prefix_maxima():
    id3 = identity(3)
    assert record_set(id3, 1, id3) == (1, 2, 3)


def test_record_set_skips_tau_smaller_elements():
    # frozen from the direct-scan oracle
    assert record_set_scan(identity(3), 2, Permutation((2, 1, 3))) == (2, 3)
    assert record_set(identity(3), 2, Permutation((2, 1, 3))) == (2, 3)


def test_record_set_contains_start_element():
    rng = np.random.Generator(np.random.Philox(3))
    for _ in range(100):
        n = int(rng.integers(1, 9))
        tau = random_permutation(n, rng)
        p = random_permutation(n, rng)
        z = int(rng.integers(1, n + 1))
        assert z in record_set(tau, z, p)


def test_record_set_matches_scan_oracle_and_is_bi_monotone():
    rng = np.random.Generator(np.random.Philox(5))
    for _ in range(200):
        n = int(rng.integers(1, 9))
        tau = random_permutation(n, rng)
        p = random_permutation(n, rng)
        z = int(rng.integers(1, n + 1))
        rec = record_set(tau, z, p)
        assert rec == record_set_scan(tau, z, p)
        assert len(rec) <= n
        p_order = [p.position(a) for a in rec]
        tau_order = [tau.position(a) for a in rec]
        assert p_order == sorted(p_order)
        assert tau_order == sorted(tau_order)


def test_record_set_errors():
    with pytest.raises(ValueError):
        record_set(identity(3), 4, identity(3))
    with pytest.raises(ValueError):
        record_set(identity(3), 1, identity(4))


def test_hash_eval():
    id3 = identity(3)
    assert hash_eval(HashDescriptor(id3, 1, 1), id3) is ONE
    p = Permutation((2, 1, 3))
    out = hash_eval(HashDescriptor(id3, 2, 1), p)
    assert out == p
    d = HashDescriptor(id3, 2, 3)
    assert hash_eval(d, p) == hash_eval(d, p)


def test_one_token_identity():
    assert ONE == ONE
    assert ONE != identity(1)
    assert identity(1) != ONE


def test_hash_descriptor_validation():
    with pytest.raises(ValueError):
        HashDescriptor(identity(3), 0, 1)
    with pytest.raises(ValueError):
        HashDescriptor(identity(3), 1, 4)


def test_brute_collision_known_values():
    assert brute_collision(identity(2), Permutation((2, 1))) == Fraction(1, 2)
    assert brute_collision(identity(3), Permutation((2, 1, 3))) == Fraction(11, 27)
    p = Permutation((3, 1, 2))
    assert brute_collision(p, p) == 1


def test_brute_collision_rejects_large_n():
    with pytest.raises(ValueError):
        brute_collision(identity(9), identity(9))


def test_exact_collision_known_values():
    assert exact_collision(identity(2), Permutation((2, 1))) == Fraction(1, 2)
    assert exact_collision(identity(3), Permutation((2, 1, 3))) == Fraction(11, 27)
    p = Permutation((1, 3, 2, 4))
    assert exact_collision(p, p) == 1


def test_exact_equals_brute_exhaustive_small():
    for n in (2, 3):
        for p in elements(n):
            for q in elements(n):
                assert exact_collision(p, q) == brute_collision(p, q)


def test_exact_equals_brute_random_n4_n5():
    rng = np.random.Generator(np.random.Philox(13))
    for n in (4, 5):
        for _ in range(25):
            p = random_permutation(n, rng)
            q = random_permutation(n, rng)
            assert exact_collision(p, q) == brute_collision(p, q)


def test_sandwich_on_all_pairs_small():
    for n in (2, 3, 4):
        for p in elements(n):
            for q in elements(n):
                value = exact_collision(p, q)
                assert Fraction(1, n) <= value <= Fraction(lcs(p, q), n)
                if p == q:
                    assert value == Fraction(lcs(p, q), n)


def test_mc_identical_inputs():
    p = Permutation((2, 3, 1))
    est = mc_collision(p, p, 10, seed=0)
    assert est.value == 1.0 and est.stderr == 0.0


def test_mc_deterministic_given_seed():
    p, q = identity(5), Permutation((2, 1, 4, 3, 5))
    a = mc_collision(p, q, 4000, seed=99)
    b = mc_collision(p, q, 4000, seed=99)
    assert a == b
    c = mc_collision(p, q, 4000, seed=100)
    assert a.value != c.value or a.seed != c.seed


def test_mc_close_to_exact_at_large_sample():
    p, q = identity(3), Permutation((2, 1, 3))
    est = mc_collision(p, q, 10**6, seed=4242)
    assert abs(est.value - 11 / 27) <= 4 * est.stderr
    assert est.stderr == math.sqrt(est.value * (1 - est.value) / est.samples)


def test_mc_convergence_over_200_seeds():
    rng = np.random.Generator(np.random.Philox(17))
    p = random_permutation(6, rng)
    q = random_permutation(6, rng)
    exact = float(exact_collision(p, q))
    failures = 0
    for seed in range(200):
        est = mc_collision(p, q, 3000, seed=seed)
        if abs(est.value - exact) > 4 * max(est.stderr, 1e-12):
            failures += 1
    assert failures <= 2  # 99% of runs within 4 standard errors


def test_interval_union_sizes_identity():
    n = 6
    idn = identity(n)
    w = interval_union_sizes(idn, idn, tuple(range(1, n + 1)))
    for (i, j), size in w.items():
        assert size == j - i + 1


def test_interval_union_sizes_known_case():
    # union of {1,2,3} (in p) and {1,3} (in q): frozen from set enumeration
    w = interval_union_sizes(identity(3), Permutation((2, 1, 3)), (1, 3))
    assert w == {(1, 2): 3}


def test_interval_union_sizes_monotone_and_bounded():
    rng = np.random.Generator(np.random.Philox(23))
    for _ in range(50):
        n = int(rng.integers(4, 17))
        p = random_permutation(n, rng)
        q = random_permutation(n, rng)
        common = lcs_witness(p, q)
        if len(common) < 2:
            continue
        w = interval_union_sizes(p, q, common)
        L = len(common)
        for i in range(1, L):
            for j in range(i + 1, L + 1):
                size = w[(i, j)]
                p_len = p.position(common[j - 1]) - p.position(common[i - 1]) + 1
                q_len = q.position(common[j - 1]) - q.position(common[i - 1]) + 1
                assert 2 <= size <= min(2 * n, p_len + q_len)
                if j < L:
                    assert size <= w[(i, j + 1)]


def test_interval_union_sizes_rejects_non_subsequence():
    with pytest.raises(ValueError):
        interval_union_sizes(identity(3), Permutation((2, 1, 3)), (1, 2))
    with pytest.raises(ValueError):
        interval_union_sizes(identity(3), identity(3), (2,))


def test_bounds_trivial_for_equal_inputs():
    p = Permutation((4, 2, 1, 3))
    report = verify_kernel_bounds(p, p, exact_collision(p, p))
    assert report.all_passed and report.exact


def test_bounds_known_case():
    p, q = identity(3), Permutation((2, 1, 3))
    report = verify_kernel_bounds(p, q, Fraction(11, 27))
    by_name = {c.name: c for c in report.checks}
    assert by_name["collision_lower"].passed  # 1/3 <= 11/27
    assert by_name["collision_upper"].passed  # 11/27 <= 2/3
    assert not by_name["lcs_log_lower"].applicable  # LCS = 2 < 4


def test_bounds_hold_on_random_pairs():
    rng = np.random.Generator(np.random.Philox(29))
    for _ in range(150):
        n = int(rng.integers(8, 65))
        p = random_permutation(n, rng)
        q = random_permutation(n, rng)
        report = verify_kernel_bounds(p, q, exact_collision(p, q))
        assert report.all_passed, (p, q, report.checks)


def test_bounds_accept_mc_estimates():
    p, q = identity(4), Permutation((2, 1, 4, 3))
    est = mc_collision(p, q, 50_000, seed=7)
    report = verify_kernel_bounds(p, q, est)
    assert not report.exact
    assert report.all_passed


def test_interval_sum_chains_below_exact_collision():
    # (1/n^2) sum 1/W is a lower bound for the exact kernel, and the sum
    # itself is at least L^2 ln L / (32 n) once L >= 4.
    rng = np.random.Generator(np.random.Philox(31))
    for _ in range(40):
        n = int(rng.integers(6, 33))
        p = random_permutation(n, rng)
        q = random_permutation(n, rng)
        common = lcs_witness(p, q)
        if len(common) < 2:
            continue
        w = interval_union_sizes(p, q, common)
        total = sum(Fraction(1, size) for size in w.values())
        assert total / (n * n) <= exact_collision(p, q)
        L = len(common)
        if L >= 4:
            assert float(total) >= L * L * math.log(L) / (32 * n)
