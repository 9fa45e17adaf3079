from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permlsh.perm import (
    DuplicateValueError,
    Permutation,
    cayley_similarity,
    compose,
    cycle_stats,
    cycle_type,
    format_permutation,
    from_cycles,
    identity,
    lcs,
    lcs_witness,
    parse_permutation,
    precedes,
    random_permutation,
    sign,
    ulam_similarity,
    wreath,
)

from oracles import cycles_by_walk, lcs_dp


@st.composite
def permutations(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


@st.composite
def permutation_pairs(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    p = Permutation(tuple(draw(st.permutations(range(1, n + 1)))))
    q = Permutation(tuple(draw(st.permutations(range(1, n + 1)))))
    return p, q


def test_parse_and_format():
    p = parse_permutation("3 5 1 2 4")
    assert p == parse_permutation("3,5,1,2,4")
    assert format_permutation(p) == "3,5,1,2,4"
    assert parse_permutation(format_permutation(p)) == p


def test_parse_rejects_bad_input():
    with pytest.raises(DuplicateValueError):
        parse_permutation("1 1 2")
    with pytest.raises(ValueError):
        parse_permutation("1 3")  # gap
    with pytest.raises(ValueError):
        parse_permutation("  ")
    with pytest.raises(ValueError):
        parse_permutation("1 2 x")
    with pytest.raises(ValueError):
        parse_permutation("0 1")


def test_compose_basics():
    id3 = identity(3)
    r = Permutation((2, 3, 1))
    assert compose(id3, r) == r
    assert compose(r, id3) == r
    swap = Permutation((2, 1, 3))
    assert compose(swap, swap) == id3
    p = Permutation((3, 1, 2))
    assert compose(p, p.inverse()) == id3
    assert compose(p.inverse(), p) == id3


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose(identity(3), identity(4))


@given(permutations(), permutations(), permutations())
def test_compose_associative(a, b, c):
    if not (a.n == b.n == c.n):
        return
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_cycle_stats_identity():
    s = cycle_stats(identity(5))
    assert (s.count, s.fixed, s.two_cycles, s.support, s.sign) == (5, 5, 0, 0, 1)


def test_cycle_stats_one_line_footnote_case():
    p = Permutation((3, 5, 1, 2, 4))
    s = cycle_stats(p)
    assert s.cycles == ((1, 3), (2, 5, 4))
    assert (s.count, s.fixed, s.two_cycles, s.support, s.sign) == (2, 0, 1, 5, -1)


def test_cycle_stats_double_transposition():
    # hand cycle trace: (2,1,4,3) = (1 2)(3 4)
    s = cycle_stats(Permutation((2, 1, 4, 3)))
    assert (s.count, s.two_cycles, s.fixed, s.sign) == (2, 2, 0, 1)


@given(permutations())
def test_cycle_stats_matches_walk_oracle(p):
    assert list(cycle_stats(p).cycles) == cycles_by_walk(p)


@given(permutations(), st.randoms(use_true_random=False))
def test_cycle_count_invariances(p, rnd):
    entries = list(range(1, p.n + 1))
    rnd.shuffle(entries)
    s = Permutation(tuple(entries))
    c = cycle_stats(p).count
    assert cycle_stats(p.inverse()).count == c
    assert cycle_stats(compose(compose(s, p), s.inverse())).count == c


@given(permutation_pairs())
def test_sign_multiplicative(pair):
    p, q = pair
    assert sign(compose(p, q)) == sign(p) * sign(q)


def test_lcs_known_values():
    id8 = identity(8)
    assert lcs(id8, id8) == 8
    assert lcs(id8, parse_permutation("4,3,2,1,8,7,6,5")) == 2
    assert lcs(id8, parse_permutation("2,7,6,3,4,5,8,1")) == 5


@given(permutation_pairs())
def test_lcs_properties(pair):
    p, q = pair
    value = lcs(p, q)
    assert 1 <= value <= p.n
    assert value == lcs(q, p)
    assert (value == p.n) == (p == q)


def test_lcs_matches_dp_on_many_random_pairs():
    rng = np.random.Generator(np.random.Philox(7))
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        p = random_permutation(n, rng)
        q = random_permutation(n, rng)
        assert lcs(p, q) == lcs_dp(p, q)


@given(permutation_pairs())
def test_lcs_witness_is_a_common_subsequence(pair):
    p, q = pair
    witness = lcs_witness(p, q)
    assert len(witness) == lcs(p, q)
    ppos = [p.position(v) for v in witness]
    qpos = [q.position(v) for v in witness]
    assert ppos == sorted(ppos) and qpos == sorted(qpos)


def test_similarities():
    p = Permutation((4, 1, 3, 2))
    assert ulam_similarity(p, p) == 1
    assert cayley_similarity(p, p) == 1
    assert cayley_similarity(identity(4), Permutation((2, 1, 3, 4))) == Fraction(3, 4)
    assert cayley_similarity(identity(6), Permutation((2, 1, 4, 3, 6, 5))) == Fraction(1, 2)
    assert ulam_similarity(identity(8), parse_permutation("4,3,2,1,8,7,6,5")) == Fraction(1, 4)


@given(permutation_pairs())
def test_similarity_symmetry_and_range(pair):
    p, q = pair
    for fn in (ulam_similarity, cayley_similarity):
        v = fn(p, q)
        assert fn(q, p) == v
        assert 0 < v <= 1
        assert (v == 1) == (p == q)


def test_wreath_identity_and_block_swap():
    assert wreath(identity(3), identity(3)) == identity(9)
    assert wreath(Permutation((2, 1)), Permutation((1, 2))) == Permutation((3, 4, 1, 2))
    assert lcs(wreath(Permutation((2, 1)), Permutation((2, 1))), identity(4)) == 1


def test_wreath_size_mismatch():
    with pytest.raises(ValueError):
        wreath(identity(2), identity(3))


def test_wreath_lcs_multiplicative_exhaustive_small():
    from itertools import permutations as all_perms

    for n in (2, 3):
        elems = [Permutation(t) for t in all_perms(range(1, n + 1))]
        for p in elems:
            for q in elems:
                for t1 in elems:
                    for t2 in elems:
                        assert lcs(wreath(p, q), wreath(t1, t2)) == lcs(p, t1) * lcs(q, t2)


def test_wreath_lcs_multiplicative_random():
    rng = np.random.Generator(np.random.Philox(11))
    for _ in range(200):
        n = int(rng.integers(4, 9))
        p, q, t1, t2 = (random_permutation(n, rng) for _ in range(4))
        assert lcs(wreath(p, q), wreath(t1, t2)) == lcs(p, t1) * lcs(q, t2)


def test_precedes():
    assert precedes(identity(4), 1, 2)
    assert precedes(Permutation((3, 5, 1, 2, 4)), 5, 1)
    assert not precedes(Permutation((3, 5, 1, 2, 4)), 1, 5)
    p = identity(3)
    assert not precedes(p, 2, 2)
    with pytest.raises(ValueError):
        precedes(p, 0, 1)
    with pytest.raises(ValueError):
        precedes(p, 1, 4)


@given(permutations())
def test_precedes_total_order(p):
    for a in range(1, p.n + 1):
        for b in range(1, p.n + 1):
            if a != b:
                assert precedes(p, a, b) != precedes(p, b, a)


def test_from_cycles():
    assert from_cycles(5, [(1, 3), (2, 5, 4)]) == Permutation((3, 5, 1, 2, 4))
    assert from_cycles(4, []) == identity(4)
    with pytest.raises(ValueError):
        from_cycles(4, [(1, 2), (2, 3)])


@given(permutations())
def test_cycle_type_is_a_partition(p):
    ct = cycle_type(p)
    assert sum(ct) == p.n
    assert list(ct) == sorted(ct, reverse=True)
