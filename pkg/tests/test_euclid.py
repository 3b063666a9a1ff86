from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ordlen.euclid import (
    ZZ,
    LocalIntegers,
    PolyFp,
    RingMatrix,
    column_echelon,
    is_prime,
    kernel_basis,
    membership_solve,
    ring_from_json,
    smith_normal_form,
)

from oracles import omega, poly_omega, smith_diagonal

F2 = PolyFp(2)
F3 = PolyFp(3)
Z3 = LocalIntegers(3)
RINGS = [ZZ, LocalIntegers(2), Z3, F2, F3]


def test_divmod_examples():
    assert ZZ.divmod(7, 3) == (2, 1)
    assert F2.divmod(F2.poly([0, 1, 1]), F2.poly([0, 1])) == (F2.poly([1, 1]), F2.zero)
    assert ZZ.divmod(11, 1) == (11, 0)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_divmod_is_euclidean(ring):
    rng = random.Random(5)
    for _ in range(300):
        a, b = ring.random_element(rng), ring.random_element(rng)
        if ring.is_zero(b):
            continue
        q, r = ring.divmod(a, b)
        assert q * b + r == a
        assert ring.is_zero(r) or ring.norm(r) < ring.norm(b)


def test_factor_count_examples():
    assert ZZ.factor_count(12) == 3
    assert F2.factor_count(F2.poly([0, 1, 1])) == 2
    assert ZZ.factor_count(-1) == 0
    assert F3.factor_count(F3.poly([2])) == 0
    assert Z3.factor_count(Fraction(18, 5)) == 2


@given(st.integers(1, 10**6))
def test_factor_count_integers(n):
    assert ZZ.factor_count(n) == ZZ.factor_count(-n) == omega(n)


@given(st.integers(1, 10**5), st.integers(1, 50))
def test_factor_count_local(n, unit):
    # only the powers of 3 survive localization
    denom = unit * 3 + 1
    k = 0
    m = n
    while m % 3 == 0:
        m //= 3
        k += 1
    assert Z3.factor_count(Fraction(n, denom)) == k


@settings(max_examples=200)
@given(st.sampled_from([2, 3]), st.lists(st.integers(0, 2), min_size=1, max_size=9))
def test_factor_count_polys(p, coeffs):
    ring = PolyFp(p)
    a = ring.poly(coeffs)
    if ring.is_zero(a):
        return
    assert ring.factor_count(a) == poly_omega([c % p for c in coeffs], p)


def test_residue_counts():
    assert ZZ.residue_count(12) == 12
    assert Z3.residue_count(Fraction(18)) == 9
    assert F2.residue_count(F2.poly([1, 1, 1])) == 4


def test_is_prime():
    assert [k for k in range(20) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_ring_json_roundtrip():
    for ring in RINGS:
        assert ring_from_json(ring.to_json()) == ring


def test_snf_examples():
    assert smith_normal_form(RingMatrix.identity(ZZ, 3)).d == (1, 1, 1)
    assert smith_normal_form(RingMatrix.from_rows(ZZ, [[2, 4], [6, 8]])).d == (2, 4)
    assert smith_normal_form(RingMatrix.zeros(ZZ, 2, 3)).d == ()


def _random_matrix(ring, rng):
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    return RingMatrix.from_rows(ring, [[ring.random_element(rng) for _ in range(cols)] for _ in range(rows)])


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_snf_reassembles(ring):
    rng = random.Random(11)
    for _ in range(150):
        a = _random_matrix(ring, rng)
        s = smith_normal_form(a)
        assert s.u @ a @ s.v == RingMatrix.diagonal(ring, s.d, a.rows, a.cols)
        assert s.u @ s.u_inv == RingMatrix.identity(ring, a.rows)
        assert s.v @ s.v_inv == RingMatrix.identity(ring, a.cols)
        for x, y in zip(s.d, s.d[1:]):
            assert ring.divides(x, y)
        assert all(ring.normalize(x)[0] == x for x in s.d)


@settings(max_examples=150)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_snf_matches_minors(r, c, data):
    rows = [[data.draw(st.integers(-9, 9)) for _ in range(c)] for _ in range(r)]
    assert list(smith_normal_form(RingMatrix.from_rows(ZZ, rows)).d) == smith_diagonal(rows)


def test_membership_examples():
    assert membership_solve(RingMatrix.from_rows(ZZ, [[2]]), [4]) == (2,)
    assert membership_solve(RingMatrix.from_rows(ZZ, [[2]]), [3]) is None
    assert membership_solve(RingMatrix.from_rows(ZZ, [[1, 0], [0, 6]]), [0, 6]) == (0, 1)
    # 3 is a unit after localizing at 2
    assert membership_solve(RingMatrix.from_rows(LocalIntegers(2), [[3]]), [1]) == (Fraction(1, 3),)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_membership_of_combinations(ring):
    rng = random.Random(3)
    for _ in range(100):
        a = _random_matrix(ring, rng)
        x = [ring.random_element(rng) for _ in range(a.cols)]
        b = a.apply(x)
        y = membership_solve(a, b)
        assert y is not None and a.apply(y) == b


def test_kernel_examples():
    k = kernel_basis(RingMatrix.from_rows(ZZ, [[1, 1]]))
    assert k.cols == 1 and k.column(0) in {(1, -1), (-1, 1)}
    assert kernel_basis(RingMatrix.from_rows(ZZ, [[2, 1], [1, 1]])).cols == 0
    assert kernel_basis(RingMatrix.zeros(ZZ, 1, 2)).cols == 2


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_kernel_basis_properties(ring):
    rng = random.Random(8)
    for _ in range(100):
        a = _random_matrix(ring, rng)
        k = kernel_basis(a)
        assert (a @ k).is_zero() if k.cols else True
        assert k.cols == a.cols - smith_normal_form(a).rank
        # a random kernel vector lies in the span
        if k.cols:
            v = k.apply([ring.random_element(rng) for _ in range(k.cols)])
            assert membership_solve(k, v) is not None


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_column_echelon_unimodular(ring):
    rng = random.Random(2)
    for _ in range(100):
        a = _random_matrix(ring, rng)
        h, rank, v = column_echelon(a, track=True)
        assert a @ v == h
        assert rank == smith_normal_form(a).rank
        assert all(ring.is_zero(x) for row in h.entries for x in row[rank:])
