from __future__ import annotations

import pytest
from hypothesis import assume, given, settings, strategies as st

from ordlen.ordinal import (
    Cmp,
    Ordinal,
    OracleBoundError,
    OrdinalSyntaxError,
    cmp_at_level,
    compare,
    format_ordinal,
    interleaving_sums,
    ord_sum,
    paper_product,
    parse_ordinal,
    predecessor,
    profile,
    shuffle_sum,
    shuffle_sum_oracle,
    shuffle_sum_recursive,
    split,
)

from oracles import copies, degree, exps, nat_add, ord_add

O = parse_ordinal

ordinals = st.dictionaries(st.integers(0, 4), st.integers(1, 4), max_size=4).map(Ordinal.from_coefficients)
small = st.dictionaries(st.integers(0, 3), st.integers(1, 3), max_size=3).map(Ordinal.from_coefficients)


# -- parse / format


@pytest.mark.parametrize("text, terms", [
    ("w", ((1, 1),)),
    ("2*w^2+3*w+4", ((2, 2), (1, 3), (0, 4))),
    ("w+w", ((1, 2),)),
    ("4 + w^2 + 1", ((2, 1), (0, 5))),
    ("0", ()),
])
def test_parse(text, terms):
    assert O(text).terms == terms


@pytest.mark.parametrize("bad", ["", "w+", "0*w", "2*", "w^", "x", "w^-1", "3w"])
def test_parse_rejects(bad):
    with pytest.raises(OrdinalSyntaxError):
        O(bad)


@pytest.mark.parametrize("a, text", [(Ordinal(()), "0"), (O("w+1"), "w+1"), (O("3*w^2"), "3*w^2")])
def test_format(a, text):
    assert format_ordinal(a) == text


@given(ordinals)
def test_format_roundtrip(a):
    assert O(format_ordinal(a)) == a


# -- comparison


@pytest.mark.parametrize("a, b, want", [
    ("5", "w", Cmp.LT), ("2*w+1", "w+100", Cmp.GT), ("w^2+1", "w^2+1", Cmp.EQ),
])
def test_compare_examples(a, b, want):
    assert compare(O(a), O(b)) is want


@given(ordinals, ordinals)
def test_compare_matches_exponent_lists(a, b):
    want = Cmp.LT if exps(a) < exps(b) else Cmp.GT if exps(a) > exps(b) else Cmp.EQ
    assert compare(a, b) is want


# -- sums


@pytest.mark.parametrize("a, b, want", [("1", "w", "w"), ("w^2+w", "0", "w^2+w"), ("2*w+3", "w+1", "3*w+1")])
def test_ord_sum_examples(a, b, want):
    assert ord_sum(O(a), O(b)) == O(want)


def test_ord_sum_not_commutative():
    assert ord_sum(O("1"), O("w")) != ord_sum(O("w"), O("1"))


@pytest.mark.parametrize("a, b, want", [("w+1", "w+1", "2*w+2"), ("w^2+w", "0", "w^2+w"), ("w^2+3", "2*w", "w^2+2*w+3")])
def test_shuffle_sum_examples(a, b, want):
    assert shuffle_sum(O(a), O(b)) == O(want)


@given(ordinals, ordinals)
def test_ord_sum_matches_oracle(a, b):
    assert exps(ord_sum(a, b)) == ord_add(exps(a), exps(b))


@given(ordinals, ordinals)
def test_shuffle_sum_matches_merge(a, b):
    assert exps(shuffle_sum(a, b)) == nat_add(exps(a), exps(b))


@pytest.mark.parametrize("a, b, want", [("w", "w", "2*w"), ("w+1", "w", "2*w+1"), ("1", "1", "2")])
def test_oracle_examples(a, b, want):
    assert shuffle_sum_oracle(O(a), O(b)) == O(want)


def test_oracle_interleaving_counts():
    # C(3,1) interleavings of (w, 1) with (w)
    assert len(list(interleaving_sums(O("w+1"), O("w")))) == 3
    # only w,1,w loses the trailing 1
    assert sorted(map(str, interleaving_sums(O("w+1"), O("w")))) == ["2*w", "2*w+1", "2*w+1"]


def test_oracle_bound():
    with pytest.raises(OracleBoundError):
        shuffle_sum_oracle(O("7"), O("6"))
    assert shuffle_sum_oracle(O("7"), O("6"), exhaustive=False) == O("13")


@pytest.mark.parametrize("a, b, want", [("w+1", "w+1", "2*w+2"), ("0", "w^2+3", "w^2+3"), ("w^2", "w", "w^2+w")])
def test_recursive_examples(a, b, want):
    assert shuffle_sum_recursive(O(a), O(b)) == O(want)


@given(small, small)
def test_three_shuffle_sums_agree(a, b):
    s = shuffle_sum(a, b)
    assert shuffle_sum_recursive(a, b) == s
    assert shuffle_sum_oracle(a, b, exhaustive=False) == s
    if a.valence + b.valence <= 10:
        assert shuffle_sum_oracle(a, b) == s


@given(ordinals, ordinals, ordinals)
def test_algebraic_laws(a, b, c):
    assert shuffle_sum(a, b) == shuffle_sum(b, a)
    assert shuffle_sum(shuffle_sum(a, b), c) == shuffle_sum(a, shuffle_sum(b, c))
    assert ord_sum(ord_sum(a, b), c) == ord_sum(a, ord_sum(b, c))
    assert ord_sum(a, b) <= shuffle_sum(a, b)
    assert ord_sum(b, a) <= shuffle_sum(a, b)


@given(ordinals, ordinals, ordinals)
def test_cancellation(a, b, c):
    if shuffle_sum(a, c) == shuffle_sum(b, c):
        assert a == b
    else:
        assert a != b


@given(ordinals, ordinals)
def test_absorption_iff_degree_drop(a, b):
    if a.is_zero():
        assert ord_sum(a, b) == b
    else:
        assert (ord_sum(a, b) == b) == (degree(exps(a)) < degree(exps(b)))


@given(ordinals, ordinals, ordinals)
def test_finite_distributivity(a, b, theta):
    assume(not a.is_zero() and not b.is_zero())
    theta = split(theta, min(a.order, b.order) + 1)[1]
    left = ord_sum(shuffle_sum(a, b), theta)
    assert left == shuffle_sum(ord_sum(a, theta), b) == shuffle_sum(a, ord_sum(b, theta))


@given(ordinals, ordinals)
def test_successor_distributivity(a, b):
    assume(a.is_successor())
    assert ord_sum(shuffle_sum(a, b), O("1")) == shuffle_sum(ord_sum(a, O("1")), b)


# -- products, profile, split


@pytest.mark.parametrize("a, b, want", [("2", "w", "2*w"), ("w", "2", "w"), ("3", "w+1", "3*w+1")])
def test_paper_product_examples(a, b, want):
    assert paper_product(O(a), O(b)) == O(want)


@given(st.integers(0, 5), ordinals)
def test_paper_product_finite_copies(n, b):
    assert exps(paper_product(Ordinal.of(n), b)) == copies([0] * n, exps(b))


@pytest.mark.parametrize("a, want", [("2*w^2+3*w", (2, 1, 5)), ("0", (-1, -1, 0)), ("w", (1, 1, 1))])
def test_profile(a, want):
    assert profile(O(a)) == want


@pytest.mark.parametrize("a, e, plus, minus", [
    ("2*w^2+3*w+4", 1, "2*w^2+3*w", "4"), ("w^2+5", 0, "w^2+5", "0"), ("5", 1, "0", "5"),
])
def test_split_examples(a, e, plus, minus):
    assert split(O(a), e) == (O(plus), O(minus))


@given(ordinals, st.integers(-1, 5))
def test_split_reassembles(a, e):
    plus, minus = split(a, e)
    assert ord_sum(plus, minus) == a
    assert all(x >= e for x in exps(plus)) and all(x < e for x in exps(minus))


@pytest.mark.parametrize("a, b, e, want", [
    ("w+5", "w+1", 1, Cmp.EQ), ("2*w", "w+100", 1, Cmp.GT), ("3", "7", 1, Cmp.EQ),
])
def test_cmp_at_level(a, b, e, want):
    assert cmp_at_level(O(a), O(b), e) is want


@pytest.mark.parametrize("a, want", [("w+1", "w"), ("1", "0"), ("w^2+3", "w^2+2")])
def test_predecessor(a, want):
    assert predecessor(O(a)) == O(want)


def test_predecessor_of_limit():
    with pytest.raises(ValueError):
        predecessor(O("w"))


@settings(max_examples=300)
@given(ordinals, ordinals, ordinals, st.integers(0, 4))
def test_level_inequality(alpha, mu, lam, e):
    # beta agrees with alpha at level e; alpha + lambda <= beta forces deg lambda < e
    assume(not alpha.is_zero() and alpha.order >= e)
    beta = ord_sum(alpha, split(mu, e)[1])
    if ord_sum(alpha, lam) <= beta:
        assert lam.degree <= e - 1
