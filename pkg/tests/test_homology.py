from __future__ import annotations

import random
from itertools import product

import pytest

from ordlen import generate as gen
from ordlen.euclid import ZZ, LocalIntegers, PolyFp, RingMatrix
from ordlen.homology import (
    ComplexError,
    ModuleComplex,
    acyclicity_check,
    first_failure,
    generic_euler_char,
    homology_at,
    lower_length,
    upper_length,
    validate_complex,
)
from ordlen.module import (
    MapError,
    canonical_form,
    cyclic_module,
    free_module,
    is_isomorphic,
    length,
    make_map,
    module_from_factors,
)
from ordlen.ordinal import ord_sum, parse_ordinal as O, shuffle_sum

from oracles import group_elements

CONTEXTS = [ZZ, LocalIntegers(2), PolyFp(3)]
Z = free_module(ZZ, 1)
Z2 = free_module(ZZ, 2)


def mat(rows, cols=None):
    return RingMatrix.from_rows(ZZ, rows, cols)


def desc(modules, maps):
    return ModuleComplex.descending(modules, [mat(a) for a in maps])


# Z --(2,0)--> Z^2 --(0,1)--> Z
ZIGZAG = desc([Z, Z2, Z], [[[2], [0]], [[0, 1]]])


def test_validate_examples():
    assert validate_complex(ZIGZAG)
    assert not validate_complex(desc([Z, Z, Z], [[[1]], [[1]]]))
    assert validate_complex(ModuleComplex((Z,), ()))


def test_first_failure_flags_ill_defined_map():
    c = desc([cyclic_module(ZZ, 2), cyclic_module(ZZ, 4)], [[[1]]])
    assert first_failure(c) == 1


def test_shape_mismatch_rejected():
    with pytest.raises(ComplexError):
        desc([Z2, Z], [[[1]]])


def test_homology_examples():
    exact = desc([Z, Z, cyclic_module(ZZ, 2)], [[[2]], [[1]]])
    assert all(homology_at(exact, i).is_zero() for i in range(3))
    assert is_isomorphic(homology_at(ZIGZAG, 1), cyclic_module(ZZ, 2))
    m = module_from_factors(ZZ, [3, 9])
    zero = desc([m, Z], [[[0, 0]]])
    assert is_isomorphic(homology_at(zero, 1), m)


def test_homology_index_error():
    with pytest.raises(IndexError):
        homology_at(ZIGZAG, 3)


def test_length_examples():
    c = desc([Z, Z2, Z], [[[1], [0]], [[0, 1]]])
    assert lower_length(c) == O("2*w")
    assert upper_length(c) == O("2*w")
    single = ModuleComplex((cyclic_module(ZZ, 8),), ())
    assert lower_length(single) == O("0")
    assert upper_length(single) == O("3")


@pytest.mark.parametrize("ring", CONTEXTS, ids=str)
def test_period_lengths(ring):
    rng = random.Random(6)
    for _ in range(10):
        c = gen.period_complex(rng, ring)
        nu, mu = length(c.modules[0]), length(c.modules[1])
        assert lower_length(c) == ord_sum(nu, mu)
        assert upper_length(c) == shuffle_sum(mu, nu)
        assert validate_complex(c)


def test_acyclicity_examples():
    right_exact = desc([Z, Z2, Z], [[[1], [0]], [[0, 1]]])
    rep = acyclicity_check(right_exact, -1)
    assert rep.hypothesis and rep.condition and rep.verdict == "acyclic"
    assert rep.homology_dims == (-1, -1, -1)

    rep = acyclicity_check(ZIGZAG, -1)
    assert not rep.hypothesis and rep.verdict == "hypothesis fails"


def test_acyclicity_period_instance():
    rng = random.Random(1)
    for _ in range(10):
        c = gen.period_complex(rng, ZZ)
        rep = acyclicity_check(c, -1)
        assert rep.verdict == "acyclic"
        assert homology_at(c, 3).is_zero()


def test_acyclicity_rejects_bad_level():
    with pytest.raises(ValueError):
        acyclicity_check(ZIGZAG, -2)


def test_euler_examples():
    exact = desc([Z, Z2, Z], [[[1], [0]], [[0, 1]]])
    assert generic_euler_char(exact) == 0
    assert generic_euler_char(ZIGZAG) == 0 and homology_at(ZIGZAG, 2).is_zero()
    assert generic_euler_char(ModuleComplex((Z,), ())) == 1


@pytest.mark.parametrize("ring", CONTEXTS, ids=str)
def test_euler_char_matches_homology(ring):
    # on free complexes genlen is the rank, and rank is additive along homology
    rng = random.Random(13)
    for _ in range(30):
        c = gen.complex_(rng, ring, rng.randint(1, 4), free=True, torsion_homology=True, exact_left=False)
        assert validate_complex(c)
        h = sum((-1) ** i * canonical_form(homology_at(c, i)).free_rank for i in range(c.t + 1))
        assert generic_euler_char(c) == h


@pytest.mark.parametrize("ring", CONTEXTS, ids=str)
def test_generated_complexes_exact(ring):
    rng = random.Random(17)
    for _ in range(30):
        c = gen.complex_(rng, ring, rng.randint(1, 4))
        assert all(homology_at(c, i).is_zero() for i in range(c.t + 1))
        assert lower_length(c) <= upper_length(c)


def test_json_roundtrip():
    c = ModuleComplex.from_json(ZIGZAG.to_json())
    assert c == ZIGZAG


def test_padding_shifts_indices():
    p = ZIGZAG.padded(left=1, right=2)
    assert p.t == ZIGZAG.t + 3
    assert validate_complex(p)
    assert is_isomorphic(homology_at(p, 3), homology_at(ZIGZAG, 1))


# -- brute-force homology of complexes of finite groups


def _apply(a, x, dst):
    return tuple(sum(a[i][j] * x[j] for j in range(len(x))) % n for i, n in enumerate(dst))


def _brute_homology_orders(orders, maps):
    """orders[i] lists the cyclic factors of M_i; maps[i-1] is d_i as nested lists."""
    out = []
    for i, m in enumerate(orders):
        elems = group_elements(m)
        if i == 0:
            ker = len(elems)
        else:
            zero = tuple(0 for _ in orders[i - 1])
            ker = sum(1 for x in elems if _apply(maps[i - 1], x, orders[i - 1]) == zero)
        if i + 1 < len(orders):
            img = len({_apply(maps[i], x, m) for x in group_elements(orders[i + 1])})
        else:
            img = 1
        out.append(ker // img)
    return out


def test_homology_orders_match_brute_force():
    rng = random.Random(29)
    checked = 0
    while checked < 60:
        orders = [[rng.choice([2, 3, 4, 6])] * rng.randint(1, 2) for _ in range(3)]
        mods = [module_from_factors(ZZ, o) for o in orders]
        maps = []
        try:
            for i in (1, 2):
                a = [[rng.randrange(orders[i - 1][r]) for _ in orders[i]] for r in range(len(orders[i - 1]))]
                make_map(mods[i], mods[i - 1], mat(a, len(orders[i])))
                maps.append(a)
        except MapError:
            continue
        c = ModuleComplex(tuple(mods), tuple(mat(a, len(orders[i + 1])) for i, a in enumerate(maps)))
        if not validate_complex(c):
            continue
        got = [homology_at(c, i).order() for i in range(3)]
        assert got == _brute_homology_orders(orders, maps)
        checked += 1


def test_square_zero_enumeration_small():
    # all complexes Z/4 -> Z/4 -> Z/4 with d^2 = 0
    m = cyclic_module(ZZ, 4)
    for a, b in product(range(4), repeat=2):
        c = ModuleComplex((m, m, m), (mat([[a]]), mat([[b]])))
        if (a * b) % 4:
            assert not validate_complex(c)
            continue
        got = [homology_at(c, i).order() for i in range(3)]
        assert got == _brute_homology_orders([[4]] * 3, [[[a]], [[b]]])
