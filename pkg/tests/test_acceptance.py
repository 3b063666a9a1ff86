"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the counts behind it,
then asserts.  Every criterion demands zero failures, plus a wall-clock
limit where one is stated.
"""

from __future__ import annotations

import random
import time
from itertools import product

import pytest

from ordlen import generate as gen
from ordlen.euclid import ZZ, LocalIntegers, PolyFp, RingMatrix
from ordlen.finite import finite_modules
from ordlen.homology import ModuleComplex, acyclicity_check, generic_euler_char, homology_at
from ordlen.module import (
    cyclic_module,
    direct_sum,
    free_module,
    make_map,
    verify_semi_additivity,
)
from ordlen.ordinal import (
    Ordinal,
    ord_sum,
    parse_ordinal,
    shuffle_sum,
    shuffle_sum_oracle,
    shuffle_sum_recursive,
)
from ordlen.suites import run_suite, sweep_homs, sweep_lattices

from oracles import abelian_group_count

pytestmark = pytest.mark.acceptance


def _line(capsys, criterion: int, ok: bool, text: str) -> None:
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {text}")


def _suites(runs: list[tuple[str, int, str | None]], seed: int = 1) -> tuple[dict[str, int], list]:
    """Run ``(suite, trials, context)`` triples; failure counts keyed by label."""
    counts, sample = {}, []
    for name, trials, ctx in runs:
        rep = run_suite(name, seed, trials, context=ctx)
        label = name if ctx is None else f"{name}@{ctx}"
        counts[label] = len(rep["failures"])
        sample += rep["failures"][:1]
    return counts, sample


def _fmt(counts: dict[str, int]) -> str:
    return ", ".join(f"{k} {v} fail" for k, v in counts.items())


# 1 ---------------------------------------------------------------------


def test_criterion_1_shuffle_sum_equivalence(capsys):
    start = time.perf_counter()
    grid = [Ordinal.from_coefficients(dict(zip(range(3, -1, -1), cs))) for cs in product(range(4), repeat=4)]
    bad = 0
    for a in grid:
        for b in grid:
            s = shuffle_sum(a, b)
            if not (s == shuffle_sum_recursive(a, b) == shuffle_sum_oracle(a, b, exhaustive=False)):
                bad += 1
    counts, _ = _suites([("ssum-equivalence", 1000, None)])
    elapsed = time.perf_counter() - start
    ok = bad == 0 and not any(counts.values()) and elapsed < 10
    _line(capsys, 1, ok, f"{len(grid) ** 2} grid pairs {bad} fail, {_fmt(counts)}, {elapsed:.1f} s (< 10 s)")
    assert ok


# 2 ---------------------------------------------------------------------


def test_criterion_2_ordinal_algebra(capsys):
    rng = random.Random(2)
    o = lambda: gen.ordinal(rng)  # noqa: E731
    fails = dict.fromkeys(["commutative", "associative", "cancellative", "sum-assoc", "absorption", "dominance"], 0)
    for _ in range(1000):
        a, b, c = o(), o(), o()
        fails["commutative"] += shuffle_sum(a, b) != shuffle_sum(b, a)
        fails["associative"] += shuffle_sum(shuffle_sum(a, b), c) != shuffle_sum(a, shuffle_sum(b, c))
        fails["cancellative"] += (shuffle_sum(a, c) == shuffle_sum(b, c)) != (a == b)
        fails["sum-assoc"] += ord_sum(ord_sum(a, b), c) != ord_sum(a, ord_sum(b, c))
        fails["dominance"] += not (ord_sum(a, b) <= shuffle_sum(a, b))
        # a + b = b exactly when a's degree is below b's, for a nonzero
        while a.is_zero():
            a = o()
        fails["absorption"] += (ord_sum(a, b) == b) != (a.degree < b.degree)
    counts, _ = _suites([("findist", 1000, None), ("eineq", 1000, None)])
    counts = {**{k: v for k, v in fails.items()}, **counts}
    ok = not any(counts.values())
    _line(capsys, 2, ok, f"1000 instances each: {_fmt(counts)}")
    assert ok


# 3 ---------------------------------------------------------------------


def test_criterion_3_product_formula(capsys):
    start = time.perf_counter()
    counts, sample = _suites([("product-formula", 200, None)])
    elapsed = time.perf_counter() - start
    ok = not any(counts.values()) and elapsed < 30
    _line(capsys, 3, ok, f"{_fmt(counts)}, {elapsed:.1f} s (< 30 s)")
    assert ok, sample


# 4 ---------------------------------------------------------------------


def test_criterion_4_sum_ab_inc(capsys):
    counts, sample = _suites([("sum-formula", 200, None), ("ab-lemma", 200, None), ("inc-map", 200, None)])
    ok = not any(counts.values())
    note = ""
    if counts["sum-formula"]:
        d = sample[0]["detail"]
        note = f" (e.g. len(P+Q) = {d['length']}, stated {d['stated']}, len P + 1 + len Q = {d['len_p+1+len_q']})"
    _line(capsys, 4, ok, f"200 instances each: {_fmt(counts)}{note}")
    assert ok, sample[:1]


# 5 ---------------------------------------------------------------------


def test_criterion_5_symbolic_length(capsys):
    counts, sample = _suites([("symbolic-length", 200, None)])
    ok = not any(counts.values())
    _line(capsys, 5, ok, f"size <= 60: {_fmt(counts)}")
    assert ok, sample


# 6 ---------------------------------------------------------------------


def test_criterion_6_semi_additivity(capsys):
    start = time.perf_counter()
    Z, Z2 = free_module(ZZ, 1), cyclic_module(ZZ, 2)
    rep = verify_semi_additivity(make_map(Z, Z, RingMatrix.from_rows(ZZ, [[2]])),
                                 make_map(Z, Z2, RingMatrix.from_rows(ZZ, [[1]])))
    w, w1 = parse_ordinal("w"), parse_ordinal("w+1")
    example = (rep.lower_bound, rep.len_m, rep.upper_bound) == (w, w, w1) and rep.ok
    counts, sample = _suites([("semi-additivity", 500, ctx) for ctx in sorted(gen.CONTEXTS)], seed=7)
    elapsed = time.perf_counter() - start
    ok = example and not any(counts.values()) and elapsed < 60
    _line(capsys, 6, ok, f"0->Z->Z->Z/2->0 gives w <= w <= w+1: {example}; {_fmt(counts)}; {elapsed:.1f} s (< 60 s)")
    assert ok, sample


# 7 ---------------------------------------------------------------------


def test_criterion_7_lattice_oracle(capsys):
    start = time.perf_counter()
    types = len(finite_modules(ZZ, 64))
    want = sum(abelian_group_count(n) for n in range(1, 65))
    bad = sweep_lattices(ZZ, 64)
    elapsed = time.perf_counter() - start
    ok = types == want and not bad and elapsed < 60
    _line(capsys, 7, ok, f"{types} group types (expected {want}), {len(bad)} fail, {elapsed:.1f} s (< 60 s)")
    assert ok, bad[:1]


# 8 ---------------------------------------------------------------------


def test_criterion_8_hom_enumeration(capsys):
    counts = {}
    sample = []
    for ring, bound in [(ZZ, 32), (LocalIntegers(2), 32), (PolyFp(2), 16), (PolyFp(3), 27)]:
        bad = sweep_homs(ring, bound)
        counts[f"{ring} <= {bound}"] = len(bad)
        sample += bad[:1]
    suite_counts, s2 = _suites([(n, 200, None) for n in ("vasconcelos", "subim", "miyata", "noniso")])
    counts.update(suite_counts)
    ok = not any(counts.values())
    _line(capsys, 8, ok, f"all Hom(M, N) pairs: {_fmt(counts)}")
    assert ok, (sample + s2)[:1]


# 9 ---------------------------------------------------------------------


def test_criterion_9_dimension_genlen_unmixed(capsys):
    runs = [(n, 500, ctx) for n in ("dim-degree", "genlen", "unmixed", "regid", "finlen-add")
            for ctx in sorted(gen.CONTEXTS)]
    counts, sample = _suites(runs)
    ok = not any(counts.values())
    _line(capsys, 9, ok, f"500 per context: {sum(counts.values())} fail over {len(runs)} runs")
    assert ok, sample[:1]


# 10 --------------------------------------------------------------------


def _examples_10() -> bool:
    Z, Z2 = free_module(ZZ, 1), free_module(ZZ, 2)
    m = lambda rows: RingMatrix.from_rows(ZZ, rows)  # noqa: E731
    right_exact = ModuleComplex.descending([Z, Z2, Z], [m([[1], [0]]), m([[0, 1]])])
    rep = acyclicity_check(right_exact, -1)
    ok = rep.verdict == "acyclic" and homology_at(right_exact, 2).is_zero()
    ok &= generic_euler_char(right_exact) == 0
    rng = random.Random(10)
    for _ in range(20):
        c = gen.period_complex(rng, ZZ)
        ok &= acyclicity_check(c, -1).verdict == "acyclic" and homology_at(c, 3).is_zero()
    return bool(ok)


def test_criterion_10_homology(capsys):
    start = time.perf_counter()
    counts, sample = _suites([("lowhi", 300, None), ("acyclicity", 300, None),
                              ("acycunm", 300, None), ("period", 100, None)])
    examples = _examples_10()
    elapsed = time.perf_counter() - start
    ok = examples and not any(counts.values()) and elapsed < 120
    _line(capsys, 10, ok, f"{_fmt(counts)}; examples {examples}; {elapsed:.1f} s (< 120 s)")
    assert ok, sample[:1]


def test_direct_sum_example_length():
    # the split example quoted alongside criterion 6
    assert str(verify_semi_additivity(
        make_map(free_module(ZZ, 1), direct_sum(free_module(ZZ, 1), cyclic_module(ZZ, 2)),
                 RingMatrix.from_rows(ZZ, [[1], [0]])),
        make_map(direct_sum(free_module(ZZ, 1), cyclic_module(ZZ, 2)), cyclic_module(ZZ, 2),
                 RingMatrix.from_rows(ZZ, [[0, 1]])),
    ).len_m) == "w+1"
