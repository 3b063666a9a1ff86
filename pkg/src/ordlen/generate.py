"""Random instances: ordinals, posets, expressions, modules, exact sequences, complexes."""

from __future__ import annotations

import random
from typing import Any

from .euclid import LocalIntegers, PolyFp, Ring, RingMatrix, ZZ, column_span_basis, kernel_basis
from .homology import ModuleComplex
from .module import (
    FgModule,
    ModuleMap,
    _preimage_basis,
    direct_sum,
    free_module,
    module_from_factors,
    quotient_by,
)
from .ordinal import Ordinal
from .pwo import Chain, Explicit, FinitePoset, Product, PwoExpr, Sum, has_max, make_poset, expr_size

CONTEXTS: dict[str, Ring] = {"Z": ZZ, "Z_(3)": LocalIntegers(3), "F_2[x]": PolyFp(2)}


def ordinal(rng: random.Random, max_degree: int = 3, max_coef: int = 3, density: float = 0.6) -> Ordinal:
    return Ordinal.from_coefficients(
        {e: rng.randint(1, max_coef) for e in range(max_degree + 1) if rng.random() < density}
    )


def poset(rng: random.Random, max_n: int = 7, p: float | None = None, min_n: int = 0) -> FinitePoset:
    n = rng.randint(min_n, max_n)
    p = rng.choice([0.15, 0.3, 0.5]) if p is None else p
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return make_poset(n, pairs)


def pwoexpr(rng: random.Random, max_size: int = 60, depth: int = 3) -> PwoExpr:
    """A finite expression; left summands of sums always have a maximum."""
    while True:
        e = _expr(rng, depth)
        if 1 <= expr_size(e) <= max_size:
            return e


def _expr(rng: random.Random, depth: int) -> PwoExpr:
    r = rng.random()
    if depth == 0 or r < 0.3:
        if rng.random() < 0.5:
            return Chain(Ordinal.of(rng.randint(0, 5)))
        return Explicit(poset(rng, 5))
    left, right = _expr(rng, depth - 1), _expr(rng, depth - 1)
    if r < 0.65:
        for _ in range(10):
            if has_max(left):
                break
            left = _expr(rng, depth - 1)
        else:
            left = Chain(Ordinal.of(rng.randint(1, 5)))
        return Sum(left, right)
    return Product(left, right)


# ------------------------------------------------------------------ modules


def element(rng: random.Random, ring: Ring, size: int | None = None) -> Any:
    if isinstance(ring, PolyFp):
        return ring.random_element(rng, 3 if size is None else size)
    return ring.random_element(rng, 9 if size is None else size)


def matrix(rng: random.Random, ring: Ring, rows: int, cols: int, size: int | None = None,
           zero_rate: float = 0.3) -> RingMatrix:
    return RingMatrix.from_rows(
        ring,
        [[ring.zero if rng.random() < zero_rate else element(rng, ring, size) for _ in range(cols)]
         for _ in range(rows)],
        cols,
    )


def module(rng: random.Random, ring: Ring, max_gens: int = 5, max_rels: int = 5) -> FgModule:
    g = rng.randint(0, max_gens)
    k = rng.randint(0, max_rels)
    return FgModule(ring, g, matrix(rng, ring, g, k))


def unimodular(rng: random.Random, ring: Ring, n: int, steps: int | None = None) -> tuple[RingMatrix, RingMatrix]:
    """A random invertible matrix and its inverse, from elementary operations."""
    u = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    v = [row[:] for row in u]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = element(rng, ring, 2 if not isinstance(ring, PolyFp) else 1)
        # row_i += c row_j on u; col_j -= c col_i on v keeps v = u^-1
        u[i] = [a + c * b for a, b in zip(u[i], u[j])]
        for row in v:
            row[j] = row[j] - c * row[i]
    if n >= 2 and rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        u[i], u[j] = u[j], u[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
    return RingMatrix.from_rows(ring, u, n), RingMatrix.from_rows(ring, v, n)


def disguise(rng: random.Random, m: FgModule) -> tuple[FgModule, RingMatrix, RingMatrix]:
    """Another presentation of ``m``: change of generators plus redundant relations.

    Returns the new module with the matrices of the isomorphisms
    ``m -> new`` and ``new -> m``.
    """
    R = m.ring
    u, v = unimodular(rng, R, m.generators)
    rel = u @ m.relations
    extra = rng.randint(0, 2) if rel.cols else 0
    if extra:
        rel = rel.hstack(rel @ matrix(rng, R, rel.cols, extra, 2))
    cols = rel.columns()
    rng.shuffle(cols)
    return FgModule(R, m.generators, RingMatrix.from_columns(R, cols, m.generators)), u, v


def short_exact(rng: random.Random, ring: Ring, split: bool = False) -> tuple[ModuleMap, ModuleMap]:
    """``0 -> N -> M -> Q -> 0`` as (inclusion, projection)."""
    if split:
        n, q = module(rng, ring, 3, 3), module(rng, ring, 3, 3)
        m0 = direct_sum(n, q)
        m, u, v = disguise(rng, m0)
        gn, gq = n.generators, q.generators
        incl0 = RingMatrix.from_rows(ring, [[ring.one if i == j else ring.zero for j in range(gn)]
                                            for i in range(gn + gq)], gn)
        proj0 = RingMatrix.from_rows(ring, [[ring.one if j == gn + i else ring.zero for j in range(gn + gq)]
                                            for i in range(gq)], gn + gq)
        return ModuleMap(n, m, u @ incl0), ModuleMap(m, q, proj0 @ v)
    m = module(rng, ring)
    return sequence_from(m, matrix(rng, ring, m.generators, rng.randint(0, 5)))


def sequence_from(m: FgModule, a: RingMatrix) -> tuple[ModuleMap, ModuleMap]:
    """``0 -> N -> M -> M/N -> 0`` for ``N`` generated by the columns of ``a``."""
    s = a.cols
    n = FgModule(m.ring, s, _preimage_basis(a, m.relations, s))
    q = quotient_by(m, a)
    return ModuleMap(n, m, a), ModuleMap(m, q, RingMatrix.identity(m.ring, m.generators))


def finite_module_of_type(rng: random.Random, m: FgModule) -> FgModule:
    return disguise(rng, m)[0]


# ---------------------------------------------------------------- complexes


def _combos(rng: random.Random, basis: RingMatrix, k: int, size: int = 2) -> RingMatrix:
    R = basis.ring
    if basis.cols == 0:
        return RingMatrix.zeros(R, basis.rows, k)
    return basis @ matrix(rng, R, basis.cols, k, size)


def _lattice_generators(rng: random.Random, basis: RingMatrix, extra: int,
                        scale: list[Any] | None = None) -> RingMatrix:
    """Columns spanning ``basis`` (or a scaled sublattice), mixed and shuffled."""
    R = basis.ring
    u, _ = unimodular(rng, R, basis.cols)
    b = basis @ u
    if scale:
        b = RingMatrix.from_columns(R, [[x * s for x in c] for c, s in zip(b.columns(), scale)], b.rows)
    cols = b.columns() + _combos(rng, b, extra).columns()
    rng.shuffle(cols)
    return RingMatrix.from_columns(R, cols, basis.rows)


def complex_(rng: random.Random, ring: Ring, t: int, *, free: bool = False, exact_left: bool = True,
             torsion_homology: bool = False) -> ModuleComplex:
    """A complex exact at every ``i < t`` (up to finite homology when
    ``torsion_homology``); exact at ``t`` too when ``exact_left``.

    Built right to left: each new module maps onto the cycles of the
    previous one, and its relations are drawn inside its own cycle lattice.
    """
    R = ring
    g0 = rng.randint(1, 3)
    mods: list[FgModule] = []
    maps: list[RingMatrix] = []
    rel0 = RingMatrix.zeros(R, g0, 0) if free else matrix(rng, R, g0, rng.randint(0, 2))
    mods.append(FgModule(R, g0, rel0))
    for i in range(1, t + 1):
        prev = mods[-1]
        cyc = RingMatrix.identity(R, prev.generators) if i == 1 else \
            _preimage_basis(maps[-1], mods[-2].relations, prev.generators)
        scale = None
        if torsion_homology and cyc.cols and rng.random() < 0.5:
            scale = [R.one if rng.random() < 0.6 else _nonunit(rng, R) for _ in range(cyc.cols)]
        a = _lattice_generators(rng, cyc, rng.randint(0, 2), scale)
        maps.append(a)
        g = a.cols
        ker = _preimage_basis(a, prev.relations, g)
        if free:
            rel = RingMatrix.zeros(R, g, 0)
        elif i == t and exact_left:
            rel = ker
        else:
            rel = _combos(rng, ker, rng.randint(0, 2)) if ker.cols else RingMatrix.zeros(R, g, 0)
        mods.append(FgModule(R, g, rel))
    if free and exact_left:
        # a free left end is injective only if its map has full column rank
        a = maps[-1]
        ker = kernel_basis(a)
        if ker.cols:
            img = column_span_basis(a)
            maps[-1] = img
            mods[-1] = FgModule(R, img.cols, RingMatrix.zeros(R, img.cols, 0))
    return ModuleComplex(tuple(mods), tuple(maps))


def _nonunit(rng: random.Random, ring: Ring) -> Any:
    if isinstance(ring, PolyFp):
        return ring.poly([rng.randrange(ring.p), 1])
    if isinstance(ring, LocalIntegers):
        return ring.from_int(ring.p)
    return ring.from_int(rng.choice([2, 3, 4, 6]))


def period_complex(rng: random.Random, ring: Ring) -> ModuleComplex:
    """``0 -> N -> M -> M -> N -> 0`` with ``M = N + P`` (disguised), exact at
    ``i < 3``, ``N`` unmixed and of the same dimension as ``M``."""
    R = ring
    if rng.random() < 0.5:
        n = free_module(R, rng.randint(1, 2))
        p = module(rng, R, 2, 2)
    else:
        n = module_from_factors(R, [_nonunit(rng, R) for _ in range(rng.randint(1, 2))])
        p = module_from_factors(R, [_nonunit(rng, R) for _ in range(rng.randint(0, 2))])
    gn, gp = n.generators, p.generators
    m0 = direct_sum(n, p)
    m, u, v = disguise(rng, m0)
    zero, one = R.zero, R.one
    gm = gn + gp
    # d1: (a, b) -> a ; d2: (a, b) -> (0, b + phi(a)) ; d3: a -> (a, -phi(a))
    phi = _hom_to(rng, n, p)
    proj = RingMatrix.from_rows(R, [[one if j == i else zero for j in range(gm)] for i in range(gn)], gm)
    d2 = [[zero] * gm for _ in range(gm)]
    for i in range(gp):
        d2[gn + i][gn + i] = one
        for j in range(gn):
            d2[gn + i][j] = phi[i, j]
    d2m = RingMatrix.from_rows(R, d2, gm)
    inc = RingMatrix.from_rows(
        R, [[one if i == j else zero for j in range(gn)] for i in range(gn)]
        + [[-phi[i, j] for j in range(gn)] for i in range(gp)], gn)
    d1 = proj @ v
    d2c = u @ d2m @ v
    d3 = u @ inc
    return ModuleComplex((n, m, m, n), (d1, d2c, d3))


def _hom_to(rng: random.Random, n: FgModule, p: FgModule) -> RingMatrix:
    """Matrix of a random well-defined map ``n -> p`` (n free or diagonal)."""
    R = n.ring
    cols = []
    for j in range(n.generators):
        ann = None
        for c in n.relations.columns():
            if c[j] != R.zero:
                ann = c[j]
        if ann is None:
            cols.append([element(rng, R, 2) for _ in range(p.generators)])
        else:
            # images killed by ann: multiples of the annihilator-quotient of p's factors
            col = []
            for i in range(p.generators):
                d = None
                for c in p.relations.columns():
                    if c[i] != R.zero:
                        d = c[i]
                if d is None:
                    col.append(R.zero)
                else:
                    g = R.gcd(d, ann)
                    col.append(R.exact_div(d, g) * element(rng, R, 2))
            cols.append(col)
    if not cols:
        return RingMatrix.zeros(R, p.generators, 0)
    return RingMatrix.from_columns(R, cols, p.generators)
