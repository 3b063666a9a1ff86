"""Element-level model of finite modules, for lattice and Hom brute force.

A finite module is tabulated through its diagonal presentation.  Its
additive group is a product of cyclic groups (one per invariant factor over
Z and Z_(p); ``deg d`` copies of ``Z/p`` per factor over F_p[x]), and
elements are indexed in C order on those additive coordinates, so index 0
is zero.  Over F_p[x] the action of ``x`` is kept as a permutation table;
over the other contexts every additive subgroup is already a submodule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from typing import Any, Iterator, NamedTuple

import numpy as np

from .euclid import Integers, LocalIntegers, Poly, PolyFp, Ring, RingMatrix
from .module import (
    FgModule,
    canonical_presentation,
    is_isomorphic,
    module_from_factors,
    quotient_by,
)
from .pwo import FinitePoset, rank_all

MAX_ELEMENTS = 64
_CHUNK_CELLS = 1 << 22
_POW2 = np.left_shift(np.uint64(1), np.arange(64, dtype=np.uint64))


class FiniteModuleError(ValueError):
    pass


def _pack(flags: np.ndarray) -> np.ndarray:
    """Rows of booleans (width <= 64) to uint64 bitmasks, bit i = column i."""
    width = flags.shape[1]
    padded = np.zeros((flags.shape[0], 64), dtype=bool)
    padded[:, :width] = flags
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").ravel()


class FiniteModule:
    def __init__(self, m: FgModule, bound: int = MAX_ELEMENTS):
        if not m.is_finite():
            raise FiniteModuleError("module is infinite")
        size = m.order()
        if size > bound or size > MAX_ELEMENTS:
            raise FiniteModuleError(f"module has {size} elements, above bound {min(bound, MAX_ELEMENTS)}")
        self.module = m
        self.ring = R = m.ring
        canon, self.to_canon, self.from_canon = canonical_presentation(m)
        self.canon = canon
        self.factors = tuple(canon.relations[i, i] for i in range(canon.generators))
        self.poly = isinstance(R, PolyFp)
        orders: list[int] = []
        self.blocks: list[tuple[int, int]] = []
        for d in self.factors:
            start = len(orders)
            if self.poly:
                orders.extend([R.p] * d.degree)
            else:
                orders.append(R.residue_count(d))
            self.blocks.append((start, len(orders)))
        self.orders = np.array(orders, dtype=np.int64)
        self.size = size
        self.coords = np.array(list(np.ndindex(*orders)) if orders else [()], dtype=np.int64).reshape(size, len(orders))
        self.strides = np.array(
            [int(np.prod(orders[b + 1:])) for b in range(len(orders))], dtype=np.int64
        )
        s = (self.coords[:, None, :] + self.coords[None, :, :]) % self.orders
        self.add = (s @ self.strides).astype(np.uint8) if orders else np.zeros((1, 1), dtype=np.uint8)
        self.neg = ((-self.coords) % self.orders) @ self.strides if orders else np.zeros(1, dtype=np.int64)
        self.mulx = self._mulx_table() if self.poly else None
        # module generators = canonical generators, with their annihilators
        self.gen_index = [self.index_of([R.one if k == i else R.zero for k in range(len(self.factors))])
                          for i in range(len(self.factors))]

    # -- conversions
    def _coords_of(self, vec) -> list[int]:
        R = self.ring
        out = []
        for d, x in zip(self.factors, vec):
            r = R.reduce(x, d)
            if self.poly:
                cs = list(r.coeffs) + [0] * (d.degree - len(r.coeffs))
                out.extend(cs)
            else:
                out.append(int(r))
        return out

    def index_of(self, canon_vec) -> int:
        """Index of the element with the given coordinates in the canonical presentation."""
        if not self.factors:
            return 0
        return int(np.dot(self._coords_of(canon_vec), self.strides))

    def index_of_original(self, vec) -> int:
        return self.index_of(self.to_canon.matrix.apply(vec))

    def canon_vector(self, idx: int) -> list[Any]:
        R = self.ring
        c = self.coords[idx]
        out = []
        for (a, b) in self.blocks:
            if self.poly:
                out.append(R.poly(int(v) for v in c[a:b]))
            else:
                out.append(R.from_int(int(c[a])))
        return out

    def original_vector(self, idx: int) -> tuple[Any, ...]:
        return self.from_canon.matrix.apply(self.canon_vector(idx))

    def _mulx_table(self) -> np.ndarray:
        c = self.coords
        new = np.zeros_like(c)
        p = self.ring.p
        for d, (a, b) in zip(self.factors, self.blocks):
            n = b - a
            top = c[:, b - 1]
            dc = np.array(d.coeffs[:n], dtype=np.int64)
            new[:, a] = (-top * dc[0]) % p
            if n > 1:
                new[:, a + 1:b] = (c[:, a:b - 1] - top[:, None] * dc[None, 1:]) % p
        return new @ self.strides

    # -- actions
    def multiple(self, k: int, idx: np.ndarray) -> np.ndarray:
        return ((self.coords[idx] * k) % self.orders) @ self.strides

    def act(self, r: Any, idx: np.ndarray) -> np.ndarray:
        """Scalar action of a ring element on an array of element indices."""
        idx = np.asarray(idx, dtype=np.int64)
        if not self.factors:
            return np.zeros_like(idx)
        if not self.poly:
            R = self.ring
            k = r if isinstance(R, Integers) else R.reduce(r, R.from_int(int(self.orders.max())))
            return self.multiple(int(k), idx)
        out = np.zeros_like(idx)
        for c in reversed(r.coeffs):
            out = self.add[self.mulx[out], self.multiple(c, idx)]
        return out

    def additive_generators(self, idx: int) -> list[int]:
        """Elements whose additive span is the cyclic submodule of ``idx``."""
        if not self.poly:
            return [idx]
        gens, cur = [], idx
        for _ in range(len(self.orders)):
            gens.append(cur)
            cur = int(self.mulx[cur])
        return gens

    def span(self, gens: list[int], start: np.ndarray | None = None) -> np.ndarray:
        """Sorted element indices of the additive span of ``gens`` (plus ``start``)."""
        cur = np.array([0], dtype=np.int64) if start is None else start
        for g in gens:
            mults = [0]
            m = g
            while m != 0:
                mults.append(m)
                m = int(self.add[m, g])
            cur = np.unique(self.add[cur[:, None], np.array(mults)[None, :]])
        return cur

    def mask(self, elems: np.ndarray) -> int:
        out = 0
        for e in elems.tolist():
            out |= 1 << e
        return out

    @cached_property
    def lattice(self) -> "SubmoduleLattice":
        return _lattice(self)


@dataclass
class SubmoduleLattice:
    """All submodules of a finite module, ordered by reverse inclusion."""

    masks: list[int]
    generators: list[list[int]]
    poset: FinitePoset
    rank: tuple[int, ...]
    height: tuple[int, ...]
    index: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.masks)


def _lattice(fm: FiniteModule) -> SubmoduleLattice:
    zero = np.array([0], dtype=np.int64)
    cyclic: dict[int, tuple[int, np.ndarray]] = {}
    for y in range(fm.size):
        elems = fm.span(fm.additive_generators(y))
        cyclic.setdefault(fm.mask(elems), (y, elems))
    cyc = sorted(cyclic.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
    masks = [1]
    elems_of = {1: zero}
    gens = {1: []}
    queue = [1]
    while queue:
        nxt = []
        for s in queue:
            for cmask, (y, celems) in cyc:
                if cmask & ~s == 0:
                    continue
                j = np.unique(fm.add[elems_of[s][:, None], celems[None, :]])
                jm = fm.mask(j)
                if jm not in elems_of:
                    elems_of[jm] = j
                    gens[jm] = gens[s] + [y]
                    masks.append(jm)
                    nxt.append(jm)
        queue = nxt
    masks.sort(key=lambda m: (-m.bit_count(), m))
    n = len(masks)
    arr = np.array(masks, dtype=np.uint64)
    # contains[i, j]: submodule i contains submodule j, i.e. i <= j in reverse inclusion
    contains = (arr[None, :] & ~arr[:, None]) == 0
    packed = np.packbits(contains, axis=0, bitorder="little")
    down = tuple(int.from_bytes(packed[:, j].tobytes(), "little") for j in range(n))
    poset = FinitePoset(n, down)
    rank = rank_all(poset).rank
    height = rank_all(FinitePoset(n, poset.up)).rank
    return SubmoduleLattice(masks, [gens[m] for m in masks], poset, rank, height,
                            {m: i for i, m in enumerate(masks)})


def submodule_presentation(fm: FiniteModule, gens: list[int]) -> RingMatrix:
    """Columns (in the original presentation) generating the submodule."""
    R = fm.ring
    cols = [fm.original_vector(y) for y in gens]
    return RingMatrix.from_columns(R, cols, fm.module.generators)


# ------------------------------------------------------------- Hom engine


class HomSummary(NamedTuple):
    count: int
    min_kernel: int
    min_cokernel: int
    has_injective: bool
    has_surjective: bool
    surjective_not_injective: tuple[int, ...] | None
    image_max_kernel: dict[int, int]


def hom_candidates(src: FiniteModule, dst: FiniteModule) -> list[np.ndarray]:
    """For each generator of ``src``, the elements of ``dst`` its annihilator kills."""
    allidx = np.arange(dst.size, dtype=np.int64)
    return [allidx[dst.act(d, allidx) == 0] for d in src.factors]


def _basis_images(src: FiniteModule, dst: FiniteModule, y: np.ndarray) -> list[np.ndarray]:
    """Images of the additive basis of ``src`` given generator images ``y`` (chunk x gens)."""
    out = []
    for i, (a, b) in enumerate(src.blocks):
        cur = y[:, i]
        for _ in range(a, b):
            out.append(cur)
            if src.poly:
                cur = dst.mulx[cur]
    return out


def hom_images(src: FiniteModule, dst: FiniteModule, y: np.ndarray) -> np.ndarray:
    """Images of all elements of ``src`` (in index order) for each row of ``y``."""
    basis = _basis_images(src, dst, y)
    flat = dst.add.ravel()
    n = np.uint16(dst.size)
    img = np.zeros((y.shape[0], 1), dtype=np.uint8)
    for b in reversed(range(len(basis))):
        z = basis[b].astype(np.uint16)
        parts = []
        mult = np.zeros(len(z), dtype=np.uint16)
        for _ in range(int(src.orders[b])):
            parts.append(flat.take(img + (mult * n)[:, None]))
            mult = flat.take(mult * n + z).astype(np.uint16)
        img = np.concatenate(parts, axis=1)
    return img


def iter_homs(src: FiniteModule, dst: FiniteModule, chunk: int | None = None) -> Iterator[np.ndarray]:
    """Chunks of generator-image tuples (rows) enumerating Hom(src, dst)."""
    cands = hom_candidates(src, dst)
    dims = [len(c) for c in cands]
    total = int(np.prod(dims, dtype=object)) if dims else 1
    if chunk is None:
        chunk = max(1, _CHUNK_CELLS // max(src.size, 1))
    for start in range(0, total, chunk):
        lin = np.arange(start, min(total, start + chunk), dtype=np.int64)
        if not dims:
            yield np.zeros((len(lin), 0), dtype=np.int64)
            continue
        digits = np.unravel_index(lin, dims)
        yield np.stack([c[dg] for c, dg in zip(cands, digits)], axis=1)


def hom_count(src: FiniteModule, dst: FiniteModule) -> int:
    out = 1
    for c in hom_candidates(src, dst):
        out *= len(c)
    return out


def summarize_homs(src: FiniteModule, dst: FiniteModule) -> HomSummary:
    """Scan all of Hom(src, dst): kernel and cokernel lengths read off the
    submodule lattices (kernel: chain length below it; cokernel: rank of the
    image in the reverse-inclusion order)."""
    ls, ld = src.lattice, dst.lattice
    full = (1 << dst.size) - 1
    count = 0
    min_k = min_c = None
    has_inj = has_surj = False
    bad = None
    image_max_kernel: dict[int, int] = {}
    for y in iter_homs(src, dst):
        img = hom_images(src, dst, y)
        kmask = _pack(img == 0)
        imask = np.bitwise_or.reduce(_POW2.take(img), axis=1)
        ku, kinv = np.unique(kmask, return_inverse=True)
        iu, iinv = np.unique(imask, return_inverse=True)
        kh = np.array([ls.height[ls.index[int(m)]] for m in ku])[kinv]
        cr = np.array([ld.rank[ld.index[int(m)]] for m in iu])[iinv]
        count += len(y)
        kmin, cmin = int(kh.min()), int(cr.min())
        min_k = kmin if min_k is None else min(min_k, kmin)
        min_c = cmin if min_c is None else min(min_c, cmin)
        has_inj |= bool((kh == 0).any())
        surj = imask == np.uint64(full)
        has_surj |= bool(surj.any())
        if bad is None:
            hit = np.nonzero(surj & (kh != 0))[0]
            if len(hit):
                bad = tuple(int(v) for v in y[hit[0]])
        best = np.full(len(iu), -1, dtype=np.int64)
        np.maximum.at(best, iinv, kh)
        for m, k in zip(iu.tolist(), best.tolist()):
            if image_max_kernel.get(m, -1) < k:
                image_max_kernel[m] = k
    return HomSummary(count, min_k, min_c, has_inj, has_surj, bad, image_max_kernel)


def has_complement(fm: FiniteModule, mask: int) -> bool:
    arr = np.array(fm.lattice.masks, dtype=np.uint64)
    sizes = np.array([m.bit_count() for m in fm.lattice.masks])
    ok = ((arr & np.uint64(mask)) == np.uint64(1)) & (sizes * mask.bit_count() == fm.size)
    return bool(ok.any())


def quotient_module(fm: FiniteModule, mask: int) -> FgModule:
    lat = fm.lattice
    gens = lat.generators[lat.index[mask]]
    return quotient_by(fm.module, submodule_presentation(fm, gens))


def hom_map_matrix(src: FiniteModule, dst: FiniteModule, y: tuple[int, ...]) -> RingMatrix:
    """Matrix between the original presentations for generator images ``y``."""
    R = src.ring
    images = [dst.original_vector(v) for v in y]
    canon_cols = RingMatrix.from_columns(R, images, dst.module.generators) if images else \
        RingMatrix.zeros(R, dst.module.generators, 0)
    return canon_cols @ src.to_canon.matrix


# ----------------------------------------------------- iso type enumeration


def _irreducibles(ring: Ring, max_order: int) -> list[Any]:
    if isinstance(ring, Integers):
        return [ring.from_int(q) for q in range(2, max_order + 1) if all(q % k for k in range(2, int(q ** 0.5) + 1))]
    if isinstance(ring, LocalIntegers):
        return [ring.from_int(ring.p)] if ring.p <= max_order else []
    if isinstance(ring, PolyFp):
        out = []
        deg = 1
        while ring.p ** deg <= max_order:
            out.extend(f for f in ring.monic_polys(deg) if ring.factor_count(f) == 1)
            deg += 1
        return out
    raise TypeError(f"unsupported ring {ring!r}")


def finite_modules(ring: Ring, max_order: int) -> list[FgModule]:
    """One module per isomorphism type with at most ``max_order`` elements."""
    powers = []
    for pi in _irreducibles(ring, max_order):
        q = ring.residue_count(pi)
        k, size = 1, q
        while size <= max_order:
            powers.append((size, pi, k))
            k += 1
            size *= q
    out: list[list[tuple[int, Any, int]]] = []

    def rec(start: int, budget: int, acc: list) -> None:
        out.append(list(acc))
        for i in range(start, len(powers)):
            size = powers[i][0]
            if size <= budget:
                acc.append(powers[i])
                rec(i, budget // size, acc)
                acc.pop()

    rec(0, max_order, [])
    mods = []
    for combo in out:
        factors = []
        for _, pi, k in combo:
            f = ring.one
            for _ in range(k):
                f = f * pi
            factors.append(f)
        mods.append(module_from_factors(ring, factors))
    mods.sort(key=lambda m: (m.order(), str(m.canonical.invariant_factors)))
    return mods
