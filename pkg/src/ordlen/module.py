"""Finitely generated modules over the PID contexts of :mod:`ordlen.euclid`.

A module is ``R^g`` modulo the column span of a ``g x k`` relation matrix.
Over these one-dimensional domains the ordinal length is determined by the
structure theorem: ``len(R^f + R/(d_1) + ... ) = f*w + sum(Omega(d_i))``,
each free summand contributing ``w`` and the torsion its finite length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, NamedTuple, Sequence

from .euclid import (
    Ring,
    RingMatrix,
    column_span_basis,
    kernel_basis,
    membership_solve,
    smith_normal_form,
)
from .ordinal import Ordinal, ord_sum, shuffle_sum, split

__all__ = [
    "FgModule",
    "CanonicalForm",
    "ModuleMap",
    "MapParts",
    "MapError",
    "SemiAdditivityReport",
    "canonical_form",
    "length",
    "dimension",
    "generic_length",
    "is_unmixed",
    "is_isomorphic",
    "make_map",
    "map_parts",
    "kernel_inclusion",
    "find_retraction",
    "verify_semi_additivity",
    "free_module",
    "cyclic_module",
    "module_from_factors",
    "direct_sum",
    "quotient_by",
    "identity_map",
    "zero_map",
    "compose",
    "canonical_presentation",
    "enumerate_submodules",
    "kappa_gamma",
    "is_injective",
    "is_surjective",
    "check_short_exact",
]


class MapError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FgModule:
    ring: Ring
    generators: int
    relations: RingMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.generators:
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows for {self.generators} generators"
            )
        if self.relations.ring != self.ring:
            raise ValueError("relation matrix is over a different ring")

    @cached_property
    def canonical(self) -> "CanonicalForm":
        return _canonical_form(self)

    def is_zero(self) -> bool:
        return self.canonical.is_zero()

    def is_finite(self) -> bool:
        return self.canonical.free_rank == 0

    def order(self) -> int:
        """Number of elements of a finite module."""
        if not self.is_finite():
            raise ValueError("module is infinite")
        n = 1
        for d in self.canonical.invariant_factors:
            n *= self.ring.residue_count(d)
        return n

    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.to_json(),
            "generators": self.generators,
            "relations": [[R.element_to_json(x) for x in r] for r in self.relations.entries],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FgModule):
            return NotImplemented
        return self.ring == other.ring and self.generators == other.generators and self.relations == other.relations

    def __hash__(self) -> int:
        return hash((self.generators, self.relations))

    def __str__(self) -> str:
        return self.canonical.describe(self.ring)

    def __repr__(self) -> str:
        return f"FgModule({self.ring}, g={self.generators}, k={self.relations.cols}: {self})"


@dataclass(frozen=True)
class CanonicalForm:
    free_rank: int
    invariant_factors: tuple[Any, ...]

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def describe(self, ring: Ring) -> str:
        parts = [f"{ring}/({d})" for d in self.invariant_factors]
        if self.free_rank:
            parts.insert(0, str(ring) if self.free_rank == 1 else f"{ring}^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _canonical_form(m: FgModule) -> CanonicalForm:
    R = m.ring
    snf = smith_normal_form(m.relations)
    factors = tuple(d for d in snf.d if not R.is_unit(d))
    return CanonicalForm(m.generators - snf.rank, factors)


def canonical_form(m: FgModule) -> CanonicalForm:
    return m.canonical


def length(m: FgModule) -> Ordinal:
    cf = m.canonical
    finite = sum(m.ring.factor_count(d) for d in cf.invariant_factors)
    return Ordinal.from_coefficients({1: cf.free_rank, 0: finite})


def dimension(m: FgModule) -> int:
    return length(m).degree


def generic_length(m: FgModule) -> int:
    mu = length(m)
    return mu.coefficient(mu.degree) if mu else 0


def is_unmixed(m: FgModule) -> bool:
    mu = length(m)
    return len(mu.terms) <= 1


def is_isomorphic(m: FgModule, n: FgModule) -> bool:
    return m.ring == n.ring and m.canonical == n.canonical


# -------------------------------------------------------------- constructors


def free_module(ring: Ring, rank: int) -> FgModule:
    return FgModule(ring, rank, RingMatrix.zeros(ring, rank, 0))


def module_from_factors(ring: Ring, factors: Sequence[Any], free_rank: int = 0) -> FgModule:
    """``R^free_rank`` plus one cyclic summand ``R/(d)`` per factor."""
    g = free_rank + len(factors)
    cols = []
    for k, d in enumerate(factors):
        col = [ring.zero] * g
        col[free_rank + k] = d
        cols.append(col)
    return FgModule(ring, g, RingMatrix.from_columns(ring, cols, g))


def cyclic_module(ring: Ring, d: Any) -> FgModule:
    return module_from_factors(ring, [d])


def direct_sum(*modules: FgModule) -> FgModule:
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    ring = modules[0].ring
    g = sum(m.generators for m in modules)
    cols = []
    offset = 0
    for m in modules:
        for c in m.relations.columns():
            col = [ring.zero] * g
            col[offset:offset + m.generators] = c
            cols.append(col)
        offset += m.generators
    return FgModule(ring, g, RingMatrix.from_columns(ring, cols, g))


def quotient_by(m: FgModule, gens: RingMatrix) -> FgModule:
    """``m`` modulo the submodule generated by the columns of ``gens``."""
    return FgModule(m.ring, m.generators, m.relations.hstack(gens))


def canonical_presentation(m: FgModule) -> tuple[FgModule, "ModuleMap", "ModuleMap"]:
    """Diagonal presentation ``c`` of ``m`` with isomorphisms ``m -> c -> m``.

    Generators of ``c`` are ordered free part first, then the invariant
    factors in divisibility order.
    """
    R = m.ring
    snf = smith_normal_form(m.relations)
    torsion = [k for k, d in enumerate(snf.d) if not R.is_unit(d)]
    free = list(range(snf.rank, m.generators))
    keep = free + torsion
    c = module_from_factors(R, [snf.d[k] for k in torsion], len(free))
    to_c = ModuleMap(m, c, snf.u.select_rows(keep))
    from_c = ModuleMap(c, m, snf.u_inv.select_columns(keep))
    return c, to_c, from_c


# ------------------------------------------------------------------- maps


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Homomorphism given on generators: column ``j`` is the image of
    source generator ``j`` in target generator coordinates."""

    source: FgModule
    target: FgModule
    matrix: RingMatrix

    def to_json(self) -> dict:
        R = self.source.ring
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": [[R.element_to_json(x) for x in r] for r in self.matrix.entries],
        }


def _in_span(a: RingMatrix, vec: Sequence[Any], snf=None) -> bool:
    if a.cols == 0:
        return all(x == a.ring.zero for x in vec)
    return membership_solve(a, vec, snf) is not None


def _spans_contained(x: RingMatrix, y: RingMatrix) -> bool:
    """Column span of ``x`` inside that of ``y``."""
    if x.cols == 0:
        return True
    snf = smith_normal_form(y) if y.cols else None
    return all(_in_span(y, c, snf) for c in x.columns())


def make_map(source: FgModule, target: FgModule, matrix: RingMatrix) -> ModuleMap:
    if matrix.rows != target.generators or matrix.cols != source.generators:
        raise MapError(
            f"matrix is {matrix.rows}x{matrix.cols}, expected {target.generators}x{source.generators}"
        )
    images = matrix @ source.relations
    snf = smith_normal_form(target.relations) if target.relations.cols else None
    for j, col in enumerate(images.columns()):
        if not _in_span(target.relations, col, snf):
            raise MapError(f"not well defined: source relation {j} maps outside the target relations")
    return ModuleMap(source, target, matrix)


def identity_map(m: FgModule) -> ModuleMap:
    return ModuleMap(m, m, RingMatrix.identity(m.ring, m.generators))


def zero_map(m: FgModule, n: FgModule) -> ModuleMap:
    return ModuleMap(m, n, RingMatrix.zeros(m.ring, n.generators, m.generators))


def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """``g o f``."""
    if f.target != g.source:
        raise MapError("maps are not composable")
    return ModuleMap(f.source, g.target, g.matrix @ f.matrix)


def is_zero_map(f: ModuleMap) -> bool:
    return _spans_contained(f.matrix, f.target.relations)


def _preimage_basis(a: RingMatrix, t: RingMatrix, rows: int) -> RingMatrix:
    """Basis of ``{x in R^rows : a x in span(t)}``."""
    R = a.ring
    big = a.hstack(t)
    if big.cols == 0:
        return RingMatrix.zeros(R, rows, 0)
    k = kernel_basis(big)
    top = k.select_rows(range(rows))
    if top.cols == 0:
        return top
    return column_span_basis(top)


def _coordinates(basis: RingMatrix, vectors: RingMatrix) -> RingMatrix:
    """Solve ``basis @ c = vectors`` column by column (basis has full column rank)."""
    R = basis.ring
    if vectors.cols == 0:
        return RingMatrix.zeros(R, basis.cols, 0)
    snf = smith_normal_form(basis)
    cols = []
    for v in vectors.columns():
        c = membership_solve(basis, v, snf)
        if c is None:
            raise ArithmeticError("vector outside the submodule")
        cols.append(c)
    return RingMatrix.from_columns(R, cols, basis.cols)


def subquotient(basis: RingMatrix, relations: RingMatrix) -> FgModule:
    """The module ``span(basis) / span(relations)`` for ``relations`` inside
    the span of a free basis."""
    R = basis.ring
    return FgModule(R, basis.cols, _coordinates(basis, relations))


class MapParts(NamedTuple):
    kernel: FgModule
    image: FgModule
    cokernel: FgModule


def _kernel_lattice(f: ModuleMap) -> RingMatrix:
    return _preimage_basis(f.matrix, f.target.relations, f.source.generators)


def map_parts(f: ModuleMap) -> MapParts:
    R = f.source.ring
    pre = _kernel_lattice(f)
    kernel = subquotient(pre, f.source.relations)
    image = FgModule(R, f.source.generators, pre)
    cokernel = quotient_by(f.target, f.matrix)
    return MapParts(kernel, image, cokernel)


def kernel_inclusion(f: ModuleMap) -> ModuleMap:
    pre = _kernel_lattice(f)
    return ModuleMap(subquotient(pre, f.source.relations), f.source, pre)


def is_injective(f: ModuleMap) -> bool:
    return map_parts(f).kernel.is_zero()


def is_surjective(f: ModuleMap) -> bool:
    return quotient_by(f.target, f.matrix).is_zero()


def find_retraction(f: ModuleMap) -> ModuleMap | None:
    """A map ``r: target -> source`` with ``r o f = id``, if one exists.

    Both ends are first moved to diagonal presentations, where the rows of
    the unknown matrix decouple: row ``i`` must send ``f`` to the unit
    vector ``e_i`` and kill the target relations, each modulo the ``i``-th
    invariant factor of the source.  Every row is one exact linear system.
    """
    R = f.source.ring
    n_c, to_n, from_n = canonical_presentation(f.source)
    m_c, to_m, from_m = canonical_presentation(f.target)
    a = to_m.matrix @ f.matrix @ from_n.matrix
    gn, gm = n_c.generators, m_c.generators
    e = _diagonal_of(m_c)
    d = _diagonal_of(n_c)
    torsion = [j for j in range(gm) if e[j] != R.zero]
    rows_x: list[list[Any]] = []
    for i in range(gn):
        slack = d[i] != R.zero
        ncols = gm + ((gn + len(torsion)) if slack else 0)
        eqs, rhs = [], []
        for c in range(gn):
            row = [a[j, c] for j in range(gm)] + [R.zero] * (ncols - gm)
            if slack:
                row[gm + c] = d[i]
            eqs.append(row)
            rhs.append(R.one if c == i else R.zero)
        for k, j in enumerate(torsion):
            row = [R.zero] * ncols
            row[j] = e[j]
            if slack:
                row[gm + gn + k] = d[i]
            eqs.append(row)
            rhs.append(R.zero)
        if not eqs:
            rows_x.append([R.zero] * gm)
            continue
        if ncols == 0:
            if any(x != R.zero for x in rhs):
                return None
            rows_x.append([])
            continue
        sol = membership_solve(RingMatrix.from_rows(R, eqs, ncols), rhs)
        if sol is None:
            return None
        rows_x.append(list(sol[:gm]))
    x = RingMatrix.from_rows(R, rows_x, gm) if gn else RingMatrix.zeros(R, 0, gm)
    return ModuleMap(f.target, f.source, from_n.matrix @ x @ to_m.matrix)


def _diagonal_of(c: FgModule) -> list[Any]:
    """Per-generator annihilators of a diagonal presentation (zero when free)."""
    R = c.ring
    out = [R.zero] * c.generators
    for col in c.relations.columns():
        for i, v in enumerate(col):
            if v != R.zero:
                out[i] = v
    return out


# ----------------------------------------------------------- semi-additivity


@dataclass(frozen=True)
class SemiAdditivityReport:
    len_n: Ordinal
    len_m: Ordinal
    len_q: Ordinal
    lower_bound: Ordinal
    upper_bound: Ordinal
    lower_holds: bool
    upper_holds: bool
    split: bool | None
    split_equality_holds: bool | None

    @property
    def ok(self) -> bool:
        return self.lower_holds and self.upper_holds and self.split_equality_holds is not False

    def to_json(self) -> dict:
        return {
            "len_n": str(self.len_n),
            "len_m": str(self.len_m),
            "len_q": str(self.len_q),
            "lower_bound": str(self.lower_bound),
            "upper_bound": str(self.upper_bound),
            "lower_holds": self.lower_holds,
            "upper_holds": self.upper_holds,
            "split": self.split,
            "split_equality_holds": self.split_equality_holds,
        }


def check_short_exact(n_incl: ModuleMap, q_proj: ModuleMap) -> None:
    """Raise :class:`MapError` unless ``0 -> N -> M -> Q -> 0`` is exact."""
    if n_incl.target != q_proj.source:
        raise MapError("middle modules differ")
    if not is_injective(n_incl):
        raise MapError("first map is not injective")
    if not is_surjective(q_proj):
        raise MapError("second map is not surjective")
    M = n_incl.target
    image_lattice = n_incl.matrix.hstack(M.relations)
    kernel_lattice = _kernel_lattice(q_proj)
    if not (_spans_contained(image_lattice, kernel_lattice) and _spans_contained(kernel_lattice, image_lattice)):
        raise MapError("not exact in the middle")


def verify_semi_additivity(
    n_incl: ModuleMap, q_proj: ModuleMap, *, check_split: bool = True
) -> SemiAdditivityReport:
    check_short_exact(n_incl, q_proj)
    ln, lm, lq = length(n_incl.source), length(n_incl.target), length(q_proj.target)
    lower, upper = ord_sum(lq, ln), shuffle_sum(lq, ln)
    split_ = (find_retraction(n_incl) is not None) if check_split else None
    return SemiAdditivityReport(
        ln, lm, lq, lower, upper,
        lower <= lm, lm <= upper,
        split_,
        (lm == upper) if split_ else None,
    )


def level_equal(a: Ordinal, b: Ordinal, e: int) -> bool:
    return split(a, e)[0] == split(b, e)[0]


# ----------------------------------------------------- finite enumeration


class SubmoduleListing(NamedTuple):
    poset: Any
    labels: list[str]


def enumerate_submodules(m: FgModule, bound: int = 64) -> SubmoduleListing:
    """Every submodule of a finite module, ordered by reverse inclusion (zero on top).

    Labels list generators in the presentation coordinates of ``m``.
    """
    from .finite import FiniteModule

    fm = FiniteModule(m, bound)
    lat = fm.lattice
    labels = []
    for gens in lat.generators:
        vecs = [fm.original_vector(y) for y in gens]
        labels.append("<" + ", ".join("(" + ",".join(map(str, v)) + ")" for v in vecs) + ">" if vecs else "0")
    return SubmoduleListing(lat.poset, labels)


def kappa_gamma(m: FgModule, n: FgModule, bound: int = 64) -> tuple[Ordinal, Ordinal]:
    """Least kernel length and least cokernel length over all of Hom(m, n)."""
    from .finite import FiniteModule, summarize_homs

    s = summarize_homs(FiniteModule(m, bound), FiniteModule(n, bound))
    return Ordinal.of(s.min_kernel), Ordinal.of(s.min_cokernel)
