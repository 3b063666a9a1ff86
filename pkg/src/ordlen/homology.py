"""Finite chain complexes of presented modules, and the length criterion
for acyclicity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .euclid import RingMatrix, ring_from_json
from .module import (
    FgModule,
    _preimage_basis,
    _spans_contained,
    dimension,
    generic_length,
    length,
    make_map,
    MapError,
    subquotient,
)
from .ordinal import Cmp, Ordinal, cmp_at_level, ord_sum_all, shuffle_sum_all, ZERO

__all__ = [
    "ModuleComplex",
    "ComplexError",
    "AcyclicityReport",
    "validate_complex",
    "first_failure",
    "homology_at",
    "lower_length",
    "upper_length",
    "acyclicity_check",
    "generic_euler_char",
]


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class ModuleComplex:
    """``0 -> M_t -> ... -> M_0 -> 0``.

    ``modules[i]`` is ``M_i``; ``maps[i - 1]`` is the matrix of
    ``d_i: M_i -> M_{i-1}``.
    """

    modules: tuple[FgModule, ...]
    maps: tuple[RingMatrix, ...]

    def __post_init__(self) -> None:
        if not self.modules:
            raise ComplexError("a complex needs at least one module")
        if len(self.maps) != len(self.modules) - 1:
            raise ComplexError(f"{len(self.modules)} modules need {len(self.modules) - 1} maps")
        for i, a in enumerate(self.maps, start=1):
            src, dst = self.modules[i], self.modules[i - 1]
            if (a.rows, a.cols) != (dst.generators, src.generators):
                raise ComplexError(
                    f"d_{i} is {a.rows}x{a.cols}, expected {dst.generators}x{src.generators}"
                )

    @property
    def t(self) -> int:
        return len(self.modules) - 1

    @classmethod
    def descending(cls, modules: Sequence[FgModule], maps: Sequence[RingMatrix]) -> "ModuleComplex":
        """From ``[M_t, ..., M_0]`` and ``[d_t, ..., d_1]``."""
        return cls(tuple(reversed(modules)), tuple(reversed(maps)))

    def padded(self, left: int = 0, right: int = 0) -> "ModuleComplex":
        """Same complex with zero modules added at both ends (indices shift by ``right``)."""
        R = self.modules[0].ring
        zero = FgModule(R, 0, RingMatrix.zeros(R, 0, 0))
        mods = [zero] * right + list(self.modules) + [zero] * left
        maps = []
        for i in range(1, len(mods)):
            j = i - right
            if 1 <= j <= self.t:
                maps.append(self.maps[j - 1])
            else:
                maps.append(RingMatrix.zeros(R, mods[i - 1].generators, mods[i].generators))
        return ModuleComplex(tuple(mods), tuple(maps))

    def to_json(self) -> dict:
        R = self.modules[0].ring
        return {
            "ring": R.to_json(),
            "modules": [m.to_json() for m in reversed(self.modules)],
            "maps": [[[R.element_to_json(x) for x in r] for r in a.entries] for a in reversed(self.maps)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ModuleComplex":
        from .io import module_from_json, matrix_entries

        mods = [module_from_json(m) for m in obj["modules"]]
        if not mods:
            raise ComplexError("a complex needs at least one module")
        R = mods[0].ring
        maps = []
        desc = list(reversed(mods))
        raw = list(obj.get("maps", []))
        if len(raw) != len(mods) - 1:
            raise ComplexError(f"{len(mods)} modules need {len(mods) - 1} maps")
        for k, entries in enumerate(raw):
            # raw[k] is d_{t-k}: M_{t-k} -> M_{t-k-1}
            i = len(mods) - 1 - k
            maps.append(matrix_entries(R, entries, desc[i - 1].generators, desc[i].generators))
        return cls.descending(mods, maps)


def first_failure(c: ModuleComplex) -> int | None:
    """Index ``i`` of the first ill-defined ``d_i`` or failing ``d_{i-1} o d_i``."""
    for i, a in enumerate(c.maps, start=1):
        try:
            make_map(c.modules[i], c.modules[i - 1], a)
        except MapError:
            return i
    for i in range(2, c.t + 1):
        comp = c.maps[i - 2] @ c.maps[i - 1]
        if not _spans_contained(comp, c.modules[i - 2].relations):
            return i
    return None


def validate_complex(c: ModuleComplex) -> bool:
    return first_failure(c) is None


def _cycles(c: ModuleComplex, i: int) -> RingMatrix:
    m = c.modules[i]
    if i == 0:
        return RingMatrix.identity(m.ring, m.generators)
    return _preimage_basis(c.maps[i - 1], c.modules[i - 1].relations, m.generators)


def homology_at(c: ModuleComplex, i: int) -> FgModule:
    if not 0 <= i <= c.t:
        raise IndexError(f"index {i} outside 0..{c.t}")
    m = c.modules[i]
    boundaries = m.relations
    if i < c.t:
        boundaries = boundaries.hstack(c.maps[i])
    return subquotient(_cycles(c, i), boundaries)


def lower_length(c: ModuleComplex) -> Ordinal:
    """Ordinal sum, ascending in ``i``, over ``i = t+1 (mod 2)``."""
    return ord_sum_all(length(c.modules[i]) for i in range(c.t + 1) if (i - c.t - 1) % 2 == 0)


def upper_length(c: ModuleComplex) -> Ordinal:
    return shuffle_sum_all(length(c.modules[i]) for i in range(c.t + 1) if (i - c.t) % 2 == 0)


def generic_euler_char(c: ModuleComplex) -> int:
    return sum((-1) ** i * generic_length(m) for i, m in enumerate(c.modules))


@dataclass(frozen=True)
class AcyclicityReport:
    e: int
    lowlen: Ordinal
    hilen: Ordinal
    homology_dims: tuple[int, ...]
    hypothesis: bool
    condition: bool
    condition_at_e: bool
    conclusion: bool

    @property
    def verdict(self) -> str:
        if not self.hypothesis:
            return "hypothesis fails"
        if not self.condition:
            return "condition fails"
        return "acyclic" if self.conclusion else "violation"

    @property
    def ok(self) -> bool:
        return self.verdict != "violation"

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "lowlen": str(self.lowlen),
            "hilen": str(self.hilen),
            "verdict": self.verdict,
            "homology_dims": list(self.homology_dims),
            "hypothesis": self.hypothesis,
            "condition_at_e_plus_1": self.condition,
            "condition_at_e": self.condition_at_e,
            "top_homology_dim_at_most_e": self.conclusion,
        }


def acyclicity_check(c: ModuleComplex, e: int) -> AcyclicityReport:
    """Evaluate the length criterion at level ``e``.

    The level comparison ``hilen <= lowlen`` is made on the parts of degree
    at least ``e + 1``; the comparison at ``e`` itself is reported alongside.
    ``homology_dims`` is indexed by ``i``.
    """
    if e < -1:
        raise ValueError("e must be at least -1")
    lo, hi = lower_length(c), upper_length(c)
    dims = tuple(dimension(homology_at(c, i)) for i in range(c.t + 1))
    return AcyclicityReport(
        e, lo, hi, dims,
        hypothesis=all(d <= e for d in dims[:c.t]),
        condition=cmp_at_level(hi, lo, e + 1) is not Cmp.GT,
        condition_at_e=cmp_at_level(hi, lo, e) is not Cmp.GT,
        conclusion=dims[c.t] <= e,
    )
