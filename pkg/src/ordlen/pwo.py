"""Foundation rank and length of partial well-orders.

Finite posets are explicit; a small term language (chains indexed by
ordinals, sums, products) covers infinite well-partial-orders whose length
follows from the sum and product formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Iterator, Union

from .ordinal import ZERO, Ordinal, ord_sum, predecessor, shuffle_sum

__all__ = [
    "FinitePoset",
    "RankTable",
    "PosetError",
    "make_poset",
    "chain",
    "antichain",
    "rank_all",
    "max_chain_length",
    "sum_poset",
    "product_poset",
    "induced",
    "Chain",
    "Explicit",
    "Sum",
    "Product",
    "PwoExpr",
    "symbolic_length",
    "has_max",
    "is_empty",
    "flatten",
    "expr_size",
]


class PosetError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """Elements ``0..n-1``; ``down[j]`` is the bitmask of all ``i <= j``.

    Build through :func:`make_poset` (closes and checks the relation) or
    :meth:`from_order` when the relation is already a partial order.
    """

    n: int
    down: tuple[int, ...]

    @classmethod
    def from_order(cls, n: int, leq: Callable[[int, int], bool]) -> "FinitePoset":
        down = []
        for j in range(n):
            mask = 0
            for i in range(n):
                if i == j or leq(i, j):
                    mask |= 1 << i
            down.append(mask)
        return cls(n, tuple(down))

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def below(self, j: int) -> list[int]:
        """Elements strictly below ``j``."""
        return [i for i in _bits(self.down[j]) if i != j]

    @property
    def le(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for j in range(self.n) for i in _bits(self.down[j]))

    @cached_property
    def up(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for j in range(self.n):
            for i in _bits(self.down[j]):
                masks[i] |= 1 << j
        return tuple(masks)

    def maxima(self) -> list[int]:
        return [i for i in range(self.n) if self.up[i] == 1 << i]

    def minima(self) -> list[int]:
        return [j for j in range(self.n) if self.down[j] == 1 << j]

    def maximum(self) -> int | None:
        full = (1 << self.n) - 1
        for j in range(self.n):
            if self.down[j] == full:
                return j
        return None

    def minimum(self) -> int | None:
        full = (1 << self.n) - 1
        for i in range(self.n):
            if self.up[i] == full:
                return i
        return None

    def topological_order(self) -> list[int]:
        """Elements sorted so that everything below ``j`` precedes ``j``."""
        return sorted(range(self.n), key=lambda j: self.down[j].bit_count())

    def to_json(self) -> dict:
        pairs = sorted((i, j) for (i, j) in self.le if i != j)
        return {"n": self.n, "le": [list(p) for p in pairs]}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.n == other.n and self.down == other.down

    def __hash__(self) -> int:
        return hash((self.n, self.down))

    def __repr__(self) -> str:
        return f"FinitePoset(n={self.n}, covers={len(self.le) - self.n})"


def make_poset(n: int, pairs: Iterable[tuple[int, int]]) -> FinitePoset:
    """Reflexive-transitive closure of ``pairs``; raises on cycles."""
    if n < 0:
        raise PosetError("negative element count")
    preds: dict[int, set[int]] = {j: set() for j in range(n)}
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise PosetError(f"pair {(i, j)} out of range for n={n}")
        if i != j:
            preds[j].add(i)
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        raise PosetError(f"relation has a cycle: {exc.args[1]}") from None
    down = [0] * n
    for j in order:
        mask = 1 << j
        for i in preds[j]:
            mask |= down[i]
        down[j] = mask
    return FinitePoset(n, tuple(down))


def chain(k: int) -> FinitePoset:
    return FinitePoset(k, tuple((1 << (j + 1)) - 1 for j in range(k)))


def antichain(k: int) -> FinitePoset:
    return FinitePoset(k, tuple(1 << j for j in range(k)))


@dataclass(frozen=True)
class RankTable:
    rank: tuple[int, ...]

    @property
    def length(self) -> int:
        return max(self.rank, default=0)

    def __getitem__(self, i: int) -> int:
        return self.rank[i]


def rank_all(p: FinitePoset) -> RankTable:
    """Foundation rank of every element: 0 on minimal elements, otherwise one
    more than the largest rank strictly below."""
    rank = [0] * p.n
    for j in p.topological_order():
        rank[j] = max((rank[i] + 1 for i in p.below(j)), default=0)
    return RankTable(tuple(rank))


def max_chain_length(p: FinitePoset) -> int:
    """Number of steps (cardinality minus one) in a longest chain.

    Walks down from each element, independently of :func:`rank_all`.
    """
    if p.n == 0:
        raise PosetError("empty poset has no chains")
    memo: dict[int, int] = {}

    def longest_from(j: int) -> int:
        if j not in memo:
            stack = [(j, iter(p.below(j)), 0)]
            # explicit stack: lattices can be deep enough to hit the recursion limit
            while stack:
                node, it, best = stack[-1]
                for i in it:
                    if i in memo:
                        best = max(best, memo[i] + 1)
                    else:
                        stack[-1] = (node, it, best)
                        stack.append((i, iter(p.below(i)), 0))
                        break
                else:
                    stack.pop()
                    memo[node] = best
                    if stack:
                        parent, pit, pbest = stack[-1]
                        stack[-1] = (parent, pit, max(pbest, best + 1))
                    continue
        return memo[j]

    return max(longest_from(j) for j in range(p.n))


def sum_poset(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Disjoint union with every element of ``p`` below every element of ``q``."""
    all_p = (1 << p.n) - 1
    down = list(p.down) + [all_p | (m << p.n) for m in q.down]
    return FinitePoset(p.n + q.n, tuple(down))


def product_poset(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Componentwise order on ``p x q``; element ``(a, b)`` has index ``a*q.n + b``."""
    n = p.n * q.n
    down = []
    for a in range(p.n):
        pa = list(_bits(p.down[a]))
        for b in range(q.n):
            mask = 0
            for a2 in pa:
                mask |= q.down[b] << (a2 * q.n)
            down.append(mask)
    return FinitePoset(n, tuple(down))


def induced(p: FinitePoset, subset: Iterable[int]) -> tuple[FinitePoset, list[int]]:
    """Induced subposet on ``subset``; also returns the new-to-old index list."""
    elems = sorted(set(subset))
    return FinitePoset.from_order(len(elems), lambda i, j: p.leq(elems[i], elems[j])), elems


# ------------------------------------------------------------ symbolic pwo


@dataclass(frozen=True)
class Chain:
    """The well-order of type ``alpha``."""

    alpha: Ordinal


@dataclass(frozen=True)
class Explicit:
    poset: FinitePoset


@dataclass(frozen=True)
class Sum:
    left: "PwoExpr"
    right: "PwoExpr"


@dataclass(frozen=True)
class Product:
    left: "PwoExpr"
    right: "PwoExpr"


PwoExpr = Union[Chain, Explicit, Sum, Product]


def is_empty(e: PwoExpr) -> bool:
    if isinstance(e, Chain):
        return e.alpha.is_zero()
    if isinstance(e, Explicit):
        return e.poset.n == 0
    if isinstance(e, Sum):
        return is_empty(e.left) and is_empty(e.right)
    return is_empty(e.left) or is_empty(e.right)


def has_max(e: PwoExpr) -> bool:
    if isinstance(e, Chain):
        return e.alpha.is_successor()
    if isinstance(e, Explicit):
        return e.poset.maximum() is not None
    if isinstance(e, Sum):
        return has_max(e.right) if not is_empty(e.right) else has_max(e.left)
    if isinstance(e, Product):
        return has_max(e.left) and has_max(e.right)
    raise TypeError(f"not a PwoExpr: {e!r}")


def symbolic_length(e: PwoExpr) -> Ordinal:
    """Length by the chain, sum and product formulas.

    A sum whose left summand has no maximum is rejected: the sum formula
    needs that maximum and nothing replaces it in general.  With the maximum,
    ``len(P + Q) = len P + 1 + len Q`` for nonempty ``Q``.
    """
    if isinstance(e, Chain):
        a = e.alpha
        return predecessor(a) if a.is_successor() else a
    if isinstance(e, Explicit):
        return Ordinal.of(rank_all(e.poset).length)
    if isinstance(e, Sum):
        if is_empty(e.left):
            return symbolic_length(e.right)
        if is_empty(e.right):
            return symbolic_length(e.left)
        if not has_max(e.left):
            raise PosetError("sum formula needs a maximum in the left summand")
        # the maximum of the left part sits strictly below every element of the right
        return ord_sum(symbolic_length(e.left), ord_sum(1, symbolic_length(e.right)))
    if isinstance(e, Product):
        if is_empty(e):
            return ZERO
        return shuffle_sum(symbolic_length(e.left), symbolic_length(e.right))
    raise TypeError(f"not a PwoExpr: {e!r}")


def expr_size(e: PwoExpr) -> int | None:
    """Number of elements, or None if infinite."""
    if isinstance(e, Chain):
        return int(e.alpha) if e.alpha.is_finite() else None
    if isinstance(e, Explicit):
        return e.poset.n
    left, right = expr_size(e.left), expr_size(e.right)
    if isinstance(e, Product) and (left == 0 or right == 0):
        return 0
    if left is None or right is None:
        return None
    return left + right if isinstance(e, Sum) else left * right


def flatten(e: PwoExpr, bound: int = 4096) -> FinitePoset:
    size = expr_size(e)
    if size is None:
        raise PosetError("expression contains an infinite chain")
    if size > bound:
        raise PosetError(f"expression has {size} elements, above bound {bound}")
    return _flatten(e)


def _flatten(e: PwoExpr) -> FinitePoset:
    if isinstance(e, Chain):
        return chain(int(e.alpha))
    if isinstance(e, Explicit):
        return e.poset
    if isinstance(e, Sum):
        return sum_poset(_flatten(e.left), _flatten(e.right))
    return product_poset(_flatten(e.left), _flatten(e.right))
