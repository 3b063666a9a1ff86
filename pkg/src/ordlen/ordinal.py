"""Ordinals below w^w in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents and positive coefficients, so that
``2*w^2+3*w+4`` is ``((2, 2), (1, 3), (0, 4))`` and zero is ``()``.
Because the representation is canonical, plain tuple comparison of the term
sequences is exactly the ordinal order.

Text form uses ``w`` for omega::

    >>> parse_ordinal("w+w")
    Ordinal('2*w')
    >>> parse_ordinal("1") + parse_ordinal("w")
    Ordinal('w')
    >>> shuffle_sum(parse_ordinal("w+1"), parse_ordinal("w+1"))
    Ordinal('2*w+2')
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Union

__all__ = [
    "Cmp",
    "Ordinal",
    "OrdinalSyntaxError",
    "OracleBoundError",
    "ZERO",
    "ONE",
    "OMEGA",
    "omega_power",
    "parse_ordinal",
    "format_ordinal",
    "compare",
    "ord_sum",
    "shuffle_sum",
    "shuffle_sum_recursive",
    "shuffle_sum_oracle",
    "interleaving_sums",
    "paper_product",
    "profile",
    "split",
    "cmp_at_level",
    "predecessor",
    "ord_sum_all",
    "shuffle_sum_all",
]


class Cmp(Enum):
    LT = -1
    EQ = 0
    GT = 1


class OrdinalSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class OracleBoundError(ValueError):
    pass


Terms = tuple[tuple[int, int], ...]


@dataclass(frozen=True, order=False)
class Ordinal:
    terms: Terms = ()

    def __post_init__(self) -> None:
        prev = None
        for exp, coef in self.terms:
            if not isinstance(exp, int) or not isinstance(coef, int):
                raise TypeError("exponents and coefficients must be int")
            if exp < 0 or coef < 1:
                raise ValueError(f"bad term {(exp, coef)}")
            if prev is not None and exp >= prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    @classmethod
    def of(cls, value: "OrdinalLike") -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot convert {value!r} to Ordinal")
        if value < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((0, value),)) if value else cls()

    @classmethod
    def from_coefficients(cls, coeffs: dict[int, int] | Iterable[tuple[int, int]]) -> "Ordinal":
        """Build from an exponent -> coefficient mapping; zero coefficients are dropped."""
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        merged: dict[int, int] = {}
        for exp, coef in items:
            merged[exp] = merged.get(exp, 0) + coef
        return cls(tuple((e, c) for e, c in sorted(merged.items(), reverse=True) if c))

    def coefficient(self, exp: int) -> int:
        for e, c in self.terms:
            if e == exp:
                return c
        return 0

    @property
    def degree(self) -> int:
        return self.terms[0][0] if self.terms else -1

    @property
    def order(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def valence(self) -> int:
        return sum(c for _, c in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_successor(self) -> bool:
        return self.order == 0

    def is_limit(self) -> bool:
        return self.order > 0

    def is_finite(self) -> bool:
        return self.degree <= 0

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.coefficient(0)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # ordering: canonical CNF makes tuple order the ordinal order
    def _key(self, other: object) -> Terms | None:
        if isinstance(other, Ordinal):
            return other.terms
        if isinstance(other, int) and not isinstance(other, bool) and other >= 0:
            return Ordinal.of(other).terms
        return None

    def __eq__(self, other: object) -> bool:
        key = self._key(other)
        return NotImplemented if key is None else self.terms == key

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other: object) -> bool:
        key = self._key(other)
        return NotImplemented if key is None else self.terms < key

    def __le__(self, other: object) -> bool:
        key = self._key(other)
        return NotImplemented if key is None else self.terms <= key

    def __gt__(self, other: object) -> bool:
        key = self._key(other)
        return NotImplemented if key is None else self.terms > key

    def __ge__(self, other: object) -> bool:
        key = self._key(other)
        return NotImplemented if key is None else self.terms >= key

    def __add__(self, other: "OrdinalLike") -> "Ordinal":
        return ord_sum(self, other)

    def __radd__(self, other: "OrdinalLike") -> "Ordinal":
        return ord_sum(other, self)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"


OrdinalLike = Union[Ordinal, int]

ZERO = Ordinal()
ONE = Ordinal(((0, 1),))
OMEGA = Ordinal(((1, 1),))


def omega_power(exp: int, coef: int = 1) -> Ordinal:
    return Ordinal(((exp, coef),)) if coef else ZERO


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<w>[wω])|(?P<op>[+*^])|(?P<bad>\S))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break  # trailing whitespace
        kind = m.lastgroup
        if kind == "bad":
            raise OrdinalSyntaxError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``term ("+" term)*`` with ``term := [nat "*"] "w" ["^" nat] | nat``.

    Terms may come in any order and repeat; equal exponents are merged, so the
    result is a canonical sum of monomials (a *commutative* reading of the
    input, which is what callers writing CNF by hand expect).
    """
    toks = _tokens(text)
    if not toks:
        raise OrdinalSyntaxError("empty expression", text, 0)
    i = 0
    coeffs: dict[int, int] = {}

    def peek(kind: str, value: str | None = None) -> bool:
        return i < len(toks) and toks[i][0] == kind and (value is None or toks[i][1] == value)

    def expect(kind: str, what: str) -> tuple[str, str, int]:
        nonlocal i
        if i >= len(toks):
            raise OrdinalSyntaxError(f"expected {what}", text, len(text))
        if toks[i][0] != kind:
            raise OrdinalSyntaxError(f"expected {what}", text, toks[i][2])
        i += 1
        return toks[i - 1]

    def _exponent() -> int:
        nonlocal i
        if peek("op", "^"):
            i += 1
            return int(expect("nat", "an exponent")[1])
        return 1

    while True:
        if peek("nat"):
            _, nat, pos = toks[i]
            i += 1
            if peek("op", "*"):
                i += 1
                coef = int(nat)
                if coef == 0:
                    raise OrdinalSyntaxError("coefficient 0 is not allowed", text, pos)
                expect("w", "'w'")
                exp = _exponent()
            else:
                coef, exp = int(nat), 0
        elif peek("w"):
            i += 1
            coef = 1
            exp = _exponent()
        else:
            pos = toks[i][2] if i < len(toks) else len(text)
            raise OrdinalSyntaxError("expected a term", text, pos)
        coeffs[exp] = coeffs.get(exp, 0) + coef
        if i == len(toks):
            break
        if not peek("op", "+"):
            raise OrdinalSyntaxError("expected '+'", text, toks[i][2])
        i += 1
        if i == len(toks):
            raise OrdinalSyntaxError("expected a term", text, len(text))

    return Ordinal.from_coefficients(coeffs)


def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coef in a.terms:
        if exp == 0:
            parts.append(str(coef))
            continue
        mono = "w" if exp == 1 else f"w^{exp}"
        parts.append(mono if coef == 1 else f"{coef}*{mono}")
    return "+".join(parts)


# ------------------------------------------------------------- arithmetic


def compare(a: OrdinalLike, b: OrdinalLike) -> Cmp:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if a.terms == b.terms:
        return Cmp.EQ
    return Cmp.LT if a.terms < b.terms else Cmp.GT


def ord_sum(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinary (left-absorbing) ordinal addition ``a + b``."""
    a, b = Ordinal.of(a), Ordinal.of(b)
    if not b.terms:
        return a
    lead_exp, lead_coef = b.terms[0]
    head = [t for t in a.terms if t[0] > lead_exp]
    lead_coef += a.coefficient(lead_exp)
    return Ordinal(tuple(head) + ((lead_exp, lead_coef),) + b.terms[1:])


def shuffle_sum(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Natural (Hessenberg) sum: add Cantor-normal-form coefficients."""
    a, b = Ordinal.of(a), Ordinal.of(b)
    return Ordinal.from_coefficients(list(a.terms) + list(b.terms))


def ord_sum_all(items: Iterable[OrdinalLike]) -> Ordinal:
    total = ZERO
    for x in items:
        total = ord_sum(total, x)
    return total


def shuffle_sum_all(items: Iterable[OrdinalLike]) -> Ordinal:
    total = ZERO
    for x in items:
        total = shuffle_sum(total, x)
    return total


def predecessor(a: OrdinalLike) -> Ordinal:
    a = Ordinal.of(a)
    if not a.is_successor():
        raise ValueError(f"{a} is not a successor ordinal")
    exp, coef = a.terms[-1]
    rest = a.terms[:-1]
    return Ordinal(rest + ((0, coef - 1),)) if coef > 1 else Ordinal(rest)


def _drop_lowest(a: Ordinal) -> Ordinal:
    """Remove one copy of the lowest principal term: ``a = result + w^order(a)``."""
    exp, coef = a.terms[-1]
    rest = a.terms[:-1]
    return Ordinal(rest + ((exp, coef - 1),)) if coef > 1 else Ordinal(rest)


def shuffle_sum_recursive(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Shuffle sum by transfinite recursion on the pair ``(a, b)``.

    Successor steps peel off a ``+1``; when both arguments are limits, the one
    of smaller order is written ``a' + w^o`` and the supremum over ``d < a`` is
    taken in its closed form ``(a' (+) b) + w^o``.
    """
    a, b = Ordinal.of(a), Ordinal.of(b)
    return _ssum_rec(a, b)


@lru_cache(maxsize=1 << 16)
def _ssum_rec(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms:
        return b
    if not b.terms:
        return a
    if a.is_successor():
        return ord_sum(_ssum_rec(predecessor(a), b), ONE)
    if b.is_successor():
        return ord_sum(_ssum_rec(a, predecessor(b)), ONE)
    if a.order <= b.order:
        return ord_sum(_ssum_rec(_drop_lowest(a), b), omega_power(a.order))
    return ord_sum(_ssum_rec(a, _drop_lowest(b)), omega_power(b.order))


def _principal_exponents(a: Ordinal) -> list[int]:
    return [exp for exp, coef in a.terms for _ in range(coef)]


@lru_cache(maxsize=1 << 16)
def _push(stack: tuple[int, ...], x: int) -> tuple[int, ...]:
    """``stack + w^x`` on descending exponent lists: smaller exponents are absorbed."""
    k = len(stack)
    while k and stack[k - 1] < x:
        k -= 1
    return stack[:k] + (x,)


def _from_stack(stack: tuple[int, ...]) -> Ordinal:
    coeffs: dict[int, int] = {}
    for x in stack:
        coeffs[x] = coeffs.get(x, 0) + 1
    return Ordinal.from_coefficients(coeffs)


def _interleavings(xs: list[int], ys: list[int]) -> Iterable[tuple[int, ...]]:
    n = len(xs) + len(ys)
    for slots in combinations(range(n), len(xs)):
        picked = set(slots)
        i = j = 0
        total: tuple[int, ...] = ()
        for pos in range(n):
            if pos in picked:
                total = _push(total, xs[i])
                i += 1
            else:
                total = _push(total, ys[j])
                j += 1
        yield total


def interleaving_sums(a: OrdinalLike, b: OrdinalLike) -> Iterable[Ordinal]:
    """Yield the ordinal sum of every interleaving of the principal-term
    sequences of ``a`` and ``b`` (each kept in its own descending order)."""
    xs = _principal_exponents(Ordinal.of(a))
    ys = _principal_exponents(Ordinal.of(b))
    for stack in _interleavings(xs, ys):
        yield _from_stack(stack)


def shuffle_sum_oracle(
    a: OrdinalLike, b: OrdinalLike, bound: int = 12, *, exhaustive: bool = True
) -> Ordinal:
    """Largest ordinal obtainable by shuffling the principal terms of a and b.

    With ``exhaustive=True`` every one of the C(m+n, n) interleavings is
    summed and the maximum returned, so ``val(a) + val(b)`` must not exceed
    ``bound``.  With ``exhaustive=False`` the same maximum is found by a search
    over interleaving prefixes: since ``x <= y`` implies ``x + t <= y + t``,
    the best interleaving of a prefix pair extends to the best of the whole,
    which keeps the oracle usable (and still free of coefficient addition)
    beyond the enumeration bound.

    Partial sums are kept as descending exponent tuples, whose lexicographic
    order is the ordinal order.
    """
    a, b = Ordinal.of(a), Ordinal.of(b)
    xs, ys = _principal_exponents(a), _principal_exponents(b)
    if exhaustive:
        if a.valence + b.valence > bound:
            raise OracleBoundError(
                f"valence {a.valence}+{b.valence} exceeds oracle bound {bound}"
            )
        return _from_stack(max(_interleavings(xs, ys)))
    return _from_stack(_best_row(tuple(xs), tuple(ys))[-1])


@lru_cache(maxsize=1 << 14)
def _best_row(xs: tuple[int, ...], ys: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Entry ``j``: the maximal sum over interleavings of ``xs`` and ``ys[:j]``.

    Rows are cached by prefix, so ordinals sharing leading terms share work.
    """
    if not xs:
        best: list[tuple[int, ...]] = [()]
        for y in ys:
            best.append(_push(best[-1], y))
        return tuple(best)
    prev, x = _best_row(xs[:-1], ys), xs[-1]
    row = [_push(prev[0], x)]
    for j, y in enumerate(ys, start=1):
        row.append(max(_push(prev[j], x), _push(row[j - 1], y)))
    return tuple(row)


def paper_product(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """``a`` copies of ``b``: the lexicographic order on ``a x b``.

    In the conventional notation this is ``b * a``.
    """
    a, b = Ordinal.of(a), Ordinal.of(b)
    if not a.terms or not b.terms:
        return ZERO
    lead_exp, lead_coef = b.terms[0]
    result = ZERO
    for exp, coef in a.terms:
        if exp == 0:
            piece = Ordinal(((lead_exp, lead_coef * coef),) + b.terms[1:])
        else:
            piece = omega_power(lead_exp + exp, coef)
        result = ord_sum(result, piece)
    return result


def profile(a: OrdinalLike) -> tuple[int, int, int]:
    """Return ``(degree, order, valence)``; zero has degree and order -1."""
    a = Ordinal.of(a)
    return a.degree, a.order, a.valence


def split(a: OrdinalLike, e: int) -> tuple[Ordinal, Ordinal]:
    """Split into the part with exponents >= e and the part below e."""
    a = Ordinal.of(a)
    plus = tuple(t for t in a.terms if t[0] >= e)
    minus = tuple(t for t in a.terms if t[0] < e)
    return Ordinal(plus), Ordinal(minus)


def cmp_at_level(a: OrdinalLike, b: OrdinalLike, e: int) -> Cmp:
    return compare(split(a, e)[0], split(b, e)[0])
