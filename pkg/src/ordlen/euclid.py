"""Euclidean domains and exact Smith normal form.

Three contexts are supported, all one-dimensional PIDs:

* ``Integers()`` -- elements are ``int``;
* ``LocalIntegers(p)`` -- Z localized at the prime ``p``; elements are
  :class:`fractions.Fraction` with denominator prime to ``p``;
* ``PolyFp(p)`` -- F_p[x]; elements are :class:`Poly`.

Ring elements support ``+ - *`` and ``==`` natively; everything that needs
the Euclidean structure goes through the ring object.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Any, Iterable, Iterator, Sequence

__all__ = [
    "Ring",
    "Integers",
    "LocalIntegers",
    "PolyFp",
    "Poly",
    "ZZ",
    "ring_from_json",
    "RingMatrix",
    "SmithDecomposition",
    "smith_normal_form",
    "membership_solve",
    "kernel_basis",
    "column_span_basis",
    "column_echelon",
    "is_prime",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Ring:
    """Interface shared by the three contexts."""

    zero: Any
    one: Any

    def from_int(self, k: int) -> Any:
        raise NotImplementedError

    def norm(self, a: Any) -> int:
        raise NotImplementedError

    def divmod(self, a: Any, b: Any) -> tuple[Any, Any]:
        raise NotImplementedError

    def normalize(self, a: Any) -> tuple[Any, Any]:
        """Return ``(n, u)`` with ``u`` a unit and ``n = u * a`` unit-normalized."""
        raise NotImplementedError

    def factor_count(self, a: Any) -> int:
        raise NotImplementedError

    def residues(self, d: Any) -> list[Any]:
        """Canonical representatives of ``R/(d)`` for nonzero ``d``."""
        raise NotImplementedError

    def reduce(self, a: Any, d: Any) -> Any:
        """Canonical representative of ``a`` modulo nonzero ``d``."""
        raise NotImplementedError

    def random_element(self, rng: random.Random, size: int = 9) -> Any:
        raise NotImplementedError

    def element_from_json(self, obj: Any) -> Any:
        raise NotImplementedError

    def element_to_json(self, a: Any) -> Any:
        raise NotImplementedError

    def to_json(self) -> Any:
        raise NotImplementedError

    # generic helpers

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def is_unit(self, a: Any) -> bool:
        return not self.is_zero(a) and self.norm(a) == self.norm(self.one)

    def inverse(self, u: Any) -> Any:
        q, r = self.divmod(self.one, u)
        if not self.is_zero(r):
            raise ZeroDivisionError(f"{u!r} is not a unit")
        return q

    def divides(self, a: Any, b: Any) -> bool:
        if self.is_zero(a):
            return self.is_zero(b)
        return self.is_zero(self.divmod(b, a)[1])

    def exact_div(self, b: Any, a: Any) -> Any:
        q, r = self.divmod(b, a)
        if not self.is_zero(r):
            raise ArithmeticError(f"{a!r} does not divide {b!r}")
        return q

    def gcd(self, a: Any, b: Any) -> Any:
        while not self.is_zero(b):
            a, b = b, self.divmod(a, b)[1]
        return self.normalize(a)[0] if not self.is_zero(a) else a

    def residue_count(self, d: Any) -> int:
        return len(self.residues(d))

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class Integers(Ring):
    zero = 0
    one = 1

    def from_int(self, k: int) -> int:
        return k

    def norm(self, a: int) -> int:
        return abs(a)

    def divmod(self, a: int, b: int) -> tuple[int, int]:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        q, r = divmod(a, b)
        # least absolute remainder keeps entry growth down in SNF
        if 2 * abs(r) > abs(b):
            r -= b
            q += 1
        return q, r

    def normalize(self, a: int) -> tuple[int, int]:
        return (a, 1) if a >= 0 else (-a, -1)

    def factor_count(self, a: int) -> int:
        if a == 0:
            raise ValueError("factor count of zero")
        a = abs(a)
        count = 0
        k = 2
        while k * k <= a:
            while a % k == 0:
                a //= k
                count += 1
            k += 1
        return count + (a > 1)

    def residues(self, d: int) -> list[int]:
        return list(range(abs(d)))

    def reduce(self, a: int, d: int) -> int:
        return a % abs(d)

    def random_element(self, rng: random.Random, size: int = 9) -> int:
        return rng.randint(-size, size)

    def element_from_json(self, obj: Any) -> int:
        if isinstance(obj, bool) or not isinstance(obj, (int, str)):
            raise ValueError(f"bad integer entry {obj!r}")
        return int(obj)

    def element_to_json(self, a: int) -> Any:
        return a

    def to_json(self) -> Any:
        return "Z"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Integers)

    def __hash__(self) -> int:
        return hash("Z")

    def __str__(self) -> str:
        return "Z"


ZZ = Integers()


class LocalIntegers(Ring):
    """Z localized at a prime: fractions whose denominator is prime to ``p``.

    The Euclidean norm is the p-adic valuation, so every element is a unit
    times a power of ``p`` and those powers are the normalized forms.
    """

    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def _check(self, a: Fraction) -> Fraction:
        if a.denominator % self.p == 0:
            raise ValueError(f"{a} is not in Z_({self.p})")
        return a

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def valuation(self, a: Fraction) -> int:
        if a == 0:
            raise ValueError("valuation of zero")
        n, v = abs(a.numerator), 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def norm(self, a: Fraction) -> int:
        return self.valuation(a)

    def divmod(self, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return self.zero, self.zero
        if self.valuation(a) >= self.valuation(b):
            return Fraction(a) / b, self.zero
        return self.zero, Fraction(a)

    def normalize(self, a: Fraction) -> tuple[Fraction, Fraction]:
        if a == 0:
            return self.zero, self.one
        n = Fraction(self.p ** self.valuation(a))
        return n, n / a

    def is_unit(self, a: Fraction) -> bool:
        return a != 0 and a.numerator % self.p != 0

    def factor_count(self, a: Fraction) -> int:
        if a == 0:
            raise ValueError("factor count of zero")
        return self.valuation(a)

    def residues(self, d: Fraction) -> list[Fraction]:
        return [Fraction(k) for k in range(self.p ** self.valuation(d))]

    def reduce(self, a: Fraction, d: Fraction) -> Fraction:
        mod = self.p ** self.valuation(d)
        return Fraction(a.numerator * pow(a.denominator, -1, mod) % mod) if mod > 1 else self.zero

    def random_element(self, rng: random.Random, size: int = 9) -> Fraction:
        dens = [k for k in range(1, size + 1) if k % self.p]
        return Fraction(rng.randint(-size, size), rng.choice(dens))

    def element_from_json(self, obj: Any) -> Fraction:
        if isinstance(obj, (list, tuple)):
            if len(obj) != 2:
                raise ValueError(f"bad fraction {obj!r}")
            num, den = (int(x) for x in obj)
            return self._check(Fraction(num, den))
        if isinstance(obj, bool):
            raise ValueError(f"bad entry {obj!r}")
        if isinstance(obj, str):
            return self._check(Fraction(obj))
        return Fraction(int(obj))

    def element_to_json(self, a: Fraction) -> Any:
        return a.numerator if a.denominator == 1 else [a.numerator, a.denominator]

    def to_json(self) -> Any:
        return {"Zloc": self.p}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LocalIntegers) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Zloc", self.p))

    def __repr__(self) -> str:
        return f"LocalIntegers({self.p})"

    def __str__(self) -> str:
        return f"Z_({self.p})"


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_p, little-endian coefficients, no trailing zeros."""

    p: int
    coeffs: tuple[int, ...] = ()

    @classmethod
    def make(cls, p: int, coeffs: Iterable[int]) -> "Poly":
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(p, tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _lift(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise ValueError("mixing polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly.make(self.p, [other])
        return NotImplemented

    def __add__(self, other: Any) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly.make(self.p, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly.make(self.p, [-c for c in self.coeffs])

    def __sub__(self, other: Any) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Any) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly.make(self.p, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.make(self.p, [other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.p}, {list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts)


def _poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    p = a.p
    if not b.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    inv = pow(b.lead, -1, p)
    quo = [0] * max(len(rem) - len(b.coeffs) + 1, 0)
    db = b.degree
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] % p
        if not c:
            continue
        f = c * inv % p
        quo[k - db] = f
        for j, bc in enumerate(b.coeffs):
            rem[k - db + j] -= f * bc
    return Poly.make(p, quo), Poly.make(p, rem[:db] if db > 0 else [])


class PolyFp(Ring):
    """F_p[x] with degree as Euclidean norm and monic normal forms."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = Poly(p)
        self.one = Poly(p, (1,))
        self.x = Poly(p, (0, 1))

    def poly(self, coeffs: Iterable[int]) -> Poly:
        return Poly.make(self.p, coeffs)

    def from_int(self, k: int) -> Poly:
        return Poly.make(self.p, [k])

    def norm(self, a: Poly) -> int:
        return a.degree

    def divmod(self, a: Poly, b: Poly) -> tuple[Poly, Poly]:
        return _poly_divmod(a, b)

    def normalize(self, a: Poly) -> tuple[Poly, Poly]:
        if not a.coeffs:
            return a, self.one
        u = self.from_int(pow(a.lead, -1, self.p))
        return a * u, u

    def is_unit(self, a: Poly) -> bool:
        return a.degree == 0

    def powmod(self, a: Poly, e: int, m: Poly) -> Poly:
        result = self.one
        a = self.divmod(a, m)[1]
        while e:
            if e & 1:
                result = self.divmod(result * a, m)[1]
            a = self.divmod(a * a, m)[1]
            e >>= 1
        return result

    def factor_count(self, a: Poly) -> int:
        """Irreducible factors with multiplicity, by distinct-degree splitting."""
        if not a.coeffs:
            raise ValueError("factor count of zero")
        f = self.normalize(a)[0]
        count = 0
        i = 1
        h = self.divmod(self.x, f)[1] if f.degree > 0 else self.zero
        while f.degree >= 2 * i:
            h = self.powmod(h, self.p, f)
            g = self.gcd(f, h - self.x)
            while g.degree > 0:
                count += g.degree // i
                f = self.exact_div(f, g)
                g = self.gcd(f, g)
            if f.degree > 0:
                h = self.divmod(h, f)[1]
            i += 1
        return count + (f.degree > 0)

    def residues(self, d: Poly) -> list[Poly]:
        return [Poly.make(self.p, cs) for cs in iproduct(range(self.p), repeat=d.degree)]

    def reduce(self, a: Poly, d: Poly) -> Poly:
        return self.divmod(a, d)[1]

    def residue_count(self, d: Poly) -> int:
        return self.p ** d.degree

    def monic_polys(self, degree: int) -> Iterator[Poly]:
        for cs in iproduct(range(self.p), repeat=degree):
            yield Poly.make(self.p, list(cs) + [1])

    def random_element(self, rng: random.Random, size: int = 3) -> Poly:
        deg = rng.randint(-1, size)
        return Poly.make(self.p, [rng.randrange(self.p) for _ in range(deg + 1)])

    def element_from_json(self, obj: Any) -> Poly:
        if isinstance(obj, bool):
            raise ValueError(f"bad entry {obj!r}")
        if isinstance(obj, int):
            return self.from_int(obj)
        if not isinstance(obj, (list, tuple)):
            raise ValueError(f"polynomial entries are coefficient arrays, got {obj!r}")
        return Poly.make(self.p, [int(c) for c in obj])

    def element_to_json(self, a: Poly) -> Any:
        return list(a.coeffs)

    def to_json(self) -> Any:
        return {"Fpx": self.p}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyFp) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Fpx", self.p))

    def __repr__(self) -> str:
        return f"PolyFp({self.p})"

    def __str__(self) -> str:
        return f"F_{self.p}[x]"


def ring_from_json(obj: Any) -> Ring:
    if obj == "Z":
        return ZZ
    if isinstance(obj, dict) and len(obj) == 1:
        (key, p), = obj.items()
        if key == "Zloc":
            return LocalIntegers(int(p))
        if key == "Fpx":
            return PolyFp(int(p))
    raise ValueError(f"unknown ring {obj!r}")


# ------------------------------------------------------------------ matrices


@dataclass(frozen=True, eq=False)
class RingMatrix:
    ring: Ring
    rows: int
    cols: int
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Any]], cols: int | None = None) -> "RingMatrix":
        rows = [tuple(_coerce(ring, x) for x in r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(ring, len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence[Any]], rows: int) -> "RingMatrix":
        columns = [[_coerce(ring, x) for x in c] for c in columns]
        entries = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(ring, rows, len(columns), entries)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "RingMatrix":
        return cls(ring, rows, cols, tuple((ring.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "RingMatrix":
        return cls(
            ring, n, n,
            tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)),
        )

    @classmethod
    def diagonal(cls, ring: Ring, diag: Sequence[Any], rows: int, cols: int) -> "RingMatrix":
        entries = [[ring.zero] * cols for _ in range(rows)]
        for k, d in enumerate(diag):
            entries[k][k] = _coerce(ring, d)
        return cls(ring, rows, cols, tuple(tuple(r) for r in entries))

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Any, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[Any, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RingMatrix":
        return RingMatrix(self.ring, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def hstack(self, other: "RingMatrix") -> "RingMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return RingMatrix(
            self.ring, self.rows, self.cols + other.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def select_columns(self, idx: Iterable[int]) -> "RingMatrix":
        idx = list(idx)
        return RingMatrix(self.ring, self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.entries))

    def select_rows(self, idx: Iterable[int]) -> "RingMatrix":
        idx = list(idx)
        return RingMatrix(self.ring, len(idx), self.cols, tuple(self.entries[i] for i in idx))

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = self.ring.zero
        out = []
        other_cols = other.columns()
        for r in self.entries:
            row = []
            for c in other_cols:
                acc = zero
                for x, y in zip(r, c):
                    if x != zero and y != zero:
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return RingMatrix(self.ring, self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[Any]) -> tuple[Any, ...]:
        zero = self.ring.zero
        out = []
        for r in self.entries:
            acc = zero
            for x, y in zip(r, vec):
                if x != zero and y != zero:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(x == self.ring.zero for r in self.entries for x in r)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[self.ring.element_to_json(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: Ring | None = None) -> "RingMatrix":
        ring = ring if ring is not None else ring_from_json(obj["ring"])
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if not _is_nested(entries, rows, cols):
            if len(entries) != rows * cols:
                raise ValueError(f"expected {rows}x{cols} entries, got {len(entries)}")
            entries = [entries[i * cols:(i + 1) * cols] for i in range(rows)]
        return cls.from_rows(ring, [[ring.element_from_json(x) for x in r] for r in entries], cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (self.ring, self.rows, self.cols, self.entries) == (other.ring, other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"RingMatrix({self.ring}, {self.rows}x{self.cols}, [{body}])"


def _is_nested(entries: Any, rows: int, cols: int) -> bool:
    """Row lists of length ``cols``; a flat row-major list is the alternative.

    The only ambiguous shape (one column of length-one coefficient arrays)
    reads the same either way.
    """
    return (
        isinstance(entries, list)
        and len(entries) == rows
        and all(isinstance(r, list) and len(r) == cols for r in entries)
    )


def _coerce(ring: Ring, x: Any) -> Any:
    if isinstance(ring, Integers):
        return int(x)
    if isinstance(ring, LocalIntegers):
        return Fraction(x)
    if isinstance(x, int):
        return ring.from_int(x)
    if isinstance(x, (list, tuple)):
        return ring.element_from_json(x)
    return x


# -------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == diag(d)`` padded with zeros; ``d`` lists the nonzero
    invariant factors, unit-normalized and forming a divisibility chain."""

    d: tuple[Any, ...]
    u: RingMatrix
    v: RingMatrix
    u_inv: RingMatrix
    v_inv: RingMatrix

    @property
    def rank(self) -> int:
        return len(self.d)


class _Work:
    """Mutable matrix with row/column operations mirrored on U, V and inverses."""

    def __init__(self, a: RingMatrix):
        R = a.ring
        self.R = R
        self.m, self.n = a.rows, a.cols
        self.a = [list(r) for r in a.entries]
        self.u = [[R.one if i == j else R.zero for j in range(self.m)] for i in range(self.m)]
        self.ui = [r[:] for r in self.u]
        self.v = [[R.one if i == j else R.zero for j in range(self.n)] for i in range(self.n)]
        self.vi = [r[:] for r in self.v]

    # row_i += c * row_j
    def add_row(self, i: int, j: int, c: Any) -> None:
        for M in (self.a, self.u):
            Mi, Mj = M[i], M[j]
            for k in range(len(Mi)):
                if Mj[k] != self.R.zero:
                    Mi[k] = Mi[k] + c * Mj[k]
        for r in self.ui:  # col_j -= c * col_i
            if r[i] != self.R.zero:
                r[j] = r[j] - c * r[i]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.a, self.u):
            M[i], M[j] = M[j], M[i]
        for r in self.ui:
            r[i], r[j] = r[j], r[i]

    def scale_row(self, i: int, unit: Any) -> None:
        inv = self.R.inverse(unit)
        for M in (self.a, self.u):
            M[i] = [x * unit for x in M[i]]
        for r in self.ui:
            r[i] = r[i] * inv

    # col_j += c * col_i
    def add_col(self, j: int, i: int, c: Any) -> None:
        for M in (self.a, self.v):
            for r in M:
                if r[i] != self.R.zero:
                    r[j] = r[j] + c * r[i]
        vi, vj = self.vi[i], self.vi[j]  # row_i -= c * row_j
        for k in range(len(vi)):
            if vj[k] != self.R.zero:
                vi[k] = vi[k] - c * vj[k]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.a, self.v):
            for r in M:
                r[i], r[j] = r[j], r[i]
        self.vi[i], self.vi[j] = self.vi[j], self.vi[i]


def smith_normal_form(a: RingMatrix) -> SmithDecomposition:
    R = a.ring
    w = _Work(a)
    A = w.a
    m, n = w.m, w.n
    zero = R.zero
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != zero:
                    nrm = R.norm(A[i][j])
                    if best is None or nrm < best[0]:
                        best = (nrm, i, j)
        if best is None:
            break
        w.swap_rows(t, best[1])
        w.swap_cols(t, best[2])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != zero:
                    q, r = R.divmod(A[i][t], A[t][t])
                    w.add_row(i, t, -q)
                    if r != zero:
                        w.swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j] != zero:
                    q, r = R.divmod(A[t][j], A[t][t])
                    w.add_col(j, t, -q)
                    if r != zero:
                        w.swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if not R.divides(A[t][t], A[i][j])),
                None,
            )
            if bad is None:
                break
            w.add_row(t, bad, R.one)
        normal, unit = R.normalize(A[t][t])
        if unit != R.one:
            w.scale_row(t, unit)
        diag.append(A[t][t])
        t += 1

    def mat(rows: list[list[Any]], r: int, c: int) -> RingMatrix:
        return RingMatrix(R, r, c, tuple(tuple(x) for x in rows))

    return SmithDecomposition(
        tuple(diag), mat(w.u, m, m), mat(w.v, n, n), mat(w.ui, m, m), mat(w.vi, n, n)
    )


def membership_solve(a: RingMatrix, b: Sequence[Any], snf: SmithDecomposition | None = None) -> tuple[Any, ...] | None:
    """Some ``x`` with ``a @ x == b``, or None if ``b`` is outside the column span."""
    if len(b) != a.rows:
        raise ValueError(f"vector of length {len(b)} against {a.rows} rows")
    R = a.ring
    s = snf if snf is not None else smith_normal_form(a)
    c = s.u.apply(b)
    y = []
    for k, d in enumerate(s.d):
        q, r = R.divmod(c[k], d)
        if r != R.zero:
            return None
        y.append(q)
    if any(x != R.zero for x in c[len(s.d):]):
        return None
    y += [R.zero] * (a.cols - len(s.d))
    x = s.v.apply(y)
    assert a.apply(x) == tuple(b), "membership_solve verification failed"
    return x


def column_echelon(a: RingMatrix, track: bool = False) -> tuple[RingMatrix, int, RingMatrix | None]:
    """Column Hermite form ``h = a @ v`` with ``v`` unimodular.

    The first ``rank`` columns of ``h`` are in echelon form with normalized
    pivots, entries to the left of each pivot reduced modulo it; the rest
    are zero.  Reduction keeps entries from growing, unlike the transforms
    of a Smith decomposition.
    """
    R = a.ring
    m, n = a.rows, a.cols
    cols = [list(c) for c in a.columns()]
    vcols = [[R.one if i == j else R.zero for i in range(n)] for j in range(n)] if track else None
    zero = R.zero

    def addc(j: int, i: int, c: Any) -> None:  # col_j += c col_i
        cj, ci = cols[j], cols[i]
        for k in range(m):
            if ci[k] != zero:
                cj[k] = cj[k] + c * ci[k]
        if vcols is not None:
            vj, vi = vcols[j], vcols[i]
            for k in range(n):
                if vi[k] != zero:
                    vj[k] = vj[k] + c * vi[k]

    def swap(i: int, j: int) -> None:
        cols[i], cols[j] = cols[j], cols[i]
        if vcols is not None:
            vcols[i], vcols[j] = vcols[j], vcols[i]

    c = 0
    pivots: list[int] = []
    for row in range(m):
        if c >= n:
            break
        while True:
            live = [j for j in range(c, n) if cols[j][row] != zero]
            if not live:
                break
            best = min(live, key=lambda j: R.norm(cols[j][row]))
            swap(c, best)
            done = True
            for j in range(c + 1, n):
                if cols[j][row] == zero:
                    continue
                q, r = R.divmod(cols[j][row], cols[c][row])
                addc(j, c, -q)
                if r != zero:
                    done = False
            if done:
                break
        if cols[c][row] == zero:
            continue
        _, unit = R.normalize(cols[c][row])
        if unit != R.one:
            cols[c] = [x * unit for x in cols[c]]
            if vcols is not None:
                vcols[c] = [x * unit for x in vcols[c]]
        d = cols[c][row]
        for j in range(c):
            r = R.reduce(cols[j][row], d)
            if r != cols[j][row]:
                addc(j, c, -R.exact_div(cols[j][row] - r, d))
        pivots.append(row)
        c += 1
    h = RingMatrix.from_columns(R, cols, m) if n else RingMatrix.zeros(R, m, 0)
    v = None
    if vcols is not None:
        v = RingMatrix.from_columns(R, vcols, n) if n else RingMatrix.zeros(R, 0, 0)
    return h, c, v


def column_span_basis(x: RingMatrix) -> RingMatrix:
    """A basis (as columns) of the column span of ``x``, in reduced echelon form."""
    h, rank, _ = column_echelon(x)
    return h.select_columns(range(rank))


def kernel_basis(a: RingMatrix) -> RingMatrix:
    """Columns form a basis of ``{x : a @ x == 0}`` (free over a PID)."""
    _, rank, v = column_echelon(a, track=True)
    return column_span_basis(v.select_columns(range(rank, a.cols)))
