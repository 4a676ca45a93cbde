"""Exact scalar arithmetic: cyclotomic numbers, Bernoulli numbers, integer polynomials.

Everything here is immutable and exact. `fractions.Fraction` is the rational
scalar throughout the package; `CycNum` is an element of Q(zeta_N) in the
power basis 1, zeta, ..., zeta^(phi(N)-1); `EpsPoly` is a polynomial in a
formal real parameter eps with CycNum coefficients (eps is never given a
numeric value); `IntPoly` is a dense integer polynomial.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class LevelMismatchError(ValueError):
    """Raised when combining cyclotomic values of different levels."""


def euler_phi(n: int) -> int:
    """Euler totient of a positive integer."""
    if n < 1:
        raise ValueError("euler_phi requires n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def is_denominator_n_smooth(den: int, n: int) -> bool:
    """True iff every prime dividing den also divides n."""
    d = den
    while d > 1:
        g = gcd(d, n)
        if g == 1:
            return False
        while g > 1:
            d //= g
            g = gcd(d, g)
    return True


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k with B_1 = -1/2, so that B_2/2 = 1/12.

    Defining recurrence: sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
    """
    if k < 0:
        raise ValueError("bernoulli requires k >= 0")
    if k == 0:
        return _ONE
    if k > 1 and k % 2 == 1:
        return _ZERO
    acc = _ZERO
    for j in range(k):
        acc += comb(k + 1, j) * bernoulli(j)
    return -acc / (k + 1)


# ---------------------------------------------------------------------------
# Integer polynomials


class IntPoly:
    """Dense integer polynomial, lowest degree first, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree, with degree(0) = -1."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Union["IntPoly", int]) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Evaluate by Horner's rule; works for any ring element."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divexact(self, other: "IntPoly") -> "IntPoly":
        """Exact division; raises if the remainder is nonzero or division leaves Z."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        den = other.coeffs
        out = [0] * max(len(rem) - len(den) + 1, 0)
        for i in range(len(rem) - len(den), -1, -1):
            if rem[i + len(den) - 1] == 0:
                continue
            q, r = divmod(rem[i + len(den) - 1], den[-1])
            if r:
                raise ValueError("inexact polynomial division")
            out[i] = q
            for j, c in enumerate(den):
                rem[i + j] -= q * c
        if any(rem):
            raise ValueError("inexact polynomial division: nonzero remainder")
        return IntPoly(out)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, monic with integer coefficients.

    Computed as (x^n - 1) / prod(cyclotomic_poly(d)) over proper divisors d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic_poly requires n >= 1")
    num = IntPoly([-1] + [0] * (n - 1) + [1])
    den = IntPoly.one()
    for d in range(1, n):
        if n % d == 0:
            den = den * cyclotomic_poly(d)
    return num.divexact(den)


# ---------------------------------------------------------------------------
# Cyclotomic numbers


@lru_cache(maxsize=None)
def _reduction_table(level: int) -> tuple[tuple[int, ...], ...]:
    """Row j: coordinates of x^(deg+j) modulo the level-th cyclotomic polynomial.

    Enough rows to reduce any product of two reduced elements (degree 2*deg-2).
    """
    poly = cyclotomic_poly(level)
    deg = poly.degree
    # x^deg = -(lower coefficients) since the polynomial is monic
    rows: list[tuple[int, ...]] = []
    current = [-c for c in poly.coeffs[:deg]]
    rows.append(tuple(current))
    for _ in range(deg - 2):
        shifted = [0] + current[:-1]
        top = current[-1]
        if top:
            base = rows[0]
            shifted = [s + top * b for s, b in zip(shifted, base)]
        current = shifted
        rows.append(tuple(current))
    return tuple(rows)


@lru_cache(maxsize=None)
def _zeta_power_coords(level: int, j: int) -> tuple[Fraction, ...]:
    deg = euler_phi(level)
    j %= level
    if j < deg:
        coords = [_ZERO] * deg
        coords[j] = _ONE
        return tuple(coords)
    # reduce x^j stepwise through the table
    table = _reduction_table(level)
    coords = [Fraction(c) for c in table[0]]
    for _ in range(j - deg):
        top = coords[-1]
        coords = [_ZERO] + coords[:-1]
        if top:
            coords = [c + top * b for c, b in zip(coords, table[0])]
    return tuple(coords)


class CycNum:
    """Exact element of Q(zeta_level), coordinates in the power basis.

    The power basis is an integral basis of the cyclotomic field, so
    membership in Z[zeta, 1/level] is a per-coordinate denominator check.
    """

    __slots__ = ("level", "coords")

    def __init__(self, level: int, coords: Sequence[Scalar]):
        if level < 2:
            raise ValueError("CycNum level must be >= 2")
        deg = euler_phi(level)
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coords]
        if len(cs) > deg:
            raise ValueError("too many coordinates for level")
        cs += [_ZERO] * (deg - len(cs))
        self.level = level
        self.coords: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_rational(cls, level: int, value: Scalar) -> "CycNum":
        return cls(level, (Fraction(value),))

    @classmethod
    def zeta(cls, level: int, power: int = 1) -> "CycNum":
        return cls(level, _zeta_power_coords(level, power))

    @classmethod
    def zero(cls, level: int) -> "CycNum":
        return cls(level, ())

    @classmethod
    def one(cls, level: int) -> "CycNum":
        return cls(level, (_ONE,))

    def _check(self, other: "CycNum") -> None:
        if self.level != other.level:
            raise LevelMismatchError(
                f"level mismatch: {self.level} vs {other.level}")

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(self.level, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.level == other.level and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.level, self.coords))

    def __add__(self, other: Union["CycNum", Scalar]) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(self.level, other)
        self._check(other)
        return CycNum(self.level, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other: Union["CycNum", Scalar]) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_rational(self.level, other)
        self._check(other)
        return CycNum(self.level, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other: Scalar) -> "CycNum":
        return CycNum.from_rational(self.level, other) - self

    def __neg__(self) -> "CycNum":
        return CycNum(self.level, tuple(-a for a in self.coords))

    def __mul__(self, other: Union["CycNum", Scalar]) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            return CycNum(self.level, tuple(a * other for a in self.coords))
        self._check(other)
        deg = len(self.coords)
        prod = [_ZERO] * (2 * deg - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        table = _reduction_table(self.level)
        out = prod[:deg]
        for j in range(deg, 2 * deg - 1):
            c = prod[j]
            if c:
                row = table[j - deg]
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return CycNum(self.level, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Field inverse via the extended Euclidean algorithm in Q[x]."""
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        modulus = [Fraction(c) for c in cyclotomic_poly(self.level).coeffs]
        r0, r1 = modulus, list(self.coords)
        s0, s1 = [_ZERO], [_ONE]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) <= 1:
                break
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
        if not r1 or r1[0] == 0:
            raise ZeroDivisionError("not invertible modulo the cyclotomic polynomial")
        unit = r1[0]
        inv_coords = [c / unit for c in s1]
        # s1 may exceed the basis length by construction; reduce through zeta powers
        acc = CycNum.zero(self.level)
        zpow = CycNum.one(self.level)
        z = CycNum.zeta(self.level)
        for c in inv_coords:
            if c:
                acc = acc + zpow * c
            zpow = zpow * z
        return acc

    def __truediv__(self, other: Union["CycNum", Scalar]) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycNum(self.level, tuple(a / other for a in self.coords))
        self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "CycNum":
        return CycNum.from_rational(self.level, other) / self

    def __pow__(self, exponent: int) -> "CycNum":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        acc = CycNum.one(self.level)
        base = self
        e = exponent
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def galois(self, j: int) -> "CycNum":
        """Apply the Galois automorphism zeta -> zeta^j (requires gcd(j, level) = 1)."""
        if gcd(j, self.level) != 1:
            raise ValueError("galois exponent must be prime to the level")
        acc = CycNum.zero(self.level)
        for i, c in enumerate(self.coords):
            if c:
                acc = acc + CycNum.zeta(self.level, i * j) * c
        return acc

    def rational_part(self) -> Fraction | None:
        """The value as a Fraction if it lies in Q, else None."""
        if any(self.coords[1:]):
            return None
        return self.coords[0]

    def is_n_integral(self) -> bool:
        """True iff the value lies in Z[zeta, 1/level]."""
        return all(is_denominator_n_smooth(c.denominator, self.level) for c in self.coords)

    def to_complex(self) -> complex:
        """Floating-point value with zeta = exp(2*pi*i/level); for oracles only."""
        z = cmath.exp(2j * cmath.pi / self.level)
        acc = 0j
        zpow = 1 + 0j
        for c in self.coords:
            acc += float(c) * zpow
            zpow *= z
        return acc

    def __repr__(self) -> str:
        return f"CycNum({self.level}, {[str(c) for c in self.coords]})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{i}")
        return " + ".join(terms) if terms else "0"


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]):
    """Quotient and remainder in Q[x]; inputs dense lowest-first."""
    r = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    lead = b[-1]
    for i in range(len(r) - len(b), -1, -1):
        c = r[i + db] / lead
        if c:
            q[i] = c
            for j, bc in enumerate(b):
                r[i + j] -= c * bc
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _qpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [_ZERO] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


def eisenstein_weight_one_constant(level: int) -> CycNum:
    """The constant 1/2 + zeta/(1 - zeta), the weight-one constant term."""
    z = CycNum.zeta(level)
    return CycNum.from_rational(level, Fraction(1, 2)) + z / (CycNum.one(level) - z)


# ---------------------------------------------------------------------------
# Polynomials in the formal parameter eps


class EpsPoly:
    """Polynomial in a formal real parameter eps over CycNum coefficients.

    eps stands for an arbitrary real in (0,1); it is never evaluated, so all
    identities must hold degree by degree.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Sequence[CycNum]):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        for c in cs:
            if c.level != level:
                raise LevelMismatchError("eps coefficient level mismatch")
        self.level = level
        self.coeffs: tuple[CycNum, ...] = tuple(cs)

    @classmethod
    def zero(cls, level: int) -> "EpsPoly":
        return cls(level, ())

    @classmethod
    def constant(cls, value: CycNum) -> "EpsPoly":
        return cls(value.level, (value,))

    @classmethod
    def rational(cls, level: int, value: Scalar) -> "EpsPoly":
        return cls(level, (CycNum.from_rational(level, value),))

    @classmethod
    def linear(cls, level: int, const: Scalar, eps_coeff: Scalar) -> "EpsPoly":
        """const + eps_coeff * eps with rational inputs."""
        return cls(level, (CycNum.from_rational(level, const),
                           CycNum.from_rational(level, eps_coeff)))

    @property
    def eps_degree(self) -> int:
        """Degree in eps, with degree(0) = -1."""
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> CycNum:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return CycNum.zero(self.level)

    def constant_part(self) -> CycNum:
        return self.coefficient(0)

    def is_eps_free(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpsPoly):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def _coerce(self, other) -> "EpsPoly":
        if isinstance(other, EpsPoly):
            if other.level != self.level:
                raise LevelMismatchError("eps polynomial level mismatch")
            return other
        if isinstance(other, CycNum):
            return EpsPoly.constant(other)
        if isinstance(other, (int, Fraction)):
            return EpsPoly.rational(self.level, other)
        raise TypeError(f"cannot combine EpsPoly with {type(other)!r}")

    def __add__(self, other) -> "EpsPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return EpsPoly(self.level,
                       tuple(self.coefficient(i) + o.coefficient(i) for i in range(n)))

    __radd__ = __add__

    def __sub__(self, other) -> "EpsPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "EpsPoly":
        return self._coerce(other) - self

    def __neg__(self) -> "EpsPoly":
        return EpsPoly(self.level, tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "EpsPoly":
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return EpsPoly.zero(self.level)
        out = [CycNum.zero(self.level)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return EpsPoly(self.level, tuple(out))

    __rmul__ = __mul__

    def is_n_integral(self) -> bool:
        return all(c.is_n_integral() for c in self.coeffs)

    def __repr__(self) -> str:
        return f"EpsPoly({self.level}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            body = str(c)
            if j == 0:
                parts.append(body)
            else:
                suffix = "eps" if j == 1 else f"eps^{j}"
                parts.append(f"({body})*{suffix}")
        return " + ".join(parts) if parts else "0"


def eps(level: int) -> EpsPoly:
    """The formal parameter itself, as a degree-one polynomial."""
    return EpsPoly(level, (CycNum.zero(level), CycNum.one(level)))
