"""Exact integers, 2x2 matrices, real quadratic irrationals and rational intervals."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, List, Optional, Tuple, Union

import gmpy2
from sympy import primerange

from markoff_lab.config import SQUAREFREE_TRIAL_LIMIT
from markoff_lab.errors import PrecisionExhausted, RationalValue, SignChange

Rational = Union[int, Fraction]


def _gcd(*values: int) -> int:
    g = 0
    for v in values:
        g = gmpy2.gcd(g, v)
    return int(g)


def _floor(t: Rational) -> int:
    t = Fraction(t)
    return t.numerator // t.denominator


@dataclass(frozen=True)
class Mat2:
    """Integer matrix (a b; c d), row-major."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat2_mul(self, other)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def norm(self) -> int:
        """Maximum absolute value of the entries."""
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        """Inverse in GL2(Z)."""
        det = self.det()
        if det not in (1, -1):
            raise ValueError(f"{self} is not invertible over the integers")
        adj = self.adjugate()
        return Mat2(det * adj.a, det * adj.b, det * adj.c, det * adj.d)

    def is_symmetric(self) -> bool:
        return self.b == self.c

    def negate(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def canonical_sign(self) -> "Mat2":
        """Representative of ±g whose bottom row is positive in the lexicographic sense."""
        if self.c > 0 or (self.c == 0 and self.d > 0):
            return self
        return self.negate()

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def from_rows(cls, rows: Any) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))


IDENTITY = Mat2(1, 0, 0, 1)
M = Mat2(3, 1, -1, 0)
J = Mat2(0, 1, -1, 0)
FLIP = Mat2(0, 1, 1, 0)


def mat2_mul(A: Mat2, B: Mat2) -> Mat2:
    return Mat2(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
    )


_TRIAL_PRIMES = tuple(int(p) for p in primerange(2, SQUAREFREE_TRIAL_LIMIT + 1))


@lru_cache(maxsize=8192)
def square_part(n: int) -> Tuple[int, int]:
    """Splits n > 0 into (s, core) with n = s²·core.

    Square factors are searched by trial division up to SQUAREFREE_TRIAL_LIMIT;
    an unfactored cofactor is kept whole unless it is itself a perfect square.
    """
    if n < 1:
        raise ValueError(f"square_part needs a positive integer, got {n}")
    s, core = 1, 1
    rest = gmpy2.mpz(n)
    for p in _TRIAL_PRIMES:
        if p * p > rest:
            break
        rest, exp = gmpy2.remove(rest, p)
        s *= p ** (exp // 2)
        if exp % 2:
            core *= p
    if gmpy2.is_square(rest):
        s *= int(gmpy2.isqrt(rest))
    else:
        core *= int(rest)
    return s, core


def _sign_surd(A: int, B: int, D: int) -> int:
    """Sign of A + B√D for non-square D."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0 or (A > 0) == (B > 0):
        return 1 if (A > 0 or (A == 0 and B > 0)) else -1
    larger_rational = A * A > B * B * D
    if A > 0:
        return 1 if larger_rational else -1
    return -1 if larger_rational else 1


@dataclass(frozen=True, eq=False)
class QuadIrr:
    """The real number (p + q√D)/r, kept canonical by quadirr_make."""

    p: int
    q: int
    D: int
    r: int

    def _key(self) -> Tuple[Fraction, Fraction, bool]:
        # value = p/r + sign(q)·√(q²D/r²), independent of how D was split
        return (
            Fraction(self.p, self.r),
            Fraction(self.q * self.q * self.D, self.r * self.r),
            self.q > 0,
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadIrr):
            return self._key() == other._key()
        return False

    def __hash__(self) -> int:
        return hash(self._key())

    def conjugate(self) -> "QuadIrr":
        return QuadIrr(self.p, -self.q, self.D, self.r)

    def trace(self) -> Fraction:
        return Fraction(2 * self.p, self.r)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.D, self.r * self.r)

    def __neg__(self) -> "QuadIrr":
        return QuadIrr(-self.p, -self.q, self.D, self.r)

    def _same_field(self, other: "QuadIrr") -> None:
        if other.D != self.D:
            raise ValueError(f"√{self.D} and √{other.D} generate different fields")

    def __add__(self, other: Any) -> Union["QuadIrr", Fraction]:
        if isinstance(other, QuadIrr):
            self._same_field(other)
            return _from_parts(
                self.p * other.r + other.p * self.r,
                self.q * other.r + other.q * self.r,
                self.D,
                self.r * other.r,
            )
        if isinstance(other, (int, Fraction)):
            t = Fraction(other)
            return _from_parts(
                self.p * t.denominator + t.numerator * self.r,
                self.q * t.denominator,
                self.D,
                self.r * t.denominator,
            )
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Any) -> Union["QuadIrr", Fraction]:
        if isinstance(other, (QuadIrr, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> Union["QuadIrr", Fraction]:
        return (-self) + other

    def __mul__(self, other: Any) -> Union["QuadIrr", Fraction]:
        if isinstance(other, QuadIrr):
            self._same_field(other)
            return _from_parts(
                self.p * other.p + self.q * other.q * self.D,
                self.p * other.q + self.q * other.p,
                self.D,
                self.r * other.r,
            )
        if isinstance(other, (int, Fraction)):
            t = Fraction(other)
            if t == 0:
                return Fraction(0)
            return _from_parts(
                self.p * t.numerator,
                self.q * t.numerator,
                self.D,
                self.r * t.denominator,
            )
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadIrr":
        n = self.p * self.p - self.q * self.q * self.D
        return _normalized(self.r * self.p, -self.r * self.q, self.D, n)

    def __truediv__(self, other: Any) -> Union["QuadIrr", Fraction]:
        if isinstance(other, QuadIrr):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other: Any) -> Union["QuadIrr", Fraction]:
        return self.reciprocal() * other

    def sign(self) -> int:
        return _sign_surd(self.p, self.q, self.D)

    def compare(self, other: Any) -> int:
        """Returns -1, 0 or 1 as self is below, equal to or above other."""
        if isinstance(other, (int, Fraction)):
            t = Fraction(other)
            return _sign_surd(
                self.p * t.denominator - t.numerator * self.r,
                self.q * t.denominator,
                self.D,
            )
        if isinstance(other, QuadIrr):
            if self == other:
                return 0
            if other.D == self.D:
                diff = self - other
                return diff.sign() if isinstance(diff, QuadIrr) else (diff > 0) - (diff < 0)
            bits = 32
            while True:
                mine, theirs = self.enclosure(bits), other.enclosure(bits)
                if mine.hi < theirs.lo:
                    return -1
                if theirs.hi < mine.lo:
                    return 1
                bits *= 2
        raise TypeError(f"cannot compare QuadIrr with {type(other).__name__}")

    def __lt__(self, other: Any) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: Any) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: Any) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: Any) -> bool:
        return self.compare(other) >= 0

    def floor(self) -> int:
        return quadirr_floor(self)

    def enclosure(self, bits: int = 64) -> "RatInterval":
        """Rational interval of width ≤ 2^-bits/r around the value."""
        root = int(gmpy2.isqrt(self.q * self.q * self.D << (2 * bits)))
        scale = 1 << bits
        low, high = Fraction(root, scale), Fraction(root + 1, scale)
        if self.q < 0:
            low, high = -high, -low
        return RatInterval(
            (self.p + low) / self.r,
            (self.p + high) / self.r,
        )

    def __float__(self) -> float:
        return float(self.enclosure(64).midpoint())

    def __str__(self) -> str:
        op = "+" if self.q > 0 else "-"
        coeff = "" if abs(self.q) == 1 else f"{abs(self.q)}"
        return f"({self.p}{op}{coeff}√{self.D})/{self.r}"


QuadOrRational = Union[QuadIrr, Fraction]


def _normalized(p: int, q: int, D: int, r: int) -> QuadIrr:
    if r == 0:
        raise ZeroDivisionError("zero denominator")
    g = _gcd(p, q, r)
    p, q, r = p // g, q // g, r // g
    if r < 0:
        p, q, r = -p, -q, -r
    return QuadIrr(int(p), int(q), int(D), int(r))


def _from_parts(p: int, q: int, D: int, r: int) -> QuadOrRational:
    if q == 0:
        return Fraction(p, r)
    return _normalized(p, q, D, r)


def quadirr_make(p: int, q: int, D: int, r: int) -> QuadIrr:
    """Builds the canonical form of (p + q√D)/r."""
    if D <= 0 or r == 0:
        raise ValueError(f"invalid surd data D={D}, r={r}")
    if q == 0 or gmpy2.is_square(D):
        raise RationalValue(f"({p} + {q}√{D})/{r} is rational")
    s, core = square_part(int(D))
    return _normalized(int(p), int(q) * s, core, int(r))


def quadirr_floor(x: QuadIrr) -> int:
    """Largest integer ≤ x, by integer square roots only."""
    n = x.q * x.q * x.D
    root = int(gmpy2.isqrt(n))
    surd_floor = root if x.q > 0 else -(root + 1)
    return (x.p + surd_floor) // x.r


def minimal_polynomial(x: QuadIrr) -> Tuple[int, int, int]:
    """Primitive (A, B, C) with A > 0 and A·x² + B·x + C = 0."""
    A = x.r * x.r
    B = -2 * x.p * x.r
    C = x.p * x.p - x.q * x.q * x.D
    g = _gcd(A, B, C)
    return A // g, B // g, C // g


def quadirr_height(x: QuadIrr) -> int:
    return max(abs(c) for c in minimal_polynomial(x))


@dataclass(frozen=True)
class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, t: Rational) -> "RatInterval":
        return cls(Fraction(t), Fraction(t))

    @classmethod
    def hull(cls, *values: Rational) -> "RatInterval":
        return cls(min(values), max(values))

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, other: Union[Rational, "RatInterval"]) -> bool:
        if isinstance(other, RatInterval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    def intersect(self, other: "RatInterval") -> Optional["RatInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return RatInterval(lo, hi)

    def below(self, other: Union[Rational, "RatInterval"]) -> bool:
        """True when every point lies strictly below every point of other."""
        bound = other.lo if isinstance(other, RatInterval) else other
        return self.hi < bound

    def above(self, other: Union[Rational, "RatInterval"]) -> bool:
        bound = other.hi if isinstance(other, RatInterval) else other
        return self.lo > bound

    def __add__(self, other: Any) -> "RatInterval":
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        if isinstance(other, (int, Fraction)):
            return RatInterval(self.lo + other, self.hi + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other: Any) -> "RatInterval":
        if isinstance(other, (RatInterval, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> "RatInterval":
        return (-self) + other

    def __mul__(self, other: Any) -> "RatInterval":
        if isinstance(other, RatInterval):
            products = (
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            )
            return RatInterval(min(products), max(products))
        if isinstance(other, (int, Fraction)):
            return RatInterval.hull(self.lo * other, self.hi * other)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "RatInterval":
        if self.lo <= 0 <= self.hi:
            raise SignChange(f"reciprocal of [{self.lo}, {self.hi}] crosses zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: Any) -> "RatInterval":
        if isinstance(other, RatInterval):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __abs__(self) -> "RatInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RatInterval(Fraction(0), max(-self.lo, self.hi))

    def floor(self) -> int:
        """Common integer part of every point, when the interval decides it."""
        low, high = _floor(self.lo), _floor(self.hi)
        if low != high:
            raise PrecisionExhausted(
                f"[{float(self.lo)}, {float(self.hi)}] straddles an integer"
            )
        return low


def moebius_apply(g: Mat2, x: Any) -> Any:
    """Image of x under t ↦ (a·t + b)/(c·t + d)."""
    if g.det() == 0:
        raise ValueError(f"singular matrix {g}")
    if isinstance(x, QuadIrr):
        num_p, num_q = g.a * x.p + g.b * x.r, g.a * x.q
        den_p, den_q = g.c * x.p + g.d * x.r, g.c * x.q
        return _normalized(
            num_p * den_p - num_q * den_q * x.D,
            num_q * den_p - num_p * den_q,
            x.D,
            den_p * den_p - den_q * den_q * x.D,
        )
    if isinstance(x, RatInterval):
        den_lo, den_hi = g.c * x.lo + g.d, g.c * x.hi + g.d
        if den_lo * den_hi <= 0:
            logging.debug(f"pole of {g} inside [{x.lo}, {x.hi}]")
            raise SignChange(f"denominator of {g} vanishes on [{x.lo}, {x.hi}]")
        return RatInterval.hull(
            (g.a * x.lo + g.b) / den_lo,
            (g.a * x.hi + g.b) / den_hi,
        )
    if isinstance(x, (int, Fraction)):
        den = g.c * x + g.d
        if den == 0:
            raise SignChange(f"{x} is the pole of {g}")
        return Fraction(g.a * x + g.b) / den
    raise TypeError(f"cannot apply a Möbius map to {type(x).__name__}")


@dataclass(frozen=True)
class BinQuadForm:
    """The binary quadratic form a·T² + b·TU + c·U²."""

    a: Any
    b: Any
    c: Any

    def disc(self) -> Any:
        return self.b * self.b - 4 * self.a * self.c

    def evaluate(self, u: Any, t: Any) -> Any:
        return self.a * t * t + self.b * t * u + self.c * u * u

    def content(self) -> int:
        return _gcd(self.a, self.b, self.c)

    def primitive(self) -> "BinQuadForm":
        g = self.content()
        return BinQuadForm(self.a // g, self.b // g, self.c // g)

    def is_indefinite(self) -> bool:
        return self.disc() > 0

    def coefficients(self) -> Tuple[Any, Any, Any]:
        return (self.a, self.b, self.c)
