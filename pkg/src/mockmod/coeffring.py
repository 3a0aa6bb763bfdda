"""Exact coefficient arithmetic: rationals, scaled p-adic numbers, Hecke roots.

Rationals are plain :class:`fractions.Fraction` values.  A :class:`PadicScaled`
is ``p**shift * mantissa`` known modulo ``p**(shift + prec)``; every operation
propagates that absolute precision exactly instead of assuming a global
modulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rat = Fraction
INF = math.inf


class PrecisionError(ArithmeticError):
    """Raised when a p-adic result would claim more precision than is known."""


class UnsupportedValuationError(ValueError):
    """Raised when the Hecke polynomial does not split with distinct valuations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not supported (an odd prime is required)")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def ordp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ordp(x: Union[int, Fraction], p: int) -> Union[int, float]:
    """Exponent of ``p`` in the rational ``x``; ``math.inf`` for zero."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INF
    return ordp_int(x.numerator, p) - ordp_int(x.denominator, p)


def split_p(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, u)`` with ``n = p**v * u`` and ``p`` not dividing ``u``."""
    v = ordp_int(n, p)
    return v, n // p**v


@dataclass(frozen=True)
class PadicScaled:
    """The p-adic number ``p**shift * mantissa`` known mod ``p**(shift + prec)``.

    ``mantissa`` is a unit reduced mod ``p**prec``.  A value that is zero at
    its precision is stored with ``mantissa == 0`` and ``prec == 1``, so its
    absolute precision is ``shift + 1``.
    """

    p: int
    shift: int
    mantissa: int
    prec: int

    def __post_init__(self):
        if self.prec < 1:
            raise PrecisionError("precision must be at least 1")
        if not 0 <= self.mantissa < self.p**self.prec:
            raise ValueError("mantissa not reduced")
        if self.mantissa and self.mantissa % self.p == 0:
            raise ValueError("mantissa must be a p-adic unit")

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicScaled":
        return cls(p, absprec - 1, 0, 1)

    @classmethod
    def from_int_mod(cls, value: int, p: int, absprec: int) -> "PadicScaled":
        """Build from an integer known modulo ``p**absprec``."""
        modulus = p**absprec if absprec >= 0 else None
        if modulus is not None:
            value %= modulus
        if value == 0:
            return cls.zero(p, absprec)
        v, u = split_p(value, p)
        if v >= absprec:
            return cls.zero(p, absprec)
        prec = absprec - v
        return cls(p, v, u % p**prec, prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicScaled":
        _check_odd_prime(p)
        if prec < 1:
            raise PrecisionError("precision must be at least 1")
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        e = ordp(x, p)
        num = x.numerator // p ** max(e, 0)
        den = x.denominator // p ** max(-e, 0)
        mod = p**prec
        return cls(p, e, num * pow(den, -1, mod) % mod, prec)

    # views --------------------------------------------------------------
    @property
    def absprec(self) -> int:
        return self.shift + self.prec

    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def valuation(self) -> int:
        """Exact valuation, or the known lower bound ``absprec`` for zero."""
        return self.absprec if self.is_zero() else self.shift

    def residue(self, m: int) -> int:
        """The value modulo ``p**m`` as an integer in ``[0, p**m)``."""
        if m > self.absprec:
            raise PrecisionError(f"value known mod p^{self.absprec}, asked mod p^{m}")
        if self.shift < 0 and not self.is_zero():
            raise ValueError("value is not p-integral")
        if self.is_zero():
            return 0
        return self.mantissa * self.p**self.shift % self.p**m

    def to_rational(self) -> Fraction:
        """The canonical representative ``p**shift * mantissa``."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.mantissa) * Fraction(self.p) ** self.shift

    def lift(self, absprec: int) -> "PadicScaled":
        """Reduce the claimed precision to ``absprec`` (never increase it)."""
        if absprec > self.absprec:
            raise PrecisionError("cannot increase precision")
        if self.is_zero() or absprec <= self.shift:
            return PadicScaled.zero(self.p, absprec)
        prec = absprec - self.shift
        return PadicScaled(self.p, self.shift, self.mantissa % self.p**prec, prec)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "PadicScaled":
        if isinstance(other, PadicScaled):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            # exact rationals get enough precision never to be the bottleneck
            if other == 0:
                return PadicScaled.zero(self.p, max(self.absprec, self.prec) + abs(self.shift) + 1)
            e = ordp(other, self.p)
            return PadicScaled.from_rational(other, self.p, max(self.prec, self.absprec - e, 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        absprec = min(self.absprec, other.absprec)
        base = min(self.shift, other.shift)
        total = 0
        for x in (self, other):
            if not x.is_zero():
                total += x.mantissa * p ** (x.shift - base)
        if absprec <= base:
            return PadicScaled.zero(p, absprec)
        total %= p ** (absprec - base)
        if total == 0:
            return PadicScaled.zero(p, absprec)
        v, u = split_p(total, p)
        shift = base + v
        prec = absprec - shift
        return PadicScaled(p, shift, u % p**prec, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicScaled(self.p, self.shift, (-self.mantissa) % self.p**self.prec, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.is_zero() and other.is_zero():
            return PadicScaled.zero(p, self.absprec + other.absprec)
        if self.is_zero():
            return PadicScaled.zero(p, self.absprec + other.shift)
        if other.is_zero():
            return PadicScaled.zero(p, other.absprec + self.shift)
        prec = min(self.prec, other.prec)
        return PadicScaled(p, self.shift + other.shift,
                           self.mantissa * other.mantissa % p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScaled":
        if self.is_zero():
            raise PrecisionError("division by a value that is zero at its precision")
        mod = self.p**self.prec
        return PadicScaled(self.p, -self.shift, pow(self.mantissa, -1, mod), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScaled.from_rational(1, self.p, self.prec if not self.is_zero() else 1)
        if n == 0:
            return result
        if self.is_zero():
            return PadicScaled.zero(self.p, n * self.absprec)
        mod = self.p**self.prec
        return PadicScaled(self.p, n * self.shift, pow(self.mantissa, n, mod), self.prec)

    def congruent(self, other, m: int) -> bool:
        """True iff ``self - other`` has valuation at least ``m``."""
        diff = self - other
        if diff.absprec < m:
            raise PrecisionError(f"difference known mod p^{diff.absprec}, need p^{m}")
        return diff.valuation >= m

    # text encoding ------------------------------------------------------
    def encode(self) -> str:
        return f"{self.shift}:{self.mantissa}:{self.prec}"

    @classmethod
    def decode(cls, text: str, p: int) -> "PadicScaled":
        e, u, m = (int(t) for t in text.split(":"))
        return cls(p, e, u, m)

    def __str__(self):
        if self.is_zero():
            return f"O({self.p}^{self.absprec})"
        return f"{self.p}^{self.shift}*{self.mantissa} + O({self.p}^{self.absprec})"


def encode_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_rational(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class HeckeRootPair:
    """The roots of ``x^2 - lam*x + p^(k-1)`` with ``ord(beta) < ord(beta_prime)``."""

    p: int
    k: int
    lam: int
    beta: PadicScaled
    beta_prime: PadicScaled
    v: int

    def beta_rational(self) -> Fraction:
        """An exact rational representative of beta (an integer here)."""
        return self.beta.to_rational()

    def beta_prime_rational(self) -> Fraction:
        """Representative of beta' compatible with ``beta_rational``: lam - beta."""
        return self.lam - self.beta_rational()


def hensel_quadratic_roots(lam: int, p: int, k: int, prec: int) -> HeckeRootPair:
    """Split the Hecke polynomial at a non-ordinary prime.

    With ``x = p**v * y`` the polynomial becomes
    ``y^2 - (lam/p^v) y + p^(k-1-2v)``, whose reduction mod ``p`` has the
    simple unit root ``y = lam/p^v``; Newton iteration lifts it to ``p**prec``.
    """
    _check_odd_prime(p)
    if lam == 0:
        raise UnsupportedValuationError("lambda = 0 has infinite valuation")
    v, unit = split_p(lam, p)
    if v == 0 or 2 * v >= k - 1:
        raise UnsupportedValuationError(
            f"unsupported valuation split: ord_{p}({lam}) = {v}, k = {k}")
    c = p ** (k - 1 - 2 * v)
    mod = p**prec
    y = unit % p
    m = 1
    while m < prec:
        m = min(2 * m, prec)
        mm = p**m
        f = (y * y - unit * y + c) % mm
        df = (2 * y - unit) % mm
        y = (y - f * pow(df, -1, mm)) % mm
    y %= mod
    beta = PadicScaled(p, v, y, prec)
    # beta' = p^(k-1)/beta keeps full relative precision
    beta_prime = PadicScaled(p, k - 1 - v, pow(y, -1, mod), prec)
    return HeckeRootPair(p, k, lam, beta, beta_prime, v)
