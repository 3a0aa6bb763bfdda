"""Truncated Laurent q-series over an exact coefficient ring.

A :class:`QSeries` holds a dense integer vector plus one series-wide scale:

* over the rationals the value is ``sum(data[i] / den * q**(min_exp + i))``;
* over ``padic(p, M)`` the value is ``p**shift * sum(data[i] * q**(min_exp + i))``
  with every ``data[i]`` known modulo ``p**relprec``.  All coefficients share
  the absolute precision ``shift + relprec`` (a capped-absolute model).

Coefficients below ``min_exp`` are exact zeros; coefficients at or above
``prec_bound`` are unknown and never claimed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import gmpy2

from .coeffring import PadicScaled, PrecisionError, _check_odd_prime, ordp, split_p


class WindowError(ValueError):
    """Raised when an operation would claim coefficients outside the known window."""


@dataclass(frozen=True)
class RationalField:
    def __str__(self):
        return "rational"


@dataclass(frozen=True)
class PadicRing:
    p: int
    prec: int

    def __post_init__(self):
        _check_odd_prime(self.p)
        if self.prec < 1:
            raise PrecisionError("p-adic precision must be at least 1")

    def __str__(self):
        return f"padic({self.p},{self.prec})"


QQ = RationalField()
Ring = Union[RationalField, PadicRing]


def parse_ring(text: str) -> Ring:
    text = text.strip()
    if text == "rational":
        return QQ
    if text.startswith("padic(") and text.endswith(")"):
        p, m = text[6:-1].split(",")
        return PadicRing(int(p), int(m))
    raise ValueError(f"unknown ring {text!r}")


# -- raw integer convolution ---------------------------------------------------

def _pack(vals: Sequence[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in vals), "little")


def _pack_signed(vals: Sequence[int], nbytes: int) -> int:
    pos = _pack([v if v > 0 else 0 for v in vals], nbytes)
    neg = _pack([-v if v < 0 else 0 for v in vals], nbytes)
    return pos - neg


def _unpack(big: int, nbytes: int, count: int) -> list[int]:
    raw = big.to_bytes(nbytes * count, "little") if big else bytes(nbytes * count)
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]


def _maxbits(vals: Sequence[int]) -> int:
    return max((abs(v).bit_length() for v in vals), default=0)


def convolve(x: Sequence[int], y: Sequence[int], n: int, modulus: Optional[int] = None) -> list[int]:
    """First ``n`` coefficients of the product of two integer polynomials.

    Uses Kronecker substitution: both vectors are packed into single big
    integers, multiplied with GMP, and unpacked.  With ``modulus`` the inputs
    must already be reduced to ``[0, modulus)`` and the output is reduced.
    """
    x = list(x[:n])
    y = list(y[:n])
    if not x or not y:
        return [0] * n
    terms = min(len(x), len(y)).bit_length()
    if modulus is not None:
        bits = 2 * (modulus - 1).bit_length() + terms + 1
        nbytes = (bits + 7) // 8
        prod = gmpy2.mpz(_pack(x, nbytes)) * gmpy2.mpz(_pack(y, nbytes))
        count = min(n, len(x) + len(y) - 1)
        prod = int(prod % (gmpy2.mpz(1) << (8 * nbytes * count)))
        out = [c % modulus for c in _unpack(prod, nbytes, count)]
    else:
        if not any(x) or not any(y):
            return [0] * n
        bits = _maxbits(x) + _maxbits(y) + terms + 2
        nbytes = (bits + 7) // 8
        prod = gmpy2.mpz(_pack_signed(x, nbytes)) * gmpy2.mpz(_pack_signed(y, nbytes))
        count = min(n, len(x) + len(y) - 1)
        half = 1 << (8 * nbytes - 1)
        # bias every slot into [0, 2^b) so slots decode independently
        total = len(x) + len(y) - 1
        bias = _pack([half] * total, nbytes)
        prod = int((prod + bias) % (gmpy2.mpz(1) << (8 * nbytes * count)))
        out = [c - half for c in _unpack(prod, nbytes, count)]
    return out + [0] * (n - len(out))


def _pvaluation_of_content(data: Sequence[int], p: int, cap: int) -> int:
    """min(cap, min ord_p(data[i])) for data reduced mod p**cap."""
    g = math.gcd(p**cap, *data)
    v = 0
    while g % p == 0:
        g //= p
        v += 1
    return v


class QSeries:
    """Immutable truncated Laurent series; see the module docstring for the layout."""

    __slots__ = ("ring", "min_exp", "data", "den", "shift", "relprec")

    def __init__(self, ring: Ring, min_exp: int, data: Iterable[int], *,
                 den: int = 1, shift: int = 0, relprec: Optional[int] = None):
        data = list(data)
        if not data:
            raise WindowError("empty coefficient window")
        if isinstance(ring, RationalField):
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                den, data = -den, [-c for c in data]
            if den != 1:
                g = math.gcd(den, *data)
                if g > 1:
                    den //= g
                    data = [c // g for c in data]
            shift, relprec = 0, None
        else:
            p = ring.p
            if relprec is None:
                raise ValueError("padic series need relprec")
            if relprec <= 0:
                shift, relprec = shift + relprec, 0
                data = [0] * len(data)
            else:
                mod = p**relprec
                data = [c % mod for c in data]
                v = _pvaluation_of_content(data, p, relprec)
                if v:
                    pv = p**v
                    data = [c // pv for c in data]
                    shift += v
                    relprec -= v
            den = 1
        self.ring = ring
        self.min_exp = min_exp
        self.data = tuple(data)
        self.den = den
        self.shift = shift
        self.relprec = relprec

    def __setattr__(self, name, value):
        if hasattr(self, "relprec"):
            raise AttributeError("QSeries is immutable")
        object.__setattr__(self, name, value)

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_ints(cls, ring: Ring, min_exp: int, ints: Iterable[int]) -> "QSeries":
        """An exactly known integer series, placed in ``ring``."""
        if isinstance(ring, RationalField):
            return cls(ring, min_exp, ints)
        return cls(ring, min_exp, ints, shift=0, relprec=ring.prec)

    @classmethod
    def from_rationals(cls, ring: Ring, min_exp: int, values: Iterable) -> "QSeries":
        values = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in values)) if values else 1
        ints = [v.numerator * (den // v.denominator) for v in values]
        s = cls(QQ, min_exp, ints, den=den)
        return s if isinstance(ring, RationalField) else s.reduce_mod(ring.p, ring.prec)

    @classmethod
    def from_padics(cls, ring: PadicRing, min_exp: int, values: Sequence[PadicScaled]) -> "QSeries":
        """Assemble from per-coefficient values sharing one absolute precision."""
        absprecs = {v.absprec for v in values}
        if len(absprecs) != 1:
            raise PrecisionError("coefficients must share one absolute precision")
        absprec = absprecs.pop()
        nonzero = [v.shift for v in values if not v.is_zero()]
        if not nonzero:
            return cls(ring, min_exp, [0] * len(values), shift=absprec, relprec=0)
        base = min(nonzero)
        data = [0 if v.is_zero() else v.mantissa * ring.p ** (v.shift - base) for v in values]
        return cls(ring, min_exp, data, shift=base, relprec=absprec - base)

    @classmethod
    def monomial(cls, ring: Ring, exp: int, prec_bound: int, coeff: int = 1) -> "QSeries":
        data = [0] * (prec_bound - exp)
        data[0] = coeff
        return cls.from_ints(ring, exp, data)

    @classmethod
    def zero(cls, ring: Ring, min_exp: int, prec_bound: int) -> "QSeries":
        return cls.from_ints(ring, min_exp, [0] * (prec_bound - min_exp))

    # -- views ----------------------------------------------------------------
    @property
    def prec_bound(self) -> int:
        return self.min_exp + len(self.data)

    @property
    def is_padic(self) -> bool:
        return isinstance(self.ring, PadicRing)

    @property
    def absprec(self) -> Union[int, float]:
        """Absolute p-adic precision shared by all coefficients (inf over QQ)."""
        return self.shift + self.relprec if self.is_padic else math.inf

    def is_zero(self) -> bool:
        return not any(self.data)

    def coeff(self, n: int):
        """Coefficient of ``q**n`` as a Fraction or PadicScaled."""
        if n >= self.prec_bound:
            raise WindowError(f"coefficient q^{n} beyond known window [.., {self.prec_bound})")
        c = self.data[n - self.min_exp] if n >= self.min_exp else 0
        if not self.is_padic:
            return Fraction(c, self.den)
        p = self.ring.p
        if c == 0:
            return PadicScaled.zero(p, self.absprec)
        v, u = split_p(c, p)
        prec = self.relprec - v
        return PadicScaled(p, self.shift + v, u % p**prec, prec)

    def coeffs(self, lo: Optional[int] = None, hi: Optional[int] = None) -> list:
        lo = self.min_exp if lo is None else lo
        hi = self.prec_bound if hi is None else hi
        return [self.coeff(n) for n in range(lo, hi)]

    def int_coeffs(self) -> list[int]:
        """The coefficients as integers; requires an integral rational series."""
        if self.is_padic or self.den != 1:
            raise ValueError("series is not an integer series")
        return list(self.data)

    def valuations(self, p: Optional[int] = None) -> list:
        """Per-coefficient valuations (for zero p-adic coefficients, the precision bound)."""
        if self.is_padic:
            return [c.valuation for c in self.coeffs()]
        if p is None:
            raise TypeError("rational valuations need an explicit prime")
        return [ordp(c, p) for c in self.coeffs()]

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs(self.min_exp, min(self.prec_bound, self.min_exp + 4)))
        return f"QSeries({self.ring}, window=[{self.min_exp}, {self.prec_bound}), {head}, ...)"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.ring == other.ring and self.min_exp == other.min_exp and self.data == other.data
                and self.den == other.den and self.shift == other.shift and self.relprec == other.relprec)

    def __hash__(self):
        return hash((self.ring, self.min_exp, self.data, self.den, self.shift, self.relprec))

    # -- helpers --------------------------------------------------------------
    def _check_ring(self, other: "QSeries") -> None:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _like(self, min_exp: int, data, **kw) -> "QSeries":
        if self.is_padic:
            kw.setdefault("shift", self.shift)
            kw.setdefault("relprec", self.relprec)
        else:
            kw.setdefault("den", self.den)
        return QSeries(self.ring, min_exp, data, **kw)

    def _padded(self, lo: int, hi: int) -> list[int]:
        """Raw data on [lo, hi) with exact zeros below ``min_exp``."""
        if hi > self.prec_bound:
            raise WindowError("window exceeds known coefficients")
        start = max(lo, self.min_exp)
        return [0] * (start - lo) + list(self.data[start - self.min_exp:hi - self.min_exp])

    def truncate(self, prec_bound: int) -> "QSeries":
        if prec_bound > self.prec_bound:
            raise WindowError(f"cannot extend window to {prec_bound} (known to {self.prec_bound})")
        if prec_bound <= self.min_exp:
            raise WindowError("truncation leaves an empty window")
        return self._like(self.min_exp, self.data[:prec_bound - self.min_exp])

    def with_min_exp(self, min_exp: int) -> "QSeries":
        """Re-anchor the window at ``min_exp`` (dropping known-zero leading terms or padding)."""
        if min_exp > self.min_exp and any(self.data[:min_exp - self.min_exp]):
            raise ValueError("cannot drop nonzero coefficients")
        return self._like(min_exp, self._padded(min_exp, self.prec_bound))

    # -- additive structure ---------------------------------------------------
    def _combine(self, other: "QSeries", sign: int) -> "QSeries":
        self._check_ring(other)
        lo = min(self.min_exp, other.min_exp)
        hi = min(self.prec_bound, other.prec_bound)
        if hi <= lo:
            raise WindowError("empty window intersection")
        a, b = self._padded(lo, hi), other._padded(lo, hi)
        if not self.is_padic:
            den = self.den * other.den // math.gcd(self.den, other.den)
            fa, fb = den // self.den, sign * (den // other.den)
            return QSeries(QQ, lo, [x * fa + y * fb for x, y in zip(a, b)], den=den)
        p = self.ring.p
        absprec = min(self.absprec, other.absprec)
        base = min(self.shift, other.shift)
        fa, fb = p ** (self.shift - base), sign * p ** (other.shift - base)
        return QSeries(self.ring, lo, [x * fa + y * fb for x, y in zip(a, b)],
                       shift=base, relprec=absprec - base)

    def __add__(self, other):
        if isinstance(other, QSeries):
            return self._combine(other, 1)
        return self._combine(self.constant(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self._combine(other, -1)
        return self._combine(self.constant(other), -1)

    def __rsub__(self, other):
        return self.constant(other)._combine(self, -1)

    def __neg__(self):
        return self._like(self.min_exp, [-c for c in self.data])

    def constant(self, c) -> "QSeries":
        """The constant ``c`` on this series' window (known exactly)."""
        lo, hi = min(0, self.min_exp), self.prec_bound
        if hi <= 0:
            raise WindowError("constant term lies beyond the known window")
        data = [0] * (hi - lo)
        data[-lo] = 1
        return QSeries.from_ints(self.ring, lo, data).scale(c)

    def scale(self, c) -> "QSeries":
        """Multiply by a ring element (int, Fraction, or PadicScaled)."""
        if not self.is_padic:
            if isinstance(c, PadicScaled):
                raise TypeError("cannot scale a rational series by a p-adic number")
            c = Fraction(c)
            return QSeries(QQ, self.min_exp, [x * c.numerator for x in self.data], den=self.den * c.denominator)
        p = self.ring.p
        if not isinstance(c, PadicScaled):
            c = Fraction(c)
            if c == 0:
                return self._like(self.min_exp, [0] * len(self.data), relprec=0)
            e = ordp(c, p)
            num, den = c.numerator // p ** max(e, 0), c.denominator // p ** max(-e, 0)
            mod = p ** self.relprec
            unit = num * pow(den, -1, mod) % mod if self.relprec else 0
            return self._like(self.min_exp, [x * unit for x in self.data], shift=self.shift + e)
        if c.p != p:
            raise ValueError("mixed primes")
        if c.is_zero():
            absprec = c.absprec + (self.shift if not self.is_zero() else self.absprec)
            return self._like(self.min_exp, [0] * len(self.data), shift=absprec, relprec=0)
        if self.is_zero():
            return self._like(self.min_exp, self.data, shift=self.absprec + c.shift, relprec=0)
        return self._like(self.min_exp, [x * c.mantissa for x in self.data],
                          shift=self.shift + c.shift, relprec=min(self.relprec, c.prec))

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def shift_exp(self, t: int) -> "QSeries":
        """Multiply by ``q**t``."""
        return self._like(self.min_exp + t, self.data)

    # -- multiplicative structure ---------------------------------------------
    def mul(self, other: "QSeries") -> "QSeries":
        """Cauchy product on the window ``[ma+mb, min(Ta+mb, Tb+ma))``."""
        self._check_ring(other)
        n = min(len(self.data), len(other.data))
        lo = self.min_exp + other.min_exp
        if not self.is_padic:
            data = convolve(self.data, other.data, n)
            return QSeries(QQ, lo, data, den=self.den * other.den)
        if self.relprec == 0 or other.relprec == 0:
            if self.relprec == 0 and other.relprec == 0:
                absprec = self.absprec + other.absprec
            elif self.relprec == 0:
                absprec = self.absprec + other.shift
            else:
                absprec = other.absprec + self.shift
            return QSeries(self.ring, lo, [0] * n, shift=absprec, relprec=0)
        relprec = min(self.relprec, other.relprec)
        mod = self.ring.p**relprec
        data = convolve([x % mod for x in self.data], [x % mod for x in other.data], n, modulus=mod)
        return QSeries(self.ring, lo, data, shift=self.shift + other.shift, relprec=relprec)

    def power(self, r: int) -> "QSeries":
        if r < 0:
            return self.invert_unit().power(-r)
        result = None
        base = self
        while r:
            if r & 1:
                result = base if result is None else result.mul(base)
            r >>= 1
            if r:
                base = base.mul(base)
        if result is None:
            return QSeries.monomial(self.ring, 0, len(self.data))
        return result

    __pow__ = power

    def invert_unit(self) -> "QSeries":
        """Inverse series; the coefficient at ``min_exp`` must be a unit."""
        n = len(self.data)
        a0 = self.data[0]
        if not self.is_padic:
            if a0 == 0:
                raise ZeroDivisionError("leading coefficient is zero")
            if abs(a0) == 1:
                inv = _newton_inverse([c * a0 for c in self.data], n, None)
                return QSeries(QQ, -self.min_exp, [c * a0 * self.den for c in inv])
            # substitute q -> a0*q to make the leading coefficient 1
            scaled = [c * a0 ** max(i - 1, 0) if i else 1 for i, c in enumerate(self.data)]
            inv = _newton_inverse(scaled, n, None)
            den = a0**n
            data = [c * a0 ** (n - 1 - i) * self.den for i, c in enumerate(inv)]
            return QSeries(QQ, -self.min_exp, data, den=den)
        p = self.ring.p
        if self.relprec == 0 or self.shift != 0 or a0 % p == 0:
            raise ZeroDivisionError("leading coefficient is not a p-adic unit")
        mod = p**self.relprec
        u = pow(a0, -1, mod)
        inv = _newton_inverse([c * u % mod for c in self.data], n, mod)
        return QSeries(self.ring, -self.min_exp, [c * u for c in inv], shift=0, relprec=self.relprec)

    # -- Hecke-type operators -------------------------------------------------
    def apply_u(self, n: int) -> "QSeries":
        """Coefficient of ``q**m`` in the output is the coefficient of ``q**(n*m)``."""
        if n < 1:
            raise ValueError("U_n needs n >= 1")
        lo = -((-self.min_exp) // n)
        hi = (self.prec_bound - 1) // n + 1
        return self._like(lo, [self.data[m * n - self.min_exp] for m in range(lo, hi)])

    def apply_v(self, n: int) -> "QSeries":
        """Exponent dilation ``q -> q**n``."""
        if n < 1:
            raise ValueError("V_n needs n >= 1")
        out = [0] * (n * (len(self.data) - 1) + 1)
        out[::n] = self.data
        return self._like(n * self.min_exp, out)

    def apply_d(self, r: int = 1) -> "QSeries":
        """``(q d/dq)**r``: the coefficient of ``q**n`` is multiplied by ``n**r``."""
        if r < 0:
            raise ValueError("D^r needs r >= 0")
        return self._like(self.min_exp, [c * (self.min_exp + i) ** r for i, c in enumerate(self.data)])

    # -- reduction and congruence ---------------------------------------------
    def reduce_mod(self, p: int, m: int) -> "QSeries":
        """Image of a rational series in ``padic(p, m)``."""
        if self.is_padic:
            if self.ring.p != p:
                raise ValueError("mixed primes")
            return self
        ring = PadicRing(p, m)
        e, w = split_p(self.den, p)
        mod = p**m
        winv = pow(w, -1, mod)
        return QSeries(ring, self.min_exp, [c * winv for c in self.data], shift=-e, relprec=m)

    def residues(self, m: int, lo: Optional[int] = None, hi: Optional[int] = None) -> list[int]:
        """Coefficients mod ``p**m`` as integers; needs integrality and precision."""
        if not self.is_padic:
            raise TypeError("residues need a p-adic series")
        if self.absprec < m:
            raise PrecisionError(f"series known mod p^{self.absprec}, need p^{m}")
        p = self.ring.p
        lo = self.min_exp if lo is None else lo
        hi = self.prec_bound if hi is None else hi
        raw = self._padded(lo, hi)
        if self.shift >= 0:
            return [c * p**self.shift % p**m for c in raw]
        out = []
        for c in raw:
            c %= p**self.relprec
            if c and c % p ** (-self.shift):
                raise ValueError("coefficient is not p-integral")
            out.append(c // p ** (-self.shift) % p**m)
        return out


def _newton_inverse(a: Sequence[int], n: int, modulus: Optional[int]) -> list[int]:
    """First ``n`` terms of ``1/a`` for an integer polynomial with ``a[0] == 1``."""
    b = [1]
    k = 1
    while k < n:
        k = min(2 * k, n)
        ab = convolve(a, b, k, modulus)
        # b <- b * (2 - a*b)
        corr = [-c for c in ab]
        corr[0] += 2
        if modulus is not None:
            corr = [c % modulus for c in corr]
        b = convolve(b + [0] * (k - len(b)), corr, k, modulus)
    return b[:n]


def congruent_mod(a: QSeries, b: QSeries, p: int, m: Optional[int], lo: int, hi: int):
    """Check ``a = b (mod p**m)`` on exponents ``[lo, hi)``.

    Returns ``(ok, mismatch)`` where ``mismatch`` is ``None`` or a tuple
    ``(exponent, lhs, rhs, ord_of_difference)``.  ``m=None`` asks for exact
    equality over the rationals.  Raises :class:`PrecisionError` rather than
    passing on insufficient precision.
    """
    if hi > a.prec_bound or hi > b.prec_bound:
        raise WindowError(f"window [{lo},{hi}) exceeds known coefficients")
    if m is None:
        if a.is_padic or b.is_padic:
            raise TypeError("exact comparison needs rational series")
        for n in range(lo, hi):
            x, y = a.coeff(n), b.coeff(n)
            if x != y:
                return False, (n, x, y, None if p is None else ordp(x - y, p))
        return True, None
    if not a.is_padic and not b.is_padic:
        for n in range(lo, hi):
            x, y = a.coeff(n), b.coeff(n)
            d = ordp(x - y, p)
            if d < m:
                return False, (n, x, y, d)
        return True, None
    ring = a.ring if a.is_padic else b.ring
    if not isinstance(ring, PadicRing) or ring.p != p:
        raise ValueError("congruence prime differs from the series ring")
    a = a if a.is_padic else a.reduce_mod(p, ring.prec)
    b = b if b.is_padic else b.reduce_mod(p, ring.prec)
    diff = a - b
    if diff.absprec < m:
        raise PrecisionError(f"difference known mod {p}^{diff.absprec}, congruence needs {p}^{m}")
    if diff.is_zero() or diff.shift >= m:
        return True, None
    mod = p ** (m - diff.shift)
    for n in range(lo, hi):
        raw = diff.data[n - diff.min_exp] if n >= diff.min_exp else 0
        if raw % mod:
            d = diff.coeff(n)
            return False, (n, a.coeff(n), b.coeff(n), d.valuation)
    return True, None
