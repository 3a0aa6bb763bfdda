"""q-expansions of the classical forms: E_k, Delta, j and their level-p variants.

Every generator takes ``prec`` (exclusive upper exponent) and a coefficient
ring; integer expansions are computed exactly and then placed in the ring.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .qseries import QQ, QSeries, RationalField, Ring


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n from sum_{j<=n} C(n+1, j) B_j = 0 (so B_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    return -sum(comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def sigma(n: int, r: int) -> int:
    """Divisor power sum sigma_r(n)."""
    if n < 1:
        raise ValueError("sigma needs n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**r
            e = n // d
            if e != d:
                total += e**r
        d += 1
    return total


def sigma_table(count: int, r: int) -> list[int]:
    """[sigma_r(0)=0, sigma_r(1), ..., sigma_r(count-1)] by a divisor sieve."""
    table = [0] * count
    for d in range(1, count):
        dr = d**r
        for m in range(d, count, d):
            table[m] += dr
    return table


def eisenstein(k: int, prec: int, ring: Ring = QQ) -> QSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n on [0, prec)."""
    if k < 2 or k % 2:
        raise ValueError("Eisenstein series need even k >= 2")
    c = -Fraction(2 * k) / bernoulli(k)
    sig = sigma_table(prec, k - 1)
    data = [c.denominator] + [c.numerator * s for s in sig[1:]]
    series = QSeries(QQ, 0, data, den=c.denominator)
    return _place(series, ring)


def _place(series: QSeries, ring: Ring) -> QSeries:
    if isinstance(ring, RationalField):
        return series
    return series.reduce_mod(ring.p, ring.prec)


def euler_product(count: int) -> list[int]:
    """prod_{n>=1} (1 - q^n) to ``count`` terms via the pentagonal number theorem."""
    out = [0] * count
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= count:
            break
        out[e1] += sign
        if k and e2 < count:
            out[e2] += sign
        k += 1
    return out


@lru_cache(maxsize=8)
def _delta_ints(count: int) -> tuple[int, ...]:
    # q^-1 * Delta = P^24 with P the Euler product; 24 = 8 * 3
    p = QSeries.from_ints(QQ, 0, euler_product(count))
    p8 = p.mul(p).mul(p.mul(p))
    p8 = p8.mul(p8)
    return p8.mul(p8).mul(p8).data


def delta(prec: int, ring: Ring = QQ) -> QSeries:
    """Delta = q prod (1-q^n)^24 = sum tau(n) q^n on [1, prec)."""
    if prec < 2:
        raise ValueError("delta needs prec >= 2")
    return QSeries.from_ints(ring, 1, _delta_ints(prec - 1))


def tau(n: int) -> int:
    return _delta_ints(n)[n - 1]


def j_invariant(prec: int, ring: Ring = QQ) -> QSeries:
    """j = E_4^3 / Delta on [-1, prec)."""
    e4 = eisenstein(4, prec + 1, ring)
    return e4.power(3).mul(delta(prec + 2, ring).invert_unit()).truncate(prec)


def eisenstein_p(k: int, p: int, prec: int, ring: Ring = QQ) -> QSeries:
    """E_{k,p} = E_k - p^k E_k(pz); integral with constant term 1 - p^k."""
    if k < 4 or k % 2:
        raise ValueError("eisenstein_p needs even k >= 4")
    ek = eisenstein(k, prec, QQ)
    series = ek - ek.apply_v(p).truncate(prec).scale(p**k)
    return _place(series, ring)


def e2tilde(p: int, prec: int, ring: Ring = QQ) -> QSeries:
    """E_2 - p E_2(pz), a holomorphic weight 2 form on Gamma_0(p)."""
    if p < 2:
        raise ValueError("p must be at least 2")
    e2 = eisenstein(2, prec, QQ)
    return _place(e2 - e2.apply_v(p).truncate(prec).scale(p), ring)


def eichler_integral(g: QSeries, kappa: int) -> QSeries:
    """sum n^(kappa-1) a_g(n) q^n for a cusp form g of weight 2 - kappa."""
    if g.is_padic:
        raise TypeError("the Eichler integral is only defined here over the rationals")
    if kappa > 0:
        raise ValueError("kappa must be <= 0")
    if g.min_exp < 1:
        if any(g.data[:1 - g.min_exp]):
            raise ValueError("g must be a cusp form (window starting at q^1)")
        g = g.with_min_exp(1)
    e = 1 - kappa
    coeffs = [Fraction(c, g.den) / n**e for n, c in enumerate(g.data, start=g.min_exp)]
    return QSeries.from_rationals(QQ, g.min_exp, coeffs)


# -- form registry for the command line ------------------------------------------

FORM_IDS = ("eisenstein", "delta", "j", "eisenstein-p", "e2tilde", "eichler", "dj-basis", "r-p",
            "f-alpha-delta")
