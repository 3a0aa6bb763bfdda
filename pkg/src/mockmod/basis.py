"""Canonical weakly holomorphic basis f_{m,2-k}, the Hecke operator T(p), and R_p."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .forms import delta, eisenstein, j_invariant
from .qseries import QQ, QSeries, Ring, WindowError


def cusp_dim(k: int) -> int:
    """dim S_k for level one."""
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return max(k // 12 - 1, 0)
    return k // 12 if k >= 12 else 0


@dataclass(frozen=True)
class BasisParams:
    k: int = 12
    d: int = 1
    k_prime: int = 14

    def __post_init__(self):
        if (self.k_prime - (2 - self.k)) % 12:
            raise ValueError("k' must be congruent to 2-k mod 12")
        if self.k_prime - 12 * (self.d + 1) != 2 - self.k:
            raise ValueError("E_k' Delta^(-d-1) must have weight 2-k")

    @classmethod
    def for_weight(cls, k: int) -> "BasisParams":
        d = cusp_dim(k)
        k_prime = next(kp for kp in (0, 4, 6, 8, 10, 14) if (kp - (2 - k)) % 12 == 0)
        return cls(k, d, k_prime)


# Only k = 12 (d = 1, k' = 14) is exercised by the test suite.
WEIGHT_12 = BasisParams()


@lru_cache(maxsize=16)
def _basis_family(m_max: int, prec: int, ring: Ring, params: BasisParams) -> tuple[QSeries, ...]:
    """f_{d+1}, ..., f_{m_max} on [-m, prec), built by eliminating principal parts."""
    d = params.d
    top = m_max - d - 1
    # generous working precision; every product below shrinks the window by at most top+d+1
    work = prec + 2 * (m_max + 2)
    base = delta(work + d + 2, ring).invert_unit().power(d + 1)
    if params.k_prime:
        base = eisenstein(params.k_prime, work, ring).mul(base)
    j = j_invariant(work, ring)
    family: list[QSeries] = []
    g = base
    for t in range(top + 1):
        if t:
            g = g.mul(j)
        m = d + 1 + t
        if g.min_exp != -m:
            raise AssertionError("unexpected leading exponent")
        f = g
        for mp in range(m - 1, d, -1):
            c = f.coeff(-mp)
            if not _is_zero(c):
                f = f - family[mp - d - 1].scale(c)
        if f.prec_bound < prec:
            raise WindowError("working precision too small to pin the recursion")
        family.append(f.truncate(prec))
    return tuple(family)


def _is_zero(c) -> bool:
    return c == 0 if isinstance(c, Fraction) else c.is_zero()


def duke_jenkins(m: int, prec: int, ring: Ring = QQ, params: BasisParams = WEIGHT_12) -> QSeries:
    """The basis form f_{m,2-k} = q^-m + O(q^-d) on [-m, prec) (zero if m <= d)."""
    if m < 1:
        raise ValueError("m must be positive")
    if m <= params.d:
        return QSeries.zero(ring, 0, max(prec, 1))
    if prec <= -params.d:
        raise WindowError("prec must reach the free tail at q^-d")
    return _basis_family(m, prec, ring, params)[m - params.d - 1]


def hecke_tp(a: QSeries, kappa: int, p: int) -> QSeries:
    """Weight-kappa Hecke operator: b(n) = a(pn) + p^(kappa-1) a(n/p)."""
    return a.apply_u(p) + a.apply_v(p).scale(Fraction(p) ** (kappa - 1))


def r_p(p: int, prec: int, ring: Ring = QQ, params: BasisParams = WEIGHT_12) -> QSeries:
    """R_p = p^(1-k) f_{p,2-k}, with principal part p^(1-k) (q^-p - tau(p) q^-1)."""
    if p < 3:
        raise ValueError("R_p needs p >= 3")
    return duke_jenkins(p, prec, ring, params).scale(Fraction(1, p ** (params.k - 1)))


def r3_closed_form(prec: int, ring: Ring = QQ) -> QSeries:
    """3^-11 E_14 Delta^-2 (j - 768)."""
    work = prec + 8
    base = eisenstein(14, work, ring).mul(delta(work + 3, ring).invert_unit().power(2))
    j = j_invariant(work, ring)
    return base.mul(j - 768).truncate(prec).scale(Fraction(1, 3**11))
