"""Truncated p-adic series for F_{alpha,delta} and the F* companions.

F_{alpha,delta} is assembled directly from R_p and the Hecke root pair as

    beta/(beta' - beta) * sum_{n>=2} (beta'^n - beta^n) R_p | U_{p^(n-1)},

so alpha and delta are never needed.  Term n has valuation at least
``v*n - (k-1)``, which drives the truncation depth.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .basis import WEIGHT_12, r_p
from .coeffring import HeckeRootPair, PadicScaled, PrecisionError, hensel_quadratic_roots, ordp
from .forms import delta, eisenstein_p, tau
from .qseries import QQ, PadicRing, QSeries, Ring, WindowError

DEFAULT_PRECISION = 24
# above this many R_p coefficients an assembly is refused as beyond desk scale
MAX_RP_TERMS = 200_000


def _ceil(x: Fraction) -> int:
    return math.ceil(Fraction(x))


@dataclass(frozen=True)
class TruncationPlan:
    p: int
    k: int
    v: int
    target: int            # congruence modulus exponent l
    scale_exp: int         # extra factor p^s multiplied in
    depth: int             # last summand n (minimal, from the tail bound)
    coeff_count: int       # coefficients N of the final product to certify
    rp_terms: int          # R_p precision bound needed: p^(depth-1) * N
    stated_depth: int      # depth from the condition v*r + s + 1 - k >= l
    l1_statement: Fraction
    l1_proof: Fraction
    weight_statement: int
    weight_proof: int

    @property
    def tail_valuation(self) -> int:
        """Lower bound on the valuation of every dropped summand."""
        return self.v * (self.depth + 1) + self.scale_exp - (self.k - 1)

    def rp_terms_for(self, depth: int) -> int:
        return self.p ** (depth - 1) * self.coeff_count

    def to_json(self) -> dict:
        out = asdict(self)
        out["l1_statement"] = str(self.l1_statement)
        out["l1_proof"] = str(self.l1_proof)
        return out


def k_p(p: int) -> int:
    """Weight of the Eisenstein series used to kill poles at the cusp 0."""
    return 4 if p == 3 else p - 1


def plan_truncation(p: int, k: int, target: int, scale_exp: int, coeff_count: int,
                    lam: Optional[int] = None) -> TruncationPlan:
    lam = tau(p) if lam is None else lam
    v = ordp(lam, p)
    if v == 0 or v == math.inf:
        raise ValueError(f"ord_{p}(lambda) = {v}: the prime must be non-ordinary")
    need = k - 1 + target - scale_exp
    stated_depth = max(2, _ceil(Fraction(need, v)))
    # dropped terms n >= r+1 have valuation >= v(r+1) + s - (k-1)
    depth = max(2, _ceil(Fraction(need, v)) - 1)
    l1_statement = max(Fraction(k - 1 + target, v), Fraction(target - 1))
    l1_proof = max(Fraction(k - 1 + target, v), Fraction(target - 2))
    kp = k_p(p)
    return TruncationPlan(
        p=p, k=k, v=v, target=target, scale_exp=scale_exp, depth=depth,
        coeff_count=coeff_count, rp_terms=p ** (depth - 1) * coeff_count,
        stated_depth=stated_depth, l1_statement=l1_statement, l1_proof=l1_proof,
        weight_statement=2 + kp * p ** (_ceil(l1_statement) + 1),
        weight_proof=2 + kp * p ** _ceil(l1_proof),
    )


def hecke_roots(p: int, precision: int = DEFAULT_PRECISION, k: int = 12) -> HeckeRootPair:
    return hensel_quadratic_roots(tau(p), p, k, precision)


def _coefficients(pair: HeckeRootPair, ring: Ring, depth: int, drop_beta_prime: bool):
    """The scalars beta/(beta'-beta) (beta'^n - beta^n) for n = 2..depth."""
    if isinstance(ring, PadicRing):
        b, bp = pair.beta, pair.beta_prime
    else:
        b, bp = pair.beta_rational(), pair.beta_prime_rational()
    lead = b / (bp - b)
    out = {}
    for n in range(2, depth + 1):
        out[n] = lead * (-(b**n) if drop_beta_prime else bp**n - b**n)
    return out


def _rp(p: int, prec: int, ring: Ring, rp: Optional[QSeries]) -> QSeries:
    if rp is not None:
        if rp.prec_bound < prec:
            raise WindowError(f"R_{p} known to {rp.prec_bound}, need {prec}")
        return rp
    if prec > MAX_RP_TERMS:
        raise WindowError(f"R_{p} to {prec} terms is beyond desk scale")
    return r_p(p, prec, ring)


def f_alpha_delta_truncated(p: int, plan: TruncationPlan, ring: Ring = PadicRing(3, DEFAULT_PRECISION), *,
                            depth: Optional[int] = None, rp: Optional[QSeries] = None,
                            pair: Optional[HeckeRootPair] = None,
                            drop_beta_prime: bool = False) -> QSeries:
    """p^s * beta/(beta'-beta) sum_{n=2}^{depth} (beta'^n - beta^n) R_p|U_{p^(n-1)}.

    Over the rationals beta is replaced by the integer representative of its
    p-adic approximation (``pair`` must then carry enough precision).
    """
    depth = plan.depth if depth is None else depth
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if pair is None:
        prec = ring.prec if isinstance(ring, PadicRing) else DEFAULT_PRECISION
        pair = hecke_roots(p, prec, plan.k)
    rp = _rp(p, plan.rp_terms_for(depth), ring, rp)
    total = None
    for n, c in _coefficients(pair, ring, depth, drop_beta_prime).items():
        term = rp.apply_u(p ** (n - 1)).scale(c)
        total = term if total is None else total + term
    total = total.scale(Fraction(p) ** plan.scale_exp)
    if isinstance(ring, PadicRing) and total.absprec < plan.target:
        raise PrecisionError(f"assembled series known mod {p}^{total.absprec}, "
                             f"need {p}^{plan.target}")
    return total


def theorem_series(p: int, plan: TruncationPlan, ring: Ring = PadicRing(3, DEFAULT_PRECISION),
                   **kw) -> QSeries:
    """p^s F_{alpha,delta} Delta on [0, N)."""
    f = f_alpha_delta_truncated(p, plan, ring, **kw)
    n = plan.coeff_count
    return f.mul(delta(n + 2, ring)).truncate(n)


def _star_sum(p: int, depth: int, prec: int, ring: PadicRing, start: int,
              rp: Optional[QSeries], pair: Optional[HeckeRootPair], k: int):
    pair = hecke_roots(p, ring.prec, k) if pair is None else pair
    bp = pair.beta_prime
    rp = _rp(p, p**depth * prec, ring, rp)
    total = None
    for l in range(start, depth + 1):
        # -beta^-1 p^(k-1) * beta^-l p^(l(k-1)) = -beta'^(l+1) when start == 0
        c = -(bp ** (l + 1 - start))
        term = rp.apply_u(p**l).scale(c).truncate(prec)
        total = term if total is None else total + term
    return total, pair


def f_alpha_star_truncated(p: int, depth: int, prec: int, ring: PadicRing = PadicRing(3, DEFAULT_PRECISION),
                           *, rp: Optional[QSeries] = None, pair: Optional[HeckeRootPair] = None,
                           k: int = 12) -> tuple[QSeries, int]:
    """Partial sum of F*_alpha = -sum_{l>=0} beta'^(l+1) R_p|U_{p^l} through ``depth``.

    Returns the series and the exponent up to which every coefficient is
    determined: ``min(absprec, tail valuation)``.
    """
    total, pair = _star_sum(p, depth, prec, ring, 0, rp, pair, k)
    tail = (depth + 2) * (k - 1 - pair.v) - (k - 1)
    return total, min(total.absprec, tail)


def f_alpha_delta_star_up_truncated(p: int, depth: int, prec: int,
                                    ring: PadicRing = PadicRing(3, DEFAULT_PRECISION), *,
                                    rp: Optional[QSeries] = None, pair: Optional[HeckeRootPair] = None,
                                    k: int = 12) -> tuple[QSeries, int]:
    """Partial sum of F*_{alpha,delta}|U_p = -sum_{l>=1} beta'^l R_p|U_{p^l}."""
    total, pair = _star_sum(p, depth, prec, ring, 1, rp, pair, k)
    tail = (depth + 1) * (k - 1 - pair.v) - (k - 1)
    return total, min(total.absprec, tail)


@dataclass
class PoleLedger:
    """Pole bookkeeping at the cusp 0, in units of the local parameter q^(1/p)."""

    p: int
    depth: int
    summand_poles: dict = field(default_factory=dict)  # n -> bound for R_p|U_{p^(n-1)}
    delta_zero: int = 0
    eisenstein_exponent: int = 0
    eisenstein_exponent_proof: int = 0

    @property
    def worst_pole(self) -> int:
        return max(self.summand_poles.values())

    @property
    def residual(self) -> int:
        """Remaining pole order after Delta and E_{k_p,p}^e; <= 0 means holomorphic."""
        return self.worst_pole - self.delta_zero - self.eisenstein_exponent

    @property
    def residual_proof(self) -> int:
        return self.worst_pole - self.delta_zero - self.eisenstein_exponent_proof

    def to_json(self) -> dict:
        return {"p": self.p, "depth": self.depth,
                "summand_poles": {str(n): b for n, b in self.summand_poles.items()},
                "delta_zero": self.delta_zero, "eisenstein_exponent": self.eisenstein_exponent,
                "eisenstein_exponent_proof": self.eisenstein_exponent_proof,
                "residual": self.residual, "residual_proof": self.residual_proof}


@dataclass
class HolomorphicApprox:
    weight: int
    weight_proof: int
    series: QSeries
    ledger: PoleLedger
    plan: TruncationPlan


def build_holomorphic_approx(p: int, target: int, precision: int = DEFAULT_PRECISION,
                             coeff_count: Optional[int] = None, *, rp: Optional[QSeries] = None,
                             k: int = 12) -> HolomorphicApprox:
    """F_{alpha,delta} Delta E_{k_p,p}^(p^(l1+1)) truncated at depth r_l, mod p^target.

    ``coeff_count`` defaults to what an 8721-term R_p supports at this depth.
    """
    from .verify import pole_order_bound

    ring = PadicRing(p, precision)
    probe = plan_truncation(p, k, target, 0, 1)
    depth = probe.stated_depth
    if coeff_count is None:
        coeff_count = max(1, 8721 // p ** (depth - 1))
    plan = plan_truncation(p, k, target, 0, coeff_count)
    l1 = _ceil(plan.l1_statement)
    exponent = p ** (l1 + 1)
    ledger = PoleLedger(p=p, depth=depth, delta_zero=p, eisenstein_exponent=exponent,
                        eisenstein_exponent_proof=p ** _ceil(plan.l1_proof))
    for n in range(2, depth + 1):
        ledger.summand_poles[n] = pole_order_bound(p, n - 1)
    f = f_alpha_delta_truncated(p, plan, ring, depth=depth, rp=rp)
    n = coeff_count
    e = eisenstein_p(k_p(p), p, n + 1, ring).power(exponent)
    series = f.mul(delta(n + 2, ring)).truncate(n).mul(e)
    if series.min_exp < 0 and any(series.data[:-series.min_exp]):
        raise AssertionError("negative exponents survive at i-infinity")
    return HolomorphicApprox(plan.weight_statement, plan.weight_proof, series, ledger, plan)
