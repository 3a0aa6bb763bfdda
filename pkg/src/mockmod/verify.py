"""Sturm bounds, pole accounting, congruence reports, and the named checks."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .basis import duke_jenkins, hecke_tp, r3_closed_form, r_p
from .coeffring import PadicScaled, PrecisionError, encode_rational, hensel_quadratic_roots
from .forms import (delta, e2tilde, eichler_integral, eisenstein, eisenstein_p, j_invariant, tau)
from .padlimit import (DEFAULT_PRECISION, build_holomorphic_approx, f_alpha_delta_truncated,
                       plan_truncation, theorem_series)
from .qseries import QQ, PadicRing, QSeries, WindowError, congruent_mod


def sturm_bound_gamma0(weight: int, p: int) -> int:
    """ceil(weight * [SL2(Z):Gamma_0(p)] / 12) with index p + 1."""
    if weight < 0:
        raise ValueError("weight must be nonnegative")
    return math.ceil(Fraction(weight * (p + 1), 12))


def lemma_bound(k: int, p: int, l: int) -> int:
    """ceil((p+1)/6 + k (p^(l+2) + p^(l+1)) / 12)."""
    if l < 1:
        raise ValueError("l must be at least 1")
    return math.ceil(Fraction(p + 1, 6) + Fraction(k * (p ** (l + 2) + p ** (l + 1)), 12))


def pole_order_bound(p: int, l: int) -> int:
    """Pole order of R_p|U_{p^l} at the cusp 0, in units of q^(1/p)."""
    if l < 1:
        raise ValueError("l must be at least 1")
    return p ** (l + 2)


def _fmt(x) -> str:
    if isinstance(x, PadicScaled):
        return str(x)
    return encode_rational(Fraction(x))


@dataclass
class CongruenceReport:
    check: str
    p: Optional[int]
    mod_power: Optional[int]          # None means exact equality
    window: tuple[int, int]
    compared: int
    passed: bool
    first_mismatch: Optional[tuple] = None   # (exponent, lhs, rhs, ord of difference)
    wall_time_ms: float = 0.0
    precision: Optional[int] = None
    details: list = field(default_factory=list)
    error: Optional[str] = None       # precision or window failure; the check could not decide

    def __post_init__(self):
        if self.passed != (self.first_mismatch is None and self.error is None):
            raise ValueError("pass must hold exactly when there is no mismatch and no error")

    @classmethod
    def undecided(cls, check: str, p, exc: Exception, wall_time_ms: float = 0.0,
                  precision: Optional[int] = None) -> "CongruenceReport":
        return cls(check, p, None, (0, 0), 0, False, None, wall_time_ms, precision,
                   error=f"{type(exc).__name__}: {exc}")

    def to_json(self) -> dict:
        mm = None
        if self.first_mismatch is not None:
            exp, lhs, rhs, o = self.first_mismatch
            mm = {"exp": exp, "ord": None if o == math.inf else o, "lhs": _fmt(lhs), "rhs": _fmt(rhs)}
        return {
            "check": self.check,
            "p": self.p,
            "modPower": self.mod_power,
            "window": list(self.window),
            "compared": self.compared,
            "pass": self.passed,
            "firstMismatch": mm,
            "wallTimeMs": round(self.wall_time_ms, 3),
            "precision": self.precision,
            "details": self.details,
            "error": self.error,
        }

    def line(self) -> str:
        if self.error is not None:
            return f"ERROR {self.check}: {self.error}"
        status = "PASS" if self.passed else "FAIL"
        mod = "exact" if self.mod_power is None else f"mod {self.p}^{self.mod_power}"
        lo, hi = self.window
        return f"{status} {self.check}: {mod} on [{lo},{hi}) ({self.compared} coefficients)"


def check_congruence(lhs: QSeries, rhs: QSeries, p: Optional[int], m: Optional[int],
                     window: tuple[int, int], check: str = "adhoc",
                     precision: Optional[int] = None) -> CongruenceReport:
    start = time.perf_counter()
    lo, hi = window
    ok, mismatch = congruent_mod(lhs, rhs, p, m, lo, hi)
    return CongruenceReport(check, p, m, (lo, hi), hi - lo, ok, mismatch,
                            (time.perf_counter() - start) * 1000, precision)


def _combine(check: str, parts: list[CongruenceReport], p, m, window, precision=None,
             started: float = 0.0) -> CongruenceReport:
    """Merge sub-checks into one report; the first failing part supplies the mismatch.

    ``m`` is the weakest modulus among the parts; each part's own modulus is
    kept in ``details``.
    """
    failing = next((r for r in parts if not r.passed), None)
    lo, hi = window
    return CongruenceReport(
        check, p, m, (lo, hi), hi - lo, failing is None,
        None if failing is None else failing.first_mismatch,
        (time.perf_counter() - started) * 1000, precision,
        details=[r.line() for r in parts])


# -- series used by several checks ----------------------------------------------

def _ring(precision: int) -> PadicRing:
    return PadicRing(3, precision)


def weight20_rhs(n: int, ring=QQ) -> QSeries:
    """E~_{2,3}^10 + 3 E_10^2|V_3 + 9 Delta E~_{2,3}^4 on [0, n)."""
    et = e2tilde(3, n, ring)
    e10sq = eisenstein(10, n, ring).power(2).apply_v(3).truncate(n)
    return et.power(10) + e10sq.scale(3) + delta(n, ring).mul(et.power(4)).scale(9)


def theorem_lhs(terms: int = 323, precision: int = DEFAULT_PRECISION, depth: int = 4,
                ring=None, target: int = 3) -> QSeries:
    """3^7 F_{alpha,delta} Delta on [0, terms), summed through ``depth``."""
    ring = _ring(precision) if ring is None else ring
    plan = plan_truncation(3, 12, target, 7, terms)
    pair = hensel_quadratic_roots(252, 3, 12, precision if isinstance(ring, PadicRing) else DEFAULT_PRECISION)
    return theorem_series(3, plan, ring, depth=depth, pair=pair)


def weaktoshow_lhs(terms: int = 323, precision: int = DEFAULT_PRECISION) -> QSeries:
    """-3^-4 Delta E_{6,3}^3 beta/(beta'-beta) sum_{n=2}^{4} beta^n 3^11 R_3|U_{3^(n-1)}."""
    ring = _ring(precision)
    pair = hensel_quadratic_roots(252, 3, 12, precision)
    b, bp = pair.beta, pair.beta_prime
    f3 = r_p(3, 27 * terms, ring).scale(3**11)
    total = None
    for n in range(2, 5):
        term = f3.apply_u(3 ** (n - 1)).scale(b**n)
        total = term if total is None else total + term
    total = total.scale(b / (bp - b)).scale(Fraction(-1, 3**4))
    e63 = eisenstein_p(6, 3, terms + 1, ring).power(3)
    return total.mul(delta(terms + 2, ring)).mul(e63).truncate(terms)


# -- named checks ---------------------------------------------------------------

def _thm(m: int):
    def run(terms: int = 323, precision: int = DEFAULT_PRECISION, **_) -> CongruenceReport:
        start = time.perf_counter()
        lhs = theorem_lhs(terms, precision)
        e2 = eisenstein(2, terms)
        rhs = {1: e2.constant(1), 2: e2, 3: e2 + delta(terms).scale(9)}[m]
        r = check_congruence(lhs, rhs, 3, m, (0, terms), f"thm-1-2-mod{3**m}", precision)
        r.wall_time_ms = (time.perf_counter() - start) * 1000
        return r
    return run


def check_thm_weight968(terms: int = 323, precision: int = DEFAULT_PRECISION, **_) -> CongruenceReport:
    """Both sides times E_(4,3)^237: the weight 968 congruence on its full Sturm window."""
    start = time.perf_counter()
    ring = _ring(precision)
    lhs = theorem_lhs(terms, precision)
    rhs = (eisenstein(2, terms) + delta(terms).scale(9)).reduce_mod(3, precision)
    e = eisenstein_p(4, 3, terms, ring).power(237)
    r = check_congruence(lhs.mul(e), rhs.mul(e), 3, 3, (0, terms), "thm-1-2-weight968", precision)
    r.details.append(f"Sturm bound at weight 968: {sturm_bound_gamma0(968, 3)}")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_rp_principal_part(p: int = 3, **_) -> CongruenceReport:
    start = time.perf_counter()
    rp = r_p(p, 1)
    c = Fraction(1, p**11)
    expected = [Fraction(0)] * (p + 1)
    expected[0] = c
    expected[p - 1] = -c * tau(p)
    exp = QSeries.from_rationals(QQ, -p, expected)
    r = check_congruence(rp, exp.truncate(0), p, None, (-p, 0), "rp-principal-part")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_rp_closed_form(terms: int = 2000, **_) -> CongruenceReport:
    start = time.perf_counter()
    f3 = duke_jenkins(3, terms)
    closed = r3_closed_form(terms).scale(3**11)
    r = check_congruence(f3, closed, 3, None, (-3, terms), "rp-closed-form")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_e2cong(terms: int = 323, **_) -> CongruenceReport:
    start = time.perf_counter()
    et = e2tilde(3, terms)
    rhs = et.power(10) + eisenstein(10, terms).power(2).apply_v(3).truncate(terms).scale(3)
    r = check_congruence(eisenstein(2, terms), rhs, 3, 3, (0, terms), "e2cong")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_deltacong(terms: int = 323, **_) -> CongruenceReport:
    start = time.perf_counter()
    d9 = delta(terms).scale(9)
    r = check_congruence(d9, d9.mul(e2tilde(3, terms).power(4)), 3, 3, (0, terms), "deltacong")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_e23cong(terms: int = 500, **_) -> CongruenceReport:
    start = time.perf_counter()
    e9 = e2tilde(3, terms).power(9)
    r = check_congruence(e9, e9.constant(1), 3, 3, (0, terms), "e23cong")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_e63cong(terms: int = 200, **_) -> CongruenceReport:
    start = time.perf_counter()
    e63, e6 = eisenstein_p(6, 3, terms), eisenstein(6, terms)
    one = e6.constant(1)
    parts = []
    for r in (0, 1, 2):
        for j in (1, 2):
            e = 3**r * j
            a, b = e63.power(e), e6.power(e)
            parts.append(check_congruence(a, b, 3, r + 2, (0, terms), f"E63^{e}=E6^{e} mod 3^{r + 2}"))
            parts.append(check_congruence(b, one, 3, r + 2, (0, terms), f"E6^{e}=1 mod 3^{r + 2}"))
    return _combine("e63cong", parts, 3, 2, (0, terms), started=start)


def check_e4sq_e2(terms: int = 100, **_) -> CongruenceReport:
    start = time.perf_counter()
    e4sq = eisenstein(4, terms).power(2)
    rhs = e2tilde(3, terms).mul(eisenstein(6, terms)).scale(4)
    sturm = sturm_bound_gamma0(8, 3)
    parts = [
        check_congruence(e4sq, rhs, 3, 2, (0, sturm), f"E4^2=4E~E6 mod 9 (Sturm {sturm})"),
        check_congruence(e4sq, rhs, 3, 2, (0, terms), "E4^2=4E~E6 mod 9 (extended)"),
        check_congruence(e4sq, eisenstein(2, terms), 3, 2, (0, terms), "E4^2=E2 mod 9"),
    ]
    report = _combine("e4sq-e2", parts, 3, 2, (0, terms), started=start)
    report.details.insert(0, f"sturm coefficients: {sturm}")
    return report


def check_weaktoshow(terms: int = 323, precision: int = DEFAULT_PRECISION, **_) -> CongruenceReport:
    start = time.perf_counter()
    lhs = weaktoshow_lhs(terms, precision)
    r = check_congruence(lhs, weight20_rhs(terms), 3, 3, (0, terms), "weaktoshow", precision)
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    poles = pole_order_bound(3, 3) - 3 - 3
    r.details.append(f"pole at 0 after Delta and E_(6,3)^3: q^(-{poles}/3) = q^(-{poles // 3})")
    r.details.append(f"Sturm bound at weight {20 + 4 * poles}: {sturm_bound_gamma0(20 + 4 * poles, 3)}")
    return r


def check_jacobi(terms: int = 2000, **_) -> CongruenceReport:
    start = time.perf_counter()
    lhs = eisenstein(4, terms).power(3) - eisenstein(6, terms).power(2)
    r = check_congruence(lhs, delta(terms).scale(1728), None, None, (0, terms), "jacobi")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_j_delta(terms: int = 2000, **_) -> CongruenceReport:
    start = time.perf_counter()
    lhs = j_invariant(terms).mul(delta(terms + 1))
    r = check_congruence(lhs, eisenstein(4, terms).power(3), None, None, (0, terms), "j-delta")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_serre(terms: int = 200, **_) -> CongruenceReport:
    start = time.perf_counter()
    e6, e4 = eisenstein(6, terms), eisenstein(4, terms)
    parts = [check_congruence(e6, e6.constant(1), 3, 2, (0, terms), "E6=1 mod 3^2"),
             check_congruence(e4, e4.constant(1), 5, 1, (0, terms), "E4=1 mod 5")]
    return _combine("serre", parts, 3, 2, (0, terms), started=start)


def check_bol(terms: int = 500, **_) -> CongruenceReport:
    start = time.perf_counter()
    d = delta(terms)
    r = check_congruence(eichler_integral(d, -10).apply_d(11), d, None, None, (1, terms), "bol")
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_hecke_eigen(terms: int = 1000, **_) -> CongruenceReport:
    start = time.perf_counter()
    parts = []
    for p in (2, 3, 5):
        d = delta(p * terms + 1)
        parts.append(check_congruence(hecke_tp(d, 12, p), d.truncate(terms).scale(tau(p)), p, None,
                                      (1, terms), f"Delta|T({p}) = {tau(p)} Delta"))
    return _combine("hecke-eigen", parts, None, None, (1, terms), started=start)


def check_ekp_lemma(terms: int = 200, **_) -> CongruenceReport:
    start = time.perf_counter()
    parts = []
    for k, p in ((4, 3), (6, 3)):
        ekp, ek = eisenstein_p(k, p, terms), eisenstein(k, terms)
        for m in (0, 1, 2):
            for d in (1, 2):
                r = p**m * d
                parts.append(check_congruence(ekp.power(r), ek.power(r), p, k + m, (0, terms),
                                              f"E_({k},{p})^{r} = E_{k}^{r} mod {p}^{k + m}"))
    return _combine("ekp-lemma", parts, 3, 4, (0, terms), started=start)


def check_hecke_roots(p: int = 3, precision: int = 20, **_) -> CongruenceReport:
    """beta + beta' = tau(p) and beta beta' = p^11, checked by p-adic arithmetic."""
    start = time.perf_counter()
    lam = tau(p)
    pair = hensel_quadratic_roots(lam, p, 12, precision)
    b, bp = pair.beta, pair.beta_prime
    mismatch = None
    for name, value, want in (("sum", b + bp, lam), ("product", b * bp, p**11)):
        if not value.congruent(want, precision):
            mismatch = (name, value, want, (value - want).valuation)
            break
    details = [f"v={pair.v}", f"ord(beta)={b.valuation}", f"ord(beta')={bp.valuation}",
               f"beta={b}", f"beta'={bp}"]
    return CongruenceReport("hecke-roots", p, precision, (0, 0), 0, mismatch is None, mismatch,
                            (time.perf_counter() - start) * 1000, precision, details)


def check_truncation_soundness(terms: int = 323, precision: int = DEFAULT_PRECISION, **_):
    start = time.perf_counter()
    d3 = theorem_lhs(terms, precision, depth=3)
    d4 = theorem_lhs(terms, precision, depth=4)
    r = check_congruence(d3, d4, 3, 3, (0, terms), "truncation-soundness", precision)
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_ring_oracle(terms: int = 200, precision: int = DEFAULT_PRECISION, **_):
    start = time.perf_counter()
    padic = theorem_lhs(terms, precision)
    exact = theorem_lhs(terms, ring=QQ)
    r = check_congruence(exact.reduce_mod(3, precision), padic, 3, 3, (0, terms), "ring-oracle", precision)
    r.wall_time_ms = (time.perf_counter() - start) * 1000
    return r


def check_holomorphic_approx(precision: int = DEFAULT_PRECISION, **_):
    start = time.perf_counter()
    parts, details = [], []
    for l in (1, 2):
        approx = build_holomorphic_approx(3, l, precision)
        n = approx.plan.coeff_count
        reference = theorem_lhs(n, precision)
        scaled = approx.series.scale(3**7)
        parts.append(check_congruence(scaled, reference, 3, l, (0, n), f"3^7 g_{l} = thm series mod 3^{l}"))
        ledger = approx.ledger
        details.append(f"l={l}: depth {ledger.depth}, weight {approx.weight}, "
                       f"min_exp {approx.series.min_exp}, pole residual {ledger.residual} "
                       f"(exponent p^l1 would leave {ledger.residual_proof})")
        if approx.series.min_exp < 0 or ledger.residual > 0:
            parts.append(CongruenceReport(f"ledger l={l}", 3, l, (0, 0), 0, False,
                                          (approx.series.min_exp, ledger.residual, 0, 0)))
    report = _combine("holomorphic-approx", parts, 3, 1, (0, min(r.window[1] for r in parts)),
                      precision, started=start)
    report.details = details + report.details
    return report


CHECKS: dict[str, Callable[..., CongruenceReport]] = {
    "thm-1-2-mod3": _thm(1),
    "thm-1-2-mod9": _thm(2),
    "thm-1-2-mod27": _thm(3),
    "thm-1-2-weight968": check_thm_weight968,
    "rp-principal-part": check_rp_principal_part,
    "rp-closed-form": check_rp_closed_form,
    "e2cong": check_e2cong,
    "deltacong": check_deltacong,
    "e23cong": check_e23cong,
    "e63cong": check_e63cong,
    "e4sq-e2": check_e4sq_e2,
    "weaktoshow": check_weaktoshow,
    "jacobi": check_jacobi,
    "serre": check_serre,
    "bol": check_bol,
    "j-delta": check_j_delta,
    "hecke-eigen": check_hecke_eigen,
    "ekp-lemma": check_ekp_lemma,
    "hecke-roots": check_hecke_roots,
    "truncation-soundness": check_truncation_soundness,
    "ring-oracle": check_ring_oracle,
    "holomorphic-approx": check_holomorphic_approx,
}

# checks that take a prime and make sense for the other non-ordinary primes
PRIME_CHECKS = ("rp-principal-part", "hecke-roots")
GENERIC_CHECKS = ("jacobi", "j-delta", "serre", "bol", "hecke-eigen", "ekp-lemma")


def run_check(check_id: str, **options) -> CongruenceReport:
    try:
        fn = CHECKS[check_id]
    except KeyError:
        raise KeyError(f"unknown check {check_id!r}") from None
    options = {k: v for k, v in options.items() if v is not None}
    return fn(**options)


def exit_code(reports) -> int:
    """0 if everything passed, 3 if any check was undecided, else 1."""
    reports = list(reports)
    if any(r.error is not None for r in reports):
        return 3
    return 0 if all(r.passed for r in reports) else 1


def suite(p: int) -> list[tuple[str, dict]]:
    """(check id, options) pairs making up the report for prime ``p``."""
    if p == 3:
        return [(c, {}) for c in CHECKS]
    return [(c, {"p": p}) for c in PRIME_CHECKS] + [(c, {}) for c in GENERIC_CHECKS]
