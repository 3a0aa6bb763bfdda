from fractions import Fraction

import pytest

from mockmod.basis import (WEIGHT_12, BasisParams, cusp_dim, duke_jenkins, hecke_tp, r3_closed_form,
                           r_p)
from mockmod.forms import delta, eisenstein, tau
from mockmod.qseries import QQ, PadicRing, QSeries, congruent_mod


def test_cusp_dim():
    assert [cusp_dim(k) for k in (4, 12, 14, 24, 26, 36)] == [0, 1, 0, 2, 1, 3]


def test_params():
    assert BasisParams.for_weight(12) == WEIGHT_12
    with pytest.raises(ValueError):
        BasisParams(12, 1, 10)


def test_small_m_is_zero():
    assert duke_jenkins(1, 20).is_zero()


def test_f2_is_e14_over_delta_squared():
    n = 40
    ref = eisenstein(14, n + 4).mul(delta(n + 6).invert_unit().power(2)).truncate(n)
    assert duke_jenkins(2, n) == ref


def test_f3_principal_part():
    f3 = duke_jenkins(3, 10)
    assert f3.min_exp == -3
    assert f3.coeffs(-3, 0) == [1, 0, -252]


def test_f3_closed_form():
    n = 2000
    assert duke_jenkins(3, n).scale(Fraction(1, 3**11)) == r3_closed_form(n)


def test_uniqueness_cross_check():
    for p in (3, 5, 7):
        diff = r_p(p, 200).scale(p**11) - duke_jenkins(p, 200)
        assert diff.is_zero()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_rp_principal_part(p):
    rp = r_p(p, 5)
    expected = [0] * p
    expected[0] = Fraction(1, p**11)
    expected[-1] = Fraction(-tau(p), p**11)
    assert rp.coeffs(-p, 0) == expected


def test_u3_of_r3():
    u = r_p(3, 300).apply_u(3)
    assert u.min_exp == -1
    assert u.coeff(-1) == Fraction(1, 3**11)


def test_hecke_on_delta():
    n = 1000
    d = delta(3 * n + 1)
    assert hecke_tp(d, 12, 3).truncate(n) == d.truncate(n).scale(252)


def test_hecke_weight_minus_10_on_q_inverse():
    p = 3
    a = QSeries.from_ints(QQ, -1, [1, 0, 0, 0, 0, 0, 0])
    b = hecke_tp(a, -10, p)
    assert b.coeff(-p) == Fraction(1, p**11)
    # applying T(p) to f_p: the eigenvalue term contributes -p^(1-k) tau(p) at q^-1
    assert r_p(p, 3).coeff(-1) == -Fraction(tau(p), p**11)


def test_padic_basis_matches_rational():
    ring = PadicRing(3, 20)
    exact = r_p(3, 400)
    padic = r_p(3, 400, ring)
    assert padic.absprec == 20 - 11
    assert congruent_mod(exact, padic, 3, padic.absprec, -3, 400) == (True, None)
