import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mockmod.coeffring import (PadicScaled, PrecisionError, UnsupportedValuationError,
                               decode_rational, encode_rational, hensel_quadratic_roots, ordp)

P = 3

nonzero_ints = st.integers(min_value=-10**12, max_value=10**12).filter(bool)
rationals = st.builds(Fraction, nonzero_ints, st.integers(min_value=1, max_value=10**9))


def test_ordp_examples():
    assert ordp(252, 3) == 2
    assert ordp(1, 3) == 0
    assert ordp(Fraction(1, 2187), 3) == -7
    assert ordp(0, 3) == math.inf


def test_from_rational_examples():
    x = PadicScaled.from_rational(Fraction(1, 2), 3, 3)
    assert (x.shift, x.mantissa) == (0, 14)
    assert (2 * 14) % 27 == 1
    nine = PadicScaled.from_rational(9, 3, 2)
    assert (nine.shift, nine.mantissa) == (2, 1)
    third = PadicScaled.from_rational(Fraction(1, 3), 3, 4)
    assert (third.shift, third.mantissa) == (-1, 1)


def test_arith_examples():
    a = PadicScaled(3, 2, 1, 7)          # 3^2 known mod 3^9
    b = PadicScaled.from_rational(3**9 * 5, 3, 10)
    s = a + b
    assert (s.shift, s.mantissa, s.absprec) == (2, 1, 9)
    prod = PadicScaled(3, 2, 2, 5) * PadicScaled(3, 7, 4, 5)
    assert prod.shift == 9
    q = PadicScaled.from_rational(252, 3, 10) / 9
    assert q.shift == 0 and q.mantissa == 28 % 3**q.prec


def test_p2_rejected():
    with pytest.raises(ValueError):
        PadicScaled.from_rational(1, 2, 5)
    with pytest.raises(ValueError):
        hensel_quadratic_roots(-24, 2, 12, 10)


def test_zero_and_precision():
    z = PadicScaled.zero(3, 5)
    assert z.is_zero() and z.absprec == 5 and z.valuation == 5
    x = PadicScaled.from_rational(10, 3, 4)
    assert (x - x).absprec == 4
    with pytest.raises(PrecisionError):
        x.residue(5)
    with pytest.raises(PrecisionError):
        z.inverse()


def test_encoding_round_trip():
    x = PadicScaled.from_rational(Fraction(7, 9), 3, 6)
    assert x.encode() == f"-2:{x.mantissa}:6"
    assert PadicScaled.decode(x.encode(), 3) == x
    assert encode_rational(Fraction(-3, 256)) == "-3/256"
    assert encode_rational(Fraction(4)) == "4"
    assert decode_rational("-3/256") == Fraction(-3, 256)


@given(rationals, rationals)
def test_ordp_valuation_laws(x, y):
    assert ordp(x * y, P) == ordp(x, P) + ordp(y, P)
    if x + y != 0:
        assert ordp(x + y, P) >= min(ordp(x, P), ordp(y, P))
        if ordp(x, P) != ordp(y, P):
            assert ordp(x + y, P) == min(ordp(x, P), ordp(y, P))


def _rat_mod(x: Fraction, m: int) -> int:
    """x mod 3^m for a 3-integral rational, computed without PadicScaled."""
    return x.numerator * pow(x.denominator, -1, 3**m) % 3**m


@given(rationals, st.integers(min_value=1, max_value=12))
def test_from_rational_round_trip(x, m):
    a = PadicScaled.from_rational(x, P, m)
    assert a.shift == ordp(x, P)
    assert a.absprec == a.shift + m
    # rescale to a unit and compare residues
    unit = x / Fraction(P) ** a.shift
    assert a.mantissa == _rat_mod(unit, m)


@settings(max_examples=200)
@given(rationals, rationals, st.integers(min_value=2, max_value=10), st.integers(min_value=2, max_value=10))
def test_arithmetic_matches_rationals(x, y, mx, my):
    """Every result agrees with exact rational arithmetic to its claimed precision."""
    a, b = PadicScaled.from_rational(x, P, mx), PadicScaled.from_rational(y, P, my)
    for got, want in ((a + b, x + y), (a - b, x - y), (a * b, x * y), (a / b, x / y)):
        diff = want - got.to_rational()
        assert diff == 0 or ordp(diff, P) >= got.absprec


@pytest.mark.parametrize("lam,p,v", [(252, 3, 2), (4830, 5, 1), (-16744, 7, 1)])
def test_hensel_examples(lam, p, v):
    pair = hensel_quadratic_roots(lam, p, 12, 20)
    assert pair.v == v
    assert pair.beta.valuation == v
    assert pair.beta_prime.valuation == 11 - v
    # independent check with plain integers: b is a root of x^2 - lam x + p^11
    b = int(pair.beta_rational())
    f = b * b - lam * b + p**11
    assert ordp(f, p) >= pair.beta.absprec
    # beta = lam - beta' and ord(beta') = 11 - v
    assert pair.beta.congruent(lam, 11 - v)


def test_hensel_252_mod_3_9():
    pair = hensel_quadratic_roots(252, 3, 12, 20)
    assert pair.beta.residue(9) == 252
    assert (pair.beta + pair.beta_prime).congruent(252, 20)
    assert (pair.beta * pair.beta_prime).congruent(3**11, 20)


def test_hensel_rejects_bad_valuation():
    with pytest.raises(UnsupportedValuationError):
        hensel_quadratic_roots(-24, 5, 12, 10)      # ordinary at 5
    with pytest.raises(UnsupportedValuationError):
        hensel_quadratic_roots(3**6, 3, 12, 10)     # 2v >= k - 1


def test_factorizations():
    assert 4830 == 2 * 3 * 5 * 7 * 23
    assert 16744 == 2**3 * 7 * 13 * 23
