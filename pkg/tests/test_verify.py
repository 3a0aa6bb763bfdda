import json

import pytest

from mockmod.coeffring import PrecisionError
from mockmod.forms import delta, eisenstein
from mockmod.qseries import PadicRing
from mockmod.verify import (CHECKS, CongruenceReport, check_congruence, exit_code, lemma_bound,
                            pole_order_bound, run_check, sturm_bound_gamma0, suite)

SCHEMA_KEYS = ["check", "p", "modPower", "window", "compared", "pass", "firstMismatch",
               "wallTimeMs", "precision", "details", "error"]


def test_sturm_bound():
    assert sturm_bound_gamma0(968, 3) == 323
    assert sturm_bound_gamma0(20, 3) == 7
    assert sturm_bound_gamma0(8, 3) == 3
    assert sturm_bound_gamma0(0, 5) == 0


def test_lemma_bound():
    assert lemma_bound(4, 3, 1) == 13
    assert lemma_bound(4, 3, 2) == 37
    assert lemma_bound(4, 3, 3) == 109
    # grows like p^(l+2)
    assert lemma_bound(4, 3, 4) > 3 * lemma_bound(4, 3, 3) - 3


def test_pole_order_bound():
    assert pole_order_bound(3, 3) == 243
    assert pole_order_bound(5, 1) == 125
    # Delta and E_(6,3)^3 each remove 3 from the pole of 3^5; residual in units of q^(1/3)
    residual = pole_order_bound(3, 3) - 3 - 3
    assert residual // 3 == 79


def test_report_schema_and_mismatch():
    e2 = eisenstein(2, 50)
    r = check_congruence(e2, e2.constant(1), 3, 2, (0, 50), "demo")
    assert not r.passed
    doc = r.to_json()
    assert list(doc) == SCHEMA_KEYS
    assert doc["firstMismatch"]["exp"] == 1
    assert doc["firstMismatch"]["ord"] == 1
    assert doc["firstMismatch"]["lhs"] == "-24"
    json.dumps(doc)


def test_exact_mismatch_without_prime():
    a = delta(10)
    r = check_congruence(a, a.scale(2), None, None, (1, 10))
    assert not r.passed and r.first_mismatch[0] == 1
    assert r.to_json()["firstMismatch"]["ord"] is None


def test_precision_is_never_silently_passed():
    low = delta(10, PadicRing(3, 2))
    with pytest.raises(PrecisionError):
        check_congruence(low, delta(10), 3, 3, (1, 10))


def test_report_invariant():
    with pytest.raises(ValueError):
        CongruenceReport("x", 3, 1, (0, 1), 1, True, (0, 1, 2, 0))


def test_exit_code_is_total():
    ok = CongruenceReport("a", 3, 1, (0, 1), 1, True)
    bad = CongruenceReport("b", 3, 1, (0, 1), 1, False, (0, 1, 0, 0))
    err = CongruenceReport.undecided("c", 3, PrecisionError("low"))
    assert exit_code([ok]) == 0
    assert exit_code([ok, bad]) == 1
    assert exit_code([ok, bad, err]) == 3
    assert exit_code([err]) == 3


def test_suite_sizes():
    assert len(suite(3)) >= 12
    assert {c for c, _ in suite(3)} == set(CHECKS)
    assert len(suite(5)) >= 2


def test_unknown_check():
    with pytest.raises(KeyError):
        run_check("no-such-check")


@pytest.mark.parametrize("check_id", ["rp-principal-part", "hecke-roots"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_prime_checks(check_id, p):
    r = run_check(check_id, p=p)
    assert r.passed, r.line()
    assert r.p == p


def test_determinism():
    a = run_check("e2cong").to_json()
    b = run_check("e2cong").to_json()
    a.pop("wallTimeMs"), b.pop("wallTimeMs")
    assert a == b


def test_theorem_beyond_sturm_bound():
    # twice the 323-coefficient bound
    r = run_check("thm-1-2-mod27", terms=646)
    assert r.passed and r.compared == 646


def test_theorem_low_precision():
    with pytest.raises(PrecisionError):
        run_check("thm-1-2-mod27", precision=2)
