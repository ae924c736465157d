import pytest

from peaklab.polynomial import DensePolynomial
from peaklab.verify import CHECKS, SUITES, certify_real_rooted, run_checks


def test_suites_cover_registry():
    assert set(SUITES["all"]) == set(CHECKS)
    for members in SUITES.values():
        assert set(members) <= set(CHECKS)
    assert len(SUITES["all"]) == len(set(SUITES["all"]))


def test_run_checks_rejects_unknown_name():
    with pytest.raises(KeyError):
        list(run_checks(("no-such-check",)))


def test_run_checks_is_lazy_and_ordered(capsys):
    names = ("variance-consistency", "correction-consistency")
    results = list(run_checks(names))
    assert [r.name for r in results] == list(names)
    assert all(r.passed for r in results)


def test_certify_real_rooted():
    assert certify_real_rooted(DensePolynomial([-2, 0, 1]))  # x^2 - 2
    assert certify_real_rooted(DensePolynomial([6, 11, 6, 1]))  # (x+1)(x+2)(x+3)
    assert certify_real_rooted(DensePolynomial([0, 1]))
    assert certify_real_rooted(DensePolynomial([5]))
    assert not certify_real_rooted(DensePolynomial([1, 0, 1]))  # x^2 + 1
    assert not certify_real_rooted(DensePolynomial([1, 1, 1, 1]))  # (x+1)(x^2+1)
    # one-sided: a repeated root defeats strict interlacing, so the
    # certificate is withheld even though the roots are real
    assert not certify_real_rooted(DensePolynomial([1, -2, 1]))
