import json
from fractions import Fraction

import pytest

from torsionlab.presentation import Family
from torsionlab.verify import (
    check_lemma_kappa,
    check_newton_traces,
    check_partial_fractions,
    check_power_sums,
    check_residue_lemma,
    check_small_p_table,
    check_vanishing,
    partial_fraction_coefficients,
    partial_fraction_ell,
    exact_torsion_power_sum,
    is_hyperbolic,
    run_parallel,
    summary_table,
)

P, Q, F52 = Family.FIGURE_EIGHT_P, Family.FIGURE_EIGHT_Q, Family.FIVE_TWO_Q


# exact power sums (frozen from the exact path, checked against numerics below) -----------


@pytest.mark.parametrize(
    "family,n,k,value",
    [
        (P, 6, -1, Fraction(0)),
        (P, 6, 1, Fraction(-24)),
        (P, 6, 2, Fraction(288)),
        (P, 6, 3, Fraction(-624)),
        (P, -6, 2, Fraction(288)),
        (P, 5, 1, Fraction(1)),
        (P, 5, 2, Fraction(65)),
        (P, 5, 3, Fraction(97)),
        (P, 4, -1, Fraction(4)),
        (P, 4, 2, Fraction(45, 2)),
        (P, 4, 3, Fraction(425, 4)),
        (P, 8, 2, Fraction(1913, 2)),
        (P, 8, 3, Fraction(80173, 4)),
        (P, -10, 1, Fraction(-136)),
        (Q, 2, 2, Fraction(7338)),
        (Q, -3, 2, Fraction(86046)),
        (F52, 3, 2, Fraction(1624618)),
    ],
)
def test_exact_power_sums(family, n, k, value):
    assert exact_torsion_power_sum(family, n, k) == value


def test_vanishing_is_the_minus_one_power_sum():
    assert exact_torsion_power_sum(P, 7, -1) == 0
    assert exact_torsion_power_sum(Q, 3, -1) == 0


@pytest.mark.parametrize("family,n,k", [(P, 6, 2), (P, 8, 3), (P, 4, 3), (Q, 2, 2), (F52, -3, 1)])
def test_power_sum_reports_pass(family, n, k):
    rep = check_power_sums(family, n, k)
    assert rep.passed
    assert rep.method == "numeric+exact"
    assert rep.details["exact_gap"] < 1e-9 * max(1, abs(float(rep.details["S_n_exact"])))


def test_eightfold_integers():
    assert check_power_sums(P, 8, 2).details["eightfold_nearest_integer"] == 30608
    assert check_power_sums(P, 12, 3).details["eightfold_nearest_integer"] == 273592608


def test_power_sum_exponent_range():
    with pytest.raises(ValueError):
        check_power_sums(P, 6, 9)


# vanishing --------------------------------------------------------------------------


@pytest.mark.parametrize("family,n", [(P, 5), (P, -8), (Q, 2), (Q, -2), (F52, 3)])
def test_vanishing_reports(family, n):
    rep = check_vanishing(family, n)
    assert rep.passed
    assert rep.computed["exact"] == 0
    assert abs(rep.computed["numeric"]) < 1e-8


def test_non_hyperbolic_parameter_does_not_pass():
    rep = check_vanishing(P, 3, exact=False)
    assert not rep.passed
    assert not rep.details["hyperbolic"]


def test_hyperbolicity_ranges():
    assert is_hyperbolic(P, 5) and not is_hyperbolic(P, 4)
    assert is_hyperbolic(Q, -2) and not is_hyperbolic(Q, 1)
    assert is_hyperbolic(F52, 3)


# table, kappa, residue lemma ---------------------------------------------------------


@pytest.mark.parametrize("p", range(-4, 5))
def test_small_p_table(p):
    assert check_small_p_table(p).passed


def test_small_p_table_range():
    with pytest.raises(ValueError):
        check_small_p_table(5)


@pytest.mark.parametrize("family,n", [(P, 4), (P, -9), (P, 10), (Q, 5), (F52, -4)])
def test_lemma_kappa(family, n):
    assert check_lemma_kappa(family, n).passed


def test_residue_lemma_with_controls():
    rep = check_residue_lemma(trials=30, seed=3, negative_controls=6)
    assert rep.passed


def test_newton_traces():
    assert check_newton_traces(Q, 2).passed


# partial fractions ---------------------------------------------------------------------


def test_partial_fraction_coefficients():
    assert partial_fraction_coefficients(3) == (6 + 6 - 18 - 27, -6 + 18 + 18, -12, 3)
    assert partial_fraction_coefficients(3, printed=True)[3] == -3
    assert partial_fraction_coefficients(4)[3] == 0


def test_partial_fraction_sign_of_last_coefficient():
    assert partial_fraction_ell(3).is_integral()
    assert not partial_fraction_ell(3, printed=True).is_integral()


@pytest.mark.parametrize("m", [3, -5])
def test_partial_fractions_odd_m_hold(m):
    assert check_partial_fractions(m).passed


def test_partial_fractions_even_m_fail_only_at_plus_minus_i():
    rep = check_partial_fractions(4)
    assert rep.computed["worst_relative_gap"] < 1e-8
    assert rep.computed["ell_integral"]
    assert rep.computed["gap_at_pm_i"] > 1
    assert not rep.passed


# reporting -------------------------------------------------------------------------------


def test_report_serialises_and_summarises():
    rep = check_small_p_table(0)
    doc = json.loads(rep.dumps())
    assert doc["passed"] is True and doc["expected"] == 2
    table = summary_table([rep, check_vanishing(P, 3, exact=False)])
    assert table.splitlines()[0].startswith("PASS small-|p| table")
    assert table.splitlines()[-1] == "1/2 checks passed"


def test_run_parallel_keeps_order(monkeypatch):
    monkeypatch.setenv("TORSIONLAB_THREADS", "2")
    reps = run_parallel(check_small_p_table, [(p,) for p in (3, -2, 4)])
    assert [r.parameters for r in reps] == ["p=3", "p=-2", "p=4"]
