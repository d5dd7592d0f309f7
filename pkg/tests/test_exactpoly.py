from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionlab.errors import NotCoprime, NotDivisible
from torsionlab.exactpoly import (
    ExactPolynomial,
    RationalFunctionSum,
    companion_power_trace,
    derivative,
    divide_exact,
    invert_mod,
    is_square_free,
    poly_gcd,
    power_sums,
    reduce_mod,
    reverse,
    square_free_decomposition,
    sum_over_roots,
    sum_rational_over_roots_exact,
)
from torsionlab.presentation import Family
from torsionlab.variety import build_qm

X = ExactPolynomial.monomial(1)
ONE = ExactPolynomial.one()


def poly(*coeffs):
    return ExactPolynomial.from_terms(enumerate(coeffs))


small_int_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=12)


# ring operations -------------------------------------------------------------


def test_binomial_square():
    assert (ONE + X) * (ONE + X) == poly(1, 2, 1)


def test_product_with_zero_is_zero():
    assert (poly(3, 1, 4) * ExactPolynomial.zero()).is_zero


def test_square_of_x_times_one_plus_x_squared():
    q = build_qm(Family.FIGURE_EIGHT_P, 4)
    assert q == (X * (ONE + X ** 2)) ** 2
    assert q.terms() == {2: 1, 4: 2, 6: 1}


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        ExactPolynomial((1.5, 2))


def test_laurent_terms_round_trip_through_json():
    p = ExactPolynomial.from_terms([(-3, Fraction(1, 2)), (0, 1), (2, -7)])
    assert ExactPolynomial.from_json(p.to_json()) == p
    assert p.to_json() == {"shift": 3, "coeffs": ["1/2", "0/1", "0/1", "1/1", "0/1", "-7/1"]}


@given(small_int_lists, small_int_lists)
def test_add_and_multiply_agree_with_numpy(a, b):
    p, q = poly(*a), poly(*b)
    prod = np.polynomial.polynomial.polymul(a, b)
    assert (p * q) == poly(*[int(c) for c in prod])
    total = np.polynomial.polynomial.polyadd(a, b)
    assert (p + q) == poly(*[int(c) for c in total])


# division --------------------------------------------------------------------


def test_q5_divisible_by_one_plus_x_squared():
    q = build_qm(Family.FIGURE_EIGHT_P, 5)
    quotient = divide_exact(q, (ONE + X) ** 2)
    assert quotient * (ONE + X) ** 2 == q


def test_q6_not_divisible_by_one_plus_x_squared_squared():
    q = build_qm(Family.FIGURE_EIGHT_P, 6)
    with pytest.raises(NotDivisible) as info:
        divide_exact(q, (ONE + X ** 2) ** 2)
    assert not info.value.remainder.is_zero


def test_divide_by_one():
    p = poly(1, -2, 5)
    assert divide_exact(p, ONE) == p


@given(small_int_lists, small_int_lists)
def test_divide_exact_inverts_multiply(a, b):
    p, q = poly(*a), poly(*b)
    if q.is_zero:
        return
    assert divide_exact(p * q, q) * q == p * q


# derivative ------------------------------------------------------------------


def test_derivative_examples():
    assert derivative(ExactPolynomial.constant(7)).is_zero
    assert derivative(poly(0, 0, 1, 0, 2, 0, 1)) == poly(0, 2, 0, 8, 0, 6)


def test_derivative_of_shifted_qm_matches_term_by_term():
    q = build_qm(Family.FIGURE_EIGHT_Q, 2)
    f = ExactPolynomial.monomial(9) * q
    expected = ExactPolynomial.from_terms((e - 1, e * c) for e, c in f.terms().items())
    assert derivative(f) == expected


def test_derivative_of_laurent_monomial():
    assert derivative(ExactPolynomial.monomial(-3, 2)) == ExactPolynomial.monomial(-4, -6)


@given(small_int_lists, small_int_lists, st.integers(-5, 5))
def test_product_rule_and_linearity(a, b, c):
    p, q = poly(*a), poly(*b)
    assert derivative(p * q) == derivative(p) * q + p * derivative(q)
    assert derivative(p + c * q) == derivative(p) + c * derivative(q)


# gcd and square-freeness -----------------------------------------------------


def test_gcd_examples():
    f = poly(2, 4, 6)
    assert poly_gcd(f, ExactPolynomial.zero()) == f.monic()
    assert poly_gcd((ONE + X) ** 2 * (ONE - X), ONE + X) == ONE + X


def test_gcd_of_p7_quotient_with_its_derivative_is_one():
    k = divide_exact(build_qm(Family.FIGURE_EIGHT_P, 7), (ONE + X) ** 2)
    assert poly_gcd(k, derivative(k)) == ONE
    assert is_square_free(k)


def test_square_free_decomposition_reassembles():
    p = (ONE + X) ** 3 * (ONE - X) ** 2 * poly(3, 0, 1)
    parts = square_free_decomposition(p)
    assert sorted(m for _, m in parts) == [1, 2, 3]
    total = ONE
    for f, m in parts:
        total = total * f ** m
    assert total == p.monic()


# reverse -----------------------------------------------------------------------


def test_reverse_examples():
    assert reverse(poly(1, 2, 3)) == poly(3, 2, 1)
    q6 = build_qm(Family.FIGURE_EIGHT_P, 6)
    assert reverse(q6) == q6.normalized()
    q52 = build_qm(Family.FIVE_TWO_Q, 3)
    assert reverse(q52) == q52.normalized()


@given(small_int_lists)
def test_reverse_twice_is_identity(a):
    p = poly(*a)
    if p.is_zero or p.coeffs[0] == 0:
        return
    assert reverse(reverse(p)) == p.normalized()


# modular arithmetic and root sums ---------------------------------------------


def test_invert_mod_round_trip():
    k = build_qm(Family.FIGURE_EIGHT_P, 9)
    f = poly(1, 1, 0, 3)
    inv = invert_mod(f, k)
    assert reduce_mod(f * inv, k) == ONE


def test_invert_mod_detects_common_factor():
    with pytest.raises(NotCoprime):
        invert_mod(ONE + X, (ONE + X) * poly(2, 0, 1))


def test_reduce_mod_handles_negative_powers():
    k = poly(-2, 0, 1)  # x^2 = 2, so x^-1 = x/2
    assert reduce_mod(ExactPolynomial.monomial(-1), k) == ExactPolynomial.monomial(1, Fraction(1, 2))


def test_power_sums_match_companion_traces():
    k = build_qm(Family.FIGURE_EIGHT_Q, 2)
    ps = power_sums(k, 10)
    assert ps == [companion_power_trace(k, j) for j in range(10)]
    assert ps[0] == 16


def test_sum_over_roots_of_x_squared_minus_two():
    # sum 1/(2a) over a = +-sqrt2 vanishes
    assert sum_rational_over_roots_exact(poly(-2, 0, 1), ONE, 0, 1) == 0
    # sum a^2 over the same roots is 4
    assert sum_over_roots(X ** 2, poly(-2, 0, 1)) == 4


def test_printed_p5_substitution_sums_to_zero():
    k = divide_exact(build_qm(Family.FIGURE_EIGHT_P, 5), (ONE + X) ** 2)
    g = 2 * (X - 1) * (X ** 4 - 1)
    assert sum_rational_over_roots_exact(k, g, 0, 1) == 0


def test_degree_bound_violation_gives_leading_ratio():
    k = poly(3, -1, 0, 2, 5)
    g = poly(1, 0, 0, 7)
    # at roots of k the summand is g/k', so the sum is lc(g)/lc(k)
    assert sum_rational_over_roots_exact(k, g, 0, 1) == Fraction(7, 5)
    assert sum_rational_over_roots_exact(k, g, 2, 1) == Fraction(7, 5)


def test_wrapper_sharing_a_factor_is_rejected():
    k = (ONE + X ** 2) * poly(3, 1, 1)
    with pytest.raises(NotCoprime):
        sum_rational_over_roots_exact(k, ONE, 1, 2)


def test_repeated_roots_are_rejected():
    with pytest.raises(NotCoprime):
        sum_rational_over_roots_exact((ONE + X) ** 2 * poly(3, 0, 1), ONE, 0, 1)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-9, 9), min_size=5, max_size=16),
    st.lists(st.integers(-9, 9), min_size=1, max_size=16),
    st.sampled_from([(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)]),
)
def test_residue_lemma_property(kc, gc, eta_eps):
    eta, eps = eta_eps
    k = poly(*kc)
    if k.is_zero or kc[0] == 0 or k.span < 1 or not is_square_free(k):
        return
    wrapper = (ONE + ExactPolynomial.monomial(eps)) ** eta
    if eta and poly_gcd(wrapper, k).span:
        return
    top = k.span - eps * eta - 2
    if top < 0:
        return
    g = poly(*gc[: top + 1])
    rfs = RationalFunctionSum(g, k, eta, eps)
    assert rfs.degree_bound_holds()
    assert rfs.exact() == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=12), st.lists(st.integers(-9, 9), min_size=1, max_size=12))
def test_exact_root_sum_agrees_with_numeric_roots(kc, gc):
    k = poly(*kc)
    if k.is_zero or kc[0] == 0 or k.span < 1 or not is_square_free(k):
        return
    g = poly(*gc)
    exact = sum_rational_over_roots_exact(k, g, 0, 1)
    roots = np.roots([float(c) for c in reversed(k.dense())])
    dk = derivative(k)
    numeric = sum(complex(g(complex(r))) / complex(dk(complex(r))) for r in roots)
    assert abs(numeric - float(exact)) <= 1e-8 * max(1.0, abs(float(exact)))
