import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionlab.errors import NoValidSign, UnsupportedFamily
from torsionlab.exactpoly import ExactPolynomial, divide_exact, is_square_free
from torsionlab.presentation import Family
from torsionlab.variety import (
    adjoint,
    build_qm,
    in_domain_d,
    kappa,
    killing_gram,
    reconstruct_representation,
    variety_points,
)

X = ExactPolynomial.monomial(1)
ONE = ExactPolynomial.one()
P, Q, F52 = Family.FIGURE_EIGHT_P, Family.FIGURE_EIGHT_Q, Family.FIVE_TWO_Q


def random_sl2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return m / np.sqrt(np.linalg.det(m))


# eigenvalue polynomials -------------------------------------------------------


def test_qm_p4_is_square_of_x_times_one_plus_x_squared():
    assert build_qm(P, 4) == (X * (ONE + X ** 2)) ** 2


def test_qm_p0_terms():
    assert build_qm(P, 0).terms() == {-4: -1, -2: 1, 0: 4, 2: 1, 4: -1}


def test_qm_q1_figure_eight():
    assert build_qm(Q, 1).terms() == {0: 1, 2: -1, 3: -1, 4: -2, 5: -1, 6: -1, 8: 1}


@pytest.mark.parametrize("family,n", [(P, 6), (P, -5), (Q, 3), (Q, -2), (F52, 2), (F52, -3)])
def test_qm_is_palindromic_up_to_shift(family, n):
    q = build_qm(family, n)
    dense = q.normalized().dense()
    assert dense == dense[::-1]


def test_one_over_zero_rejected():
    with pytest.raises(UnsupportedFamily):
        build_qm(Q, 0)


@pytest.mark.parametrize("p", [n for n in range(-12, 13) if n])
def test_kappa_divides_and_leaves_square_free_quotient(p):
    k = divide_exact(build_qm(P, p), kappa(P, p))
    assert is_square_free(k)


@pytest.mark.parametrize("family,q,e", [(Q, 3, 2), (Q, -4, 2), (F52, 2, 3), (F52, -2, 3)])
def test_one_over_q_kappa_is_exact_power(family, q, e):
    qm = build_qm(family, q)
    divide_exact(qm, (ONE + X) ** e)
    with pytest.raises(Exception):
        divide_exact(qm, (ONE + X) ** (e + 1))


# the domain D -------------------------------------------------------------------


def test_domain_membership():
    assert in_domain_d(0.5)
    assert in_domain_d(1j)
    assert in_domain_d(-1j)
    assert not in_domain_d(2.0)
    assert not in_domain_d(1.0)
    assert not in_domain_d(-1.0)
    assert not in_domain_d(complex(math.cos(-0.3), math.sin(-0.3)))


@given(st.complex_numbers(min_magnitude=0.05, max_magnitude=20, allow_nan=False, allow_infinity=False))
def test_domain_picks_one_of_each_reciprocal_pair(z):
    if abs(abs(z) - 1) < 1e-6 or abs(z.imag) < 1e-6:
        return
    assert in_domain_d(z) != in_domain_d(1 / z)


# variety points -------------------------------------------------------------------


@pytest.mark.parametrize(
    "family,n,count",
    [(P, 0, 4), (P, 4, 2), (P, 5, 4), (P, 6, 6), (P, -7, 6), (Q, 2, 7), (Q, -3, 11), (F52, 1, 5), (F52, 3, 19)],
)
def test_variety_point_counts(family, n, count):
    pts = variety_points(family, n)
    assert len(pts) == count
    assert all(in_domain_d(a) for a in pts)


def test_p4_points_are_plus_minus_i():
    pts = sorted((complex(a) for a in variety_points(P, 4)), key=lambda z: z.imag)
    assert pts == pytest.approx([-1j, 1j], abs=1e-25)


@pytest.mark.parametrize("family,n", [(P, 5), (P, -6), (Q, 2), (Q, -1), (F52, 1), (F52, -2)])
def test_representations_pass_the_relator_gate(family, n):
    for a in variety_points(family, n):
        rep = reconstruct_representation(a, family, n)
        assert rep.max_residual < 1e-9
        assert rep.determinant_error < 1e-20


def test_closed_form_points_use_both_signs():
    reps = [reconstruct_representation(a, P, 6) for a in variety_points(P, 6)]
    assert {r.method for r in reps} == {"closed-form"}
    assert {r.eta for r in reps} == {1, -1}


def test_p4_uses_explicit_matrices():
    rep = reconstruct_representation(1j, P, 4)
    assert rep.method == "special"
    g = (math.sqrt(5) - 1) / 4
    x1 = [complex(v) for v in rep.matrices["x1"]]
    assert x1 == pytest.approx([g, 1, -(1 - g * g), g], abs=1e-15)
    assert rep.max_residual < 1e-20


def test_p0_golden_points_are_reducible_but_valid():
    a = variety_points(P, 0)[0]
    assert complex(a) == pytest.approx((math.sqrt(5) - 1) / 2)
    rep = reconstruct_representation(a, P, 0)
    assert rep.max_residual < 1e-9
    assert complex(rep.commutator_trace) == pytest.approx(2, abs=1e-12)


def test_invalid_point_is_rejected():
    with pytest.raises(NoValidSign):
        reconstruct_representation(0.3 + 0.1j, P, 5)


def test_conjugated_representation_keeps_label():
    rep = reconstruct_representation(variety_points(P, 5)[0], P, 5)
    g = (2, 1, 1, 1)
    other = rep.conjugated(g)
    assert other.a == rep.a
    x, y = rep.numeric()["x1"], other.numeric()["x1"]
    gm = np.array([[2, 1], [1, 1]], dtype=complex)
    assert np.allclose(gm @ x @ np.linalg.inv(gm), y)


def test_representation_json_has_matrices():
    doc = reconstruct_representation(1j, P, 4).to_json()
    assert set(doc["matrices"]) == {"x1", "x2", "x3"}
    assert doc["a"] == [0.0, 1.0]


# adjoint action and Killing form ----------------------------------------------------


@settings(max_examples=50)
@given(st.integers(0, 2 ** 31))
def test_adjoint_is_a_homomorphism(seed):
    rng = np.random.default_rng(seed)
    g, h = random_sl2(rng), random_sl2(rng)
    assert np.allclose(adjoint(g @ h), adjoint(g) @ adjoint(h), atol=1e-8 * np.linalg.norm(adjoint(g)) * np.linalg.norm(adjoint(h)))
    assert abs(np.linalg.det(adjoint(g)) - 1) < 1e-8 * np.linalg.norm(adjoint(g)) ** 3


@settings(max_examples=50)
@given(st.integers(0, 2 ** 31), st.lists(st.floats(0.2, 5.0), min_size=3, max_size=3))
def test_adjoint_preserves_killing_form(seed, scale):
    g = random_sl2(np.random.default_rng(seed))
    ad = adjoint(g, scale)
    gram = killing_gram(scale)
    assert np.allclose(ad.T @ gram @ ad, gram, rtol=1e-7, atol=1e-7 * np.linalg.norm(ad) ** 2)


def test_adjoint_of_identity_and_validation():
    assert np.allclose(adjoint(np.eye(2)), np.eye(3))
    with pytest.raises(ValueError):
        adjoint(np.eye(2) * 2)
    with pytest.raises(ValueError):
        adjoint(np.eye(3))


def test_killing_gram_is_diagonal():
    assert np.allclose(killing_gram(), np.diag([8.0, 8.0, -8.0]))
