import json
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsionlab.errors import UnsupportedFamily
from torsionlab.presentation import (
    Family,
    GroupRingElement,
    GroupWord,
    build_presentation,
    commutator,
    fox_derivative,
    parse_word,
    symbolic_differentials,
    validate_w_word,
)
from torsionlab.variety import evaluate_word, reconstruct_representation, variety_points

X1, X2, X3 = (GroupWord.gen(f"x{i}") for i in (1, 2, 3))
ONE = GroupRingElement.one()

letters = st.tuples(st.sampled_from(["x1", "x2", "x3"]), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=40).map(GroupWord)


def ring_value(elem, mats):
    total = np.zeros((2, 2), dtype=complex)
    for word, c in elem.terms:
        a, b, cc, d = evaluate_word(word, mats)
        total += c * np.array([[complex(a), complex(b)], [complex(cc), complex(d)]])
    return total


# words ----------------------------------------------------------------------------


def test_free_reduction():
    w = GroupWord((("x1", 1), ("x2", 1), ("x2", -1), ("x1", -1), ("x3", 1)))
    assert w == X3
    assert (X1 * X1.inverse()).is_identity


@given(words)
def test_reduction_is_idempotent_and_shortening(w):
    again = GroupWord(w.letters)
    assert again == w
    assert len(w) <= 40
    assert all(a[0] != b[0] or a[1] != -b[1] for a, b in zip(w.letters, w.letters[1:]))


def test_text_syntax_round_trip():
    w = parse_word("x1 x2^-1 x3^5")
    assert str(w) == "x1 x2^-1 x3^5"
    assert parse_word(str(w)) == w
    assert len(w) == 7


# Fox calculus ---------------------------------------------------------------------


def test_fox_of_generator():
    assert fox_derivative(X1, "x1") == ONE
    assert fox_derivative(X1, "x2").is_zero


def test_fox_of_conjugate():
    w = X1 * X2 * X1.inverse()
    assert fox_derivative(w, "x1") == ONE - GroupRingElement.of(w)


def test_fox_of_power():
    expected = ONE + GroupRingElement.of(X1) + GroupRingElement.of(X1 ** 2) + GroupRingElement.of(X1 ** 3)
    assert fox_derivative(X1 ** 4, "x1") == expected


@given(words)
def test_fundamental_identity(w):
    total = GroupRingElement(())
    for g in ("x1", "x2", "x3"):
        total = total + fox_derivative(w, g) * (GroupRingElement.of(GroupWord.gen(g)) - ONE)
    assert total == GroupRingElement.of(w) - ONE


# presentations ----------------------------------------------------------------------


def test_p5_presentation():
    pres = build_presentation(Family.FIGURE_EIGHT_P, 5)
    assert pres.g == 3
    assert pres.relators[2] == commutator(X1, X2) * X3 ** 5


def test_q2_figure_eight_presentation():
    pres = build_presentation(Family.FIGURE_EIGHT_Q, 2)
    c = commutator(X1, X2)
    x4 = GroupWord.gen("x4")
    assert pres.g == 4
    assert pres.relators[2] == X3 * c ** 2
    assert pres.relators[3] == x4 * c.inverse()


def test_five_two_second_relator():
    pres = build_presentation(Family.FIVE_TWO_Q, 3)
    assert pres.g == 4
    assert str(pres.relators[1]) == "x3 x2^-1 x3^-1 x1^-1 x2"


def test_one_over_zero_is_rejected():
    with pytest.raises(UnsupportedFamily):
        build_presentation(Family.FIVE_TWO_Q, 0)
    with pytest.raises(ValueError):
        build_presentation("Trefoil-p/1", 1)


def test_presentation_json():
    doc = json.loads(build_presentation(Family.FIGURE_EIGHT_P, 3).dumps())
    assert doc["relators"][2] == "x1 x2 x1^-1 x2^-1 x3^3"
    assert doc["w_source"] == "reconstructed"


# differentials ------------------------------------------------------------------------


def test_delta1_entries():
    sym = symbolic_differentials(build_presentation(Family.FIGURE_EIGHT_P, 2))
    assert [str(e) for e in sym.delta1] == ["1 - x1", "1 - x2", "1 - x3"]


def test_delta2_corner_is_commutator_times_geometric_sum():
    p = 4
    sym = symbolic_differentials(build_presentation(Family.FIGURE_EIGHT_P, p))
    c = GroupRingElement.of(commutator(X1, X2))
    geometric = GroupRingElement(())
    for k in range(p):
        geometric = geometric + GroupRingElement.of(X3 ** k)
    assert sym.delta2[2][2] == c * geometric


def test_delta3_for_rho3_evaluates_to_x4_minus_one():
    fam, q = Family.FIGURE_EIGHT_Q, 2
    sym = symbolic_differentials(build_presentation(fam, q))
    a = variety_points(fam, q)[0]
    mats = reconstruct_representation(a, fam, q).matrices
    x4 = np.array(mats["x4"], dtype=complex).reshape(2, 2)
    assert np.allclose(ring_value(sym.delta3[2], mats), x4 - np.eye(2), atol=1e-12)


@pytest.mark.parametrize(
    "family,param", [(Family.FIGURE_EIGHT_Q, 1), (Family.FIVE_TWO_Q, 2), (Family.FIGURE_EIGHT_P, 6), (Family.FIVE_TWO_Q, -3)]
)
def test_w_words_reduce_to_identity(family, param):
    report = validate_w_word(build_presentation(family, param))
    assert report.reduces_to_identity
    assert report.residual_word.is_identity


def test_trivial_w_word_reduces():
    r1 = GroupWord.gen("r1")
    assert (r1 * r1.inverse()).is_identity
