"""Adjoint torsion, from closed forms and from the twisted cochain complex.

The cochain complex is ``C^0 -> C^1 -> C^2 -> C^3`` with dimensions
``3, 3g, 3g, 3``.  Its differentials are the adjoint images of the
group-ring matrices built in :mod:`torsionlab.presentation`:

* ``d0`` has block i equal to ``Ad(1 - x_i)``;
* ``d1`` has block (j, i) equal to ``Ad(d r_j / d x_i)``;
* ``d2`` has block j equal to ``Ad(psi(d W / d r_j))``.

The torsion is the alternating product of the transition determinants
``[d(b^{i-1}) b^i / c^i]`` taken with exponent ``(-1)**i`` in this cochain
indexing (the chain complex read from the top dimension down), which is the
convention under which the closed forms are reproduced.  The chain path is
compared with the closed forms up to one global sign per manifold, because
the homology-orientation sign is not computed.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .errors import BranchDomain, ChainConditionViolated, DerivativeVanishes, NotAcyclic, UnsupportedFamily
from .exactpoly import ExactPolynomial, derivative
from .presentation import Family, GroupRingElement, GroupWord, build_presentation, symbolic_differentials
from .variety import Representation, _inv, _mul, adjoint_entries, build_qm

__all__ = [
    "TorsionRecord",
    "ChainComplexTorsion",
    "closed_form_rational",
    "five_two_p_polynomial",
    "torsion_closed_form",
    "torsion_chain_complex",
    "torsion_inverse_rational",
    "cochain_matrices",
    "based_torsion",
    "records_to_csv",
    "torsion_records",
    "sign_ratio_constant",
]

CHAIN_TOL = 1e-9
ACYCLIC_MARGIN = 1e-6
CSV_COLUMNS = [
    "family", "parameter", "re a", "im a", "re tau_cf", "im tau_cf",
    "re tau_cc", "im tau_cc", "ratio", "residual",
]

_X = ExactPolynomial.monomial(1)
_ONE = ExactPolynomial.one()


def _mono(e: int, c=1) -> ExactPolynomial:
    return ExactPolynomial.monomial(e, c)


# closed forms ---------------------------------------------------------------


def five_two_p_polynomial(q: int, printed: bool = False) -> ExactPolynomial:
    """The Laurent polynomial P(a) entering the 5_2 torsion formula.

    With ``printed=True`` the two grouped terms ``(18q+2) a`` and
    ``(1-10q) a`` are taken literally; by default they are read as constant
    terms of their groups, which is the reading consistent with the cochain
    complex.
    """
    a = _X

    def lin(*pairs):
        return ExactPolynomial.from_terms(pairs)

    base = lin((0, 1 - 2 * q), (1, 28 * q + 2), (2, 3 - 42 * q), (3, 36 * q - 8), (4, 2 - 20 * q))
    g2 = lin((-1, 4 * q - 1), (0, 18 * q - 3), (1, 3 - 32 * q), (2, 4 - 54 * q), (3, -2), (4, 8 * q - 1))
    g4 = lin((-1, 1 - 4 * q), (0, -10 * q), (1, -8 * q - 3), (2, 38 * q - 4), (3, 5 - 34 * q), (4, 1 - 10 * q))
    e6 = 1 if printed else 0
    g6 = lin((-1, 10 * q - 1), (e6, 18 * q + 2), (1, 7 - 56 * q), (2, 74 * q - 8), (3, 10 * q))
    g8 = lin((-1, 14 * q - 3), (0, 18 * q), (1, 9 - 76 * q), (2, -3), (3, 16 * q - 3))
    g10 = lin((-1, 24 * q - 2), (e6, 1 - 10 * q), (1, 2 - 52 * q), (2, -18 * q - 1))
    g12 = lin((-2, 4 * q - 1), (-1, 8 * q), (0, 5 - 62 * q), (1, 56 * q - 6), (2, 2 - 6 * q))
    out = base
    for k, grp in ((2, g2), (4, g4), (6, g6), (8, g8), (10, g10), (12, g12)):
        out = out + _mono(k * q) * grp
    return out


def closed_form_rational(family: Family | str, parameter: int, printed: bool = False) -> tuple[ExactPolynomial, ExactPolynomial]:
    """``(numerator, denominator)`` Laurent polynomials with tau = num/den.

    For the figure-eight ``p/1`` family this is the generic branch (a != +-i).
    """
    family = Family(family)
    n = int(parameter)
    if family is Family.FIGURE_EIGHT_P:
        p = n
        num = -ExactPolynomial.from_terms(
            [(0, 4 - p), (2, p - 2), (4, 2 * p), (6, 2 + p), (8, -(4 + p)), (4 + p, 2 * p)]
        )
        den = 2 * (_X ** 2 - 1) ** 3 * (_ONE + _X ** 2)
        return num, den
    if n == 0:
        raise UnsupportedFamily("the 1/q families need q != 0")
    q = n
    if family is Family.FIGURE_EIGHT_Q:
        b = _mono(2 * q)
        inner = (
            (4 * q - 1) + (1 - 2 * q) * b + 2 * (_ONE + _X) * _mono(4 * q)
            + (1 + 2 * q) * _mono(6 * q) - (1 + 4 * q) * _mono(8 * q)
        )
        num = -_mono(6 * q) * inner
        den = 2 * (_mono(4 * q) - 1) ** 3 * (_ONE - 2 * b - _mono(4 * q) - 2 * _mono(6 * q) + _mono(8 * q))
        return num, den
    if family is Family.FIVE_TWO_Q:
        P = five_two_p_polynomial(q, printed=printed)
        if printed:
            return -P, 2 * _X ** 2 * (_X ** 2 - 1) ** 4
        return -(_X ** 2) * P, 2 * (_X ** 2 - 1) ** 4
    raise UnsupportedFamily(str(family))  # pragma: no cover


def _near_pm_i(a) -> bool:
    return abs(complex(a) ** 2 + 1) < 1e-8


def torsion_closed_form(a, family: Family | str, parameter: int):
    """Closed-form torsion at the variety point ``a`` (returns mpc)."""
    family = Family(family)
    a = mpmath.mpc(a)
    if family is Family.FIGURE_EIGHT_P and _near_pm_i(a):
        if parameter % 4 != 0:
            raise BranchDomain(f"+-i is not a root of Q_M for p={parameter}")
        eps = 1 if a.imag > 0 else -1
        # sqrt(-5) is fixed to +i sqrt(5)
        return (10 + mpmath.mpc(0, eps) * parameter * mpmath.mpc(0, mpmath.sqrt(5))) / 8
    num, den = closed_form_rational(family, parameter)
    return num(a) / den(a)


def torsion_inverse_rational(a, family: Family | str, parameter: int):
    """1/tau as a polynomial over Q_M'(a) (figure-eight families only).

    For the ``1/q`` family this form agrees with the chain complex, so it is
    minus the reciprocal of :func:`torsion_closed_form` there.
    """
    family = Family(family)
    a = mpmath.mpc(a)
    q = build_qm(family, parameter)
    if family is Family.FIGURE_EIGHT_P:
        if _near_pm_i(a):
            raise BranchDomain("the rational form excludes a = +-i")
        p = int(parameter)
        top = 2 * (_ONE - _X ** 2) ** 3 * (_ONE + _X ** 2) * _mono(p - 5)
        bottom = derivative(q)
    elif family is Family.FIGURE_EIGHT_Q:
        k = int(parameter)
        top = 2 * (_mono(4 * k) - 1) ** 3 * (_mono(4 * k) - (_X ** 2 + _X + 1) * _mono(2 * k - 1) + 1)
        bottom = derivative(_mono(4 * k + 1) * q)
    else:
        raise UnsupportedFamily("no displayed rational form of 1/tau for this family")
    d = bottom(a)
    scale = max(1, float(abs(a)) ** max(bottom.degree, 0))
    if abs(d) <= 1e-12 * scale * float(max(abs(c) for c in bottom.coeffs)):
        raise DerivativeVanishes(f"derivative vanishes at a={complex(a)}")
    return top(a) / d


# chain complex --------------------------------------------------------------


@lru_cache(maxsize=256)
def _differentials(family: Family, parameter: int):
    pres = build_presentation(family, parameter)
    return pres, symbolic_differentials(pres)


def _word_matrix(word: GroupWord, mats, inverses, cache: dict):
    if word in cache:
        return cache[word]
    n = len(word.letters)
    # reuse the longest cached prefix
    k = n - 1
    while k > 0 and GroupWord(word.letters[:k]) not in cache:
        k -= 1
    if k > 0:
        acc = cache[GroupWord(word.letters[:k])]
    else:
        one = mats["x1"][0] ** 0
        zero = mats["x1"][0] * 0
        acc = (one, zero, zero, one)
    for name, e in word.letters[k:]:
        acc = _mul(acc, mats[name] if e > 0 else inverses[name])
    cache[word] = acc
    return acc


def _ring_adjoint(elem: GroupRingElement, mats, inverses, cache, scale) -> list[list]:
    zero = mats["x1"][0] * 0
    out = [[zero] * 3 for _ in range(3)]
    for word, c in elem.terms:
        adj = adjoint_entries(_word_matrix(word, mats, inverses, cache), scale)
        for i in range(3):
            for j in range(3):
                out[i][j] = out[i][j] + c * adj[i][j]
    return out


def cochain_matrices(rep: Representation, scale: Sequence = (1, 1, 1), backend: str = "double") -> list[list[list]]:
    """The three differentials as nested lists (complex or mpc entries)."""
    pres, sym = _differentials(rep.family, rep.parameter)
    if backend == "double":
        mats = {k: tuple(complex(v) for v in m) for k, m in rep.matrices.items()}
        scale = tuple(complex(s) for s in scale)
    elif backend == "dd":
        mats = dict(rep.matrices)
        scale = tuple(mpmath.mpf(s) if not isinstance(s, mpmath.mpc) else s for s in scale)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    inverses = {k: _inv(v) for k, v in mats.items()}
    cache: dict = {}
    g = pres.g
    zero = mats["x1"][0] * 0
    d0 = [[zero] * 3 for _ in range(3 * g)]
    d1 = [[zero] * (3 * g) for _ in range(3 * g)]
    d2 = [[zero] * (3 * g) for _ in range(3)]
    for i in range(g):
        blk = _ring_adjoint(sym.delta1[i], mats, inverses, cache, scale)
        for r in range(3):
            for c in range(3):
                d0[3 * i + r][c] = blk[r][c]
    for i in range(g):
        for j in range(g):
            blk = _ring_adjoint(sym.delta2[i][j], mats, inverses, cache, scale)
            for r in range(3):
                for c in range(3):
                    d1[3 * j + r][3 * i + c] = blk[r][c]
    for j in range(g):
        blk = _ring_adjoint(sym.delta3[j], mats, inverses, cache, scale)
        for r in range(3):
            for c in range(3):
                d2[r][3 * j + c] = blk[r][c]
    return [d0, d1, d2]


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), a[0][0] * 0) for j in range(len(b[0]))] for i in range(len(a))]


def _max_abs(m) -> float:
    return max(float(abs(v)) for row in m for v in row)


def _det(m) -> object:
    """Determinant by Gaussian elimination with partial pivoting."""
    a = [list(row) for row in m]
    n = len(a)
    det = a[0][0] ** 0 if n else 1
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) == 0:
            return a[0][0] * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det = det * pv
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f != 0:
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col][c]
    return det


def _choose_columns(d, rank: int, rng: random.Random | None) -> list[int]:
    """Column indices whose images are independent, by greedy pivoting.

    Without ``rng`` the column of largest residual norm is taken at each
    step; with ``rng`` columns are visited in random order and accepted when
    their residual keeps a reasonable fraction of their norm.
    """
    arr = np.array([[complex(v) for v in row] for row in d], dtype=complex)
    cols = arr.shape[1]
    basis: list[np.ndarray] = []
    chosen: list[int] = []

    def residual(v):
        for q in basis:
            v = v - q * np.vdot(q, v)
        return v

    if rng is None:
        while len(chosen) < rank:
            best, bestn, bestv = None, -1.0, None
            for j in range(cols):
                if j in chosen:
                    continue
                v = residual(arr[:, j])
                nv = np.linalg.norm(v)
                if nv > bestn:
                    best, bestn, bestv = j, nv, v
            if best is None or bestn == 0:
                break
            chosen.append(best)
            basis.append(bestv / bestn)
    else:
        floor = 1e-8 * max(float(np.linalg.norm(arr[:, j])) for j in range(cols))
        order = list(range(cols))
        for threshold in (0.2, 0.05, 1e-3):
            rng.shuffle(order)
            chosen, basis = [], []
            for j in order:
                col = arr[:, j]
                n0 = np.linalg.norm(col)
                if n0 <= floor:
                    continue
                v = residual(col)
                nv = np.linalg.norm(v)
                if nv > threshold * n0 and nv > floor:
                    chosen.append(j)
                    basis.append(v / nv)
                    if len(chosen) == rank:
                        break
            if len(chosen) == rank:
                break
    if len(chosen) < rank:
        raise NotAcyclic("could not select independent columns")
    return sorted(chosen)


@dataclass(frozen=True)
class ChainComplexTorsion:
    value: object
    chain_condition: tuple[float, ...]
    margins: tuple[float, ...]
    null_singular_values: tuple[float, ...]
    subsets: tuple[tuple[int, ...], ...]

    @property
    def margin(self) -> float:
        return min(self.margins)


def based_torsion(diffs, dims: Sequence[int], rng: random.Random | None = None) -> ChainComplexTorsion:
    """Torsion of an acyclic based cochain complex given by its differentials."""
    n = len(dims)
    cc = tuple(_max_abs(_matmul(diffs[i + 1], diffs[i])) for i in range(n - 2))
    if any(v > CHAIN_TOL for v in cc):
        raise ChainConditionViolated(f"composition of differentials is {max(cc):.3e}")
    ranks = []
    prev = 0
    for i in range(n - 1):
        ranks.append(dims[i] - prev)
        prev = ranks[-1]
    if prev != dims[-1]:
        raise NotAcyclic("dimensions are inconsistent with acyclicity")
    margins, nulls = [], []
    for d, r in zip(diffs, ranks):
        sv = np.linalg.svd(np.array([[complex(v) for v in row] for row in d]), compute_uv=False)
        margins.append(float(sv[r - 1]))
        nulls.append(float(sv[r]) if r < len(sv) else 0.0)
    if min(margins) <= ACYCLIC_MARGIN:
        raise NotAcyclic(f"smallest retained singular value {min(margins):.3e}")
    subsets = [_choose_columns(d, r, rng) for d, r in zip(diffs, ranks)]
    one = diffs[0][0][0] ** 0
    value = one
    images = []  # d_{i-1} applied to b^{i-1}
    for i in range(n):
        cols = [list(c) for c in images]
        if i < n - 1:
            for j in subsets[i]:
                e = [one * 0] * dims[i]
                e[j] = one
                cols.append(e)
        mat = [[cols[c][r] for c in range(dims[i])] for r in range(dims[i])]
        det = _det(mat)
        value = value * det if i % 2 == 0 else value / det
        if i < n - 1:
            d = diffs[i]
            images = [[d[r][j] for r in range(dims[i + 1])] for j in subsets[i]]
    # (-1)^N with N = sum alpha_i beta_i; every Betti number vanishes here
    betti = [0] * n
    alpha = [sum(dims[: i + 1]) for i in range(n)]
    beta = [sum(betti[: i + 1]) for i in range(n)]
    if sum(x * y for x, y in zip(alpha, beta)) % 2:
        value = -value
    return ChainComplexTorsion(value, cc, tuple(margins), tuple(nulls), tuple(tuple(s) for s in subsets))


def torsion_chain_complex(
    rep: Representation,
    backend: str = "double",
    scale: Sequence = (1, 1, 1),
    rng: random.Random | None = None,
) -> ChainComplexTorsion:
    """Torsion of the twisted cochain complex at a validated representation."""
    if rep.max_residual > 1e-9:
        raise ValueError("representation fails the relator gate")
    diffs = cochain_matrices(rep, scale, backend)
    g = len(diffs[1])
    ctx = mpmath.workprec(rep.bits) if backend == "dd" else _null_context()
    with ctx:
        return based_torsion(diffs, [3, g, g, 3], rng)


class _null_context:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


# records --------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionRecord:
    family: Family
    parameter: int
    a: complex
    closed_form: complex
    chain_complex: complex | None
    ratio: complex | None
    residual: float
    margin: float | None = None
    chain_condition: float | None = None
    notes: str = ""

    def abs_agreement(self) -> float | None:
        if self.chain_complex is None:
            return None
        return abs(abs(self.closed_form) - abs(self.chain_complex)) / abs(self.closed_form)

    def row(self) -> list[str]:
        def f(v):
            return "" if v is None else f"{v:.17g}"

        cc = self.chain_complex
        ratio = None if self.ratio is None else self.ratio.real
        return [
            self.family.value, str(self.parameter), f(self.a.real), f(self.a.imag),
            f(self.closed_form.real), f(self.closed_form.imag),
            f(None if cc is None else cc.real), f(None if cc is None else cc.imag),
            f(ratio), f(self.residual),
        ]

    def to_json(self) -> dict:
        def c(z):
            return None if z is None else [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]

        return {
            "family": self.family.value,
            "parameter": self.parameter,
            "a": c(self.a),
            "tau_closed_form": c(self.closed_form),
            "tau_chain_complex": c(self.chain_complex),
            "ratio": c(self.ratio),
            "residual": float(f"{self.residual:.17g}"),
            "acyclicity_margin": self.margin,
            "chain_condition": self.chain_condition,
            "notes": self.notes,
        }


def records_to_csv(records: Sequence[TorsionRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def torsion_records(
    family: Family | str,
    parameter: int,
    method: str = "both",
    precision: str = "auto",
    backend: str = "double",
) -> list[TorsionRecord]:
    """One record per variety point; ``method`` is closed, chain or both."""
    from .rootfind import precision_bits
    from .variety import reconstruct_representation, variety_points

    if method not in ("closed", "chain", "both"):
        raise ValueError(f"unknown method {method!r}")
    family = Family(family)
    out = []
    with mpmath.workprec(precision_bits(precision)):
        for a in variety_points(family, parameter, precision):
            rep = reconstruct_representation(a, family, parameter, precision)
            cf = complex(torsion_closed_form(a, family, parameter))
            cc = ratio = margin = chain = None
            if method != "closed":
                res = torsion_chain_complex(rep, backend)
                cc = complex(res.value)
                ratio = cc / cf
                margin = res.margin
                chain = max(res.chain_condition)
            notes = rep.method
            if abs(rep.commutator_trace - 2) < 1e-9:
                notes += "; commutator trace 2 (reducible image)"
            out.append(TorsionRecord(family, int(parameter), complex(a), cf, cc, ratio, rep.max_residual, margin, chain, notes))
    return out


def sign_ratio_constant(records: Sequence[TorsionRecord], tol: float = 1e-7) -> bool:
    """True when every ratio is the same element of {+1, -1}."""
    ratios = [r.ratio for r in records if r.ratio is not None]
    if not ratios:
        return True
    s = 1 if ratios[0].real > 0 else -1
    return all(abs(r - s) <= tol for r in ratios)
