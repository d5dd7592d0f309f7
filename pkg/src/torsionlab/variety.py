"""Eigenvalue polynomials, the fundamental domain, and SL2(C) representations.

Each irreducible representation of the surgered manifold is labelled by one
root ``a`` of the eigenvalue polynomial lying in the half-domain D (open unit
disc, upper unit semicircle, and the point -i).  For the ``p/1`` family the
label is the meridian eigenvalue.  For the ``1/q`` families it is the
eigenvalue of the generator ``x4`` (a longitude), and the meridian eigenvalue
is ``a**-q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from .errors import NewtonDivergence, NoValidSign, UnsupportedFamily
from .exactpoly import ExactPolynomial, derivative
from .presentation import Family, GroupWord, SurgeryPresentation, build_presentation
from .rootfind import RootSet, find_roots, precision_bits

__all__ = [
    "Representation",
    "build_qm",
    "kappa",
    "in_domain_d",
    "variety_points",
    "reconstruct_representation",
    "adjoint",
    "adjoint_entries",
    "killing_gram",
    "evaluate_word",
]

RELATOR_GATE = 1e-9
DOMAIN_TOL = 1e-10

Mat2 = tuple  # (a, b, c, d) row-major, entries complex or mpc


# eigenvalue polynomials -----------------------------------------------------


def build_qm(family: Family | str, parameter: int) -> ExactPolynomial:
    """The eigenvalue polynomial of the surgered manifold, as a Laurent polynomial."""
    family = Family(family)
    n = int(parameter)
    if family is Family.FIGURE_EIGHT_P:
        terms = [(0, 1), (n - 4, -1), (n - 2, 1), (n, 2), (n + 2, 1), (n + 4, -1), (2 * n, 1)]
    elif n == 0:
        raise UnsupportedFamily("the 1/q families need q != 0")
    elif family is Family.FIGURE_EIGHT_Q:
        terms = [(0, 1), (2 * n, -1), (4 * n - 1, -1), (4 * n, -2), (4 * n + 1, -1), (6 * n, -1), (8 * n, 1)]
    elif family is Family.FIVE_TWO_Q:
        terms = [
            (0, 1), (1, -1), (2 * n, -2), (4 * n - 1, -1), (4 * n, -2), (6 * n - 1, 1), (8 * n, 1),
            (10 * n - 1, -2), (10 * n, -1), (12 * n - 1, -2), (14 * n - 2, -1), (14 * n - 1, 1),
        ]
    else:  # pragma: no cover
        raise UnsupportedFamily(str(family))
    return ExactPolynomial.from_terms(terms)


def kappa(family: Family | str, parameter: int) -> ExactPolynomial:
    """The factor of Q_M whose roots carry no irreducible representation.

    For the figure-eight ``p/1`` family this depends on p modulo 4; for the
    ``1/q`` families it is ``(1+x)**2`` (figure-eight) and ``(1+x)**3`` (5_2).
    """
    family = Family(family)
    x = ExactPolynomial.monomial(1)
    one = ExactPolynomial.one()
    if family is Family.FIGURE_EIGHT_P:
        p = int(parameter)
        if p % 2:
            return (one + x) ** 2
        if p % 4 == 2:
            return one
        return (one + x ** 2) ** 2
    if family is Family.FIGURE_EIGHT_Q:
        return (one + x) ** 2
    return (one + x) ** 3


def in_domain_d(a, tol: float = DOMAIN_TOL) -> bool:
    """Membership in D = {|a| < 1} U {|a| = 1, Im a > 0} U {-i}."""
    z = complex(a)
    r = abs(z)
    if abs(z + 1j) <= tol:
        return True
    if r < 1 - tol:
        return True
    return abs(r - 1) <= tol and z.imag > tol


def _point_key(a) -> tuple[float, float]:
    z = complex(a)
    return (round(abs(z), 10), round(math.atan2(z.imag, z.real), 10))


def variety_points(
    family: Family | str, parameter: int, precision: str = "auto", roots: RootSet | None = None
) -> list[mpmath.mpc]:
    """Distinct roots of Q_M in D, ordered by (|a|, arg a)."""
    q = build_qm(family, parameter)
    rs = roots if roots is not None else find_roots(q, precision)
    pts = [r.value for r in rs.roots if in_domain_d(r.value)]
    return sorted(pts, key=_point_key)


# 2x2 helpers ----------------------------------------------------------------


def _mul(p: Mat2, q: Mat2) -> Mat2:
    a, b, c, d = p
    e, f, g, h = q
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(p: Mat2) -> Mat2:
    a, b, c, d = p
    det = a * d - b * c
    return (d / det, -b / det, -c / det, a / det)


def _identity_like(x) -> Mat2:
    one = x ** 0
    zero = x * 0
    return (one, zero, zero, one)


def evaluate_word(word: GroupWord, mats: Mapping[str, Mat2], inverses: Mapping[str, Mat2] | None = None) -> Mat2:
    """Image of a word under an assignment of 2x2 matrices to generators."""
    if inverses is None:
        inverses = {k: _inv(v) for k, v in mats.items()}
    some = next(iter(mats.values()))[0]
    acc = _identity_like(some)
    for n, e in word.letters:
        acc = _mul(acc, mats[n] if e > 0 else inverses[n])
    return acc


def _deviation(m: Mat2) -> float:
    a, b, c, d = m
    return float(max(abs(a - 1), abs(b), abs(c), abs(d - 1)))


# representations ------------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """Matrices for every generator, labelled by the eigenvalue coordinate ``a``."""

    family: Family
    parameter: int
    a: mpmath.mpc
    meridian_eigenvalue: mpmath.mpc
    matrices: dict[str, Mat2]
    eta: int | None
    residuals: dict[str, float]
    method: str
    bits: int = 53
    determinant_error: float = 0.0
    commutator_trace: complex = 0j

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def numeric(self) -> dict[str, np.ndarray]:
        """Matrices as complex128 arrays."""
        return {
            k: np.array([[complex(v[0]), complex(v[1])], [complex(v[2]), complex(v[3])]])
            for k, v in self.matrices.items()
        }

    def conjugated(self, g: Mat2) -> "Representation":
        """The conjugate representation ``g rho g^-1``."""
        gi = _inv(g)
        mats = {k: _mul(_mul(g, v), gi) for k, v in self.matrices.items()}
        return Representation(
            self.family, self.parameter, self.a, self.meridian_eigenvalue, mats, self.eta,
            dict(self.residuals), self.method + "+conjugated", self.bits,
            self.determinant_error, self.commutator_trace,
        )

    def to_json(self) -> dict:
        def c17(z):
            z = complex(z)
            return [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]

        return {
            "family": self.family.value,
            "parameter": self.parameter,
            "a": c17(self.a),
            "meridian_eigenvalue": c17(self.meridian_eigenvalue),
            "eta": self.eta,
            "method": self.method,
            "matrices": {k: [c17(e) for e in v] for k, v in sorted(self.matrices.items())},
            "residuals": {k: float(f"{v:.17g}") for k, v in sorted(self.residuals.items())},
            "determinant_error": float(f"{self.determinant_error:.17g}"),
            "commutator_trace": c17(self.commutator_trace),
        }


def _figure_eight_x1(mu, eta: int) -> Mat2:
    """Entries of phi(x1) with y = 1 for meridian eigenvalue mu (sqrt branch eta)."""
    m2 = mu * mu
    s = mpmath.sqrt(1 - 2 * m2 - m2 ** 2 - 2 * m2 ** 3 + m2 ** 4)
    x = (1 + m2 - m2 ** 2 + eta * s) / (2 * (1 - m2))
    z = -(1 - 3 * m2 + m2 ** 2 + eta * s) / (2 * (m2 - 1) ** 2)
    w = (-1 + m2 + m2 ** 2 + eta * s) / (2 * m2 * (m2 - 1))
    return (x, mpmath.mpc(1), z, w)


def _special_x1(eps: int) -> tuple[Mat2, Mat2]:
    """Explicit matrices for meridian eigenvalue eps*i."""
    r5 = mpmath.sqrt(5)
    diag = (-1 + eps * r5) / 4
    x1 = (mpmath.mpc(diag), mpmath.mpc(1), mpmath.mpc((-5 - eps * r5) / 8), mpmath.mpc(diag))
    m = (mpmath.mpc(0, eps), mpmath.mpc(0), mpmath.mpc(0), mpmath.mpc(0, -eps))
    return x1, m


def _complete_figure_eight(x1: Mat2, m: Mat2, family: Family) -> dict[str, Mat2]:
    mi = _inv(m)
    x2 = _mul(_mul(_mul(_inv(x1), mi), x1), m)  # solves the first relator
    mats = {"x1": x1, "x2": x2, "x3": m}
    if family is Family.FIGURE_EIGHT_Q:
        mats["x4"] = _mul(_mul(_mul(x1, x2), _inv(x1)), _inv(x2))
    return mats


def _complete_five_two(x1: Mat2, m: Mat2) -> dict[str, Mat2]:
    mi = _inv(m)
    sq = _mul(x1, x1)
    x2 = _mul(_mul(_mul(mi, _inv(sq)), m), sq)  # solves the first relator
    d = _mul(_mul(_mul(sq, _inv(x2)), _inv(sq)), x2)
    return {"x1": x1, "x2": x2, "x3": m, "x4": d}


def _five_two_candidates(mu) -> list[Mat2]:
    """phi(x1) candidates from the cubic obtained by eliminating w.

    With ``phi(x1) = [[x, 1], [x*w - 1, w]]`` and ``phi(m) = diag(mu, 1/mu)``,
    the second relator forces ``w = 1 + mu**2 (1 - x)`` and a cubic in x whose
    coefficients are polynomials in ``u = mu**2``.
    """
    u = mu * mu
    c3 = u * (u - 1) ** 3
    c2 = -2 * u ** 4 + 2 * u ** 3 + 3 * u ** 2 - 4 * u + 1
    c1 = u ** 4 + 2 * u ** 3 - 4 * u ** 2 + 1
    c0 = -u ** 3 + 2 * u
    xs = mpmath.polyroots([c3, c2, c1, c0], maxsteps=200, extraprec=mpmath.mp.prec)
    out = []
    for x in xs:
        w = 1 + u * (1 - x)
        out.append((mpmath.mpc(x), mpmath.mpc(1), x * w - 1, w))
    return out


def _newton_five_two(mu, pres: SurgeryPresentation, seeds: Sequence[complex]) -> dict[str, Mat2] | None:
    """Damped Newton on (x, w) for the remaining relators; last-resort solver."""
    m = (mu, mpmath.mpc(0), mpmath.mpc(0), 1 / mu)

    def residual_vector(v):
        x, w = v
        mats = _complete_five_two((x, mpmath.mpc(1), x * w - 1, w), m)
        out = []
        for r in pres.relators[1:3]:
            a, b, c, d = evaluate_word(r, mats)
            out += [a - 1, b, c, d - 1]
        return out

    h = mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
    for seed in seeds:
        v = [mpmath.mpc(seed), 1 + mu * mu * (1 - mpmath.mpc(seed))]
        for _ in range(60):
            f = residual_vector(v)
            norm = max(abs(t) for t in f)
            if norm < mpmath.mpf(10) ** (-mpmath.mp.dps + 6):
                break
            cols = []
            for j in range(2):
                vp = list(v)
                vp[j] += h
                fp = residual_vector(vp)
                cols.append([(a - b) / h for a, b in zip(fp, f)])
            jac = mpmath.matrix([[cols[0][i], cols[1][i]] for i in range(len(f))])
            try:
                step = mpmath.lu_solve(jac.H * jac, jac.H * mpmath.matrix(f))
            except ZeroDivisionError:
                break
            v = [v[0] - step[0], v[1] - step[1]]
        x, w = v
        mats = _complete_five_two((x, mpmath.mpc(1), x * w - 1, w), m)
        if all(_deviation(evaluate_word(r, mats)) < RELATOR_GATE for r in pres.relators):
            return mats
    return None


NEWTON_SEEDS = tuple(
    r * complex(math.cos(2 * math.pi * k / 8 + 0.3), math.sin(2 * math.pi * k / 8 + 0.3))
    for r in (0.5, 2.0)
    for k in range(8)
)


def _assess(pres: SurgeryPresentation, mats: dict[str, Mat2]) -> dict[str, float]:
    inverses = {k: _inv(v) for k, v in mats.items()}
    return {f"r{j + 1}": _deviation(evaluate_word(r, mats, inverses)) for j, r in enumerate(pres.relators)}


def reconstruct_representation(
    a, family: Family | str, parameter: int, precision: str = "auto"
) -> Representation:
    """Rebuild the representation labelled by ``a`` and gate it on relator residuals."""
    family = Family(family)
    pres = build_presentation(family, parameter)
    bits = precision_bits(precision)
    with mpmath.workprec(bits):
        a = mpmath.mpc(a)
        mu = a if family is Family.FIGURE_EIGHT_P else a ** (-parameter)
        m = (mu, mpmath.mpc(0), mpmath.mpc(0), 1 / mu)
        candidates: list[tuple[dict[str, Mat2], int | None, str]] = []
        if family is Family.FIVE_TWO_Q:
            for x1 in _five_two_candidates(mu):
                candidates.append((_complete_five_two(x1, m), None, "elimination"))
        else:
            if abs(mu * mu + 1) < 1e-8:
                eps = 1 if complex(mu).imag > 0 else -1
                x1, ms = _special_x1(eps)
                candidates.append((_complete_figure_eight(x1, ms, family), None, "special"))
            for eta in (1, -1):
                x1 = _figure_eight_x1(mu, eta)
                candidates.append((_complete_figure_eight(x1, m, family), eta, "closed-form"))
        scored = []
        for mats, eta, method in candidates:
            res = _assess(pres, mats)
            scored.append((max(res.values()), mats, eta, method, res))
        passing = [s for s in scored if s[0] < RELATOR_GATE]
        if not passing and family is Family.FIVE_TWO_Q:
            mats = _newton_five_two(mu, pres, NEWTON_SEEDS)
            if mats is None:
                raise NewtonDivergence(f"no representation found at a={complex(a)}")
            res = _assess(pres, mats)
            passing = [(max(res.values()), mats, None, "newton", res)]
        if not passing:
            best = min(s[0] for s in scored) if scored else math.inf
            raise NoValidSign(f"no branch passes the relator gate at a={complex(a)} (best {best:.3e})")
        # the explicit matrices take precedence at +-i; otherwise the smaller residual wins
        passing.sort(key=lambda s: (s[3] != "special", s[0]))
        _, mats, eta, method, res = passing[0]
        det_err = max(float(abs(v[0] * v[3] - v[1] * v[2] - 1)) for v in mats.values())
        x1, x3 = mats["x1"], mats["x3"]
        comm = _mul(_mul(_mul(x1, x3), _inv(x1)), _inv(x3))
        tr = complex(comm[0] + comm[3])
    return Representation(family, int(parameter), a, mu, mats, eta, res, method, bits, det_err, tr)


# adjoint action ------------------------------------------------------------


def adjoint_entries(m: Mat2, scale: Sequence = (1, 1, 1)) -> list[list]:
    """Matrix of X -> m X m^-1 on the basis (s0 H, s1 (E+F), s2 (E-F)).

    Works for any numeric entry type (complex, mpc).
    """
    a, b, c, d = m
    h = [a * d + b * c, b * d - a * c, -a * c - b * d]
    s = [c * d - a * b, (a * a - b * b - c * c + d * d) / 2, (a * a + b * b - c * c - d * d) / 2]
    t = [-a * b - c * d, (a * a - b * b + c * c - d * d) / 2, (a * a + b * b + c * c + d * d) / 2]
    rows = [h, s, t]
    if tuple(scale) != (1, 1, 1):
        rows = [[rows[i][j] * scale[j] / scale[i] for j in range(3)] for i in range(3)]
    return rows


def adjoint(m, scale: Sequence[float] = (1.0, 1.0, 1.0)) -> np.ndarray:
    """3x3 complex matrix of the adjoint action of a unit-determinant 2x2 matrix."""
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if abs(np.linalg.det(arr) - 1) > 1e-10:
        raise ValueError("matrix does not have unit determinant")
    return np.array(adjoint_entries((arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1]), scale), dtype=complex)


def killing_gram(scale: Sequence[float] = (1.0, 1.0, 1.0)) -> np.ndarray:
    """Gram matrix of B(X, Y) = 4 tr(XY) on the scaled basis."""
    base = np.array([8.0, 8.0, -8.0])
    return np.diag(base * np.asarray(scale, dtype=float) ** 2)
