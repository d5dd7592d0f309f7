"""All complex roots of an exact polynomial, with multiplicities.

Multiplicities come from the exact square-free decomposition, never from
clustering.  Each square-free factor is solved by Aberth-Ehrlich iteration
in double precision and then polished by Newton's method, either in double
precision or in ~32-digit arithmetic (``precision="dd"``) via mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import ConvergenceFailure, PairingFailure
from .exactpoly import ExactPolynomial, square_free_decomposition

__all__ = [
    "Root",
    "RootSet",
    "ReciprocalPairing",
    "find_roots",
    "pair_reciprocal_roots",
    "precision_bits",
    "fujiwara_bound",
]

ABERTH_SWEEPS = 200
NEWTON_STEPS = 50
RESIDUAL_GATE = 1e-12
DD_BITS = 106
PRECISIONS = ("auto", "dd", "double")


def precision_bits(precision: str) -> int:
    """Working precision in bits for a precision profile name."""
    if precision not in PRECISIONS:
        raise ValueError(f"unknown precision profile {precision!r}")
    return 53 if precision == "double" else DD_BITS


@dataclass(frozen=True)
class Root:
    value: mpmath.mpc
    multiplicity: int
    residual: float

    @property
    def z(self) -> complex:
        return complex(self.value)

    def to_json(self) -> dict:
        return {
            "re": float(f"{float(self.value.real):.17g}"),
            "im": float(f"{float(self.value.imag):.17g}"),
            "mult": self.multiplicity,
            "residual": float(f"{self.residual:.17g}"),
        }


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]
    degree: int
    precision: str = "auto"

    def values(self) -> list[mpmath.mpc]:
        return [r.value for r in self.roots]

    def with_multiplicity(self) -> list[mpmath.mpc]:
        return [r.value for r in self.roots for _ in range(r.multiplicity)]

    def simple(self) -> list[Root]:
        return [r for r in self.roots if r.multiplicity == 1]

    @property
    def worst_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.roots]


def fujiwara_bound(coeffs: Sequence[complex]) -> float:
    """Fujiwara's upper bound on root moduli (coefficients ascending)."""
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    terms = [abs(coeffs[n - i] / lead) ** (1.0 / i) for i in range(1, n)]
    terms.append(abs(coeffs[0] / (2 * lead)) ** (1.0 / n))
    return 2.0 * max(terms) if terms else 1.0


def _initial_guesses(coeffs: np.ndarray, attempt: int) -> np.ndarray:
    n = len(coeffs) - 1
    upper = fujiwara_bound(coeffs)
    lower = 1.0 / fujiwara_bound(coeffs[::-1])
    # inner and outer circle, interleaved, rotated off the real axis
    radii = np.where(np.arange(n) % 2 == 0, 0.5 * (upper + 1.0), 0.5 * (lower + 1.0))
    offset = 0.4 + 0.37 * attempt
    theta = 2.0 * np.pi * (np.arange(n) + offset) / n
    return radii * np.exp(1j * theta)


def _aberth(coeffs: np.ndarray, attempt: int) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich sweeps; converged roots are frozen."""
    desc = coeffs[::-1]
    ddesc = np.polyder(desc)
    z = _initial_guesses(coeffs, attempt)
    n = len(z)
    active = np.ones(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for _ in range(ABERTH_SWEEPS):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        zk = z[idx]
        pk = np.polyval(desc, zk)
        dk = np.polyval(ddesc, zk)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(dk != 0, pk / dk, 1e-3)
            diff = zk[:, None] - z[None, :]
            diff[eye[idx]] = np.inf
            s = np.sum(1.0 / diff, axis=1)
            step = w / (1.0 - w * s)
        step = np.where(np.isfinite(step), step, 0.0)
        z[idx] = zk - step
        done = (np.abs(step) <= 4e-16 * np.maximum(1.0, np.abs(z[idx]))) | (pk == 0)
        active[idx[done]] = False
    return z


def _relative_residual(desc_abs, value: complex | mpmath.mpc, fz) -> float:
    r = abs(value)
    scale = mpmath.polyval(desc_abs, r) if isinstance(fz, mpmath.mpc) else np.polyval(desc_abs, r)
    return float(abs(fz) / scale) if scale else float(abs(fz))


def _polish(fac: ExactPolynomial, approx: np.ndarray, bits: int) -> list[tuple[mpmath.mpc, float]]:
    coeffs = list(fac.dense())
    out = []
    if bits <= 53:
        desc = np.array([float(c) for c in reversed(coeffs)], dtype=complex)
        ddesc = np.polyder(desc)
        dabs = np.abs(desc)
        z = np.array(approx, dtype=complex)
        active = np.ones(len(z), dtype=bool)
        for _ in range(NEWTON_STEPS):
            if not active.any():
                break
            idx = np.nonzero(active)[0]
            f = np.polyval(desc, z[idx])
            d = np.polyval(ddesc, z[idx])
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(d != 0, f / d, 0.0)
            z[idx] -= step
            active[idx[np.abs(step) <= 4e-16 * np.maximum(1.0, np.abs(z[idx]))]] = False
        res = np.abs(np.polyval(desc, z)) / np.maximum(np.polyval(dabs, np.abs(z)), 1e-300)
        return [(mpmath.mpc(complex(v)), float(r)) for v, r in zip(z, res)]
    with mpmath.workprec(bits):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        dabs = [abs(c) for c in desc]
        tol = mpmath.mpf(2) ** (-bits + 4)
        for z in approx:
            z = mpmath.mpc(complex(z))
            for _ in range(NEWTON_STEPS):
                f, d = mpmath.polyval(desc, z, derivative=True)
                if d == 0:
                    break
                step = f / d
                z -= step
                if abs(step) <= tol * max(1, abs(z)):
                    break
            f = mpmath.polyval(desc, z)
            out.append((+z, _relative_residual(dabs, z, mpmath.mpc(f))))
    return out


def _solve_square_free(fac: ExactPolynomial, bits: int) -> list[tuple[mpmath.mpc, float]]:
    coeffs = fac.dense()
    n = len(coeffs) - 1
    if n == 1:
        with mpmath.workprec(bits):
            r = -Fraction(coeffs[0]) / coeffs[1]
            return [(mpmath.mpc(mpmath.mpf(r.numerator) / r.denominator), 0.0)]
    # scale so that the float conversion is safe for large integer coefficients
    top = max(abs(c) for c in coeffs)
    fl = np.array([float(c / top) for c in coeffs], dtype=complex)
    worst = math.inf
    for attempt in range(4):
        approx = _aberth(fl, attempt)
        roots = _polish(fac, approx, bits)
        worst = max(r for _, r in roots)
        vals = np.array([complex(v) for v, _ in roots])
        sep = min(
            (abs(vals[i] - vals[j]) / max(1.0, abs(vals[i])) for i in range(n) for j in range(i)),
            default=1.0,
        )
        if worst <= RESIDUAL_GATE and sep > 1e-10:
            return roots
    raise ConvergenceFailure(f"no convergence for a degree-{n} factor", worst)


def _order_key(z: mpmath.mpc) -> tuple[float, float]:
    zc = complex(z)
    return (round(abs(zc), 12), round(math.atan2(zc.imag, zc.real), 12))


def find_roots(p: ExactPolynomial, precision: str = "auto") -> RootSet:
    """All nonzero roots of the stored part of p, with exact multiplicities."""
    if p.is_zero or p.span < 1:
        raise ValueError("need a polynomial of positive degree")
    bits = precision_bits(precision)
    roots: list[Root] = []
    for fac, mult in square_free_decomposition(p):
        for value, res in _solve_square_free(fac, bits):
            roots.append(Root(value, mult, res))
    roots.sort(key=lambda r: _order_key(r.value))
    total = sum(r.multiplicity for r in roots)
    if total != p.span:  # pragma: no cover - guaranteed by the decomposition
        raise ConvergenceFailure("multiplicities do not add up to the degree", math.inf)
    return RootSet(tuple(roots), p.span, precision)


@dataclass(frozen=True)
class ReciprocalPairing:
    pairs: tuple[tuple[mpmath.mpc, mpmath.mpc], ...]
    self_paired: tuple[mpmath.mpc, ...] = field(default=())


def pair_reciprocal_roots(rs: RootSet, tol: float = 1e-9) -> ReciprocalPairing:
    """Match every root (with multiplicity) to its reciprocal.

    Roots equal to their own reciprocal (a = +-1) are reported separately.
    """
    pool = [complex(v) for v in rs.with_multiplicity()]
    hp = list(rs.with_multiplicity())
    used = [False] * len(pool)
    pairs = []
    selfp = []
    for i, a in enumerate(pool):
        if used[i]:
            continue
        used[i] = True
        if abs(a * a - 1) <= tol:
            selfp.append(hp[i])
            continue
        target = 1 / a
        best, bestd = None, math.inf
        for j, b in enumerate(pool):
            if not used[j]:
                d = abs(b - target) / max(1.0, abs(target))
                if d < bestd:
                    best, bestd = j, d
        if best is None or bestd > tol:
            raise PairingFailure(f"root {a} has no reciprocal partner (closest distance {bestd:.3e})")
        used[best] = True
        pairs.append((hp[i], hp[best]))
    # self-paired roots come in matching multiplicity; keep them once per occurrence
    return ReciprocalPairing(tuple(pairs), tuple(selfp))
