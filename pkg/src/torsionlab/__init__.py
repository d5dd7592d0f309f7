"""Adjoint Reidemeister torsion of Dehn surgeries on the 4_1 and 5_2 knots.

The package computes the SL2(C) character varieties of the surgeries, the
adjoint torsion at every character (from closed forms and from the twisted
cochain complex), and checks the vanishing identity and related statements
about sums of torsions, numerically and in exact arithmetic.
"""

from .exactpoly import ExactPolynomial
from .presentation import Family, build_presentation
from .rootfind import find_roots
from .torsion import torsion_chain_complex, torsion_closed_form, torsion_records
from .variety import build_qm, reconstruct_representation, variety_points

__version__ = "0.1.0"

__all__ = [
    "ExactPolynomial",
    "Family",
    "build_presentation",
    "build_qm",
    "find_roots",
    "reconstruct_representation",
    "torsion_chain_complex",
    "torsion_closed_form",
    "torsion_records",
    "variety_points",
]
