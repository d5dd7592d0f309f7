"""Exception hierarchy shared by all torsionlab modules."""

from __future__ import annotations


class TorsionLabError(Exception):
    """Base class for every error raised by the library."""


class NotDivisible(TorsionLabError, ArithmeticError):
    """Exact division left a nonzero remainder."""

    def __init__(self, remainder, message: str | None = None):
        self.remainder = remainder
        super().__init__(message or f"nonzero remainder {remainder}")


class NotCoprime(TorsionLabError, ArithmeticError):
    """A modular inverse was requested for a non-unit."""


class ConvergenceFailure(TorsionLabError):
    """Root iteration hit its cap without meeting the residual gate."""

    def __init__(self, message: str, worst_residual: float):
        self.worst_residual = worst_residual
        super().__init__(f"{message} (worst residual {worst_residual:.3e})")


class PairingFailure(TorsionLabError):
    """A root has no reciprocal partner within tolerance."""


class UnsupportedFamily(TorsionLabError, ValueError):
    """Surgery family or parameter outside the implemented scope."""


class NoValidSign(TorsionLabError):
    """Neither branch of the square root yields a representation."""


class NewtonDivergence(TorsionLabError):
    """Representation solver failed from every seed."""


class BranchDomain(TorsionLabError, ValueError):
    """A closed form was requested at a point where it does not apply."""


class DerivativeVanishes(TorsionLabError, ArithmeticError):
    """The derivative of the defining polynomial vanishes at the point."""


class NotAcyclic(TorsionLabError):
    """The twisted cochain complex has homology within tolerance."""


class ChainConditionViolated(TorsionLabError):
    """Consecutive differentials do not compose to zero."""
