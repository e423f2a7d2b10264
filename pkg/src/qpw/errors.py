"""Exception hierarchy shared by the whole package.

Everything user-facing raises a subclass of ``QPWError`` so the CLI and the
HTTP service can map domain problems to exit code 1 / status 422 uniformly,
keeping genuine bugs (plain exceptions) distinguishable.
"""

from __future__ import annotations

__all__ = [
    "QPWError",
    "InvalidQuiver",
    "VertexOutOfRange",
    "TwoCycleObstruction",
    "InvalidPotential",
    "InvalidSubstitution",
    "BudgetExceeded",
    "SizeGuardExceeded",
    "CapExceeded",
    "NotReduced",
    "UndeterminedTruncation",
    "ThetaInfeasible",
    "BadInput",
    "LiftVerificationError",
]


class QPWError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidQuiver(QPWError):
    """Matrix not skew-symmetric, loops present, bad arrow endpoints, ..."""


class VertexOutOfRange(QPWError, IndexError):
    pass


class TwoCycleObstruction(QPWError):
    """Mutation requested at a vertex lying on a 2-cycle."""


class InvalidPotential(QPWError):
    """A cycle term is not a closed path of the quiver."""


class InvalidSubstitution(QPWError):
    """Right equivalence with mismatched endpoints or a singular linear part."""


class BudgetExceeded(QPWError):
    """A breadth-first exploration ran past its node budget."""


class SizeGuardExceeded(QPWError):
    """Path enumeration grew past the configured cap."""


class CapExceeded(QPWError):
    """Submodule or representation enumeration outside supported sizes."""


class NotReduced(QPWError):
    """An operation that requires a reduced potential got a non-reduced one."""


class UndeterminedTruncation(QPWError):
    """Finite-dimensionality could not be certified at the truncation degree."""


class ThetaInfeasible(QPWError):
    """No integer stability vector exists within the search bound."""


class BadInput(QPWError):
    """Malformed JSON document (wire format violation)."""


class LiftVerificationError(QPWError):
    """A zero-extended witness instance failed its from-scratch re-check.

    This is never swallowed: it means either the construction or the
    verification is wrong, and the certificate must not be emitted.
    """
