"""Exception hierarchy.

Every error carries the process exit code the CLI reports for it:
1 invalid input or configuration, 2 hypothesis violation, 3 non-convergence.
"""
from typing import Any, Optional


class ConeStabError(Exception):
    """Base class for all conestab errors."""

    exit_code = 1
    kind = "error"

    def to_dict(self) -> dict:
        """Convert to a structured failure entry."""
        return {"error": self.kind, "message": str(self), "exit_code": self.exit_code}


class InstanceMismatchError(ConeStabError, ValueError):
    """Elements from different cone instances were combined."""

    kind = "instance mismatch"


class InvalidScalarError(ConeStabError, ValueError):
    """A scalar outside the admissible range (e.g. negative) was supplied."""

    kind = "invalid scalar"


class ConfigError(ConeStabError):
    """Configuration could not be loaded or validated."""

    kind = "invalid config"


class DomainError(ConeStabError, KeyError):
    """A map was evaluated outside its sampled domain."""

    kind = "domain"

    def __str__(self) -> str:
        # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class NotUcConeError(ConeStabError):
    """Operation needs a uc-cone (single generating element)."""

    kind = "not a uc-cone"


class NotVectorSpaceError(ConeStabError):
    """Operation needs a target cone that is also a real vector space."""

    kind = "not a vector space"


class HypothesisViolationError(ConeStabError):
    """The approximate Pexider hypothesis does not hold on the sample."""

    exit_code = 2
    kind = "hypothesis violation"

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class UnboundedValueError(ConeStabError):
    """A value that must be bounded (e.g. f(0)) is not."""

    exit_code = 2
    kind = "unbounded value"


class InstanceArithmeticError(ConeStabError):
    """An inequality implied by the hypothesis failed to hold."""

    exit_code = 2
    kind = "instance arithmetic"

    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness or {}


class CandidateRejectedError(ConeStabError):
    """A uniqueness candidate is not additive or not inside the sandwich."""

    exit_code = 2
    kind = "candidate rejected"


class NonConvergenceError(ConeStabError):
    """The dyadic iteration did not settle inside its certified bound."""

    exit_code = 3
    kind = "non-convergence"

    def __init__(self, message: str, final_residual: Any = None):
        super().__init__(message)
        self.final_residual = final_residual
