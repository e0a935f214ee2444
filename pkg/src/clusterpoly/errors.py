"""Exception types.  Every error carries a JSON-serializable ``witness``."""
from __future__ import annotations


class ClusterError(Exception):
    """Base class; ``code`` is the CLI exit status the error maps to."""

    code = 1

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}

    def diagnostic(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "witness": self.witness}


class InputError(ClusterError):
    pass


class NotSignSkewSymmetric(InputError):
    pass


class SignUndefined(InputError):
    pass


class OutOfScope(InputError):
    pass


class VariableNotInCatalog(InputError):
    pass


class NotDivisible(ClusterError):
    pass


class NotHomogeneous(ClusterError):
    pass


class NotALaurentPolynomial(ClusterError):
    pass


class TermLimitExceeded(ClusterError):
    pass


class DepthExceeded(ClusterError):
    def __init__(self, message: str, witness: dict | None = None, partial=None):
        super().__init__(message, witness)
        self.partial = partial


class DepthBoundNotice(UserWarning):
    """Result was computed on a finite depth-bounded part of an infinite pattern."""


# identity failures: exit status 2
class IdentityViolation(ClusterError):
    code = 2


class RouteMismatch(IdentityViolation):
    pass


class RecurrenceMismatch(IdentityViolation):
    pass


class NegativeA(IdentityViolation):
    pass


class PointOutside(IdentityViolation):
    pass


class InvariantViolation(IdentityViolation):
    pass


class CorrelationAmbiguous(IdentityViolation):
    pass


class FacetNotFound(IdentityViolation):
    pass


class FaceTestFailure(IdentityViolation):
    pass


class ContainmentViolation(IdentityViolation):
    pass


class WellDefinednessViolation(IdentityViolation):
    pass


class ConnectivityViolation(IdentityViolation):
    pass
