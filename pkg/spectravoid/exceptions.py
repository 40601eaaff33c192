from typing import Any, Dict, Optional


class SpectravoidError(Exception):
    """
    Base class for every error raised by spectravoid.

    Attributes
    ----------
    message : str
        Human readable description of the failure.
    details : Dict[str, Any]
        Optional structured context (sizes, tolerances, offending values).

    Methods
    -------
    __str__():
        Returns a formatted string representation of the error.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        Initializes the error with a message and optional details.

        Parameters
        ----------
        message : str
            Human readable description of the failure.
        details : Optional[Dict[str, Any]]
            Structured context attached to the error.
        """
        self.message = message
        self.details = dict(details or {})
        super().__init__(self.__str__())

    def __str__(self):
        """
        Returns a formatted string representation of the error.

        Returns
        -------
        str
            A string representation of the error.
        """
        if not self.details:
            return f"{type(self).__name__}: {self.message}"
        context = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{type(self).__name__}: {self.message} ({context})"


class InvalidInput(SpectravoidError, ValueError):
    """Malformed arguments: wrong shape, non-finite entries, bad flags."""


class StructureViolation(SpectravoidError):
    """
    A matrix does not satisfy the defining relation of its structure class.

    Attributes
    ----------
    violation : float
        Magnitude of the largest violation that was measured.
    """

    def __init__(
        self,
        message: str,
        violation: float = float("nan"),
        details: Optional[Dict[str, Any]] = None,
    ):
        self.violation = violation
        super().__init__(message, {"violation": violation, **(details or {})})


class SingularInput(SpectravoidError):
    """A square matrix is numerically singular where a nonsingular one is required."""


class DegenerateInput(SpectravoidError):
    """Input lies on an excluded degenerate set (zero couplings, repeated eigenvalues)."""


class InsufficientData(SpectravoidError):
    """Too few or unusable samples for a statistical estimate."""


class InternalError(SpectravoidError):
    """A guarantee of the library itself was broken."""


class InternalInconsistency(InternalError):
    """Computed spectral data contradicts a structural theorem (parity, determinant)."""
