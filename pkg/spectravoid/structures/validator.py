from typing import List, Tuple

import numpy as np

from spectravoid.exceptions import InvalidInput, StructureViolation
from spectravoid.numkernel import STRUCTURE_RTOL, as_matrix
from spectravoid.structures.models import StructureClass, StructureKind, Validation


class StructureValidator:
    """
    Checks matrices against the defining relations of a structure class.

    Every check returns the magnitude of its violation; a matrix is valid when
    each magnitude stays below ``1e-10`` relative to the largest entry (or
    absolute for the unit-scale group relations).

    Methods
    -------
    validate(A: np.ndarray, structure: StructureClass) -> Validation
        Runs every check relevant to ``structure``.
    require(A: np.ndarray, structure: StructureClass) -> np.ndarray
        Same as validate but raises StructureViolation on failure.
    """

    def __init__(self, rtol: float = STRUCTURE_RTOL):
        self.rtol = rtol

    def validate(self, A, structure: StructureClass) -> Validation:
        """
        Validates ``A`` against ``structure``.

        Parameters
        ----------
        A : array_like
            Candidate matrix.
        structure : StructureClass
            The class it should belong to.

        Returns
        -------
        Validation
            Verdict, largest violation magnitude and the failed relations.

        Raises
        ------
        InvalidInput
            If the shape of ``A`` does not match the class.
        """
        A = as_matrix(A)
        if A.shape != structure.shape:
            raise InvalidInput(
                "matrix shape does not match structure class",
                {"shape": A.shape, "expected": structure.shape},
            )
        scale = max(float(np.abs(A).max()) if A.size else 0.0, np.finfo(float).tiny)
        checks: List[Tuple[str, float, float]] = []
        if structure.is_real:
            checks.append(("real field", self._imaginary_part(A), 0.0))
        kind = structure.kind
        if kind in (StructureKind.SYMMETRIC, StructureKind.HERMITIAN):
            checks.append(("self-adjoint", self._adjoint_defect(A, +1), self.rtol * scale))
        elif kind in (StructureKind.SKEW_SYMMETRIC, StructureKind.SKEW_HERMITIAN):
            checks.append(("skew-adjoint", self._adjoint_defect(A, -1), self.rtol * scale))
        elif kind in (StructureKind.ORTHOGONAL, StructureKind.UNITARY):
            checks.append(("unitary", self._unitary_defect(A), self.rtol))
            if kind is StructureKind.ORTHOGONAL:
                checks.append(
                    ("determinant", self._determinant_defect(A, structure.det_sign), self.rtol)
                )
        if structure.effective_bandwidth is not None:
            checks.append(
                ("band pattern", self._band_defect(A, structure.bandwidth), self.rtol * scale)
            )
        failed = tuple(name for name, value, tol in checks if value > tol)
        violation = max((value for _, value, _ in checks), default=0.0)
        return Validation(valid=not failed, violation=violation, reasons=failed)

    def require(self, A, structure: StructureClass) -> np.ndarray:
        """
        Validates ``A`` and returns it as an array.

        Raises
        ------
        StructureViolation
            If any defining relation fails.
        """
        A = as_matrix(A)
        result = self.validate(A, structure)
        if not result.valid:
            raise StructureViolation(
                f"matrix is not {structure.describe()}",
                violation=result.violation,
                details={"failed": ", ".join(result.reasons)},
            )
        return A

    def _imaginary_part(self, A: np.ndarray) -> float:
        if not np.iscomplexobj(A) or A.size == 0:
            return 0.0
        return float(np.abs(A.imag).max())

    def _adjoint_defect(self, A: np.ndarray, sign: int) -> float:
        return float(np.abs(A - sign * A.conj().T).max())

    def _unitary_defect(self, A: np.ndarray) -> float:
        n = A.shape[0]
        return float(np.abs(A.conj().T @ A - np.eye(n)).max())

    def _determinant_defect(self, A: np.ndarray, det_sign: int) -> float:
        return float(abs(np.linalg.det(A) - det_sign))

    def _band_defect(self, A: np.ndarray, bandwidth: int) -> float:
        outside = A - np.triu(np.tril(A, bandwidth), -bandwidth)
        return float(np.abs(outside).max()) if outside.size else 0.0


_DEFAULT_VALIDATOR = StructureValidator()


def validate(A, structure: StructureClass) -> Validation:
    """Module-level shortcut for ``StructureValidator().validate``."""
    return _DEFAULT_VALIDATOR.validate(A, structure)


def require(A, structure: StructureClass) -> np.ndarray:
    """
    Returns ``A`` as an array if it is a member of ``structure``.

    Raises
    ------
    StructureViolation
        With the violation magnitude and the failed checks otherwise.
    """
    return _DEFAULT_VALIDATOR.require(A, structure)
