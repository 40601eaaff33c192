"""
Dense spectral kernels shared by every other module.

Matrices are plain two-dimensional numpy arrays: ``float64`` arrays are
real-field matrices, ``complex128`` arrays are complex-field matrices. The
kernels wrap LAPACK through ``scipy.linalg`` and add the input checks and
phase conventions the rest of the package relies on.
"""

import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from spectravoid.exceptions import InvalidInput, SingularInput, StructureViolation

logger = logging.getLogger(__name__)

STRUCTURE_RTOL = 1e-10
SELFADJOINT_RTOL = 1e-12
UNITARY_ATOL = 1e-10
SINGULAR_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """
    Converts ``A`` to a finite two-dimensional float64 or complex128 array.

    Complex input whose imaginary part is exactly zero everywhere is kept
    complex; the field is decided by dtype, not by values.

    Parameters
    ----------
    A : array_like
        Matrix entries.

    Returns
    -------
    np.ndarray
        A copy-free view when possible, with dtype float64 or complex128.

    Raises
    ------
    InvalidInput
        If ``A`` is not two-dimensional or holds NaN/Inf entries.
    """
    arr = np.asarray(A)
    if arr.ndim != 2:
        raise InvalidInput("matrix must be two-dimensional", {"ndim": arr.ndim})
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix has non-finite entries", {"shape": arr.shape})
    return arr


def is_real_field(A: np.ndarray) -> bool:
    """True when ``A`` has a real dtype, so real LAPACK drivers apply."""
    return not np.iscomplexobj(A)


def wrap_angle(theta):
    """Maps angles into the half-open interval (-pi, pi]."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped <= -np.pi, wrapped + 2.0 * np.pi, wrapped)


def _require_square(A: np.ndarray, error=StructureViolation) -> int:
    rows, cols = A.shape
    if rows != cols:
        raise error("matrix must be square", details={"shape": A.shape})
    return rows


def qr_decompose(A) -> Tuple[np.ndarray, np.ndarray]:
    """
    Thin QR factorization with a real nonnegative diagonal in ``R``.

    The phase of every column of ``Q`` is fixed so that ``diag(R) >= 0``,
    which makes the QR factor of a Gaussian matrix Haar distributed.

    Parameters
    ----------
    A : array_like
        An ``m x n`` matrix with ``m >= n``.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        ``Q`` (``m x n``, orthonormal columns) and ``R`` (``n x n`` upper triangular).

    Raises
    ------
    InvalidInput
        If the matrix has fewer rows than columns or non-finite entries.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    if rows < cols:
        raise InvalidInput("qr_decompose needs rows >= cols", {"shape": A.shape})
    Q, R = scipy.linalg.qr(A, mode="economic")
    d = np.diag(R)
    magnitude = np.abs(d)
    phase = np.ones_like(d)
    nonzero = magnitude > 0
    phase[nonzero] = d[nonzero] / magnitude[nonzero]
    Q = Q * phase
    R = np.conj(phase)[:, None] * R
    if is_real_field(A):
        Q, R = Q.real, R.real
    return Q, R


def eig_selfadjoint(A) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a real symmetric or complex Hermitian matrix.

    Parameters
    ----------
    A : array_like
        Square self-adjoint matrix.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        Ascending real eigenvalues and the unitary matrix of eigenvectors
        (columns), so that ``A @ V == V @ diag(w)``.

    Raises
    ------
    StructureViolation
        If ``A`` is not square or deviates from self-adjointness by more
        than ``1e-12 * ||A||_F``.
    """
    A = as_matrix(A)
    _require_square(A)
    scale = np.linalg.norm(A)
    violation = np.linalg.norm(A - A.conj().T)
    if violation > SELFADJOINT_RTOL * max(scale, np.finfo(float).tiny):
        raise StructureViolation("matrix is not self-adjoint", violation=violation)
    w, V = scipy.linalg.eigh(0.5 * (A + A.conj().T))
    return w, V


def eig_unitary_angles(U) -> np.ndarray:
    """
    Eigenvalue arguments of a unitary (or real orthogonal) matrix.

    A unitary matrix is normal, so its complex Schur form is diagonal up to
    rounding and the arguments of the diagonal are the eigen-angles.

    Parameters
    ----------
    U : array_like
        Square matrix with ``||U* U - I|| <= 1e-10``.

    Returns
    -------
    np.ndarray
        Angles in (-pi, pi], sorted ascending.

    Raises
    ------
    StructureViolation
        If ``U`` is not square or not unitary within tolerance.
    """
    U = as_matrix(U)
    n = _require_square(U)
    violation = np.linalg.norm(U.conj().T @ U - np.eye(n), 2)
    if violation > UNITARY_ATOL:
        raise StructureViolation("matrix is not unitary", violation=violation)
    T, _ = scipy.linalg.schur(U.astype(np.complex128), output="complex")
    return np.sort(wrap_angle(np.angle(np.diag(T))))


def svd(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Thin singular value decomposition ``A = U diag(s) V*``.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, np.ndarray]
        ``U``, descending singular values ``s`` and ``V`` (not ``V*``).
    """
    A = as_matrix(A)
    U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    return U, s, Vh.conj().T


def polar_unitary_factor(A) -> np.ndarray:
    """
    Unitary factor ``U_p`` of the right polar decomposition ``A = U_p P``.

    Parameters
    ----------
    A : array_like
        Square nonsingular matrix.

    Returns
    -------
    np.ndarray
        The unitary (real orthogonal for real input) polar factor.

    Raises
    ------
    SingularInput
        If the smallest singular value is below ``1e-12 * ||A||_2``.
    """
    A = as_matrix(A)
    _require_square(A, error=InvalidInput)
    s = scipy.linalg.svdvals(A)
    if s.size == 0 or s[-1] <= SINGULAR_RTOL * s[0]:
        raise SingularInput(
            "polar factor requested for a numerically singular matrix",
            {"sigma_min": float(s[-1]) if s.size else 0.0},
        )
    U_p, _ = scipy.linalg.polar(A, side="right")
    return U_p
