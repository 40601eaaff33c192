"""
Exponential representation of real orthogonal matrices.

If ``n`` is odd or ``det(X) = 1``, then ``det(X) X`` has determinant 1 and
equals ``expm(K)`` for a real skew-symmetric ``K``. The eigenvector structure
of such orthogonal matrices is therefore that of skew-symmetric ones; even
sizes with determinant -1 have no such representation.
"""

from typing import List

import numpy as np
import scipy.linalg

from spectravoid.exceptions import InternalInconsistency, InvalidInput
from spectravoid.structures.models import StructureClass, StructureKind
from spectravoid.structures.validator import require

# real Schur 2x2 blocks of an orthogonal matrix have a subdiagonal above this
_ROTATION_ATOL = 1e-14


def has_skew_logarithm(structure: StructureClass) -> bool:
    """Whether ``det(X) X = expm(K)`` has a real skew-symmetric solution on ``structure``."""
    return structure.kind is StructureKind.ORTHOGONAL and (
        structure.n % 2 == 1 or structure.det_sign == 1
    )


def _check(structure: StructureClass) -> None:
    if structure.kind is not StructureKind.ORTHOGONAL:
        raise InvalidInput(
            "exponential representation needs an orthogonal class",
            {"structure": structure.describe()},
        )
    if not has_skew_logarithm(structure):
        raise InvalidInput(
            "even-size orthogonal matrices with determinant -1 are not det(X) X = expm(K)",
            {"structure": structure.describe()},
        )


def orthogonal_exponential(K, structure: StructureClass) -> np.ndarray:
    """
    Orthogonal matrix ``det_sign * expm(K)`` of ``structure``.

    Parameters
    ----------
    K : array_like
        Real skew-symmetric ``n x n`` matrix.
    structure : StructureClass
        Orthogonal class with odd ``n`` or determinant +1.

    Returns
    -------
    np.ndarray
        A member of ``structure``.

    Raises
    ------
    InvalidInput
        If ``structure`` has even size and determinant -1, or is not orthogonal.
    StructureViolation
        If ``K`` is not real skew-symmetric of size ``n``.
    """
    _check(structure)
    K = require(K, StructureClass(StructureKind.SKEW_SYMMETRIC, structure.n))
    return structure.det_sign * scipy.linalg.expm(K)


def orthogonal_logarithm(X, structure: StructureClass) -> np.ndarray:
    """
    Real skew-symmetric ``K`` with ``expm(K) = det(X) X``.

    Read off the real Schur form of ``det(X) X``, which is block diagonal with
    rotation blocks and 1x1 blocks equal to +1 or -1. A rotation by ``theta``
    contributes ``[[0, -theta], [theta, 0]]``; the -1 entries come in pairs
    and each pair becomes a rotation by ``pi``.

    Parameters
    ----------
    X : array_like
        Member of ``structure``.
    structure : StructureClass
        Orthogonal class with odd ``n`` or determinant +1.

    Returns
    -------
    np.ndarray
        Real skew-symmetric logarithm with eigenvalues in ``i[-pi, pi]``.

    Raises
    ------
    InvalidInput
        If ``structure`` has even size and determinant -1, or is not orthogonal.
    StructureViolation
        If ``X`` is not a member of ``structure``.
    InternalInconsistency
        If an odd number of eigenvalues -1 remains after scaling by the determinant.
    """
    _check(structure)
    Y = structure.det_sign * require(X, structure)
    n = structure.n
    T, Z = scipy.linalg.schur(Y, output="real")

    log_T = np.zeros((n, n))
    minus_one: List[int] = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > _ROTATION_ATOL:
            theta = np.arctan2(T[i + 1, i] - T[i, i + 1], T[i, i] + T[i + 1, i + 1])
            log_T[i, i + 1], log_T[i + 1, i] = -theta, theta
            i += 2
            continue
        if T[i, i] < 0.0:
            minus_one.append(i)
        i += 1
    if len(minus_one) % 2:
        raise InternalInconsistency(
            "unpaired eigenvalue -1 in an orthogonal matrix of determinant 1",
            {"structure": structure.describe()},
        )
    for i, j in zip(minus_one[0::2], minus_one[1::2]):
        log_T[i, j], log_T[j, i] = -np.pi, np.pi

    K = Z @ log_T @ Z.T
    return 0.5 * (K - K.T)
