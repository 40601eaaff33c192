import logging
from typing import List, Tuple

import numpy as np
import scipy.linalg

from spectravoid.exceptions import InternalInconsistency, StructureViolation
from spectravoid.numkernel import as_matrix, eig_selfadjoint, eig_unitary_angles, svd
from spectravoid.structures.models import (
    Angles,
    CanonicalSpectrum,
    RealEigs,
    SingularValues,
    SkewBlockForm,
    SkewPairs,
    StructureClass,
    StructureKind,
)
from spectravoid.structures.validator import require

logger = logging.getLogger(__name__)

# angles this close to 0 or pi beyond the forced ones are reported as fixed
BOUNDARY_ATOL = 1e-10
# forced +-1 eigenvalues must sit this close to their point
FORCED_ATOL = 1e-8
# real Schur 2x2 blocks are recognised by a subdiagonal above this (relative)
_SCHUR_BLOCK_RTOL = 1e-14


def forced_fixed_counts(n: int, det_sign: int) -> Tuple[int, int]:
    """
    Number of eigenvalues of a real orthogonal matrix forced onto +1 and -1.

    An odd-size matrix with determinant ``d`` always has an eigenvalue ``d``;
    an even-size matrix with determinant -1 always has both +1 and -1.

    Returns
    -------
    Tuple[int, int]
        ``(plus_one, minus_one)`` counts.
    """
    if n % 2 == 1:
        return (1, 0) if det_sign == 1 else (0, 1)
    return (0, 0) if det_sign == 1 else (1, 1)


def _pair_up(sorted_values: np.ndarray) -> np.ndarray:
    return 0.5 * (sorted_values[0::2] + sorted_values[1::2])


def skew_pair_values(A) -> np.ndarray:
    """Nonnegative ``a_i`` of a real skew-symmetric matrix from the Hermitian ``iA``."""
    A = as_matrix(A)
    w, _ = eig_selfadjoint(1j * A)
    magnitudes = np.sort(np.abs(w))
    if A.shape[0] % 2 == 1:
        magnitudes = magnitudes[1:]
    return np.sort(_pair_up(magnitudes))


def orthogonal_angle_pairs(A, structure: StructureClass) -> np.ndarray:
    """
    One angle in [0, pi] per conjugate eigenvalue pair of a real orthogonal matrix.

    The eigenvalues forced onto +1/-1 by the size parity and the determinant
    are removed first; every remaining eigenvalue belongs to a pair
    ``e^{+-i theta}``, including pairs that currently sit on +1 or -1.

    Parameters
    ----------
    A : array_like
        Real orthogonal matrix.
    structure : StructureClass
        Orthogonal class giving the determinant sign.

    Returns
    -------
    np.ndarray
        Ascending pair angles.

    Raises
    ------
    InternalInconsistency
        If a forced eigenvalue is not found within ``1e-8`` of its point.
    """
    phi = np.sort(np.abs(eig_unitary_angles(A)))
    plus, minus = forced_fixed_counts(structure.n, structure.det_sign)
    if plus:
        if phi[0] > FORCED_ATOL:
            raise InternalInconsistency(
                "orthogonal matrix lacks its forced eigenvalue +1",
                {"closest_angle": float(phi[0]), "n": structure.n},
            )
        phi = phi[1:]
    if minus:
        if np.pi - phi[-1] > FORCED_ATOL:
            raise InternalInconsistency(
                "orthogonal matrix lacks its forced eigenvalue -1",
                {"closest_angle": float(phi[-1]), "n": structure.n},
            )
        phi = phi[:-1]
    return np.clip(_pair_up(phi), 0.0, np.pi)


def _orthogonal_spectrum(A: np.ndarray, structure: StructureClass) -> Angles:
    reps = orthogonal_angle_pairs(A, structure)
    plus, minus = forced_fixed_counts(structure.n, structure.det_sign)
    at_plus = reps <= BOUNDARY_ATOL
    at_minus = reps >= np.pi - BOUNDARY_ATOL
    free = reps[~(at_plus | at_minus)]
    return Angles(
        values=free,
        fixed_plus_one=plus + 2 * int(at_plus.sum()),
        fixed_minus_one=minus + 2 * int(at_minus.sum()),
        paired=True,
    )


def canonical_spectrum(A, structure: StructureClass, check: bool = True) -> CanonicalSpectrum:
    """
    Structure-aware canonical spectrum of ``A``.

    Parameters
    ----------
    A : array_like
        Member of ``structure``.
    structure : StructureClass
        The class ``A`` belongs to.
    check : bool
        Validate membership first (default True).

    Returns
    -------
    CanonicalSpectrum
        ``RealEigs`` for (skew-)Hermitian and symmetric classes (imaginary
        parts for skew-Hermitian), ``SkewPairs`` for skew-symmetric,
        ``Angles`` for the group classes and ``SingularValues`` for
        rectangular classes.

    Raises
    ------
    StructureViolation
        If ``check`` is set and ``A`` is not a member of ``structure``.
    InternalInconsistency
        If an orthogonal matrix misses an eigenvalue forced by parity/determinant.
    """
    A = require(A, structure) if check else as_matrix(A)
    kind = structure.kind
    if kind in (StructureKind.SYMMETRIC, StructureKind.HERMITIAN):
        return RealEigs(eig_selfadjoint(A)[0])
    if kind is StructureKind.SKEW_HERMITIAN:
        return RealEigs(eig_selfadjoint(-1j * A)[0])
    if kind is StructureKind.SKEW_SYMMETRIC:
        return SkewPairs(skew_pair_values(A), has_forced_zero=structure.n % 2 == 1)
    if kind is StructureKind.ORTHOGONAL:
        return _orthogonal_spectrum(A, structure)
    if kind is StructureKind.UNITARY:
        return Angles(eig_unitary_angles(A), paired=False)
    return SingularValues(svd(A)[1])


def skew_block_form(A) -> SkewBlockForm:
    """
    Real block diagonal form ``V_tilde A = D_tilde V_tilde`` of a skew-symmetric matrix.

    Built from the real Schur form, which is block diagonal for normal
    matrices. Blocks are sign-normalized so every ``a_i >= 0``, 1x1 zero
    blocks are paired into 2x2 zero blocks, the blocks are sorted ascending
    and the unpaired zero of odd sizes is moved last.

    Parameters
    ----------
    A : array_like
        Real skew-symmetric matrix.

    Returns
    -------
    SkewBlockForm
        Orthogonal ``V_tilde``, ascending nonnegative block values, zero-block flag.

    Raises
    ------
    StructureViolation
        If ``A`` is not real skew-symmetric.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n or n == 0:
        raise StructureViolation("skew_block_form needs a square matrix", details={"shape": A.shape})
    A = require(A, StructureClass(StructureKind.SKEW_SYMMETRIC, n))
    T, Z = scipy.linalg.schur(A, output="real")
    scale = max(float(np.abs(T).max()), np.finfo(float).tiny)

    blocks: List[Tuple[float, np.ndarray]] = []
    singles: List[np.ndarray] = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > _SCHUR_BLOCK_RTOL * scale:
            a = 0.5 * (T[i, i + 1] - T[i + 1, i])
            u, v = Z[:, i], Z[:, i + 1]
            if a < 0:
                a, v = -a, -v
            blocks.append((a, np.column_stack([u, v])))
            i += 2
        else:
            singles.append(Z[:, i])
            i += 1
    while len(singles) >= 2:
        u, v = singles.pop(0), singles.pop(0)
        blocks.append((0.0, np.column_stack([u, v])))

    blocks.sort(key=lambda block: block[0])
    columns = [basis for _, basis in blocks] + [s[:, None] for s in singles]
    Z_sorted = np.hstack(columns) if columns else np.zeros((n, 0))
    return SkewBlockForm(
        V_tilde=Z_sorted.T.copy(),
        block_values=np.array([a for a, _ in blocks]),
        zero_block=bool(singles),
    )
