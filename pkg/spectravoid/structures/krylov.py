"""
Krylov diagnostic for symmetric tridiagonal matrices.

If ``A`` is symmetric tridiagonal with left eigendecomposition ``V A = D V``
(``V`` orthogonal, ``D`` diagonal), the leading columns of ``V`` span the
Krylov spaces of ``D`` started from the first column ``v_1``. This is the
relation that pins the whole eigenvector matrix once ``v_1`` is chosen.
"""

import numpy as np
import scipy.linalg

from spectravoid.exceptions import DegenerateInput, InvalidInput
from spectravoid.numkernel import as_matrix, eig_selfadjoint

KRYLOV_ANGLE_TOL = 1e-8
DEGENERACY_RTOL = 1e-10


def _orthonormal_krylov_basis(D: np.ndarray, v1: np.ndarray) -> np.ndarray:
    # Lanczos with full reorthogonalization keeps the basis orthonormal.
    n = v1.size
    Q = np.zeros((n, n))
    Q[:, 0] = v1 / np.linalg.norm(v1)
    for j in range(1, n):
        w = D * Q[:, j - 1]
        for _ in range(2):
            w -= Q[:, :j] @ (Q[:, :j].T @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise DegenerateInput("Krylov space collapsed", {"dimension": j})
        Q[:, j] = w / norm
    return Q


def verify_krylov_span(A, tol: float = KRYLOV_ANGLE_TOL) -> bool:
    """
    Checks ``span(V[:, :j]) == span(v1, D v1, ..., D^{j-1} v1)`` for every ``j``.

    Parameters
    ----------
    A : array_like
        Real symmetric tridiagonal matrix with nonzero off-diagonal and
        distinct eigenvalues.
    tol : float
        Largest principal angle accepted between the two subspaces.

    Returns
    -------
    bool
        True iff every principal angle is at most ``tol``.

    Raises
    ------
    InvalidInput
        If ``A`` is not real symmetric tridiagonal.
    DegenerateInput
        If an off-diagonal entry vanishes or two eigenvalues coincide
        within ``1e-10 * ||A||``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n or np.iscomplexobj(A):
        raise InvalidInput("verify_krylov_span needs a real square matrix", {"shape": A.shape})
    if np.abs(A - np.triu(np.tril(A, 1), -1)).max() > 0 or np.abs(A - A.T).max() > 0:
        raise InvalidInput("matrix is not symmetric tridiagonal")
    scale = np.linalg.norm(A, 2)
    off = np.abs(np.diag(A, 1))
    if off.size and off.min() <= DEGENERACY_RTOL * scale:
        raise DegenerateInput("tridiagonal matrix has a vanishing off-diagonal entry")
    d, W = eig_selfadjoint(A)
    if n > 1 and np.diff(d).min() <= DEGENERACY_RTOL * scale:
        raise DegenerateInput("tridiagonal matrix has a repeated eigenvalue")

    V = W.T
    K = _orthonormal_krylov_basis(d, V[:, 0])
    worst = 0.0
    for j in range(1, n + 1):
        angles = scipy.linalg.subspace_angles(V[:, :j], K[:, :j])
        worst = max(worst, float(np.max(angles)))
    return worst <= tol
