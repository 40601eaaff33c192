"""
Pfaffians of real skew-symmetric matrices.

``pf(K)**2 == det(K)`` for even-size skew-symmetric ``K``, so the sign
changes of ``pf(A + tB)`` along a skew pencil bracket the parameters where
the pencil has a double zero eigenvalue.
"""

import logging
from typing import List, Tuple

import numpy as np
import scipy.optimize

from spectravoid.exceptions import InvalidInput
from spectravoid.numkernel import as_matrix

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 601
SKEW_RTOL = 1e-10


def _require_even_skew(K) -> np.ndarray:
    K = as_matrix(K)
    n = K.shape[0]
    if K.shape[1] != n or np.iscomplexobj(K):
        raise InvalidInput("Pfaffian needs a real square matrix", {"shape": K.shape})
    if n % 2 == 1:
        raise InvalidInput("Pfaffian needs an even size", {"n": n})
    scale = max(float(np.abs(K).max()), np.finfo(float).tiny)
    if np.abs(K + K.T).max() > SKEW_RTOL * scale:
        raise InvalidInput("matrix is not skew-symmetric")
    return K


def _householder(x: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """
    Reflector ``H = I - tau v v^T`` with ``H x = alpha e_1``.

    Returns ``tau = 0`` when ``x`` is already a multiple of ``e_1``.
    """
    sigma = float(x[1:] @ x[1:])
    if sigma == 0.0:
        return np.zeros_like(x), 0.0, float(x[0])
    norm_x = np.sqrt(x[0] ** 2 + sigma)
    v = x.copy()
    alpha = norm_x if x[0] <= 0 else -norm_x
    v[0] -= alpha
    v /= np.linalg.norm(v)
    return v, 2.0, alpha


def pfaffian(K) -> float:
    """
    Pfaffian of a real even-size skew-symmetric matrix.

    Householder similarities reduce ``K`` to skew tridiagonal form without
    changing the Pfaffian except for one sign flip per reflector; the
    Pfaffian of the tridiagonal matrix is the product of its entries
    ``(0,1), (2,3), ...``. The sign convention is ``pf([[0, a], [-a, 0]]) == a``.

    Parameters
    ----------
    K : array_like
        Real skew-symmetric matrix of even size.

    Returns
    -------
    float
        The Pfaffian.

    Raises
    ------
    InvalidInput
        If ``K`` has odd size or is not real skew-symmetric.
    """
    A = _require_even_skew(K).copy()
    n = A.shape[0]
    if n == 0:
        return 1.0
    value = 1.0
    for i in range(n - 2):
        v, tau, alpha = _householder(A[i + 1 :, i])
        A[i + 1, i] = alpha
        A[i, i + 1] = -alpha
        A[i + 2 :, i] = 0.0
        A[i, i + 2 :] = 0.0
        if tau != 0.0:
            w = tau * (A[i + 1 :, i + 1 :] @ v)
            A[i + 1 :, i + 1 :] += np.outer(v, w) - np.outer(w, v)
            value = -value
        if i % 2 == 0:
            value *= A[i, i + 1]
    return float(value * A[n - 2, n - 1])


def pfaffian_sign_changes(
    pencil: Tuple[np.ndarray, np.ndarray],
    interval: Tuple[float, float],
    grid_points: int = DEFAULT_GRID_POINTS,
) -> List[float]:
    """
    Roots of ``t -> pf(A + tB)`` bracketed by sign changes on a uniform grid.

    Parameters
    ----------
    pencil : Tuple[np.ndarray, np.ndarray]
        Real skew-symmetric ``(A, B)`` of the same even size.
    interval : Tuple[float, float]
        ``(t_min, t_max)``.
    grid_points : int
        Number of grid nodes (at least 2).

    Returns
    -------
    List[float]
        Ascending roots, each refined by bisection to
        ``1e-12 * (t_max - t_min)``. Roots of even multiplicity (touching
        zero without a sign change) are not found.

    Raises
    ------
    InvalidInput
        On non-skew operands, mismatched shapes or a bad grid.
    """
    A = _require_even_skew(pencil[0])
    B = _require_even_skew(pencil[1])
    if A.shape != B.shape:
        raise InvalidInput("pencil operands differ in shape", {"A": A.shape, "B": B.shape})
    t_min, t_max = float(interval[0]), float(interval[1])
    if grid_points < 2 or not t_max > t_min:
        raise InvalidInput(
            "need at least two grid points on a nonempty interval",
            {"grid_points": grid_points, "interval": (t_min, t_max)},
        )

    def pf_at(t: float) -> float:
        return pfaffian(A + t * B)

    grid = np.linspace(t_min, t_max, grid_points)
    values = np.array([pf_at(t) for t in grid])
    xtol = 1e-12 * (t_max - t_min)
    roots: List[float] = []
    for i in range(grid_points - 1):
        left, right = values[i], values[i + 1]
        if left == 0.0:
            roots.append(float(grid[i]))
        elif left * right < 0.0:
            roots.append(float(scipy.optimize.bisect(pf_at, grid[i], grid[i + 1], xtol=xtol)))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    logger.debug("pfaffian sign changes on [%g, %g]: %d roots", t_min, t_max, len(roots))
    return roots
