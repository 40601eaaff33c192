"""
One-parameter curves that stay on a structure manifold.

Linear structures use pencils ``A0 + t A1``. Unitary and orthogonal
structures use the polar path (unitary polar factor of ``Q0 (I + tS)``, well
defined for every real ``t`` because every singular value of ``I + tS`` is at
least 1), the Cayley path ``(I - iH(t))(I + iH(t))^{-1}`` which never reaches
the eigenvalue -1, or the exponential path ``exp(iH(t))`` whose eigenvalues
collide whenever two eigenvalues of ``H(t)`` differ by a multiple of 2 pi.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Tuple

import numpy as np
import scipy.linalg

from spectravoid.exceptions import InternalError, InvalidInput, SingularInput
from spectravoid.numkernel import as_matrix, eig_selfadjoint, polar_unitary_factor
from spectravoid.structures.models import StructureClass, StructureKind
from spectravoid.structures.sampler import RandomSource, sample
from spectravoid.structures.validator import require

logger = logging.getLogger(__name__)

DOMAIN_SLACK = 1e-12


class CurveKind(Enum):
    LINEAR_PENCIL = "pencil"
    POLAR_PATH = "polar"
    CAYLEY_PATH = "cayley"
    EXP_PATH = "exp"


EXP_PATH_WARNING = (
    "exponential path: eigenvalues collide whenever eigenvalues of H(t) differ "
    "by a multiple of 2*pi; these crossings are an artifact of the construction"
)


@dataclass(frozen=True, eq=False)
class MatrixCurve:
    """
    A curve ``t -> A(t)`` on one structure manifold.

    Attributes
    ----------
    structure : StructureClass
        Manifold the curve lives on.
    kind : CurveKind
        Construction of the curve.
    base : np.ndarray
        ``A0`` (pencil), ``Q0`` (polar) or ``H0`` (Cayley / exponential).
    direction : np.ndarray
        ``A1`` (pencil), ``S`` (polar) or ``H1`` (Cayley / exponential).
    domain : Tuple[float, float]
        Parameter interval ``[t_min, t_max]``.
    """

    structure: StructureClass
    kind: CurveKind
    base: np.ndarray
    direction: np.ndarray
    domain: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        t_min, t_max = self.domain
        if not t_max > t_min:
            raise InvalidInput("curve domain must be a nonempty interval", {"domain": self.domain})
        checker = {
            CurveKind.LINEAR_PENCIL: self._check_pencil,
            CurveKind.POLAR_PATH: self._check_polar,
            CurveKind.CAYLEY_PATH: self._check_hermitian_pair,
            CurveKind.EXP_PATH: self._check_hermitian_pair,
        }[self.kind]
        checker()
        if self.kind is CurveKind.EXP_PATH:
            logger.warning(EXP_PATH_WARNING)

    def _check_pencil(self):
        if not self.structure.is_linear:
            raise InvalidInput(
                "linear pencils need a linear structure", {"structure": self.structure.describe()}
            )
        require(self.base, self.structure)
        require(self.direction, self.structure)

    def _check_polar(self):
        if not self.structure.is_group:
            raise InvalidInput(
                "polar paths need an orthogonal or unitary structure",
                {"structure": self.structure.describe()},
            )
        require(self.base, self.structure)
        skew_kind = (
            StructureKind.SKEW_SYMMETRIC
            if self.structure.kind is StructureKind.ORTHOGONAL
            else StructureKind.SKEW_HERMITIAN
        )
        require(self.direction, StructureClass(skew_kind, self.structure.n))
        if not np.any(self.direction):
            raise InvalidInput("polar path direction S must be nonzero")

    def _check_hermitian_pair(self):
        if self.structure.kind is not StructureKind.UNITARY:
            raise InvalidInput(
                f"{self.kind.value} paths are defined for unitary structures only",
                {"structure": self.structure.describe()},
            )
        hermitian = StructureClass(StructureKind.HERMITIAN, self.structure.n)
        require(self.base, hermitian)
        require(self.direction, hermitian)

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.structure.n)

    def hermitian_at(self, t: float) -> np.ndarray:
        """``H(t) = H0 + t H1`` of Cayley and exponential paths."""
        return as_matrix(self.base) + t * as_matrix(self.direction)


def evaluate(curve: MatrixCurve, t: float) -> np.ndarray:
    """
    Point ``A(t)`` of a curve.

    Parameters
    ----------
    curve : MatrixCurve
        The curve.
    t : float
        Parameter inside ``curve.domain``.

    Returns
    -------
    np.ndarray
        A member of ``curve.structure``.

    Raises
    ------
    InvalidInput
        If ``t`` lies outside the domain.
    InternalError
        If the polar path meets a singular matrix, which the singular value
        bound on ``I + tS`` rules out.
    """
    t_min, t_max = curve.domain
    slack = DOMAIN_SLACK * (t_max - t_min)
    if not t_min - slack <= t <= t_max + slack:
        raise InvalidInput("parameter outside curve domain", {"t": t, "domain": curve.domain})
    if curve.kind is CurveKind.LINEAR_PENCIL:
        return as_matrix(curve.base) + t * as_matrix(curve.direction)
    if curve.kind is CurveKind.POLAR_PATH:
        try:
            return polar_unitary_factor(
                as_matrix(curve.base) @ (curve.identity + t * as_matrix(curve.direction))
            )
        except SingularInput as error:
            raise InternalError("polar path met a singular matrix", {"t": t}) from error
    H = curve.hermitian_at(t)
    if curve.kind is CurveKind.CAYLEY_PATH:
        # I - iH and I + iH commute, so the order of the product is immaterial
        return scipy.linalg.solve(curve.identity + 1j * H, curve.identity - 1j * H)
    w, V = eig_selfadjoint(H)
    return (V * np.exp(1j * w)) @ V.conj().T


def det_along_path(curve: MatrixCurve, t_grid: Iterable[float]) -> np.ndarray:
    """
    Determinants along a group curve.

    Returns the determinant sign per node for orthogonal curves (constant on
    a connected component) and the unit-modulus complex determinant for
    unitary curves.

    Raises
    ------
    InvalidInput
        If the curve is not on the orthogonal or unitary group.
    """
    if not curve.structure.is_group:
        raise InvalidInput(
            "determinant tracking needs an orthogonal or unitary curve",
            {"structure": curve.structure.describe()},
        )
    dets = np.array([np.linalg.det(evaluate(curve, t)) for t in t_grid])
    if curve.structure.kind is StructureKind.UNITARY:
        return dets
    signs = np.sign(dets.real).astype(int)
    if signs.size and np.any(signs != signs[0]):
        logger.warning("determinant sign changed along %s curve", curve.structure.describe())
    return signs


def random_curve(
    structure: StructureClass,
    kind: CurveKind,
    stream: RandomSource,
    domain: Tuple[float, float] = (-1.0, 1.0),
    direction_scale: Optional[float] = None,
) -> MatrixCurve:
    """
    Curve whose operands are drawn from the sampling ensembles.

    Pencils take two independent samples of ``structure``. Polar paths take a
    Haar ``Q0`` of ``structure`` (on the requested determinant component) and
    a Gaussian skew-symmetric / skew-Hermitian ``S``. Cayley and exponential
    paths take two Gaussian Hermitian matrices.

    Parameters
    ----------
    structure : StructureClass
        Target manifold.
    kind : CurveKind
        Construction.
    stream : SeededRandomStream or np.random.Generator
        Randomness, consumed in place.
    domain : Tuple[float, float]
        Parameter interval.
    direction_scale : Optional[float]
        Multiplies the direction operand (for instance to make an exponential
        path sweep more than 2 pi).
    """
    n = structure.n
    if kind is CurveKind.LINEAR_PENCIL:
        base, direction = sample(structure, stream), sample(structure, stream)
    elif kind is CurveKind.POLAR_PATH:
        skew_kind = (
            StructureKind.SKEW_SYMMETRIC
            if structure.kind is StructureKind.ORTHOGONAL
            else StructureKind.SKEW_HERMITIAN
        )
        if not structure.is_group:
            raise InvalidInput(
                "polar paths need an orthogonal or unitary structure",
                {"structure": structure.describe()},
            )
        base = sample(structure, stream)
        direction = sample(StructureClass(skew_kind, n), stream)
    else:
        hermitian = StructureClass(StructureKind.HERMITIAN, n)
        base, direction = sample(hermitian, stream), sample(hermitian, stream)
    if direction_scale is not None:
        direction = direction_scale * direction
    return MatrixCurve(structure, kind, base, direction, domain)
