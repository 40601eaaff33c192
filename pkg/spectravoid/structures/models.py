from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from spectravoid.exceptions import InvalidInput


class StructureKind(Enum):
    SYMMETRIC = "symmetric"
    HERMITIAN = "hermitian"
    SKEW_SYMMETRIC = "skew-symmetric"
    SKEW_HERMITIAN = "skew-hermitian"
    ORTHOGONAL = "orthogonal"
    UNITARY = "unitary"
    RECT_REAL = "rect-real"
    RECT_COMPLEX = "rect-complex"


SELFADJOINT_LIKE = frozenset(
    {
        StructureKind.SYMMETRIC,
        StructureKind.HERMITIAN,
        StructureKind.SKEW_SYMMETRIC,
        StructureKind.SKEW_HERMITIAN,
    }
)
GROUP_KINDS = frozenset({StructureKind.ORTHOGONAL, StructureKind.UNITARY})
RECT_KINDS = frozenset({StructureKind.RECT_REAL, StructureKind.RECT_COMPLEX})
REAL_KINDS = frozenset(
    {
        StructureKind.SYMMETRIC,
        StructureKind.SKEW_SYMMETRIC,
        StructureKind.ORTHOGONAL,
        StructureKind.RECT_REAL,
    }
)


class CollisionClass(Enum):
    """Where a multiple eigenvalue sits: a generic pair, at 0, or at +1/-1."""

    PAIR_GENERIC = "generic"
    AT_ZERO = "zero"
    AT_PLUS_ONE = "plus-one"
    AT_MINUS_ONE = "minus-one"

    @property
    def label(self) -> str:
        return "".join(part.capitalize() for part in self.name.lower().split("_"))


@dataclass(frozen=True)
class StructureClass:
    """
    Tagged description of a matrix structure.

    Attributes
    ----------
    kind : StructureKind
        Symmetry type and field.
    n : int
        Size of square classes, number of columns of rectangular ones.
    m : Optional[int]
        Number of rows of rectangular classes (``m >= n``); ``None`` otherwise.
    bandwidth : Optional[int]
        Bandwidth ``k`` (``0 <= k <= n-1``) of the self/skew-adjoint kinds;
        ``None`` means full.
    det_sign : Optional[int]
        Determinant ``+1`` or ``-1``, required for (and only for) orthogonal.
    """

    kind: StructureKind
    n: int
    m: Optional[int] = None
    bandwidth: Optional[int] = None
    det_sign: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("structure size must be positive", {"n": self.n})
        if self.kind in RECT_KINDS:
            if self.m is None or self.m < self.n:
                raise InvalidInput(
                    "rectangular classes need m >= n", {"m": self.m, "n": self.n}
                )
        elif self.m is not None:
            raise InvalidInput("m is only meaningful for rectangular classes")
        if self.bandwidth is not None:
            if self.kind not in SELFADJOINT_LIKE:
                raise InvalidInput(
                    "bandwidth applies only to (skew-)symmetric/Hermitian classes",
                    {"kind": self.kind.value},
                )
            if not 0 <= self.bandwidth <= self.n - 1:
                raise InvalidInput(
                    "bandwidth out of range", {"bandwidth": self.bandwidth, "n": self.n}
                )
            if self.kind is StructureKind.SKEW_SYMMETRIC and self.bandwidth == 0:
                raise InvalidInput("skew-symmetric bandwidth 0 is only the zero matrix")
        if self.kind is StructureKind.ORTHOGONAL:
            if self.det_sign not in (1, -1):
                raise InvalidInput(
                    "orthogonal classes need det_sign +1 or -1",
                    {"det_sign": self.det_sign},
                )
        elif self.det_sign is not None:
            raise InvalidInput("det_sign is only meaningful for orthogonal classes")

    @property
    def shape(self) -> Tuple[int, int]:
        if self.kind in RECT_KINDS:
            return (self.m, self.n)
        return (self.n, self.n)

    @property
    def is_real(self) -> bool:
        return self.kind in REAL_KINDS

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    @property
    def is_group(self) -> bool:
        return self.kind in GROUP_KINDS

    @property
    def is_linear(self) -> bool:
        return self.kind not in GROUP_KINDS

    @property
    def effective_bandwidth(self) -> Optional[int]:
        """Bandwidth with ``None`` and ``n-1`` both meaning full (returned as ``None``)."""
        if self.bandwidth is None or self.bandwidth >= self.n - 1:
            return None
        return self.bandwidth

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.kind in RECT_KINDS:
            parts.append(f"{self.m}x{self.n}")
        else:
            parts.append(f"n={self.n}")
        if self.bandwidth is not None:
            parts.append(f"k={self.bandwidth}")
        if self.det_sign is not None:
            parts.append(f"det={self.det_sign:+d}")
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class RealEigs:
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class SkewPairs:
    """Nonnegative imaginary parts ``a_i`` of the pairs ``+-i a_i``, ascending."""

    values: np.ndarray
    has_forced_zero: bool


@dataclass(frozen=True, eq=False)
class Angles:
    """
    Eigen-angles of an orthogonal or unitary matrix.

    For orthogonal matrices (``paired=True``) ``values`` holds one angle in
    (0, pi) per conjugate pair ``e^{+-i theta}``, and the eigenvalues sitting
    on +1 / -1 are counted separately. For unitary matrices (``paired=False``)
    ``values`` holds every angle in (-pi, pi] and the fixed counts are zero.
    """

    values: np.ndarray
    fixed_plus_one: int = 0
    fixed_minus_one: int = 0
    paired: bool = True


@dataclass(frozen=True, eq=False)
class SingularValues:
    values: np.ndarray


CanonicalSpectrum = Union[RealEigs, SkewPairs, Angles, SingularValues]


@dataclass(frozen=True, eq=False)
class SkewBlockForm:
    """
    Real block diagonal form ``V_tilde A = D_tilde V_tilde`` of a skew matrix.

    Attributes
    ----------
    V_tilde : np.ndarray
        Real orthogonal matrix.
    block_values : np.ndarray
        Nonnegative ascending ``a_1..a_m`` of the blocks ``[[0, a], [-a, 0]]``.
    zero_block : bool
        True for odd sizes, where a trailing 1x1 zero block is present.
    """

    V_tilde: np.ndarray
    block_values: np.ndarray
    zero_block: bool

    def block_diagonal(self) -> np.ndarray:
        """Assembles ``D_tilde`` from the block values."""
        m = self.block_values.size
        n = 2 * m + (1 if self.zero_block else 0)
        D = np.zeros((n, n))
        for i, a in enumerate(self.block_values):
            D[2 * i, 2 * i + 1] = a
            D[2 * i + 1, 2 * i] = -a
        return D


@dataclass(frozen=True)
class Validation:
    valid: bool
    violation: float
    reasons: Tuple[str, ...] = field(default_factory=tuple)
