"""
Ambient dimensions and codimensions of derogatory structured matrices.

The numbers encode the conclusions of the dimension counts for each
structure: the real dimension of the structure manifold, and the real
codimension of its subset with a multiple eigenvalue (or singular value),
split by where the collision happens.
"""

from dataclasses import dataclass
from typing import List, Optional

from spectravoid.structures.models import CollisionClass, StructureClass, StructureKind
from spectravoid.structures.spectrum import forced_fixed_counts

SKEW_AMBIENT_NOTE = (
    "the summary table prints n(n+1)/2 for skew-symmetric matrices; the "
    "eigendecomposition count gives n(n-1)/2, which is used here"
)


def ambient_dimension(structure: StructureClass) -> int:
    """
    Real dimension of the manifold of matrices of ``structure``.

    Parameters
    ----------
    structure : StructureClass
        Any valid class; banded classes use the banded counts.

    Returns
    -------
    int
        Real dimension.
    """
    kind, n, k = structure.kind, structure.n, structure.bandwidth
    if k is None:
        k = n - 1
    if kind is StructureKind.SYMMETRIC:
        return (k + 1) * (2 * n - k) // 2
    if kind in (StructureKind.HERMITIAN, StructureKind.SKEW_HERMITIAN):
        return n * (2 * k + 1) - k * (k + 1)
    if kind is StructureKind.SKEW_SYMMETRIC:
        return k * (2 * n - 1 - k) // 2
    if kind is StructureKind.ORTHOGONAL:
        return n * (n - 1) // 2
    if kind is StructureKind.UNITARY:
        return n * n
    if kind is StructureKind.RECT_REAL:
        return structure.m * n
    return 2 * structure.m * n


def free_value_count(structure: StructureClass) -> int:
    """Number of spectral values that can move freely and collide in pairs."""
    kind, n = structure.kind, structure.n
    if kind is StructureKind.SKEW_SYMMETRIC:
        return n // 2
    if kind is StructureKind.ORTHOGONAL:
        plus, minus = forced_fixed_counts(n, structure.det_sign)
        return (n - plus - minus) // 2
    return n


def compatible(structure: StructureClass, collision: CollisionClass) -> bool:
    """Whether ``collision`` is a meaningful location for ``structure``."""
    free = free_value_count(structure)
    if collision is CollisionClass.PAIR_GENERIC:
        return free >= 2
    if collision is CollisionClass.AT_ZERO:
        return structure.kind is StructureKind.SKEW_SYMMETRIC and free >= 1
    return structure.kind is StructureKind.ORTHOGONAL and free >= 1


def expected_codimension(
    structure: StructureClass, collision: CollisionClass
) -> Optional[int]:
    """
    Real codimension of the derogatory set for a collision location.

    Parameters
    ----------
    structure : StructureClass
        The structure manifold.
    collision : CollisionClass
        Generic pair collision, collision at 0 (skew-symmetric) or at +1/-1
        (orthogonal).

    Returns
    -------
    Optional[int]
        The codimension, or ``None`` when the collision cannot happen for this
        class (wrong location for the kind, or too few free eigenvalues).
    """
    if not compatible(structure, collision):
        return None
    kind, n = structure.kind, structure.n
    if structure.bandwidth == 0:
        return 1
    if kind in (StructureKind.SYMMETRIC, StructureKind.RECT_REAL):
        return 2
    if kind in (
        StructureKind.HERMITIAN,
        StructureKind.SKEW_HERMITIAN,
        StructureKind.UNITARY,
        StructureKind.RECT_COMPLEX,
    ):
        return 3
    if kind is StructureKind.SKEW_SYMMETRIC:
        if collision is CollisionClass.AT_ZERO and n % 2 == 0:
            return 1
        return 3
    # orthogonal
    if collision is CollisionClass.PAIR_GENERIC:
        return 3
    det_sign = structure.det_sign
    if n % 2 == 0:
        return 1 if det_sign == 1 else 3
    opposite = CollisionClass.AT_MINUS_ONE if det_sign == 1 else CollisionClass.AT_PLUS_ONE
    return 1 if collision is opposite else 3


@dataclass(frozen=True)
class TableEntry:
    label: str
    structure: StructureClass
    collision: CollisionClass
    formula: str
    note: str = ""

    @property
    def ambient(self) -> int:
        return ambient_dimension(self.structure)

    @property
    def codimension(self) -> Optional[int]:
        return expected_codimension(self.structure, self.collision)


def table_rows(n_even: int = 6, n_odd: int = 7, m: int = 5) -> List[TableEntry]:
    """
    Every row of the codimension summary, instantiated at reference sizes.

    Parameters
    ----------
    n_even : int
        Reference even size.
    n_odd : int
        Reference odd size.
    m : int
        Row count of the rectangular classes (columns ``m - 1``).
    """
    K = StructureKind
    C = CollisionClass
    generic = C.PAIR_GENERIC
    return [
        TableEntry("symmetric", StructureClass(K.SYMMETRIC, n_odd), generic, "n(n+1)/2"),
        TableEntry("Hermitian", StructureClass(K.HERMITIAN, n_odd), generic, "n^2"),
        TableEntry(
            "skew-symmetric, n even",
            StructureClass(K.SKEW_SYMMETRIC, n_even),
            C.AT_ZERO,
            "n(n-1)/2",
            SKEW_AMBIENT_NOTE,
        ),
        TableEntry(
            "skew-symmetric, n odd",
            StructureClass(K.SKEW_SYMMETRIC, n_odd),
            C.AT_ZERO,
            "n(n-1)/2",
            SKEW_AMBIENT_NOTE,
        ),
        TableEntry("skew-Hermitian", StructureClass(K.SKEW_HERMITIAN, n_even), generic, "n^2"),
        TableEntry(
            "orthogonal, n even, det 1",
            StructureClass(K.ORTHOGONAL, n_even, det_sign=1),
            C.AT_PLUS_ONE,
            "n(n-1)/2",
        ),
        TableEntry(
            "orthogonal, n even, det -1",
            StructureClass(K.ORTHOGONAL, n_even, det_sign=-1),
            C.AT_PLUS_ONE,
            "n(n-1)/2",
        ),
        TableEntry(
            "orthogonal, n odd",
            StructureClass(K.ORTHOGONAL, n_odd, det_sign=1),
            C.AT_MINUS_ONE,
            "n(n-1)/2",
        ),
        TableEntry("unitary", StructureClass(K.UNITARY, n_even), generic, "n^2"),
        TableEntry(
            "banded symmetric (tridiagonal)",
            StructureClass(K.SYMMETRIC, n_odd, bandwidth=1),
            generic,
            "(k+1)(2n-k)/2",
        ),
        TableEntry(
            "banded Hermitian (tridiagonal)",
            StructureClass(K.HERMITIAN, n_odd, bandwidth=1),
            generic,
            "n(2k+1)-k(k+1)",
        ),
        TableEntry(
            "banded skew-symmetric (tridiagonal), n odd",
            StructureClass(K.SKEW_SYMMETRIC, n_odd, bandwidth=1),
            C.AT_ZERO,
            "k(2n-1-k)/2",
        ),
        TableEntry(
            "diagonal",
            StructureClass(K.SYMMETRIC, n_even, bandwidth=0),
            generic,
            "n",
        ),
        TableEntry(
            "singular values, real",
            StructureClass(K.RECT_REAL, m - 1, m=m),
            generic,
            "mn",
        ),
        TableEntry(
            "singular values, complex",
            StructureClass(K.RECT_COMPLEX, m - 1, m=m),
            generic,
            "2mn",
        ),
    ]
