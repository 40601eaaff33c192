"""
Random ensembles for every structure class.

Linear structures draw independent standard Gaussians and symmetrize,
skew-symmetrize and band-mask them. Orthogonal and unitary classes are Haar
distributed, taken as the phase-fixed QR factor of a Gaussian matrix.
"""

import logging
from typing import Union

import numpy as np

from spectravoid.exceptions import InvalidInput
from spectravoid.numkernel import qr_decompose
from spectravoid.structures.models import StructureClass, StructureKind

logger = logging.getLogger(__name__)


class SeededRandomStream:
    """
    Random stream of one Monte Carlo sample.

    The stream is seeded from the pair ``(seed, index)`` through
    ``numpy.random.SeedSequence``, so sample ``index`` under base seed ``seed``
    is the same whichever worker draws it. Draws after the first continue the
    same PCG64 stream.

    Attributes
    ----------
    seed : int
        Base seed of the run.
    index : int
        Sample index within the run.
    rng : np.random.Generator
        The underlying generator.
    """

    def __init__(self, seed: int, index: int = 0):
        if seed < 0 or index < 0:
            raise InvalidInput("seed and index must be nonnegative", {"seed": seed, "index": index})
        self.seed = int(seed)
        self.index = int(index)
        self.rng = np.random.default_rng(np.random.SeedSequence([self.seed, self.index]))

    def __repr__(self):
        return f"SeededRandomStream(seed={self.seed}, index={self.index})"


RandomSource = Union[SeededRandomStream, np.random.Generator]


def _generator(stream: RandomSource) -> np.random.Generator:
    if isinstance(stream, SeededRandomStream):
        return stream.rng
    return stream


def gaussian(rng: np.random.Generator, shape, complex_field: bool) -> np.ndarray:
    """Standard Gaussian matrix; complex entries have unit total variance."""
    if not complex_field:
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def band_mask(A: np.ndarray, bandwidth: int) -> np.ndarray:
    """Copy of ``A`` with every entry more than ``bandwidth`` off the diagonal set to zero."""
    return np.triu(np.tril(A, bandwidth), -bandwidth)


def haar_unitary(rng: np.random.Generator, n: int, complex_field: bool) -> np.ndarray:
    """
    Haar-distributed orthogonal (real) or unitary (complex) matrix.

    The Q factor of a Gaussian matrix is Haar distributed once the diagonal of
    R is made positive, which ``qr_decompose`` guarantees.
    """
    Q, _ = qr_decompose(gaussian(rng, (n, n), complex_field))
    return Q


def sample(structure: StructureClass, stream: RandomSource) -> np.ndarray:
    """
    Draws one random matrix of ``structure``.

    Parameters
    ----------
    structure : StructureClass
        Target class.
    stream : SeededRandomStream or np.random.Generator
        Source of randomness; consumed in place.

    Returns
    -------
    np.ndarray
        A matrix that passes ``validate(A, structure)``.
    """
    rng = _generator(stream)
    kind = structure.kind
    n = structure.n
    if kind in (StructureKind.RECT_REAL, StructureKind.RECT_COMPLEX):
        return gaussian(rng, (structure.m, n), kind is StructureKind.RECT_COMPLEX)
    if kind is StructureKind.ORTHOGONAL:
        Q = haar_unitary(rng, n, complex_field=False)
        if np.linalg.det(Q) * structure.det_sign < 0:
            Q[:, 0] = -Q[:, 0]
        return Q
    if kind is StructureKind.UNITARY:
        return haar_unitary(rng, n, complex_field=True)

    G = gaussian(rng, (n, n), not structure.is_real)
    if kind in (StructureKind.SYMMETRIC, StructureKind.HERMITIAN):
        A = 0.5 * (G + G.conj().T)
    else:
        A = 0.5 * (G - G.conj().T)
    if structure.effective_bandwidth is not None:
        A = band_mask(A, structure.bandwidth)
    return A
