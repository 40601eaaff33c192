"""
Crossings and avoided crossings of eigenvalues on structured matrix manifolds.

Matrices with a multiple eigenvalue form a subset of positive codimension
in every structure class; curves cross it only when that codimension is 1.
The package samples the structure classes, tracks eigenvalue branches
along curves, detects and classifies crossings, and estimates the
codimensions from small-gap statistics.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("spectravoid")
except PackageNotFoundError:
    __version__ = "0.0.0"

from spectravoid.curves import CurveKind, MatrixCurve, det_along_path, evaluate, random_curve
from spectravoid.exceptions import (
    DegenerateInput,
    InsufficientData,
    InternalError,
    InternalInconsistency,
    InvalidInput,
    SingularInput,
    SpectravoidError,
    StructureViolation,
)
from spectravoid.gapstats import (
    CodimEstimate,
    GapSample,
    Verdict,
    estimate_exponent,
    gap_sample,
    verify_codimension,
)
from spectravoid.pfaffian import pfaffian, pfaffian_sign_changes
from spectravoid.structures import (
    CollisionClass,
    SeededRandomStream,
    StructureClass,
    StructureKind,
    canonical_spectrum,
    expected_codimension,
    sample,
    validate,
)
from spectravoid.tracking import Classification, GapEvent, SpectralPath, detect_events, track

__all__ = [
    "Classification",
    "CodimEstimate",
    "CollisionClass",
    "CurveKind",
    "DegenerateInput",
    "GapEvent",
    "GapSample",
    "InsufficientData",
    "InternalError",
    "InternalInconsistency",
    "InvalidInput",
    "MatrixCurve",
    "SeededRandomStream",
    "SingularInput",
    "SpectralPath",
    "SpectravoidError",
    "StructureClass",
    "StructureKind",
    "StructureViolation",
    "Verdict",
    "canonical_spectrum",
    "det_along_path",
    "detect_events",
    "estimate_exponent",
    "evaluate",
    "expected_codimension",
    "gap_sample",
    "pfaffian",
    "pfaffian_sign_changes",
    "random_curve",
    "sample",
    "track",
    "validate",
    "verify_codimension",
]
