from spectravoid.structures.dimensions import (
    ambient_dimension,
    compatible,
    expected_codimension,
    table_rows,
)
from spectravoid.structures.exponential import (
    has_skew_logarithm,
    orthogonal_exponential,
    orthogonal_logarithm,
)
from spectravoid.structures.krylov import verify_krylov_span
from spectravoid.structures.models import (
    Angles,
    CanonicalSpectrum,
    CollisionClass,
    RealEigs,
    SingularValues,
    SkewBlockForm,
    SkewPairs,
    StructureClass,
    StructureKind,
    Validation,
)
from spectravoid.structures.sampler import SeededRandomStream, sample
from spectravoid.structures.spectrum import (
    canonical_spectrum,
    forced_fixed_counts,
    orthogonal_angle_pairs,
    skew_block_form,
)
from spectravoid.structures.validator import StructureValidator, validate

__all__ = [
    "Angles",
    "CanonicalSpectrum",
    "CollisionClass",
    "RealEigs",
    "SeededRandomStream",
    "SingularValues",
    "SkewBlockForm",
    "SkewPairs",
    "StructureClass",
    "StructureKind",
    "StructureValidator",
    "Validation",
    "ambient_dimension",
    "canonical_spectrum",
    "compatible",
    "expected_codimension",
    "forced_fixed_counts",
    "has_skew_logarithm",
    "orthogonal_angle_pairs",
    "orthogonal_exponential",
    "orthogonal_logarithm",
    "sample",
    "skew_block_form",
    "table_rows",
    "validate",
    "verify_krylov_span",
]
