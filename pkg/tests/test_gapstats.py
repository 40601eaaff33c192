import numpy as np
import pytest

from spectravoid.exceptions import InsufficientData, InvalidInput, StructureViolation
from spectravoid.gapstats import (
    CodimEstimate,
    GapSample,
    Verdict,
    collect_gaps,
    estimate_exponent,
    fit_exponent_lstsq,
    gap_histogram,
    gap_sample,
    judge,
    table_sweep,
    verify_codimension,
    within_validated_range,
)
from spectravoid.structures import CollisionClass, StructureClass, StructureKind, expected_codimension

K = StructureKind
C = CollisionClass


@pytest.fixture
def rng():
    return np.random.default_rng(77)


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


def block_diagonal(*blocks):
    n = sum(block.shape[0] for block in blocks)
    out = np.zeros((n, n), dtype=np.result_type(*blocks))
    i = 0
    for block in blocks:
        k = block.shape[0]
        out[i : i + k, i : i + k] = block
        i += k
    return out


def skew_block(a):
    return np.array([[0.0, a], [-a, 0.0]])


def estimate(exponent, stderr):
    return CodimEstimate(exponent=exponent, stderr=stderr, tail_fraction=0.1, sample_count=1000, tail_count=100)


def test_gap_sample_symmetric():
    gaps = gap_sample(np.diag([0.0, 0.3, 1.0]), StructureClass(K.SYMMETRIC, 3))
    assert gaps[C.PAIR_GENERIC] == pytest.approx(0.3)
    assert C.AT_ZERO not in gaps


def test_gap_sample_skew_symmetric():
    A = block_diagonal(skew_block(1.0), skew_block(1.5))
    gaps = gap_sample(A, StructureClass(K.SKEW_SYMMETRIC, 4))
    assert gaps[C.PAIR_GENERIC] == pytest.approx(0.5, abs=1e-12)
    assert gaps[C.AT_ZERO] == pytest.approx(1.0, abs=1e-12)


def test_gap_sample_two_by_two_skew_has_no_pair():
    gaps = gap_sample(skew_block(0.25), StructureClass(K.SKEW_SYMMETRIC, 2))
    assert C.PAIR_GENERIC not in gaps
    assert gaps[C.AT_ZERO] == pytest.approx(0.25)


def test_gap_sample_orthogonal():
    A = block_diagonal(rotation(0.2), rotation(1.0), rotation(2.8))
    gaps = gap_sample(A, StructureClass(K.ORTHOGONAL, 6, det_sign=1))
    assert gaps[C.AT_PLUS_ONE] == pytest.approx(0.2, abs=1e-10)
    assert gaps[C.AT_MINUS_ONE] == pytest.approx(np.pi - 2.8, abs=1e-10)
    assert gaps[C.PAIR_GENERIC] == pytest.approx(0.8, abs=1e-10)


def test_gap_sample_orthogonal_ignores_forced_eigenvalues():
    A = block_diagonal(rotation(0.7), np.diag([1.0, -1.0]))
    gaps = gap_sample(A, StructureClass(K.ORTHOGONAL, 4, det_sign=-1))
    assert gaps[C.AT_PLUS_ONE] == pytest.approx(0.7, abs=1e-10)
    assert C.PAIR_GENERIC not in gaps


def test_gap_sample_unitary_wraps_around():
    U = np.diag(np.exp(1j * np.array([-3.0, 0.0, 3.0])))
    gaps = gap_sample(U, StructureClass(K.UNITARY, 3))
    assert gaps[C.PAIR_GENERIC] == pytest.approx(2 * np.pi - 6.0, abs=1e-12)


def test_gap_sample_one_by_one_is_empty():
    gaps = gap_sample(np.array([[2.0]]), StructureClass(K.SYMMETRIC, 1))
    assert gaps.values == {}
    assert gaps.get(C.PAIR_GENERIC) is None


def test_gap_sample_checks_membership():
    with pytest.raises(StructureViolation):
        gap_sample(np.ones((2, 2)), StructureClass(K.SKEW_SYMMETRIC, 2))


@pytest.mark.parametrize("exponent", [1.0, 2.0, 3.0])
def test_estimate_exponent_of_power_law(rng, exponent):
    gaps = rng.uniform(size=100_000) ** (1.0 / exponent)
    result = estimate_exponent(gaps, 0.1)
    assert result.exponent == pytest.approx(exponent, abs=0.1)
    assert result.stderr == pytest.approx(result.exponent / 100.0)
    assert result.tail_count == 10_000
    assert result.sample_count == 100_000


def test_lstsq_fit_agrees_with_likelihood(rng):
    gaps = rng.uniform(size=50_000) ** 0.5
    slope, stderr = fit_exponent_lstsq(gaps, 0.1)
    assert slope == pytest.approx(2.0, abs=0.1)
    assert stderr > 0.0


def test_estimate_exponent_is_scale_free(rng):
    gaps = rng.uniform(size=1000)
    assert estimate_exponent(gaps).exponent == pytest.approx(estimate_exponent(1e-6 * gaps).exponent)


@pytest.mark.parametrize(
    "gaps, tail_fraction, error",
    [
        (np.ones(99), 0.1, InsufficientData),
        (np.append(np.zeros(1), np.ones(199)), 0.1, InsufficientData),
        (np.append(np.array([np.inf]), np.ones(199)), 0.1, InsufficientData),
        (np.ones(200), 0.1, InsufficientData),
        (np.linspace(1.0, 2.0, 200), 0.6, InvalidInput),
        (np.linspace(1.0, 2.0, 200), 0.0, InvalidInput),
    ],
)
def test_estimate_exponent_rejects(gaps, tail_fraction, error):
    with pytest.raises(error):
        estimate_exponent(gaps, tail_fraction)


@pytest.mark.parametrize(
    "exponent, stderr, expected, verdict",
    [
        (2.2, 0.1, 2, Verdict.PASS),
        (2.45, 0.05, 2, Verdict.PASS),
        (1.0, 0.4, 2, Verdict.PASS),
        (3.0, 0.1, 2, Verdict.FAIL),
        (1.3, 0.2, 2, Verdict.FAIL),
        (2.0, 1.5, 2, Verdict.INCONCLUSIVE),
        (1.0, 0.6, 1, Verdict.INCONCLUSIVE),
    ],
)
def test_judge(exponent, stderr, expected, verdict):
    assert judge(estimate(exponent, stderr), expected) is verdict


def gaps_of(structure, collision, samples, seed=5):
    return [entry[collision] for entry in collect_gaps(structure, samples, seed)]


@pytest.mark.parametrize(
    "structure, collision, exponent",
    [
        (StructureClass(K.SYMMETRIC, 2), C.PAIR_GENERIC, 2.0),
        (StructureClass(K.SKEW_SYMMETRIC, 2), C.AT_ZERO, 1.0),
        (StructureClass(K.SKEW_SYMMETRIC, 3), C.AT_ZERO, 3.0),
    ],
)
def test_analytic_gap_oracles(structure, collision, exponent):
    # gap CDFs: 1 - exp(-eps^2/4), erf(eps) and a chi distribution with 3 degrees of freedom
    result = estimate_exponent(gaps_of(structure, collision, 10_000), 0.1)
    assert abs(result.exponent - exponent) <= max(3.0 * result.stderr, 0.3)


def test_collect_gaps_is_independent_of_worker_count():
    structure = StructureClass(K.ORTHOGONAL, 5, det_sign=-1)
    serial = collect_gaps(structure, 200, seed=3, workers=1)
    threaded = collect_gaps(structure, 200, seed=3, workers=4)
    assert [entry.values for entry in serial] == [entry.values for entry in threaded]


def test_collect_gaps_rejects_zero_samples():
    with pytest.raises(InvalidInput):
        collect_gaps(StructureClass(K.SYMMETRIC, 3), 0, seed=1)


def test_gap_histogram():
    counts, edges = gap_histogram([0.1, 0.2, 0.2, 0.9], bins=4)
    assert counts.sum() == 4
    assert edges.size == 5
    with pytest.raises(InvalidInput):
        gap_histogram([0.1], bins=0)


def test_verify_codimension_passes_for_skew_zero():
    result = verify_codimension(StructureClass(K.SKEW_SYMMETRIC, 2), C.AT_ZERO, samples=2000, seed=0)
    assert result.expected == 1
    assert result.verdict is Verdict.PASS
    assert result.lstsq_exponent is not None


def test_verify_codimension_needs_enough_samples():
    with pytest.raises(InsufficientData):
        verify_codimension(StructureClass(K.SYMMETRIC, 3), C.PAIR_GENERIC, samples=50, seed=0)


@pytest.mark.parametrize(
    "structure, collision, reason",
    [
        (StructureClass(K.SYMMETRIC, 4), C.AT_ZERO, "do not occur"),
        (StructureClass(K.SKEW_SYMMETRIC, 2), C.PAIR_GENERIC, "too few free eigenvalues"),
        (StructureClass(K.ORTHOGONAL, 2, det_sign=-1), C.AT_PLUS_ONE, "too few free eigenvalues"),
    ],
)
def test_verify_codimension_rejects_impossible_collisions(structure, collision, reason):
    with pytest.raises(InvalidInput) as error:
        verify_codimension(structure, collision, samples=200, seed=0)
    assert reason in str(error.value)


def test_table_sweep_rows_are_possible():
    cases = table_sweep()
    assert len(cases) == 22
    assert len({case.label for case in cases}) == 22
    assert all(expected_codimension(case.structure, case.collision) is not None for case in cases)


def sweep_params():
    return [
        pytest.param(case, marks=pytest.mark.xfail(strict=True, reason=case.deviation))
        if case.deviation
        else case
        for case in table_sweep()
    ]


@pytest.mark.slow
@pytest.mark.parametrize("case", sweep_params(), ids=lambda c: c.label)
def test_sweep_rows_pass(case):
    result = verify_codimension(case.structure, case.collision, samples=10_000, seed=1)
    assert result.verdict is Verdict.PASS, (case.label, result.exponent, result.stderr)


def test_only_tridiagonal_hermitian_has_known_deviation():
    assert [case.label for case in table_sweep() if case.deviation] == ["tridiagonal Hermitian"]


@pytest.mark.parametrize(
    "structure, trusted",
    [
        (StructureClass(K.SYMMETRIC, 12), True),
        (StructureClass(K.SYMMETRIC, 12, bandwidth=0), True),
        (StructureClass(K.SYMMETRIC, 12, bandwidth=11), True),
        (StructureClass(K.HERMITIAN, 3, bandwidth=1), True),
        (StructureClass(K.HERMITIAN, 4, bandwidth=1), False),
        (StructureClass(K.SYMMETRIC, 7, bandwidth=2), True),
        (StructureClass(K.SYMMETRIC, 8, bandwidth=2), False),
    ],
)
def test_within_validated_range(structure, trusted):
    assert within_validated_range(structure) is trusted


@pytest.mark.parametrize("kind", [K.SYMMETRIC, K.HERMITIAN])
def test_large_banded_verdict_is_withheld(kind, caplog):
    structure = StructureClass(kind, 10, bandwidth=1)
    result = verify_codimension(structure, C.PAIR_GENERIC, samples=500, seed=0)
    assert result.verdict is Verdict.INCONCLUSIVE
    assert "verdict withheld" in caplog.text


def test_gap_sample_mapping_protocol():
    entry = GapSample({C.AT_ZERO: 0.5})
    assert C.AT_ZERO in entry and entry[C.AT_ZERO] == 0.5
    assert entry.get(C.PAIR_GENERIC, 1.0) == 1.0


if __name__ == "__main__":
    pytest.main()
