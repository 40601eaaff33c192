import numpy as np
import pytest

from spectravoid.curves import CurveKind, MatrixCurve, evaluate, random_curve
from spectravoid.exceptions import InvalidInput
from spectravoid.pfaffian import pfaffian_sign_changes
from spectravoid.structures import CollisionClass, SeededRandomStream, StructureClass, StructureKind, sample
from spectravoid.tracking import (
    Classification,
    Metric,
    branch_values,
    detect_events,
    metric_for,
    track,
    track_curves,
)

K = StructureKind
C = CollisionClass


def crossings(events):
    return [event for event in events if event.classification is Classification.CROSSING]


def pencil(structure, base, direction, domain=(-1.0, 1.0)):
    return MatrixCurve(structure, CurveKind.LINEAR_PENCIL, np.asarray(base), np.asarray(direction), domain)


def random_track(structure, kind, seed, domain=(-1.0, 1.0), grid=401, direction_scale=None):
    curve = random_curve(structure, kind, SeededRandomStream(seed, 0), domain, direction_scale)
    path = track(curve, grid)
    return curve, path, detect_events(path, curve)


@pytest.mark.parametrize(
    "structure, count",
    [
        (StructureClass(K.SYMMETRIC, 5), 5),
        (StructureClass(K.SKEW_SYMMETRIC, 7), 3),
        (StructureClass(K.SKEW_HERMITIAN, 4), 4),
        (StructureClass(K.ORTHOGONAL, 7, det_sign=1), 3),
        (StructureClass(K.ORTHOGONAL, 6, det_sign=-1), 2),
        (StructureClass(K.UNITARY, 5), 5),
        (StructureClass(K.RECT_REAL, 3, m=6), 3),
    ],
)
def test_branch_values_count(structure, count):
    values = branch_values(sample(structure, SeededRandomStream(1, 0)), structure)
    assert values.shape == (count,)
    assert np.all(np.diff(values) >= 0.0)


def test_metric_for():
    assert metric_for(StructureClass(K.UNITARY, 3)) is Metric.CIRCULAR
    assert metric_for(StructureClass(K.ORTHOGONAL, 3, det_sign=1)) is Metric.LINEAR


def test_track_rejects_small_grid():
    curve = pencil(StructureClass(K.SYMMETRIC, 2), np.eye(2), np.diag([1.0, -1.0]))
    with pytest.raises(InvalidInput):
        track(curve, initial_grid=7)


def test_diagonal_pencil_crosses():
    curve = pencil(StructureClass(K.SYMMETRIC, 2), np.diag([0.0, 1.0]), np.diag([1.0, -1.0]), (0.0, 1.0))
    path = track(curve)
    assert path.branch_count == 2
    assert np.allclose(path.branches[:, 0], path.t_grid, atol=1e-9)
    assert np.allclose(path.branches[:, 1], 1.0 - path.t_grid, atol=1e-9)

    events = detect_events(path, curve)
    assert events
    assert all(abs(event.t_star - 0.5) < 1e-6 for event in events)
    found = crossings(events)
    assert found and min(event.min_gap for event in found) <= 1e-12
    assert found[0].collision_class is C.PAIR_GENERIC
    assert found[0].location == pytest.approx(0.5, abs=1e-9)


def test_coupled_pencil_follows_sorted_branches():
    curve = pencil(StructureClass(K.SYMMETRIC, 2), np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))
    path = track(curve, 41)
    expected = np.sqrt(1.0 + path.t_grid**2)
    assert np.allclose(path.branches[:, 0], -expected, atol=1e-12)
    assert np.allclose(path.branches[:, 1], expected, atol=1e-12)
    assert path.ambiguous_intervals == []
    assert crossings(detect_events(path, curve)) == []


def test_narrow_avoided_crossing():
    eps = 1e-3
    curve = pencil(StructureClass(K.SYMMETRIC, 2), np.diag([eps, -eps]), np.array([[0.0, 1.0], [1.0, 0.0]]))
    path = track(curve)
    assert np.all(path.branches[:, 0] < path.branches[:, 1])

    events = detect_events(path, curve)
    assert len(events) == 1
    event = events[0]
    assert event.classification is Classification.AVOIDED
    assert event.pair == (0, 1)
    assert event.t_star == pytest.approx(0.0, abs=1e-6)
    assert event.min_gap == pytest.approx(2 * eps, rel=1e-6)
    assert event.location == pytest.approx(0.0, abs=1e-9)


def test_branches_are_the_node_spectra():
    structure = StructureClass(K.SYMMETRIC, 7)
    curve = random_curve(structure, CurveKind.LINEAR_PENCIL, SeededRandomStream(7, 0))
    path = track(curve, 64)
    for t, values in zip(path.t_grid, path.branches):
        assert np.allclose(np.sort(values), branch_values(evaluate(curve, t), structure), rtol=0.0, atol=1e-12)
    assert np.all(np.diff(path.t_grid) > 0.0)


@pytest.mark.parametrize("seed", range(20))
def test_skew_even_zero_crossings_match_pfaffian_roots(seed):
    structure = StructureClass(K.SKEW_SYMMETRIC, 6)
    curve, path, events = random_track(structure, CurveKind.LINEAR_PENCIL, seed, (-3.0, 3.0), grid=1201)
    roots = pfaffian_sign_changes((curve.base, curve.direction), curve.domain)
    at_zero = [event.t_star for event in crossings(events) if event.collision_class is C.AT_ZERO]
    for root in roots:
        assert min(abs(root - t) for t in at_zero) <= 1e-8
    for t in at_zero:
        assert min(abs(root - t) for root in roots) <= 1e-8


@pytest.mark.parametrize(
    "structure",
    [StructureClass(K.SKEW_SYMMETRIC, 7), StructureClass(K.SYMMETRIC, 7), StructureClass(K.HERMITIAN, 4)],
)
def test_pencils_without_codimension_one_collisions(structure):
    for seed in range(20):
        _, _, events = random_track(structure, CurveKind.LINEAR_PENCIL, seed)
        assert crossings(events) == []


def test_orthogonal_even_crossings_sit_at_plus_or_minus_one():
    structure = StructureClass(K.ORTHOGONAL, 6, det_sign=1)
    for seed in range(20):
        _, _, events = random_track(structure, CurveKind.POLAR_PATH, seed, direction_scale=3.0)
        for event in crossings(events):
            assert event.collision_class in (C.AT_PLUS_ONE, C.AT_MINUS_ONE)
            assert event.pair[1] is None


@pytest.mark.parametrize("det_sign, collision", [(1, C.AT_MINUS_ONE), (-1, C.AT_PLUS_ONE)])
def test_orthogonal_odd_crossings_sit_opposite_the_determinant(det_sign, collision):
    structure = StructureClass(K.ORTHOGONAL, 5, det_sign=det_sign)
    for seed in range(20):
        _, _, events = random_track(structure, CurveKind.POLAR_PATH, seed, direction_scale=3.0)
        assert all(event.collision_class is collision for event in crossings(events))


@pytest.mark.parametrize("kind", [CurveKind.POLAR_PATH, CurveKind.CAYLEY_PATH])
def test_unitary_paths_do_not_cross(kind):
    structure = StructureClass(K.UNITARY, 6)
    for seed in range(20):
        _, path, events = random_track(structure, kind, seed)
        assert path.metric is Metric.CIRCULAR
        assert crossings(events) == []


def test_exp_path_has_artificial_crossings():
    structure = StructureClass(K.UNITARY, 4)
    _, _, events = random_track(structure, CurveKind.EXP_PATH, 3, grid=801, direction_scale=10.0)
    found = crossings(events)
    assert found
    assert all(event.collision_class is C.PAIR_GENERIC for event in found)
    assert all(-np.pi < event.location <= np.pi for event in found)


def test_events_are_sorted_by_parameter():
    structure = StructureClass(K.ORTHOGONAL, 6, det_sign=-1)
    _, _, events = random_track(structure, CurveKind.POLAR_PATH, 11, direction_scale=3.0)
    times = [event.t_star for event in events]
    assert times == sorted(times)


def test_track_is_independent_of_worker_count():
    structure = StructureClass(K.HERMITIAN, 5)
    curve = random_curve(structure, CurveKind.LINEAR_PENCIL, SeededRandomStream(42, 0))
    serial, threaded = track(curve, 101, workers=1), track(curve, 101, workers=4)
    assert np.array_equal(serial.t_grid, threaded.t_grid)
    assert np.array_equal(serial.branches, threaded.branches)


def test_track_curves_keeps_order():
    structure = StructureClass(K.SYMMETRIC, 3)
    curves = [random_curve(structure, CurveKind.LINEAR_PENCIL, SeededRandomStream(9, i)) for i in range(4)]
    paths = track_curves(curves, 32, workers=3)
    for curve, path in zip(curves, paths):
        assert np.array_equal(path.branches, track(curve, 32).branches)


if __name__ == "__main__":
    pytest.main()
