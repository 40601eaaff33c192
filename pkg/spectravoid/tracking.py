"""
Eigenvalue branch tracking along matrix curves.

``track`` samples a curve on a grid, labels the spectra consistently from
node to node by optimal assignment against a linear predictor and bisects
the grid wherever the labelling is not clearly resolved. ``detect_events``
then finds the parameters where two branches (or a branch and one of the
distinguished points 0, +1, -1) come closest, refines them by golden-section
search and sorts each closest approach into a crossing or an avoided
crossing.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Deque, List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize

from spectravoid.config import DEFAULT_GRID, parallel_map
from spectravoid.curves import MatrixCurve, evaluate
from spectravoid.exceptions import InvalidInput
from spectravoid.numkernel import as_matrix, eig_selfadjoint, eig_unitary_angles, svd, wrap_angle
from spectravoid.structures.models import CollisionClass, StructureClass, StructureKind
from spectravoid.structures.spectrum import orthogonal_angle_pairs, skew_pair_values

logger = logging.getLogger(__name__)

MIN_GRID = 8
MIN_STEP_RTOL = 1e-12
# refinement stops adding nodes past this multiple of the initial grid
MAX_NODE_FACTOR = 64
EVENT_FRACTION = 0.1
CROSS_RTOL = 1e-8
AVOID_RTOL = 1e-6
REFINE_TOL = 1e-12
_DEDUP_RTOL = 1e-9


class Metric(Enum):
    LINEAR = "linear"
    CIRCULAR = "circular"


class Classification(Enum):
    CROSSING = "Crossing"
    AVOIDED = "Avoided"
    AMBIGUOUS = "Ambiguous"


@dataclass(eq=False)
class SpectralPath:
    """
    Matched eigenvalue branches on a (possibly refined) parameter grid.

    Attributes
    ----------
    t_grid : np.ndarray
        Ascending parameters, shape ``(N,)``.
    branches : np.ndarray
        ``branches[i, j]`` is branch ``j`` at ``t_grid[i]``, shape ``(N, B)``.
    metric : Metric
        ``CIRCULAR`` for unitary angles, ``LINEAR`` otherwise.
    ambiguous_intervals : List[Tuple[float, float]]
        Grid intervals whose matching stayed unresolved at the minimum step.
    """

    t_grid: np.ndarray
    branches: np.ndarray
    metric: Metric
    ambiguous_intervals: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def branch_count(self) -> int:
        return self.branches.shape[1]

    @property
    def node_count(self) -> int:
        return self.t_grid.size


@dataclass(frozen=True)
class GapEvent:
    """
    Closest approach of two branches, or of one branch and a distinguished point.

    Attributes
    ----------
    t_star : float
        Refined parameter of the closest approach.
    pair : Tuple[int, Optional[int]]
        Branch indices ``(j, k)``; ``(j, None)`` for branch-vs-point events.
    min_gap : float
        Distance at ``t_star``.
    location : float
        Spectral value at the closest approach (the point itself for point events).
    classification : Classification
        Crossing, Avoided or Ambiguous.
    collision_class : CollisionClass
        Where the collision sits.
    """

    t_star: float
    pair: Tuple[int, Optional[int]]
    min_gap: float
    location: float
    classification: Classification
    collision_class: CollisionClass


def metric_for(structure: StructureClass) -> Metric:
    return Metric.CIRCULAR if structure.kind is StructureKind.UNITARY else Metric.LINEAR


def branch_values(A, structure: StructureClass) -> np.ndarray:
    """
    Branch coordinates of ``A``, sorted ascending.

    These are the real eigenvalues of symmetric and Hermitian classes, the
    imaginary parts of skew-Hermitian ones, the ``a_i`` of skew-symmetric
    pairs, one angle in [0, pi] per non-forced conjugate pair of an
    orthogonal matrix, every eigen-angle of a unitary matrix and the singular
    values of a rectangular matrix. The count is fixed by the structure.
    """
    A = as_matrix(A)
    kind = structure.kind
    if kind in (StructureKind.SYMMETRIC, StructureKind.HERMITIAN):
        return eig_selfadjoint(A)[0]
    if kind is StructureKind.SKEW_HERMITIAN:
        return eig_selfadjoint(-1j * A)[0]
    if kind is StructureKind.SKEW_SYMMETRIC:
        return skew_pair_values(A)
    if kind is StructureKind.ORTHOGONAL:
        return orthogonal_angle_pairs(A, structure)
    if kind is StructureKind.UNITARY:
        return eig_unitary_angles(A)
    return np.sort(svd(A)[1])


def _distance(x, y, metric: Metric):
    diff = np.asarray(x) - np.asarray(y)
    if metric is Metric.CIRCULAR:
        return np.abs(wrap_angle(diff))
    return np.abs(diff)


def _same_node_gap(values: np.ndarray, metric: Metric) -> float:
    if values.size < 2:
        return np.inf
    ordered = np.sort(values)
    gaps = np.diff(ordered)
    if metric is Metric.CIRCULAR:
        gaps = np.append(gaps, 2.0 * np.pi - (ordered[-1] - ordered[0]))
    return float(gaps.min())


def _predict(
    previous: Optional[Tuple[float, np.ndarray]],
    current: Tuple[float, np.ndarray],
    t_next: float,
    metric: Metric,
) -> np.ndarray:
    t_cur, x_cur = current
    if previous is None:
        return x_cur
    t_prev, x_prev = previous
    step = x_cur - x_prev
    if metric is Metric.CIRCULAR:
        step = wrap_angle(step)
    return x_cur + step * (t_next - t_cur) / (t_cur - t_prev)


def _assign(predicted: np.ndarray, values: np.ndarray, metric: Metric) -> Tuple[np.ndarray, float]:
    """Optimal labelling of ``values`` against ``predicted``; returns it and its worst residual."""
    cost = _distance(predicted[:, None], values[None, :], metric)
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    order = np.empty_like(cols)
    order[rows] = cols
    return values[order], float(cost[rows, cols].max()) if rows.size else 0.0


def track(
    curve: MatrixCurve,
    initial_grid: int = DEFAULT_GRID,
    workers: Optional[int] = None,
) -> SpectralPath:
    """
    Matched eigenvalue branches along a curve.

    Parameters
    ----------
    curve : MatrixCurve
        The curve; its whole domain is tracked.
    initial_grid : int
        Number of equally spaced starting nodes (at least 8).
    workers : Optional[int]
        Worker count for evaluating the starting nodes.

    Returns
    -------
    SpectralPath
        Branches whose node values equal the sorted branch coordinates of
        ``evaluate(curve, t)`` as multisets at every node.

    Raises
    ------
    InvalidInput
        If ``initial_grid`` is below 8.
    """
    if initial_grid < MIN_GRID:
        raise InvalidInput("initial grid needs at least 8 nodes", {"initial_grid": initial_grid})
    structure = curve.structure
    metric = metric_for(structure)
    t_min, t_max = curve.domain
    min_step = MIN_STEP_RTOL * (t_max - t_min)
    max_nodes = MAX_NODE_FACTOR * initial_grid

    def spectrum_at(t: float) -> np.ndarray:
        return branch_values(evaluate(curve, t), structure)

    grid = np.linspace(t_min, t_max, initial_grid)
    values = parallel_map(spectrum_at, grid, workers)
    pending: Deque[Tuple[float, np.ndarray]] = deque(zip(grid[1:], values[1:]))

    times = [float(grid[0])]
    matched = [values[0]]
    ambiguous: List[Tuple[float, float]] = []
    previous: Optional[Tuple[float, np.ndarray]] = None
    current = (times[0], matched[0])
    inserted = 0

    while pending:
        t_next, raw = pending[0]
        labelled, residual = _assign(_predict(previous, current, t_next, metric), raw, metric)
        bound = 0.5 * min(_same_node_gap(current[1], metric), _same_node_gap(raw, metric))
        if residual > bound:
            width = t_next - current[0]
            if width > min_step and initial_grid + inserted < max_nodes:
                t_mid = 0.5 * (current[0] + t_next)
                pending.appendleft((t_mid, spectrum_at(t_mid)))
                inserted += 1
                logger.debug("refining [%.15g, %.15g]: residual %.3g > %.3g", current[0], t_next, residual, bound)
                continue
            ambiguous.append((current[0], float(t_next)))
        pending.popleft()
        previous, current = current, (float(t_next), labelled)
        times.append(float(t_next))
        matched.append(labelled)

    if ambiguous:
        logger.warning(
            "%d grid intervals left unresolved while tracking %s", len(ambiguous), structure.describe()
        )
    logger.debug("tracked %d nodes (%d inserted) on %s", len(times), inserted, structure.describe())
    return SpectralPath(
        t_grid=np.array(times),
        branches=np.vstack(matched),
        metric=metric,
        ambiguous_intervals=ambiguous,
    )


def track_curves(
    curves: Sequence[MatrixCurve],
    initial_grid: int = DEFAULT_GRID,
    workers: Optional[int] = None,
) -> List[SpectralPath]:
    """Tracks several curves concurrently; paths come back in input order."""
    return parallel_map(lambda curve: track(curve, initial_grid, workers=1), curves, workers)


def _distinguished_points(structure: StructureClass) -> List[Tuple[float, CollisionClass]]:
    if structure.kind is StructureKind.SKEW_SYMMETRIC:
        return [(0.0, CollisionClass.AT_ZERO)]
    if structure.kind is StructureKind.ORTHOGONAL:
        return [(0.0, CollisionClass.AT_PLUS_ONE), (np.pi, CollisionClass.AT_MINUS_ONE)]
    return []


def _local_minima(gap: np.ndarray, threshold: float) -> List[int]:
    last = gap.size - 1
    found = []
    for i in range(gap.size):
        if gap[i] >= threshold:
            continue
        if i > 0 and gap[i] > gap[i - 1]:
            continue
        if i < last and gap[i] > gap[i + 1]:
            continue
        found.append(i)
    return found


def _refine(objective: Callable[[float], float], t_grid: np.ndarray, i: int) -> Tuple[float, float]:
    """
    Minimizes ``objective`` over the grid interval around node ``i``.

    Golden-section search runs on the offset variable ``u = 1 + (t - a)/(c - a)``
    so its relative tolerance is a tolerance on the bracket width.
    """
    a = float(t_grid[max(i - 1, 0)])
    b = float(t_grid[i])
    c = float(t_grid[min(i + 1, t_grid.size - 1)])
    best_t, best_gap = b, objective(b)
    if c <= a:
        return best_t, best_gap
    width = c - a

    def in_offset(u: float) -> float:
        return objective(a + (u - 1.0) * width)

    f_a, f_c = objective(a), objective(c)
    u_b = 1.0 + (b - a) / width
    if a < b < c and best_gap < f_a and best_gap < f_c:
        result = scipy.optimize.minimize_scalar(
            in_offset, bracket=(1.0, u_b, 2.0), method="golden", tol=REFINE_TOL
        )
    else:
        result = scipy.optimize.minimize_scalar(
            in_offset, bounds=(1.0, 2.0), method="bounded", options={"xatol": REFINE_TOL}
        )
    u_star = float(np.clip(result.x, 1.0, 2.0))
    candidates = [(best_t, best_gap), (a, f_a), (c, f_c), (a + (u_star - 1.0) * width, float(result.fun))]
    return min(candidates, key=lambda candidate: candidate[1])


def _classify(min_gap: float, tol_cross: float, tol_avoid: float) -> Classification:
    if min_gap <= tol_cross:
        return Classification.CROSSING
    if min_gap >= tol_avoid:
        return Classification.AVOIDED
    return Classification.AMBIGUOUS


def _dedupe(events: List[GapEvent], t_tol: float) -> List[GapEvent]:
    kept: List[GapEvent] = []
    for event in sorted(events, key=lambda e: e.min_gap):
        duplicate = any(
            (other.pair == event.pair or (other.pair[1] is None and event.pair[1] is None))
            and other.collision_class is event.collision_class
            and abs(other.t_star - event.t_star) <= t_tol
            for other in kept
        )
        if not duplicate:
            kept.append(event)
    return sorted(kept, key=lambda e: (e.t_star, e.pair[0]))


def detect_events(
    path: SpectralPath,
    curve: MatrixCurve,
    event_fraction: float = EVENT_FRACTION,
) -> List[GapEvent]:
    """
    Closest approaches along a tracked path.

    Parameters
    ----------
    path : SpectralPath
        Output of ``track`` for ``curve``.
    curve : MatrixCurve
        The tracked curve, re-evaluated during refinement.
    event_fraction : float
        Local gap minima below ``event_fraction`` times the median same-node
        gap become events.

    Returns
    -------
    List[GapEvent]
        Events sorted by ``t_star``. Pair events are emitted for every class,
        branch-vs-point events for skew-symmetric (point 0) and orthogonal
        (angles 0 and pi) classes. A refined gap at most ``1e-8`` times the
        spectral scale is a Crossing, one at least ``1e-6`` times the scale
        is Avoided, anything between is Ambiguous.
    """
    structure = curve.structure
    metric = path.metric
    t_grid, X = path.t_grid, path.branches
    nodes, count = X.shape
    if nodes == 0:
        return []
    scale = float(np.abs(X).max()) or 1.0
    tol_cross, tol_avoid = CROSS_RTOL * scale, AVOID_RTOL * scale

    if count >= 2:
        ordered = np.sort(X, axis=1)
        same_node = np.diff(ordered, axis=1).ravel()
        reference = float(np.median(same_node))
    else:
        reference = scale
    threshold = event_fraction * reference

    def spectrum_at(t: float) -> np.ndarray:
        return branch_values(evaluate(curve, t), structure)

    events: List[GapEvent] = []
    for j in range(count):
        for k in range(j + 1, count):
            gap = _distance(X[:, j], X[:, k], metric)
            for i in _local_minima(gap, threshold):
                center = 0.0
                if metric is Metric.CIRCULAR:
                    center = float(wrap_angle(X[i, j] + 0.5 * wrap_angle(X[i, k] - X[i, j])))
                at_node = _centered(X[i], center, metric)
                r = _rank(at_node, X[i, j], center, metric)
                s = _rank(at_node, X[i, k], center, metric)
                if r == s:
                    s = r + 1 if r + 1 < count else r - 1

                def pair_gap(t: float, r=r, s=s, center=center) -> float:
                    y = _centered(spectrum_at(t), center, metric)
                    return float(abs(y[r] - y[s]))

                t_star, min_gap = _refine(pair_gap, t_grid, i)
                y = _centered(spectrum_at(t_star), center, metric)
                location = 0.5 * (y[r] + y[s])
                if metric is Metric.CIRCULAR:
                    location = float(wrap_angle(center + location))
                events.append(
                    GapEvent(
                        t_star=float(t_star),
                        pair=(j, k),
                        min_gap=float(min_gap),
                        location=float(location),
                        classification=_classify(min_gap, tol_cross, tol_avoid),
                        collision_class=CollisionClass.PAIR_GENERIC,
                    )
                )

    for point, collision in _distinguished_points(structure):
        for j in range(count):
            distance = np.abs(X[:, j] - point)
            for i in _local_minima(distance, threshold):
                r = int(np.argmin(np.abs(np.sort(X[i]) - X[i, j])))

                def point_gap(t: float, r=r, point=point) -> float:
                    return float(abs(spectrum_at(t)[r] - point))

                t_star, min_gap = _refine(point_gap, t_grid, i)
                events.append(
                    GapEvent(
                        t_star=float(t_star),
                        pair=(j, None),
                        min_gap=float(min_gap),
                        location=float(point),
                        classification=_classify(min_gap, tol_cross, tol_avoid),
                        collision_class=collision,
                    )
                )

    t_min, t_max = curve.domain
    events = _dedupe(events, _DEDUP_RTOL * (t_max - t_min))
    crossings = sum(e.classification is Classification.CROSSING for e in events)
    logger.info(
        "%s: %d events, %d crossings (threshold %.3g, tol_cross %.3g)",
        structure.describe(),
        len(events),
        crossings,
        threshold,
        tol_cross,
    )
    return events


def _centered(values: np.ndarray, center: float, metric: Metric) -> np.ndarray:
    """Sorted values; angles are measured from ``center`` so the cut sits opposite it."""
    if metric is Metric.CIRCULAR:
        return np.sort(wrap_angle(np.asarray(values) - center))
    return np.sort(values)


def _rank(ordered: np.ndarray, value: float, center: float, metric: Metric) -> int:
    offset = float(wrap_angle(value - center)) if metric is Metric.CIRCULAR else value
    return int(np.argmin(np.abs(ordered - offset)))
