"""
Run configuration and worker-pool settings.

Library functions take explicit keyword arguments; this module only holds
what is shared between them: the worker count read from the
``SPECTRAVOID_THREADS`` environment variable, an order-preserving parallel
map, and the ``RunConfig`` the command line builds from its arguments.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

from spectravoid.exceptions import InvalidInput
from spectravoid.structures.models import CollisionClass, StructureClass, StructureKind

logger = logging.getLogger(__name__)

THREADS_ENV = "SPECTRAVOID_THREADS"

DEFAULT_GRID = 401
DEFAULT_SAMPLES = 10_000
DEFAULT_TAIL_FRACTION = 0.1
DEFAULT_T_RANGE = (-1.0, 1.0)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(default: Optional[int] = None) -> int:
    """
    Number of workers allowed for node evaluation and Monte Carlo sampling.

    Parameters
    ----------
    default : Optional[int]
        Used when the environment variable is unset; falls back to the CPU count.

    Returns
    -------
    int
        A positive worker count.

    Raises
    ------
    InvalidInput
        If ``SPECTRAVOID_THREADS`` is set to something other than a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, default if default is not None else (os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError as error:
        raise InvalidInput(f"{THREADS_ENV} must be an integer", {"value": raw}) from error
    if value < 1:
        raise InvalidInput(f"{THREADS_ENV} must be positive", {"value": value})
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Maps ``fn`` over ``items`` on a thread pool; results keep the input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


_SAMPLING_COMMANDS = frozenset({"gaps", "codim", "track", "sweep"})


@dataclass(frozen=True)
class RunConfig:
    """
    Validated settings of one command-line run.

    Attributes
    ----------
    command : str
        Sub-command name.
    structure : Optional[StructureClass]
        Structure the command works on (``None`` for ``table`` and ``sweep``).
    curve : str
        Curve construction for ``track`` (``pencil``, ``polar``, ``cayley``, ``exp``).
    t_range : Tuple[float, float]
        Curve parameter interval.
    grid : int
        Initial grid size of ``track``.
    samples : int
        Monte Carlo sample count.
    seed : Optional[int]
        Base seed; mandatory for sampling commands.
    tail_fraction : float
        Tail fraction of the exponent estimator.
    collision : CollisionClass
        Collision class of ``codim``.
    out : Optional[Path]
        Output path; stdout when ``None``.
    output_format : str
        ``csv`` or ``json``.
    bins : Optional[int]
        Histogram bin count written next to ``gaps`` output.
    """

    command: str
    structure: Optional[StructureClass] = None
    curve: str = "pencil"
    t_range: Tuple[float, float] = DEFAULT_T_RANGE
    grid: int = DEFAULT_GRID
    samples: int = DEFAULT_SAMPLES
    seed: Optional[int] = None
    tail_fraction: float = DEFAULT_TAIL_FRACTION
    collision: CollisionClass = CollisionClass.PAIR_GENERIC
    out: Optional[Path] = None
    output_format: str = "csv"
    bins: Optional[int] = None
    direction_scale: Optional[float] = None

    def __post_init__(self):
        if self.command in _SAMPLING_COMMANDS and self.seed is None:
            raise InvalidInput(f"--seed is required for '{self.command}'")
        if self.seed is not None and self.seed < 0:
            raise InvalidInput("--seed must be nonnegative", {"seed": self.seed})
        if not self.t_range[1] > self.t_range[0]:
            raise InvalidInput("--t-max must exceed --t-min", {"t_range": self.t_range})
        if self.grid < 8:
            raise InvalidInput("--grid must be at least 8", {"grid": self.grid})
        if self.samples < 1:
            raise InvalidInput("--samples must be positive", {"samples": self.samples})
        if not 0.0 < self.tail_fraction <= 0.5:
            raise InvalidInput(
                "--tail-fraction must lie in (0, 0.5]", {"tail_fraction": self.tail_fraction}
            )
        if self.output_format not in ("csv", "json"):
            raise InvalidInput("--format must be csv or json", {"format": self.output_format})
        if self.bins is not None and self.bins < 1:
            raise InvalidInput("--bins must be positive", {"bins": self.bins})

    @classmethod
    def from_namespace(cls, args) -> "RunConfig":
        """
        Builds a RunConfig from an ``argparse.Namespace``.

        Parameters
        ----------
        args : argparse.Namespace
            Parsed command-line arguments.

        Returns
        -------
        RunConfig
            The validated configuration.

        Raises
        ------
        InvalidInput
            If the arguments describe an invalid structure or setting.
        """
        return cls(
            command=args.command,
            structure=structure_from_args(args),
            curve=getattr(args, "curve", "pencil"),
            t_range=(getattr(args, "t_min", DEFAULT_T_RANGE[0]), getattr(args, "t_max", DEFAULT_T_RANGE[1])),
            grid=getattr(args, "grid", DEFAULT_GRID),
            samples=getattr(args, "samples", DEFAULT_SAMPLES),
            seed=getattr(args, "seed", None),
            tail_fraction=getattr(args, "tail_fraction", DEFAULT_TAIL_FRACTION),
            collision=CollisionClass(getattr(args, "collision", CollisionClass.PAIR_GENERIC.value)),
            out=Path(args.out) if getattr(args, "out", None) else None,
            output_format=getattr(args, "format", "csv"),
            bins=getattr(args, "bins", None),
            direction_scale=getattr(args, "direction_scale", None),
        )


def structure_from_args(args) -> Optional[StructureClass]:
    """Builds the StructureClass described by ``--structure/--n/--m/--bandwidth/--det``."""
    name = getattr(args, "structure", None)
    if name is None:
        return None
    kind = StructureKind(name)
    n = getattr(args, "n", None)
    if n is None:
        raise InvalidInput("--n is required", {"structure": name})
    m = getattr(args, "m", None)
    det = getattr(args, "det", None)
    if kind is StructureKind.ORTHOGONAL and det is None:
        det = 1
    if kind is not StructureKind.ORTHOGONAL and det is not None:
        raise InvalidInput("--det applies to orthogonal structures only", {"structure": name})
    if kind in (StructureKind.RECT_REAL, StructureKind.RECT_COMPLEX) and m is None:
        m = n
    return StructureClass(
        kind=kind,
        n=n,
        m=m,
        bandwidth=getattr(args, "bandwidth", None),
        det_sign=det,
    )
