"""
Command line entry point: ``spectravoid {track,gaps,codim,table,sweep}``.

Exit status is 0 on success (or a Pass verdict), 1 on a Fail or
Inconclusive verdict, 2 on invalid input, 3 on I/O errors and 4 when an
internal guarantee breaks. Logs go to stderr; reports go to ``--out`` or
stdout.
"""

import argparse
import contextlib
import csv
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import IO, Iterator, List, Optional, Sequence

from spectravoid import __version__
from spectravoid.config import (
    DEFAULT_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_T_RANGE,
    DEFAULT_TAIL_FRACTION,
    RunConfig,
)
from spectravoid.curves import CurveKind, random_curve
from spectravoid.exceptions import (
    DegenerateInput,
    InsufficientData,
    InternalError,
    InvalidInput,
    SingularInput,
    StructureViolation,
)
from spectravoid.gapstats import Verdict, collect_gaps, gap_histogram, table_sweep, verify_codimension
from spectravoid.models.records import (
    CodimReport,
    EventRecord,
    TableRow,
    dump_json,
    gap_columns,
    write_branches_csv,
    write_gaps_csv,
)
from spectravoid.structures.dimensions import table_rows
from spectravoid.structures.models import CollisionClass, StructureKind
from spectravoid.structures.sampler import SeededRandomStream
from spectravoid.tracking import detect_events, track

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


@contextlib.contextmanager
def _output(path: Optional[Path]) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as stream:
        yield stream


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}.json")


def cmd_track(config: RunConfig) -> int:
    """Tracks a random curve; writes branches (CSV or JSON) and a sibling events JSON."""
    if config.structure is None:
        raise InvalidInput("track needs --structure and --n")
    curve = random_curve(
        config.structure,
        CurveKind(config.curve),
        SeededRandomStream(config.seed, 0),
        domain=config.t_range,
        direction_scale=config.direction_scale,
    )
    path = track(curve, config.grid)
    events = [EventRecord.from_event(event) for event in detect_events(path, curve)]

    if config.out is None:
        dump_json(events, sys.stdout)
        return EXIT_OK
    with _output(config.out) as stream:
        if config.output_format == "csv":
            write_branches_csv(path, stream)
        else:
            dump_json(
                {
                    "t": [float(t) for t in path.t_grid],
                    "branches": path.branches.tolist(),
                    "metric": path.metric.value,
                    "ambiguous_intervals": [list(interval) for interval in path.ambiguous_intervals],
                },
                stream,
            )
    with _output(_sibling(config.out, "events")) as stream:
        dump_json(events, stream)
    logger.info("wrote %d nodes and %d events to %s", path.node_count, len(events), config.out)
    return EXIT_OK


def cmd_gaps(config: RunConfig) -> int:
    """One row of minimal gaps per sample; optional histogram JSON next to ``--out``."""
    if config.structure is None:
        raise InvalidInput("gaps needs --structure and --n")
    if config.bins is not None and config.out is None:
        raise InvalidInput("--bins needs --out for the histogram file")
    samples = collect_gaps(config.structure, config.samples, config.seed)
    with _output(config.out) as stream:
        if config.output_format == "csv":
            columns = write_gaps_csv(samples, stream)
        else:
            columns = gap_columns(samples)
            dump_json(
                [{c.label: entry.get(c) for c in columns} for entry in samples],
                stream,
            )
    if config.bins is not None:
        histograms = {}
        for collision in columns:
            counts, edges = gap_histogram([s[collision] for s in samples if collision in s], config.bins)
            histograms[collision.label] = {"counts": counts.tolist(), "edges": edges.tolist()}
        with _output(_sibling(config.out, "hist")) as stream:
            dump_json(histograms, stream)
    return EXIT_OK


def cmd_codim(config: RunConfig) -> int:
    """Codimension report of one structure and collision class; exit 1 unless Pass."""
    if config.structure is None:
        raise InvalidInput("codim needs --structure and --n")
    estimate = verify_codimension(
        config.structure,
        config.collision,
        samples=config.samples,
        seed=config.seed,
        tail_fraction=config.tail_fraction,
    )
    report = CodimReport.from_estimate(config.structure, config.collision, estimate)
    with _output(config.out) as stream:
        dump_json(report, stream)
    return EXIT_OK if estimate.verdict is Verdict.PASS else EXIT_FAIL


def cmd_table(config: RunConfig) -> int:
    """Prints every summary row with its ambient dimension and codimension."""
    rows = [TableRow.from_entry(entry) for entry in table_rows()]
    with _output(config.out) as stream:
        if config.output_format == "json":
            dump_json(rows, stream)
        else:
            writer = csv.DictWriter(stream, fieldnames=list(asdict(rows[0])), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(asdict(row))
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    """Runs every sweep case; exit 1 if any verdict is not Pass."""
    reports: List[CodimReport] = []
    for case in table_sweep():
        estimate = verify_codimension(
            case.structure,
            case.collision,
            samples=config.samples,
            seed=config.seed,
            tail_fraction=config.tail_fraction,
        )
        if estimate.verdict is not Verdict.PASS and case.deviation:
            logger.warning("%s: known deviation: %s", case.label, case.deviation)
        reports.append(CodimReport.from_estimate(case.structure, case.collision, estimate, case.label))
    with _output(config.out) as stream:
        dump_json(reports, stream)
    failed = [report.label for report in reports if not report.passed]
    if failed:
        logger.warning("sweep rows without Pass: %s", ", ".join(failed))
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "track": cmd_track,
    "gaps": cmd_gaps,
    "codim": cmd_codim,
    "table": cmd_table,
    "sweep": cmd_sweep,
}


def _structure_arguments() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--structure", choices=[kind.value for kind in StructureKind])
    parent.add_argument("--n", type=int, help="size, or column count of rectangular classes")
    parent.add_argument("--m", type=int, help="row count of rectangular classes")
    parent.add_argument("--bandwidth", type=int, help="bandwidth of (skew-)symmetric/Hermitian classes")
    parent.add_argument("--det", type=int, choices=[1, -1], help="determinant of orthogonal classes")
    return parent


def _output_arguments(formats: Sequence[str] = ("csv", "json")) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--out", help="output path (stdout when omitted)")
    parent.add_argument("--format", choices=list(formats), default=formats[0])
    return parent


def _sampling_arguments() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    parent.add_argument("--seed", type=int, help="base seed (required)")
    parent.add_argument("--tail-fraction", type=float, default=DEFAULT_TAIL_FRACTION)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectravoid",
        description="Eigenvalue crossings and avoidance on structured matrix manifolds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)
    structure, output, sampling = _structure_arguments(), _output_arguments(), _sampling_arguments()

    track_parser = commands.add_parser(
        "track", parents=[structure, output], help="track eigenvalue branches along a random curve"
    )
    track_parser.add_argument("--curve", choices=[kind.value for kind in CurveKind], default="pencil")
    track_parser.add_argument("--t-min", type=float, default=DEFAULT_T_RANGE[0])
    track_parser.add_argument("--t-max", type=float, default=DEFAULT_T_RANGE[1])
    track_parser.add_argument("--grid", type=int, default=DEFAULT_GRID)
    track_parser.add_argument("--seed", type=int, help="seed of the random curve (required)")
    track_parser.add_argument(
        "--direction-scale", type=float, help="multiplies the direction operand of the curve"
    )

    gaps_parser = commands.add_parser(
        "gaps", parents=[structure, output, sampling], help="minimal-gap samples per collision class"
    )
    gaps_parser.add_argument("--bins", type=int, help="also write a histogram with this many bins")

    codim_parser = commands.add_parser(
        "codim",
        parents=[structure, _output_arguments(("json",)), sampling],
        help="estimate a codimension",
    )
    codim_parser.add_argument(
        "--collision",
        choices=[collision.value for collision in CollisionClass],
        default=CollisionClass.PAIR_GENERIC.value,
    )

    commands.add_parser(
        "table", parents=[_output_arguments(("json", "csv"))], help="print the codimension table"
    )
    commands.add_parser(
        "sweep",
        parents=[_output_arguments(("json",)), sampling],
        help="verify every codimension table row",
    )
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one command.

    Parameters
    ----------
    argv : Optional[Sequence[str]]
        Arguments without the program name; ``sys.argv[1:]`` when omitted.

    Returns
    -------
    int
        Process exit status.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = RunConfig.from_namespace(args)
        return COMMANDS[config.command](config)
    except (InvalidInput, StructureViolation, SingularInput, DegenerateInput, InsufficientData) as error:
        logger.error("%s", error)
        return EXIT_INVALID
    except InternalError as error:
        logger.error("internal error: %s", error)
        return EXIT_INTERNAL
    except OSError as error:
        logger.error("I/O error: %s", error)
        return EXIT_IO

