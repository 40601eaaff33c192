"""
Serializable records of tracking runs, codimension reports and the summary table.

Bulk numbers go to CSV, reports and events to JSON. Floats are written with
17 significant digits in CSV and with ``repr`` precision in JSON, both of
which read back to the identical double.
"""

import csv
import json
from dataclasses import asdict, dataclass
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spectravoid.gapstats import CodimEstimate, GapSample
from spectravoid.structures.dimensions import TableEntry
from spectravoid.structures.models import CollisionClass, StructureClass
from spectravoid.tracking import GapEvent, SpectralPath

BRANCH_COLUMNS = ("t", "branch", "value")


def format_float(value: float) -> str:
    return format(float(value), ".17g")


@dataclass
class EventRecord:
    t_star: float
    pair: List[Optional[int]]
    min_gap: float
    location: float
    classification: str
    collision_class: str

    @classmethod
    def from_event(cls, event: GapEvent) -> "EventRecord":
        return cls(
            t_star=event.t_star,
            pair=list(event.pair),
            min_gap=event.min_gap,
            location=event.location,
            classification=event.classification.value,
            collision_class=event.collision_class.label,
        )


@dataclass
class CodimReport:
    structure: str
    collision: str
    n: int
    samples: int
    exponent: float
    stderr: float
    expected: int
    verdict: str
    tail_fraction: float
    lstsq_exponent: Optional[float] = None
    label: str = ""

    @classmethod
    def from_estimate(
        cls,
        structure: StructureClass,
        collision: CollisionClass,
        estimate: CodimEstimate,
        label: str = "",
    ) -> "CodimReport":
        return cls(
            structure=structure.describe(),
            collision=collision.label,
            n=structure.n,
            samples=estimate.sample_count,
            exponent=estimate.exponent,
            stderr=estimate.stderr,
            expected=estimate.expected,
            verdict=estimate.verdict.value,
            tail_fraction=estimate.tail_fraction,
            lstsq_exponent=estimate.lstsq_exponent,
            label=label,
        )

    @property
    def passed(self) -> bool:
        return self.verdict == "Pass"


@dataclass
class TableRow:
    label: str
    structure: str
    n: int
    ambient: int
    codimension: Optional[int]
    formula: str
    note: str = ""

    @classmethod
    def from_entry(cls, entry: TableEntry) -> "TableRow":
        return cls(
            label=entry.label,
            structure=entry.structure.describe(),
            n=entry.structure.n,
            ambient=entry.ambient,
            codimension=entry.codimension,
            formula=entry.formula,
            note=entry.note,
        )


class RecordParser:
    """
    Parser class to turn decoded JSON back into record dataclasses.

    Methods
    -------
    parse_event(data: Dict) -> EventRecord
        Parses one event.
    parse_events(data: Sequence[Dict]) -> List[EventRecord]
        Parses an events file.
    parse_report(data: Dict) -> CodimReport
        Parses one codimension report.
    parse_table_row(data: Dict) -> TableRow
        Parses one summary table row.
    """

    @staticmethod
    def parse_event(data: Dict) -> EventRecord:
        """
        Builds an ``EventRecord`` from one decoded JSON object.

        Parameters
        ----------
        data : Dict
            Object with the keys written by ``EventRecord``.

        Returns
        -------
        EventRecord
            The record; ``pair`` entries may be ``None`` for collisions at a point.
        """
        pair = data["pair"]
        return EventRecord(
            t_star=float(data["t_star"]),
            pair=[None if index is None else int(index) for index in pair],
            min_gap=float(data["min_gap"]),
            location=float(data["location"]),
            classification=data["classification"],
            collision_class=data["collision_class"],
        )

    @staticmethod
    def parse_events(data: Sequence[Dict]) -> List[EventRecord]:
        return [RecordParser.parse_event(item) for item in data]

    @staticmethod
    def parse_report(data: Dict) -> CodimReport:
        """
        Parses the JSON data into a CodimReport object.

        Parameters
        ----------
        data : Dict
            One decoded report.

        Returns
        -------
        CodimReport
            The parsed report.
        """
        lstsq = data.get("lstsq_exponent")
        return CodimReport(
            structure=data["structure"],
            collision=data["collision"],
            n=int(data["n"]),
            samples=int(data["samples"]),
            exponent=float(data["exponent"]),
            stderr=float(data["stderr"]),
            expected=int(data["expected"]),
            verdict=data["verdict"],
            tail_fraction=float(data["tail_fraction"]),
            lstsq_exponent=None if lstsq is None else float(lstsq),
            label=data.get("label", ""),
        )

    @staticmethod
    def parse_table_row(data: Dict) -> TableRow:
        codim = data.get("codimension")
        return TableRow(
            label=data["label"],
            structure=data["structure"],
            n=int(data["n"]),
            ambient=int(data["ambient"]),
            codimension=None if codim is None else int(codim),
            formula=data["formula"],
            note=data.get("note", ""),
        )


def dump_json(payload, stream: IO[str]) -> None:
    """Writes dataclass records (or lists of them) as indented JSON."""

    def encode(item):
        if hasattr(item, "__dataclass_fields__"):
            return asdict(item)
        if isinstance(item, list):
            return [encode(entry) for entry in item]
        return item

    json.dump(encode(payload), stream, indent=2, allow_nan=False)
    stream.write("\n")


def write_branches_csv(path: SpectralPath, stream: IO[str]) -> None:
    """One ``t,branch,value`` row per node and branch."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(BRANCH_COLUMNS)
    for t, values in zip(path.t_grid, path.branches):
        for branch, value in enumerate(values):
            writer.writerow((format_float(t), branch, format_float(value)))


def read_branches_csv(stream: IO[str]) -> Tuple[np.ndarray, np.ndarray]:
    """Reads a branches CSV back into ``(t_grid, branches)``."""
    rows = list(csv.DictReader(stream))
    times: List[float] = []
    table: Dict[float, Dict[int, float]] = {}
    for row in rows:
        t = float(row["t"])
        if t not in table:
            times.append(t)
            table[t] = {}
        table[t][int(row["branch"])] = float(row["value"])
    branch_count = max((len(entry) for entry in table.values()), default=0)
    branches = np.array([[table[t][j] for j in range(branch_count)] for t in times])
    return np.array(times), branches.reshape(len(times), branch_count)


def gap_columns(samples: Iterable[GapSample]) -> List[CollisionClass]:
    """Collision classes present in any sample, in declaration order."""
    present = set()
    for entry in samples:
        present.update(entry.values)
    return [collision for collision in CollisionClass if collision in present]


def write_gaps_csv(samples: Sequence[GapSample], stream: IO[str]) -> List[CollisionClass]:
    """One row per sample, one column per collision class (empty when absent)."""
    columns = gap_columns(samples)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["sample"] + [collision.label for collision in columns])
    for index, entry in enumerate(samples):
        cells = [format_float(entry[c]) if c in entry else "" for c in columns]
        writer.writerow([index] + cells)
    return columns


def read_gaps_csv(stream: IO[str]) -> List[GapSample]:
    by_label = {collision.label: collision for collision in CollisionClass}
    samples = []
    for row in csv.DictReader(stream):
        values = {
            by_label[name]: float(cell) for name, cell in row.items() if name != "sample" and cell != ""
        }
        samples.append(GapSample(values))
    return samples
