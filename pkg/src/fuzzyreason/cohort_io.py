"""Reading and writing cohort datasets.

Two shapes are accepted. Records CSV/JSON holds one label per student and
stage. Pregraded JSON holds the fuzzy sets directly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Sequence, Union

from .fuzzy_core import (
    DEFAULT_STAGE_NAMES,
    CohortStageCounts,
    DomainError,
    FuzzyError,
    PerformanceLabel,
    StageFuzzySet,
    build_stage_set,
    parse_label,
)

RECORDS = "records"
PREGRADED = "pregraded"

Source = Union[bytes, str, IO]


class ParseError(FuzzyError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ModeError(FuzzyError):
    """The dataset is in the wrong ingestion mode for the requested operation."""


@dataclass(frozen=True)
class StudentRecord:
    student_id: str
    stage_labels: tuple[PerformanceLabel, ...]

    def __post_init__(self):
        if not self.student_id:
            raise DomainError("student_id must be nonempty")
        object.__setattr__(self, "stage_labels", tuple(parse_label(x) for x in self.stage_labels))


@dataclass(frozen=True)
class CohortDataset:
    group_name: str
    mode: str
    stage_names: tuple[str, ...]
    records: tuple[StudentRecord, ...] = ()
    stage_sets: tuple[StageFuzzySet, ...] = ()

    def __post_init__(self):
        if self.mode == RECORDS:
            if self.stage_sets or not self.records:
                raise DomainError("records mode needs records and no stage sets")
            ks = {len(r.stage_labels) for r in self.records}
            if ks != {len(self.stage_names)}:
                raise DomainError(f"records have stage counts {sorted(ks)}, expected {len(self.stage_names)}")
        elif self.mode == PREGRADED:
            if self.records or not self.stage_sets:
                raise DomainError("pregraded mode needs stage sets and no records")
            if len(self.stage_sets) != len(self.stage_names):
                raise DomainError("one stage name per stage set is required")
        else:
            raise DomainError(f"unknown dataset mode {self.mode!r}")

    @property
    def stage_count(self) -> int:
        return len(self.stage_names)

    def fuzzy_sets(self) -> tuple[StageFuzzySet, ...]:
        """Stage fuzzy sets, graded from counts in records mode."""
        if self.mode == PREGRADED:
            return self.stage_sets
        return tuple(build_stage_set(c) for c in tabulate_counts(self))


def tabulate_counts(dataset: CohortDataset) -> list[CohortStageCounts]:
    if dataset.mode != RECORDS:
        raise ModeError(f"group {dataset.group_name!r} is pregraded; per-student counts are unavailable")
    return [
        CohortStageCounts.from_labels(r.stage_labels[s] for r in dataset.records)
        for s in range(dataset.stage_count)
    ]


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return source


def sniff_format(text: str) -> str:
    return "json" if text.lstrip().startswith(("{", "[")) else "csv"


def parse_cohort(
    source: Source,
    format: str | None = None,
    group_name: str | None = None,
    stages: int | None = None,
) -> CohortDataset:
    """Parse a records CSV, a records JSON or a pregraded JSON document.

    ``stages`` pins the expected stage count for records input; ``None``
    takes it from the header. ``group_name`` is the fallback when the
    document names no group.
    """
    text = _read_text(source)
    if not text.strip():
        raise ParseError("empty input")
    fmt = format or sniff_format(text)
    if fmt == "csv":
        return _parse_csv(text, group_name or "group", stages)
    if fmt == "json":
        return _parse_json(text, group_name or "group", stages)
    raise ParseError(f"unknown input format {fmt!r}")


def _parse_csv(text: str, group_name: str, stages: int | None) -> CohortDataset:
    reader = csv.reader(io.StringIO(text))
    header = None
    records = []
    seen = set()
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if header is None:
            if len(cells) < 2 or cells[0].lower() != "student_id":
                raise ParseError("header must be 'student_id,<stage>,...'", line)
            header = cells
            if stages is not None and len(header) - 1 != stages:
                raise ParseError(f"header has {len(header) - 1} stage columns, expected {stages}", line)
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", line)
        sid = cells[0]
        if not sid:
            raise ParseError("empty student_id", line)
        if sid in seen:
            raise ParseError(f"duplicate student_id {sid!r}", line)
        seen.add(sid)
        try:
            labels = tuple(parse_label(c) for c in cells[1:])
        except DomainError as exc:
            raise ParseError(str(exc), line) from None
        records.append(StudentRecord(sid, labels))
    if header is None:
        raise ParseError("missing header")
    if not records:
        raise ParseError("no student rows")
    return CohortDataset(group_name, RECORDS, tuple(header[1:]), records=tuple(records))


def _parse_json(text: str, group_name: str, stages: int | None) -> CohortDataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    name = doc.get("group", group_name)
    if not isinstance(name, str):
        raise ParseError("'group' must be a string")
    if "stages" in doc and "records" in doc:
        raise ParseError("document has both 'stages' and 'records'")
    if "stages" in doc:
        return _parse_pregraded(doc["stages"], name)
    if "records" in doc:
        return _parse_json_records(doc, name, stages)
    raise ParseError("document needs 'stages' (pregraded) or 'records'")


def _parse_pregraded(stages_doc, name: str) -> CohortDataset:
    if not isinstance(stages_doc, list) or not stages_doc:
        raise ParseError("'stages' must be a nonempty list")
    names, sets = [], []
    for i, stage in enumerate(stages_doc):
        if not isinstance(stage, dict) or not isinstance(stage.get("memberships"), dict):
            raise ParseError(f"stage {i + 1}: expected an object with 'memberships'")
        stage_name = stage.get("name", DEFAULT_STAGE_NAMES[i] if i < len(DEFAULT_STAGE_NAMES) else f"stage_{i + 1}")
        try:
            sets.append(StageFuzzySet.from_mapping(stage["memberships"]))
        except DomainError as exc:
            raise ParseError(f"stage {i + 1}: {exc}") from None
        names.append(str(stage_name))
    return CohortDataset(name, PREGRADED, tuple(names), stage_sets=tuple(sets))


def _parse_json_records(doc: dict, name: str, stages: int | None) -> CohortDataset:
    rows = doc["records"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("'records' must be a nonempty list")
    k = len(rows[0].get("labels", [])) if isinstance(rows[0], dict) else 0
    stage_names = doc.get("stage_names") or list(DEFAULT_STAGE_NAMES[:k]) + [
        f"stage_{i + 1}" for i in range(len(DEFAULT_STAGE_NAMES), k)
    ]
    if stages is not None and len(stage_names) != stages:
        raise ParseError(f"dataset has {len(stage_names)} stages, expected {stages}")
    records = []
    seen = set()
    for i, row in enumerate(rows):
        where = f"record {i + 1}"
        if not isinstance(row, dict) or not isinstance(row.get("labels"), list):
            raise ParseError(f"{where}: expected an object with 'labels'")
        sid = str(row.get("student_id", "")).strip()
        if not sid:
            raise ParseError(f"{where}: empty student_id")
        if sid in seen:
            raise ParseError(f"{where}: duplicate student_id {sid!r}")
        seen.add(sid)
        if len(row["labels"]) != len(stage_names):
            raise ParseError(f"{where}: {len(row['labels'])} labels for {len(stage_names)} stages")
        try:
            records.append(StudentRecord(sid, tuple(parse_label(x) for x in row["labels"])))
        except DomainError as exc:
            raise ParseError(f"{where}: {exc}") from None
    return CohortDataset(name, RECORDS, tuple(stage_names), records=tuple(records))


def _fraction_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def dump_cohort(dataset: CohortDataset, format: str = "json") -> bytes:
    """Serialize a dataset so that ``parse_cohort`` gives it back unchanged."""
    if format == "csv":
        if dataset.mode != RECORDS:
            raise ModeError("only records datasets can be written as CSV")
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["student_id", *dataset.stage_names])
        for r in dataset.records:
            writer.writerow([r.student_id, *(lab.symbol for lab in r.stage_labels)])
        return out.getvalue().encode()
    if format != "json":
        raise DomainError(f"unknown format {format!r}")
    if dataset.mode == RECORDS:
        doc = {
            "group": dataset.group_name,
            "stage_names": list(dataset.stage_names),
            "records": [
                {"student_id": r.student_id, "labels": [lab.symbol for lab in r.stage_labels]}
                for r in dataset.records
            ],
        }
    else:
        doc = {
            "group": dataset.group_name,
            "stages": [
                {"name": n, "memberships": {k: _fraction_text(v) for k, v in s.as_dict().items()}}
                for n, s in zip(dataset.stage_names, dataset.stage_sets)
            ],
        }
    return (json.dumps(doc, indent=2) + "\n").encode()


def pregraded(name: str, stage_sets: Sequence[StageFuzzySet], stage_names: Sequence[str] | None = None) -> CohortDataset:
    stage_sets = tuple(stage_sets)
    if stage_names is None:
        stage_names = DEFAULT_STAGE_NAMES[: len(stage_sets)] + tuple(
            f"stage_{i + 1}" for i in range(len(DEFAULT_STAGE_NAMES), len(stage_sets))
        )
    return CohortDataset(name, PREGRADED, tuple(stage_names), stage_sets=stage_sets)

