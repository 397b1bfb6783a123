"""JSON-lines report persistence and plot-ready CSV output."""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Mapping, TextIO

from .field import FieldContext
from .frs import CodeParams, Word
from .poly import Poly

if TYPE_CHECKING:
    from .harness import ExperimentReport

logger = logging.getLogger(__name__)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def to_jsonable(obj: Any) -> Any:
    """Convert report values to JSON types: rationals become "num/den"."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Word):
        return list(obj.flat())
    if isinstance(obj, Poly):
        return list(obj.coeffs)
    if isinstance(obj, FieldContext):
        return {"q": obj.q, "gamma": obj.gamma}
    if isinstance(obj, CodeParams):
        return obj.describe()
    if isinstance(obj, Mapping):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"Cannot serialize {type(obj).__name__} into a report")


def report_lines(report: ExperimentReport, include_timing: bool = False) -> list[str]:
    """One JSON object per trial, then the trailing aggregate object."""
    lines = [json.dumps(to_jsonable(record), sort_keys=True) for record in report.records]
    aggregate = {"config": report.config_echo, "seed": report.seed, **report.aggregate}
    if include_timing:
        aggregate["wall_clock"] = report.wall_clock
    lines.append(json.dumps({"aggregate": to_jsonable(aggregate)}, sort_keys=True))
    return lines


def write_report(
    report: ExperimentReport,
    out: Path | str | TextIO | None = None,
    include_timing: bool = False,
    append: bool = False,
) -> bool:
    """Write a report as JSON lines to a file path, an open stream or stdout.

    Returns:
        True on success, False if the file could not be written.
    """
    text = "\n".join(report_lines(report, include_timing)) + "\n"
    if out is None:
        out = sys.stdout
    if hasattr(out, "write"):
        out.write(text)
        out.flush()
        return True
    try:
        with open(out, "a" if append else "w") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Failed to write report file: {e}")
        return False
    return True


def load_report(path: Path | str) -> list[dict[str, Any]]:
    """Read a JSON-lines report back, skipping malformed lines.

    Args:
        path: Report file.

    Returns:
        Parsed objects in file order (trial records and aggregates).
    """
    path = Path(path)
    objects: list[dict[str, Any]] = []
    try:
        with open(path) as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    objects.append(json.loads(line))
                except json.JSONDecodeError as e:
                    logger.warning(f"Skipping malformed line {lineno} of {path}: {e}")
    except OSError as e:
        logger.warning(f"Failed to load report file: {e}")
    return objects


def aggregates(objects: Iterable[Mapping[str, Any]]) -> list[dict[str, Any]]:
    return [obj["aggregate"] for obj in objects if "aggregate" in obj]


def write_trend_csv(rows: Iterable[Mapping[str, Any]], path: Path | str | TextIO) -> None:
    """Write trend rows (one per grid point) as CSV with a header line."""
    rows = [to_jsonable(row) for row in rows]
    if not rows:
        logger.warning("No trend rows to write")
        return
    fieldnames = list(rows[0])

    def _emit(f: TextIO) -> None:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)

    if hasattr(path, "write"):
        _emit(path)
        return
    try:
        with open(path, "w", newline="") as f:
            _emit(f)
    except OSError as e:
        logger.error(f"Failed to write trend file: {e}")
