"""Rendering reports as key=value text and CSV rows."""

from __future__ import annotations

from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

from warpiso.constants import CSV_SIGNIFICANT_DIGITS


def format_number(value: float) -> str:
    """17 significant digits, enough to round-trip any double."""

    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def format_value(value: Any) -> str:
    match value:
        case None:
            return "none"
        case bool():
            return "true" if value else "false"
        case Enum():
            return str(value.value)
        case int():
            return str(value)
        case float():
            return format_number(value)
        case tuple() | list():
            return ";".join(format_value(item) for item in value)
    return str(value)


def flatten(report: Any, prefix: str = "") -> dict[str, Any]:
    """Flatten a (possibly nested) dataclass into dotted keys."""

    data = asdict(report) if is_dataclass(report) and not isinstance(report, type) else report
    flat: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def render_key_values(report: Any, prefix: str = "") -> str:
    """One ``key=value`` line per scalar field of `report`."""

    return "\n".join(
        f"{key}={format_value(value)}" for key, value in flatten(report, prefix).items()
    )


def csv_header(report: Any) -> str:
    return ",".join(flatten(report))


def csv_row(report: Any) -> str:
    return ",".join(format_value(value) for value in flatten(report).values())


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Write a numeric CSV with a header row and LF line endings."""

    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(format_value(value) for value in row) + "\n")


def append_csv_row(path: Path, report: Any) -> None:
    """Append the report as a CSV row, writing the header first for a new file."""

    path.parent.mkdir(parents=True, exist_ok=True)
    new_file = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="\n") as handle:
        if new_file:
            handle.write(csv_header(report) + "\n")
        handle.write(csv_row(report) + "\n")
