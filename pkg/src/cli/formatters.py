"""Rendering of command results as json, csv or a markdown table."""

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Sequence

FORMATS = ("json", "csv", "table")


def exact_text(value) -> str:
    """Decimal text for integers and rationals, e.g. '-16', '691/2730'."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


@dataclass
class Document:
    """A command result: a JSON value plus its tabular view."""

    data: Any
    columns: List[str] = field(default_factory=list)
    rows: List[Sequence[Any]] = field(default_factory=list)


def to_json(data: Any) -> str:
    """Compact JSON, non-ASCII kept as is."""
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)


def to_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([exact_text(cell) for cell in row])
    return buffer.getvalue().rstrip("\n")


def _cell(value: Any) -> str:
    return exact_text(value).replace("|", "\\|")


def to_table(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """GitHub-flavoured markdown table."""
    lines = [
        "| " + " | ".join(columns) + " |",
        "|" + "|".join("---" for _ in columns) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_cell(cell) for cell in row) + " |")
    return "\n".join(lines)


def render(document: Document, output_format: str) -> str:
    """The document in one of FORMATS."""
    if output_format == "json":
        return to_json(document.data)
    if output_format == "csv":
        return to_csv(document.columns, document.rows)
    return to_table(document.columns, document.rows)


def error_record(error) -> str:
    """One-line machine-parsable error, e.g. {"error":"domain","message":"..."}."""
    return to_json({"error": getattr(error, "kind", "error"), "message": str(error)})
