# selmer/output.py
import csv
import io
import json
from pathlib import Path
from typing import Any, Optional

import click

from dependencies import OutputFormat


def flatten(document: dict, prefix: str = "") -> list[tuple[str, Any]]:
    rows = []
    for key, value in document.items():
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict) and value:
            rows.extend(flatten(value, name))
        elif isinstance(value, list) and value and all(isinstance(item, dict) for item in value):
            for i, item in enumerate(value):
                rows.extend(flatten(item, f"{name}[{i}]"))
        else:
            rows.append((name, value))
    return rows


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(item) for item in value)
    return str(value)


def render_text(document: dict) -> str:
    rows = flatten(document)
    if not rows:
        return ""
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {_cell(value)}" for name, value in rows)


def render_json(document: dict) -> str:
    return json.dumps(document, indent=2)


def render_csv(document: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["field", "value"])
    for name, value in flatten(document):
        writer.writerow([name, "" if value is None else json.dumps(value) if isinstance(value, list) else value])
    return buffer.getvalue().rstrip("\n")


def render(document: dict, output_format: OutputFormat) -> str:
    if output_format == OutputFormat.JSON:
        return render_json(document)
    if output_format == OutputFormat.CSV:
        return render_csv(document)
    return render_text(document)


def render_table(header: list[str], rows: list[list[Any]]) -> str:
    cells = [header] + [[_cell(value) for value in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells)


def emit(document: dict, output_format: OutputFormat, out: Optional[Path] = None) -> None:
    text = render(document, output_format)
    if out is None:
        click.echo(text)
    else:
        out.write_text(text + "\n")
