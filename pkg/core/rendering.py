# core/rendering.py - JSON / CSV / text output for management commands

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence


class OutputFormat(str, enum.Enum):
    JSON = 'json'
    CSV = 'csv'
    TEXT = 'text'


@dataclass
class Report:
    """
    One command result in every output shape.

    ``data`` is the JSON document; ``header``/``rows`` the machine-readable
    table. Text mode uses ``text_header``/``text_rows`` when given.
    """

    data: Dict[str, Any]
    header: Sequence[str]
    rows: List[Sequence[Any]]
    text_header: Optional[Sequence[str]] = None
    text_rows: Optional[List[Sequence[Any]]] = None
    notes: List[str] = field(default_factory=list)


def _text_cell(value, places: int) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.{places}f}"
    return str(value)


def json_safe(value):
    """Non-finite floats become null; JSON has no NaN or Infinity."""
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_json(data: Dict[str, Any]) -> str:
    # repr-based float output keeps full precision
    return json.dumps(json_safe(data), indent=2, allow_nan=False)


def render_csv(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue().rstrip('\n')


def render_text(header: Sequence[str], rows: List[Sequence[Any]], places: int = 5, notes: Sequence[str] = ()) -> str:
    cells = [[str(h) for h in header]] + [[_text_cell(v, places) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ['  '.join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, '  '.join('-' * w for w in widths))
    return '\n'.join(list(notes) + lines)


def render(report: Report, fmt) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        return render_json(report.data)
    if fmt is OutputFormat.CSV:
        return render_csv(report.header, report.rows)
    return render_text(
        report.text_header or report.header,
        report.text_rows if report.text_rows is not None else report.rows,
        notes=report.notes,
    )
