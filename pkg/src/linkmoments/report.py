"""CSV and fixed-width table output."""
from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import numpy as np

__all__ = [
    "REPORT_COLUMNS",
    "emit_report",
    "report_rows",
    "write_rows",
    "write_histogram",
    "format_value",
]

REPORT_COLUMNS = (
    "ensemble",
    "alpha",
    "beta",
    "k",
    "predicted",
    "observed",
    "std_error",
    "trials",
    "N",
    "observed_over_predicted",
)


def format_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def report_rows(reports) -> list[list[str]]:
    rows = []
    for r in reports:
        link = r.link
        linear = link.is_linear_family
        rows.append(
            [
                link.label.split("(")[0] if linear else link.label,
                link.alpha if linear else "",
                link.beta if linear else "",
                r.k,
                r.predicted,
                r.observed,
                r.std_error,
                r.trials,
                r.n,
                r.ratio,
            ]
        )
    return [[format_value(v) for v in row] for row in rows]


def _render_table(header, rows) -> str:
    widths = [len(h) for h in header]
    shown = []
    for row in rows:
        cells = []
        for i, v in enumerate(row):
            # shorten floats for reading; CSV keeps full precision
            try:
                f = float(v)
                cell = v if v.lstrip("-").isdigit() else f"{f:.6g}"
            except ValueError:
                cell = v
            cells.append(cell)
            widths[i] = max(widths[i], len(cell))
        shown.append(cells)
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for cells in shown:
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines) + "\n"


def _render(header, rows, fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "table":
        return _render_table(header, rows)
    raise ValueError(f"unknown format {fmt!r} (expected csv or table)")


def write_rows(header, rows, fmt: str = "csv", path=None) -> str:
    """Render rows and write them to ``path`` (or stdout when ``path`` is None)."""
    rows = [[format_value(v) for v in row] for row in rows]
    text = _render(list(header), rows, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def emit_report(reports, format: str = "csv", path=None) -> str:
    return write_rows(REPORT_COLUMNS, report_rows(reports), format, path)


def write_histogram(centers, densities, path=None, fmt: str = "csv") -> str:
    return write_rows(("bin_center", "density"), zip(map(float, centers), map(float, densities)), fmt, path)
