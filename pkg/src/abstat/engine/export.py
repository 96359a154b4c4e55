"""CSV and JSON serialization of series and verdicts."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, TextIO

from .._exact import fmt
from .series import DiagnosticSeries

CSV_HEADER = ("n", "alpha", "beta", "width", "count", "density", "cesaro_lo", "cesaro_hi", "backend")


def _bound(x) -> str:
    # window bounds may be rationals for custom schemes
    return fmt(x) if isinstance(x, int) else str(x)


def series_rows(series: DiagnosticSeries) -> Iterable[list[str]]:
    for rec in series.records:
        w = rec.window
        yield [str(rec.n), _bound(w.alpha), _bound(w.beta), str(w.width), fmt(rec.count), fmt(rec.density),
               fmt(rec.cesaro_lo), fmt(rec.cesaro_hi), rec.backend]


def write_csv(series_list: Iterable[DiagnosticSeries], out: TextIO, header: bool = True) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for s in series_list:
        writer.writerows(series_rows(s))


def to_csv(series_list: Iterable[DiagnosticSeries]) -> str:
    buf = io.StringIO()
    write_csv(series_list, buf)
    return buf.getvalue()


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
