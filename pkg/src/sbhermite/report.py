"""JSON and CSV serialization of suite results."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from . import __version__
from .identities import SCHEMA_VERSION, CheckReport, SuiteSummary


def summary_to_dict(summary: SuiteSummary) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "generator": f"sbhermite {__version__}",
        "passed": summary.passed,
        "failed": summary.failed_ids,
        "config": summary.config,
        "traceability": summary.traceability,
        "reports": [r.to_dict() for r in summary.reports],
    }


def dumps(summary: SuiteSummary) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(summary_to_dict(summary), sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> SuiteSummary:
    data = json.loads(text)
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    reports = [CheckReport.from_dict(d) for d in data["reports"]]
    return SuiteSummary(reports, data["traceability"], data["config"])


def write_json(summary: SuiteSummary, path) -> None:
    Path(path).write_text(dumps(summary))


CSV_HEADER = ("check_id", "params", "residual", "tolerance", "pass", "seconds")


def csv_text(summary: SuiteSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in summary.reports:
        w.writerow([
            r.check_id,
            json.dumps(r.params, sort_keys=True),
            repr(r.residual),
            repr(r.tolerance),
            "true" if r.passed else "false",
            "" if r.seconds is None else f"{r.seconds:.6f}",
        ])
    return buf.getvalue()


def write_csv(summary: SuiteSummary, path) -> None:
    Path(path).write_text(csv_text(summary))
