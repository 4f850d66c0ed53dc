"""Serializable experiment reports.

A report is a plain payload: a config dict sufficient to reproduce the run
bit for bit, a flat list of per-point records (every empirical value carries
its Monte-Carlo standard error), aggregate statistics, the tool version, and
the RNG identifier.  JSON round-trips losslessly; CSV flattens the records
into one row per grid point for external plotting.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .errors import InvalidArgumentError
from .sampling import RNG_KIND

JSON = "json"
CSV = "csv"


def _py(value):
    """Plain-Python view of a payload value (numpy scalars/arrays collapse)."""
    if isinstance(value, dict):
        return {str(k): _py(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_py(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if value is None or isinstance(value, str):
        return value
    raise InvalidArgumentError(f"unsupported report value {value!r}")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class ExperimentReport:
    config: dict
    records: list
    aggregates: dict
    tool_version: str = __version__
    rng: str = RNG_KIND

    def __post_init__(self):
        self.config = _py(self.config)
        self.records = [_py(r) for r in self.records]
        self.aggregates = _py(self.aggregates)

    def config_hash(self) -> str:
        payload = json.dumps(self.config, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "config_hash": self.config_hash(),
            "records": self.records,
            "aggregates": self.aggregates,
            "tool_version": self.tool_version,
            "rng": self.rng,
        }
        # key order is construction order, which is deterministic; sorting
        # would scramble the record columns through a JSON round-trip
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        doc = json.loads(text)
        return cls(
            config=doc["config"],
            records=doc["records"],
            aggregates=doc["aggregates"],
            tool_version=doc["tool_version"],
            rng=doc["rng"],
        )

    def to_csv(self) -> str:
        """One row per record; header from the first record's keys."""
        if not self.records:
            raise InvalidArgumentError("report has no records to flatten into CSV")
        header = list(self.records[0].keys())
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for rec in self.records:
            if list(rec.keys()) != header:
                raise InvalidArgumentError("records are not homogeneous; cannot emit CSV")
            writer.writerow([_cell(rec[k]) for k in header])
        return buf.getvalue()


def emit_report(report: ExperimentReport, format: str, path) -> None:
    """Write the report to ``path`` as JSON (full nested) or CSV (flat records)."""
    if format == JSON:
        text = report.to_json()
    elif format == CSV:
        text = report.to_csv()
    else:
        raise InvalidArgumentError(f"format must be 'json' or 'csv', got {format!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
