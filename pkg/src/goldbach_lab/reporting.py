"""Shared verification-report schema and serialization.

Reports are emitted as JSON (full fidelity) or CSV (for tabular payloads).
Exact rationals are serialized as {"num": ..., "den": ...} objects and
reconstructed on load, so reports round-trip losslessly; field order is
fixed, and the canonical byte form (with runtime zeroed) is identical
across repeated runs with the same inputs and seed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"

VERDICTS = ("pass", "fail", "diagnostic")


class UnsupportedFormat(ValueError):
    pass


@dataclass
class VerificationReport:
    claim: str
    parameters: dict
    verdict: str
    payload: dict
    seed: int = 0
    runtime_ms: int = 0
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_encode(v) for v in value.tolist()]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def _decode(value: Any) -> Any:
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            return Fraction(value["num"], value["den"])
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


def report_to_dict(report: VerificationReport,
                   include_runtime: bool = True) -> dict:
    return {
        "schema_version": report.schema_version,
        "claim": report.claim,
        "parameters": _encode(report.parameters),
        "verdict": report.verdict,
        "payload": _encode(report.payload),
        "seed": report.seed,
        "runtime_ms": report.runtime_ms if include_runtime else 0,
    }


def emit_report(report: VerificationReport, format: str = "json") -> bytes:
    """Serialize; format "csv" requires payload["columns"]/["rows"]."""
    if format == "json":
        text = json.dumps(report_to_dict(report), indent=2, allow_nan=False)
        return (text + "\n").encode()
    if format == "csv":
        columns = report.payload.get("columns")
        rows = report.payload.get("rows")
        if columns is None or rows is None:
            raise UnsupportedFormat(
                "csv output needs a tabular payload (columns/rows)")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buf.getvalue().encode()
    raise UnsupportedFormat(f"unknown format {format!r}")


def _csv_cell(v: Any) -> Any:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    if isinstance(v, float):
        return repr(v)
    return v


def parse_report(data: bytes) -> VerificationReport:
    obj = json.loads(data.decode())
    return VerificationReport(
        claim=obj["claim"],
        parameters=_decode(obj["parameters"]),
        verdict=obj["verdict"],
        payload=_decode(obj["payload"]),
        seed=obj["seed"],
        runtime_ms=obj["runtime_ms"],
        schema_version=obj["schema_version"],
    )


def canonical_bytes(report: VerificationReport) -> bytes:
    """Byte form for determinism comparisons: runtime zeroed, everything
    else as emitted."""
    text = json.dumps(report_to_dict(report, include_runtime=False), indent=2,
                      allow_nan=False)
    return (text + "\n").encode()


def parse_scan_csv(data: bytes) -> list[tuple[int, int]]:
    """Read back a (n, representation_count) scan CSV."""
    reader = csv.reader(io.StringIO(data.decode()))
    header = next(reader)
    if header[:2] != ["n", "representation_count"]:
        raise UnsupportedFormat(f"unexpected scan header {header}")
    return [(int(r[0]), int(r[1])) for r in reader]
