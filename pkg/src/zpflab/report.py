"""Verification reports: check records, metadata, JSON and CSV output."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .halfint import HalfInt

REPORT_SCHEMA_VERSION = 1


def jsonable(v: Any) -> Any:
    """Recursively convert numpy, complex and half-integer values to JSON types."""
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": jsonable(v.real), "im": jsonable(v.imag)}
    if isinstance(v, HalfInt):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return jsonable(v.tolist())
    if hasattr(v, "to_json"):
        return jsonable(v.to_json())
    if hasattr(v, "value"):  # enums
        return jsonable(v.value)
    raise TypeError(f"cannot serialize {type(v).__name__}")


@dataclass
class CheckRecord:
    name: str
    expected: Any
    observed: Any
    tolerance: float | None
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "expected": jsonable(self.expected),
                "observed": jsonable(self.observed), "tolerance": jsonable(self.tolerance),
                "pass": bool(self.passed), "note": self.note}


def check_close(name: str, expected: Any, observed: Any, tol: float, note: str = "") -> CheckRecord:
    """Absolute agreement within ``tol``; NaN or a raised error never passes."""
    try:
        dev = abs(complex(observed) - complex(expected))
        ok = bool(dev <= tol)
    except (TypeError, ValueError):
        ok = False
    return CheckRecord(name, expected, observed, tol, ok, note)


def check_equal(name: str, expected: Any, observed: Any, note: str = "") -> CheckRecord:
    return CheckRecord(name, expected, observed, None, expected == observed, note)


@dataclass
class RunReport:
    experiment: str
    records: list[CheckRecord] = field(default_factory=list)
    seed: int | None = None
    trace_columns: tuple[str, ...] = ()
    trace: list[dict] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def guarded(self, name: str, fn, *args, **kwargs):
        """Run ``fn``; an exception becomes a failed record instead of a crash."""
        from .errors import ConfigError

        try:
            return fn(*args, **kwargs)
        except ConfigError:
            raise
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            self.add(CheckRecord(name, "no error", f"{type(exc).__name__}: {exc}", None, False,
                                 "numerical failure"))
            return None

    def metadata(self) -> dict:
        from . import __version__

        return {"seed": self.seed, "timestamp": self.timestamp,
                "versions": {"zpflab": __version__, "numpy": np.__version__,
                             "python": platform.python_version()}}

    def to_json(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "experiment": self.experiment,
            "pass": self.passed,
            "records": [r.to_json() for r in self.records],
            "artifacts": jsonable(self.artifacts),
            "metadata": self.metadata(),
        }

    def write_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n", encoding="utf-8")
        return path

    def table(self) -> str:
        rows = [("check", "expected", "observed", "tol", "result")]
        for r in self.records:
            rows.append((r.name, _short(r.expected), _short(r.observed),
                         "" if r.tolerance is None else f"{r.tolerance:.0e}",
                         "PASS" if r.passed else "FAIL"))
        widths = [max(len(row[i]) for row in rows) for i in range(5)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        verdict = "PASS" if self.passed else "FAIL"
        n_ok = sum(r.passed for r in self.records)
        lines.append(f"{self.experiment}: {verdict} ({n_ok}/{len(self.records)} checks)")
        return "\n".join(lines)


def _short(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.6g}{v.imag:+.6g}j"
    s = str(jsonable(v)) if not isinstance(v, str) else v
    return s if len(s) <= 40 else s[:37] + "..."


def emit_trace(report: RunReport, path: str | Path,
               columns: Sequence[str] | None = None) -> Path:
    """Write the report's trace rows as CSV; header only when there are none."""
    path = Path(path)
    cols = list(columns or report.trace_columns)
    if not cols:
        raise ValueError(f"experiment {report.experiment!r} defines no trace columns")
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore", lineterminator="\r\n")
        writer.writeheader()
        for row in report.trace:
            writer.writerow({k: row.get(k, "") for k in cols})
    return path
