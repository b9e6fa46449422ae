"""VerificationReport and its JSON / CSV serialization.

Floats are written with 17 significant digits so that parsing returns
the identical double.  ``wall_ms`` is the only field that varies between
otherwise identical runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


@dataclass
class VerificationReport:
    check: str
    seed: int
    attempted: int
    passed: int
    max_residual: float
    params: dict = field(default_factory=dict)
    counterexample: Optional[tuple] = None
    stats: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def __post_init__(self):
        if not 0 <= self.passed <= self.attempted:
            raise ValueError(f"passed={self.passed} must lie in [0, attempted={self.attempted}]")
        if self.counterexample is not None:
            arr = np.asarray(self.counterexample, dtype=float)
            if arr.shape != (8, 4):
                raise ValueError(f"counterexample must be 8x4, got {arr.shape}")
            self.counterexample = tuple(tuple(float(x) + 0.0 for x in row) for row in arr)
        if (self.counterexample is not None) != (self.passed < self.attempted):
            raise ValueError("counterexample must be present exactly when a trial failed")

    @property
    def ok(self) -> bool:
        return self.passed == self.attempted

    def counterexample_frame(self) -> Optional[np.ndarray]:
        if self.counterexample is None:
            return None
        return np.array(self.counterexample, dtype=float)

    def to_dict(self, include_wall: bool = True) -> dict:
        d = {
            "check": self.check,
            "params": self.params,
            "seed": self.seed,
            "attempted": self.attempted,
            "passed": self.passed,
            "max_residual": self.max_residual,
        }
        if self.stats:
            d["stats"] = self.stats
        if self.counterexample is not None:
            d["counterexample"] = [list(r) for r in self.counterexample]
        if include_wall:
            d["wall_ms"] = self.wall_ms
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            check=d["check"],
            seed=d["seed"],
            attempted=d["attempted"],
            passed=d["passed"],
            max_residual=d["max_residual"],
            params=d.get("params", {}),
            counterexample=d.get("counterexample"),
            stats=d.get("stats", {}),
            wall_ms=d.get("wall_ms", 0.0),
        )


def _num(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(reports, include_wall: bool = True) -> str:
    if isinstance(reports, VerificationReport):
        body = _encode(reports.to_dict(include_wall))
    else:
        body = "[\n" + ",\n".join(_encode(r.to_dict(include_wall)) for r in reports) + "\n]"
    return body + "\n"


BASE_COLUMNS = ["check", "seed", "attempted", "passed", "max_residual", "wall_ms", "counterexample"]


def _flat(prefix: str, d: dict) -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}.{k}"
        if isinstance(v, dict):
            out.update(_flat(key, v))
        else:
            out[key] = v
    return out


def _cell(v) -> str:
    # every cell is a JSON scalar or array so strings cannot be mistaken for numbers
    return "" if v is None else _encode(v)


def to_csv(reports) -> str:
    if isinstance(reports, VerificationReport):
        reports = [reports]
    rows = []
    extra: list[str] = []
    for r in reports:
        row = {
            "check": r.check,
            "seed": r.seed,
            "attempted": r.attempted,
            "passed": r.passed,
            "max_residual": r.max_residual,
            "wall_ms": r.wall_ms,
            "counterexample": [list(x) for x in r.counterexample] if r.counterexample else None,
        }
        flat = {**_flat("params", r.params), **_flat("stats", r.stats)}
        for k in flat:
            if k not in extra:
                extra.append(k)
        row.update(flat)
        rows.append(row)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BASE_COLUMNS + extra, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (v if k == "check" else _cell(v)) for k, v in row.items()})
    return buf.getvalue()


def emit_report(reports, fmt: str = "json", include_wall: bool = True) -> str:
    if fmt == "json":
        return to_json(reports, include_wall)
    if fmt == "csv":
        return to_csv(reports)
    raise ValueError(f"unknown report format {fmt!r}")


def _parse_cell(s: str):
    if s == "":
        return None
    try:
        return json.loads(s)
    except json.JSONDecodeError:
        return s


def _unflat(flat: dict) -> dict:
    out: dict = {}
    for key, v in flat.items():
        parts = key.split(".")
        d = out
        for p in parts[:-1]:
            d = d.setdefault(p, {})
        d[parts[-1]] = v
    return out


def parse_report(text: str, fmt: str = "json") -> list[VerificationReport]:
    if fmt == "json":
        data = json.loads(text)
        items = data if isinstance(data, list) else [data]
        return [VerificationReport.from_dict(d) for d in items]
    if fmt == "csv":
        reports = []
        for row in csv.DictReader(io.StringIO(text)):
            nested = _unflat({k: _parse_cell(v) for k, v in row.items() if k not in BASE_COLUMNS and v != ""})
            reports.append(
                VerificationReport(
                    check=row["check"],
                    seed=int(row["seed"]),
                    attempted=int(row["attempted"]),
                    passed=int(row["passed"]),
                    max_residual=float(row["max_residual"]),
                    params=nested.get("params", {}),
                    counterexample=_parse_cell(row["counterexample"]),
                    stats=nested.get("stats", {}),
                    wall_ms=float(row["wall_ms"]),
                )
            )
        return reports
    raise ValueError(f"unknown report format {fmt!r}")


def all_passed(reports: Iterable[VerificationReport]) -> bool:
    return all(r.ok for r in reports)
