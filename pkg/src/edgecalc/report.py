"""Structured check records and their JSON/CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Optional

__all__ = ["STATUSES", "CheckRecord", "Report", "check", "CSV_COLUMNS"]

STATUSES = ("pass", "fail", "degenerate", "warning")
CSV_COLUMNS = ("command", "check", "status", "value", "tolerance", "detail")


@dataclass
class CheckRecord:
    name: str
    status: str
    value: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


def check(name: str, value: float, tolerance: float, *, below: bool = True,
          detail: str = "") -> CheckRecord:
    """Pass iff ``value < tolerance`` (``below``) or ``value > tolerance`` (not ``below``)."""
    ok = math.isfinite(value) and (value < tolerance if below else value > tolerance)
    return CheckRecord(name, "pass" if ok else "fail", float(value), float(tolerance), detail)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else repr(x)


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    records: list[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0

    def extend(self, records: Iterable[CheckRecord]) -> None:
        self.records.extend(records)

    def sorted_records(self) -> list[CheckRecord]:
        return sorted(self.records, key=lambda rec: rec.name)

    @property
    def summary(self) -> dict[str, int]:
        counts = {s: 0 for s in STATUSES}
        for rec in self.records:
            counts[rec.status] += 1
        counts["total"] = len(self.records)
        return counts

    @property
    def ok(self) -> bool:
        return all(rec.status != "fail" for rec in self.records)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "records": [dict(asdict(r), value=_num(r.value), tolerance=_num(r.tolerance))
                        for r in self.sorted_records()],
            "summary": self.summary,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.sorted_records():
            w.writerow([self.command, r.name, r.status,
                        "" if r.value is None else repr(float(r.value)),
                        "" if r.tolerance is None else repr(float(r.tolerance)),
                        r.detail])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")
