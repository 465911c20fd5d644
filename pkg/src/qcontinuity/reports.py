"""Bound reports and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"
VIOLATION_TOL = 1e-8

CSV_FIELDS = ("bound", "value", "lhs", "verdict", "inputs", "partners")


@dataclass
class BoundReport:
    """One evaluated bound, optionally checked against a measured quantity.

    ``lhs`` is the measured magnitude the bound should dominate; when it is
    absent the verdict is ``holds`` by convention (nothing was measured).
    """

    bound: str
    inputs: dict
    value: float | None
    partners: dict = field(default_factory=dict)
    lhs: float | None = None
    verdict: str = HOLDS

    @classmethod
    def check(cls, bound: str, inputs: dict, value: float, lhs: float | None, partners: dict | None = None, tol: float = VIOLATION_TOL):
        verdict = HOLDS
        if lhs is not None and lhs > value + tol:
            verdict = VIOLATED
        return cls(bound, inputs, float(value), partners or {}, None if lhs is None else float(lhs), verdict)

    @classmethod
    def two_sided(cls, bound: str, inputs: dict, lower: float, upper: float, diff: float, partners: dict | None = None):
        """Check ``-lower <= diff <= upper`` and report the side that applies."""
        partners = dict(partners or {}, lower=float(lower), upper=float(upper))
        side = upper if diff >= 0 else lower
        return cls.check(bound, dict(inputs, signed_lhs=float(diff)), side, abs(diff), partners)

    @classmethod
    def not_applicable(cls, bound: str, inputs: dict, reason: str):
        return cls(bound, dict(inputs, reason=reason), None, {}, None, NOT_APPLICABLE)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "inputs": self.inputs,
            "value": self.value,
            "partners": self.partners,
            "verdict": self.verdict,
            "lhs": self.lhs,
        }

    def to_row(self) -> dict:
        return {
            "bound": self.bound,
            "value": "" if self.value is None else repr(self.value),
            "lhs": "" if self.lhs is None else repr(self.lhs),
            "verdict": self.verdict,
            "inputs": json.dumps(self.inputs, sort_keys=True),
            "partners": json.dumps(self.partners, sort_keys=True),
        }


def dumps(reports, fmt: str = "json") -> str:
    """Serialize reports; the output is a pure function of the report list."""
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in reports:
            w.writerow(r.to_row())
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def table_dumps(rows: list[dict], fmt: str = "csv") -> str:
    """Serialize plain dict rows (sweeps) as CSV or JSON."""
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def summarize(reports) -> dict:
    """``{bound: {verdict: count}}``."""
    out: dict[str, dict[str, int]] = {}
    for r in reports:
        counts = out.setdefault(r.bound, {})
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    return out
