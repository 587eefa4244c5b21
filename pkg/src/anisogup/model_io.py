"""Model files, the built-in library and check reports.

Reports come in two renderings: aligned human text and a machine format
(JSON with sorted keys, one object per check using the fixed field names
``model``, ``check``, ``mode``, ``status``, ``residual``, ``solution``).
Only the ``wall_time`` fields vary between identical runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .criteria import CheckReport
from .dsl import DSLError, parse_model, render_model
from .library import get as builtin
from .library import library, names
from .model import ModelSpec

FORMATS = ("text", "machine")


def load_model(path: str | Path) -> ModelSpec:
    return parse_model(Path(path).read_text(encoding="utf-8"))


@dataclass
class ReportDocument:
    model: str
    checks: list = field(default_factory=list)  # CheckReport
    timings: list = field(default_factory=list)  # seconds, parallel to checks
    version: str = __version__

    def add(self, report: CheckReport, seconds: float = 0.0) -> None:
        self.checks.append(report)
        self.timings.append(seconds)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.checks)

    def exit_code(self) -> int:
        return 0 if self.ok else 1


def _fraction_text(v: Fraction) -> str:
    return str(Fraction(v))


def _report_dict(r: CheckReport, seconds: float) -> dict:
    return {
        "model": r.model,
        "check": r.check,
        "mode": r.mode,
        "status": r.status,
        "residual": r.residual,
        "solution": {k: _fraction_text(v) for k, v in r.solution.items()},
        "notes": list(r.notes),
        "wall_time": round(seconds, 6),
    }


def to_machine(doc: ReportDocument) -> str:
    body = {
        "tool": "anisogup",
        "version": doc.version,
        "model": doc.model,
        "checks": [_report_dict(r, t) for r, t in zip(doc.checks, doc.timings)],
    }
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def from_machine(text: str) -> ReportDocument:
    body = json.loads(text)
    doc = ReportDocument(body["model"], version=body["version"])
    for c in body["checks"]:
        rep = CheckReport(
            c["model"], c["check"], c["mode"], c["status"], c["residual"],
            solution={k: Fraction(v) for k, v in c["solution"].items()},
            notes=list(c.get("notes", [])),
        )
        doc.add(rep, c.get("wall_time", 0.0))
    return doc


def to_text(doc: ReportDocument) -> str:
    lines = [f"anisogup {doc.version}  model: {doc.model}"]
    for r, t in zip(doc.checks, doc.timings):
        lines.append(f"{r.status.upper():12} {r.check} [{r.mode}] ({r.model}, {t:.2f}s)")
        if r.solution:
            lines.append("    solution: " + ", ".join(f"{k} = {v}" for k, v in r.solution.items()))
        if r.residual != "0":
            lines.append(f"    residual: {r.residual}")
        for n in r.notes:
            lines.append(f"    - {n}")
    verdict = "all checks passed" if doc.ok else "some checks failed"
    lines.append(verdict)
    return "\n".join(lines) + "\n"


def render_report(doc: ReportDocument, fmt: str = "text") -> bytes:
    if fmt == "machine":
        return to_machine(doc).encode("utf-8")
    if fmt == "text":
        return to_text(doc).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def strip_timings(machine_text: str) -> str:
    """The machine report with timing fields zeroed, for comparisons."""
    body = json.loads(machine_text)
    for c in body["checks"]:
        c["wall_time"] = 0
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False)


__all__ = [
    "DSLError",
    "FORMATS",
    "ReportDocument",
    "builtin",
    "from_machine",
    "library",
    "load_model",
    "names",
    "parse_model",
    "render_model",
    "render_report",
    "strip_timings",
    "to_machine",
    "to_text",
]
