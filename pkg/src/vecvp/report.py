"""Claim records and report rendering.

Residual sign convention: a check passes when its residual is nonnegative
(up to ``tol``; strict inequalities need a residual above ``tol``).

* inclusion ``v in C``: residual ``min_j <a_j, v>``
* non-inclusion ``v not in C``: residual ``-min_j <a_j, v>`` (must exceed ``tol``)
* ``v not in Int C``: residual ``-min_j <a_j, v>`` (must be at least ``-tol``)
* inequality ``a <= b`` (or ``a < b``): residual ``b - a``
"""
import json
from dataclasses import dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
INFO = "info"
VACUOUS = "n/a"


def decimal_str(x):
    """Twelve significant digits in a locale- and platform-stable form."""
    x = float(x)
    if x == 0.0:
        return "0.000000000000"
    if x != x:
        return "nan"
    if x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return format(x, "#.12g")


@dataclass
class Claim:
    """One verified statement.

    ``witnesses`` carries claim-specific evidence (for example the ``m0``
    found for each point), always as JSON-ready lists and numbers.
    """

    id: str
    status: str
    residual: float | None = None
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    @property
    def failed(self):
        return self.status == FAIL


@dataclass
class VerificationReport:
    claims: list = field(default_factory=list)
    mode: dict = field(default_factory=dict)

    def add(self, claim):
        self.claims.append(claim)
        return claim

    def extend(self, other):
        self.claims.extend(other.claims)
        for k, v in other.mode.items():
            self.mode.setdefault(k, v)
        return self

    def __getitem__(self, claim_id):
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise KeyError(claim_id)

    def __contains__(self, claim_id):
        return any(c.id == claim_id for c in self.claims)

    @property
    def ids(self):
        return [c.id for c in self.claims]

    @property
    def passed(self):
        return not any(c.failed for c in self.claims)

    def failures(self):
        return [c for c in self.claims if c.failed]


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return decimal_str(value)
    return value


def claim_record(c):
    rec = {"id": c.id, "status": c.status}
    rec["residual"] = None if c.residual is None else decimal_str(c.residual)
    if c.witnesses:
        rec["witnesses"] = _jsonable(c.witnesses)
    if c.note:
        rec["note"] = c.note
    return rec


def trace_record(problem, trace):
    labels = problem.space.labels
    rec = {
        "complete": trace.complete,
        "selection": trace.selection,
        "ystar": [decimal_str(v) for v in trace.dual.ystar],
        "lambda_star": decimal_str(trace.dual.lambda_star),
        "points": list(trace.points),
        "point_labels": [labels[x] for x in trace.points],
        "sets": [list(s) for s in trace.sets],
        "j_seq": list(trace.j_seq),
        "xbar": trace.xbar,
        "xbar_label": None if trace.xbar is None else labels[trace.xbar],
        "stab_index": trace.stab_index,
    }
    return rec


def report_document(problem, trace, report, extra=None):
    doc = {
        "instance": problem.name,
        "n": problem.n,
        "m": problem.m,
        "N": "inf" if problem.N is None else problem.N,
        "mode": _jsonable(report.mode),
        "trace": trace_record(problem, trace),
        "claims": [claim_record(c) for c in report.claims],
        "passed": report.passed,
    }
    if extra:
        doc.update(_jsonable(extra))
    return doc


def emit_report(problem, trace, report, fmt="text", extra=None):
    """Render a run as text or as machine JSON; byte-stable for equal inputs."""
    doc = report_document(problem, trace, report, extra)
    if fmt == "machine":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    t = doc["trace"]
    lines = [
        f"instance {doc['instance']}: n={doc['n']} m={doc['m']} N={doc['N']}",
        f"selection {t['selection']}; lambda* = {t['lambda_star']}; y* = ({', '.join(t['ystar'])})",
        f"points x_0..x_{len(t['points']) - 1}: {' '.join(t['point_labels'])}",
        f"set sizes: {' '.join(str(len(s)) for s in t['sets'])}",
    ]
    if t["complete"]:
        lines.append(f"xbar = {t['xbar_label']} (index {t['xbar']}), stabilized at i = {t['stab_index']}")
    else:
        lines.append("construction INCOMPLETE: horizon exhausted before stabilization")
    for rec in doc["claims"]:
        res = "" if rec["residual"] is None else f" residual={rec['residual']}"
        note = f"  [{rec['note']}]" if "note" in rec else ""
        lines.append(f"{rec['status'].upper():5s} {rec['id']}{res}{note}")
    lines.append("ALL CLAIMS PASS" if doc["passed"] else "SOME CLAIMS FAIL")
    return "\n".join(lines) + "\n"
