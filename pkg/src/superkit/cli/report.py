"""Running suites and model files into reports, and rendering them."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import interp
from .suites import Options, suite_checks

__all__ = ["CheckResult", "Report", "run_suite", "run_model_file", "render_report"]

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str
    expected: str
    actual: str
    ms: float = 0.0


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status == PASS)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self, timings: bool = True) -> dict:
        checks = []
        for c in sorted(self.checks, key=lambda c: c.id):
            d = asdict(c)
            d["ms"] = round(c.ms, 3) if timings else 0
            checks.append(d)
        return {"suite": self.suite, "checks": checks, "passed": self.passed, "failed": self.failed}


def _timed(fn):
    t0 = time.perf_counter()
    try:
        out = fn()
    except Exception as exc:      # reported as an error row, never aborts the run
        out = exc
    return out, (time.perf_counter() - t0) * 1000


def run_suite(name: str, options: Options | None = None) -> Report:
    """Run a built-in suite.  Negative controls pass when their fixture fails,
    unless ``options.perturb`` is set, in which case they count as ordinary checks."""
    options = options or Options()
    report = Report(name)
    for spec in suite_checks(name, options):
        out, ms = _timed(spec.run)
        if isinstance(out, Exception):
            report.checks.append(CheckResult(spec.id, spec.anchor, ERROR, "",
                                             f"{type(out).__name__}: {out}", ms))
            continue
        ok, expected, actual = out
        invert = spec.negative and not options.perturb
        if invert:
            expected = f"fixture fails ({expected})"
            actual = f"fixture {'passes' if ok else 'fails'} ({actual})"
        status = PASS if bool(ok) != invert else FAIL
        report.checks.append(CheckResult(spec.id, spec.anchor, status, expected, actual, ms))
    return report


def run_model_file(path: str | Path) -> Report:
    """Run the embedded checks of a model file.

    Parse and semantic errors propagate (with line/column) to the caller.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    t0 = time.perf_counter()
    result = interp.run_model(text, path.stem)
    total = (time.perf_counter() - t0) * 1000
    report = Report(f"model:{path.name}")
    n = max(1, len(result.checks))
    for i, c in enumerate(result.checks, 1):
        status = ERROR if c.error else (PASS if c.passed else FAIL)
        actual = c.error if c.error else c.actual
        report.checks.append(CheckResult(f"{path.stem}/{i:02d}", f"{c.label} (line {c.line})",
                                         status, c.expected, actual, total / n))
    return report


def _table(report: Report, timings: bool) -> str:
    lines = [f"suite: {report.suite}"]
    rows = sorted(report.checks, key=lambda c: c.id)
    width = max([len(c.id) for c in rows] + [2])
    for c in rows:
        t = f"  {c.ms:8.1f} ms" if timings else ""
        lines.append(f"{c.status.upper():5}  {c.id:<{width}}{t}  [{c.anchor}]")
        if c.status != PASS:
            lines.append(f"       expected: {c.expected}")
            lines.append(f"       actual:   {c.actual}")
    lines.append(f"{report.passed} passed, {report.failed} failed")
    return "\n".join(lines) + "\n"


def render_report(report: Report, format: str = "text", timings: bool = True) -> bytes:
    if format == "json":
        return (json.dumps(report.to_dict(timings), indent=2, sort_keys=True) + "\n").encode("utf-8")
    if format == "text":
        return _table(report, timings).encode("utf-8")
    raise ValueError(f"unknown format {format!r}; choose text or json")
