"""
Report serialization: JSON, CSV and a human-readable table.

JSON and CSV carry floats at full round-trip precision; the human table
rounds to 6 significant digits. No timestamps or host data are written, so
identical sweeps produce byte-identical files.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from .checks import CheckResult
from .counterexamples import Counterexample
from .errors import ConfigError
from .sweep import Report

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "human")
CSV_COLUMNS = ("id", "section", "conjectural", "trials", "passes", "vacuous", "failures",
               "findings", "min_slack", "worst_seed")


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats to null."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, complex):
        return {"re": _clean(value.real), "im": _clean(value.imag)}
    if hasattr(value, "value") and not isinstance(value, (str, int, bool)):
        return value.value
    return value


def report_dict(report: Report) -> Dict[str, Any]:
    config = report.config.model_dump(exclude={"workers"})
    payload = {
        "config": config,
        "results": [item.to_dict() for item in report.results],
        "failures": report.failures,
        "findings": report.findings,
        "errors": report.errors,
    }
    if report.counterexamples:
        payload["counterexamples"] = report.counterexamples
    return _clean(payload)


def _format_float(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_json(report: Report) -> str:
    return json.dumps(report_dict(report), indent=2) + "\n"


def to_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report_dict(report)["results"]:
        writer.writerow([_format_float(row[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def _sig(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def to_human(report: Report) -> str:
    lines = []
    header = f"{'id':<10} {'section':<14} {'trials':>8} {'passes':>8} {'vacuous':>8} {'fail':>6} {'find':>6} {'min_slack':>12}  worst"
    lines.append(header)
    lines.append("-" * len(header))
    for item in report.results:
        lines.append(
            f"{item.id:<10} {item.section:<14} {item.trials:>8} {item.passes:>8} {item.vacuous:>8} "
            f"{item.failures:>6} {item.findings:>6} {_sig(item.min_slack):>12}  {item.worst_seed or '-'}"
        )
    lines.append("")
    lines.append(f"failures: {len(report.failures)}  findings: {len(report.findings)}  errors: {len(report.errors)}")
    for record in report.counterexamples:
        verdict = "VIOLATED" if record["violated"] else "holds"
        lines.append(f"counter-example {record['name']}: naive inequality {verdict}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "human":
        return to_human(report)
    raise ConfigError(f"unknown report format {fmt!r}; expected one of {FORMATS}")


def write_report(report: Report, path: Union[str, Path], fmt: str = "json") -> None:
    text = render(report, fmt)
    path = Path(path)
    with open(path, "w") as f:
        f.write(text)
    logger.info(f"Wrote {fmt} report to {path}")


# ---------------------------------------------------------------------------
# Single checks and counter-examples
# ---------------------------------------------------------------------------

def results_json(results: Sequence[CheckResult]) -> str:
    return json.dumps(_clean([r.to_dict() for r in results]), indent=2) + "\n"


def results_human(results: Sequence[CheckResult]) -> str:
    lines = []
    for r in results:
        if r.status == "vacuous":
            lines.append(f"{r.id}: vacuous ({r.reason})")
            continue
        lhs = ", ".join(_sig(x) for x in r.lhs) if isinstance(r.lhs, list) else _sig(r.lhs)
        rhs = ", ".join(_sig(x) for x in r.rhs) if isinstance(r.rhs, list) else _sig(r.rhs)
        tag = " (conjectural)" if r.conjectural else ""
        lines.append(f"{r.id}: {r.status}{tag}  lhs={lhs}  rhs={rhs}  slack={_sig(r.slack)}")
    return "\n".join(lines) + "\n"


def results_csv(results: Sequence[CheckResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("id", "status", "hypotheses_met", "lhs", "rhs", "slack", "witness"))
    for r in results:
        lhs = ";".join(repr(float(x)) for x in r.lhs) if isinstance(r.lhs, list) else _format_float(r.lhs)
        rhs = ";".join(repr(float(x)) for x in r.rhs) if isinstance(r.rhs, list) else _format_float(r.rhs)
        writer.writerow((r.id, r.status, r.hypotheses_met, lhs, rhs, _format_float(r.slack), r.witness))
    return buffer.getvalue()


def render_results(results: Sequence[CheckResult], fmt: str = "human") -> str:
    if fmt == "json":
        return results_json(results)
    if fmt == "csv":
        return results_csv(results)
    if fmt == "human":
        return results_human(results)
    raise ConfigError(f"unknown report format {fmt!r}; expected one of {FORMATS}")


def render_counterexamples(items: List[Counterexample], fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(_clean([c.to_dict() for c in items]), indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("name", "quantity", "value"))
        for c in items:
            for key, value in c.values.items():
                writer.writerow((c.name, key, repr(float(value))))
            writer.writerow((c.name, "violated", c.violated))
        return buffer.getvalue()
    if fmt == "human":
        lines = []
        for c in items:
            lines.append(f"counter-example {c.name}:")
            for key, value in c.values.items():
                lines.append(f"  {key:<30} {value:.6g}")
            lines.append(f"  naive inequality {'VIOLATED' if c.violated else 'holds'}")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
