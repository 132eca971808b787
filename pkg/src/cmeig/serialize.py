"""Report and record serialisation (JSON, CSV, text).

Floats are written with 17 significant digits, which round-trips every
double exactly.  Complex numbers become ``{"re": ..., "im": ...}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Any

import numpy as np

from .errors import DomainError
from .theorem import CaseResult, VerificationReport

CSV_COLUMNS = ("suite", "case_index", "residual", "tolerance", "pass")


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _to_jsonable(obj: Any) -> Any:
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_to_jsonable(v) for v in obj]
    return obj


def _dump(obj: Any, indent: int = 0) -> str:
    """JSON text with 17-digit floats; keys keep insertion order."""
    pad, pad1 = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = fmt_float(obj)
        # keep integral floats recognisable as floats
        return text + ".0" if text.lstrip("-").isdigit() else text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad1 + _dump(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (pad1 + json.dumps(k) + ": " + _dump(v, indent + 1) for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return _dump(_to_jsonable(obj)) + "\n"


def _decode(obj: Any) -> Any:
    if isinstance(obj, dict):
        if set(obj) == {"re", "im"}:
            return complex(obj["re"], obj["im"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def loads(text: str) -> Any:
    return _decode(json.loads(text))


def _text_value(v: Any) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_text_value(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(e)}" for k, e in v.items()) + "}"
    return str(v)


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "suite_name": report.suite_name,
        "calibration": report.calibration,
        "cases": [
            {"case_index": c.case_index, "digest": c.digest, "label": c.label,
             "residual": c.residual, "tolerance": c.tolerance, "pass": c.passed}
            for c in report.cases
        ],
        "ratio_diagnostics": report.ratio_diagnostics,
        "diagnostics": report.diagnostics,
        "passed": report.passed,
        "runtime_ms": report.runtime_ms,
    }


def report_from_dict(d: dict) -> VerificationReport:
    d = _decode(d)
    cases = [CaseResult(c["case_index"], c["digest"], float(c["residual"]), float(c["tolerance"]), c.get("label", ""))
             for c in d["cases"]]
    return VerificationReport(d["suite_name"], cases, d.get("ratio_diagnostics"), int(d["runtime_ms"]),
                              d.get("calibration"), d.get("diagnostics") or {})


def report_text(report: VerificationReport) -> str:
    n_pass = sum(c.passed for c in report.cases)
    lines = [f"suite {report.suite_name}: {n_pass}/{len(report.cases)} cases pass, "
             f"max residual {report.max_residual:.3e}, {report.runtime_ms} ms"]
    for c in report.cases:
        lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] case {c.case_index} {c.label} "
                     f"residual={c.residual:.3e} tol={c.tolerance:.1e}")
    if report.ratio_diagnostics:
        rd = report.ratio_diagnostics
        lines.append(f"  ratio mean={complex(rd['mean_ratio']):.12g} spread={rd['relative_spread']:.3e}")
    if report.calibration:
        lines.append("  convention: " + ", ".join(f"{k}={v}" for k, v in report.calibration.items()))
    for key, val in report.diagnostics.items():
        lines.append(f"  {key}: {val}")
    return "\n".join(lines) + "\n"


def report_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in report.cases:
        w.writerow([report.suite_name, c.case_index, fmt_float(c.residual), fmt_float(c.tolerance),
                    "true" if c.passed else "false"])
    return buf.getvalue()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit_report(report: VerificationReport, fmt: str = "json", path: str | None = None) -> None:
    """Write the report; raises OSError if the path is not writable."""
    if fmt == "json":
        text = dumps(report_to_dict(report))
    elif fmt == "csv":
        text = report_csv(report)
    elif fmt == "text":
        text = report_text(report)
    else:
        raise DomainError(f"unknown format {fmt!r}")
    _write(text, path)


def emit_record(record: dict, fmt: str = "json", path: str | None = None) -> None:
    """Write a flat result record (evaluations, calibration) in the given format."""
    if fmt == "json":
        text = dumps(record)
    elif fmt == "csv":
        flat = {}
        for k, v in record.items():
            if isinstance(v, (complex, np.complexfloating)):
                flat[f"{k}_re"], flat[f"{k}_im"] = float(v.real), float(v.imag)
            elif not isinstance(v, (dict, list)):
                flat[k] = v
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(flat))
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in flat.values()])
        text = buf.getvalue()
    elif fmt == "text":
        text = "".join(f"{k}: {_text_value(v)}\n" for k, v in record.items())
    else:
        raise DomainError(f"unknown format {fmt!r}")
    _write(text, path)


def write_rows(header: list[str], rows: list[list], path: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    _write(buf.getvalue(), path)
