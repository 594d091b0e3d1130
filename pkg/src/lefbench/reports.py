"""Verification reports and their delimited serializations.

Every check produces rows with a fixed field order; floats are printed with
17 significant digits so that reruns with the same seed are byte-identical
(modulo wall time, which --strip-timing zeroes for archival diffs).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

FIELD_ORDER = ("test", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
               "abs_err", "rel_err", "tol", "pass", "params", "seconds")


def _g17(x: float) -> str:
    return "%.17g" % float(x)


@dataclass
class VerificationReport:
    """One identity, evaluated both ways, with its tolerance verdict.

    The verdict is: absolute or relative residual within `tol` (relative
    against the larger side; two exact zeros compare as residual zero)."""

    test: str
    lhs: complex
    rhs: complex
    tol: float
    params: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def abs_err(self) -> float:
        return abs(complex(self.lhs) - complex(self.rhs))

    @property
    def rel_err(self) -> float:
        scale = max(abs(complex(self.lhs)), abs(complex(self.rhs)))
        if scale == 0.0:
            return 0.0
        return self.abs_err / scale

    @property
    def passed(self) -> bool:
        return self.abs_err <= self.tol or self.rel_err <= self.tol

    def row(self, strip_timing: bool = False) -> dict:
        return {
            "test": self.test,
            "lhs_re": complex(self.lhs).real,
            "lhs_im": complex(self.lhs).imag,
            "rhs_re": complex(self.rhs).real,
            "rhs_im": complex(self.rhs).imag,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
            "pass": self.passed,
            "params": self.params,
            "seconds": 0.0 if strip_timing else self.seconds,
        }


def _params_json(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def emit_json(reports, strip_timing: bool = False) -> str:
    """Render the reports as a JSON array with a stable field order and
    17-significant-digit floats."""
    lines = []
    for rep in reports:
        row = rep.row(strip_timing)
        parts = []
        for key in FIELD_ORDER:
            val = row[key]
            if key == "test":
                enc = json.dumps(val)
            elif key == "pass":
                enc = "true" if val else "false"
            elif key == "params":
                enc = _params_json(val)
            else:
                enc = _g17(val)
            parts.append('"%s": %s' % (key, enc))
        lines.append("  {" + ", ".join(parts) + "}")
    return "[\n" + ",\n".join(lines) + "\n]\n"


def emit_csv(reports, strip_timing: bool = False) -> str:
    """Render the reports as CSV with the same field order and float format
    as the JSON emitter."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELD_ORDER)
    for rep in reports:
        row = rep.row(strip_timing)
        out = []
        for key in FIELD_ORDER:
            val = row[key]
            if key == "test":
                out.append(val)
            elif key == "pass":
                out.append("true" if val else "false")
            elif key == "params":
                out.append(_params_json(val))
            else:
                out.append(_g17(val))
        writer.writerow(out)
    return buf.getvalue()


def emit(reports, fmt: str, strip_timing: bool = False) -> str:
    if fmt == "json":
        return emit_json(reports, strip_timing)
    if fmt == "csv":
        return emit_csv(reports, strip_timing)
    raise ValueError("unknown output format %r" % (fmt,))
