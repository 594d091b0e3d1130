"""Figure rendering for suite runs.

Writes PNG files next to the delimited report output: a residual bar chart
over all checks, the truncation-residual decay of the line-pair mode sum,
and the short-time behaviour of the circle heat trace against its closed
form.  All rendering uses the Agg backend so it works headless.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .torus import AffineSubtorus, FlatTorus, slag_identity_check  # noqa: E402

FLOOR = 1e-18  # display floor for log-scale residuals


def figure_error_bars(reports, path: str) -> str:
    names = [r.test for r in reports]
    errs = [max(r.abs_err, FLOOR) for r in reports]
    tols = [max(r.tol, FLOOR) for r in reports]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.55 * len(names)), 4.2))
    xs = np.arange(len(names))
    colors = ["#2a7" if r.passed else "#c33" for r in reports]
    ax.bar(xs, errs, color=colors, label="residual")
    ax.scatter(xs, tols, marker="_", s=220, color="#222", label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(xs)
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("absolute residual")
    ax.set_title("residuals against tolerances")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def figure_slag_decay(path: str, cutoffs=(25, 50, 100, 200, 400)) -> str:
    torus = FlatTorus.standard(2)
    l1 = AffineSubtorus(torus, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(torus, [[1, 0]], (Fraction(0), Fraction(1, 2)))
    res = slag_identity_check(l1, l2, cutoffs=cutoffs)
    rs = sorted(res["residual"])
    vals = [res["residual"][R] for R in rs]
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.loglog(rs, vals, "o-", label="truncation residual")
    ax.loglog(rs, [2.0 / R for R in rs], "--", color="#888", label="2 / cutoff")
    if res["decay_exponent"] is not None:
        ax.set_title("residual decay, fitted exponent %.3f" % res["decay_exponent"])
    ax.set_xlabel("mode cutoff")
    ax.set_ylabel("|geometric - fixed - spectral|")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def figure_heat_trace(path: str) -> str:
    torus = FlatTorus.standard(1)
    ts = np.geomspace(5e-3, 0.5, 40)
    traces = [torus.heat_trace(float(t)) for t in ts]
    closed = [(4.0 * math.pi * t) ** -0.5 for t in ts]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.4, 3.6))
    ax1.loglog(ts, traces, "o", ms=3, label="mode sum")
    ax1.loglog(ts, closed, "-", label="leading closed form")
    ax1.set_xlabel("t")
    ax1.set_ylabel("heat trace")
    ax1.legend(fontsize=8)
    gaps = [max(abs(a - b), FLOOR) for a, b in zip(traces, closed)]
    ax2.loglog(ts, gaps, "s-", ms=3, color="#a52")
    ax2.set_xlabel("t")
    ax2.set_ylabel("|trace - closed form|")
    ax2.set_title("image-sum correction")
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def render_all(reports, directory: str) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    out = []
    out.append(figure_error_bars(reports, os.path.join(directory, "residuals.png")))
    out.append(figure_slag_decay(os.path.join(directory, "line_pair_decay.png")))
    out.append(figure_heat_trace(os.path.join(directory, "heat_trace.png")))
    return out
