"""Optional figure rendering for CLI reports.

Figures are rendered headlessly (Agg) to files next to the delimited output;
nothing here affects the numeric payload of a report.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import InvalidArgumentError
from .report import ExperimentReport


def _column(report: ExperimentReport, key: str) -> np.ndarray:
    return np.array([rec[key] for rec in report.records], dtype=float)


def _bias_figure(report: ExperimentReport, ax):
    z = _column(report, "z")
    ax.plot(z, _column(report, "orf_bias"), label="orthogonal mean")
    ax.plot(z, _column(report, "rff_bias"), label="gaussian mean", ls="--")
    ax.plot(z, _column(report, "lower_bound"), label="lower bound", ls=":", color="gray")
    ax.plot(z, _column(report, "upper_bound"), label="upper bound", ls=":", color="black")
    ax.set_xlabel("z")
    ax.set_ylabel("kernel mean")


def _variance_figure(report: ExperimentReport, ax):
    z = _column(report, "z")
    ax.plot(z, _column(report, "orf_variance"), label="orthogonal variance")
    ax.plot(z, _column(report, "rff_variance"), label="gaussian variance", ls="--")
    ax.plot(z, _column(report, "envelope_lower"), label="envelope", ls=":", color="gray")
    ax.plot(z, _column(report, "envelope_upper"), ls=":", color="gray")
    ax.set_xlabel("z")
    ax.set_ylabel("kernel variance")


def _mc_figure(report: ExperimentReport, ax):
    quantities = sorted({rec["quantity"] for rec in report.records})
    for q in quantities:
        rows = [rec for rec in report.records if rec["quantity"] == q]
        z = np.array([r["z"] for r in rows], dtype=float)
        err = np.array([r["abs_error"] for r in rows], dtype=float)
        se = np.array([r["stderr"] for r in rows], dtype=float)
        ax.errorbar(z, err, yerr=se, marker="o", capsize=3, label=f"|empirical - theory| ({q})")
    ax.set_xlabel("z")
    ax.set_ylabel("absolute error")
    ax.set_yscale("log")


def _zeros_figure(report: ExperimentReport, ax):
    idx = _column(report, "index")
    ax.plot(idx, _column(report, "rayleigh_partial"), marker=".", label="inverse-square zero sum")
    ax.axhline(1.0 / (2.0 * report.config["d"]), ls=":", color="gray", label="1/(2d)")
    ax.set_xlabel("zero index")
    ax.set_ylabel("partial sum")


def _mse_figure(report: ExperimentReport, ax):
    if "p" in report.records[0]:
        ps = sorted({rec["p"] for rec in report.records})
        means = [np.mean([r["mse"] for r in report.records if r["p"] == p]) for p in ps]
        ax.plot(ps, means, marker="o", label="mean MSE")
        ax.set_xlabel("number of features p")
        ax.set_xscale("log")
        ax.set_yscale("log")
    else:
        ax.plot(_column(report, "trial"), _column(report, "mse"), marker="o", label="per-trial MSE")
        ax.axhline(report.aggregates["mse_mean"], ls="--", color="gray", label="mean")
        ax.set_xlabel("trial")
    ax.set_ylabel("Frobenius MSE")


_RENDERERS = {
    "bias": _bias_figure,
    "variance": _variance_figure,
    "mc-moments": _mc_figure,
    "mc-covariance": _mc_figure,
    "zeros": _zeros_figure,
    "mse": _mse_figure,
}


def render_report_figure(report: ExperimentReport, path) -> None:
    """Render the figure matching the report's command to a PNG file."""
    command = report.config.get("command")
    renderer = _RENDERERS.get(command)
    if renderer is None:
        raise InvalidArgumentError(f"no figure renderer for command {command!r}")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        renderer(report, ax)
        ax.legend(fontsize=8)
        ax.set_title(", ".join(f"{k}={v}" for k, v in sorted(report.config.items()) if k != "command"), fontsize=7)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
