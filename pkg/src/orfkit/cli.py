"""Command-line harness: closed forms, bounds, zeros, Monte-Carlo sweeps, MSE.

Every subcommand assembles an ExperimentReport and either prints it (CSV or
JSON to stdout) or writes it to ``--out``; ``--plot`` additionally renders a
PNG figure next to the output file.  Runs are deterministic functions of the
flags and ``--seed``, byte for byte, for any ``--workers`` setting.

Exit codes: 0 success, 2 invalid arguments (including dataset parse errors
and degenerate data), 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click
import numpy as np

from . import analytics, harness
from .errors import InvalidArgumentError, NumericalFailureError
from .report import ExperimentReport, emit_report
from .specfun import rayleigh_partial, zeros


@click.group()
def cli():
    """Kernel approximation with Fourier and orthogonal random features."""


def _zgrid_options(fn):
    fn = click.option("--z-min", type=float, default=0.0, show_default=True)(fn)
    fn = click.option("--z-max", type=float, default=None, help="Defaults to the relevant validity-interval end.")(fn)
    fn = click.option("--z-step", type=float, default=None, help="Defaults to (z-max - z-min) / 200.")(fn)
    return fn


def _output_options(fn):
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)(fn)
    fn = click.option("--plot", is_flag=True, help="Also render a PNG next to --out.")(fn)
    return fn


def _make_zgrid(z_min: float, z_max: float, z_step: float | None) -> np.ndarray:
    if z_step is None:
        z_step = (z_max - z_min) / 200.0
    if not (math.isfinite(z_min) and math.isfinite(z_max) and math.isfinite(z_step)):
        raise InvalidArgumentError("z grid bounds and step must be finite")
    if z_min < 0 or z_max < z_min or z_step <= 0:
        raise InvalidArgumentError(
            f"invalid z grid: min={z_min}, max={z_max}, step={z_step}"
        )
    count = int(math.floor((z_max - z_min) / z_step + 1e-9)) + 1
    if count > 2_000_000:
        raise InvalidArgumentError(f"z grid of {count} points is unreasonably large")
    return z_min + z_step * np.arange(count)


def _parse_p_grid(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidArgumentError(f"could not parse --p-grid {text!r}") from None
    if not values:
        raise InvalidArgumentError("--p-grid is empty")
    return values


def _finish(report: ExperimentReport, out, fmt: str, plot: bool):
    if out is None:
        if plot:
            raise click.UsageError("--plot requires --out")
        click.echo(report.to_json() if fmt == "json" else report.to_csv(), nl=False)
        return
    emit_report(report, fmt, out)
    click.echo(f"wrote {out}")
    if plot:
        from . import plots  # deferred: pulls in matplotlib

        fig_path = Path(out).with_suffix(".png")
        plots.render_report_figure(report, fig_path)
        click.echo(f"wrote {fig_path}")


@cli.command()
@click.option("--d", type=int, required=True, help="Data dimension (>= 2).")
@_zgrid_options
@_output_options
def bias(d, z_min, z_max, z_step, out, fmt, plot):
    """Closed-form kernel means and the Gaussian sandwich over a z grid."""
    consts = analytics.bound_constants(d)
    if z_max is None:
        z_max = consts.bias_interval_end
    zs = _make_zgrid(z_min, z_max, z_step)
    orf = analytics.orf_bias_grid(d, zs)
    rff = analytics.rff_bias(zs)
    lower, upper, inside = analytics.bias_bounds(d, zs)
    records = [
        {
            "z": float(z),
            "orf_bias": float(o),
            "rff_bias": float(r),
            "lower_bound": float(lo),
            "upper_bound": float(up),
            "in_validity_interval": bool(flag),
        }
        for z, o, r, lo, up, flag in zip(zs, orf, rff, lower, upper, inside)
    ]
    report = ExperimentReport(
        config={"command": "bias", "d": d, "z_min": float(zs[0]), "z_max": float(zs[-1]),
                "z_step": float(z_step) if z_step else float((z_max - z_min) / 200.0),
                "grid_points": len(records)},
        records=records,
        aggregates={"bias_interval_end": consts.bias_interval_end, "first_zero": consts.first_zero},
    )
    _finish(report, out, fmt, plot)


@cli.command()
@click.option("--d", type=int, required=True)
@click.option("--p", type=int, default=1, show_default=True, help="Number of random features.")
@_zgrid_options
@_output_options
def variance(d, p, z_min, z_max, z_step, out, fmt, plot):
    """Closed-form kernel variances and the exponential envelope over a z grid."""
    consts = analytics.bound_constants(d)
    if z_max is None:
        z_max = consts.bias_interval_end
    zs = _make_zgrid(z_min, z_max, z_step)
    orf = analytics.orf_variance_grid(d, p, zs)
    rff = analytics.rff_variance(p, zs)
    lower, upper, inside = analytics.variance_bounds(d, p, zs)
    records = [
        {
            "z": float(z),
            "orf_variance": float(o),
            "rff_variance": float(r),
            "envelope_lower": float(lo),
            "envelope_upper": float(up),
            "in_validity_interval": bool(flag),
        }
        for z, o, r, lo, up, flag in zip(zs, orf, rff, lower, upper, inside)
    ]
    report = ExperimentReport(
        config={"command": "variance", "d": d, "p": p, "z_min": float(zs[0]),
                "z_max": float(zs[-1]),
                "z_step": float(z_step) if z_step else float((z_max - z_min) / 200.0),
                "grid_points": len(records)},
        records=records,
        aggregates={
            "bias_interval_end": consts.bias_interval_end,
            "variance_interval_end": consts.variance_interval_end,
        },
    )
    _finish(report, out, fmt, plot)


@cli.command()
@click.option("--d", type=int, required=True)
@_output_options
def bounds(d, out, fmt, plot):
    """Print the bound constants (b_d, c_d, alpha_d, beta_d, first zero) for d."""
    c = analytics.bound_constants(d)
    record = {
        "d": c.d,
        "b_d": c.b_d,
        "c_d": c.c_d,
        "alpha_d": c.alpha_d,
        "beta_d": c.beta_d,
        "bias_interval_end": c.bias_interval_end,
        "variance_interval_end": c.variance_interval_end,
        "first_zero": c.first_zero,
    }
    report = ExperimentReport(config={"command": "bounds", "d": d}, records=[record], aggregates={})
    if plot:
        raise click.UsageError("the bounds table has no figure; drop --plot")
    _finish(report, out, fmt, plot)


@cli.command(name="zeros")
@click.option("--d", type=int, required=True)
@click.option("--m", type=int, default=10, show_default=True, help="How many zeros.")
@_output_options
def zeros_cmd(d, m, out, fmt, plot):
    """First m Bessel zeros with the running inverse-square partial sums."""
    table = zeros(d, m)
    records = []
    running = 0.0
    for idx, zero in enumerate(table.zeros, start=1):
        running += 1.0 / zero**2
        records.append({"index": idx, "zero": zero, "rayleigh_partial": running})
    report = ExperimentReport(
        config={"command": "zeros", "d": d, "m": m},
        records=records,
        aggregates={"rayleigh_limit": 1.0 / (2.0 * d), "zero_tolerance": table.tolerance},
    )
    _finish(report, out, fmt, plot)


@cli.command()
@click.option("--d", type=int, required=True)
@click.option("--p", type=int, default=1, show_default=True)
@click.option("--s", type=int, default=1000, show_default=True, help="Monte-Carlo draws per grid point.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--estimator", type=click.Choice(["rff", "orf"]), default="orf", show_default=True)
@click.option("--covariance", is_flag=True,
              help="Estimate the two-frequency cosine covariance instead of kernel moments.")
@click.option("--p-grid", type=str, default=None,
              help="Comma-separated p sweep (overrides --p); the conventional "
                   "feature-count sweep is 10,50,100,150,200,250,300.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Thread workers; results are identical for any value.")
@_zgrid_options
@_output_options
def mc(d, p, s, seed, estimator, covariance, p_grid, workers, z_min, z_max, z_step, out, fmt, plot):
    """Monte-Carlo sweeps: empirical kernel moments or the covariance identity."""
    if z_max is None:
        z_max = analytics.bound_constants(d).bias_interval_end
    zs = _make_zgrid(z_min, z_max, z_step)
    ps = _parse_p_grid(p_grid) if p_grid is not None else [p]
    records = []
    if covariance:
        if p_grid is not None:
            raise InvalidArgumentError("--p-grid does not apply to the covariance sweep")
        for z in zs:
            est = harness.mc_covariance(d, float(z), s, seed, workers=workers)
            theory = analytics.orf_bias(d, math.sqrt(2.0) * float(z)) - analytics.orf_bias(d, float(z)) ** 2
            records.append({
                "z": float(z), "quantity": "covariance", "theory": theory,
                "empirical": est.value, "abs_error": abs(est.value - theory),
                "stderr": est.stderr,
            })
        command = "mc-covariance"
    else:
        x = np.zeros(d)
        y = np.zeros(d)
        for pv in ps:
            for z in zs:
                x[0] = z
                reps = harness.kernel_replicates(estimator, d, pv, x, y, s, seed, workers=workers)
                m_emp = float(np.mean(reps))
                v_emp = float(np.mean((reps - m_emp) ** 2))
                summary = analytics.closed_form_summary(estimator, d, pv, float(z))
                base = {"p": pv, "z": float(z)} if len(ps) > 1 else {"z": float(z)}
                records.append({
                    **base, "quantity": "bias", "theory": summary.bias,
                    "empirical": m_emp, "abs_error": abs(m_emp - summary.bias),
                    "stderr": float(np.sqrt(v_emp / s)),
                })
                records.append({
                    **base, "quantity": "variance", "theory": summary.variance,
                    "empirical": v_emp, "abs_error": abs(v_emp - summary.variance),
                    "stderr": harness.jackknife_variance_stderr(reps),
                })
        command = "mc-moments"
    config = {"command": command, "d": d, "s": s, "seed": seed,
              "z_min": float(zs[0]), "z_max": float(zs[-1]), "grid_points": int(len(zs))}
    if len(ps) > 1:
        config["p_grid"] = ps
    else:
        config["p"] = ps[0]
    if not covariance:
        config["estimator"] = estimator
    errors = np.array([rec["abs_error"] for rec in records])
    aggregates = {
        "max_abs_error": float(errors.max()),
        "mean_abs_error": float(errors.mean()),
    }
    pulls = [rec["abs_error"] / rec["stderr"] for rec in records if rec["stderr"] > 0]
    aggregates["max_error_over_stderr"] = max(pulls) if pulls else 0.0
    report = ExperimentReport(config=config, records=records, aggregates=aggregates)
    _finish(report, out, fmt, plot)


@cli.command()
@click.option("--dataset", type=click.Path(exists=False), default=None,
              help="Delimited text file, one point per row; omit for synthetic normal data.")
@click.option("--delimiter", type=str, default=",", show_default=True)
@click.option("--header", is_flag=True, help="Skip the first row of the dataset file.")
@click.option("--drop-label-col", type=int, default=None, help="Column index to drop before parsing.")
@click.option("--d", type=int, default=32, show_default=True, help="Dimension of synthetic data.")
@click.option("--n", type=int, default=64, show_default=True, help="Synthetic sample size.")
@click.option("--p", type=int, default=16, show_default=True)
@click.option("--p-grid", type=str, default=None,
              help="Comma-separated p sweep (overrides --p), e.g. '8,16,32'.")
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--estimator", type=click.Choice(["rff", "orf"]), default="orf", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@_output_options
def mse(dataset, delimiter, header, drop_label_col, d, n, p, p_grid, trials, seed,
        estimator, workers, out, fmt, plot):
    """Frobenius MSE benchmark of the approximate Gram matrix on a dataset."""
    if dataset is not None:
        data = harness.load_dataset(dataset, delimiter=delimiter, header=header,
                                    drop_label_col=drop_label_col)
    else:
        data = harness.synthetic_dataset(n, d, seed)
    ps = _parse_p_grid(p_grid) if p_grid is not None else [p]
    sub_reports = [harness.mse_experiment(data, pv, trials, estimator, seed, workers=workers)
                   for pv in ps]
    if len(ps) == 1:
        report = sub_reports[0]
    else:
        records = []
        per_p = []
        for pv, sub in zip(ps, sub_reports):
            records.extend({"p": pv, **rec} for rec in sub.records)
            per_p.append({"p": pv, "mse_mean": sub.aggregates["mse_mean"],
                          "mse_std": sub.aggregates["mse_std"]})
        base = sub_reports[0]
        config = dict(base.config)
        config["p"] = None
        config["p_grid"] = ps
        aggregates = dict(base.aggregates)
        del aggregates["mse_mean"], aggregates["mse_std"]
        aggregates["per_p"] = per_p
        report = ExperimentReport(config=config, records=records, aggregates=aggregates)
    _finish(report, out, fmt, plot)


def main(argv=None):
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.Abort:
        sys.exit(1)
    except InvalidArgumentError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except NumericalFailureError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    except OSError as exc:
        click.echo(f"i/o failure: {exc}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()
