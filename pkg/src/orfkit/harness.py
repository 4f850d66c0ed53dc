"""Monte-Carlo experiments, dataset ingestion, and the MSE benchmark.

Replicate l of any experiment is seeded by ``subseed(seed, l)``, so results
are a deterministic function of (config, seed) regardless of execution order
or worker count; parallel execution only changes scheduling, never values.

The empirical moments follow the convention

    M = (1/s) sum_l k_l,      V = (1/s) sum_l (k_l - M)^2,

i.e. the variance uses the 1/s normalization.  Its Monte-Carlo standard
error is estimated by delete-1 jackknife over the s kernel replicates.
"""

from __future__ import annotations

import csv as _csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import analytics
from .errors import DatasetError, InvalidArgumentError
from .features import approx_kernel, gram_matrix
from .report import ExperimentReport
from .sampling import GAUSSIAN, HAAR, _generator, orf_weight_matrix, rff_weight_matrix, subseed
from .specfun import normalized_bessel_grid


@dataclass(frozen=True, eq=False)
class Dataset:
    """n x d point cloud with provenance ('synthetic' or a file path)."""

    X: np.ndarray = field(repr=False)
    name: str
    source: str

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise DatasetError(f"dataset {self.name!r} needs at least 2 points, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            i, j = np.argwhere(~np.isfinite(X))[0]
            raise DatasetError(f"dataset {self.name!r} has a non-finite entry at row {i}, column {j}")
        object.__setattr__(self, "X", X)


class MomentEstimate(NamedTuple):
    m_emp: float
    v_emp: float
    stderr: float


class CovarianceEstimate(NamedTuple):
    value: float
    stderr: float


def _weight_builder(kind: str):
    if kind in (analytics.RFF, GAUSSIAN):
        return rff_weight_matrix
    if kind in (analytics.ORF, HAAR):
        return orf_weight_matrix
    raise InvalidArgumentError(f"estimator must be 'rff' or 'orf', got {kind!r}")


def _map_chunks(fn, n: int, workers: int) -> list:
    """fn(lo, hi) over a contiguous cover of range(n), results in index order."""
    workers = max(1, int(workers))
    if workers == 1 or n <= 1:
        return [fn(0, n)]
    bounds = np.linspace(0, n, workers + 1).astype(int)
    spans = [(int(lo), int(hi)) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: fn(*span), spans))


def kernel_replicates(kind: str, d: int, p: int, x, y, s: int, seed: int, workers: int = 1) -> np.ndarray:
    """s independent draws of the approximate kernel at (x, y), sub-seeded per draw."""
    build = _weight_builder(kind)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if s < 1:
        raise InvalidArgumentError(f"draw count must be >= 1, got {s}")

    def chunk(lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo)
        for l in range(lo, hi):
            out[l - lo] = approx_kernel(build(d, p, subseed(seed, l)), x, y)
        return out

    return np.concatenate(_map_chunks(chunk, int(s), workers))


def empirical_moments(kind: str, d: int, p: int, x, y, s: int, seed: int, workers: int = 1) -> MomentEstimate:
    """Empirical mean and (1/s-normalized) variance of the kernel over s draws.

    ``stderr`` is the Monte-Carlo standard error of the mean, sqrt(V/s).
    """
    if s < 2:
        raise InvalidArgumentError(f"draw count must be >= 2, got {s}")
    reps = kernel_replicates(kind, d, p, x, y, s, seed, workers)
    m = float(np.mean(reps))
    v = float(np.mean((reps - m) ** 2))
    return MomentEstimate(m_emp=m, v_emp=v, stderr=float(np.sqrt(v / s)))


def jackknife_variance_stderr(replicates: np.ndarray) -> float:
    """Delete-1 jackknife standard error of the empirical variance estimator."""
    x = np.asarray(replicates, dtype=float)
    s = x.size
    if s < 3:
        raise InvalidArgumentError(f"jackknife needs at least 3 replicates, got {s}")
    s1, s2 = x.sum(), (x * x).sum()
    mean_loo = (s1 - x) / (s - 1)
    var_loo = (s2 - x * x) / (s - 1) - mean_loo ** 2
    return float(np.sqrt((s - 1) / s * np.sum((var_loo - var_loo.mean()) ** 2)))


def mc_covariance(d: int, z: float, s: int, seed: int, workers: int = 1) -> CovarianceEstimate:
    """Monte-Carlo covariance of the first two frequency cosines over s Haar draws.

    Estimates cov[cos(w_1 . delta), cos(w_2 . delta)] at ||delta|| = z (the
    separation is rotated onto the first axis, so only the first row of each
    Haar matrix enters).  The closed form is j(sqrt(2) z) - j(z)^2.  The
    standard error is a delete-1 jackknife of the covariance statistic.
    """
    if s < 100:
        raise InvalidArgumentError(f"draw count must be >= 100, got {s}")
    z = float(z)

    def chunk(lo: int, hi: int) -> np.ndarray:
        out = np.empty((hi - lo, 2))
        for l in range(lo, hi):
            W = orf_weight_matrix(d, 2, subseed(seed, l))
            out[l - lo] = np.cos(z * W.entries[0, :2])
        return out

    ab = np.vstack(_map_chunks(chunk, int(s), workers))
    a, b = ab[:, 0], ab[:, 1]
    value = float(np.mean(a * b) - np.mean(a) * np.mean(b))
    sa, sb, sab = a.sum(), b.sum(), (a * b).sum()
    cov_loo = (sab - a * b) / (s - 1) - (sa - a) * (sb - b) / (s - 1) ** 2
    stderr = float(np.sqrt((s - 1) / s * np.sum((cov_loo - cov_loo.mean()) ** 2)))
    return CovarianceEstimate(value=value, stderr=stderr)


def normal_pair_at_distance(d: int, z: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Standard-normal pair (x, y) in R^d rescaled along x - y so ||x - y|| = z."""
    rng = _generator(subseed(seed, 0xA11))
    x0 = rng.standard_normal(d)
    y = rng.standard_normal(d)
    direction = x0 - y
    return y + float(z) * direction / np.linalg.norm(direction), y


def synthetic_dataset(n: int, d: int, seed: int) -> Dataset:
    """n i.i.d. standard-normal points in R^d."""
    X = _generator(subseed(seed, 0xDA7A)).standard_normal((int(n), int(d)))
    return Dataset(X=X, name=f"synthetic-normal-{n}x{d}", source="synthetic")


def load_dataset(
    path,
    delimiter: str = ",",
    header: bool = False,
    drop_label_col: int | None = None,
) -> Dataset:
    """Parse a delimited text file into a Dataset, one point per row.

    Raises :class:`DatasetError` naming the offending (row, column) for any
    non-numeric feature cell, ragged row, or empty file.  Row and column
    indices in messages are zero-based and refer to the file as read (before
    the label column is dropped).
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(_csv.reader(fh, delimiter=delimiter))
    if header and rows:
        rows = rows[1:]
    rows = [r for r in rows if r]
    if not rows:
        raise DatasetError(f"dataset {path} is empty")
    width = len(rows[0])
    data = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DatasetError(f"{path}: row {i} has {len(row)} cells, expected {width}")
        values = []
        for j, cell in enumerate(row):
            if drop_label_col is not None and j == drop_label_col:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise DatasetError(
                    f"{path}: could not parse cell at row {i}, column {j}: {cell!r}"
                ) from None
        data.append(values)
    if not data or not data[0]:
        raise DatasetError(f"dataset {path} has no feature columns")
    return Dataset(X=np.array(data, dtype=float), name=str(path), source=str(path))


def bandwidth_heuristic(X: np.ndarray) -> float:
    """Root-mean-square pairwise distance, sqrt((1/n^2) sum_ij ||x_i - x_j||^2).

    The double sum runs over all ordered pairs including i = j.  Returns 0
    for a degenerate (all-identical) cloud; callers must reject that before
    scaling by 1/sigma.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidArgumentError(f"bandwidth needs an (n >= 2) x d matrix, got shape {X.shape}")
    n = X.shape[0]
    sq_norms = np.einsum("ij,ij->i", X, X)
    col_sums = X.sum(axis=0)
    total = 2.0 * n * sq_norms.sum() - 2.0 * float(col_sums @ col_sums)
    return float(np.sqrt(max(total, 0.0) / (n * n)))


def _distance_matrix(X: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", X, X)
    g = X @ X.T
    d2 = sq[:, None] + sq[None, :] - 2.0 * g
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(np.maximum(d2, 0.0))


def true_kernel_matrix(kind: str, X: np.ndarray, d: int) -> np.ndarray:
    """Reference kernel matrix on already-scaled inputs.

    Gaussian kernel exp(-z^2/2) for the Fourier estimator; the Bessel kernel
    j_{d/2-1}(z) for the orthogonal one (its exact expectation).
    """
    dist = _distance_matrix(np.asarray(X, dtype=float))
    if kind == analytics.RFF:
        K = np.exp(-dist ** 2 / 2.0)
    elif kind == analytics.ORF:
        K = normalized_bessel_grid(d, dist.ravel()).reshape(dist.shape).copy()
    else:
        raise InvalidArgumentError(f"estimator must be 'rff' or 'orf', got {kind!r}")
    np.fill_diagonal(K, 1.0)
    return K


def mse_experiment(
    dataset: Dataset,
    p: int,
    trials: int,
    kind: str,
    seed: int,
    workers: int = 1,
) -> ExperimentReport:
    """Frobenius MSE benchmark ||K - K~||_F^2 / n^2 over seeded trials.

    Inputs are scaled by the bandwidth heuristic (x -> x / sigma); the
    reference K is the Gaussian or Bessel kernel matrix of the scaled inputs
    depending on the estimator.  The report also carries the fraction of
    off-diagonal scaled pairwise distances inside the variance-dominance
    interval [0, max(alpha_d, beta_d)].
    """
    if trials < 1:
        raise InvalidArgumentError(f"trial count must be >= 1, got {trials}")
    build = _weight_builder(kind)
    X = dataset.X
    n, d = X.shape
    sigma = bandwidth_heuristic(X)
    if sigma == 0.0:
        raise DatasetError(f"dataset {dataset.name!r} is degenerate: bandwidth heuristic is 0")
    Xs = X / sigma
    K = true_kernel_matrix(kind, Xs, d)
    dist = _distance_matrix(Xs)
    off = ~np.eye(n, dtype=bool)
    interval_end = analytics.variance_dominance_interval(d)
    fraction_inside = float(np.mean(dist[off] <= interval_end))

    def chunk(lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo)
        for t in range(lo, hi):
            Kt = gram_matrix(build(d, int(p), subseed(seed, t)), Xs).entries
            out[t - lo] = np.sum((K - Kt) ** 2) / (n * n)
        return out

    mses = np.concatenate(_map_chunks(chunk, int(trials), workers))
    records = [{"trial": t, "mse": float(m)} for t, m in enumerate(mses)]
    std = float(np.std(mses, ddof=1)) if trials > 1 else 0.0
    aggregates = {
        "mse_mean": float(np.mean(mses)),
        "mse_std": std,
        "mse_stderr": std / math.sqrt(trials),
        "fraction_pairs_in_dominance_interval": fraction_inside,
        "dominance_interval_end": interval_end,
        "sigma": sigma,
    }
    config = {
        "command": "mse",
        "estimator": kind,
        "d": int(d),
        "n": int(n),
        "p": int(p),
        "trials": int(trials),
        "seed": int(seed),
        "dataset": dataset.name,
        "source": dataset.source,
        "sigma": sigma,
    }
    return ExperimentReport(config=config, records=records, aggregates=aggregates)
