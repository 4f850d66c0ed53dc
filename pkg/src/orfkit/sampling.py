"""Seeded generation of Gaussian and Haar-orthogonal weight matrices.

Every matrix is a pure function of ``(shape, seed)``.  The generator is
pinned in one place: PCG64 streams keyed through ``numpy.random.SeedSequence``
with spawn keys as the sub-seed mixing function, recorded in experiment
reports as :data:`RNG_KIND`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError

RNG_KIND = "numpy-pcg64:seedseq-spawnkey"

GAUSSIAN = "gaussian"
HAAR = "haar-orthogonal"

# spawn key reserved for the single retry after a rank-deficient Gaussian draw
_RETRY_KEY = 0x5E7B


def subseed(seed: int, *key: int) -> int:
    """Deterministic 64-bit sub-seed for (seed, key...), via SeedSequence spawn keys."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """A d x p frequency matrix; columns are the frequency vectors w_j."""

    entries: np.ndarray = field(repr=False)
    kind: str
    seed: int
    d: int
    p: int

    def __post_init__(self):
        self.entries.setflags(write=False)


def gaussian_matrix(rows: int, cols: int, seed: int) -> WeightMatrix:
    """i.i.d. standard-normal matrix, deterministic given the seed."""
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"matrix shape must be positive, got {rows}x{cols}")
    g = _generator(int(seed)).standard_normal((int(rows), int(cols)))
    return WeightMatrix(entries=g, kind=GAUSSIAN, seed=int(seed), d=int(rows), p=int(cols))


def haar_orthogonal(d: int, seed: int) -> WeightMatrix:
    """d x d orthogonal matrix distributed by Haar measure.

    QR factorization of a Gaussian draw with each column of Q multiplied by
    the sign of the matching diagonal entry of R.  Without that correction
    the distribution is NOT Haar (the classic pitfall); with it, columns and
    rows are uniform on the sphere.  A rank-deficient draw (probability zero)
    is retried once from a reserved sub-seed.
    """
    if d < 2:
        raise InvalidArgumentError(f"dimension must be >= 2, got {d}")
    d = int(d)
    seed = int(seed)
    for attempt_seed in (seed, subseed(seed, _RETRY_KEY)):
        g = _generator(attempt_seed).standard_normal((d, d))
        q, r = np.linalg.qr(g)
        diag = np.diagonal(r)
        if np.any(diag == 0.0):
            continue
        q = q * np.sign(diag)
        return WeightMatrix(entries=q, kind=HAAR, seed=seed, d=d, p=d)
    raise NumericalFailureError(f"Gaussian draw for d={d}, seed={seed} was rank deficient twice")


def orf_weight_matrix(d: int, p: int, seed: int) -> WeightMatrix:
    """Frequency matrix for the orthogonal estimator.

    For ``p <= d``: the first p columns of one Haar matrix.  For ``p > d``:
    columns of ceil(p/d) independent Haar matrices concatenated and truncated
    to p, each block drawn from ``subseed(seed, block_index)``.
    """
    if d < 2:
        raise InvalidArgumentError(f"dimension must be >= 2, got {d}")
    if p < 1:
        raise InvalidArgumentError(f"feature count must be >= 1, got {p}")
    d, p, seed = int(d), int(p), int(seed)
    n_blocks = -(-p // d)
    cols = [haar_orthogonal(d, subseed(seed, b)).entries for b in range(n_blocks)]
    entries = np.hstack(cols)[:, :p].copy()
    return WeightMatrix(entries=entries, kind=HAAR, seed=seed, d=d, p=p)


def rff_weight_matrix(d: int, p: int, seed: int) -> WeightMatrix:
    """Frequency matrix for the Fourier estimator: delegates to gaussian_matrix."""
    return gaussian_matrix(d, p, seed)
