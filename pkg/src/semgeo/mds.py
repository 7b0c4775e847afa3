"""Multidimensional scaling: classical (Torgerson) and SMACOF metric MDS.

Classical MDS double-centers the squared distance matrix and reads
coordinates off the top eigenpairs.  Metric MDS minimizes raw stress
sum_{i<j} (D_ij - dhat_ij)^2 by Guttman-transform majorization, started
from the classical solution, so stress never increases across
iterations.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import kernels
from .errors import NonFiniteInput
from .projection import Projection, default_item_ids


def sign_fix(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive.

    The shared eigen-sign convention: keeps embeddings comparable across
    runs and implementations.
    """
    out = vectors.copy()
    for c in range(out.shape[1]):
        col = out[:, c]
        pivot = np.argmax(np.abs(col))
        if col[pivot] < 0:
            out[:, c] = -col
    return out


def check_distance_matrix(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got {d.shape}")
    if not np.all(np.isfinite(d)):
        raise NonFiniteInput("distance matrix contains nan or inf")
    return d


def classical_mds_coords(d: np.ndarray, out_dims: int
                         ) -> tuple[np.ndarray, int]:
    """Torgerson coordinates; returns (coords, clipped negative count)."""
    d = check_distance_matrix(d)
    n = d.shape[0]
    if n == 1:
        return np.zeros((1, out_dims)), 0
    sq = d * d
    # double centering without materializing J: B = -0.5 (sq - row - col + all)
    row = sq.mean(axis=1, keepdims=True)
    col = sq.mean(axis=0, keepdims=True)
    b = -0.5 * (sq - row - col + sq.mean())
    b = 0.5 * (b + b.T)
    take = min(out_dims, n)
    vals, vecs = scipy.linalg.eigh(b, subset_by_index=(n - take, n - 1))
    vals, vecs = vals[::-1], vecs[:, ::-1]
    clipped = int(np.sum(vals < 0))
    coords = sign_fix(vecs) * np.sqrt(np.maximum(vals, 0.0))
    if take < out_dims:
        coords = np.hstack([coords, np.zeros((n, out_dims - take))])
    return coords, clipped


def classical_mds(d: np.ndarray, out_dims: int) -> Projection:
    coords, clipped = classical_mds_coords(d, out_dims)
    return Projection(
        coords=coords,
        method="cmds",
        params={"out_dims": out_dims},
        model_id="",
        item_ids=default_item_ids(coords.shape[0]),
        seed=0,
        metadata={"clipped_negative_eigs": clipped},
    )


def metric_mds(d: np.ndarray, out_dims: int, seed: int = 0,
               max_iter: int = 500, tol: float = 1e-6) -> Projection:
    """SMACOF metric MDS from a classical-MDS start.

    Non-convergence is not an error: the best iterate comes back with
    its stress.  The stress trace lands in metadata for callers that
    want to assert monotonicity.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    if n == 1:
        return Projection(np.zeros((1, out_dims)), "mds",
                          {"out_dims": out_dims, "max_iter": max_iter,
                           "tol": tol},
                          "", default_item_ids(1), seed, stress=0.0,
                          metadata={"iterations": 0, "stress_trace": [0.0]})

    x, _ = classical_mds_coords(d, out_dims)
    # a fully degenerate start (all points coincident, but targets not
    # all zero) cannot move under the Guttman transform; jitter it
    if d.max() > 0 and float(np.ptp(x, axis=0).max()) == 0.0:
        rng = np.random.default_rng(seed)
        x = x + rng.standard_normal(x.shape) * (d.mean() * 1e-6 + 1e-12)

    x_next, stress = kernels.smacof_step(x, d)
    trace = [float(stress)]
    iterations = 0
    for _ in range(max_iter):
        x = x_next
        x_next, stress = kernels.smacof_step(x, d)
        stress = float(stress)
        prev = trace[-1]
        assert stress <= prev * (1 + 1e-9) + 1e-12, "stress increased"
        trace.append(stress)
        iterations += 1
        if prev == 0.0 or (prev - stress) / prev < tol:
            break

    return Projection(
        coords=x,
        method="mds",
        params={"out_dims": out_dims, "max_iter": max_iter, "tol": tol},
        model_id="",
        item_ids=default_item_ids(n),
        seed=seed,
        stress=trace[-1],
        metadata={"iterations": iterations, "stress_trace": trace},
    )
