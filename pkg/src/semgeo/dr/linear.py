"""PCA and kernel PCA."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..embed import EmbeddingMatrix
from ..errors import DegenerateKernel
from ..kernels import pairwise_dists
from ..mds import sign_fix
from ..projection import Projection, default_item_ids


def pca_coords(x: np.ndarray, out_dims: int) -> tuple[np.ndarray, np.ndarray]:
    """Centered scores on the top principal components.

    Returns (scores, covariance eigenvalues for the kept components).
    Components follow the shared sign convention: the largest-magnitude
    coordinate of each component direction is positive.
    """
    n = x.shape[0]
    xc = x - x.mean(axis=0)
    u, s, vt = np.linalg.svd(xc, full_matrices=False)
    take = min(out_dims, vt.shape[0])
    comps = vt[:take]
    for r in range(take):
        pivot = np.argmax(np.abs(comps[r]))
        if comps[r, pivot] < 0:
            comps[r] = -comps[r]
            u[:, r] = -u[:, r]
    scores = u[:, :take] * s[:take]
    if take < out_dims:
        scores = np.hstack([scores, np.zeros((n, out_dims - take))])
    eigvals = (s[:take] ** 2) / max(n - 1, 1)
    return scores, eigvals


def pca(m: EmbeddingMatrix, out_dims: int = 2,
        item_ids: tuple[str, ...] | None = None) -> Projection:
    if m.rows < 2:
        raise ValueError("need at least 2 rows")
    scores, eigvals = pca_coords(m.values, out_dims)
    return Projection(
        coords=scores,
        method="pca",
        params={"out_dims": out_dims},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(m.rows),
        seed=0,
        metadata={"eigenvalues": [float(v) for v in eigvals]},
    )


def _center_kernel(k: np.ndarray) -> np.ndarray:
    row = k.mean(axis=1, keepdims=True)
    col = k.mean(axis=0, keepdims=True)
    kc = k - row - col + k.mean()
    return 0.5 * (kc + kc.T)


def kernel_pca(m: EmbeddingMatrix, out_dims: int = 2, rbf_gamma: float = 1.0,
               kernel: str = "rbf",
               item_ids: tuple[str, ...] | None = None) -> Projection:
    """Kernel PCA with an RBF kernel (or a linear one as a cross-check).

    Feature-space eigenvectors are normalized by 1/sqrt(eigenvalue), so
    projecting the training points lands on sqrt(eigenvalue) * eigvec;
    with a linear kernel this reproduces PCA scores up to sign.
    """
    if m.rows < 2:
        raise ValueError("need at least 2 rows")
    if kernel == "rbf":
        if not rbf_gamma > 0:
            raise ValueError(f"rbf_gamma must be > 0, got {rbf_gamma}")
        d = pairwise_dists(m.values)
        k = np.exp(-rbf_gamma * d * d)
    elif kernel == "linear":
        k = m.values @ m.values.T
    else:
        raise ValueError(f"unknown kernel {kernel!r}")

    kc = _center_kernel(k)
    n = kc.shape[0]
    take = min(out_dims, n)
    vals, vecs = scipy.linalg.eigh(kc, subset_by_index=(n - take, n - 1))
    vals, vecs = vals[::-1], vecs[:, ::-1]
    if vals[0] <= 1e-12:
        raise DegenerateKernel(
            f"top eigenvalue {vals[0]:.3e} after centering; "
            f"kernel carries no variance"
        )
    coords = sign_fix(vecs) * np.sqrt(np.maximum(vals, 0.0))
    if take < out_dims:
        coords = np.hstack([coords, np.zeros((n, out_dims - take))])
    return Projection(
        coords=coords,
        method="kpca",
        params={"out_dims": out_dims, "rbf_gamma": rbf_gamma,
                "kernel": kernel},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(m.rows),
        seed=0,
        metadata={"eigenvalues": [float(v) for v in vals]},
    )
