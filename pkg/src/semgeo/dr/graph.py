"""Neighborhood-graph methods: Isomap, LLE, spectral embedding."""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph

from ..embed import EmbeddingMatrix
from ..errors import DisconnectedGraph, KTooLarge
from ..kernels import pairwise_dists
from ..mds import classical_mds_coords, sign_fix
from ..projection import Projection, default_item_ids


def knn_indices(d: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k nearest neighbors per row, self excluded.

    Stable argsort so exact distance ties break by index, keeping the
    graph permutation-equivariant and deterministic.
    """
    n = d.shape[0]
    if k >= n:
        raise KTooLarge(k, n)
    dd = d.copy()
    np.fill_diagonal(dd, np.inf)
    return np.argsort(dd, axis=1, kind="stable")[:, :k]


def knn_adjacency(d: np.ndarray, k: int, weighted: bool = False
                  ) -> np.ndarray:
    """Symmetrized (union) k-NN graph as a dense matrix.

    Unit weights by default; weighted=True keeps Euclidean edge lengths.
    """
    n = d.shape[0]
    nbr = knn_indices(d, k)
    adj = np.zeros((n, n), dtype=np.float64)
    rows = np.repeat(np.arange(n), k)
    cols = nbr.ravel()
    adj[rows, cols] = d[rows, cols] if weighted else 1.0
    return np.maximum(adj, adj.T)


def isomap(m: EmbeddingMatrix, out_dims: int = 2, k: int = 10,
           item_ids: tuple[str, ...] | None = None) -> Projection:
    """Classical MDS on all-pairs shortest-path (geodesic) distances."""
    d = pairwise_dists(m.values)
    adj = knn_adjacency(d, k, weighted=True)
    graph = scipy.sparse.csr_matrix(adj)
    ncomp, _ = scipy.sparse.csgraph.connected_components(graph,
                                                         directed=False)
    if ncomp > 1:
        raise DisconnectedGraph(ncomp)
    geo = scipy.sparse.csgraph.shortest_path(graph, method="D",
                                             directed=False)
    coords, clipped = classical_mds_coords(geo, out_dims)
    return Projection(
        coords=coords,
        method="isomap",
        params={"out_dims": out_dims, "k": k},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(m.rows),
        seed=0,
        metadata={"clipped_negative_eigs": clipped},
    )


def lle_weights(x: np.ndarray, k: int) -> np.ndarray:
    """Reconstruction weight matrix W: row i rebuilds x_i from its k
    nearest neighbors, weights summing to 1.

    Each row solves the equality-constrained least-squares problem
    min ||x_i - sum_j w_j x_j||^2 s.t. sum w = 1 exactly through its KKT
    system (minimum-norm solution when the local Gram matrix is
    singular), so neighborhoods that admit an exact affine
    reconstruction reconstruct to machine precision.
    """
    n = x.shape[0]
    d = pairwise_dists(x)
    nbr = knn_indices(d, k)
    w = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        idx = nbr[i]
        b = x[idx] - x[i]
        gram = b @ b.T
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = 2.0 * gram
        kkt[:k, k] = 1.0
        kkt[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        wi = sol[:k]
        total = wi.sum()
        if total != 0.0:
            wi = wi / total
        w[i, idx] = wi
    return w


def lle(m: EmbeddingMatrix, out_dims: int = 2, k: int = 10,
        item_ids: tuple[str, ...] | None = None) -> Projection:
    """Locally linear embedding: bottom non-trivial eigenvectors of
    (I-W)^T (I-W)."""
    n = m.rows
    if k >= n:
        raise KTooLarge(k, n)
    w = lle_weights(m.values, k)
    iw = np.eye(n) - w
    mmat = iw.T @ iw
    mmat = 0.5 * (mmat + mmat.T)
    take = min(out_dims + 1, n)
    vals, vecs = scipy.linalg.eigh(mmat, subset_by_index=(0, take - 1))
    # index 0 is the trivial constant eigenvector (eigenvalue ~0)
    coords = sign_fix(vecs[:, 1:take])
    if coords.shape[1] < out_dims:
        coords = np.hstack(
            [coords, np.zeros((n, out_dims - coords.shape[1]))])
    return Projection(
        coords=coords,
        method="lle",
        params={"out_dims": out_dims, "k": k},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(n),
        seed=0,
        metadata={"bottom_eigenvalues": [float(v) for v in vals]},
    )


def spectral_from_adjacency(adj: np.ndarray, out_dims: int
                            ) -> tuple[np.ndarray, int]:
    """Spectral coordinates from a dense symmetric adjacency matrix.

    Eigenvectors 2..out_dims+1 of the symmetric normalized Laplacian,
    rows rescaled by degree^(-1/2) (the random-walk eigenvectors).
    Returns (coords, connected component count); disconnection is the
    caller's business.
    """
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    if np.any(deg <= 0):
        raise ValueError("adjacency has an isolated vertex")
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = np.eye(n) - inv_sqrt[:, None] * adj * inv_sqrt[None, :]
    lap = 0.5 * (lap + lap.T)
    take = min(out_dims + 1, n)
    vals, vecs = scipy.linalg.eigh(lap, subset_by_index=(0, take - 1))
    coords = sign_fix(vecs[:, 1:take] * inv_sqrt[:, None])
    if coords.shape[1] < out_dims:
        coords = np.hstack(
            [coords, np.zeros((n, out_dims - coords.shape[1]))])
    ncomp, _ = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(adj), directed=False)
    return coords, int(ncomp)


def spectral_embedding(m: EmbeddingMatrix, out_dims: int = 2, k: int = 10,
                       item_ids: tuple[str, ...] | None = None) -> Projection:
    """Laplacian eigenmap on the unit-weight symmetrized k-NN graph.

    A disconnected graph is not an error here: components land in
    separate spots by construction, and the count is reported in
    metadata for callers that care.
    """
    d = pairwise_dists(m.values)
    adj = knn_adjacency(d, k, weighted=False)
    coords, ncomp = spectral_from_adjacency(adj, out_dims)
    return Projection(
        coords=coords,
        method="spectral",
        params={"out_dims": out_dims, "k": k},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(m.rows),
        seed=0,
        metadata={"component_count": ncomp},
    )
