"""Dimensionality-reduction method suite behind one dispatcher.

``project(m, "isomap", out_dims=2, seed=0, params={"k": 12})`` resolves
the method name, fills parameter defaults, and returns a Projection
whose ``params`` record the fully resolved settings.  Reserved names
(umap, trimap, pacmap, forceatlas2) fail loudly instead of silently
falling back to something else.
"""

from __future__ import annotations

from dataclasses import asdict, replace

from ..embed import EmbeddingMatrix
from ..errors import UnimplementedMethod
from ..mds import classical_mds
from ..phate import PhateParams, pairwise_distances, phate
from ..projection import Projection, default_item_ids
from .graph import (isomap, knn_adjacency, knn_indices, lle, lle_weights,
                    spectral_embedding, spectral_from_adjacency)
from .linear import kernel_pca, pca
from .tsne import tsne

METHODS = ("phate", "pca", "cmds", "kpca", "isomap", "lle", "spectral",
           "tsne")
RESERVED = ("umap", "trimap", "pacmap", "forceatlas2")

_DEFAULTS: dict[str, dict] = {
    "phate": {"k": 10, "alpha": 10.0, "t": 20, "pot_clamp": 1e-7,
              "mds_max_iter": 500, "mds_tol": 1e-6},
    "pca": {},
    "cmds": {},
    "kpca": {"rbf_gamma": 1.0, "kernel": "rbf"},
    "isomap": {"k": 10},
    "lle": {"k": 10},
    "spectral": {"k": 10},
    "tsne": {"perplexity": 30.0, "iters": 1000},
}

_INT_PARAMS = {"k", "t", "iters", "mds_max_iter"}


def resolve_params(method: str, params: dict | None) -> dict:
    """Merge user params over the method defaults; unknown keys are
    rejected so CLI typos fail instead of silently vanishing."""
    if method not in _DEFAULTS:
        raise UnimplementedMethod(method)
    merged = dict(_DEFAULTS[method])
    for key, val in (params or {}).items():
        if key not in merged:
            raise ValueError(
                f"unknown parameter {key!r} for method {method!r}; "
                f"accepted: {sorted(merged) or 'none'}"
            )
        merged[key] = int(val) if key in _INT_PARAMS else val
    return merged


def recorded_params(method: str, out_dims: int = 2, seed: int = 0,
                    params: dict | None = None) -> dict:
    """The exact params dict project() records for these inputs.

    Computable without touching embeddings, so callers can derive a
    projection's content id up front and skip work already memoized.
    Kept in lockstep with the per-method Projection constructors by a
    test that compares against real project() output.
    """
    name = str(method).strip().lower()
    if name in RESERVED or name not in METHODS:
        raise UnimplementedMethod(name)
    if out_dims not in (2, 3):
        raise ValueError(f"out_dims must be 2 or 3, got {out_dims}")
    p = resolve_params(name, params)
    if name == "phate":
        return asdict(PhateParams(out_dims=out_dims, seed=seed, **p))
    if name in ("pca", "cmds"):
        return {"out_dims": out_dims}
    if name == "kpca":
        return {"out_dims": out_dims, "rbf_gamma": p["rbf_gamma"],
                "kernel": p["kernel"]}
    if name in ("isomap", "lle", "spectral"):
        return {"out_dims": out_dims, "k": p["k"]}
    return {"out_dims": out_dims, "perplexity": p["perplexity"],
            "iters": p["iters"]}


def project(m: EmbeddingMatrix, method: str, out_dims: int = 2,
            seed: int = 0, params: dict | None = None,
            item_ids: tuple[str, ...] | None = None) -> Projection:
    """Dispatch to the named reduction method."""
    name = str(method).strip().lower()
    if name in RESERVED or name not in METHODS:
        raise UnimplementedMethod(name)
    if out_dims not in (2, 3):
        raise ValueError(f"out_dims must be 2 or 3, got {out_dims}")
    p = resolve_params(name, params)
    ids = item_ids or default_item_ids(m.rows)

    if name == "phate":
        return phate(m, PhateParams(out_dims=out_dims, seed=seed, **p),
                     item_ids=ids)
    if name == "pca":
        proj = pca(m, out_dims, item_ids=ids)
    elif name == "cmds":
        d = pairwise_distances(m)
        inner = classical_mds(d, out_dims)
        proj = Projection(inner.coords, "cmds", inner.params, m.model_id,
                          ids, seed, metadata=inner.metadata)
    elif name == "kpca":
        proj = kernel_pca(m, out_dims, p["rbf_gamma"], p["kernel"],
                          item_ids=ids)
    elif name == "isomap":
        proj = isomap(m, out_dims, p["k"], item_ids=ids)
    elif name == "lle":
        proj = lle(m, out_dims, p["k"], item_ids=ids)
    elif name == "spectral":
        proj = spectral_embedding(m, out_dims, p["k"], item_ids=ids)
    else:
        return tsne(m, out_dims, p["perplexity"], p["iters"], seed,
                    item_ids=ids)
    # deterministic methods ignore the seed numerically, but the doc
    # identity hashes it, so the record must echo the caller's value
    return proj if proj.seed == seed else replace(proj, seed=seed)


__all__ = [
    "METHODS", "RESERVED", "project", "recorded_params", "resolve_params",
    "pca", "kernel_pca", "classical_mds", "isomap", "lle", "lle_weights",
    "spectral_embedding", "spectral_from_adjacency", "knn_adjacency",
    "knn_indices", "tsne",
]
