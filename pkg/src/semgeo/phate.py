"""Diffusion-potential embedding pipeline.

Six stages, composed by :func:`phate`:

1. pairwise Euclidean distances between (unit-normalized) embedding rows
2. adaptive bandwidths: eps_i = distance to the k-th nearest neighbor
3. alpha-decay kernel with those bandwidths
4. row-normalization to a Markov diffusion operator P
5. P^t by repeated squaring, then potentials U = -log(max(P^t, clamp))
6. metric MDS on the Euclidean distances between potential rows

Dense n×n algebra throughout; intended scale is a few thousand points.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .embed import EmbeddingMatrix, l2_normalize
from .errors import KTooLarge, NonFiniteInput
from .mds import check_distance_matrix, metric_mds
from .projection import Projection, default_item_ids


@dataclass(frozen=True)
class PhateParams:
    k: int = 10
    alpha: float = 10.0
    t: int = 20
    out_dims: int = 2
    seed: int = 0
    pot_clamp: float = 1e-7
    mds_max_iter: int = 500
    mds_tol: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.out_dims not in (2, 3):
            raise ValueError(f"out_dims must be 2 or 3, got {self.out_dims}")
        if not 0.0 < self.pot_clamp < 1.0:
            raise ValueError(f"pot_clamp must be in (0,1), got {self.pot_clamp}")


def pairwise_distances(m: EmbeddingMatrix) -> np.ndarray:
    """Euclidean distance matrix between embedding rows."""
    if m.rows < 2:
        raise ValueError("need at least 2 rows")
    if not np.all(np.isfinite(m.values)):
        raise NonFiniteInput("embedding matrix contains nan or inf")
    return kernels.pairwise_dists(m.values)


def adaptive_bandwidths(d: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor, self excluded.

    A zero bandwidth (k or more exact duplicates) is floored to the
    smallest positive distance in that row, or machine epsilon if the
    row has none, so kernel division stays finite and duplicates keep
    affinity 1 to each other.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    if k >= n:
        raise KTooLarge(k, n)
    srt = np.sort(d, axis=1)
    eps = srt[:, k].copy()  # index 0 is the self distance
    for i in np.where(eps == 0.0)[0]:
        positive = srt[i][srt[i] > 0.0]
        floor = positive[0] if positive.size else np.finfo(np.float64).eps
        eps[i] = max(np.finfo(np.float64).eps, float(floor))
    return eps


def alpha_decay_kernel(d: np.ndarray, eps: np.ndarray,
                       alpha: float) -> np.ndarray:
    d = check_distance_matrix(d)
    if np.any(eps <= 0.0):
        raise ValueError("all bandwidths must be positive")
    return kernels.alpha_kernel(d, np.asarray(eps, dtype=np.float64),
                                float(alpha))


def to_markov(k: np.ndarray) -> np.ndarray:
    """Row-normalize a kernel into a diffusion operator."""
    sums = k.sum(axis=1, keepdims=True)
    return k / sums


def diffuse(p: np.ndarray, t: int) -> np.ndarray:
    """P^t by binary exponentiation (repeated squaring)."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    result = None
    base = p
    e = t
    while e:
        if e & 1:
            result = base if result is None else result @ base
        e >>= 1
        if e:
            base = base @ base
    return result.copy() if result is p else result


def potential_distances(pt: np.ndarray, clamp: float) -> np.ndarray:
    if not 0.0 < clamp < 1.0:
        raise ValueError(f"clamp must be in (0,1), got {clamp}")
    u = -np.log(np.maximum(pt, clamp))
    return kernels.pairwise_dists(u)


def phate(m: EmbeddingMatrix, params: PhateParams | None = None,
          item_ids: tuple[str, ...] | None = None,
          normalize: bool = True) -> Projection:
    """Full pipeline; deterministic for fixed inputs and parameters."""
    p = params or PhateParams()
    if m.rows < p.k + 1:
        raise KTooLarge(p.k, m.rows)
    work = l2_normalize(m) if (normalize and not m.normalized) else m

    d = pairwise_distances(work)
    eps = adaptive_bandwidths(d, p.k)
    kern = alpha_decay_kernel(d, eps, p.alpha)
    op = to_markov(kern)
    pt = diffuse(op, p.t)
    pot_d = potential_distances(pt, p.pot_clamp)
    sol = metric_mds(pot_d, p.out_dims, seed=p.seed,
                     max_iter=p.mds_max_iter, tol=p.mds_tol)

    return Projection(
        coords=sol.coords,
        method="phate",
        params=asdict(p),
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(m.rows),
        seed=p.seed,
        stress=sol.stress,
        metadata={"mds_iterations": sol.metadata["iterations"],
                  "normalized_input": bool(work.normalized)},
    )
