"""Exact t-SNE (no tree approximation); deterministic under a fixed seed."""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..embed import EmbeddingMatrix
from ..errors import PerplexityTooLarge
from ..projection import Projection, default_item_ids

ENTROPY_TOL = 1e-5
MAX_BISECTIONS = 50
EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
LEARNING_RATE = 200.0
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
MAX_BACKTRACKS = 8


def conditional_probs(d2_row: np.ndarray, perplexity: float
                      ) -> np.ndarray:
    """Bandwidth by bisection so the row entropy matches log(perplexity).

    d2_row excludes the self entry.  If the target entropy is
    unreachable (all neighbors equidistant, say) the closest beta found
    within the step budget wins.
    """
    target = math.log(perplexity)
    beta = 1.0
    beta_min, beta_max = -np.inf, np.inf
    h, p = kernels.entropy_row(d2_row, beta)
    best_gap, best_p = abs(h - target), p
    for _ in range(MAX_BISECTIONS):
        diff = h - target
        if abs(diff) < ENTROPY_TOL:
            break
        if diff > 0:
            beta_min = beta
            beta = beta * 2.0 if not np.isfinite(beta_max) \
                else 0.5 * (beta + beta_max)
        else:
            beta_max = beta
            beta = beta * 0.5 if not np.isfinite(beta_min) \
                else 0.5 * (beta + beta_min)
        h, p = kernels.entropy_row(d2_row, beta)
        if abs(h - target) < best_gap:
            best_gap, best_p = abs(h - target), p
    return best_p


def joint_probabilities(d: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint distribution P from a distance matrix."""
    n = d.shape[0]
    d2 = d * d
    cond = np.zeros((n, n), dtype=np.float64)
    mask = ~np.eye(n, dtype=bool)
    for i in range(n):
        cond[i, mask[i]] = conditional_probs(d2[i, mask[i]], perplexity)
    p = (cond + cond.T) / (2.0 * n)
    return np.maximum(p, 1e-12)


def tsne(m: EmbeddingMatrix, out_dims: int = 2, perplexity: float = 30.0,
         iters: int = 1000, seed: int = 0,
         item_ids: tuple[str, ...] | None = None) -> Projection:
    """Gradient descent on KL(P || Q) with momentum and early exaggeration.

    Within each phase (exaggerated / plain) the KL value must never
    rise; a step that would raise it is rolled back with momentum
    cleared and the step size halved, up to MAX_BACKTRACKS times per
    phase, which keeps the descent property that downstream checks
    assert.
    """
    n = m.rows
    if not perplexity > 0:
        raise ValueError(f"perplexity must be > 0, got {perplexity}")
    if iters < 1:
        raise ValueError(f"iters must be >= 1, got {iters}")
    if perplexity >= (n - 1) / 3.0:
        raise PerplexityTooLarge(perplexity, n)

    d = kernels.pairwise_dists(m.values)
    p = joint_probabilities(d, perplexity)

    rng = np.random.default_rng(seed)
    y = rng.standard_normal((n, out_dims)) * 1e-4
    velocity = np.zeros_like(y)

    kl_trace: list[float] = []
    backtracks = 0
    step_scale = 1.0
    prev_kl = np.inf
    prev_y = y
    retries = 0
    it = 0
    while it < iters:
        early = it < EXAGGERATION_ITERS
        p_use = p * EXAGGERATION if early else p
        grad, kl = kernels.tsne_forces(p_use, y)

        if kl > prev_kl * (1 + 1e-9) + 1e-12 and retries < MAX_BACKTRACKS:
            # the previous update overshot: rewind it and damp the step
            y = prev_y
            velocity = np.zeros_like(y)
            step_scale *= 0.5
            retries += 1
            backtracks += 1
            continue
        retries = 0
        kl_trace.append(float(kl))
        prev_kl = kl
        prev_y = y

        momentum = MOMENTUM_EARLY if early else MOMENTUM_LATE
        velocity = momentum * velocity - step_scale * LEARNING_RATE * grad
        y = y + velocity
        it += 1
        if early and it == EXAGGERATION_ITERS:
            # exaggeration lifts: KL baseline is not comparable across
            # the switch
            prev_kl = np.inf
            step_scale = 1.0

    grad, kl = kernels.tsne_forces(p, y)
    if kl > prev_kl * (1 + 1e-9) + 1e-12 and iters > EXAGGERATION_ITERS:
        y = prev_y  # final step overshot; keep the best iterate
    else:
        kl_trace.append(float(kl))

    return Projection(
        coords=y,
        method="tsne",
        params={"out_dims": out_dims, "perplexity": perplexity,
                "iters": iters},
        model_id=m.model_id,
        item_ids=item_ids or default_item_ids(n),
        seed=seed,
        stress=None,
        metadata={"kl_final": float(kl_trace[-1]) if kl_trace else 0.0,
                  "kl_trace": kl_trace,
                  "backtracks": backtracks},
    )
