"""Synthetic geometry generators for tests, benchmarks, and demos."""

from __future__ import annotations

import numpy as np


def gaussian_clusters(n_per: int, centers: np.ndarray, sigma: float,
                      seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Isotropic Gaussian blobs; returns (points, integer labels)."""
    centers = np.asarray(centers, dtype=np.float64)
    rng = np.random.default_rng(seed)
    pts, labels = [], []
    for i, c in enumerate(centers):
        pts.append(c + sigma * rng.standard_normal((n_per, centers.shape[1])))
        labels.extend([i] * n_per)
    return np.vstack(pts), np.array(labels)


def branch_tree(branches: int = 3, per_branch: int = 30, dim: int = 50,
                step: float = 1.0, noise: float = 0.1, seed: int = 0
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Noisy random-walk tree rooted at the origin.

    Each branch walks per_branch steps in its own drift direction.
    Returns (points, tree geodesic distance matrix, branch labels).
    Geodesic between (branch b, step i) and (c, j): |i-j| steps along a
    shared branch, i+j+2 steps through the root otherwise.
    """
    rng = np.random.default_rng(seed)
    pts = []
    labels = []
    depths = []
    for b in range(branches):
        drift = rng.standard_normal(dim)
        drift /= np.linalg.norm(drift)
        x = np.zeros(dim)
        for i in range(per_branch):
            x = x + step * drift + noise * rng.standard_normal(dim)
            pts.append(x.copy())
            labels.append(b)
            depths.append(i)
    n = branches * per_branch
    labels = np.array(labels)
    depths = np.array(depths)
    geo = np.empty((n, n), dtype=np.float64)
    for a in range(n):
        same = labels == labels[a]
        geo[a, same] = np.abs(depths[same] - depths[a])
        geo[a, ~same] = depths[~same] + depths[a] + 2
    np.fill_diagonal(geo, 0.0)
    return np.vstack(pts), geo, labels


def swiss_roll(n: int, seed: int = 0
               ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Classic roll; returns (3-D points, roll parameter, height)."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(1.5 * np.pi, 4.5 * np.pi, size=n)
    t.sort()
    h = rng.uniform(0.0, 10.0, size=n)
    x = np.column_stack([t * np.cos(t), h, t * np.sin(t)])
    return x, t, h


def archimedean_spiral(thetas: np.ndarray) -> np.ndarray:
    """Planar spiral r = theta."""
    thetas = np.asarray(thetas, dtype=np.float64)
    return np.column_stack([thetas * np.cos(thetas),
                            thetas * np.sin(thetas)])


def concentric_circles(radii: tuple[float, float] = (1.0, 5.0),
                       n_each: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """Two noiseless circles; returns (points, 0/1 labels)."""
    pts, labels = [], []
    for lab, r in enumerate(radii):
        ang = np.linspace(0.0, 2 * np.pi, n_each, endpoint=False)
        pts.append(np.column_stack([r * np.cos(ang), r * np.sin(ang)]))
        labels.extend([lab] * n_each)
    return np.vstack(pts), np.array(labels)
