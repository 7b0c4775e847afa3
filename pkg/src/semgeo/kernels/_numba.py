"""Numba-compiled twins of the kernels in ``_numpy.py``.

Importing this module requires a working numba; ``kernels/__init__``
falls back to the numpy backend when the import fails.  cache=True keeps
compiled artifacts on disk so repeat runs skip JIT cost.  No fastmath:
accumulation order must stay reproducible.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def pairwise_dists(x: np.ndarray) -> np.ndarray:
    n, d = x.shape
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = x[i, k] - x[j, k]
                acc += diff * diff
            v = np.sqrt(acc)
            out[i, j] = v
            out[j, i] = v
    return out


@njit(cache=True)
def alpha_kernel(d: np.ndarray, eps: np.ndarray, alpha: float) -> np.ndarray:
    n = d.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        out[i, i] = 1.0
        for j in range(i + 1, n):
            v = 0.5 * (
                np.exp(-((d[i, j] / eps[i]) ** alpha))
                + np.exp(-((d[i, j] / eps[j]) ** alpha))
            )
            out[i, j] = v
            out[j, i] = v
    return out


@njit(cache=True)
def smacof_step(x: np.ndarray, d: np.ndarray):
    n, m = x.shape
    dhat = pairwise_dists(x)
    stress = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            delta = d[i, j] - dhat[i, j]
            stress += delta * delta
    new = np.zeros((n, m), dtype=np.float64)
    for i in range(n):
        diag = 0.0
        for j in range(n):
            if j == i:
                continue
            ratio = d[i, j] / dhat[i, j] if dhat[i, j] > 0.0 else 0.0
            diag += ratio
            for c in range(m):
                new[i, c] -= ratio * x[j, c]
        for c in range(m):
            new[i, c] = (new[i, c] + diag * x[i, c]) / n
    return new, stress


@njit(cache=True)
def tsne_forces(p: np.ndarray, y: np.ndarray):
    n, d = y.shape
    num = np.zeros((n, n), dtype=np.float64)
    z = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = y[i, k] - y[j, k]
                acc += diff * diff
            v = 1.0 / (1.0 + acc)
            num[i, j] = v
            num[j, i] = v
            z += 2.0 * v
    grad = np.zeros((n, d), dtype=np.float64)
    kl = 0.0
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            q = num[i, j] / z
            if q < 1e-12:
                q = 1e-12
            w = 4.0 * (p[i, j] - q) * num[i, j]
            for k in range(d):
                grad[i, k] += w * (y[i, k] - y[j, k])
            if p[i, j] > 0.0:
                kl += p[i, j] * np.log(p[i, j] / q)
    return grad, kl


@njit(cache=True)
def entropy_row(d2: np.ndarray, beta: float):
    m = d2.shape[0]
    p = np.empty(m, dtype=np.float64)
    s = 0.0
    for i in range(m):
        w = np.exp(-d2[i] * beta)
        p[i] = w
        s += w
    if s <= 0.0:
        for i in range(m):
            p[i] = 0.0
        return 0.0, p
    acc = 0.0
    for i in range(m):
        p[i] /= s
        acc += d2[i] * p[i]
    return np.log(s) + beta * acc, p
