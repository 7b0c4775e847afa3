"""Pure-numpy reference implementations of the hot numeric kernels.

Every function here has a numba twin in ``_numba.py`` with identical
semantics; the active backend is chosen in ``kernels/__init__``.
Squared distances are accumulated coordinate-by-coordinate in ascending
order (never via the norms-minus-dot-product trick) so results agree
bitwise with a naive double-loop oracle.
"""

import numpy as np


def pairwise_dists(x: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix between rows of x, exact zero diagonal."""
    n, d = x.shape
    acc = np.zeros((n, n), dtype=np.float64)
    for k in range(d):
        col = x[:, k]
        diff = col[:, None] - col[None, :]
        acc += diff * diff
    out = np.sqrt(acc)
    np.fill_diagonal(out, 0.0)
    return out


def alpha_kernel(d: np.ndarray, eps: np.ndarray, alpha: float) -> np.ndarray:
    """Adaptive-bandwidth decay kernel.

    K[i,j] = 0.5*exp(-(d[i,j]/eps[i])**alpha) + 0.5*exp(-(d[i,j]/eps[j])**alpha)
    """
    a = np.exp(-((d / eps[:, None]) ** alpha))
    k = 0.5 * (a + a.T)
    np.fill_diagonal(k, 1.0)
    return k


def smacof_step(x: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, float]:
    """One Guttman-transform update for raw-stress metric MDS.

    Returns (updated coordinates, raw stress of the *input* configuration).
    """
    n = x.shape[0]
    dhat = pairwise_dists(x)
    delta = d - dhat
    stress = 0.5 * float(np.sum(delta * delta))  # each pair counted once
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dhat > 0.0, d / dhat, 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return (b @ x) / n, stress


def tsne_forces(p: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Gradient of the KL divergence for exact t-SNE plus the KL value.

    p is the symmetrized joint target distribution, y the current layout.
    """
    n, d = y.shape
    diff_sq = np.zeros((n, n), dtype=np.float64)
    for k in range(d):
        col = y[:, k]
        diff = col[:, None] - col[None, :]
        diff_sq += diff * diff
    num = 1.0 / (1.0 + diff_sq)
    np.fill_diagonal(num, 0.0)
    z = num.sum()
    q = np.maximum(num / z, 1e-12)
    pq = (p - q) * num
    grad = 4.0 * ((np.diag(pq.sum(axis=1)) - pq) @ y)
    mask = p > 0.0
    kl = float(np.sum(p[mask] * np.log(p[mask] / q[mask])))
    return grad, kl


def entropy_row(d2: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    """Shannon entropy (nats) and conditional probabilities for one point.

    d2 holds squared distances to every other point; beta = 1/(2*sigma^2).
    """
    w = np.exp(-d2 * beta)
    s = w.sum()
    if s <= 0.0:
        return 0.0, np.zeros_like(d2)
    p = w / s
    h = float(np.log(s) + beta * np.dot(d2, p))
    return h, p
