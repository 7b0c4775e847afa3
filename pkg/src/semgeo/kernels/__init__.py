"""Backend dispatch for the hot numeric kernels.

Two interchangeable implementations live side by side:

* ``semgeo.kernels._numba`` -- @njit-compiled loops (default when numba
  imports cleanly)
* ``semgeo.kernels._numpy`` -- pure-numpy fallback

The environment variable ``SEMGEO_BACKEND`` forces the choice: set it to
``numba`` or ``numpy`` before the first import.  ``set_backend`` flips it
at runtime (used by tests and the benchmark script).
"""

import os

from . import _numpy

try:
    from . import _numba

    HAS_NUMBA = True
except ImportError:
    _numba = None
    HAS_NUMBA = False

_ENV_FLAG = "SEMGEO_BACKEND"
_BACKENDS = {"numpy": _numpy}
if HAS_NUMBA:
    _BACKENDS["numba"] = _numba


def _initial() -> str:
    raw = os.environ.get(_ENV_FLAG, "").strip().lower()
    if raw == "":
        return "numba" if HAS_NUMBA else "numpy"
    if raw == "numba" and not HAS_NUMBA:
        raise ImportError(
            f"{_ENV_FLAG}=numba but numba failed to import; "
            f"unset it or install numba"
        )
    if raw not in ("numba", "numpy"):
        raise ValueError(f"{_ENV_FLAG} must be 'numba' or 'numpy', got {raw!r}")
    return raw


_active_name = _initial()


def active_backend() -> str:
    """Name of the backend currently answering kernel calls."""
    return _active_name


def set_backend(name: str) -> None:
    """Switch backends at runtime; name is 'numba' or 'numpy'."""
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown backend {name!r}; available: {sorted(_BACKENDS)}"
        )
    _active_name = name


def pairwise_dists(x):
    return _BACKENDS[_active_name].pairwise_dists(x)


def alpha_kernel(d, eps, alpha):
    return _BACKENDS[_active_name].alpha_kernel(d, eps, alpha)


def smacof_step(x, d):
    return _BACKENDS[_active_name].smacof_step(x, d)


def tsne_forces(p, y):
    return _BACKENDS[_active_name].tsne_forces(p, y)


def entropy_row(d2, beta):
    return _BACKENDS[_active_name].entropy_row(d2, beta)


def warmup() -> None:
    """Trigger JIT compilation on toy inputs so timed code never pays it."""
    if _active_name != "numba":
        return
    import numpy as np

    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    d = _numba.pairwise_dists(x)
    eps = np.ones(3)
    k = _numba.alpha_kernel(d, eps, 2.0)
    _numba.smacof_step(x, d)
    p = k / k.sum()
    np.fill_diagonal(p, 0.0)
    _numba.tsne_forces(p, x)
    _numba.entropy_row(np.array([1.0, 4.0]), 0.5)
