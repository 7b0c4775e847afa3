"""Embedding matrices and the deterministic offline mock provider.

Provider payloads are float32; geometry wants float64.  The convention
throughout: matrices handed back by providers hold float64 copies of
float32 values (rounding already applied, so cache round-trips change
nothing), and ``l2_normalize`` produces the float64 unit rows the
pipeline actually measures.
"""

from __future__ import annotations

import hashlib
import unicodedata

import numpy as np

from .datasets import LexicalItem
from .errors import NonFiniteInput, ZeroRow


class EmbeddingMatrix:
    """n×d real matrix, row i embedding item i.  Immutable after creation."""

    def __init__(self, values: np.ndarray, model_id: str,
                 normalized: bool = False):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"expected 2-D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInput("embedding matrix contains nan or inf")
        if normalized:
            norms = np.sqrt((values * values).sum(axis=1))
            if not np.all(np.abs(norms - 1.0) <= 1e-9):
                raise ValueError("normalized flag set but rows are not unit")
        values = values.copy()
        values.flags.writeable = False
        self.values = values
        self.model_id = model_id
        self.normalized = normalized

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other) -> bool:
        return (isinstance(other, EmbeddingMatrix)
                and self.model_id == other.model_id
                and self.normalized == other.normalized
                and self.values.shape == other.values.shape
                and bool(np.array_equal(self.values, other.values)))

    def __repr__(self) -> str:
        return (f"EmbeddingMatrix({self.rows}x{self.dim}, "
                f"model={self.model_id!r}, normalized={self.normalized})")


def l2_normalize(m: EmbeddingMatrix) -> EmbeddingMatrix:
    """Scale every row to unit L2 norm.  Idempotent; zero rows are errors."""
    norms = np.sqrt((m.values * m.values).sum(axis=1))
    zero = np.where(norms == 0.0)[0]
    if zero.size:
        raise ZeroRow(int(zero[0]))
    return EmbeddingMatrix(m.values / norms[:, None], m.model_id,
                           normalized=True)


def _digest_words(text: str) -> list[int]:
    d = hashlib.sha256(text.encode("utf-8")).digest()
    return [int.from_bytes(d[i:i + 4], "little") for i in range(0, 32, 4)]


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng([k & 0xFFFFFFFF for k in key])


def mock_vector(text: str, category: str, dim: int, seed: int) -> np.ndarray:
    """One deterministic unit vector, float32-quantized.

    Base direction is keyed by (seed, sha256(text), dim); a shared bias
    keyed by (seed, category) is mixed in at weight 0.5 before
    normalization so same-category items form plantable clusters.
    """
    text = unicodedata.normalize("NFC", text)
    base = _rng(seed, 1, dim, *_digest_words(text)).standard_normal(dim)
    bias = _rng(seed, 2, *_digest_words(category)).standard_normal(dim)
    v = base + 0.5 * bias
    v /= np.sqrt(v @ v)
    return v.astype(np.float32)


def mock_embeddings(items: list[LexicalItem], dim: int,
                    seed: int) -> EmbeddingMatrix:
    """Deterministic offline embeddings with planted category structure."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    out = np.empty((len(items), dim), dtype=np.float64)
    for i, it in enumerate(items):
        out[i] = mock_vector(it.text, it.category, dim, seed).astype(np.float64)
    return EmbeddingMatrix(out, mock_model_id(dim, seed), normalized=False)


def mock_model_id(dim: int, seed: int) -> str:
    return f"mock-d{dim}-s{seed}"
