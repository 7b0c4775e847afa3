"""Content-addressed on-disk embedding cache.

One file per (model_id, text):

    cache_dir/<model_id>/<hex sha256 of NFC(text)>.vec

where the file is an 8-byte little-endian unsigned dim header followed
by dim little-endian float32 values.  Writes go to a temp file in the
same directory and are moved into place with an atomic rename, so
concurrent writers can only ever race to install identical bytes.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile
import unicodedata
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<Q")


def _safe_model_dir(model_id: str) -> str:
    # model ids like "org/model" must not escape the cache directory
    return model_id.replace("/", "__").replace("\\", "__")


def text_key(text: str) -> str:
    nfc = unicodedata.normalize("NFC", text)
    return hashlib.sha256(nfc.encode("utf-8")).hexdigest()


class EmbeddingCache:
    def __init__(self, cache_dir: str | Path):
        self.root = Path(cache_dir)

    def path_for(self, model_id: str, text: str) -> Path:
        return self.root / _safe_model_dir(model_id) / (text_key(text) + ".vec")

    def get(self, model_id: str, text: str) -> np.ndarray | None:
        """Cached float32 vector, or None.  Corrupt files read as misses."""
        p = self.path_for(model_id, text)
        try:
            blob = p.read_bytes()
        except FileNotFoundError:
            return None
        if len(blob) < _HEADER.size:
            return None
        (dim,) = _HEADER.unpack_from(blob)
        if len(blob) != _HEADER.size + 4 * dim:
            return None
        return np.frombuffer(blob, dtype="<f4", offset=_HEADER.size).copy()

    def put(self, model_id: str, text: str, vec: np.ndarray) -> None:
        vec = np.ascontiguousarray(vec, dtype="<f4")
        if vec.ndim != 1:
            raise ValueError("cache stores 1-D vectors")
        p = self.path_for(model_id, text)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(_HEADER.pack(vec.shape[0]))
                fh.write(vec.tobytes())
            os.replace(tmp, p)
        except BaseException:
            try:
                os.unlink(tmp)
            except FileNotFoundError:
                pass
            raise

    def __contains__(self, key: tuple[str, str]) -> bool:
        model_id, text = key
        return self.path_for(model_id, text).exists()
