"""ProjectionDoc: the serialized, content-addressed projection record.

The doc id is the hex sha256 of the canonical JSON of
(dataset_id, model_id, method, sorted params, seed), so identical
requests always map to the same id and the memo store never recomputes.
Floats go through Python's repr (shortest round-trip form), which
json.loads restores bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .datasets import LexiconDataset, item_dict
from .projection import Projection


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def doc_id(dataset_id: str, model_id: str, method: str, params: dict,
           seed: int) -> str:
    payload = canonical_json({
        "dataset_id": dataset_id,
        "model_id": model_id,
        "method": method,
        "params": dict(sorted(params.items())),
        "seed": seed,
    })
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ProjectionDoc:
    id: str
    dataset_id: str
    model_id: str
    method: str
    params: dict
    seed: int
    items: tuple
    coords: tuple
    diagnostics: dict | None = None
    stress: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.items) != len(self.coords):
            raise ValueError(
                f"{len(self.coords)} coordinate rows for "
                f"{len(self.items)} items"
            )
        object.__setattr__(self, "items",
                           tuple(dict(it) for it in self.items))
        object.__setattr__(self, "coords",
                           tuple(tuple(float(v) for v in row)
                                 for row in self.coords))

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def out_dims(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    def coords_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.float64)

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ProjectionDoc":
        raw = json.loads(text)
        raw["items"] = tuple(raw["items"])
        raw["coords"] = tuple(tuple(row) for row in raw["coords"])
        return cls(**raw)


def build_doc(ds: LexiconDataset, proj: Projection,
              diagnostics: dict | None = None) -> ProjectionDoc:
    """Assemble the doc for a projection computed over a full dataset."""
    if proj.n != len(ds.items):
        raise ValueError(
            f"projection has {proj.n} rows but dataset has "
            f"{len(ds.items)} items"
        )
    # json round-trips metadata; numpy scalars and lists need taming
    meta = json.loads(json.dumps(_plain(proj.metadata)))
    return ProjectionDoc(
        id=doc_id(ds.id, proj.model_id, proj.method, proj.params, proj.seed),
        dataset_id=ds.id,
        model_id=proj.model_id,
        method=proj.method,
        params=dict(proj.params),
        seed=proj.seed,
        items=tuple(item_dict(it) for it in ds.items),
        coords=tuple(tuple(float(v) for v in row) for row in proj.coords),
        diagnostics=diagnostics,
        stress=None if proj.stress is None else float(proj.stress),
        metadata=meta,
    )


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def save_doc(doc: ProjectionDoc, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc.to_json() + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_doc(path: str | Path) -> ProjectionDoc:
    with open(path, encoding="utf-8") as fh:
        return ProjectionDoc.from_json(fh.read())


class MemoStore:
    """File-backed memo of docs, one <id>.json per doc.

    Reads are lock-free; writes land atomically via rename, so a racing
    duplicate computation simply overwrites the file with identical
    bytes.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, doc_id_: str) -> Path:
        return self.root / f"{doc_id_}.json"

    def get(self, doc_id_: str) -> ProjectionDoc | None:
        p = self.path_for(doc_id_)
        if not p.exists():
            return None
        try:
            return load_doc(p)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            return None  # corrupt entry behaves like a miss

    def put(self, doc: ProjectionDoc) -> None:
        save_doc(doc, self.path_for(doc.id))

    def __contains__(self, doc_id_: str) -> bool:
        return self.path_for(doc_id_).exists()

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))
