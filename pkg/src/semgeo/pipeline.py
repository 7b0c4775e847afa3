"""Shared plumbing between the command line and the HTTP service.

Both front ends funnel through compute_doc, so identical inputs produce
byte-identical projection documents no matter which entry point ran.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from .cache import EmbeddingCache
from .datasets import LexicalItem, LexiconDataset, get_builtin, load_dataset
from .diagnostics import diagnose
from .dr import project, recorded_params
from .embed import EmbeddingMatrix
from .projdoc import ProjectionDoc, build_doc, doc_id
from .projection import Projection, item_id_for
from .providers import ProviderConfig, fetch_embeddings

_PROVIDER_KEYS = {f.name for f in dataclasses.fields(ProviderConfig)}


def provider_from_dict(raw: dict) -> ProviderConfig:
    if not isinstance(raw, dict):
        raise ValueError("provider config must be a JSON object")
    unknown = sorted(set(raw) - _PROVIDER_KEYS)
    if unknown:
        raise ValueError(
            f"unknown provider config keys {unknown}; "
            f"accepted: {sorted(_PROVIDER_KEYS)}"
        )
    return ProviderConfig(**raw)


def load_provider_config(path: str | Path) -> ProviderConfig:
    """Provider settings from a JSON file; see ProviderConfig fields."""
    text = Path(path).read_text(encoding="utf-8")
    return provider_from_dict(json.loads(text))


def resolve_dataset(ref: str | Path) -> LexiconDataset:
    """A dataset by file path, or by bundled id if no such file exists."""
    p = Path(ref)
    if p.is_file():
        return load_dataset(p)
    try:
        return get_builtin(str(ref))
    except KeyError as exc:
        raise FileNotFoundError(f"{exc.args[0]} (and no file at {ref!r})")


def compute_doc(ds: LexiconDataset, cfg: ProviderConfig,
                method: str = "phate", params: dict | None = None,
                out_dims: int = 2, seed: int = 0,
                cache: EmbeddingCache | None = None,
                transport=None) -> ProjectionDoc:
    """Embed the dataset, project it, and wrap the result in a doc."""
    m = fetch_embeddings(cfg, ds.items, cache=cache, transport=transport)
    ids = tuple(item_id_for(it) for it in ds.items)
    proj = project(m, method, out_dims=out_dims, seed=seed,
                   params=params, item_ids=ids)
    return build_doc(ds, proj)


def expected_doc_id(ds_id: str, cfg: ProviderConfig,
                    method: str = "phate", params: dict | None = None,
                    out_dims: int = 2, seed: int = 0) -> str:
    """The id compute_doc would assign, without computing anything."""
    name = str(method).strip().lower()
    resolved = recorded_params(name, out_dims, seed, params)
    return doc_id(ds_id, cfg.model_id, name, resolved, seed)


def dataset_from_doc(doc: ProjectionDoc) -> LexiconDataset:
    items = tuple(
        LexicalItem(text=d["text"], lang=d["lang"], category=d["category"],
                    level=d["level"], order=d.get("order"),
                    pair_id=d.get("pair_id"))
        for d in doc.items
    )
    return LexiconDataset(id=doc.dataset_id, items=items)


def projection_from_doc(doc: ProjectionDoc) -> Projection:
    ds = dataset_from_doc(doc)
    ids = tuple(item_id_for(it) for it in ds.items)
    return Projection(
        coords=doc.coords_array(),
        method=doc.method,
        params=dict(doc.params),
        model_id=doc.model_id,
        item_ids=ids,
        seed=doc.seed,
        stress=doc.stress,
        metadata=dict(doc.metadata),
    )


def diagnose_doc(doc: ProjectionDoc) -> ProjectionDoc:
    """The same doc with a freshly computed diagnostics block.

    Deterministic, so running it twice reproduces the block verbatim.
    """
    ds = dataset_from_doc(doc)
    proj = projection_from_doc(doc)
    report = diagnose(proj, ds)
    payload = json.loads(report.to_json())
    return dataclasses.replace(doc, diagnostics=payload)
