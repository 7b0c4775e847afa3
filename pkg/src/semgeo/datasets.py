"""Multilingual lexical datasets: schema, validation, JSONL I/O, filtering.

A dataset is an ordered list of lexical items, each carrying a language
code, a dot-separated category tag, a linguistic level, an optional
ordinal rank for sequence data, and an optional pair id that ties an
emoji to its text gloss.  Bundled datasets live in ``semgeo/data`` and
are listed by :func:`builtin_catalog`.

File format: UTF-8 JSON Lines, one object per item with keys
``text, lang, category, level, order, pair_id`` (the last two may be
null).  An optional first line ``{"manifest": {category: count, ...}}``
pins expected per-category counts; a mismatch is an error, not a
warning.
"""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import (
    DanglingPair,
    DuplicateItem,
    EmptyDataset,
    MalformedLine,
    ManifestMismatch,
)

LANGS = ("enu", "chn", "deu", "jpn", "kor", "ara", "mixed")
LEVELS = ("subchar", "char", "word", "number", "emoji", "sentence")

_ITEM_KEYS = ("text", "lang", "category", "level", "order", "pair_id")


@dataclass(frozen=True)
class LexicalItem:
    """One text unit: a radical, character, word, number, emoji, or sentence."""

    text: str
    lang: str
    category: str
    level: str
    order: int | None = None
    pair_id: str | None = None

    def key(self) -> tuple[str, str, str]:
        return (self.text, self.lang, self.level)


@dataclass(frozen=True)
class LexiconDataset:
    id: str
    items: tuple[LexicalItem, ...]
    manifest: dict[str, int] | None = field(default=None)

    def __len__(self) -> int:
        return len(self.items)

    def category_counts(self) -> dict[str, int]:
        return dict(Counter(it.category for it in self.items))


def _check_item(raw: dict, line_no: int) -> LexicalItem:
    for k in ("text", "lang", "category", "level"):
        if k not in raw:
            raise MalformedLine(line_no, f"missing key {k!r}")
    text = raw["text"]
    if not isinstance(text, str):
        raise MalformedLine(line_no, "text must be a string")
    text = unicodedata.normalize("NFC", text)
    if text == "":
        raise MalformedLine(line_no, "text empty after NFC normalization")
    lang = raw["lang"]
    if lang not in LANGS:
        raise MalformedLine(line_no, f"unknown lang {lang!r}")
    level = raw["level"]
    if level not in LEVELS:
        raise MalformedLine(line_no, f"unknown level {level!r}")
    category = raw["category"]
    if not isinstance(category, str) or category == "":
        raise MalformedLine(line_no, "category must be a non-empty string")
    order = raw.get("order")
    if order is not None and not isinstance(order, int):
        raise MalformedLine(line_no, "order must be an integer or null")
    pair_id = raw.get("pair_id")
    if pair_id is not None and not isinstance(pair_id, str):
        raise MalformedLine(line_no, "pair_id must be a string or null")
    extra = set(raw) - set(_ITEM_KEYS)
    if extra:
        raise MalformedLine(line_no, f"unknown keys {sorted(extra)}")
    return LexicalItem(text, lang, category, level, order, pair_id)


def _validate(ds_id: str, items: list[LexicalItem],
              manifest: dict[str, int] | None,
              expected_manifest: dict[str, int] | None) -> LexiconDataset:
    if not items:
        raise EmptyDataset(ds_id)

    seen: set[tuple[str, str, str]] = set()
    for it in items:
        k = it.key()
        if k in seen:
            raise DuplicateItem(it.text, it.lang, it.level)
        seen.add(k)

    # order unique within (dataset, category)
    by_cat_order: set[tuple[str, int]] = set()
    for it in items:
        if it.order is None:
            continue
        k2 = (it.category, it.order)
        if k2 in by_cat_order:
            raise MalformedLine(
                0, f"duplicate order {it.order} in category {it.category!r}"
            )
        by_cat_order.add(k2)

    # pair_id on exactly 2 items of differing level or lang
    pairs: dict[str, list[LexicalItem]] = {}
    for it in items:
        if it.pair_id is not None:
            pairs.setdefault(it.pair_id, []).append(it)
    for pid, members in pairs.items():
        if len(members) != 2:
            raise DanglingPair(pid, f"expected 2 items, found {len(members)}")
        a, b = members
        if a.level == b.level and a.lang == b.lang:
            raise DanglingPair(pid, "paired items must differ in level or lang")

    check = manifest if manifest is not None else expected_manifest
    if expected_manifest is not None and manifest is not None:
        if manifest != expected_manifest:
            for cat in sorted(set(manifest) | set(expected_manifest)):
                if manifest.get(cat, 0) != expected_manifest.get(cat, 0):
                    raise ManifestMismatch(
                        cat, expected_manifest.get(cat, 0), manifest.get(cat, 0)
                    )
    if check is not None:
        actual = Counter(it.category for it in items)
        for cat in sorted(set(check) | set(actual)):
            if check.get(cat, 0) != actual.get(cat, 0):
                raise ManifestMismatch(cat, check.get(cat, 0), actual[cat])

    return LexiconDataset(ds_id, tuple(items), dict(check) if check else None)


def load_dataset(path: str | Path,
                 expected_manifest: dict[str, int] | None = None,
                 ds_id: str | None = None) -> LexiconDataset:
    """Load and validate a JSONL dataset file.

    Every schema invariant is checked on load; a manifest line (or the
    expected_manifest argument) turns count drift into a hard error.
    """
    path = Path(path)
    items: list[LexicalItem] = []
    manifest: dict[str, int] | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLine(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(raw, dict):
                raise MalformedLine(line_no, "expected a JSON object")
            if line_no == 1 and set(raw) == {"manifest"}:
                m = raw["manifest"]
                if not isinstance(m, dict) or not all(
                    isinstance(v, int) for v in m.values()
                ):
                    raise MalformedLine(line_no, "manifest must map category to int")
                manifest = m
                continue
            items.append(_check_item(raw, line_no))
    return _validate(ds_id or path.stem, items, manifest, expected_manifest)


def item_dict(it: LexicalItem) -> dict:
    """Canonical plain-dict form of one item, fixed key order."""
    return {
        "text": it.text,
        "lang": it.lang,
        "category": it.category,
        "level": it.level,
        "order": it.order,
        "pair_id": it.pair_id,
    }


def write_dataset(ds: LexiconDataset, path: str | Path) -> None:
    """Write the canonical JSONL serialization (manifest first if present)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if ds.manifest is not None:
            fh.write(json.dumps({"manifest": ds.manifest}, ensure_ascii=False,
                                sort_keys=True) + "\n")
        for it in ds.items:
            fh.write(json.dumps(item_dict(it), ensure_ascii=False) + "\n")


def filter_items(ds: LexiconDataset,
                 lang: str | None = None,
                 level: str | None = None,
                 category_prefix: str | None = None) -> LexiconDataset:
    """Subset a dataset, preserving item order; the manifest is dropped."""
    kept = []
    for it in ds.items:
        if lang is not None and it.lang != lang:
            continue
        if level is not None and it.level != level:
            continue
        if category_prefix is not None and not it.category.startswith(
            category_prefix
        ):
            continue
        kept.append(it)
    return LexiconDataset(ds.id, tuple(kept), None)


@dataclass(frozen=True)
class DatasetDescriptor:
    id: str
    filename: str
    total: int
    description: str

    def load(self) -> LexiconDataset:
        with resources.as_file(
            resources.files("semgeo").joinpath("data", self.filename)
        ) as p:
            return load_dataset(p, ds_id=self.id)


_CATALOG = (
    DatasetDescriptor("enu", "enu.jsonl", 482,
                      "English lexicon: core domains, work/light families, "
                      "number words, emoji-gloss pairs"),
    DatasetDescriptor("chn", "chn.jsonl", 508,
                      "Chinese lexicon: core domains, zi/xin/dian/xue "
                      "families, numerals, emoji-pictograph pairs"),
    DatasetDescriptor("deu", "deu.jsonl", 420,
                      "German lexicon: core domains, Haus/Arbeit compound "
                      "families, number words"),
    DatasetDescriptor("enu_core", "enu_core.jsonl", 278,
                      "English core domains only"),
    DatasetDescriptor("trilingual", "trilingual.jsonl", 1410,
                      "Union of enu, chn, deu"),
    DatasetDescriptor("trilingual_sample", "trilingual_sample.jsonl", 60,
                      "Small trilingual sample for fast end-to-end runs"),
    DatasetDescriptor("scripts6", "scripts6.jsonl", 188,
                      "Characters from six writing systems plus digits"),
    DatasetDescriptor("powers10", "powers10.jsonl", 9,
                      "Powers of ten 1..100000000 as an ordered sequence"),
)


def builtin_catalog() -> tuple[DatasetDescriptor, ...]:
    """Descriptors for every dataset bundled with the package."""
    return _CATALOG


def get_builtin(ds_id: str) -> LexiconDataset:
    for d in _CATALOG:
        if d.id == ds_id:
            return d.load()
    known = ", ".join(d.id for d in _CATALOG)
    raise KeyError(f"no bundled dataset {ds_id!r}; available: {known}")
