"""Embedding providers: two HTTP dialects plus the offline mock.

Wire formats
------------
openai style:  POST {base_url}/embeddings
    request  {"model": ..., "input": [text, ...]}
    response {"data": [{"index": i, "embedding": [...]}, ...]}
ollama style:  POST {base_url}/api/embed
    request  {"model": ..., "input": [text, ...]}
    response {"embeddings": [[...], ...]}

Recorded request/response fixtures for both dialects live in
tests/fixtures/ and drive the stub tests.  ``transport`` accepts an
httpx transport (tests pass httpx.MockTransport); None uses the network.

Failure policy: one bad row fails the whole call.  Retryable failures
(timeouts, connection errors, 429, 5xx) back off exponentially from
0.5 s with factor 2 and additive jitter, up to max_retries retries;
other HTTP statuses raise immediately.
"""

from __future__ import annotations

import os
import random
import time
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import httpx
import numpy as np

from .cache import EmbeddingCache
from .datasets import LexicalItem
from .embed import EmbeddingMatrix, mock_model_id, mock_vector
from .errors import (
    AuthMissing,
    DimensionMismatch,
    HttpStatus,
    ProviderError,
    ProviderTimeout,
)

PROVIDER_KINDS = ("http_openai_style", "http_ollama_style", "mock")

_sleep = time.sleep  # monkeypatched in tests


@dataclass(frozen=True)
class ProviderConfig:
    provider_kind: str
    model_id: str = ""
    base_url: str | None = None
    auth_env: str | None = None
    batch_size: int = 32
    max_retries: int = 3
    timeout: float = 30.0
    workers: int = 4
    # mock-only knobs
    dim: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.provider_kind not in PROVIDER_KINDS:
            raise ValueError(
                f"provider_kind must be one of {PROVIDER_KINDS}, "
                f"got {self.provider_kind!r}"
            )
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.provider_kind != "mock" and not self.base_url:
            raise ValueError("base_url required for http providers")
        if not self.model_id:
            if self.provider_kind == "mock":
                object.__setattr__(
                    self, "model_id", mock_model_id(self.dim, self.seed)
                )
            else:
                raise ValueError("model_id required for http providers")

    @classmethod
    def mock(cls, dim: int = 64, seed: int = 0, **kw) -> "ProviderConfig":
        return cls(provider_kind="mock", dim=dim, seed=seed, **kw)


def _auth_headers(cfg: ProviderConfig) -> dict[str, str]:
    if not cfg.auth_env:
        return {}
    token = os.environ.get(cfg.auth_env)
    if not token:
        raise AuthMissing(cfg.auth_env)
    return {"Authorization": f"Bearer {token}"}


def _parse_openai(body: dict, expect_n: int) -> list[list[float]]:
    data = body.get("data")
    if not isinstance(data, list) or len(data) != expect_n:
        raise HttpStatus(200, "malformed response: bad or missing 'data'")
    rows: list[list[float] | None] = [None] * expect_n
    for entry in data:
        idx = entry.get("index")
        emb = entry.get("embedding")
        if not isinstance(idx, int) or not isinstance(emb, list):
            raise HttpStatus(200, "malformed response entry")
        rows[idx] = emb
    if any(r is None for r in rows):
        raise HttpStatus(200, "response missing row indices")
    return rows  # type: ignore[return-value]


def _parse_ollama(body: dict, expect_n: int) -> list[list[float]]:
    rows = body.get("embeddings")
    if not isinstance(rows, list) or len(rows) != expect_n:
        raise HttpStatus(200, "malformed response: bad or missing 'embeddings'")
    return rows


def _post_batch(client: httpx.Client, cfg: ProviderConfig,
                texts: Sequence[str]) -> list[np.ndarray]:
    if cfg.provider_kind == "http_openai_style":
        url, parse = "/embeddings", _parse_openai
    else:
        url, parse = "/api/embed", _parse_ollama
    payload = {"model": cfg.model_id, "input": list(texts)}

    attempts = 0
    last_exc: Exception | None = None
    while attempts <= cfg.max_retries:
        if attempts:
            base = 0.5 * (2.0 ** (attempts - 1))
            _sleep(base + random.uniform(0.0, 0.25 * base))
        attempts += 1
        try:
            resp = client.post(url, json=payload)
        except httpx.TimeoutException as exc:
            last_exc = exc
            continue
        except httpx.TransportError as exc:
            last_exc = exc
            continue
        if resp.status_code == 429 or 500 <= resp.status_code < 600:
            last_exc = HttpStatus(resp.status_code, resp.text[:200])
            continue
        if resp.status_code != 200:
            raise HttpStatus(resp.status_code, resp.text[:200])
        try:
            body = resp.json()
        except ValueError:
            raise HttpStatus(200, "response body is not JSON") from None
        rows = parse(body, len(texts))
        return [np.asarray(r, dtype=np.float32) for r in rows]

    if isinstance(last_exc, HttpStatus):
        raise last_exc
    raise ProviderTimeout(attempts) from last_exc


def fetch_embeddings(cfg: ProviderConfig, items: Sequence[LexicalItem],
                     cache: EmbeddingCache | None = None,
                     transport: httpx.BaseTransport | None = None
                     ) -> EmbeddingMatrix:
    """One embedding row per item, in item order.

    The cache is consulted before any network call and populated after.
    The mock provider computes locally and skips the cache: its vectors
    depend on item category, which a text-keyed cache cannot represent.
    """
    if not items:
        raise ValueError("items must be non-empty")

    texts = [unicodedata.normalize("NFC", it.text) for it in items]

    if cfg.provider_kind == "mock":
        rows = _mock_rows(cfg, items)
    else:
        rows = _http_rows(cfg, texts, cache, transport)

    expected_dim = rows[0].shape[0]
    for r in rows[1:]:
        if r.shape[0] != expected_dim:
            raise DimensionMismatch(expected_dim, r.shape[0])

    values = np.stack(rows).astype(np.float64)
    return EmbeddingMatrix(values, cfg.model_id, normalized=False)


def _mock_rows(cfg: ProviderConfig,
               items: Sequence[LexicalItem]) -> list[np.ndarray]:
    # batches still flow through the worker pool so thread-count
    # independence is exercised, not just assumed
    batches = [list(range(i, min(i + cfg.batch_size, len(items))))
               for i in range(0, len(items), cfg.batch_size)]

    def compute(idxs: list[int]) -> list[tuple[int, np.ndarray]]:
        return [(i, mock_vector(items[i].text, items[i].category,
                                cfg.dim, cfg.seed)) for i in idxs]

    rows: list[np.ndarray | None] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        for got in pool.map(compute, batches):
            for i, vec in got:
                rows[i] = vec
    return rows  # type: ignore[return-value]


def _http_rows(cfg: ProviderConfig, texts: list[str],
               cache: EmbeddingCache | None,
               transport: httpx.BaseTransport | None) -> list[np.ndarray]:
    rows: list[np.ndarray | None] = [None] * len(texts)

    # dedupe: identical text always gets identical bytes
    first_at: dict[str, int] = {}
    for i, t in enumerate(texts):
        first_at.setdefault(t, i)

    if cache is not None:
        for t, i in first_at.items():
            hit = cache.get(cfg.model_id, t)
            if hit is not None:
                rows[i] = hit

    missing = [t for t, i in first_at.items() if rows[i] is None]

    if missing:
        headers = _auth_headers(cfg)
        batches = [missing[i:i + cfg.batch_size]
                   for i in range(0, len(missing), cfg.batch_size)]
        with httpx.Client(base_url=cfg.base_url, headers=headers,
                          timeout=cfg.timeout, transport=transport) as client:
            if cfg.workers > 1 and len(batches) > 1:
                with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                    results = list(pool.map(
                        lambda b: _post_batch(client, cfg, b), batches))
            else:
                results = [_post_batch(client, cfg, b) for b in batches]
        for batch, vecs in zip(batches, results):
            if len(vecs) != len(batch):
                raise ProviderError("provider returned wrong row count")
            for t, v in zip(batch, vecs):
                rows[first_at[t]] = v
                if cache is not None:
                    cache.put(cfg.model_id, t, v)

    for i, t in enumerate(texts):
        if rows[i] is None:
            rows[i] = rows[first_at[t]]
    return rows  # type: ignore[return-value]
