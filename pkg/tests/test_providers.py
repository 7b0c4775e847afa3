"""Provider clients against stub transports: dialects, cache, retries."""

import hashlib
import json
from pathlib import Path

import httpx
import numpy as np
import pytest

import semgeo.providers as providers
from semgeo.cache import EmbeddingCache
from semgeo.datasets import LexicalItem
from semgeo.embed import mock_embeddings
from semgeo.errors import (
    AuthMissing,
    DimensionMismatch,
    HttpStatus,
    ProviderTimeout,
)
from semgeo.providers import ProviderConfig, fetch_embeddings

FIXTURES = Path(__file__).parent / "fixtures"


def _items(*texts):
    return [LexicalItem(t, "enu", "core.test", "word") for t in texts]


def _vec_for(text, dim=4):
    h = hashlib.sha256(text.encode()).digest()
    return [h[i] / 255.0 for i in range(dim)]


def _openai_transport(calls):
    def handler(request):
        calls.append(request)
        body = json.loads(request.content)
        data = [{"index": i, "embedding": _vec_for(t)}
                for i, t in enumerate(body["input"])]
        data.reverse()  # deliberately unordered: client must sort by index
        return httpx.Response(200, json={"data": data, "model": body["model"]})

    return httpx.MockTransport(handler)


def _ollama_transport(calls):
    def handler(request):
        calls.append(request)
        body = json.loads(request.content)
        rows = [_vec_for(t) for t in body["input"]]
        return httpx.Response(200, json={"embeddings": rows})

    return httpx.MockTransport(handler)


@pytest.fixture(autouse=True)
def _no_sleep(monkeypatch):
    slept = []
    monkeypatch.setattr(providers, "_sleep", slept.append)
    yield slept


def _cfg(kind, **kw):
    kw.setdefault("base_url", "http://provider.test")
    kw.setdefault("model_id", "demo")
    return ProviderConfig(provider_kind=kind, **kw)


def test_openai_dialect_fixture_round_trip():
    fx = json.loads((FIXTURES / "openai_embeddings.json").read_text())

    def handler(request):
        assert request.url.path == fx["request"]["path"]
        assert json.loads(request.content) == fx["request"]["body"]
        return httpx.Response(fx["response"]["status"],
                              json=fx["response"]["body"])

    cfg = _cfg("http_openai_style", model_id="demo-small")
    m = fetch_embeddings(cfg, _items("sun", "moon"),
                         transport=httpx.MockTransport(handler))
    # fixture entries arrive index-shuffled; row order must follow input
    assert m.values[0, 0] == pytest.approx(0.125)
    assert m.values[1, 0] == pytest.approx(0.5)
    assert m.dim == 4


def test_ollama_dialect_fixture_round_trip():
    fx = json.loads((FIXTURES / "ollama_embed.json").read_text())

    def handler(request):
        assert request.url.path == fx["request"]["path"]
        assert json.loads(request.content) == fx["request"]["body"]
        return httpx.Response(fx["response"]["status"],
                              json=fx["response"]["body"])

    cfg = _cfg("http_ollama_style", model_id="demo-mini")
    m = fetch_embeddings(cfg, _items("sun", "moon"),
                         transport=httpx.MockTransport(handler))
    assert m.values[0, 0] == pytest.approx(0.1015625)
    assert m.values[1, 2] == pytest.approx(0.609375)


def test_all_cached_makes_zero_network_calls(tmp_path):
    calls = []
    cache = EmbeddingCache(tmp_path)
    items = _items("a", "b", "c", "d")
    for it in items:
        cache.put("demo", it.text, np.array(_vec_for(it.text), np.float32))
    m = fetch_embeddings(_cfg("http_openai_style"), items, cache=cache,
                         transport=_openai_transport(calls))
    assert calls == []
    assert m.rows == 4 and m.dim == 4


def test_cache_populated_then_reused(tmp_path):
    calls = []
    cache = EmbeddingCache(tmp_path)
    items = _items("a", "b")
    t = _openai_transport(calls)
    first = fetch_embeddings(_cfg("http_openai_style"), items, cache=cache,
                             transport=t)
    assert len(calls) == 1
    second = fetch_embeddings(_cfg("http_openai_style"), items, cache=cache,
                              transport=t)
    assert len(calls) == 1  # no new requests
    assert np.array_equal(first.values, second.values)


def test_batch_size_invariance_http():
    texts = [f"word{i}" for i in range(7)]
    results = []
    for bs in (1, 3, 7):
        calls = []
        m = fetch_embeddings(_cfg("http_openai_style", batch_size=bs),
                             _items(*texts),
                             transport=_openai_transport(calls))
        assert len(calls) == -(-7 // bs)
        results.append(m.values)
    assert np.array_equal(results[0], results[1])
    assert np.array_equal(results[1], results[2])


def test_batch_size_invariance_mock():
    items = _items("a", "b", "c", "d", "e")
    a = fetch_embeddings(ProviderConfig.mock(dim=8, batch_size=1), items)
    b = fetch_embeddings(ProviderConfig.mock(dim=8, batch_size=5), items)
    assert np.array_equal(a.values, b.values)


def test_mock_fetch_matches_mock_embeddings_and_ignores_workers():
    items = _items("a", "b", "c")
    direct = mock_embeddings(items, dim=16, seed=3)
    one = fetch_embeddings(ProviderConfig.mock(dim=16, seed=3, workers=1), items)
    many = fetch_embeddings(ProviderConfig.mock(dim=16, seed=3, workers=8), items)
    assert np.array_equal(one.values, direct.values)
    assert np.array_equal(one.values, many.values)


def test_duplicate_texts_get_identical_rows():
    calls = []
    items = [LexicalItem("fire", "enu", "emoji.nature", "word"),
             LexicalItem("fire", "chn", "emoji.nature", "char")]
    m = fetch_embeddings(_cfg("http_openai_style"), items,
                         transport=_openai_transport(calls))
    assert np.array_equal(m.values[0], m.values[1])
    # deduped: one text -> one request row
    assert json.loads(calls[0].content)["input"] == ["fire"]


def test_retry_on_500_then_success(_no_sleep):
    state = {"n": 0}

    def handler(request):
        state["n"] += 1
        if state["n"] < 3:
            return httpx.Response(500, text="boom")
        body = json.loads(request.content)
        return httpx.Response(200, json={"data": [
            {"index": i, "embedding": _vec_for(t)}
            for i, t in enumerate(body["input"])]})

    m = fetch_embeddings(_cfg("http_openai_style", max_retries=3),
                         _items("a"), transport=httpx.MockTransport(handler))
    assert m.rows == 1
    assert state["n"] == 3
    # exponential backoff: 0.5, then 1.0, with bounded jitter on top
    assert len(_no_sleep) == 2
    assert 0.5 <= _no_sleep[0] <= 0.5 * 1.25
    assert 1.0 <= _no_sleep[1] <= 1.0 * 1.25


def test_retries_exhausted_raises_http_status(_no_sleep):
    def handler(request):
        return httpx.Response(503, text="down")

    with pytest.raises(HttpStatus) as exc:
        fetch_embeddings(_cfg("http_openai_style", max_retries=2),
                         _items("a"), transport=httpx.MockTransport(handler))
    assert exc.value.code == 503
    assert len(_no_sleep) == 2


def test_client_error_fails_immediately(_no_sleep):
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(404, text="no such model")

    with pytest.raises(HttpStatus) as exc:
        fetch_embeddings(_cfg("http_openai_style", max_retries=5),
                         _items("a"), transport=httpx.MockTransport(handler))
    assert exc.value.code == 404
    assert len(calls) == 1
    assert _no_sleep == []


def test_timeout_exhausts_and_reports_attempts():
    def handler(request):
        raise httpx.ConnectTimeout("slow", request=request)

    with pytest.raises(ProviderTimeout) as exc:
        fetch_embeddings(_cfg("http_openai_style", max_retries=2),
                         _items("a"), transport=httpx.MockTransport(handler))
    assert exc.value.attempts == 3


def test_dimension_change_across_batches_rejected():
    def handler(request):
        body = json.loads(request.content)
        dim = 4 if "word0" in body["input"] else 3
        return httpx.Response(200, json={"data": [
            {"index": i, "embedding": _vec_for(t, dim)}
            for i, t in enumerate(body["input"])]})

    cfg = _cfg("http_openai_style", batch_size=1, workers=1)
    with pytest.raises(DimensionMismatch) as exc:
        fetch_embeddings(cfg, _items("word0", "word1"),
                         transport=httpx.MockTransport(handler))
    assert exc.value.expected == 4 and exc.value.got == 3


def test_partial_batch_failure_fails_whole_call(tmp_path):
    def handler(request):
        body = json.loads(request.content)
        if "bad" in body["input"]:
            return httpx.Response(400, text="cannot embed")
        return httpx.Response(200, json={"data": [
            {"index": i, "embedding": _vec_for(t)}
            for i, t in enumerate(body["input"])]})

    cfg = _cfg("http_openai_style", batch_size=1, workers=1)
    with pytest.raises(HttpStatus):
        fetch_embeddings(cfg, _items("good", "bad"),
                         transport=httpx.MockTransport(handler))


def test_auth_env_missing_raises(monkeypatch):
    monkeypatch.delenv("SEMGEO_TEST_TOKEN", raising=False)
    cfg = _cfg("http_openai_style", auth_env="SEMGEO_TEST_TOKEN")
    with pytest.raises(AuthMissing):
        fetch_embeddings(cfg, _items("a"),
                         transport=_openai_transport([]))


def test_auth_header_attached(monkeypatch):
    monkeypatch.setenv("SEMGEO_TEST_TOKEN", "sekrit")
    seen = {}

    def handler(request):
        seen["auth"] = request.headers.get("authorization")
        body = json.loads(request.content)
        return httpx.Response(200, json={"data": [
            {"index": i, "embedding": _vec_for(t)}
            for i, t in enumerate(body["input"])]})

    cfg = _cfg("http_openai_style", auth_env="SEMGEO_TEST_TOKEN")
    fetch_embeddings(cfg, _items("a"), transport=httpx.MockTransport(handler))
    assert seen["auth"] == "Bearer sekrit"


def test_malformed_response_body_rejected():
    def handler(request):
        return httpx.Response(200, json={"unexpected": []})

    with pytest.raises(HttpStatus):
        fetch_embeddings(_cfg("http_openai_style"), _items("a"),
                         transport=httpx.MockTransport(handler))


def test_empty_items_rejected():
    with pytest.raises(ValueError):
        fetch_embeddings(ProviderConfig.mock(), [])


def test_config_validation():
    with pytest.raises(ValueError):
        ProviderConfig(provider_kind="carrier_pigeon")
    with pytest.raises(ValueError):
        ProviderConfig(provider_kind="http_openai_style", model_id="m")
    with pytest.raises(ValueError):
        ProviderConfig.mock(batch_size=0)
    assert ProviderConfig.mock(dim=8, seed=2).model_id == "mock-d8-s2"
