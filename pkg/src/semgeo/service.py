"""HTTP face of the workbench.

Endpoints:
  GET  /datasets                      bundled dataset catalog
  GET  /datasets/{id}                 items of one dataset
  POST /projections                   compute (or recall) a projection doc
  GET  /projections/{id}              a previously computed doc
  GET  /projections/{id}/diagnostics  scores for a doc, computed on demand

Stateless beyond the file-backed memo store: restarting the process and
re-posting the same request reproduces the same document byte for byte.
POST responses carry an X-Semgeo-Computed header ("1" fresh, "0" memo)
so clients can surface recompute status without timing games.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .cache import EmbeddingCache
from .datasets import builtin_catalog, get_builtin, item_dict
from .errors import ProviderError, SemgeoError, UnimplementedMethod
from .pipeline import (compute_doc, diagnose_doc, expected_doc_id,
                       provider_from_dict)
from .projdoc import MemoStore
from .providers import ProviderConfig

MAX_ITEMS = 3000  # synchronous per-request compute; desk scale only


class ProjectionRequest(BaseModel):
    dataset_id: str
    provider: dict | None = None
    method: str = "phate"
    params: dict = Field(default_factory=dict)
    seed: int = 0
    dims: int = 2


def create_app(cache_dir: str | Path | None = None) -> FastAPI:
    root = Path(cache_dir) if cache_dir else Path(
        tempfile.mkdtemp(prefix="semgeo-service-"))
    app = FastAPI(title="semgeo service")
    app.state.memo = MemoStore(root / "projections")
    app.state.cache = EmbeddingCache(root / "embeddings")
    app.state.compute_count = 0
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"],
                       expose_headers=["X-Semgeo-Computed"])

    @app.exception_handler(RequestValidationError)
    async def invalid_body(request: Request, exc: RequestValidationError):
        details = "; ".join(
            f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}"
            for e in exc.errors())
        return JSONResponse(status_code=400,
                            content={"detail": details or "invalid body"})

    @app.get("/datasets")
    def list_datasets():
        return [{"id": d.id, "items": d.total, "description": d.description}
                for d in builtin_catalog()]

    @app.get("/datasets/{ds_id}")
    def get_dataset(ds_id: str):
        try:
            ds = get_builtin(ds_id)
        except KeyError:
            raise HTTPException(404, f"unknown dataset {ds_id!r}")
        return {"id": ds.id,
                "items": [item_dict(it) for it in ds.items]}

    @app.post("/projections")
    def post_projection(req: ProjectionRequest, response: Response):
        try:
            ds = get_builtin(req.dataset_id)
        except KeyError:
            raise HTTPException(404, f"unknown dataset {req.dataset_id!r}")
        if len(ds.items) > MAX_ITEMS:
            raise HTTPException(
                422, f"dataset has {len(ds.items)} items, above the "
                     f"{MAX_ITEMS}-item synchronous cap")
        try:
            cfg = (provider_from_dict(req.provider) if req.provider
                   else ProviderConfig.mock())
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        try:
            did = expected_doc_id(ds.id, cfg, req.method, req.params,
                                  req.dims, req.seed)
        except UnimplementedMethod as exc:
            raise HTTPException(422, str(exc))
        except ValueError as exc:
            raise HTTPException(400, str(exc))

        memo: MemoStore = app.state.memo
        hit = memo.get(did)
        if hit is not None:
            response.headers["X-Semgeo-Computed"] = "0"
            return _doc_payload(hit)

        try:
            doc = compute_doc(ds, cfg, method=req.method, params=req.params,
                              out_dims=req.dims, seed=req.seed,
                              cache=app.state.cache)
        except ProviderError as exc:
            raise HTTPException(502, str(exc))
        except SemgeoError as exc:
            raise HTTPException(422, str(exc))
        app.state.compute_count += 1
        if doc.id != did:
            raise HTTPException(
                500, f"id precomputation drifted: expected {did}, "
                     f"computed {doc.id}")
        memo.put(doc)
        response.headers["X-Semgeo-Computed"] = "1"
        return _doc_payload(doc)

    @app.get("/projections/{doc_id_}")
    def get_projection(doc_id_: str):
        doc = app.state.memo.get(doc_id_)
        if doc is None:
            raise HTTPException(404, f"unknown projection {doc_id_!r}")
        return _doc_payload(doc)

    @app.get("/projections/{doc_id_}/diagnostics")
    def get_diagnostics(doc_id_: str):
        memo: MemoStore = app.state.memo
        doc = memo.get(doc_id_)
        if doc is None:
            raise HTTPException(404, f"unknown projection {doc_id_!r}")
        if doc.diagnostics is None:
            try:
                doc = diagnose_doc(doc)
            except (SemgeoError, ValueError) as exc:
                raise HTTPException(422, str(exc))
            memo.put(doc)
        return doc.diagnostics

    return app


def _doc_payload(doc) -> dict:
    return json.loads(doc.to_json())
