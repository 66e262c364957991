"""JSON-over-HTTP service: document store, asynchronous analyses with
caching, and comparison retrieval for the review frontend."""

from __future__ import annotations

import json
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import pipeline
from .docmodel import document_to_dict, load_document, validate_document
from .errors import DuplicateDocId, SchemaError
from .index import IndexStore
from .pipeline import ALL_METHODS, AnalysisResult, detailed_analysis, retrieval_union

JOB_STATES = ("queued", "running", "done", "failed")


@dataclass
class AnalysisJob:
    job_id: str
    query_doc_id: str
    methods: list[str]
    scope_type: str  # full_collection | explicit
    scope_doc_ids: Optional[list[str]]
    status: str = "queued"
    error: Optional[str] = None
    result: Optional[AnalysisResult] = None
    result_json: Optional[str] = None
    expires_at: Optional[float] = None
    cache_key: tuple = ()


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def create_app(index: IndexStore, workers: int = 2, api_token: str | None = None) -> FastAPI:
    app = FastAPI(title="nontext-pd", version="0.1.0")
    state = app.state
    state.index = index
    state.lock = threading.RLock()
    state.jobs: dict[str, AnalysisJob] = {}
    state.cache: dict[tuple, str] = {}
    state.doc_expiry: dict[str, float] = {}
    state.executor = ThreadPoolExecutor(max_workers=workers)
    state.api_token = api_token

    def _purge() -> None:
        now = time.time()
        with state.lock:
            for doc_id, expiry in list(state.doc_expiry.items()):
                if expiry <= now and doc_id in state.index.docs:
                    state.index.remove(doc_id)
                    del state.doc_expiry[doc_id]
            for job_id, job in list(state.jobs.items()):
                if job.expires_at is not None and job.expires_at <= now:
                    state.cache.pop(job.cache_key, None)
                    del state.jobs[job_id]

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if state.api_token:
            header = request.headers.get("authorization", "")
            if header != f"Bearer {state.api_token}":
                return JSONResponse({"error": "unauthorized"}, status_code=401)
        return await call_next(request)

    @app.get("/documents")
    def list_documents():
        _purge()
        with state.lock:
            docs = sorted(state.index.docs.values(), key=lambda d: d.doc_id)
            return [
                {
                    "doc_id": d.doc_id,
                    "title": d.title,
                    "authors": list(d.authors),
                    "year": d.year,
                }
                for d in docs
            ]

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        _purge()
        with state.lock:
            doc = state.index.docs.get(doc_id)
            if doc is None:
                return JSONResponse({"error": f"unknown document '{doc_id}'"}, status_code=404)
            return Response(
                content=_canonical(document_to_dict(doc)), media_type="application/json"
            )

    @app.post("/documents", status_code=201)
    async def post_document(request: Request, retention_seconds: Optional[int] = None):
        _purge()
        body = await request.body()
        try:
            doc = load_document(body)
        except DuplicateDocId:
            raise
        except SchemaError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        with state.lock:
            try:
                state.index.add(doc)
            except DuplicateDocId as exc:
                return JSONResponse({"error": str(exc)}, status_code=409)
            if retention_seconds is not None:
                state.doc_expiry[doc.doc_id] = time.time() + retention_seconds
        return {"doc_id": doc.doc_id}

    @app.delete("/documents/{doc_id}")
    def delete_document(doc_id: str):
        with state.lock:
            if doc_id not in state.index.docs:
                return JSONResponse({"error": f"unknown document '{doc_id}'"}, status_code=404)
            state.index.remove(doc_id)
            state.doc_expiry.pop(doc_id, None)
        return {"deleted": doc_id}

    def _run_job(job: AnalysisJob) -> None:
        job.status = "running"
        try:
            with state.lock:
                query = state.index.docs.get(job.query_doc_id)
            if query is None:
                raise SchemaError(f"query document '{job.query_doc_id}' disappeared")
            if job.scope_type == "explicit":
                candidate_ids = list(job.scope_doc_ids or [])
            else:
                candidate_ids = retrieval_union(state.index, query)
            result = detailed_analysis(state.index, query, candidate_ids, job.methods)
            job.result = result
            job.result_json = _canonical(result.to_dict())
            job.status = "done"
        except Exception as exc:  # failed jobs carry the reason
            job.status = "failed"
            job.error = f"{type(exc).__name__}: {exc}"

    @app.post("/analyses", status_code=202)
    async def post_analysis(request: Request):
        _purge()
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return JSONResponse({"error": f"invalid JSON: {exc}"}, status_code=422)
        doc_id = body.get("doc_id")
        methods = body.get("methods") or []
        scope = body.get("scope") or {"type": "full_collection"}
        retention = body.get("retention_seconds")
        if not isinstance(methods, list) or not methods:
            return JSONResponse(
                {"error": "methods must be a nonempty list", "available_methods": list(ALL_METHODS)},
                status_code=422,
            )
        unknown = [m for m in methods if m not in ALL_METHODS]
        if unknown:
            return JSONResponse(
                {
                    "error": f"unknown methods: {', '.join(unknown)}",
                    "available_methods": list(ALL_METHODS),
                },
                status_code=422,
            )
        scope_type = scope.get("type", "full_collection")
        if scope_type not in ("full_collection", "explicit"):
            return JSONResponse({"error": f"unknown scope type '{scope_type}'"}, status_code=422)
        scope_ids = scope.get("doc_ids")
        if scope_type == "explicit" and not scope_ids:
            return JSONResponse(
                {"error": "explicit scope requires doc_ids"}, status_code=422
            )
        with state.lock:
            if doc_id not in state.index.docs:
                return JSONResponse({"error": f"unknown document '{doc_id}'"}, status_code=404)
            cache_key = (
                doc_id,
                tuple(sorted(methods)),
                scope_type,
                tuple(sorted(scope_ids)) if scope_ids else (),
            )
            cached_id = state.cache.get(cache_key)
            if cached_id is not None and cached_id in state.jobs:
                job = state.jobs[cached_id]
                if job.status != "failed":
                    return {"job_id": cached_id, "status": job.status, "cache_hit": True}
            job = AnalysisJob(
                job_id=uuid.uuid4().hex,
                query_doc_id=doc_id,
                methods=list(methods),
                scope_type=scope_type,
                scope_doc_ids=list(scope_ids) if scope_ids else None,
                cache_key=cache_key,
            )
            if retention is not None:
                job.expires_at = time.time() + retention
            state.jobs[job.job_id] = job
            state.cache[cache_key] = job.job_id
        state.executor.submit(_run_job, job)
        return {"job_id": job.job_id, "status": job.status, "cache_hit": False}

    @app.get("/analyses/{job_id}")
    def get_analysis(job_id: str):
        _purge()
        job = state.jobs.get(job_id)
        if job is None:
            return JSONResponse({"error": f"unknown analysis '{job_id}'"}, status_code=404)
        payload: dict[str, Any] = {
            "job_id": job.job_id,
            "status": job.status,
            "query_doc_id": job.query_doc_id,
            "methods": job.methods,
            "scope": {"type": job.scope_type, "doc_ids": job.scope_doc_ids},
        }
        if job.status == "failed":
            payload["error"] = job.error
        if job.status == "done" and job.result is not None:
            payload["result"] = json.loads(job.result_json)
        return payload

    @app.get("/analyses/{job_id}/comparisons/{doc_id}")
    def get_comparison(job_id: str, doc_id: str):
        job = state.jobs.get(job_id)
        if job is None or job.result is None:
            return JSONResponse({"error": "analysis not available"}, status_code=404)
        for cand in job.result.candidates:
            if cand.doc_id == doc_id:
                return Response(
                    content=_canonical(
                        {
                            "query_doc_id": job.result.query_doc_id,
                            "comparison": cand.to_dict(),
                        }
                    ),
                    media_type="application/json",
                )
        return JSONResponse(
            {"error": f"no comparison against '{doc_id}' in this analysis"}, status_code=404
        )

    return app
