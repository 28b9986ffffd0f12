"""HTTP API over a prebuilt corpus index.

Endpoints: document listing (paginated), single-document view with tags
grouped by aspect and mode, tag-based recommendation with a full-text
baseline arm, and a health probe.  The index is read-only; every response
is a pure function of (index, request).

Status codes: 400 malformed request body or query, 404 unknown document,
422 selected tags that do not belong to the document.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .embeddings import WordVectors
from .errors import DocumentError, RecommendError
from .recommender import CorpusIndex, IndexedDocument, rank_for_document


class RecommendRequest(BaseModel):
    doc_id: str
    selected_tags: list[str] = Field(min_length=1)
    top_n: int = Field(default=5, ge=1)
    baseline: bool = False


def create_app(index: CorpusIndex, store: WordVectors) -> FastAPI:
    app = FastAPI(title="juritag", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "format_version": index.format_version,
            "mode": index.mode,
            "corpus_size": len(index),
        }

    @app.get("/documents")
    def list_documents(
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=50, ge=1, le=500),
    ):
        page = index.documents[offset : offset + limit]
        return {
            "total": len(index),
            "offset": offset,
            "limit": limit,
            "documents": [
                {
                    "doc_id": doc.doc_id,
                    "title": doc.metadata.get("title", doc.doc_id),
                    "tag_count": len(doc.tags),
                }
                for doc in page
            ],
        }

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        entry = index.document(doc_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
        return _document_payload(entry)

    @app.post("/recommend")
    def post_recommend(body: RecommendRequest):
        try:
            results = rank_for_document(
                index,
                store,
                body.doc_id,
                body.selected_tags,
                top_n=body.top_n,
                baseline=body.baseline,
            )
        except DocumentError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except RecommendError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {
            "doc_id": body.doc_id,
            "baseline": body.baseline,
            "recommendations": [
                {
                    "doc_id": rec.doc_id,
                    "title": _title(index, rec.doc_id),
                    "score": rec.score,
                    "per_tag_scores": [
                        {
                            "selected": match.selected,
                            "best_match": match.best_match,
                            "similarity": match.similarity,
                        }
                        for match in rec.per_tag_scores
                    ],
                }
                for rec in results
            ],
        }

    return app


def _title(index: CorpusIndex, doc_id: str) -> str:
    entry = index.document(doc_id)
    return entry.metadata.get("title", doc_id) if entry else doc_id


def _document_payload(entry: IndexedDocument) -> dict:
    groups: dict[tuple[str, str], list[dict]] = {}
    for tag in entry.tags:
        groups.setdefault((tag.aspect, tag.mode), []).append(
            {
                "text": tag.text,
                "matched_term": tag.matched_term,
                "sentence_index": tag.sentence_index,
            }
        )
    return {
        "doc_id": entry.doc_id,
        "metadata": entry.metadata,
        "fulltext": entry.fulltext,
        "sentences": list(entry.sentences),
        "aspect_sentences": [
            {"index": s.index, "aspect": s.aspect, "score": s.score, "text": s.text}
            for s in entry.aspect_sentences
        ],
        "tag_groups": [
            {"aspect": aspect, "mode": mode, "tags": tags}
            for (aspect, mode), tags in groups.items()
        ],
    }
