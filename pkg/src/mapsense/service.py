"""HTTP API over the search engine.

Endpoints:
  POST /api/query               interpret + retrieve + filter
  GET  /api/items/{item_id}     item properties and geometry
  GET  /api/items/{item_id}/related   thematically related nearby items
  GET  /api/concepts            ontology listing for client menus
  GET  /api/health              liveness and store counters

The service never mutates state: ingestion happens offline through the CLI
and the loaded stores are immutable, so request handling is freely
concurrent. Disambiguation is stateless: the client resubmits the original
query text together with the chosen concept ids.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import SearchEngine
from .errors import DataError, UnknownItemError
from .geo import BoundingBox
from .interpreter import Disambiguation, NoMatch, Results


def _error(message: str, status_code: int = 400) -> JSONResponse:
    return JSONResponse({"status": "error", "message": message}, status_code=status_code)


def _feature_collection(items) -> dict:
    return {"type": "FeatureCollection", "features": [item.to_feature() for item in items]}


def create_app(engine: SearchEngine) -> FastAPI:
    app = FastAPI(title="mapsense", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.post("/api/query")
    async def query(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error("request body must be a JSON object")
        if not isinstance(payload, dict):
            return _error("request body must be a JSON object")
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            return _error("'text' must be a non-empty string")
        viewport = None
        if payload.get("bbox") is not None:
            try:
                viewport = BoundingBox.from_sequence(payload["bbox"])
            except (TypeError, ValueError) as exc:
                return _error(f"invalid bbox: {exc}")
        selected = payload.get("selected_concepts")
        if selected is not None and (
            not isinstance(selected, list) or any(not isinstance(s, str) for s in selected)
        ):
            return _error("'selected_concepts' must be a list of concept ids")
        try:
            result = engine.search(text, viewport=viewport, selected=selected)
        except DataError as exc:
            return _error(str(exc))
        outcome = result.outcome
        if isinstance(outcome, Results):
            return JSONResponse(
                {
                    "status": "results",
                    "features": _feature_collection(result.items),
                    "matched_concepts": sorted(outcome.concepts),
                    "qualifier_set": outcome.qualifier_set.term_lists(),
                    "bbox": list(outcome.bbox.as_tuple()),
                }
            )
        if isinstance(outcome, Disambiguation):
            return JSONResponse(
                {
                    "status": "disambiguation",
                    "candidates": [
                        {"concept": c.concept_id, "label": c.label, "keyword": c.matched_keyword}
                        for c in outcome.candidates
                    ],
                }
            )
        assert isinstance(outcome, NoMatch)
        return JSONResponse({"status": "no_match"})

    @app.get("/api/items/{item_id}")
    async def item_detail(item_id: str):
        try:
            item = engine.store.get(item_id)
        except UnknownItemError as exc:
            return _error(str(exc), status_code=404)
        return JSONResponse(
            {
                "id": item.id,
                "concept": item.concept_id,
                "properties": item.properties,
                "geometry": item.geometry,
                "bbox": list(item.bbox.as_tuple()),
            }
        )

    @app.get("/api/items/{item_id}/related")
    async def item_related(item_id: str):
        try:
            related = engine.store.related_items(item_id, engine.related_radius)
        except UnknownItemError as exc:
            return _error(str(exc), status_code=404)
        return JSONResponse(
            {
                "item": item_id,
                "radius": engine.related_radius,
                "related": [
                    {"relation": relation, "feature": item.to_feature()} for relation, item in related
                ],
            }
        )

    @app.get("/api/concepts")
    async def concepts():
        listing = []
        for concept_id in engine.ontology.ids():
            concept = engine.ontology[concept_id]
            listing.append(
                {
                    "id": concept.id,
                    "label": concept.label,
                    "parent": concept.parent,
                    "relations": [
                        {"name": name, "target": target} for name, target in sorted(concept.thematic_relations)
                    ],
                }
            )
        return JSONResponse(listing)

    @app.get("/api/health")
    async def health():
        return JSONResponse(
            {"status": "ok", "concepts": len(engine.ontology), "items": len(engine.store)}
        )

    return app
