"""Geographic item storage and concept + bounding-box retrieval.

Items are ingested from standard GeoJSON FeatureCollections (RFC 7946) and
indexed per concept. The spatial predicate is overlap of the geometry's
bounding rectangle, not exact geometric intersection; at map-viewport
granularity the two coincide for all practical purposes and the rectangle
test is orders of magnitude cheaper.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import FormatError, MalformedGeometryError, UnknownConceptError, UnknownItemError
from .geo import BoundingBox
from .ontology import Ontology

logger = logging.getLogger(__name__)

SNAPSHOT_VERSION = 1

_GEOMETRY_DEPTH = {"Point": 0, "LineString": 1, "Polygon": 2, "MultiPolygon": 3}


def _collect_positions(coordinates, depth: int, acc: list[tuple[float, float]]):
    if depth == 0:
        if (
            not isinstance(coordinates, (list, tuple))
            or len(coordinates) < 2
            or not all(isinstance(v, (int, float)) for v in coordinates[:2])
        ):
            raise MalformedGeometryError(f"invalid position: {coordinates!r}")
        acc.append((float(coordinates[0]), float(coordinates[1])))
        return
    if not isinstance(coordinates, (list, tuple)) or not coordinates:
        raise MalformedGeometryError("empty or invalid coordinate array")
    for part in coordinates:
        _collect_positions(part, depth - 1, acc)


def geometry_bbox(geometry: Mapping) -> BoundingBox:
    """Bounding rectangle of a GeoJSON geometry (altitude ignored)."""
    if not isinstance(geometry, Mapping):
        raise MalformedGeometryError("geometry must be an object")
    gtype = geometry.get("type")
    if gtype not in _GEOMETRY_DEPTH:
        raise MalformedGeometryError(f"unsupported geometry type: {gtype!r}")
    positions: list[tuple[float, float]] = []
    _collect_positions(geometry.get("coordinates"), _GEOMETRY_DEPTH[gtype], positions)
    lons = [p[0] for p in positions]
    lats = [p[1] for p in positions]
    try:
        return BoundingBox(min(lons), min(lats), max(lons), max(lats))
    except ValueError as exc:
        raise MalformedGeometryError(str(exc)) from exc


@dataclass(frozen=True, slots=True)
class GeoItem:
    id: str
    concept_id: str
    geometry: dict
    properties: dict[str, str]
    bbox: BoundingBox

    def to_feature(self) -> dict:
        """GeoJSON Feature with the owning concept echoed as a property."""
        return {
            "type": "Feature",
            "id": self.id,
            "geometry": self.geometry,
            "properties": {**self.properties, "concept": self.concept_id},
        }


@dataclass(frozen=True, slots=True)
class IngestReport:
    stored: int
    dropped_properties: int = 0

    def __int__(self) -> int:
        return self.stored


class ItemStore:
    """Items classified under ontology concepts, queryable by bounding box.

    Reads are lock-free over immutable GeoItem values; ingestion holds a
    lock and publishes the rebuilt per-concept index in one assignment.
    """

    def __init__(self, ontology: Ontology):
        self._ontology = ontology
        self._items: dict[str, GeoItem] = {}
        self._by_concept: dict[str, list[str]] = {}
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._items

    def get(self, item_id: str) -> GeoItem:
        try:
            return self._items[item_id]
        except KeyError:
            raise UnknownItemError(f"unknown item {item_id!r}") from None

    def ids(self) -> list[str]:
        return sorted(self._items)

    def _rebuild_index(self):
        index: dict[str, list[str]] = {}
        for item in self._items.values():
            index.setdefault(item.concept_id, []).append(item.id)
        for ids in index.values():
            ids.sort()
        self._by_concept = index

    def _clean_properties(self, concept_id: str, properties: Mapping, feature_id: str) -> tuple[dict[str, str], int]:
        allowed = set(self._ontology[concept_id].property_schema) | {"name"}
        kept: dict[str, str] = {}
        dropped = 0
        for key, value in properties.items():
            if key == "concept":
                continue
            if key not in allowed:
                logger.warning("feature %s: property %r not in schema of %s, dropped", feature_id, key, concept_id)
                dropped += 1
                continue
            kept[key] = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
        return kept, dropped

    def ingest(self, source: str | Path | IO[str] | Mapping, concept_id: str | None = None) -> IngestReport:
        """Store every feature of a GeoJSON FeatureCollection.

        The concept comes from `concept_id` or, when omitted, from each
        feature's `concept` property. Feature ids are kept when present,
        otherwise derived deterministically from the concept and ordinal,
        so re-ingesting the same document is idempotent.
        """
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8") as fh:
                try:
                    document = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, source=str(source)) from exc
        elif isinstance(source, Mapping):
            document = source
        else:
            try:
                document = json.load(source)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
        if not isinstance(document, Mapping) or document.get("type") != "FeatureCollection":
            raise FormatError("expected a GeoJSON FeatureCollection")
        features = document.get("features", [])
        if not isinstance(features, list):
            raise FormatError("'features' must be a list")

        staged: list[GeoItem] = []
        dropped = 0
        for ordinal, feature in enumerate(features):
            if not isinstance(feature, Mapping) or feature.get("type") != "Feature":
                raise FormatError(f"feature #{ordinal}: not a GeoJSON Feature")
            properties = feature.get("properties") or {}
            concept = concept_id or properties.get("concept")
            if concept is None:
                raise FormatError(f"feature #{ordinal}: no concept given and no 'concept' property")
            if concept not in self._ontology:
                raise UnknownConceptError(f"unknown concept {concept!r}")
            feature_id = feature.get("id")
            if feature_id is None:
                feature_id = hashlib.sha256(f"{concept}:{ordinal}".encode()).hexdigest()[:12]
            feature_id = str(feature_id)
            bbox = geometry_bbox(feature.get("geometry"))
            kept, n_dropped = self._clean_properties(concept, properties, feature_id)
            dropped += n_dropped
            staged.append(
                GeoItem(
                    id=feature_id,
                    concept_id=concept,
                    geometry=dict(feature["geometry"]),
                    properties=kept,
                    bbox=bbox,
                )
            )
        with self._write_lock:
            for item in staged:
                self._items[item.id] = item
            self._rebuild_index()
        return IngestReport(stored=len(staged), dropped_properties=dropped)

    def instances_in_bbox(self, concepts: Iterable[str], box: BoundingBox) -> list[GeoItem]:
        """Items of the given concepts whose rectangle overlaps `box`, by id."""
        wanted = sorted(set(concepts))
        if not wanted:
            raise ValueError("at least one concept id required")
        result: list[GeoItem] = []
        for concept_id in wanted:
            if concept_id not in self._ontology:
                raise UnknownConceptError(f"unknown concept {concept_id!r}")
            for item_id in self._by_concept.get(concept_id, []):
                item = self._items[item_id]
                if item.bbox.intersects(box):
                    result.append(item)
        result.sort(key=lambda item: item.id)
        return result

    def related_items(self, item_id: str, radius: float) -> list[tuple[str, GeoItem]]:
        """Instances of thematically related concepts near an item.

        "Near" means bounding-rectangle overlap with the focus item's
        rectangle expanded by `radius` degrees on all sides.
        """
        if radius < 0:
            raise ValueError("radius must be >= 0")
        focus = self.get(item_id)
        search_box = focus.bbox.expanded(radius)
        found: list[tuple[str, GeoItem]] = []
        for relation, target_concept in self._ontology.related_concepts(focus.concept_id):
            for candidate_id in self._by_concept.get(target_concept, []):
                if candidate_id == item_id:
                    continue
                candidate = self._items[candidate_id]
                if candidate.bbox.intersects(search_box):
                    found.append((relation, candidate))
        found.sort(key=lambda pair: (pair[0], pair[1].id))
        return found

    def save_snapshot(self, path: str | Path):
        """Write the whole store to one versioned JSON document."""
        payload = {
            "version": SNAPSHOT_VERSION,
            "items": [
                {
                    "id": item.id,
                    "concept": item.concept_id,
                    "geometry": item.geometry,
                    "properties": item.properties,
                }
                for item in (self._items[i] for i in self.ids())
            ],
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")

    def load_snapshot(self, path: str | Path):
        """Replace the store content with a snapshot written by save_snapshot."""
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, source=str(path)) from exc
        if not isinstance(payload, Mapping) or payload.get("version") != SNAPSHOT_VERSION:
            raise FormatError(f"unsupported snapshot version: {payload.get('version')!r}", source=str(path))
        staged: dict[str, GeoItem] = {}
        for record in payload.get("items", []):
            concept = record.get("concept")
            if concept not in self._ontology:
                raise UnknownConceptError(f"unknown concept {concept!r}")
            item = GeoItem(
                id=str(record["id"]),
                concept_id=concept,
                geometry=dict(record["geometry"]),
                properties={str(k): str(v) for k, v in record.get("properties", {}).items()},
                bbox=geometry_bbox(record["geometry"]),
            )
            staged[item.id] = item
        with self._write_lock:
            self._items = staged
            self._rebuild_index()
