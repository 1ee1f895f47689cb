import json
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapsense.errors import FormatError, MalformedGeometryError, UnknownConceptError, UnknownItemError
from mapsense.geo import WORLD, BoundingBox
from mapsense.items import ItemStore, geometry_bbox
from mapsense.ontology import Concept, Ontology

from reference import reference_bbox_of_geometry


def _concept(cid, lemma, parent=None, relations=(), properties=("name",)):
    return Concept(
        id=cid,
        label=cid,
        lemma=lemma,
        parent=parent,
        thematic_relations=frozenset(relations),
        property_schema=tuple(properties),
    )


@pytest.fixture
def ontology():
    return Ontology(
        [
            _concept("Ospedale", "ospedale", relations=[("nearTo", "Scuola")], properties=("name", "azienda")),
            _concept("Scuola", "scuola", properties=("name", "tipologia")),
            _concept("FermataBus", "fermata bus"),
        ]
    )


@pytest.fixture
def store(ontology):
    return ItemStore(ontology)


def _fc(*features):
    return {"type": "FeatureCollection", "features": list(features)}


def _feature(fid, lon, lat, concept=None, **props):
    properties = dict(props)
    if concept:
        properties["concept"] = concept
    return {
        "type": "Feature",
        "id": fid,
        "geometry": {"type": "Point", "coordinates": [lon, lat]},
        "properties": properties,
    }


# ---- geometry bbox ----


@pytest.mark.parametrize(
    "geometry",
    [
        {"type": "Point", "coordinates": [7.6, 45.1]},
        {"type": "LineString", "coordinates": [[7.6, 45.1], [7.7, 45.0]]},
        {"type": "Polygon", "coordinates": [[[7.6, 45.0], [7.7, 45.0], [7.7, 45.1], [7.6, 45.0]]]},
        {
            "type": "MultiPolygon",
            "coordinates": [
                [[[7.6, 45.0], [7.65, 45.0], [7.65, 45.05], [7.6, 45.0]]],
                [[[7.7, 45.1], [7.75, 45.1], [7.75, 45.15], [7.7, 45.1]]],
            ],
        },
    ],
)
def test_geometry_bbox_matches_reference(geometry):
    assert geometry_bbox(geometry).as_tuple() == reference_bbox_of_geometry(geometry)


def test_geometry_bbox_rejects_garbage():
    with pytest.raises(MalformedGeometryError):
        geometry_bbox({"type": "Point", "coordinates": "nope"})
    with pytest.raises(MalformedGeometryError):
        geometry_bbox({"type": "Circle", "coordinates": [0, 0]})
    with pytest.raises(MalformedGeometryError):
        geometry_bbox({"type": "Polygon", "coordinates": []})


# ---- ingestion ----


def test_ingest_counts_features(store):
    doc = _fc(*[_feature(f"h{i}", 7.6 + i / 100, 45.05) for i in range(5)])
    report = store.ingest(doc, "Ospedale")
    assert report.stored == 5
    assert len(store) == 5


def test_ingest_empty_collection(store):
    assert store.ingest(_fc(), "Ospedale").stored == 0


def test_ingest_unknown_concept(store):
    with pytest.raises(UnknownConceptError):
        store.ingest(_fc(_feature("x", 7.6, 45.0)), "Ghost")


def test_ingest_drops_unknown_property_with_warning(store, caplog):
    doc = _fc(_feature("h1", 7.6, 45.05, name="Ospedale X", colore="rosso"))
    with caplog.at_level(logging.WARNING):
        report = store.ingest(doc, "Ospedale")
    assert report.dropped_properties == 1
    assert "colore" in caplog.text
    assert store.get("h1").properties == {"name": "Ospedale X"}


def test_ingest_is_idempotent(store, tmp_path):
    doc = _fc(_feature("h1", 7.6, 45.05, name="A"), _feature("h2", 7.7, 45.06, name="B"))
    store.ingest(doc, "Ospedale")
    first = tmp_path / "first.json"
    store.save_snapshot(first)
    store.ingest(doc, "Ospedale")
    second = tmp_path / "second.json"
    store.save_snapshot(second)
    assert first.read_text() == second.read_text()


def test_ingest_generates_deterministic_ids(store):
    doc = _fc(
        {"type": "Feature", "geometry": {"type": "Point", "coordinates": [7.6, 45.0]}, "properties": {}},
    )
    store.ingest(doc, "Ospedale")
    (first_id,) = store.ids()
    fresh = ItemStore(store._ontology)
    fresh.ingest(doc, "Ospedale")
    assert fresh.ids() == [first_id]


def test_ingest_per_feature_concept(store):
    doc = _fc(
        _feature("h1", 7.6, 45.05, concept="Ospedale", name="H"),
        _feature("s1", 7.61, 45.05, concept="Scuola", name="S"),
    )
    assert store.ingest(doc).stored == 2
    assert store.get("h1").concept_id == "Ospedale"
    assert store.get("s1").concept_id == "Scuola"
    with pytest.raises(FormatError):
        store.ingest(_fc({"type": "Feature", "geometry": {"type": "Point", "coordinates": [0, 0]}, "properties": {}}))


def test_ingest_rejects_non_feature_collection(store):
    with pytest.raises(FormatError):
        store.ingest({"type": "Feature"})


# ---- retrieval ----


TORINO = BoundingBox(7.5786, 45.0068, 7.7734, 45.1332)


@pytest.fixture
def populated(store):
    store.ingest(
        _fc(
            _feature("regina", 7.674, 45.040, name="Ospedale Infantile Regina Margherita"),
            _feature("molinette", 7.674, 45.037, name="Presidio Ospedaliero Molinette"),
            _feature("fuori", 7.95, 45.3, name="Ospedale Fuori Zona"),
        ),
        "Ospedale",
    )
    store.ingest(_fc(_feature("arduino", 7.675, 45.041, name="Scuola Primaria Arduino")), "Scuola")
    return store


def test_instances_in_bbox(populated):
    found = populated.instances_in_bbox({"Ospedale"}, TORINO)
    assert [i.id for i in found] == ["molinette", "regina"]


def test_instances_in_bbox_world_returns_all(populated):
    found = populated.instances_in_bbox({"Ospedale"}, WORLD)
    assert [i.id for i in found] == ["fuori", "molinette", "regina"]


def test_instances_empty_store(ontology):
    assert ItemStore(ontology).instances_in_bbox({"Ospedale"}, WORLD) == []


def test_instances_unknown_concept(populated):
    with pytest.raises(UnknownConceptError):
        populated.instances_in_bbox({"Ghost"}, WORLD)


def test_item_on_box_edge_included(store):
    store.ingest(_fc(_feature("edge", 7.7734, 45.1332, name="Edge")), "Ospedale")
    assert [i.id for i in store.instances_in_bbox({"Ospedale"}, TORINO)] == ["edge"]


# ---- related items ----


def test_related_items_by_relation(populated):
    related = populated.related_items("regina", radius=0.01)
    assert ("nearTo", "arduino") in [(rel, item.id) for rel, item in related]


def test_related_items_radius_zero_requires_touching(populated):
    assert populated.related_items("regina", radius=0.0) == []
    # grow until the school's point box is reached
    assert populated.related_items("regina", radius=0.002) != []


def test_related_items_no_relations(populated):
    assert populated.related_items("arduino", radius=1.0) == []


def test_related_items_unknown_item(populated):
    with pytest.raises(UnknownItemError):
        populated.related_items("ghost", radius=0.1)


# ---- snapshot ----


def test_snapshot_roundtrip(populated, tmp_path, ontology):
    path = tmp_path / "snap.json"
    populated.save_snapshot(path)
    fresh = ItemStore(ontology)
    fresh.load_snapshot(path)
    assert fresh.ids() == populated.ids()
    for item_id in fresh.ids():
        assert fresh.get(item_id) == populated.get(item_id)


def test_snapshot_version_checked(tmp_path, ontology):
    path = tmp_path / "snap.json"
    path.write_text(json.dumps({"version": 99, "items": []}))
    with pytest.raises(FormatError):
        ItemStore(ontology).load_snapshot(path)


# ---- bbox monotonicity ----


_MONO_ONTOLOGY = Ontology([_concept("Ospedale", "ospedale")])


@given(data=st.data())
@settings(max_examples=200, deadline=None)
def test_bbox_query_monotone(data):
    store = ItemStore(_MONO_ONTOLOGY)
    n = data.draw(st.integers(0, 10))
    features = [
        _feature(
            f"p{i}",
            data.draw(st.floats(-10, 10)),
            data.draw(st.floats(-10, 10)),
            name=f"Item {i}",
        )
        for i in range(n)
    ]
    store.ingest(_fc(*features), "Ospedale")
    lon = data.draw(st.floats(-12, 8))
    lat = data.draw(st.floats(-12, 8))
    w1 = data.draw(st.floats(0, 4))
    h1 = data.draw(st.floats(0, 4))
    inner = BoundingBox(lon, lat, lon + w1, lat + h1)
    outer = BoundingBox(lon - data.draw(st.floats(0, 4)), lat - data.draw(st.floats(0, 4)),
                        lon + w1 + data.draw(st.floats(0, 4)), lat + h1 + data.draw(st.floats(0, 4)))
    small = {i.id for i in store.instances_in_bbox({"Ospedale"}, inner)}
    big = {i.id for i in store.instances_in_bbox({"Ospedale"}, outer)}
    assert small <= big
