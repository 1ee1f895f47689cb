from pathlib import Path

import pytest

from mapsense.engine import SearchEngine
from mapsense.geo import load_gazetteer
from mapsense.items import ItemStore
from mapsense.lexicon import load_lexicon
from mapsense.matching import SimilarityParams
from mapsense.ontology import load_ontology

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
GEOJSON_DIR = DATA_DIR / "geojson"

GEOJSON_CONCEPTS = {
    "hospitals.geojson": "Ospedale",
    "schools.geojson": "Scuola",
    "parks_urban.geojson": "ParcoUrbano",
    "parks_regional.geojson": "ParcoRegionale",
    "parks_provincial.geojson": "ParcoProvinciale",
    "protected_areas.geojson": "AreaProtetta",
    "green_areas.geojson": "AreaVerde",
    "museums.geojson": "Museo",
    "libraries.geojson": "Biblioteca",
    "bus_stops.geojson": "FermataBus",
    "transport.geojson": "TrasportoPubblico",
}


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def fixture_ontology():
    return load_ontology(DATA_DIR / "ontology.jsonl")


@pytest.fixture(scope="session")
def fixture_lexicon():
    return load_lexicon(
        DATA_DIR / "lemmas.tsv",
        DATA_DIR / "stopwords.txt",
        DATA_DIR / "synonyms.txt",
    )


@pytest.fixture(scope="session")
def fixture_gazetteer():
    return load_gazetteer(DATA_DIR / "gazetteer.tsv")


@pytest.fixture(scope="session")
def fixture_store(fixture_ontology):
    store = ItemStore(fixture_ontology)
    for filename, concept_id in GEOJSON_CONCEPTS.items():
        store.ingest(GEOJSON_DIR / filename, concept_id)
    return store


@pytest.fixture(scope="session")
def engine(fixture_ontology, fixture_lexicon, fixture_gazetteer, fixture_store) -> SearchEngine:
    return SearchEngine(
        ontology=fixture_ontology,
        lexicon=fixture_lexicon,
        gazetteer=fixture_gazetteer,
        store=fixture_store,
        params=SimilarityParams(beta=0.5, gamma=0.20, rounding="nearest"),
        related_radius=0.01,
    )
