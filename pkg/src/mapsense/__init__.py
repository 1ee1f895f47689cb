"""Concept-aware geographic search.

Interprets free-text queries against a lemma-annotated domain ontology,
retrieves geographic items by concept and bounding box, and filters them
with fuzzy qualifier matching.
"""

from .config import EngineConfig, load_config
from .engine import SearchEngine, SearchResult
from .geo import WORLD, BoundingBox, Gazetteer, extract_geo_reference, load_gazetteer
from .interpreter import (
    Disambiguation,
    DisambiguationCandidate,
    InterpretationOutcome,
    Interpreter,
    NoMatch,
    NormalizedQuery,
    Results,
    TermGroup,
    tokenize,
)
from .items import GeoItem, IngestReport, ItemStore, geometry_bbox
from .lexicon import Lexicon, SynonymProvider, load_lexicon
from .matching import (
    Qualifier,
    QualifierSet,
    SimilarityParams,
    filter_items,
    levenshtein,
    property_similar,
    property_terms,
)
from .ontology import Concept, Ontology, dump_ontology, load_ontology

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "Concept",
    "Disambiguation",
    "DisambiguationCandidate",
    "EngineConfig",
    "Gazetteer",
    "GeoItem",
    "IngestReport",
    "InterpretationOutcome",
    "Interpreter",
    "ItemStore",
    "Lexicon",
    "NoMatch",
    "NormalizedQuery",
    "Ontology",
    "Qualifier",
    "QualifierSet",
    "Results",
    "SearchEngine",
    "SearchResult",
    "SimilarityParams",
    "SynonymProvider",
    "TermGroup",
    "WORLD",
    "dump_ontology",
    "extract_geo_reference",
    "filter_items",
    "geometry_bbox",
    "levenshtein",
    "load_config",
    "load_gazetteer",
    "load_lexicon",
    "load_ontology",
    "property_similar",
    "property_terms",
    "tokenize",
]
