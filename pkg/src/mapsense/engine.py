"""End-to-end search: interpretation, retrieval, qualifier filtering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .config import EngineConfig
from .geo import WORLD, BoundingBox, Gazetteer, load_gazetteer
from .interpreter import Disambiguation, InterpretationOutcome, Interpreter, NoMatch, Results
from .items import GeoItem, ItemStore
from .lexicon import Lexicon, SynonymProvider, load_lexicon
from .matching import SimilarityParams, filter_items
from .ontology import Ontology, load_ontology


@dataclass(frozen=True, slots=True)
class SearchResult:
    outcome: InterpretationOutcome
    items: list[GeoItem] = field(default_factory=list)


class SearchEngine:
    """Bundles the loaded stores with the interpreter and filter params."""

    def __init__(
        self,
        ontology: Ontology,
        lexicon: Lexicon,
        gazetteer: Gazetteer,
        store: ItemStore | None = None,
        params: SimilarityParams = SimilarityParams(),
        default_bbox: BoundingBox | None = None,
        related_radius: float = 0.01,
        synonym_provider: SynonymProvider | None = None,
    ):
        self.ontology = ontology
        self.lexicon = lexicon
        self.gazetteer = gazetteer
        self.store = store if store is not None else ItemStore(ontology)
        self.params = params
        self.related_radius = related_radius
        self.interpreter = Interpreter(
            ontology,
            lexicon,
            gazetteer,
            synonym_provider=synonym_provider,
            default_bbox=default_bbox if default_bbox is not None else WORLD,
        )

    @classmethod
    def from_config(cls, config: EngineConfig) -> "SearchEngine":
        ontology = load_ontology(config.ontology)
        lexicon = load_lexicon(config.lemmas, config.stopwords, config.synonyms)
        gazetteer = load_gazetteer(config.gazetteer)
        store = ItemStore(ontology)
        if config.snapshot is not None and config.snapshot.exists():
            store.load_snapshot(config.snapshot)
        return cls(
            ontology=ontology,
            lexicon=lexicon,
            gazetteer=gazetteer,
            store=store,
            params=SimilarityParams(beta=config.beta, gamma=config.gamma, rounding=config.rounding),
            default_bbox=config.default_bbox,
            related_radius=config.related_radius,
        )

    def search(
        self,
        text: str,
        viewport: BoundingBox | None = None,
        selected: Iterable[str] | None = None,
    ) -> SearchResult:
        """Interpret, retrieve by concept + bounding box, filter by qualifiers."""
        outcome = self.interpreter.interpret(text, viewport, selected)
        if isinstance(outcome, Results):
            retrieved = self.store.instances_in_bbox(outcome.concepts, outcome.bbox)
            kept = filter_items(retrieved, outcome.qualifier_set, self.params)
            return SearchResult(outcome=outcome, items=kept)
        assert isinstance(outcome, (Disambiguation, NoMatch))
        return SearchResult(outcome=outcome)
