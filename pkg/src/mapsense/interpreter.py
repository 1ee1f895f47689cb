"""Free-text query interpretation.

A query runs through three phases:

  1. pre-processing — tokenize, pull out the geographic reference, drop
     stop words, lemmatize, attach synonyms (`preprocess`);
  2. concept identification against the ontology, direct tier first,
     keyword tier as fallback (`identify_concepts`);
  3. the caller retrieves instances of the identified concepts and filters
     them by the residual qualifier set (see engine.SearchEngine).

Keyword-tier matches are never acted on silently: they come back as a
`Disambiguation` outcome listing candidate concepts, and the client
resubmits the original query together with the user's selection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import AllTokensRemovedError, EmptyQueryError
from .geo import DEFAULT_PREPOSITIONS, WORLD, BoundingBox, Gazetteer, extract_geo_reference
from .lexicon import Lexicon, SynonymProvider
from .matching import Qualifier, QualifierSet
from .ontology import Ontology

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; punctuation and whitespace both separate."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True, slots=True)
class TermGroup:
    """One retained query word: its lemma plus attached synonym lemmas."""

    original: str
    synonyms: frozenset[str]
    position: int

    def __post_init__(self):
        if self.original in self.synonyms:
            raise ValueError(f"synonyms of {self.original!r} must not contain the lemma itself")


@dataclass(frozen=True, slots=True)
class NormalizedQuery:
    raw: str
    groups: tuple[TermGroup, ...]
    bbox: BoundingBox
    place: str | None
    simplified: tuple[str, ...]

    def lemma_sets(self) -> list[set[str]]:
        return [{g.original, *g.synonyms} for g in self.groups]


@dataclass(frozen=True, slots=True)
class DisambiguationCandidate:
    concept_id: str
    label: str
    matched_keyword: str


@dataclass(frozen=True, slots=True)
class Results:
    concepts: frozenset[str]
    qualifier_set: QualifierSet
    bbox: BoundingBox
    consumed_positions: frozenset[int] = frozenset()

    def __post_init__(self):
        if not self.concepts:
            raise ValueError("Results must carry at least one concept")


@dataclass(frozen=True, slots=True)
class Disambiguation:
    candidates: tuple[DisambiguationCandidate, ...]

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("Disambiguation must carry at least one candidate")
        ids = [c.concept_id for c in self.candidates]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate disambiguation candidates")


@dataclass(frozen=True, slots=True)
class NoMatch:
    normalized: NormalizedQuery


InterpretationOutcome = Union[Results, Disambiguation, NoMatch]

# Adjacent-tuple matching is capped at three lemmas: long enough for every
# multi-word concept name the ontology format encourages, cheap to scan.
MAX_TUPLE = 3


class Interpreter:
    """Stateless query interpreter over immutable ontology/lexicon/gazetteer."""

    def __init__(
        self,
        ontology: Ontology,
        lexicon: Lexicon,
        gazetteer: Gazetteer,
        synonym_provider: SynonymProvider | None = None,
        default_bbox: BoundingBox = WORLD,
        prepositions: frozenset[str] = DEFAULT_PREPOSITIONS,
    ):
        self._ontology = ontology
        self._lexicon = lexicon
        self._gazetteer = gazetteer
        self._synonyms = synonym_provider if synonym_provider is not None else lexicon
        self._default_bbox = default_bbox
        self._prepositions = prepositions

    # -- phase 1 ------------------------------------------------------

    def preprocess(self, query: str, viewport: BoundingBox | None = None) -> NormalizedQuery:
        """Build the normalized query: geo reference out, stop words out,
        survivors lemmatized with synonyms attached."""
        if not query or not query.strip():
            raise EmptyQueryError("query is empty")
        tokens = tokenize(query)
        if not tokens:
            raise EmptyQueryError(f"no word tokens in query {query!r}")
        place, remaining = extract_geo_reference(tokens, self._gazetteer, self._prepositions)
        simplified = tuple(remaining)
        survivors = [t for t in remaining if not self._lexicon.is_stopword(t)]
        if not survivors:
            raise AllTokensRemovedError(f"nothing left of query {query!r} after removing place and stop words")
        context = " ".join(simplified)
        groups = []
        for position, word in enumerate(survivors):
            lemma = self._lexicon.lemmatize(word)
            synonyms = frozenset(self._synonyms.synonyms(lemma, context)) - {lemma}
            groups.append(TermGroup(original=lemma, synonyms=synonyms, position=position))
        if viewport is not None:
            bbox = viewport  # an explicit map selection wins over the text
        elif place is not None:
            bbox = self._gazetteer.resolve(place)
        else:
            bbox = self._default_bbox
        return NormalizedQuery(raw=query, groups=tuple(groups), bbox=bbox, place=place, simplified=simplified)

    # -- phase 2 ------------------------------------------------------

    def identify_concepts(self, nq: NormalizedQuery) -> InterpretationOutcome:
        """Match the normalized query to the ontology.

        Direct matches (lemma or synonym equality, single lemmas and
        adjacent original-lemma tuples) win outright; otherwise keyword
        matches become a disambiguation request.
        """
        matches = self._direct_match_positions(nq.groups)
        if matches:
            final = self._ontology.most_specific(matches.keys())
            consumed: set[int] = set()
            for concept_id in final:
                consumed.update(matches[concept_id])
            return Results(
                concepts=final,
                qualifier_set=self._build_qualifiers(nq.groups, consumed),
                bbox=nq.bbox,
                consumed_positions=frozenset(consumed),
            )
        candidates = self._keyword_candidates(nq.groups)
        if candidates:
            return Disambiguation(candidates=tuple(candidates))
        return NoMatch(normalized=nq)

    def _direct_match_positions(self, groups: Sequence[TermGroup]) -> dict[str, set[int]]:
        """Concept id -> query positions that contributed a matching lemma."""
        matches: dict[str, set[int]] = {}

        def probe(sequence: list[str], positions: set[int]):
            for concept_id in self._ontology.direct_matches(sequence):
                matches.setdefault(concept_id, set()).update(positions)

        for group in groups:
            probe([group.original], {group.position})
            for synonym in sorted(group.synonyms):
                probe(synonym.split(), {group.position})
        originals = [g.original for g in groups]
        for size in range(2, MAX_TUPLE + 1):
            for start in range(0, len(groups) - size + 1):
                window = groups[start : start + size]
                probe(originals[start : start + size], {g.position for g in window})
        return matches

    def _build_qualifiers(self, groups: Sequence[TermGroup], consumed: set[int]) -> QualifierSet:
        """Qualifiers from the contiguous runs of unconsumed groups.

        Each run yields one qualifier holding its original lemmas in order;
        every synonym of a run member yields an additional stand-alone
        qualifier, so the filter can match either wording.
        """
        runs: list[list[TermGroup]] = []
        current: list[TermGroup] = []
        for group in groups:
            if group.position in consumed:
                if current:
                    runs.append(current)
                    current = []
            else:
                current.append(group)
        if current:
            runs.append(current)

        qualifiers: list[Qualifier] = []
        seen: set[tuple[str, ...]] = set()

        def add(terms: Iterable[str], source: str):
            key = tuple(terms)
            if key and key not in seen:
                seen.add(key)
                qualifiers.append(Qualifier(key, source))

        for run in runs:
            add((g.original for g in run), "original")
            for group in run:
                for synonym in sorted(group.synonyms):
                    add(tuple(synonym.split()), "synonym")
        return QualifierSet(tuple(qualifiers))

    def _keyword_candidates(self, groups: Sequence[TermGroup]) -> list[DisambiguationCandidate]:
        """Keyword-tier candidates, most matching lemmas first, then by id."""
        hits: dict[str, list[str]] = {}
        for group in groups:
            for lemma in (group.original, *sorted(group.synonyms)):
                for concept_id in self._ontology.keyword_matches(lemma):
                    matched = hits.setdefault(concept_id, [])
                    if lemma not in matched:
                        matched.append(lemma)
        ordered = sorted(hits.items(), key=lambda pair: (-len(pair[1]), pair[0]))
        return [
            DisambiguationCandidate(concept_id=cid, label=self._ontology[cid].label, matched_keyword=matched[0])
            for cid, matched in ordered
        ]

    # -- phases 1+2 with an optional user selection --------------------

    def interpret(
        self,
        query: str,
        viewport: BoundingBox | None = None,
        selected: Iterable[str] | None = None,
    ) -> InterpretationOutcome:
        """Interpret a query end to end.

        `selected` carries the user's choice after a Disambiguation
        outcome; the client resubmits the original query plus the chosen
        concept ids (the interpreter itself keeps no session state).
        """
        nq = self.preprocess(query, viewport)
        selected_ids = frozenset(selected) if selected else frozenset()
        if selected_ids:
            return self._interpret_selected(nq, selected_ids)
        return self.identify_concepts(nq)

    def _interpret_selected(self, nq: NormalizedQuery, selected: frozenset[str]) -> Results:
        final = self._ontology.most_specific(selected)
        keyword_pool: set[str] = set()
        name_pool: set[str] = set()
        for concept_id in final:
            concept = self._ontology[concept_id]
            keyword_pool.update(concept.keyword_lemmas)
            name_pool.add(concept.lemma)
            name_pool.update(concept.synonym_lemmas)
        consumed: set[int] = set()
        for group in nq.groups:
            for lemma in (group.original, *group.synonyms):
                if lemma in keyword_pool or lemma in name_pool:
                    consumed.add(group.position)
                    break
        originals = [g.original for g in nq.groups]
        for size in range(2, MAX_TUPLE + 1):
            for start in range(0, len(nq.groups) - size + 1):
                if " ".join(originals[start : start + size]) in name_pool:
                    consumed.update(g.position for g in nq.groups[start : start + size])
        return Results(
            concepts=final,
            qualifier_set=self._build_qualifiers(nq.groups, consumed),
            bbox=nq.bbox,
            consumed_positions=frozenset(consumed),
        )
