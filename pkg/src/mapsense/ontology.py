"""Domain ontology: concept hierarchy, thematic relations and the lemma
annotations used for query matching.

Ontology documents are UTF-8 JSON Lines, one object per concept:

    {"id": "Ospedale", "label": "Ospedale", "lemma": "ospedale",
     "synonyms": ["clinica", "nosocomio"], "keywords": ["cura"],
     "parent": null, "relations": [{"name": "servedBy", "target": "FermataBus"}],
     "properties": ["name", "indirizzo"]}

`dump_ontology` emits the canonical form (concepts sorted by id, fields in
the order above, synonym/keyword/relation lists sorted); loading a canonical
document and dumping it again reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import DanglingReferenceError, FormatError, HierarchyCycleError, UnknownConceptError


@dataclass(frozen=True, slots=True)
class Concept:
    id: str
    label: str
    lemma: str
    synonym_lemmas: frozenset[str] = frozenset()
    keyword_lemmas: frozenset[str] = frozenset()
    parent: str | None = None
    thematic_relations: frozenset[tuple[str, str]] = frozenset()
    property_schema: tuple[str, ...] = ()

    def __post_init__(self):
        for value in (self.lemma, *self.synonym_lemmas, *self.keyword_lemmas):
            if not value or value != value.lower():
                raise ValueError(f"concept {self.id!r}: lemma fields must be lowercase and non-empty, got {value!r}")


class Ontology:
    """Immutable concept set with lemma and keyword indexes."""

    def __init__(self, concepts: Iterable[Concept]):
        self._concepts: dict[str, Concept] = {}
        for concept in concepts:
            if concept.id in self._concepts:
                raise ValueError(f"duplicate concept id {concept.id!r}")
            self._concepts[concept.id] = concept
        self._check_references()
        self._check_acyclic()
        self._lemma_index: dict[str, frozenset[str]] = {}
        self._keyword_index: dict[str, frozenset[str]] = {}
        lemma_acc: dict[str, set[str]] = {}
        keyword_acc: dict[str, set[str]] = {}
        for concept in self._concepts.values():
            for lemma in (concept.lemma, *concept.synonym_lemmas):
                lemma_acc.setdefault(lemma, set()).add(concept.id)
            for keyword in concept.keyword_lemmas:
                keyword_acc.setdefault(keyword, set()).add(concept.id)
        self._lemma_index = {k: frozenset(v) for k, v in lemma_acc.items()}
        self._keyword_index = {k: frozenset(v) for k, v in keyword_acc.items()}

    def _check_references(self):
        for concept in self._concepts.values():
            if concept.parent is not None and concept.parent not in self._concepts:
                raise DanglingReferenceError(f"concept {concept.id!r}: unknown parent {concept.parent!r}")
            for name, target in concept.thematic_relations:
                if target not in self._concepts:
                    raise DanglingReferenceError(f"concept {concept.id!r}: relation {name!r} targets unknown concept {target!r}")

    def _check_acyclic(self):
        for start in self._concepts:
            seen = {start}
            current = self._concepts[start].parent
            while current is not None:
                if current in seen:
                    raise HierarchyCycleError(f"parent cycle through concept {current!r}")
                seen.add(current)
                current = self._concepts[current].parent

    def __len__(self) -> int:
        return len(self._concepts)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self._concepts

    def __getitem__(self, concept_id: str) -> Concept:
        try:
            return self._concepts[concept_id]
        except KeyError:
            raise UnknownConceptError(f"unknown concept {concept_id!r}") from None

    @property
    def concepts(self) -> Mapping[str, Concept]:
        return dict(self._concepts)

    def ids(self) -> list[str]:
        return sorted(self._concepts)

    def direct_matches(self, seq: Iterable[str]) -> frozenset[str]:
        """Concepts whose lemma or synonym equals the space-joined sequence."""
        key = " ".join(seq)
        return self._lemma_index.get(key, frozenset())

    def keyword_matches(self, lemma: str) -> frozenset[str]:
        """Concepts whose definition keywords contain the lemma."""
        return self._keyword_index.get(lemma, frozenset())

    def ancestors(self, concept_id: str) -> list[str]:
        """Proper ancestors, nearest first."""
        chain: list[str] = []
        current = self[concept_id].parent
        while current is not None:
            chain.append(current)
            current = self._concepts[current].parent
        return chain

    def most_specific(self, ids: Iterable[str]) -> frozenset[str]:
        """Drop every concept that is a proper ancestor of another member."""
        members = set(ids)
        for concept_id in members:
            if concept_id not in self._concepts:
                raise UnknownConceptError(f"unknown concept {concept_id!r}")
        culled = set()
        for concept_id in members:
            culled.update(a for a in self.ancestors(concept_id) if a in members)
        return frozenset(members - culled)

    def related_concepts(self, concept_id: str) -> list[tuple[str, str]]:
        """Declared plus inherited thematic relations, sorted by (name, target)."""
        relations: set[tuple[str, str]] = set(self[concept_id].thematic_relations)
        for ancestor in self.ancestors(concept_id):
            relations.update(self._concepts[ancestor].thematic_relations)
        return sorted(relations)


def _parse_concept(record: dict, lineno: int, source: str) -> Concept:
    def fail(message: str):
        raise FormatError(message, line=lineno, source=source)

    if not isinstance(record, dict):
        fail("concept record must be an object")
    for key in ("id", "label", "lemma"):
        if not isinstance(record.get(key), str) or not record[key]:
            fail(f"missing or invalid {key!r}")
    for key in ("synonyms", "keywords", "properties"):
        value = record.get(key, [])
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            fail(f"{key!r} must be a list of strings")
    relations = record.get("relations", [])
    if not isinstance(relations, list):
        fail("'relations' must be a list")
    pairs = []
    for rel in relations:
        if not isinstance(rel, dict) or not isinstance(rel.get("name"), str) or not isinstance(rel.get("target"), str):
            fail("each relation needs string fields 'name' and 'target'")
        pairs.append((rel["name"], rel["target"]))
    parent = record.get("parent")
    if parent is not None and not isinstance(parent, str):
        fail("'parent' must be a string or null")
    try:
        return Concept(
            id=record["id"],
            label=record["label"],
            lemma=record["lemma"],
            synonym_lemmas=frozenset(record.get("synonyms", [])),
            keyword_lemmas=frozenset(record.get("keywords", [])),
            parent=parent,
            thematic_relations=frozenset(pairs),
            property_schema=tuple(record.get("properties", [])),
        )
    except ValueError as exc:
        fail(str(exc))
    raise AssertionError("unreachable")


def load_ontology(source: str | Path | IO[str]) -> Ontology:
    """Load an ontology document (JSON Lines); validates all invariants."""
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        name = getattr(source, "name", "<stream>")
        lines = source.readlines()
    concepts: list[Concept] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", line=lineno, source=name) from exc
        concept = _parse_concept(record, lineno, name)
        if concept.id in seen:
            raise FormatError(f"duplicate concept id {concept.id!r}", line=lineno, source=name)
        seen.add(concept.id)
        concepts.append(concept)
    return Ontology(concepts)


def dump_ontology(ontology: Ontology) -> str:
    """Serialize to canonical JSON Lines (sorted ids, sorted list fields)."""
    out = []
    for concept_id in ontology.ids():
        concept = ontology[concept_id]
        record = {
            "id": concept.id,
            "label": concept.label,
            "lemma": concept.lemma,
            "synonyms": sorted(concept.synonym_lemmas),
            "keywords": sorted(concept.keyword_lemmas),
            "parent": concept.parent,
            "relations": [{"name": n, "target": t} for n, t in sorted(concept.thematic_relations)],
            "properties": list(concept.property_schema),
        }
        out.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(out) + ("\n" if out else "")
