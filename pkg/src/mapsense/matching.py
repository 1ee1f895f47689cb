"""Fuzzy similarity between item properties and query qualifiers.

An item survives filtering when at least one of its property values is
similar to at least one qualifier. Property words are compared raw
(lowercased, punctuation stripped, never lemmatized) against qualifier
lemmas using Levenshtein distance with two relative thresholds:

  * a pair of words counts as similar when their distance is at most a
    fraction `gamma` of the longer word's length;
  * a property matches a qualifier when the number of similar word pairs
    exceeds a fraction `beta` of the shorter side's word count.

The per-pair distance budget is rounded to the nearest integer by default;
`rounding="ceil"` and `rounding="exact"` (no rounding, float comparison)
are available for stricter or looser tuning.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Sequence

if TYPE_CHECKING:
    from .items import GeoItem

ROUNDING_MODES = ("nearest", "ceil", "exact")

_WORD = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True, slots=True)
class Qualifier:
    """One qualifier: an ordered sequence of lemmas plus its provenance."""

    terms: tuple[str, ...]
    source: str = "original"  # "original" | "synonym"

    def __post_init__(self):
        if not self.terms:
            raise ValueError("qualifier needs at least one term")
        for term in self.terms:
            if not term or term != term.lower():
                raise ValueError(f"qualifier terms must be lowercase and non-empty, got {term!r}")
        if self.source not in ("original", "synonym"):
            raise ValueError(f"unknown qualifier source {self.source!r}")


@dataclass(frozen=True, slots=True)
class QualifierSet:
    """The unresolved residue of a query after concept identification."""

    qualifiers: tuple[Qualifier, ...] = ()

    def __post_init__(self):
        seen = set()
        for qualifier in self.qualifiers:
            if qualifier.terms in seen:
                raise ValueError(f"duplicate qualifier {qualifier.terms!r}")
            seen.add(qualifier.terms)

    def __iter__(self) -> Iterator[Qualifier]:
        return iter(self.qualifiers)

    def __len__(self) -> int:
        return len(self.qualifiers)

    def __bool__(self) -> bool:
        return bool(self.qualifiers)

    def term_lists(self) -> list[list[str]]:
        return [list(q.terms) for q in self.qualifiers]

    @classmethod
    def from_terms(cls, term_lists: Sequence[Sequence[str]], source: str = "original") -> "QualifierSet":
        return cls(tuple(Qualifier(tuple(terms), source) for terms in term_lists))


@dataclass(frozen=True, slots=True)
class SimilarityParams:
    beta: float = 0.5
    gamma: float = 0.20
    rounding: str = "nearest"

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.rounding not in ROUNDING_MODES:
            raise ValueError(f"rounding must be one of {ROUNDING_MODES}, got {self.rounding!r}")


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions or
    substitutions turning `a` into `b`."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, char_a in enumerate(a, start=1):
        current = [i]
        append = current.append
        for j, char_b in enumerate(b, start=1):
            append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (char_a != char_b)))
        previous = current
    return previous[-1]


def property_terms(text: str) -> list[str]:
    """Words of a property value: lowercased, punctuation stripped, unlemmatized."""
    return [
        stripped
        for chunk in text.lower().split()
        if (stripped := "".join(_WORD.findall(chunk)))
    ]


def _distance_budget(gamma: float, max_len: int, rounding: str) -> float:
    # round() at 9 decimals first: 0.2 * 5 must stay 1.0, not 1.0000000000000002
    raw = round(gamma * max_len, 9)
    if rounding == "nearest":
        return math.floor(raw + 0.5)
    if rounding == "ceil":
        return math.ceil(raw)
    return raw


def _pair_similar(term_p: str, term_q: str, params: SimilarityParams) -> bool:
    budget = _distance_budget(params.gamma, max(len(term_p), len(term_q)), params.rounding)
    if abs(len(term_p) - len(term_q)) > budget:  # length gap bounds the distance from below
        return False
    return levenshtein(term_p, term_q) <= budget


def property_similar(value: str, qualifiers: QualifierSet, params: SimilarityParams) -> bool:
    """Decide whether one property value is similar to any qualifier.

    For each qualifier the count of similar (property word, qualifier term)
    pairs must strictly exceed beta times the smaller of the two word counts.
    """
    if not qualifiers:
        raise ValueError("qualifier set must not be empty; callers short-circuit empty sets")
    p_terms = property_terms(value)
    for qualifier in qualifiers:
        threshold = params.beta * min(len(p_terms), len(qualifier.terms))
        similar = 0
        for term_p in p_terms:
            for term_q in qualifier.terms:
                if _pair_similar(term_p, term_q, params):
                    similar += 1
                    if similar > threshold:
                        return True
    return False


def item_similar(item: "GeoItem", qualifiers: QualifierSet, params: SimilarityParams) -> bool:
    """An item is similar when any of its property values is."""
    return any(property_similar(value, qualifiers, params) for value in item.properties.values())


def filter_items(items: Sequence["GeoItem"], qualifiers: QualifierSet, params: SimilarityParams) -> list["GeoItem"]:
    """Keep the items similar to the qualifier set, preserving order.

    An empty qualifier set keeps everything: the concept-level retrieval
    already answers the query.
    """
    if not qualifiers:
        return list(items)
    return [item for item in items if item_similar(item, qualifiers, params)]
