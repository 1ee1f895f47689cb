"""Lemmatization, stop words and synonym expansion from flat files.

File formats (all UTF-8, `#` comments and blank lines ignored):
  * lemma table    — one `surface<TAB>lemma` per line
  * stop words     — one word per line
  * synonym groups — one group per line, lemmas comma-separated

The default synonym provider is context-insensitive; the `context`
parameter exists so a word-sense-disambiguation client can be plugged in
without changing the interpreter.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import IO

from .errors import FormatError


class SynonymProvider(ABC):
    """Maps a lemma (plus the simplified query for context) to synonym lemmas."""

    @abstractmethod
    def synonyms(self, lemma: str, context: str = "") -> frozenset[str]:
        """Return synonym lemmas for `lemma`, never including `lemma` itself."""


def _read_lines(source: str | Path | IO[str]) -> tuple[str, list[str]]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return str(source), fh.readlines()
    return getattr(source, "name", "<stream>"), source.readlines()


class Lexicon(SynonymProvider):
    """Immutable lemma table + stop-word list + flat synonym groups."""

    def __init__(
        self,
        lemma_table: dict[str, str] | None = None,
        stopwords: set[str] | None = None,
        synonym_groups: list[set[str]] | None = None,
    ):
        self._lemmas = {k.lower(): v.lower() for k, v in (lemma_table or {}).items()}
        self._stopwords = frozenset(w.lower() for w in (stopwords or set()))
        for surface, lemma in self._lemmas.items():
            if not surface or not lemma:
                raise ValueError("empty lemma table entry")
            if self._lemmas.get(lemma, lemma) != lemma:
                raise ValueError(f"lemma {lemma!r} is not a fixed point of the lemma table")
        self._synonym_map: dict[str, frozenset[str]] = {}
        self._groups: list[frozenset[str]] = []
        for group in synonym_groups or []:
            members = frozenset(m.lower() for m in group if m)
            if len(members) < 2:
                continue
            for member in members:
                if member in self._synonym_map:
                    raise ValueError(f"lemma {member!r} appears in more than one synonym group")
                self._synonym_map[member] = members - {member}
            self._groups.append(members)

    @property
    def stopwords(self) -> frozenset[str]:
        return self._stopwords

    @property
    def synonym_groups(self) -> list[frozenset[str]]:
        return list(self._groups)

    def lemmatize(self, word: str) -> str:
        """Lowercase lemma for `word`; unknown words map to themselves."""
        lowered = word.lower()
        return self._lemmas.get(lowered, lowered)

    def is_stopword(self, word: str) -> bool:
        return word.lower() in self._stopwords

    def synonyms(self, lemma: str, context: str = "") -> frozenset[str]:
        return self._synonym_map.get(lemma, frozenset())


def load_lemma_table(source: str | Path | IO[str]) -> dict[str, str]:
    name, lines = _read_lines(source)
    table: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise FormatError("expected `surface<TAB>lemma`", line=lineno, source=name)
        table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


def load_stopwords(source: str | Path | IO[str]) -> set[str]:
    _, lines = _read_lines(source)
    return {line.strip().lower() for line in lines if line.strip() and not line.startswith("#")}


def load_synonym_groups(source: str | Path | IO[str]) -> list[set[str]]:
    name, lines = _read_lines(source)
    groups: list[set[str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        members = {part.strip().lower() for part in line.split(",") if part.strip()}
        if len(members) < 2:
            raise FormatError("synonym group needs at least two lemmas", line=lineno, source=name)
        groups.append(members)
    return groups


def load_lexicon(
    lemmas: str | Path | IO[str] | None = None,
    stopwords: str | Path | IO[str] | None = None,
    synonyms: str | Path | IO[str] | None = None,
) -> Lexicon:
    """Build a Lexicon from the three flat files; any of them may be omitted."""
    try:
        return Lexicon(
            lemma_table=load_lemma_table(lemmas) if lemmas is not None else None,
            stopwords=load_stopwords(stopwords) if stopwords is not None else None,
            synonym_groups=load_synonym_groups(synonyms) if synonyms is not None else None,
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
