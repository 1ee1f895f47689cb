"""Replay annotated query logs and measure retrieval accuracy.

Log format: UTF-8 JSON Lines, one record per query:

    {"text": "nosocomi pediatrici a Torino",
     "concepts": ["Ospedale"],
     "qualifiers": [["pediatrico"], ["infantile"]],
     "items": ["h-regina-margherita"],
     "viewport": [7.57, 45.0, 7.78, 45.14],   # optional
     "selected": ["ParcoUrbano"]}             # optional scripted choice

Records that reference unknown concepts or items are kept in the log but
flagged and excluded from every aggregate, as are queries that end in a
disambiguation request without a scripted `selected` choice.

Precision and recall are macro-averaged over queries; the reported standard
deviation is the population standard deviation of the per-query values.
Edge conventions: precision is 1.0 whenever nothing is returned (no false
positives were produced, including the empty/empty case) and 0.0 when items
are returned against an empty gold set; recall is 1.0 for an empty gold set.
"""

from __future__ import annotations

import json
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from .engine import SearchEngine
from .errors import FormatError
from .geo import BoundingBox
from .interpreter import Disambiguation, NoMatch, Results

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class AnnotatedQuery:
    text: str
    gold_concepts: frozenset[str]
    gold_qualifiers: tuple[tuple[str, ...], ...]
    gold_items: frozenset[str]
    viewport: BoundingBox | None = None
    selected: frozenset[str] | None = None
    line: int = 0


@dataclass(frozen=True, slots=True)
class QueryMetrics:
    text: str
    precision: float
    recall: float
    f1: float
    returned: tuple[str, ...]
    gold: tuple[str, ...]
    has_qualifiers: bool
    concepts: frozenset[str]


@dataclass(frozen=True, slots=True)
class GroupRow:
    label: str
    count: int
    precision: float
    recall: float
    f1: float
    std_precision: float
    std_recall: float


@dataclass(frozen=True, slots=True)
class ConceptRow:
    concept_id: str
    count: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True, slots=True)
class EvalReport:
    per_query: tuple[QueryMetrics, ...]
    by_type: tuple[GroupRow, ...]
    by_concept: tuple[ConceptRow, ...]
    flagged: tuple[tuple[str, str], ...] = ()

    @property
    def overall(self) -> GroupRow:
        return self.by_type[-1]

    def to_dict(self) -> dict:
        return {
            "per_query": [
                {
                    "text": q.text,
                    "precision": q.precision,
                    "recall": q.recall,
                    "f1": q.f1,
                    "returned": list(q.returned),
                    "gold": list(q.gold),
                }
                for q in self.per_query
            ],
            "by_type": [
                {
                    "label": row.label,
                    "queries": row.count,
                    "precision": row.precision,
                    "recall": row.recall,
                    "f1": row.f1,
                    "std_precision": row.std_precision,
                    "std_recall": row.std_recall,
                }
                for row in self.by_type
            ],
            "by_concept": [
                {
                    "concept": row.concept_id,
                    "queries": row.count,
                    "precision": row.precision,
                    "recall": row.recall,
                    "f1": row.f1,
                }
                for row in self.by_concept
            ],
            "flagged": [{"text": text, "reason": reason} for text, reason in self.flagged],
        }

    def to_text(self) -> str:
        lines = []
        header = f"{'Type of queries':<24}{'N':>5}  {'Prec':>6}{'Rec':>7}{'F1':>7}{'Std.P':>8}{'Std.R':>8}"
        lines.append(header)
        lines.append("-" * len(header))
        for row in self.by_type:
            if row.count == 0:
                continue
            lines.append(
                f"{row.label:<24}{row.count:>5}  {row.precision:>6.2f}{row.recall:>7.2f}"
                f"{row.f1:>7.2f}{row.std_precision:>8.2f}{row.std_recall:>8.2f}"
            )
        if self.by_concept:
            lines.append("")
            header2 = f"{'Concept':<24}{'N':>5}  {'Prec':>6}{'Rec':>7}{'F1':>7}"
            lines.append(header2)
            lines.append("-" * len(header2))
            for crow in self.by_concept:
                lines.append(
                    f"{crow.concept_id:<24}{crow.count:>5}  {crow.precision:>6.2f}"
                    f"{crow.recall:>7.2f}{crow.f1:>7.2f}"
                )
        if self.flagged:
            lines.append("")
            lines.append(f"Flagged ({len(self.flagged)} excluded from aggregates):")
            for text, reason in self.flagged:
                lines.append(f"  {text!r}: {reason}")
        return "\n".join(lines) + "\n"


def _parse_record(record: dict, lineno: int, source: str) -> AnnotatedQuery:
    def fail(message: str):
        raise FormatError(message, line=lineno, source=source)

    if not isinstance(record, dict):
        fail("log record must be an object")
    if not isinstance(record.get("text"), str) or not record["text"].strip():
        fail("missing or empty 'text'")
    for key in ("concepts", "items"):
        value = record.get(key, [])
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            fail(f"{key!r} must be a list of strings")
    qualifiers = record.get("qualifiers", [])
    if not isinstance(qualifiers, list) or any(
        not isinstance(q, list) or not q or any(not isinstance(t, str) for t in q) for q in qualifiers
    ):
        fail("'qualifiers' must be a list of non-empty string lists")
    viewport = None
    if record.get("viewport") is not None:
        try:
            viewport = BoundingBox.from_sequence(record["viewport"])
        except (TypeError, ValueError) as exc:
            fail(f"invalid viewport: {exc}")
    selected = None
    if record.get("selected") is not None:
        if not isinstance(record["selected"], list):
            fail("'selected' must be a list of concept ids")
        selected = frozenset(record["selected"])
    return AnnotatedQuery(
        text=record["text"],
        gold_concepts=frozenset(record.get("concepts", [])),
        gold_qualifiers=tuple(tuple(q) for q in qualifiers),
        gold_items=frozenset(record.get("items", [])),
        viewport=viewport,
        selected=selected,
        line=lineno,
    )


def load_log(source: str | Path | IO[str]) -> list[AnnotatedQuery]:
    """Parse an annotated query log; raises FormatError with line numbers."""
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        name = getattr(source, "name", "<stream>")
        lines = source.readlines()
    records = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", line=lineno, source=name) from exc
        records.append(_parse_record(payload, lineno, name))
    return records


def _precision_recall_f1(returned: frozenset[str], gold: frozenset[str]) -> tuple[float, float, float]:
    hits = len(returned & gold)
    if not returned:
        precision = 1.0
    else:
        precision = hits / len(returned)
    recall = 1.0 if not gold else hits / len(gold)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def _group_row(label: str, metrics: Sequence[QueryMetrics]) -> GroupRow:
    if not metrics:
        return GroupRow(label, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    precisions = [m.precision for m in metrics]
    recalls = [m.recall for m in metrics]
    return GroupRow(
        label=label,
        count=len(metrics),
        precision=statistics.fmean(precisions),
        recall=statistics.fmean(recalls),
        f1=statistics.fmean(m.f1 for m in metrics),
        std_precision=statistics.pstdev(precisions),
        std_recall=statistics.pstdev(recalls),
    )


class Evaluator:
    """Runs an annotated log through a SearchEngine and aggregates accuracy."""

    def __init__(self, engine: SearchEngine):
        self._engine = engine

    def validate(self, record: AnnotatedQuery) -> str | None:
        """Reason the record cannot be scored, or None when it can."""
        unknown_concepts = [c for c in record.gold_concepts if c not in self._engine.ontology]
        if unknown_concepts:
            return f"unknown concepts {sorted(unknown_concepts)}"
        if record.selected:
            unknown_selected = [c for c in record.selected if c not in self._engine.ontology]
            if unknown_selected:
                return f"unknown selected concepts {sorted(unknown_selected)}"
        unknown_items = [i for i in record.gold_items if i not in self._engine.store]
        if unknown_items:
            return f"unknown items {sorted(unknown_items)}"
        return None

    def run_query(self, record: AnnotatedQuery) -> tuple[frozenset[str], str | None]:
        """Returned item ids for one record, or a flag reason.

        The scripted `selected` choice is applied only when the first pass
        asks for disambiguation.
        """
        result = self._engine.search(record.text, viewport=record.viewport)
        if isinstance(result.outcome, Disambiguation):
            if not record.selected:
                return frozenset(), "needs disambiguation but no 'selected' scripted"
            result = self._engine.search(record.text, viewport=record.viewport, selected=record.selected)
        if isinstance(result.outcome, NoMatch):
            return frozenset(), None
        assert isinstance(result.outcome, Results)
        return frozenset(item.id for item in result.items), None

    def evaluate(self, log: Sequence[AnnotatedQuery]) -> EvalReport:
        per_query: list[QueryMetrics] = []
        flagged: list[tuple[str, str]] = []
        for record in log:
            reason = self.validate(record)
            if reason is None:
                returned, reason = self.run_query(record)
            if reason is not None:
                logger.warning("log line %d (%r) excluded: %s", record.line, record.text, reason)
                flagged.append((record.text, reason))
                continue
            precision, recall, f1 = _precision_recall_f1(returned, record.gold_items)
            per_query.append(
                QueryMetrics(
                    text=record.text,
                    precision=precision,
                    recall=recall,
                    f1=f1,
                    returned=tuple(sorted(returned)),
                    gold=tuple(sorted(record.gold_items)),
                    has_qualifiers=bool(record.gold_qualifiers),
                    concepts=record.gold_concepts,
                )
            )

        only_concepts = [m for m in per_query if not m.has_qualifiers]
        with_qualifiers = [m for m in per_query if m.has_qualifiers]
        by_type = (
            _group_row("Only concepts", only_concepts),
            _group_row("Concepts + qualifiers", with_qualifiers),
            _group_row("All queries", per_query),
        )

        per_concept: dict[str, list[QueryMetrics]] = {}
        for m in per_query:
            for concept_id in m.concepts:
                per_concept.setdefault(concept_id, []).append(m)
        concept_rows = tuple(
            ConceptRow(
                concept_id=concept_id,
                count=len(ms),
                precision=statistics.fmean(x.precision for x in ms),
                recall=statistics.fmean(x.recall for x in ms),
                f1=statistics.fmean(x.f1 for x in ms),
            )
            for concept_id, ms in sorted(per_concept.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        )
        return EvalReport(
            per_query=tuple(per_query),
            by_type=by_type,
            by_concept=concept_rows,
            flagged=tuple(flagged),
        )
