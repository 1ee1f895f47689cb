"""Bounding boxes and offline place-name resolution.

The gazetteer is a flat table mapping lowercase place names (possibly
multi-word) to WGS84 bounding boxes, loaded from a tab-separated file:

    name<TAB>min_lon<TAB>min_lat<TAB>max_lon<TAB>max_lat
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from .errors import FormatError, UnknownPlaceError

# Locative prepositions stripped when they immediately precede a place name.
DEFAULT_PREPOSITIONS = frozenset({"a", "in", "di", "presso"})

WORLD: "BoundingBox"


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """Axis-aligned WGS84 rectangle; edges are part of the box."""

    min_lon: float
    min_lat: float
    max_lon: float
    max_lat: float

    def __post_init__(self):
        if self.min_lon > self.max_lon or self.min_lat > self.max_lat:
            raise ValueError(f"inverted bounding box: {self.as_tuple()}")
        if not (-180.0 <= self.min_lon <= 180.0 and -180.0 <= self.max_lon <= 180.0):
            raise ValueError(f"longitude out of [-180, 180]: {self.as_tuple()}")
        if not (-90.0 <= self.min_lat <= 90.0 and -90.0 <= self.max_lat <= 90.0):
            raise ValueError(f"latitude out of [-90, 90]: {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.min_lon, self.min_lat, self.max_lon, self.max_lat)

    def intersects(self, other: "BoundingBox") -> bool:
        """Closed-interval rectangle overlap: shared edges count."""
        return (
            self.min_lon <= other.max_lon
            and other.min_lon <= self.max_lon
            and self.min_lat <= other.max_lat
            and other.min_lat <= self.max_lat
        )

    def contains(self, other: "BoundingBox") -> bool:
        return (
            self.min_lon <= other.min_lon
            and self.min_lat <= other.min_lat
            and self.max_lon >= other.max_lon
            and self.max_lat >= other.max_lat
        )

    def expanded(self, radius: float) -> "BoundingBox":
        """Grow the box by `radius` degrees on all sides, clamped to the globe."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        return BoundingBox(
            max(self.min_lon - radius, -180.0),
            max(self.min_lat - radius, -90.0),
            min(self.max_lon + radius, 180.0),
            min(self.max_lat + radius, 90.0),
        )

    @classmethod
    def from_sequence(cls, seq: Iterable[float]) -> "BoundingBox":
        values = [float(v) for v in seq]
        if len(values) != 4:
            raise ValueError(f"expected 4 numbers (min_lon, min_lat, max_lon, max_lat), got {len(values)}")
        return cls(*values)


WORLD = BoundingBox(-180.0, -90.0, 180.0, 90.0)


class Gazetteer:
    """Immutable place-name -> bounding-box table."""

    def __init__(self, entries: dict[str, BoundingBox]):
        for name in entries:
            if not name or name != name.lower():
                raise ValueError(f"gazetteer names must be lowercase and non-empty: {name!r}")
        self._entries = dict(entries)
        self._max_words = max((len(n.split()) for n in self._entries), default=0)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    @property
    def max_name_words(self) -> int:
        return self._max_words

    def resolve(self, place: str) -> BoundingBox:
        """Look up a lowercase place name; raises UnknownPlaceError on a miss."""
        try:
            return self._entries[place]
        except KeyError:
            raise UnknownPlaceError(f"unknown place: {place!r}") from None


def load_gazetteer(source: str | Path | IO[str]) -> Gazetteer:
    """Parse a gazetteer TSV file into a Gazetteer."""
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        name = getattr(source, "name", "<stream>")
        lines = source.readlines()
    entries: dict[str, BoundingBox] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise FormatError(f"expected 5 tab-separated fields, got {len(parts)}", line=lineno, source=name)
        try:
            box = BoundingBox(float(parts[1]), float(parts[2]), float(parts[3]), float(parts[4]))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno, source=name) from exc
        entries[parts[0].strip().lower()] = box
    return Gazetteer(entries)


def extract_geo_reference(
    tokens: list[str],
    gazetteer: Gazetteer,
    prepositions: frozenset[str] = DEFAULT_PREPOSITIONS,
) -> tuple[str | None, list[str]]:
    """Find and remove the geographic reference from a token list.

    The longest contiguous token run matching a gazetteer name wins; ties
    are broken by earliest start. A locative preposition immediately before
    the matched run is removed with it. Remaining tokens keep their order.
    """
    best: tuple[int, int] | None = None  # (start, length)
    max_len = min(len(tokens), gazetteer.max_name_words)
    for length in range(max_len, 0, -1):
        for start in range(0, len(tokens) - length + 1):
            if " ".join(tokens[start : start + length]) in gazetteer:
                best = (start, length)
                break
        if best is not None:
            break
    if best is None:
        return None, list(tokens)
    start, length = best
    place = " ".join(tokens[start : start + length])
    cut_from = start
    if start > 0 and tokens[start - 1] in prepositions:
        cut_from = start - 1
    remaining = tokens[:cut_from] + tokens[start + length :]
    return place, remaining
