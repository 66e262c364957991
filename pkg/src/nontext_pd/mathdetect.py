"""Math-based detection: feature-frequency histograms, Histo, LCIS, GIT,
and character-based document partitioning."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from . import seqmatch
from .docmodel import DocumentRecord
from .errors import BelowIdentifierFloor, BothEmpty, DocumentTooShort
from .seqmatch import Tile

FEATURE_TYPES = ("ci", "cn", "co")

IDENTIFIER_FLOOR = 20
GIT_MIN_TILE = 5
PARTITION_COUNT = 5
PARTITION_OVERLAP_FRACTION = 0.25


@dataclass(frozen=True)
class FeatureDescriptor:
    """Occurrence histogram for one feature type (identifiers ci, numbers cn,
    operators co)."""

    feature_type: str
    freq: dict

    def __post_init__(self):
        if self.feature_type not in FEATURE_TYPES:
            raise ValueError(f"unknown feature type '{self.feature_type}'")
        for token, count in self.freq.items():
            if not token or count < 1:
                raise ValueError("tokens must be nonempty with positive counts")

    @property
    def total(self) -> int:
        return sum(self.freq.values())


def descriptor(feature_type: str, tokens: Sequence[str]) -> FeatureDescriptor:
    return FeatureDescriptor(feature_type=feature_type, freq=dict(Counter(tokens)))


def descriptors_for(doc_or_tokens) -> dict[str, FeatureDescriptor]:
    """Per-type descriptors for a document (ci/cn/co)."""
    doc = doc_or_tokens
    return {
        "ci": descriptor("ci", doc.identifiers),
        "cn": descriptor("cn", doc.numbers),
        "co": descriptor("co", doc.operators),
    }


def feature_distance(k1: FeatureDescriptor, k2: FeatureDescriptor) -> float:
    """Relative occurrence-frequency difference over the union of tokens.

    Sum of absolute count differences divided by the sum of the larger counts;
    0 iff the histograms are identical, 1 iff their supports are disjoint.
    """
    if k1.feature_type != k2.feature_type:
        raise ValueError("descriptors must share a feature type")
    if not k1.freq and not k2.freq:
        raise BothEmpty(f"no '{k1.feature_type}' tokens on either side")
    num = 0
    den = 0
    for token in set(k1.freq) | set(k2.freq):
        f1 = k1.freq.get(token, 0)
        f2 = k2.freq.get(token, 0)
        num += abs(f1 - f2)
        den += max(f1, f2)
    return num / den


def aggregated_distance(
    desc_a: dict[str, FeatureDescriptor], desc_b: dict[str, FeatureDescriptor]
) -> float:
    """Sum of per-type distances; types empty on both sides contribute 0."""
    total = 0.0
    for ft in FEATURE_TYPES:
        k1 = desc_a.get(ft)
        k2 = desc_b.get(ft)
        if k1 is None or k2 is None or (not k1.freq and not k2.freq):
            continue
        total += feature_distance(k1, k2)
    return total


def shared_identifier_occurrences(doc_a: DocumentRecord, doc_b: DocumentRecord) -> int:
    """Identifier-floor metric: the smaller of the two documents' occurrence
    totals over the mutually present identifiers."""
    ca = Counter(doc_a.identifiers)
    cb = Counter(doc_b.identifiers)
    shared = set(ca) & set(cb)
    if not shared:
        return 0
    return min(sum(ca[t] for t in shared), sum(cb[t] for t in shared))


def _check_floor(doc_a: DocumentRecord, doc_b: DocumentRecord, floor: int) -> None:
    overlap = shared_identifier_occurrences(doc_a, doc_b)
    if overlap < floor:
        raise BelowIdentifierFloor(
            f"pair shares {overlap} identifier occurrences; floor is {floor}"
        )


def histo_similarity(
    doc_a: DocumentRecord, doc_b: DocumentRecord, floor: int = IDENTIFIER_FLOOR
) -> float:
    """Global identifier overlap: 1 minus the histogram distance of the
    identifier frequency descriptors."""
    _check_floor(doc_a, doc_b, floor)
    d = feature_distance(
        descriptor("ci", doc_a.identifiers), descriptor("ci", doc_b.identifiers)
    )
    return 1.0 - d


def lcis_score(
    doc_a: DocumentRecord, doc_b: DocumentRecord, floor: int = IDENTIFIER_FLOOR
) -> float:
    """Longest common identifier subsequence length over doc_a's identifier
    count (doc_a is the suspicious side)."""
    _check_floor(doc_a, doc_b, floor)
    total = len(doc_a.identifiers)
    if total == 0:
        return 0.0
    return seqmatch.lcs_length(doc_a.identifiers, doc_b.identifiers) / total


def git_score(
    doc_a: DocumentRecord,
    doc_b: DocumentRecord,
    min_tile: int = GIT_MIN_TILE,
    floor: int = IDENTIFIER_FLOOR,
) -> float:
    """Identifiers of doc_a inside greedy tiles of at least min_tile matching
    identifiers, over doc_a's identifier count."""
    _check_floor(doc_a, doc_b, floor)
    total = len(doc_a.identifiers)
    if total == 0:
        return 0.0
    tiles = seqmatch.greedy_tiles(doc_a.identifiers, doc_b.identifiers, min_tile_len=min_tile)
    return sum(t.l for t in tiles) / total


def git_tiles(
    doc_a: DocumentRecord, doc_b: DocumentRecord, min_tile: int = GIT_MIN_TILE
) -> list[Tile]:
    return seqmatch.greedy_tiles(doc_a.identifiers, doc_b.identifiers, min_tile_len=min_tile)


@dataclass(frozen=True)
class Partition:
    """One of five character partitions, extended by the overlap fraction of
    the base partition length on each interior side."""

    index: int
    char_range: tuple[int, int]
    descriptors: dict
    identifier_subsequence: tuple[str, ...]


def _partition_ranges(length: int) -> list[tuple[int, int]]:
    base = math.ceil(length / PARTITION_COUNT)
    ext = int(base * PARTITION_OVERLAP_FRACTION)
    ranges = []
    for i in range(PARTITION_COUNT):
        start = i * base
        end = min((i + 1) * base, length)
        if i > 0:
            start = max(0, start - ext)
        if i < PARTITION_COUNT - 1:
            end = min(length, end + ext)
        ranges.append((start, end))
    return ranges


def _tokens_in_range(tokens: Sequence[str], length: int, rng: tuple[int, int]) -> list[str]:
    # tokens carry no char offsets in the normalized format; approximate each
    # token's position as uniformly spaced over the text (midpoint rule)
    if not tokens:
        return []
    out = []
    n = len(tokens)
    for k, tok in enumerate(tokens):
        pos = (k + 0.5) * length / n
        if rng[0] <= pos < rng[1]:
            out.append(tok)
    return out


def partition_document(doc: DocumentRecord) -> list[Partition]:
    """Split a document into five equal character partitions with 25% overlap
    added toward each existing neighbor."""
    length = len(doc.text)
    if length < PARTITION_COUNT:
        raise DocumentTooShort(f"text of {length} chars cannot form 5 partitions")
    parts = []
    for i, rng in enumerate(_partition_ranges(length)):
        ids = _tokens_in_range(doc.identifiers, length, rng)
        nums = _tokens_in_range(doc.numbers, length, rng)
        ops = _tokens_in_range(doc.operators, length, rng)
        parts.append(
            Partition(
                index=i,
                char_range=rng,
                descriptors={
                    "ci": descriptor("ci", ids),
                    "cn": descriptor("cn", nums),
                    "co": descriptor("co", ops),
                },
                identifier_subsequence=tuple(ids),
            )
        )
    return parts


@dataclass(frozen=True)
class PartitionPairDistance:
    distance: float
    index_a: int
    index_b: int
    matrix: tuple


def partition_pair_distance(
    doc_a: DocumentRecord, doc_b: DocumentRecord, measure: str = "combined"
) -> PartitionPairDistance:
    """Minimum distance over the 5x5 partition pairs.

    measure: one feature type (``ci``/``cn``/``co``, using the plain histogram
    distance) or ``combined`` (the aggregated distance over all types).
    Partition pairs where the requested type is empty on both sides are
    skipped; if every pair is skipped, BothEmpty propagates.
    """
    parts_a = partition_document(doc_a)
    parts_b = partition_document(doc_b)
    best: Optional[tuple[float, int, int]] = None
    matrix = []
    last_error: Optional[BothEmpty] = None
    for pa in parts_a:
        row = []
        for pb in parts_b:
            try:
                if measure == "combined":
                    d = aggregated_distance(pa.descriptors, pb.descriptors)
                else:
                    d = feature_distance(pa.descriptors[measure], pb.descriptors[measure])
            except BothEmpty as exc:
                last_error = exc
                row.append(None)
                continue
            row.append(d)
            if best is None or (d, pa.index, pb.index) < best:
                best = (d, pa.index, pb.index)
        matrix.append(tuple(row))
    if best is None:
        raise last_error if last_error is not None else BothEmpty("no feature tokens")
    return PartitionPairDistance(
        distance=best[0], index_a=best[1], index_b=best[2], matrix=tuple(matrix)
    )
