"""Citation-based plagiarism detection.

Implements Bibliographic Coupling, Longest Common Citation Sequence (plain
and distinct), Greedy Citation Tiling, and Citation Chunking with optional
merging and two chunk-comparison strategies. The first document of every
pair is the suspicious one; normalized scores divide by its features.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import seqmatch
from .docmodel import DocumentRecord, citation_sequence, tokenize_text
from .errors import RelUndefined, UnitUnavailable
from .seqmatch import Tile

CITATION_METHODS = ("bc_abs", "bc_rel", "lccs", "lccs_distinct", "max_gct", "cc_bcn", "cc_bpn")

CHUNK_UNITS = ("chars", "words", "sentences", "paragraphs")

_UNIT_FIELDS = {
    "chars": "char_offset",
    "words": "word_index",
    "sentences": "sentence_index",
    "paragraphs": "paragraph_index",
}


@dataclass(frozen=True)
class Chunk:
    """Contiguous slice of one document's citation sequence treated as one
    order-agnostic comparison unit. members holds the shared ref_keys inside
    the span as a sorted multiset; span_units counts all citations inside the
    span, shared and non-shared."""

    doc_side: str
    start_index: int
    end_index: int
    members: tuple[str, ...]
    span_units: int

    @property
    def shared_count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ChunkMatch:
    chunk_a: Chunk
    chunk_b: Chunk
    overlap: int


@dataclass(frozen=True)
class BcStrength:
    absolute: int
    relative: Optional[float]


def bibliographic_coupling(
    doc_a: DocumentRecord, doc_b: DocumentRecord, normalizer: str = "min"
) -> BcStrength:
    """Shared-reference count, absolute and relative.

    The relative strength divides by the smaller bibliography (``min``);
    ``query`` divides by doc_a's bibliography, ``jaccard`` by the union.
    Relative is None when either bibliography is empty.
    """
    refs_a = {r.ref_key for r in doc_a.references}
    refs_b = {r.ref_key for r in doc_b.references}
    absolute = len(refs_a & refs_b)
    if not refs_a or not refs_b:
        return BcStrength(absolute=absolute, relative=None)
    if normalizer == "min":
        denom = min(len(refs_a), len(refs_b))
    elif normalizer == "query":
        denom = len(refs_a)
    elif normalizer == "jaccard":
        denom = len(refs_a | refs_b)
    else:
        raise ValueError(f"unknown bc normalizer '{normalizer}'")
    return BcStrength(absolute=absolute, relative=absolute / denom)


@dataclass(frozen=True)
class LccsResult:
    length: int
    index_pairs: tuple[tuple[int, int], ...]


def lccs(seq_a: Sequence[str], seq_b: Sequence[str], distinct: bool = False) -> LccsResult:
    """Longest common subsequence of two citation sequences.

    With ``distinct``, only the first occurrence of each ref_key inside the
    computed subsequence is kept (applied globally over the whole LCCS).
    """
    pairs = seqmatch.lcs_pairs(seq_a, seq_b)
    if distinct:
        seen: set[str] = set()
        kept = []
        for i, j in pairs:
            key = seq_a[i]
            if key not in seen:
                seen.add(key)
                kept.append((i, j))
        pairs = kept
    return LccsResult(length=len(pairs), index_pairs=tuple(pairs))


def greedy_citation_tiling(
    seq_a: Sequence[str], seq_b: Sequence[str], min_tile_len: int = 1
) -> list[Tile]:
    if min_tile_len < 1:
        raise ValueError("min_tile_len must be >= 1")
    return seqmatch.greedy_tiles(seq_a, seq_b, min_tile_len)


def _shared_keys(seq_a: Sequence[str], seq_b: Sequence[str]) -> set[str]:
    return set(seq_a) & set(seq_b)


def _make_chunk(side: str, seq: Sequence[str], start: int, end: int, shared: set[str]) -> Chunk:
    members = tuple(sorted(k for k in seq[start : end + 1] if k in shared))
    return Chunk(
        doc_side=side,
        start_index=start,
        end_index=end,
        members=members,
        span_units=end - start + 1,
    )


def _consecutive_runs(seq: Sequence[str], shared: set[str]) -> list[tuple[int, int]]:
    """Maximal intervals consisting entirely of shared citations."""
    runs = []
    start = None
    for i, key in enumerate(seq):
        if key in shared:
            if start is None:
                start = i
        elif start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(seq) - 1))
    return runs


def _chunks_consecutive(
    seq_a: Sequence[str], seq_b: Sequence[str], shared: set[str]
) -> tuple[list[Chunk], list[Chunk]]:
    """Chunks of shared citations consecutive in BOTH documents.

    Within one chunk pair the citations may appear in different order; the
    pairing requires equal key multisets. Greedy: for the leftmost unconsumed
    window in A, longest window first, take the leftmost matching B window.
    """
    runs_a = _consecutive_runs(seq_a, shared)
    runs_b = _consecutive_runs(seq_b, shared)
    free_b = [True] * len(seq_b)
    chunks_a: list[Chunk] = []
    chunks_b: list[Chunk] = []
    for ra_start, ra_end in runs_a:
        pos = ra_start
        while pos <= ra_end:
            placed = False
            for length in range(ra_end - pos + 1, 0, -1):
                window = Counter(seq_a[pos : pos + length])
                hit = _find_b_window(seq_b, runs_b, free_b, window, length)
                if hit is not None:
                    j = hit
                    chunks_a.append(_make_chunk("a", seq_a, pos, pos + length - 1, shared))
                    chunks_b.append(_make_chunk("b", seq_b, j, j + length - 1, shared))
                    for k in range(j, j + length):
                        free_b[k] = False
                    pos += length
                    placed = True
                    break
            if not placed:
                pos += 1
    chunks_b.sort(key=lambda c: c.start_index)
    return chunks_a, chunks_b


def _find_b_window(
    seq_b: Sequence[str],
    runs_b: list[tuple[int, int]],
    free_b: list[bool],
    window: Counter,
    length: int,
) -> Optional[int]:
    for rb_start, rb_end in runs_b:
        for j in range(rb_start, rb_end - length + 2):
            if not all(free_b[j : j + length]):
                continue
            if Counter(seq_b[j : j + length]) == window:
                return j
    return None


def _chunks_prior_dependent(seq: Sequence[str], shared: set[str], side: str) -> list[Chunk]:
    """One side's chunks under the prior-chunk rule: the next shared citation
    joins the current chunk iff the count of non-shared citations separating
    it from the chunk is smaller than the citations (shared and non-shared)
    the chunk already contains. The counter resets for every new chunk."""
    positions = [i for i, k in enumerate(seq) if k in shared]
    chunks: list[Chunk] = []
    idx = 0
    while idx < len(positions):
        start = positions[idx]
        end = start
        idx += 1
        while idx < len(positions):
            nxt = positions[idx]
            gap = nxt - end - 1
            if gap < (end - start + 1):
                end = nxt
                idx += 1
            else:
                break
        chunks.append(_make_chunk(side, seq, start, end, shared))
    return chunks


def _chunks_textual_range(
    doc: DocumentRecord, shared: set[str], side: str, unit: str, max_distance: float
) -> list[Chunk]:
    """One side's chunks grouping shared citations whose pairwise distance in
    the chosen text unit stays within max_distance (sliding window)."""
    if unit not in _UNIT_FIELDS:
        raise ValueError(f"unknown unit '{unit}'")
    field_name = _UNIT_FIELDS[unit]
    seq = citation_sequence(doc)
    marks = doc.citations
    positions = []
    for i, key in enumerate(seq):
        if key not in shared:
            continue
        value = getattr(marks[i], field_name)
        if value is None:
            raise UnitUnavailable(f"{doc.doc_id}: citations lack {field_name}")
        positions.append((i, value))
    chunks: list[Chunk] = []
    idx = 0
    while idx < len(positions):
        start_i, prev_pos = positions[idx]
        end_i = start_i
        idx += 1
        while idx < len(positions):
            i, pos = positions[idx]
            if pos - prev_pos <= max_distance:
                end_i = i
                prev_pos = pos
                idx += 1
            else:
                break
        chunks.append(_make_chunk(side, seq, start_i, end_i, shared))
    return chunks


def default_textual_range(docs: Sequence[DocumentRecord], unit: str) -> float:
    """Default proximity threshold: the mean number of subordinate units per
    paragraph across the given documents (1 for the paragraph unit)."""
    if unit == "paragraphs":
        return 1.0
    totals = 0.0
    paras = 0.0
    for doc in docs:
        n_paras = doc.text.count("\n\n") + 1 if doc.text else 1
        if unit == "chars":
            totals += len(doc.text)
        elif unit == "words":
            totals += len(tokenize_text(doc))
        elif unit == "sentences":
            import re

            totals += len([s for s in re.split(r"[.!?]+", doc.text) if s.strip()])
        else:
            raise ValueError(f"unknown unit '{unit}'")
        paras += n_paras
    if paras == 0:
        return 1.0
    return totals / paras


def form_chunks(
    strategy: str,
    doc_a: DocumentRecord,
    doc_b: DocumentRecord,
    unit: str = "words",
    max_distance: float | None = None,
) -> tuple[list[Chunk], list[Chunk]]:
    """Form citation chunks on both sides.

    strategy: ``consecutive`` (shared citations consecutive in both
    documents), ``prior_dependent`` (gap allowance grows with the chunk), or
    ``textual_range`` (proximity in a chosen text unit; ``max_distance``
    defaults to the mean subordinate-units-per-paragraph of the pair).
    """
    seq_a = citation_sequence(doc_a)
    seq_b = citation_sequence(doc_b)
    shared = _shared_keys(seq_a, seq_b)
    if not shared:
        return [], []
    if strategy == "consecutive":
        return _chunks_consecutive(seq_a, seq_b, shared)
    if strategy == "prior_dependent":
        return (
            _chunks_prior_dependent(seq_a, shared, "a"),
            _chunks_prior_dependent(seq_b, shared, "b"),
        )
    if strategy == "textual_range":
        if max_distance is None:
            max_distance = default_textual_range([doc_a, doc_b], unit)
        return (
            _chunks_textual_range(doc_a, shared, "a", unit, max_distance),
            _chunks_textual_range(doc_b, shared, "b", unit, max_distance),
        )
    raise ValueError(f"unknown chunking strategy '{strategy}'")


def merge_chunks(chunks: list[Chunk], seq: Sequence[str], shared: set[str]) -> list[Chunk]:
    """Merge neighboring chunks while the number of non-shared citations
    between them is at most the shared count of the left chunk; repeats until
    a fixpoint is reached."""
    merged = sorted(chunks, key=lambda c: c.start_index)
    changed = True
    while changed:
        changed = False
        out: list[Chunk] = []
        i = 0
        while i < len(merged):
            current = merged[i]
            while i + 1 < len(merged):
                nxt = merged[i + 1]
                between = seq[current.end_index + 1 : nxt.start_index]
                non_shared = sum(1 for k in between if k not in shared)
                if non_shared <= current.shared_count:
                    current = Chunk(
                        doc_side=current.doc_side,
                        start_index=current.start_index,
                        end_index=nxt.end_index,
                        members=tuple(sorted(current.members + nxt.members)),
                        span_units=nxt.end_index - current.start_index + 1,
                    )
                    i += 1
                    changed = True
                else:
                    break
            out.append(current)
            i += 1
        merged = out
    return merged


def _overlap(members_a: Sequence[str], members_b: Sequence[str]) -> int:
    return sum((Counter(members_a) & Counter(members_b)).values())


def compare_chunks(
    strategy: str,
    chunks_a: list[Chunk],
    doc_b_chunks_or_seq: list[Chunk] | Sequence[str],
    shared: set[str] | None = None,
) -> list[ChunkMatch]:
    """Match A-chunks against B, order-agnostic.

    ``both_chunked`` compares every A-chunk with every B-chunk and keeps all
    co-maximal matches per A-chunk. ``sliding`` slides each A-chunk over the
    whole B citation sequence and keeps the leftmost window of the chunk's
    span width with maximal overlap.
    """
    matches: list[ChunkMatch] = []
    if strategy == "both_chunked":
        chunks_b: list[Chunk] = doc_b_chunks_or_seq  # type: ignore[assignment]
        for ca in chunks_a:
            best = 0
            found: list[ChunkMatch] = []
            for cb in chunks_b:
                ov = _overlap(ca.members, cb.members)
                if ov < 1:
                    continue
                if ov > best:
                    best = ov
                    found = [ChunkMatch(ca, cb, ov)]
                elif ov == best:
                    found.append(ChunkMatch(ca, cb, ov))
            matches.extend(found)
        return matches
    if strategy == "sliding":
        seq_b: Sequence[str] = doc_b_chunks_or_seq  # type: ignore[assignment]
        if shared is None:
            shared = set(seq_b)
        for ca in chunks_a:
            width = ca.span_units
            if width > len(seq_b) or width == 0:
                continue
            counts = Counter(ca.members)
            best = 0
            best_j = None
            window = Counter(seq_b[:width])
            ov = sum((counts & window).values())
            if ov > best:
                best, best_j = ov, 0
            for j in range(1, len(seq_b) - width + 1):
                out_key, in_key = seq_b[j - 1], seq_b[j + width - 1]
                window[out_key] -= 1
                if window[out_key] == 0:
                    del window[out_key]
                window[in_key] += 1
                ov = sum((counts & window).values())
                if ov > best:
                    best, best_j = ov, j
            if best >= 1 and best_j is not None:
                cb = _make_chunk("b", seq_b, best_j, best_j + width - 1, shared)
                matches.append(ChunkMatch(ca, cb, best))
        return matches
    raise ValueError(f"unknown comparison strategy '{strategy}'")


@dataclass(frozen=True)
class MethodOutcome:
    score: float
    raw: float
    evidence: object = None


def citation_method_score(
    method: str, doc_a: DocumentRecord, doc_b: DocumentRecord
) -> MethodOutcome:
    """Score one citation method for a document pair.

    Normalized scores divide by doc_a's citation sequence length (doc_a is the
    suspicious side); bc_rel divides by the smaller bibliography. Empty
    citation sequences yield score 0 except bc_rel, which reports an error
    for empty bibliographies.
    """
    if method not in CITATION_METHODS:
        raise ValueError(f"unknown citation method '{method}'")
    seq_a = citation_sequence(doc_a)
    seq_b = citation_sequence(doc_b)
    if method == "bc_abs":
        bc = bibliographic_coupling(doc_a, doc_b)
        return MethodOutcome(score=float(bc.absolute), raw=float(bc.absolute))
    if method == "bc_rel":
        bc = bibliographic_coupling(doc_a, doc_b)
        if bc.relative is None:
            raise RelUndefined("relative coupling undefined: empty bibliography")
        return MethodOutcome(score=bc.relative, raw=float(bc.absolute))
    if not seq_a or not seq_b:
        return MethodOutcome(score=0.0, raw=0.0)
    denom = len(seq_a)
    if method in ("lccs", "lccs_distinct"):
        res = lccs(seq_a, seq_b, distinct=method == "lccs_distinct")
        return MethodOutcome(score=res.length / denom, raw=float(res.length), evidence=res)
    if method == "max_gct":
        tiles = greedy_citation_tiling(seq_a, seq_b, min_tile_len=1)
        longest = max((t.l for t in tiles), default=0)
        return MethodOutcome(score=longest / denom, raw=float(longest), evidence=tiles)
    if method in ("cc_bcn", "cc_bpn"):
        strategy = "consecutive" if method == "cc_bcn" else "prior_dependent"
        chunks_a, chunks_b = form_chunks(strategy, doc_a, doc_b)
        matches = compare_chunks("both_chunked", chunks_a, chunks_b)
        best = max((m.overlap for m in matches), default=0)
        return MethodOutcome(score=best / denom, raw=float(best), evidence=matches)
    raise AssertionError("unreachable")
