"""Lexical baselines: hashed word-n-gram fingerprinting, character-16-gram
matching, and exact repeated-substring extraction."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .docmodel import WordToken

DEFAULT_NGRAM_LEN = 3
DEFAULT_RETENTION_ZERO_BITS = 4  # keep ~1/16 of signatures
EXPERIMENT_RETENTION_ZERO_BITS = 3  # ~1/8, the finer-grained profile
GRAM_LEN = 16

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(data: str) -> int:
    """64-bit FNV-1a over the UTF-8 bytes; the fixed signature hash."""
    h = _FNV_OFFSET
    for byte in data.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


@dataclass(frozen=True)
class Fingerprint:
    """Sorted retained word-n-gram signatures of one document."""

    signatures: tuple[int, ...]
    ngram_len: int
    retention_zero_bits: int


@dataclass(frozen=True)
class MatchSpan:
    a_start: int
    a_end: int
    b_start: int
    b_end: int
    kind: str


def build_fingerprint(
    tokens: Sequence[WordToken | str],
    ngram_len: int = DEFAULT_NGRAM_LEN,
    retention_zero_bits: int = DEFAULT_RETENTION_ZERO_BITS,
) -> Fingerprint:
    """Hash every word n-gram and retain signatures whose low
    ``retention_zero_bits`` bits are all zero (on average 1 in 2^z).

    Retention depends only on the n-gram content, so identical token streams
    always produce identical fingerprints.
    """
    words = [t.text if isinstance(t, WordToken) else t.lower() for t in tokens]
    retained = []
    mask = (1 << retention_zero_bits) - 1
    for i in range(len(words) - ngram_len + 1):
        sig = fnv1a_64(" ".join(words[i : i + ngram_len]))
        if sig & mask == 0:
            retained.append(sig)
    retained.sort()
    return Fingerprint(
        signatures=tuple(retained),
        ngram_len=ngram_len,
        retention_zero_bits=retention_zero_bits,
    )


def fingerprint_similarity(fp1: Fingerprint, fp2: Fingerprint) -> float:
    """Similarity percentage 100*|m| / (|d1| + |d2| - |m|) with |m| the
    multiset signature intersection. Two empty fingerprints score 0."""
    if (fp1.ngram_len, fp1.retention_zero_bits) != (fp2.ngram_len, fp2.retention_zero_bits):
        raise ValueError("fingerprints built with different parameters")
    n1, n2 = len(fp1.signatures), len(fp2.signatures)
    if n1 == 0 and n2 == 0:
        return 0.0
    m = 0
    i = j = 0
    while i < n1 and j < n2:
        if fp1.signatures[i] == fp2.signatures[j]:
            m += 1
            i += 1
            j += 1
        elif fp1.signatures[i] < fp2.signatures[j]:
            i += 1
        else:
            j += 1
    return 100.0 * m / (n1 + n2 - m)


def _gram_positions(text: str) -> dict[str, list[int]]:
    grams: dict[str, list[int]] = {}
    for i in range(len(text) - GRAM_LEN + 1):
        grams.setdefault(text[i : i + GRAM_LEN], []).append(i)
    return grams


def encoplot_matches(
    text_a: str, text_b: str, lowercase: bool = True
) -> list[tuple[int, int]]:
    """Character 16-gram matches, pairing the k-th occurrence of a gram in A
    with its k-th occurrence in B; surplus occurrences stay unmatched.

    Operates on the raw (optionally lowercased) text including whitespace.
    Linear in the total 16-gram count.
    """
    if lowercase:
        text_a = text_a.lower()
        text_b = text_b.lower()
    if len(text_a) < GRAM_LEN or len(text_b) < GRAM_LEN:
        return []
    grams_a = _gram_positions(text_a)
    grams_b = _gram_positions(text_b)
    pairs: list[tuple[int, int]] = []
    for gram, pos_a in grams_a.items():
        pos_b = grams_b.get(gram)
        if pos_b is None:
            continue
        pairs.extend(zip(pos_a, pos_b))
    pairs.sort()
    return pairs


def encoplot_score(
    matches: Sequence[tuple[int, int]], text_a: str, text_b: str
) -> float:
    """Percentage of the shorter text's characters covered by at least one
    matched 16-gram."""
    len_a, len_b = len(text_a), len(text_b)
    shorter = min(len_a, len_b)
    if shorter == 0 or not matches:
        return 0.0
    side = 0 if len_a <= len_b else 1
    covered = bytearray(shorter)
    for pair in matches:
        start = pair[side]
        for k in range(start, min(start + GRAM_LEN, shorter)):
            covered[k] = 1
    return 100.0 * sum(covered) / shorter


def common_substrings(
    tokens_a: Sequence[WordToken],
    tokens_b: Sequence[WordToken],
    min_tokens: int = 6,
    min_chars: int = 12,
) -> list[MatchSpan]:
    """All maximal token-level common substrings with at least ``min_tokens``
    tokens totaling at least ``min_chars`` characters.

    Spans carry char offsets into the original texts. Maximal means the match
    cannot be extended by one token on either end.
    """
    words_a = [t.text for t in tokens_a]
    words_b = [t.text for t in tokens_b]
    positions_b: dict[str, list[int]] = {}
    for j, w in enumerate(words_b):
        positions_b.setdefault(w, []).append(j)
    spans = []
    n, m = len(words_a), len(words_b)
    for i, w in enumerate(words_a):
        for j in positions_b.get(w, ()):
            if i > 0 and j > 0 and words_a[i - 1] == words_b[j - 1]:
                continue  # not left-maximal; covered by an earlier start
            length = 0
            while i + length < n and j + length < m and words_a[i + length] == words_b[j + length]:
                length += 1
            if length < min_tokens:
                continue
            if sum(len(t) for t in words_a[i : i + length]) < min_chars:
                continue
            spans.append(
                MatchSpan(
                    a_start=tokens_a[i].start,
                    a_end=tokens_a[i + length - 1].end,
                    b_start=tokens_b[j].start,
                    b_end=tokens_b[j + length - 1].end,
                    kind="substring",
                )
            )
    spans.sort(key=lambda s: (s.a_start, s.b_start))
    return spans
