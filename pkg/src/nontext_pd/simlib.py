"""Generic set-, sequence-, and vector-based similarity and distance measures.

Conventions for degenerate inputs (the literature is silent on them):
similarity-shaped measures return 1.0 when both inputs are empty, the
normalized Levenshtein distance returns 0.0, and containment of an empty
suspicious set is an error. This keeps NaN out of downstream pipelines.
"""

from __future__ import annotations

import math
from typing import Hashable, Sequence

from . import seqmatch
from .errors import (
    DimensionMismatch,
    EmptyDenominator,
    LengthMismatch,
    MeasureError,
    ZeroVector,
)

SET_MEASURES = ("jaccard", "dice", "containment", "overlap", "simple_matching")
SEQUENCE_MEASURES = ("norm_hamming", "norm_levenshtein", "norm_lcs")
VECTOR_MEASURES = ("euclidean", "minkowski", "manhattan", "canberra", "chebyshev")


def jaccard(A: set, B: set) -> float:
    if not A and not B:
        return 1.0
    return len(A & B) / len(A | B)


def dice(A: set, B: set) -> float:
    if not A and not B:
        return 1.0
    return 2 * len(A & B) / (len(A) + len(B))


def containment(A: set, B: set) -> float:
    """Intersection normalized by |A|; A is the suspicious side. Asymmetric."""
    if not A:
        raise EmptyDenominator("containment undefined for empty suspicious set")
    return len(A & B) / len(A)


def overlap(A: set, B: set) -> float:
    if not A and not B:
        return 1.0
    if not A or not B:
        return 0.0
    return len(A & B) / min(len(A), len(B))


def simple_matching(A: set, B: set, universe_size: int) -> float:
    """Counts mutual presence and mutual absence against a finite universe."""
    union = len(A | B)
    if universe_size < union:
        raise MeasureError("universe_size must cover A ∪ B")
    if universe_size == 0:
        return 1.0
    absent = universe_size - union
    return (len(A & B) + absent) / (union + absent)


def set_similarity(measure: str, A: set, B: set, universe_size: int | None = None) -> float:
    A, B = set(A), set(B)
    if measure == "jaccard":
        return jaccard(A, B)
    if measure == "dice":
        return dice(A, B)
    if measure == "containment":
        return containment(A, B)
    if measure == "overlap":
        return overlap(A, B)
    if measure == "simple_matching":
        if universe_size is None:
            raise MeasureError("simple_matching requires universe_size")
        return simple_matching(A, B, universe_size)
    raise MeasureError(f"unknown set measure '{measure}'")


def hamming_distance(a: Sequence, b: Sequence) -> int:
    if len(a) != len(b):
        raise LengthMismatch("hamming distance requires equal lengths")
    return sum(x != y for x, y in zip(a, b))


def norm_hamming(a: Sequence, b: Sequence) -> float:
    if len(a) != len(b):
        raise LengthMismatch("norm_hamming requires equal lengths")
    if not a:
        return 1.0
    return 1.0 - hamming_distance(a, b) / len(a)


def levenshtein_distance(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        curr = [i]
        for j, y in enumerate(b, 1):
            curr.append(min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = curr
    return prev[-1]


def norm_levenshtein(a: Sequence, b: Sequence) -> float:
    """Edit distance over |a|+|b|, exactly as commonly printed.

    Despite often being listed among similarity measures, this is a distance
    (0 = identical); no similarity transform is applied.
    """
    if not a and not b:
        return 0.0
    return levenshtein_distance(a, b) / (len(a) + len(b))


def norm_lcs(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """LCS length normalized by |a|, the suspicious-side sequence."""
    if not a:
        return 1.0 if not b else 0.0
    return seqmatch.lcs_length(a, b) / len(a)


def sequence_similarity(measure: str, a: Sequence, b: Sequence) -> float:
    if measure == "norm_hamming":
        return norm_hamming(a, b)
    if measure == "norm_levenshtein":
        return norm_levenshtein(a, b)
    if measure == "norm_lcs":
        return norm_lcs(a, b)
    raise MeasureError(f"unknown sequence measure '{measure}'")


def _check_dims(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimensions differ: {len(a)} vs {len(b)}")


def euclidean(a: Sequence[float], b: Sequence[float]) -> float:
    _check_dims(a, b)
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def minkowski(a: Sequence[float], b: Sequence[float], p: float) -> float:
    _check_dims(a, b)
    if p < 1:
        raise MeasureError("minkowski requires p >= 1")
    return sum(abs(x - y) ** p for x, y in zip(a, b)) ** (1.0 / p)


def manhattan(a: Sequence[float], b: Sequence[float]) -> float:
    _check_dims(a, b)
    return sum(abs(x - y) for x, y in zip(a, b))


def canberra(a: Sequence[float], b: Sequence[float], squared_numerator: bool = False) -> float:
    """Canberra distance with |a_i - b_i| numerators; 0/0 terms contribute 0.

    ``squared_numerator`` selects the (nonstandard) |a_i - b_i|^2 variant.
    """
    _check_dims(a, b)
    total = 0.0
    for x, y in zip(a, b):
        denom = abs(x + y)
        if denom == 0:
            continue
        num = (x - y) ** 2 if squared_numerator else abs(x - y)
        total += num / denom
    return total


def chebyshev(a: Sequence[float], b: Sequence[float]) -> float:
    _check_dims(a, b)
    if not a:
        return 0.0
    return max(abs(x - y) for x, y in zip(a, b))


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    _check_dims(a, b)
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0 or norm_b == 0:
        raise ZeroVector("cosine similarity undefined for zero vectors")
    return sum(x * y for x, y in zip(a, b)) / (norm_a * norm_b)


def vector_distance(
    measure: str, a: Sequence[float], b: Sequence[float], p: float | None = None
) -> float:
    if measure == "euclidean":
        return euclidean(a, b)
    if measure == "minkowski":
        if p is None:
            raise MeasureError("minkowski requires p")
        return minkowski(a, b, p)
    if measure == "manhattan":
        return manhattan(a, b)
    if measure == "canberra":
        return canberra(a, b)
    if measure == "chebyshev":
        return chebyshev(a, b)
    raise MeasureError(f"unknown vector measure '{measure}'")
