"""Evaluation metrics: character/case/document-level precision and recall,
granularity, the combined detection score, MRR, mid-ranks, and Fleiss' kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class PlagCase:
    """Ground-truth case: plagiarized span in d_plg paired with its source
    span in d_src. Spans are half-open char ranges (start, end)."""

    c_plg: tuple[int, int]
    d_plg: str
    c_src: tuple[int, int]
    d_src: str

    def __post_init__(self):
        for span in (self.c_plg, self.c_src):
            if span[1] <= span[0]:
                raise ValueError("spans must be nonempty")


@dataclass(frozen=True)
class Detection:
    """Reported detection: alleged plagiarized span plus alleged source."""

    x_plg: tuple[int, int]
    d_plg: str
    x_src: tuple[int, int]
    d_src: str

    def __post_init__(self):
        for span in (self.x_plg, self.x_src):
            if span[1] <= span[0]:
                raise ValueError("spans must be nonempty")


@dataclass(frozen=True)
class EvalThresholds:
    """tau1: minimum recall, tau2: minimum precision for case/doc true
    positives; both in (0, 1]."""

    tau1: float = 0.5
    tau2: float = 0.5

    def __post_init__(self):
        for t in (self.tau1, self.tau2):
            if not 0 < t <= 1:
                raise ValueError("thresholds must be in (0, 1]")


def _overlap_len(a: tuple[int, int], b: tuple[int, int]) -> int:
    return max(0, min(a[1], b[1]) - max(a[0], b[0]))


def _detects(x: Detection, c: PlagCase) -> bool:
    """x detects c iff both span intersections are nonempty and the alleged
    source document is the true source."""
    return (
        x.d_plg == c.d_plg
        and x.d_src == c.d_src
        and _overlap_len(x.x_plg, c.c_plg) > 0
        and _overlap_len(x.x_src, c.c_src) > 0
    )


def _union_length(intervals: list[tuple[int, int]]) -> int:
    total = 0
    for start, end in sorted(intervals):
        if end <= start:
            continue
        total += end - start
    return total


def _merged(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for start, end in sorted(intervals):
        if out and start <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], end))
        else:
            out.append((start, end))
    return out


def _covered_chars(x: Detection, cases: Sequence[PlagCase]) -> int:
    """Characters of x (both sides) inside some detected case, overlaps
    merged before counting."""
    plg = _merged(
        [
            (max(x.x_plg[0], c.c_plg[0]), min(x.x_plg[1], c.c_plg[1]))
            for c in cases
            if _detects(x, c)
        ]
    )
    src = _merged(
        [
            (max(x.x_src[0], c.c_src[0]), min(x.x_src[1], c.c_src[1]))
            for c in cases
            if _detects(x, c)
        ]
    )
    return _union_length(plg) + _union_length(src)


def _case_covered_chars(c: PlagCase, detections: Sequence[Detection]) -> int:
    plg = _merged(
        [
            (max(x.x_plg[0], c.c_plg[0]), min(x.x_plg[1], c.c_plg[1]))
            for x in detections
            if _detects(x, c)
        ]
    )
    src = _merged(
        [
            (max(x.x_src[0], c.c_src[0]), min(x.x_src[1], c.c_src[1]))
            for x in detections
            if _detects(x, c)
        ]
    )
    return _union_length(plg) + _union_length(src)


def _span_size(span: tuple[int, int]) -> int:
    return span[1] - span[0]


def char_precision_recall(
    cases: Sequence[PlagCase], detections: Sequence[Detection]
) -> dict[str, float]:
    """Character-level precision/recall. Each detection's precision is the
    fraction of its characters lying inside cases it detects; each case's
    recall is the fraction of its characters covered by its detections.
    Undefined sides (no detections / no cases) report 0 with a flag."""
    out: dict[str, float] = {}
    if not detections:
        out["precision"] = 0.0
        out["precision_undefined"] = True
    else:
        total = 0.0
        for x in detections:
            size = _span_size(x.x_plg) + _span_size(x.x_src)
            total += _covered_chars(x, cases) / size
        out["precision"] = total / len(detections)
    if not cases:
        out["recall"] = 0.0
        out["recall_undefined"] = True
    else:
        total = 0.0
        for c in cases:
            size = _span_size(c.c_plg) + _span_size(c.c_src)
            total += _case_covered_chars(c, detections) / size
        out["recall"] = total / len(cases)
    return out


def granularity(cases: Sequence[PlagCase], detections: Sequence[Detection]) -> float:
    """Average number of detections per detected case; 1.0 when no case is
    detected (so the combined score degrades through F1, not NaN)."""
    detected = [c for c in cases if any(_detects(x, c) for x in detections)]
    if not detected:
        return 1.0
    return sum(sum(1 for x in detections if _detects(x, c)) for c in detected) / len(detected)


def plagdet(cases: Sequence[PlagCase], detections: Sequence[Detection]) -> float:
    """F1 of character precision/recall discounted by log2(1 + granularity)."""
    pr = char_precision_recall(cases, detections)
    p, r = pr["precision"], pr["recall"]
    if p + r == 0:
        return 0.0
    f1 = 2 * p * r / (p + r)
    return f1 / math.log2(1 + granularity(cases, detections))


def case_doc_level(
    cases: Sequence[PlagCase],
    detections: Sequence[Detection],
    thresholds: EvalThresholds = EvalThresholds(),
) -> dict[str, float]:
    """Precision/recall at case and document granularity under the
    two-threshold rule: a detection x is a true positive for case c when it
    contributes at least tau1*|c| characters of c and at least tau2*|x| of its
    own characters lie inside c."""

    def tp_pair(x: Detection, c: PlagCase) -> bool:
        if not _detects(x, c):
            return False
        contributed = _overlap_len(x.x_plg, c.c_plg) + _overlap_len(x.x_src, c.c_src)
        size_c = _span_size(c.c_plg) + _span_size(c.c_src)
        size_x = _span_size(x.x_plg) + _span_size(x.x_src)
        return contributed >= thresholds.tau1 * size_c and contributed >= thresholds.tau2 * size_x

    case_tp_detections = sum(1 for x in detections if any(tp_pair(x, c) for c in cases))
    case_detected = sum(1 for c in cases if any(tp_pair(x, c) for x in detections))
    out = {
        "case_precision": case_tp_detections / len(detections) if detections else 0.0,
        "case_recall": case_detected / len(cases) if cases else 0.0,
    }

    # document level: union of case spans vs union of detection spans per
    # (d_plg, d_src) document pair
    doc_cases: dict[tuple[str, str], list[PlagCase]] = {}
    for c in cases:
        doc_cases.setdefault((c.d_plg, c.d_src), []).append(c)
    doc_dets: dict[tuple[str, str], list[Detection]] = {}
    for x in detections:
        doc_dets.setdefault((x.d_plg, x.d_src), []).append(x)

    def doc_tp(pair: tuple[str, str]) -> bool:
        cs = doc_cases.get(pair, [])
        xs = doc_dets.get(pair, [])
        if not cs or not xs:
            return False
        case_plg = _merged([c.c_plg for c in cs])
        case_src = _merged([c.c_src for c in cs])
        det_plg = _merged([x.x_plg for x in xs])
        det_src = _merged([x.x_src for x in xs])

        def inter_len(aa: list[tuple[int, int]], bb: list[tuple[int, int]]) -> int:
            total = 0
            for a in aa:
                for b in bb:
                    total += _overlap_len(a, b)
            return total

        contributed = inter_len(case_plg, det_plg) + inter_len(case_src, det_src)
        size_c = _union_length(case_plg) + _union_length(case_src)
        size_x = _union_length(det_plg) + _union_length(det_src)
        return contributed >= thresholds.tau1 * size_c and contributed >= thresholds.tau2 * size_x

    doc_tp_pairs = [pair for pair in doc_dets if doc_tp(pair)]
    out["doc_precision"] = len(doc_tp_pairs) / len(doc_dets) if doc_dets else 0.0
    detected_doc_pairs = [pair for pair in doc_cases if doc_tp(pair)]
    out["doc_recall"] = len(detected_doc_pairs) / len(doc_cases) if doc_cases else 0.0
    return out


def mrr(ranks: Sequence[int]) -> float:
    """Mean reciprocal rank of the relevant items."""
    if not ranks:
        raise ValueError("mrr needs at least one rank")
    if any(r < 1 for r in ranks):
        raise ValueError("ranks must be positive")
    return sum(1.0 / r for r in ranks) / len(ranks)


def mid_rank(prev_count: int, group_size: int, printed_variant: bool = False) -> float:
    """Rank assigned to every member of a tied group following ``prev_count``
    already-ranked items.

    Standard mid-ranking: prev_count + (group_size + 1)/2. The
    ``printed_variant`` flag selects the alternative (r_prev + (g - 1))/2
    formulation found in print; it is not the standard definition.
    """
    if group_size < 1:
        raise ValueError("group_size must be >= 1")
    if printed_variant:
        return (prev_count + (group_size - 1)) / 2
    return prev_count + (group_size + 1) / 2


def assign_mid_ranks(scores: Sequence[float], descending: bool = True) -> list[float]:
    """Mid-ranks for a score list; equal scores share their average rank."""
    order = sorted(range(len(scores)), key=lambda i: scores[i], reverse=descending)
    ranks = [0.0] * len(scores)
    pos = 0
    while pos < len(order):
        group = [order[pos]]
        while pos + len(group) < len(order) and scores[order[pos + len(group)]] == scores[group[0]]:
            group.append(order[pos + len(group)])
        value = mid_rank(pos, len(group))
        for idx in group:
            ranks[idx] = value
        pos += len(group)
    return ranks


def fleiss_kappa(ratings: Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa for a subjects x categories count matrix with an equal
    number of raters per subject."""
    if len(ratings) < 2:
        raise ValueError("need at least 2 subjects")
    widths = {len(row) for row in ratings}
    if len(widths) != 1:
        raise ValueError("all subjects must use the same categories")
    raters = {sum(row) for row in ratings}
    if len(raters) != 1:
        raise ValueError("every subject needs the same rater count")
    n = raters.pop()
    if n < 2:
        raise ValueError("need at least 2 raters")
    subjects = len(ratings)
    categories = widths.pop()
    p_per_subject = [
        (sum(v * v for v in row) - n) / (n * (n - 1)) for row in ratings
    ]
    p_bar = sum(p_per_subject) / subjects
    p_j = [sum(row[j] for row in ratings) / (subjects * n) for j in range(categories)]
    p_e = sum(p * p for p in p_j)
    if p_e == 1.0:
        return 1.0
    return (p_bar - p_e) / (1 - p_e)
