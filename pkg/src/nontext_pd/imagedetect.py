"""Image similarity methods and outlier-based suspiciousness scoring.

Covers DCT perceptual hashing, bar-chart ratio hashing with bar extraction,
OCR trigram matching, positional text matching, and the gap-statistic scoring
that turns a sorted distance list into a suspiciousness score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.fft import dct

from .docmodel import OcrToken, Raster
from .errors import BarCountMismatch, NoBarsFound, TooFewDistances

PHASH_RESIZE = 32
PHASH_BLOCK = 8
OCR_NORM_HEIGHT = 800.0
POS_MATCH_RADIUS = 25.0
SUSPICIOUSNESS_CUTOFF = 10
REPORTING_THRESHOLD = 0.5


@dataclass(frozen=True)
class PHash:
    """64-bit perceptual hash; the DC slot is a constant zero bit, the other
    63 bits compare low-frequency DCT coefficients to their median."""

    bits: int
    degenerate: bool = False


@dataclass(frozen=True)
class RatioHash:
    """Relative bar heights sorted descending; first component is 1.0."""

    ratios: tuple[float, ...]


@dataclass(frozen=True)
class DistanceList:
    """Ascending method-specific distances of one image to the collection."""

    method: str
    distances: tuple[tuple[str, float], ...]

    def __post_init__(self):
        values = [d for _, d in self.distances]
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("distances must be sorted ascending")


@dataclass(frozen=True)
class SuspiciousnessResult:
    score: float
    outlier_count: int
    exact_copy: bool = False


def _to_array(image: Raster | np.ndarray) -> np.ndarray:
    if isinstance(image, Raster):
        return image.to_array()
    return np.asarray(image, dtype=np.float64)


def _area_resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Area-averaging resize; linear in the pixel values."""

    def weights(n_in: int, n_out: int) -> np.ndarray:
        w = np.zeros((n_out, n_in))
        scale = n_in / n_out
        for i in range(n_out):
            lo, hi = i * scale, (i + 1) * scale
            first, last = int(math.floor(lo)), int(math.ceil(hi))
            for j in range(first, min(last, n_in)):
                w[i, j] = min(hi, j + 1) - max(lo, j)
        return w / scale

    wr = weights(img.shape[0], out_h)
    wc = weights(img.shape[1], out_w)
    return wr @ img @ wc.T


def dct_phash(image: Raster | np.ndarray) -> PHash:
    """Perceptual hash: area-average to 32x32, 2-D DCT-II, keep the top-left
    8x8 block, set a bit for every AC coefficient above the median of the 63
    AC coefficients. Uniform brightness shifts only move the DC coefficient,
    so they leave the hash unchanged."""
    img = _to_array(image)
    if img.shape[0] < 8 or img.shape[1] < 8:
        raise ValueError("image must be at least 8x8 pixels")
    if np.all(img == img.flat[0]):
        return PHash(bits=0, degenerate=True)
    small = _area_resize(img, PHASH_RESIZE, PHASH_RESIZE)
    coeffs = dct(dct(small, axis=0, norm="ortho"), axis=1, norm="ortho")
    block = coeffs[:PHASH_BLOCK, :PHASH_BLOCK].ravel()
    ac = block[1:]
    median = float(np.median(ac))
    bits = 0
    for i, value in enumerate(ac, start=1):
        if value > median:
            bits |= 1 << i
    return PHash(bits=bits, degenerate=False)


def phash_distance(h1: PHash, h2: PHash) -> int:
    """Hamming distance: the number of differing bits."""
    return (h1.bits ^ h2.bits).bit_count()


def _otsu_threshold(img: np.ndarray) -> float:
    hist, _ = np.histogram(img, bins=256, range=(0, 256))
    total = hist.sum()
    if total == 0:
        return 0.0
    levels = np.arange(256)
    weight_bg = np.cumsum(hist)
    weight_fg = total - weight_bg
    sum_all = float((hist * levels).sum())
    sum_bg = np.cumsum(hist * levels)
    best_t, best_var = 0, -1.0
    for t in range(255):
        wb, wf = weight_bg[t], weight_fg[t]
        if wb == 0 or wf == 0:
            continue
        mb = sum_bg[t] / wb
        mf = (sum_all - sum_bg[t]) / wf
        var = wb * wf * (mb - mf) ** 2
        if var > best_var:
            best_var, best_t = var, t
    return best_t + 0.5


def _flood_outside(black: np.ndarray) -> np.ndarray:
    """Boolean mask of the white region connected to the border."""
    from scipy.ndimage import label

    labels, _ = label(~black)
    border_labels = set(labels[0, :]) | set(labels[-1, :]) | set(labels[:, 0]) | set(labels[:, -1])
    border_labels.discard(0)
    return np.isin(labels, sorted(border_labels))


def extract_bar_heights(
    image: Raster | np.ndarray,
    cluster_tolerance: float = 0.10,
    border_area_fraction: float = 0.80,
    min_bar_width: int = 1,
) -> list[float]:
    """Recover bar heights in pixels from a bar-chart raster.

    Binarize (Otsu), pad with white, drop a frame-like component whose
    bounding box covers most of the image, fill enclosed holes so bars are
    solid, measure the longest vertical black run per column, and cluster
    adjacent columns whose run lengths vary by at most ``cluster_tolerance``
    relative to the running cluster mean. Each cluster's mean run length is
    one bar height.
    """
    from scipy.ndimage import label

    img = _to_array(image)
    threshold = _otsu_threshold(img)
    black = img < threshold
    if not black.any():
        raise NoBarsFound("no foreground pixels after thresholding")
    black = np.pad(black, 2, mode="constant", constant_values=False)

    labels, count = label(black)
    area = black.shape[0] * black.shape[1]
    for comp in range(1, count + 1):
        rows, cols = np.nonzero(labels == comp)
        bbox_area = (rows.max() - rows.min() + 1) * (cols.max() - cols.min() + 1)
        comp_size = len(rows)
        if bbox_area > border_area_fraction * area and comp_size < 0.5 * bbox_area:
            black[labels == comp] = False  # hollow frame spanning the image
    if not black.any():
        raise NoBarsFound("only a border was found")

    outside = _flood_outside(black)
    black |= ~outside  # fill enclosed holes: bars become solid

    heights = np.zeros(black.shape[1])
    for col in range(black.shape[1]):
        column = black[:, col]
        if not column.any():
            continue
        # longest run of black pixels in this column
        padded = np.diff(np.concatenate(([0], column.astype(int), [0])))
        starts = np.nonzero(padded == 1)[0]
        ends = np.nonzero(padded == -1)[0]
        heights[col] = (ends - starts).max()

    bars: list[float] = []
    col = 0
    width = black.shape[1]
    while col < width:
        if heights[col] == 0:
            col += 1
            continue
        run = [heights[col]]
        col += 1
        while col < width and heights[col] > 0:
            mean = sum(run) / len(run)
            if abs(heights[col] - mean) <= cluster_tolerance * mean:
                run.append(heights[col])
                col += 1
            else:
                break
        if len(run) >= min_bar_width:
            bars.append(sum(run) / len(run))
    if not bars:
        raise NoBarsFound("no bar-shaped column clusters")
    return bars


def ratio_hash(heights: Sequence[float]) -> RatioHash:
    if not heights:
        raise ValueError("ratio hash needs at least one bar height")
    top = max(heights)
    if top <= 0:
        raise ValueError("bar heights must be positive")
    return RatioHash(ratios=tuple(sorted((h / top for h in heights), reverse=True)))


def ratio_hash_distance(r1: RatioHash, r2: RatioHash) -> float:
    """Sum of componentwise differences of the descending relative heights;
    defined only for equal bar counts."""
    if len(r1.ratios) != len(r2.ratios):
        raise BarCountMismatch(f"{len(r1.ratios)} bars vs {len(r2.ratios)} bars")
    return sum(abs(a - b) for a, b in zip(r1.ratios, r2.ratios))


def trigram_descriptor(tokens: Iterable[OcrToken | str]) -> frozenset[str]:
    """Unordered set of character 3-grams taken within each OCR token."""
    grams = set()
    for tok in tokens:
        text = tok.text if isinstance(tok, OcrToken) else tok
        for i in range(len(text) - 2):
            grams.add(text[i : i + 3])
    return frozenset(grams)


def ngram_text_distance(k1: frozenset[str], k2: frozenset[str]) -> float:
    """Symmetric difference over intersection; 0 = identical, unbounded
    above, +inf when the descriptors share no gram."""
    inter = len(k1 & k2)
    if inter == 0:
        return math.inf
    return len(k1 ^ k2) / inter


def _char_points(tokens: Sequence[OcrToken], norm_height: float) -> list[tuple[str, float, float]]:
    points = []
    for tok in tokens:
        scale = norm_height / tok.img_height
        # characters of a multi-character token share the token anchor; the
        # method is exact when tokens are single characters
        for ch in tok.text:
            points.append((ch, tok.x * scale, tok.y * scale))
    return points


def positional_text_match(
    tokens_a: Sequence[OcrToken],
    tokens_b: Sequence[OcrToken],
    radius: float = POS_MATCH_RADIUS,
    norm_height: float = OCR_NORM_HEIGHT,
) -> float:
    """Fraction of characters matching an identical character at a nearby
    position after rescaling both images to a common height.

    Each B character is consumed at most once (greedy nearest-first pairing);
    the count is normalized by the longer text's character count.
    """
    chars_a = _char_points(tokens_a, norm_height)
    chars_b = _char_points(tokens_b, norm_height)
    if not chars_a or not chars_b:
        return 0.0
    candidates = []
    for ai, (ca, xa, ya) in enumerate(chars_a):
        for bi, (cb, xb, yb) in enumerate(chars_b):
            if ca != cb:
                continue
            dist = math.hypot(xa - xb, ya - yb)
            if dist <= radius:
                candidates.append((dist, ai, bi))
    candidates.sort()
    used_a: set[int] = set()
    used_b: set[int] = set()
    matches = 0
    for _, ai, bi in candidates:
        if ai in used_a or bi in used_b:
            continue
        used_a.add(ai)
        used_b.add(bi)
        matches += 1
    return matches / max(len(chars_a), len(chars_b))


def suspiciousness_score(
    distances: DistanceList | Sequence[float],
    c: int = SUSPICIOUSNESS_CUTOFF,
) -> SuspiciousnessResult:
    """Outlier-gap score over an ascending distance list.

    The relative delta between consecutive distances, d'_i = (d_{i+1}-d_i)/d_i,
    peaks where the outlier cluster ends; the score maps that gap ratio as
    s = d'/(1+d'), hitting 0.5 at an equal margin and 0.75 when the margin is
    three times the absolute distance. If the largest delta sits at or beyond
    the cutoff c, no small outlier set exists and the score is 0. A smallest
    distance of zero short-circuits as an exact copy. Infinite sentinel
    distances are dropped before scoring.
    """
    if isinstance(distances, DistanceList):
        values = [d for _, d in distances.distances]
    else:
        values = list(distances)
    values = sorted(v for v in values if not math.isinf(v))
    if len(values) < 2:
        raise TooFewDistances(f"need at least 2 finite distances, got {len(values)}")
    if values[0] == 0.0:
        zeros = sum(1 for v in values if v == 0.0)
        return SuspiciousnessResult(score=1.0, outlier_count=zeros, exact_copy=True)
    deltas = [(values[i] - values[i - 1]) / values[i - 1] for i in range(1, len(values))]
    best_i = max(range(len(deltas)), key=lambda i: (deltas[i], -i)) + 1
    if deltas[best_i - 1] <= 0.0:
        return SuspiciousnessResult(score=0.0, outlier_count=0)
    if best_i >= c:
        return SuspiciousnessResult(score=0.0, outlier_count=0)
    gap = deltas[best_i - 1]
    return SuspiciousnessResult(score=gap / (1.0 + gap), outlier_count=best_i)
