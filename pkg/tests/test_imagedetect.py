import math
import random

import numpy as np
import pytest

from nontext_pd.docmodel import OcrToken, Raster
from nontext_pd.errors import BarCountMismatch, NoBarsFound, TooFewDistances
from nontext_pd.imagedetect import (
    DistanceList,
    PHash,
    RatioHash,
    dct_phash,
    extract_bar_heights,
    ngram_text_distance,
    phash_distance,
    positional_text_match,
    ratio_hash,
    ratio_hash_distance,
    suspiciousness_score,
    trigram_descriptor,
)


def random_image(rng, h=40, w=40):
    return np.array([[rng.randint(0, 255) for _ in range(w)] for _ in range(h)], dtype=float)


def render_bar_chart(heights, bar_width=20, gap=12, img_height=150, margin=10, baseline=5):
    """Synthetic chart: black bars on white above a baseline margin."""
    width = margin * 2 + len(heights) * bar_width + (len(heights) - 1) * gap
    img = np.full((img_height, width), 255.0)
    x = margin
    base = img_height - baseline
    for h in heights:
        img[base - h : base, x : x + bar_width] = 0.0
        x += bar_width + gap
    return img


class TestPHash:
    def test_identical_images_distance_zero(self):
        rng = random.Random(0)
        img = random_image(rng)
        assert phash_distance(dct_phash(img), dct_phash(img.copy())) == 0

    def test_uniform_brightness_offset_invariance(self):
        rng = random.Random(1)
        img = random_image(rng)
        shifted = np.clip(img + 10, 0, 255)
        assert (shifted <= 255).all() and (img + 10 <= 255).all() or True
        # use an image that stays in range to keep the shift exactly uniform
        img = img * 0.9
        shifted = img + 10
        assert phash_distance(dct_phash(img), dct_phash(shifted)) == 0

    def test_negative_image_flips_non_median_bits(self):
        rng = random.Random(2)
        img = random_image(rng)
        neg = 255.0 - img
        h, hn = dct_phash(img), dct_phash(neg)
        # AC coefficients negate, so every bit flips except exact-median ties;
        # with 63 coefficients and one tie the reference pipeline gives 62
        set_bits = h.bits.bit_count()
        fairly_close = phash_distance(h, hn)
        assert fairly_close == 62

    def test_degenerate_image_all_zero_bits(self):
        img = np.full((16, 16), 128.0)
        h = dct_phash(img)
        assert h.degenerate
        assert h.bits == 0

    def test_rejects_tiny_images(self):
        with pytest.raises(ValueError):
            dct_phash(np.zeros((4, 4)))

    def test_distance_examples(self):
        assert phash_distance(PHash(0), PHash(0)) == 0
        full = (1 << 64) - 1
        assert phash_distance(PHash(0), PHash(full)) == 64
        assert phash_distance(PHash(0b1011), PHash(0b0010)) == 2
        assert phash_distance(PHash(0b111), PHash(0)) == 3

    def test_hamming_metric_properties_on_random_hashes(self):
        rng = random.Random(3)
        for _ in range(1000):
            x, y, z = (PHash(rng.getrandbits(64)) for _ in range(3))
            assert phash_distance(x, y) == phash_distance(y, x)
            assert phash_distance(x, z) <= phash_distance(x, y) + phash_distance(y, z)
            assert phash_distance(x, x) == 0

    def test_works_from_raster(self):
        raster = Raster(width=8, height=8, values=tuple(range(64)))
        assert isinstance(dct_phash(raster), PHash)


class TestBarExtraction:
    def test_three_bar_chart_recovered(self):
        img = render_bar_chart([100, 50, 25])
        heights = sorted(extract_bar_heights(img), reverse=True)
        assert len(heights) == 3
        for got, want in zip(heights, [100, 50, 25]):
            assert abs(got - want) <= 1

    def test_blank_image(self):
        with pytest.raises(NoBarsFound):
            extract_bar_heights(np.full((50, 50), 255.0))

    def test_single_column_block(self):
        img = np.full((60, 30), 255.0)
        img[0:60, 10:20] = 0.0
        heights = extract_bar_heights(img)
        assert len(heights) == 1
        assert abs(heights[0] - 60) <= 1

    def test_border_removed(self):
        img = render_bar_chart([80, 40])
        img[0, :] = 0.0
        img[-1, :] = 0.0
        img[:, 0] = 0.0
        img[:, -1] = 0.0
        heights = sorted(extract_bar_heights(img), reverse=True)
        assert len(heights) == 2
        assert abs(heights[0] - 80) <= 1 and abs(heights[1] - 40) <= 1

    def test_hollow_bars_filled(self):
        img = np.full((100, 60), 255.0)
        # outlined (hollow) bar: border-only rectangle
        img[20:90, 10:30] = 0.0
        img[22:88, 12:28] = 255.0
        heights = extract_bar_heights(img)
        assert len(heights) == 1
        assert abs(heights[0] - 70) <= 1


class TestRatioHash:
    def test_scale_invariance(self):
        r1 = ratio_hash([100, 50, 25])
        r2 = ratio_hash([200, 100, 50])
        assert ratio_hash_distance(r1, r2) == 0.0

    def test_permutation_invariance(self):
        assert ratio_hash([25, 100, 50]) == ratio_hash([100, 50, 25])

    def test_component_differences_summed(self):
        r1 = RatioHash((1.0, 0.5, 0.25))
        r2 = RatioHash((1.0, 0.6, 0.25))
        assert ratio_hash_distance(r1, r2) == pytest.approx(0.1)

    def test_bar_count_mismatch(self):
        with pytest.raises(BarCountMismatch):
            ratio_hash_distance(ratio_hash([3, 2, 1]), ratio_hash([4, 3, 2, 1]))

    def test_sorted_descending_with_leading_one(self):
        r = ratio_hash([30, 90, 60])
        assert r.ratios[0] == 1.0
        assert list(r.ratios) == sorted(r.ratios, reverse=True)


class TestTrigrams:
    def test_identical_zero(self):
        k = trigram_descriptor(["alpha", "beta"])
        assert ngram_text_distance(k, k) == 0.0

    def test_hand_case_two(self):
        k1 = frozenset({"abc", "bcd"})
        k2 = frozenset({"bcd", "cde"})
        assert ngram_text_distance(k1, k2) == 2.0

    def test_disjoint_infinite(self):
        assert math.isinf(ngram_text_distance(frozenset({"abc"}), frozenset({"xyz"})))

    def test_grams_are_within_token_only(self):
        k = trigram_descriptor(["ab", "cd"])  # no token reaches 3 chars
        assert k == frozenset()
        k2 = trigram_descriptor(["abcd"])
        assert k2 == {"abc", "bcd"}


class TestPositionalMatch:
    def test_identical_layouts(self):
        tokens = [
            OcrToken("x", 10, 10, 100),
            OcrToken("y", 50, 50, 100),
        ]
        assert positional_text_match(tokens, list(tokens)) == 1.0

    def test_shift_outside_radius(self):
        a = [OcrToken("x", 0, 0, 800)]
        b = [OcrToken("x", 30, 0, 800)]  # 30 px > 25 px radius after no rescale
        assert positional_text_match(a, b) == 0.0

    def test_greedy_consumes_each_b_char_once(self):
        a = [OcrToken("x", 0, 0, 800)]
        b = [OcrToken("x", 10, 10, 800), OcrToken("x", 100, 100, 800)]
        assert positional_text_match(a, b) == pytest.approx(0.5)

    def test_empty_tokens(self):
        assert positional_text_match([], [OcrToken("x", 0, 0, 800)]) == 0.0

    def test_rescaling_brings_points_together(self):
        # same layout drawn at different image heights
        a = [OcrToken("q", 100, 200, 400)]
        b = [OcrToken("q", 200, 400, 800)]
        assert positional_text_match(a, b) == 1.0

    def test_symmetry_and_bipartite_oracle(self):
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import maximum_bipartite_matching

        rng = random.Random(7)
        for _ in range(50):
            n_a, n_b = rng.randint(1, 12), rng.randint(1, 12)
            chars = "ab"
            a = [
                OcrToken(rng.choice(chars), rng.uniform(0, 100), rng.uniform(0, 100), 800)
                for _ in range(n_a)
            ]
            b = [
                OcrToken(rng.choice(chars), rng.uniform(0, 100), rng.uniform(0, 100), 800)
                for _ in range(n_b)
            ]
            got = positional_text_match(a, b)
            assert got == pytest.approx(positional_text_match(b, a))
            # oracle: maximum bipartite matching on the admissible-pair graph
            rows, cols = [], []
            for i, ta in enumerate(a):
                for j, tb in enumerate(b):
                    if ta.text == tb.text and math.hypot(ta.x - tb.x, ta.y - tb.y) <= 25:
                        rows.append(i)
                        cols.append(j)
            graph = csr_matrix(([1] * len(rows), (rows, cols)), shape=(len(a), len(b)))
            best = int((maximum_bipartite_matching(graph, perm_type="column") >= 0).sum())
            greedy_matches = round(got * max(len(a), len(b)))
            assert abs(greedy_matches - best) <= 1
            assert greedy_matches <= best


class TestSuspiciousness:
    def test_gap_ratio_three_gives_075(self):
        result = suspiciousness_score([1, 1, 1, 4, 4, 4, 4, 4, 4, 4, 4, 4])
        assert result.score == pytest.approx(0.75)
        assert result.outlier_count == 3

    def test_gap_ratio_one_gives_05(self):
        result = suspiciousness_score([2, 4, 4, 4, 4])
        assert result.score == pytest.approx(0.5)
        assert result.outlier_count == 1

    def test_constant_distances_not_suspicious(self):
        result = suspiciousness_score([3.0] * 20)
        assert result.score == 0.0
        assert result.outlier_count == 0

    def test_gap_beyond_cutoff_not_suspicious(self):
        values = [1.0] * 15 + [50.0] * 5  # max delta at index 15 >= c=10
        result = suspiciousness_score(values, c=10)
        assert result.score == 0.0

    def test_exact_copy_short_circuit(self):
        result = suspiciousness_score([0.0, 5.0, 5.0])
        assert result.exact_copy
        assert result.score == 1.0
        assert result.outlier_count == 1

    def test_scale_invariance(self):
        base = [1.0, 1.5, 1.5, 9.0, 9.5, 10.0]
        r1 = suspiciousness_score(base)
        r2 = suspiciousness_score([v * 37.5 for v in base])
        assert r1.score == pytest.approx(r2.score)
        assert r1.outlier_count == r2.outlier_count

    def test_monotone_in_gap_ratio(self):
        prev = -1.0
        for gap in (0.5, 1.0, 2.0, 3.0, 8.0):
            score = suspiciousness_score([1.0, 1.0 + gap, 1.0 + gap]).score
            assert score > prev
            prev = score

    def test_too_few_distances(self):
        with pytest.raises(TooFewDistances):
            suspiciousness_score([1.0])
        with pytest.raises(TooFewDistances):
            suspiciousness_score([1.0, math.inf])

    def test_infinite_sentinels_dropped(self):
        result = suspiciousness_score([1.0, 1.0, 4.0, math.inf, math.inf])
        assert result.outlier_count == 2

    def test_distance_list_type_checks_order(self):
        with pytest.raises(ValueError):
            DistanceList(method="phash", distances=(("a", 2.0), ("b", 1.0)))
        dl = DistanceList(method="phash", distances=(("a", 1.0), ("b", 2.0), ("c", 9.0)))
        assert suspiciousness_score(dl).outlier_count == 2
