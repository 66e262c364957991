"""Acceptance suite: every criterion prints one PASS/FAIL line (run with -s
or check the summary) and asserts at its stated tolerance."""

import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from _synth import build_corpus
from nontext_pd import mathdetect, seqmatch, textdetect
from nontext_pd.cli import main
from nontext_pd.docmodel import serialize_document, tokenize_text, write_pgm
from nontext_pd.errors import BelowIdentifierFloor, RelUndefined
from nontext_pd.evalmetrics import PlagCase, Detection, plagdet
from nontext_pd.imagedetect import (
    PHash,
    dct_phash,
    extract_bar_heights,
    ngram_text_distance,
    phash_distance,
    ratio_hash,
    ratio_hash_distance,
    suspiciousness_score,
)
from nontext_pd.index import build_index
from nontext_pd.pipeline import DEFAULT_THRESHOLDS, retrieve_candidates
from nontext_pd.seqmatch import Tile
from nontext_pd.textdetect import Fingerprint, fingerprint_similarity


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {status} - {name}{suffix}")
    assert ok, f"{name}{suffix}"


# ---------------------------------------------------------------------------
# shared fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def corpus500():
    docs, planted = build_corpus(n_docs=500, n_planted=10, seed=4025)
    return docs, planted


@pytest.fixture(scope="module")
def index500(corpus500):
    docs, _ = corpus500
    return build_index(docs)


# ---------------------------------------------------------------------------
# criterion 1: sequence-algorithm oracle equivalence
# ---------------------------------------------------------------------------

def oracle_greedy_tiles(a, b, min_len=1):
    marked_a = [False] * len(a)
    marked_b = [False] * len(b)
    tiles = []
    while True:
        best = None
        for i in range(len(a)):
            for j in range(len(b)):
                length = 0
                while (
                    i + length < len(a)
                    and j + length < len(b)
                    and not marked_a[i + length]
                    and not marked_b[j + length]
                    and a[i + length] == b[j + length]
                ):
                    length += 1
                if length and (best is None or (-length, i, j) < best):
                    best = (-length, i, j)
        if best is None or -best[0] < min_len:
            break
        length, i, j = -best[0], best[1], best[2]
        tiles.append(Tile(s1=i, s2=j, l=length))
        for k in range(length):
            marked_a[i + k] = True
            marked_b[j + k] = True
    return tiles


def oracle_lcs(a, b):
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(m):
            dp[i + 1][j + 1] = dp[i][j] + 1 if a[i] == b[j] else max(dp[i][j + 1], dp[i + 1][j])
    return dp[n][m]


def test_criterion_sequence_oracle_equivalence():
    start = time.monotonic()

    # exhaustive enumeration over short sequences
    checked = 0
    for alphabet, max_len in ((2, 4), (3, 3)):
        symbols = [str(s) for s in range(alphabet)]
        seqs = []
        for length in range(max_len + 1):
            seqs.extend(list(p) for p in itertools.product(symbols, repeat=length))
        for a in seqs:
            for b in seqs:
                assert seqmatch.greedy_tiles(a, b, 1) == oracle_greedy_tiles(a, b, 1)
                checked += 1

    # random pairs spanning the full stated envelope
    rng = random.Random(99)
    for _ in range(3000):
        alphabet = rng.randint(1, 4)
        a = [str(rng.randrange(alphabet)) for _ in range(rng.randint(0, 12))]
        b = [str(rng.randrange(alphabet)) for _ in range(rng.randint(0, 12))]
        min_len = rng.randint(1, 5)
        assert seqmatch.greedy_tiles(a, b, min_len) == oracle_greedy_tiles(a, b, min_len)
        checked += 1

    for _ in range(10_000):
        alphabet = rng.randint(1, 4)
        a = [str(rng.randrange(alphabet)) for _ in range(rng.randint(0, 12))]
        b = [str(rng.randrange(alphabet)) for _ in range(rng.randint(0, 12))]
        assert seqmatch.lcs_length(a, b) == oracle_lcs(a, b)

    elapsed = time.monotonic() - start
    report(
        "sequence-algorithm oracle equivalence",
        elapsed < 60.0,
        f"{checked} tiling pairs + 10000 LCS pairs in {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# criterion 2: formula fixed points
# ---------------------------------------------------------------------------

def test_criterion_formula_fixed_points():
    ok = True
    # hashed-fingerprint similarity: three hand cases of 100|m|/(|d1|+|d2|-|m|)
    fp = lambda sigs: Fingerprint(tuple(sigs), 3, 4)
    case1 = fingerprint_similarity(fp(range(0, 160, 16)), fp(list(range(0, 80, 16)) + list(range(1600, 1840, 16))))
    ok &= case1 == 100 * 5 / (10 + 20 - 5)
    case2 = fingerprint_similarity(fp([16, 32, 48]), fp([16, 32, 48]))
    ok &= case2 == 100.0
    case3 = fingerprint_similarity(fp([16]), fp([32, 48]))
    ok &= case3 == 0.0

    # identifier-histogram distance hand case 5/6
    d = mathdetect.feature_distance(
        mathdetect.descriptor("ci", ["x", "x", "x", "y"]),
        mathdetect.descriptor("ci", ["x", "z", "z"]),
    )
    ok &= d == pytest.approx(5 / 6, abs=0)

    # OCR trigram distance hand case 2.0
    ok &= ngram_text_distance(frozenset({"abc", "bcd"}), frozenset({"bcd", "cde"})) == 2.0

    # ratio-hash scale invariance
    ok &= ratio_hash_distance(ratio_hash([100, 50, 25]), ratio_hash([200, 100, 50])) == 0.0

    report("formula fixed points", bool(ok))


# ---------------------------------------------------------------------------
# criterion 3: suspiciousness-score anchors
# ---------------------------------------------------------------------------

def test_criterion_suspiciousness_anchors():
    r1 = suspiciousness_score([1, 1, 1, 4, 4, 4, 4, 4])
    r2 = suspiciousness_score([2, 4, 4, 4])
    beyond = suspiciousness_score([1.0] * 15 + [50.0] * 3, c=10)
    ok = (
        r1.score == 0.75
        and r1.outlier_count == 3
        and r2.score == 0.5
        and r2.outlier_count == 1
        and beyond.score == 0.0
    )
    report("suspiciousness-score anchors", ok)


# ---------------------------------------------------------------------------
# criterion 4: combined detection-score worked values
# ---------------------------------------------------------------------------

def test_criterion_plagdet_worked_values():
    cases = [PlagCase((0, 100), "p", (0, 100), "s")]
    half = [Detection((0, 50), "p", (0, 50), "s")]
    split = [Detection((0, 25), "p", (0, 25), "s"), Detection((25, 50), "p", (25, 50), "s")]
    perfect = [Detection((0, 100), "p", (0, 100), "s")]
    ok = (
        abs(plagdet(cases, half) - 2 / 3) < 1e-9
        and abs(plagdet(cases, split) - (2 / 3) / math.log2(3)) < 1e-9
        and abs(plagdet(cases, perfect) - 1.0) < 1e-9
    )
    report("combined detection-score worked values", ok)


# ---------------------------------------------------------------------------
# criterion 5: default significance thresholds
# ---------------------------------------------------------------------------

def test_criterion_threshold_defaults():
    expected = {
        "histo": 0.56,
        "lcis": 0.76,
        "git": 0.15,
        "bc_rel": 0.13,
        "lccs": 0.22,
        "max_gct": 0.10,
        "encoplot": 0.06,
    }
    report("default significance thresholds", DEFAULT_THRESHOLDS == expected)


# ---------------------------------------------------------------------------
# criterion 6: planted-source retrieval on the 500-document corpus
# ---------------------------------------------------------------------------

def test_criterion_planted_source_retrieval(corpus500, index500):
    start = time.monotonic()
    docs, planted = corpus500
    per_method_hits = {m: 0 for m in ("citation", "text", "math")}
    found_by = {}
    for query_id, source_id in planted:
        query = index500.docs[query_id]
        found = set()
        for method in ("citation", "text", "math"):
            ids = retrieve_candidates(index500, query, method, k=100).doc_ids()
            if source_id in ids:
                per_method_hits[method] += 1
                found.add(method)
        found_by[query_id] = found
    union_ok = all(
        len(found_by[q] & set(pair)) > 0
        for q in found_by
        for pair in itertools.combinations(("citation", "text", "math"), 2)
    )
    elapsed = time.monotonic() - start
    detail = (
        f"citation {per_method_hits['citation']}/10, text {per_method_hits['text']}/10, "
        f"math {per_method_hits['math']}/10, {elapsed:.0f}s"
    )
    ok = (
        union_ok
        and all(v >= 8 for v in per_method_hits.values())
        and elapsed < 300.0
    )
    report("planted-source retrieval", ok, detail)


# ---------------------------------------------------------------------------
# criterion 7: random-pair calibration against the default thresholds
# ---------------------------------------------------------------------------

def test_criterion_random_pair_calibration(corpus500):
    docs, planted = corpus500
    planted_set = {frozenset(p) for p in planted}
    by_id = {d.doc_id: d for d in docs}
    ids = sorted(by_id)

    from collections import Counter

    idents = {d.doc_id: Counter(d.identifiers) for d in docs}
    refs = {d.doc_id: {r.ref_key for r in d.references} for d in docs}
    cits = {d.doc_id: [c.ref_key for c in d.citations] for d in docs}
    gram_counts = {}
    for d in docs:
        text = d.text.lower()
        counts = Counter(text[i : i + 16] for i in range(len(text) - 15))
        gram_counts[d.doc_id] = counts

    rng = random.Random(777)
    below = 0
    total = 10_000
    checked = 0
    while checked < total:
        a_id, b_id = rng.sample(ids, 2)
        if frozenset((a_id, b_id)) in planted_set:
            continue
        checked += 1
        a, b = by_id[a_id], by_id[b_id]
        all_below = True

        shared_refs = refs[a_id] & refs[b_id]
        if shared_refs and refs[a_id] and refs[b_id]:
            bc_rel = len(shared_refs) / min(len(refs[a_id]), len(refs[b_id]))
            if bc_rel >= DEFAULT_THRESHOLDS["bc_rel"]:
                all_below = False
            seq_a, seq_b = cits[a_id], cits[b_id]
            if seq_a and all_below:
                lccs_score = seqmatch.lcs_length(seq_a, seq_b) / len(seq_a)
                if lccs_score >= DEFAULT_THRESHOLDS["lccs"]:
                    all_below = False
                tiles = seqmatch.greedy_tiles(seq_a, seq_b, 1)
                longest = max((t.l for t in tiles), default=0)
                if longest / len(seq_a) >= DEFAULT_THRESHOLDS["max_gct"]:
                    all_below = False

        if all_below:
            shared = set(idents[a_id]) & set(idents[b_id])
            if shared:
                occ = min(
                    sum(idents[a_id][t] for t in shared),
                    sum(idents[b_id][t] for t in shared),
                )
                if occ >= mathdetect.IDENTIFIER_FLOOR:
                    try:
                        if mathdetect.histo_similarity(a, b) >= DEFAULT_THRESHOLDS["histo"]:
                            all_below = False
                        if mathdetect.lcis_score(a, b) >= DEFAULT_THRESHOLDS["lcis"]:
                            all_below = False
                        if mathdetect.git_score(a, b) >= DEFAULT_THRESHOLDS["git"]:
                            all_below = False
                    except BelowIdentifierFloor:
                        pass

        if all_below:
            ca, cb = gram_counts[a_id], gram_counts[b_id]
            smaller, larger = (ca, cb) if len(ca) <= len(cb) else (cb, ca)
            matched = sum(min(c, larger.get(g, 0)) for g, c in smaller.items())
            shorter_len = min(len(a.text), len(b.text))
            if matched and shorter_len:
                upper_bound = 16.0 * matched / shorter_len
                if upper_bound >= DEFAULT_THRESHOLDS["encoplot"]:
                    matches = textdetect.encoplot_matches(a.text, b.text)
                    pct = textdetect.encoplot_score(matches, a.text, b.text)
                    if pct / 100.0 >= DEFAULT_THRESHOLDS["encoplot"]:
                        all_below = False

        if all_below:
            below += 1

    fraction = below / total
    report(
        "random-pair calibration",
        fraction >= 0.99,
        f"{below}/{total} pairs below every threshold ({fraction:.2%})",
    )


# ---------------------------------------------------------------------------
# criterion 8: first-to-first gram pairing count
# ---------------------------------------------------------------------------

def test_criterion_encoplot_pairing_count():
    rng = random.Random(31)
    ok = True
    for _ in range(1000):
        text_a = "".join(rng.choice("ab") for _ in range(rng.randint(16, 100)))
        text_b = "".join(rng.choice("ab") for _ in range(rng.randint(16, 100)))
        matches = textdetect.encoplot_matches(text_a, text_b)
        counts_a = {}
        counts_b = {}
        for i in range(len(text_a) - 15):
            g = text_a[i : i + 16]
            counts_a[g] = counts_a.get(g, 0) + 1
        for j in range(len(text_b) - 15):
            g = text_b[j : j + 16]
            counts_b[g] = counts_b.get(g, 0) + 1
        expected = sum(min(c, counts_b.get(g, 0)) for g, c in counts_a.items())
        if len(matches) != expected:
            ok = False
            break
    report("first-to-first gram pairing count", ok)


# ---------------------------------------------------------------------------
# criterion 9: perceptual hash fixed points and metric properties
# ---------------------------------------------------------------------------

def test_criterion_phash(tmp_path):
    rng = random.Random(17)
    img = np.array(
        [[rng.randint(0, 200) for _ in range(48)] for _ in range(36)], dtype=float
    )
    pgm_path = tmp_path / "img.pgm"
    write_pgm(img, pgm_path)
    from nontext_pd.docmodel import read_pgm

    raster = read_pgm(pgm_path.read_bytes())
    ok = phash_distance(dct_phash(raster), dct_phash(raster)) == 0
    shifted = raster.to_array() + 10
    ok &= phash_distance(dct_phash(raster), dct_phash(shifted)) == 0
    for _ in range(1000):
        x, y, z = (PHash(rng.getrandbits(64)) for _ in range(3))
        ok &= phash_distance(x, y) == phash_distance(y, x)
        ok &= phash_distance(x, z) <= phash_distance(x, y) + phash_distance(y, z)
        ok &= phash_distance(x, x) == 0
    report("perceptual hash fixed points and metric", bool(ok))


# ---------------------------------------------------------------------------
# criterion 10: synthetic bar-chart extraction
# ---------------------------------------------------------------------------

def render_chart(heights, scale=1):
    bar_width, gap, margin, baseline = 20 * scale, 12 * scale, 10 * scale, 5 * scale
    img_height = 150 * scale
    width = margin * 2 + len(heights) * bar_width + (len(heights) - 1) * gap
    img = np.full((img_height, width), 255.0)
    x = margin
    base = img_height - baseline
    for h in heights:
        img[base - h * scale : base, x : x + bar_width] = 0.0
        x += bar_width + gap
    return img


def test_criterion_bar_chart_extraction():
    img = render_chart([100, 50, 25])
    heights = sorted(extract_bar_heights(img), reverse=True)
    ok = len(heights) == 3 and all(
        abs(got - want) <= 1 for got, want in zip(heights, [100, 50, 25])
    )
    doubled = render_chart([100, 50, 25], scale=2)
    heights2 = extract_bar_heights(doubled)
    distance = ratio_hash_distance(ratio_hash(heights), ratio_hash(heights2))
    ok = ok and distance <= 0.02
    report(
        "synthetic bar-chart extraction",
        bool(ok),
        f"heights {['%.1f' % h for h in heights]}, 2x ratio distance {distance:.4f}",
    )


# ---------------------------------------------------------------------------
# criterion 11: end-to-end determinism of pairwise comparison
# ---------------------------------------------------------------------------

def test_criterion_compare_determinism(tmp_path, corpus500):
    docs, planted = corpus500
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(serialize_document(docs[0]))
    b.write_text(serialize_document(docs[1]))
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["compare", str(a), str(b), "--out", str(out1)]) == 0
    assert main(["compare", str(a), str(b), "--out", str(out2)]) == 0
    report("end-to-end comparison determinism", out1.read_bytes() == out2.read_bytes())
