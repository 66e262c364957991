"""Candidate retrieval, detailed analysis orchestration, significance
thresholds, pooling, and result filtering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import citedetect, imagedetect, mathdetect, seqmatch, textdetect
from .docmodel import DocumentRecord, citation_sequence, tokenize_text
from .errors import NontextPdError, UnknownMethod
from .index import IMAGE_METHODS_BY_TYPE, IndexStore

# Table of method-specific significance thresholds; scores at or above their
# threshold are flagged. All overridable per call.
DEFAULT_THRESHOLDS: dict[str, float] = {
    "histo": 0.56,
    "lcis": 0.76,
    "git": 0.15,
    "bc_rel": 0.13,
    "lccs": 0.22,
    "max_gct": 0.10,
    "encoplot": 0.06,
}

CITATION_METHODS = ("bc_abs", "bc_rel", "lccs", "lccs_distinct", "max_gct", "cc_bcn", "cc_bpn")
MATH_METHODS = ("histo", "lcis", "git")
TEXT_METHODS = ("sherlock", "encoplot", "substrings")
IMAGE_METHODS = ("phash", "ngram_tm", "pos_tm", "ratio_hash")
ALL_METHODS = CITATION_METHODS + MATH_METHODS + TEXT_METHODS + IMAGE_METHODS

RETRIEVAL_METHODS = ("citation", "text", "math", "image")
DEFAULT_CANDIDATES = 100
IMAGE_CANDIDATE_CAP = 9


@dataclass
class AnalysisConfig:
    ngram_len: int = textdetect.DEFAULT_NGRAM_LEN
    retention_zero_bits: int = textdetect.DEFAULT_RETENTION_ZERO_BITS
    identifier_floor: int = mathdetect.IDENTIFIER_FLOOR
    git_min_tile: int = mathdetect.GIT_MIN_TILE
    bc_normalizer: str = "min"
    encoplot_lowercase: bool = True
    min_substring_tokens: int = 6
    min_substring_chars: int = 12
    max_evidence_items: int = 500


@dataclass
class MethodScore:
    method: str
    score: Optional[float] = None
    raw: Optional[float] = None
    flagged: bool = False
    error: Optional[str] = None
    evidence: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "score": self.score,
            "raw": self.raw,
            "flagged": self.flagged,
            "error": self.error,
            "evidence": self.evidence,
        }


@dataclass
class CandidateAnalysis:
    doc_id: str
    title: str
    authors: tuple[str, ...]
    year: Optional[int]
    scores: list[MethodScore]

    @property
    def match_count(self) -> int:
        return sum(len(s.evidence) for s in self.scores)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title": self.title,
            "authors": list(self.authors),
            "year": self.year,
            "match_count": self.match_count,
            "scores": [s.to_dict() for s in self.scores],
        }


@dataclass
class AnalysisResult:
    query_doc_id: str
    methods: list[str]
    candidates: list[CandidateAnalysis]

    def to_dict(self) -> dict:
        return {
            "format_version": "1",
            "query_doc_id": self.query_doc_id,
            "methods": list(self.methods),
            "candidates": [c.to_dict() for c in self.candidates],
        }


@dataclass(frozen=True)
class CandidateSet:
    method: str
    entries: tuple[tuple[str, float], ...]

    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.entries]


def _idf(n_docs: int, df: int) -> float:
    return 1.0 + math.log(n_docs / (df + 1))


def _rank_top_k(scores: dict[str, float], k: int) -> tuple[tuple[str, float], ...]:
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return tuple(ranked[:k])


def retrieve_candidates(
    index: IndexStore, query_doc: DocumentRecord, method: str, k: int = DEFAULT_CANDIDATES
) -> CandidateSet:
    """Rank collection documents against the query for one retrieval class.

    citation: documents sharing at least one reference, scored by
    idf-weighted shared references. text: shared retained fingerprint
    signatures. math: identifier terms boosted by their occurrence count in
    the query. image: suspicious outliers per applicable image method, capped
    at nine documents per method and input image. The query document itself is
    never returned. Ties break on ascending doc_id.
    """
    if method not in RETRIEVAL_METHODS:
        raise UnknownMethod(f"unknown retrieval method '{method}'")
    n_docs = len(index.docs) or 1
    scores: dict[str, float] = {}
    if method == "citation":
        refs = {r.ref_key for r in query_doc.references}
        for key in refs:
            postings = index.ref_postings.get(key, [])
            weight = _idf(n_docs, len(postings)) ** 2
            for doc_id in postings:
                if doc_id == query_doc.doc_id:
                    continue
                stats = index.doc_stats[doc_id]
                denom = math.sqrt(stats.n_references) if stats.n_references else 1.0
                scores[doc_id] = scores.get(doc_id, 0.0) + weight / denom
    elif method == "text":
        fp = textdetect.build_fingerprint(
            tokenize_text(query_doc), index.ngram_len, index.retention_zero_bits
        )
        for sig in set(fp.signatures):
            postings = index.sig_postings.get(sig, [])
            weight = _idf(n_docs, len(postings)) ** 2
            for doc_id in postings:
                if doc_id == query_doc.doc_id:
                    continue
                stats = index.doc_stats[doc_id]
                denom = math.sqrt(stats.n_signatures) if stats.n_signatures else 1.0
                scores[doc_id] = scores.get(doc_id, 0.0) + weight / denom
    elif method == "math":
        query_counts: dict[str, int] = {}
        for token in query_doc.identifiers:
            query_counts[token] = query_counts.get(token, 0) + 1
        for token, boost in query_counts.items():
            postings = index.ident_postings.get(token, [])
            weight = _idf(n_docs, len(postings)) ** 2
            for doc_id, tf in postings:
                if doc_id == query_doc.doc_id:
                    continue
                stats = index.doc_stats[doc_id]
                denom = math.sqrt(stats.n_identifiers) if stats.n_identifiers else 1.0
                scores[doc_id] = scores.get(doc_id, 0.0) + boost * math.sqrt(tf) * weight / denom
    else:
        scores = _retrieve_image_candidates(index, query_doc)
    return CandidateSet(method=method, entries=_rank_top_k(scores, k))


def _image_pair_distance(method: str, desc_q, desc_c, index: IndexStore) -> Optional[float]:
    if method == "phash":
        if desc_q.phash is None or desc_c.phash is None:
            return None
        return float(
            imagedetect.phash_distance(
                imagedetect.PHash(desc_q.phash), imagedetect.PHash(desc_c.phash)
            )
        )
    if method == "ratio_hash":
        if desc_q.ratios is None or desc_c.ratios is None:
            return None
        if len(desc_q.ratios) != len(desc_c.ratios):
            return None
        return imagedetect.ratio_hash_distance(
            imagedetect.RatioHash(desc_q.ratios), imagedetect.RatioHash(desc_c.ratios)
        )
    if method == "ngram_tm":
        if desc_q.trigrams is None or desc_c.trigrams is None:
            return None
        return imagedetect.ngram_text_distance(desc_q.trigrams, desc_c.trigrams)
    if method == "pos_tm":
        if not desc_q.has_ocr or not desc_c.has_ocr:
            return None
        img_q = _find_image(index, desc_q.doc_id, desc_q.image_id)
        img_c = _find_image(index, desc_c.doc_id, desc_c.image_id)
        if img_q is None or img_c is None:
            return None
        sim = imagedetect.positional_text_match(img_q.ocr_tokens, img_c.ocr_tokens)
        return 1.0 - sim
    return None


def _find_image(index: IndexStore, doc_id: str, image_id: str):
    doc = index.docs.get(doc_id)
    if doc is None:
        return None
    for img in doc.images:
        if img.image_id == image_id:
            return img
    return None


def _retrieve_image_candidates(index: IndexStore, query_doc: DocumentRecord) -> dict[str, float]:
    scores: dict[str, float] = {}
    query_descs = [
        IndexStore._describe_image(query_doc.doc_id, img) for img in query_doc.images
    ]
    for desc_q in query_descs:
        for method in IMAGE_METHODS_BY_TYPE[desc_q.image_type]:
            entries: list[tuple[float, str]] = []
            for doc_id, descs in index.images.items():
                if doc_id == query_doc.doc_id:
                    continue
                for desc_c in descs:
                    d = _image_pair_distance(method, desc_q, desc_c, index)
                    if d is not None and not math.isinf(d):
                        entries.append((d, doc_id))
            if len(entries) < 2:
                continue
            entries.sort()
            result = imagedetect.suspiciousness_score([d for d, _ in entries])
            if result.score < imagedetect.REPORTING_THRESHOLD:
                continue
            outliers = entries[: result.outlier_count]
            seen: list[str] = []
            for _, doc_id in outliers:
                if doc_id not in seen:
                    seen.append(doc_id)
                if len(seen) >= IMAGE_CANDIDATE_CAP:
                    break
            for doc_id in seen:
                scores[doc_id] = max(scores.get(doc_id, 0.0), result.score)
    return scores


def _rel_span(start: float, end: float, total: float) -> list[float]:
    if total <= 0:
        return [0.0, 0.0]
    return [max(0.0, min(1.0, start / total)), max(0.0, min(1.0, end / total))]


def _citation_rel(doc: DocumentRecord, idx_start: int, idx_end: int) -> list[float]:
    total = len(doc.text) or 1
    marks = doc.citations
    if not marks:
        return [0.0, 0.0]
    lo = marks[min(idx_start, len(marks) - 1)].char_offset
    hi = marks[min(idx_end - 1, len(marks) - 1)].char_offset
    return _rel_span(lo, hi + 1, total)


def _merge_diagonal_pairs(pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Collapse (i,j),(i+1,j+1),... chains into (start_i, start_j, length)."""
    runs: list[tuple[int, int, int]] = []
    for i, j in pairs:
        if runs and runs[-1][0] + runs[-1][2] == i and runs[-1][1] + runs[-1][2] == j:
            runs[-1] = (runs[-1][0], runs[-1][1], runs[-1][2] + 1)
        else:
            runs.append((i, j, 1))
    return runs


def _citation_items(doc_a, doc_b, runs: list[tuple[int, int, int]], cap: int) -> list[dict]:
    items = []
    for s1, s2, length in runs[:cap]:
        items.append(
            {
                "unit": "citation",
                "a_start": s1,
                "a_end": s1 + length,
                "b_start": s2,
                "b_end": s2 + length,
                "a_rel": _citation_rel(doc_a, s1, s1 + length),
                "b_rel": _citation_rel(doc_b, s2, s2 + length),
                "label": None,
            }
        )
    return items


def _identifier_items(doc_a, doc_b, runs: list[tuple[int, int, int]], cap: int) -> list[dict]:
    na = len(doc_a.identifiers) or 1
    nb = len(doc_b.identifiers) or 1
    items = []
    for s1, s2, length in runs[:cap]:
        items.append(
            {
                "unit": "identifier",
                "a_start": s1,
                "a_end": s1 + length,
                "b_start": s2,
                "b_end": s2 + length,
                "a_rel": [s1 / na, (s1 + length) / na],
                "b_rel": [s2 / nb, (s2 + length) / nb],
                "label": None,
            }
        )
    return items


def _char_items(doc_a, doc_b, spans: list[tuple[int, int, int, int]], cap: int) -> list[dict]:
    la = len(doc_a.text) or 1
    lb = len(doc_b.text) or 1
    items = []
    for a_start, a_end, b_start, b_end in spans[:cap]:
        items.append(
            {
                "unit": "char",
                "a_start": a_start,
                "a_end": a_end,
                "b_start": b_start,
                "b_end": b_end,
                "a_rel": _rel_span(a_start, a_end, la),
                "b_rel": _rel_span(b_start, b_end, lb),
                "label": None,
            }
        )
    return items


def _score_citation_method(method, doc_a, doc_b, config) -> MethodScore:
    outcome = citedetect.citation_method_score(method, doc_a, doc_b)
    evidence: list[dict] = []
    cap = config.max_evidence_items
    if method in ("lccs", "lccs_distinct") and outcome.evidence is not None:
        runs = _merge_diagonal_pairs(outcome.evidence.index_pairs)
        evidence = _citation_items(doc_a, doc_b, runs, cap)
    elif method == "max_gct" and outcome.evidence is not None:
        runs = [(t.s1, t.s2, t.l) for t in outcome.evidence]
        evidence = _citation_items(doc_a, doc_b, runs, cap)
    elif method in ("cc_bcn", "cc_bpn") and outcome.evidence is not None:
        for m in outcome.evidence[:cap]:
            evidence.append(
                {
                    "unit": "citation",
                    "a_start": m.chunk_a.start_index,
                    "a_end": m.chunk_a.end_index + 1,
                    "b_start": m.chunk_b.start_index,
                    "b_end": m.chunk_b.end_index + 1,
                    "a_rel": _citation_rel(doc_a, m.chunk_a.start_index, m.chunk_a.end_index + 1),
                    "b_rel": _citation_rel(doc_b, m.chunk_b.start_index, m.chunk_b.end_index + 1),
                    "label": f"overlap={m.overlap}",
                }
            )
    elif method == "bc_abs" or method == "bc_rel":
        shared = sorted(
            {r.ref_key for r in doc_a.references} & {r.ref_key for r in doc_b.references}
        )
        seq_a = citation_sequence(doc_a)
        seq_b = citation_sequence(doc_b)
        for key in shared[:cap]:
            if key in seq_a and key in seq_b:
                ia, ib = seq_a.index(key), seq_b.index(key)
                evidence.append(
                    {
                        "unit": "citation",
                        "a_start": ia,
                        "a_end": ia + 1,
                        "b_start": ib,
                        "b_end": ib + 1,
                        "a_rel": _citation_rel(doc_a, ia, ia + 1),
                        "b_rel": _citation_rel(doc_b, ib, ib + 1),
                        "label": key,
                    }
                )
    return MethodScore(method=method, score=outcome.score, raw=outcome.raw, evidence=evidence)


def _score_math_method(method, doc_a, doc_b, config) -> MethodScore:
    cap = config.max_evidence_items
    if method == "histo":
        score = mathdetect.histo_similarity(doc_a, doc_b, floor=config.identifier_floor)
        return MethodScore(method=method, score=score, raw=score, evidence=[])
    if method == "lcis":
        score = mathdetect.lcis_score(doc_a, doc_b, floor=config.identifier_floor)
        pairs = seqmatch.lcs_pairs(doc_a.identifiers, doc_b.identifiers)
        runs = _merge_diagonal_pairs(pairs)
        raw = float(len(pairs))
        return MethodScore(
            method=method,
            score=score,
            raw=raw,
            evidence=_identifier_items(doc_a, doc_b, runs, cap),
        )
    if method == "git":
        score = mathdetect.git_score(
            doc_a, doc_b, min_tile=config.git_min_tile, floor=config.identifier_floor
        )
        tiles = mathdetect.git_tiles(doc_a, doc_b, min_tile=config.git_min_tile)
        runs = [(t.s1, t.s2, t.l) for t in tiles]
        raw = float(sum(t.l for t in tiles))
        return MethodScore(
            method=method,
            score=score,
            raw=raw,
            evidence=_identifier_items(doc_a, doc_b, runs, cap),
        )
    raise UnknownMethod(method)


def _score_text_method(method, doc_a, doc_b, config) -> MethodScore:
    cap = config.max_evidence_items
    if method == "sherlock":
        fp_a = textdetect.build_fingerprint(
            tokenize_text(doc_a), config.ngram_len, config.retention_zero_bits
        )
        fp_b = textdetect.build_fingerprint(
            tokenize_text(doc_b), config.ngram_len, config.retention_zero_bits
        )
        pct = textdetect.fingerprint_similarity(fp_a, fp_b)
        return MethodScore(method=method, score=pct / 100.0, raw=pct, evidence=[])
    if method == "encoplot":
        matches = textdetect.encoplot_matches(
            doc_a.text, doc_b.text, lowercase=config.encoplot_lowercase
        )
        pct = textdetect.encoplot_score(matches, doc_a.text, doc_b.text)
        runs = _merge_diagonal_pairs(matches)
        spans = [(s1, s1 + l + textdetect.GRAM_LEN - 1, s2, s2 + l + textdetect.GRAM_LEN - 1) for s1, s2, l in runs]
        spans.sort()
        return MethodScore(
            method=method,
            score=pct / 100.0,
            raw=pct,
            evidence=_char_items(doc_a, doc_b, spans, cap),
        )
    if method == "substrings":
        spans = textdetect.common_substrings(
            tokenize_text(doc_a),
            tokenize_text(doc_b),
            min_tokens=config.min_substring_tokens,
            min_chars=config.min_substring_chars,
        )
        covered = sum(s.a_end - s.a_start for s in spans)
        score = min(1.0, covered / len(doc_a.text)) if doc_a.text else 0.0
        return MethodScore(
            method=method,
            score=score,
            raw=float(len(spans)),
            evidence=_char_items(
                doc_a, doc_b, [(s.a_start, s.a_end, s.b_start, s.b_end) for s in spans], cap
            ),
        )
    raise UnknownMethod(method)


def _score_image_method(method, doc_a, doc_b, config) -> MethodScore:
    descs_a = [IndexStore._describe_image(doc_a.doc_id, img) for img in doc_a.images]
    descs_b = [IndexStore._describe_image(doc_b.doc_id, img) for img in doc_b.images]
    na = len(doc_a.images) or 1
    nb = len(doc_b.images) or 1
    evidence = []
    best_sim = None
    for ia, da in enumerate(descs_a):
        if method not in IMAGE_METHODS_BY_TYPE[da.image_type]:
            continue
        for ib, db in enumerate(descs_b):
            if method == "pos_tm":
                if not da.has_ocr or not db.has_ocr:
                    continue
                sim = imagedetect.positional_text_match(
                    doc_a.images[ia].ocr_tokens, doc_b.images[ib].ocr_tokens
                )
                dist = 1.0 - sim
            else:
                dist = _image_pair_distance(method, da, db, None)
                if dist is None:
                    continue
                if method == "phash":
                    sim = 1.0 - dist / 64.0
                else:
                    sim = 1.0 / (1.0 + dist) if not math.isinf(dist) else 0.0
            if best_sim is None or sim > best_sim:
                best_sim = sim
            evidence.append(
                {
                    "unit": "image",
                    "a_start": ia,
                    "a_end": ia + 1,
                    "b_start": ib,
                    "b_end": ib + 1,
                    "a_rel": [ia / na, (ia + 1) / na],
                    "b_rel": [ib / nb, (ib + 1) / nb],
                    "label": f"{da.image_id}:{db.image_id} d={dist:.4g}",
                }
            )
    if best_sim is None:
        return MethodScore(method=method, score=None, raw=None, evidence=[])
    return MethodScore(method=method, score=best_sim, raw=best_sim, evidence=evidence)


def score_method(
    method: str, doc_a: DocumentRecord, doc_b: DocumentRecord, config: AnalysisConfig
) -> MethodScore:
    """Compute one method score for a pair; detector errors are recorded on
    the MethodScore instead of propagating."""
    if method not in ALL_METHODS:
        raise UnknownMethod(f"unknown method '{method}'")
    try:
        if method in CITATION_METHODS:
            return _score_citation_method(method, doc_a, doc_b, config)
        if method in MATH_METHODS:
            return _score_math_method(method, doc_a, doc_b, config)
        if method in TEXT_METHODS:
            return _score_text_method(method, doc_a, doc_b, config)
        return _score_image_method(method, doc_a, doc_b, config)
    except NontextPdError as exc:
        return MethodScore(method=method, error=f"{type(exc).__name__}: {exc}")


def analyze_pair(
    doc_a: DocumentRecord,
    doc_b: DocumentRecord,
    methods: Sequence[str],
    config: AnalysisConfig | None = None,
    thresholds: dict[str, float] | None = None,
) -> CandidateAnalysis:
    """Direct pairwise analysis; the pipeline applies no score transformation
    beyond what the detector modules return."""
    config = config or AnalysisConfig()
    scores = [score_method(m, doc_a, doc_b, config) for m in methods]
    analysis = CandidateAnalysis(
        doc_id=doc_b.doc_id,
        title=doc_b.title,
        authors=doc_b.authors,
        year=doc_b.year,
        scores=scores,
    )
    _flag_scores(analysis, thresholds if thresholds is not None else DEFAULT_THRESHOLDS)
    return analysis


def _flag_scores(candidate: CandidateAnalysis, thresholds: dict[str, float]) -> None:
    for ms in candidate.scores:
        threshold = thresholds.get(ms.method)
        ms.flagged = (
            threshold is not None and ms.score is not None and ms.score >= threshold
        )


def detailed_analysis(
    index: IndexStore,
    query_doc: DocumentRecord,
    candidate_ids: Sequence[str],
    methods: Sequence[str],
    config: AnalysisConfig | None = None,
    thresholds: dict[str, float] | None = None,
) -> AnalysisResult:
    """Pairwise comparison of the query against every candidate with every
    requested method; per-method errors are recorded per pair and never abort
    the batch. Candidates are ordered by their best score, then doc_id."""
    for m in methods:
        if m not in ALL_METHODS:
            raise UnknownMethod(f"unknown method '{m}'")
    config = config or AnalysisConfig()
    candidates = []
    for doc_id in candidate_ids:
        cand_doc = index.docs.get(doc_id)
        if cand_doc is None or doc_id == query_doc.doc_id:
            continue
        candidates.append(analyze_pair(query_doc, cand_doc, methods, config, thresholds))

    def sort_key(c: CandidateAnalysis):
        best = max((s.score for s in c.scores if s.score is not None), default=0.0)
        return (-best, c.doc_id)

    candidates.sort(key=sort_key)
    return AnalysisResult(
        query_doc_id=query_doc.doc_id, methods=list(methods), candidates=candidates
    )


def apply_thresholds(
    result: AnalysisResult, thresholds: dict[str, float] | None = None
) -> AnalysisResult:
    """Re-flag every method score against the given significance thresholds
    (defaults above)."""
    thresholds = thresholds if thresholds is not None else DEFAULT_THRESHOLDS
    for candidate in result.candidates:
        _flag_scores(candidate, thresholds)
    return result


def pool_top_n(
    rankings: dict[str, Sequence[tuple[str, str]]], n: int = 30
) -> list[dict]:
    """Union of each method's top-n document pairs, deduplicated, with the
    contributing methods and ranks retained."""
    pooled: dict[tuple[str, str], dict] = {}
    for method, pairs in sorted(rankings.items()):
        for rank, pair in enumerate(pairs[:n], start=1):
            key = tuple(pair)
            entry = pooled.setdefault(key, {"pair": key, "sources": {}})
            entry["sources"][method] = rank
    return sorted(pooled.values(), key=lambda e: e["pair"])


def exclusion_filters(
    pairs: Sequence[tuple[str, str]],
    docs: dict[str, DocumentRecord],
    shared_author: bool = True,
    cites_other: bool = True,
) -> dict:
    """Drop pairs with a common author and pairs where the later document
    cites the earlier one; pairs lacking the needed metadata are kept and
    reported as warnings."""

    def norm_author(name: str) -> str:
        return " ".join(name.casefold().split())

    def norm_title(title: str) -> str:
        return " ".join(title.casefold().split())

    def doc_cites(later: DocumentRecord, earlier: DocumentRecord) -> bool:
        earlier_title = norm_title(earlier.title)
        for ref in later.references:
            if ref.ref_key == earlier.doc_id:
                return True
            if earlier_title and norm_title(ref.title) == earlier_title:
                return True
        return False

    kept, excluded, warnings = [], [], []
    for pair in pairs:
        a, b = docs[pair[0]], docs[pair[1]]
        if shared_author:
            authors_a = {norm_author(x) for x in a.authors if x.strip()}
            authors_b = {norm_author(x) for x in b.authors if x.strip()}
            if not authors_a or not authors_b:
                warnings.append({"pair": pair, "reason": "missing author metadata"})
            elif authors_a & authors_b:
                excluded.append({"pair": pair, "rule": "shared_author"})
                continue
        if cites_other:
            if a.year is None or b.year is None:
                warnings.append({"pair": pair, "reason": "missing year metadata"})
            else:
                later, earlier = (a, b) if a.year > b.year else (b, a)
                candidates = [(later, earlier)] if a.year != b.year else [(a, b), (b, a)]
                if any(doc_cites(l, e) for l, e in candidates):
                    excluded.append({"pair": pair, "rule": "cites_other"})
                    continue
        kept.append(pair)
    return {"kept": kept, "excluded": excluded, "warnings": warnings}


def retrieval_union(
    index: IndexStore,
    query_doc: DocumentRecord,
    methods: Sequence[str] = RETRIEVAL_METHODS,
    k: int = DEFAULT_CANDIDATES,
) -> list[str]:
    """Union of the per-class candidate sets, preserving best-score order."""
    best: dict[str, float] = {}
    for method in methods:
        cs = retrieve_candidates(index, query_doc, method, k)
        for doc_id, score in cs.entries:
            best[doc_id] = max(best.get(doc_id, float("-inf")), score)
    return [doc_id for doc_id, _ in sorted(best.items(), key=lambda x: (-x[1], x[0]))]
