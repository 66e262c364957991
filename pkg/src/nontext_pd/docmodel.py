"""Normalized document model: loading, validation, and per-method feature views.

Documents arrive as JSON records (schema documented in the README, field
``format_version: "1"``). All similarity methods operate on the validated,
immutable :class:`DocumentRecord` built here.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from .errors import (
    DanglingCitation,
    DuplicateRefKey,
    OffsetOutOfRange,
    SchemaError,
)

FORMAT_VERSION = "1"

IMAGE_TYPES = ("photo", "bar_chart", "table", "line_chart", "diagram", "other")
OFFSET_UNITS = ("byte", "codepoint")

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class CitationMarker:
    """In-text citation: a short string at char_offset pointing to a reference.

    word/sentence/paragraph indices are optional; they are only needed by
    detectors that measure citation proximity in those text units.
    """

    ref_key: str
    char_offset: int
    word_index: Optional[int] = None
    sentence_index: Optional[int] = None
    paragraph_index: Optional[int] = None


@dataclass(frozen=True)
class ReferenceEntry:
    """Bibliography entry. ref_key is unique within a document and globally
    identifies the referenced work across the collection."""

    ref_key: str
    title: str = ""
    authors: tuple[str, ...] = ()
    year: Optional[int] = None


@dataclass(frozen=True)
class OcrToken:
    """A recognized character or word with its position in source-image pixels."""

    text: str
    x: float
    y: float
    img_height: float


@dataclass(frozen=True)
class Raster:
    """8-bit grayscale raster, row-major."""

    width: int
    height: int
    values: tuple[int, ...]

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64).reshape(self.height, self.width)


@dataclass(frozen=True)
class ImageRecord:
    image_id: str
    image_type: str = "other"
    pixels: Optional[Raster] = None
    bar_heights: Optional[tuple[float, ...]] = None
    ocr_tokens: Optional[tuple[OcrToken, ...]] = None


@dataclass(frozen=True)
class DocumentRecord:
    """Validated normalized document; immutable and safe to share across threads."""

    doc_id: str
    text: str = ""
    title: str = ""
    authors: tuple[str, ...] = ()
    year: Optional[int] = None
    citations: tuple[CitationMarker, ...] = ()
    references: tuple[ReferenceEntry, ...] = ()
    identifiers: tuple[str, ...] = ()
    numbers: tuple[str, ...] = ()
    operators: tuple[str, ...] = ()
    images: tuple[ImageRecord, ...] = ()
    offset_unit: str = "byte"


@dataclass(frozen=True)
class WordToken:
    """Lowercased word token; start/end are codepoint offsets into the text."""

    text: str
    start: int
    end: int


def _require(obj: dict, key: str, ctx: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{ctx}: missing field '{key}'")
    return obj[key]


def _str_list(value: Any, ctx: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"{ctx}: expected a list of strings")
    return tuple(value)


def _opt_int(value: Any, ctx: str) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{ctx}: expected an integer or null")
    return value


def _parse_citation(obj: Any, ctx: str) -> CitationMarker:
    if not isinstance(obj, dict):
        raise SchemaError(f"{ctx}: citation must be an object")
    ref_key = _require(obj, "ref_key", ctx)
    char_offset = _require(obj, "char_offset", ctx)
    if not isinstance(ref_key, str) or not ref_key:
        raise SchemaError(f"{ctx}: ref_key must be a nonempty string")
    if isinstance(char_offset, bool) or not isinstance(char_offset, int):
        raise SchemaError(f"{ctx}: char_offset must be an integer")
    return CitationMarker(
        ref_key=ref_key,
        char_offset=char_offset,
        word_index=_opt_int(obj.get("word_index"), ctx),
        sentence_index=_opt_int(obj.get("sentence_index"), ctx),
        paragraph_index=_opt_int(obj.get("paragraph_index"), ctx),
    )


def _parse_reference(obj: Any, ctx: str) -> ReferenceEntry:
    if not isinstance(obj, dict):
        raise SchemaError(f"{ctx}: reference must be an object")
    ref_key = _require(obj, "ref_key", ctx)
    if not isinstance(ref_key, str) or not ref_key:
        raise SchemaError(f"{ctx}: ref_key must be a nonempty string")
    return ReferenceEntry(
        ref_key=ref_key,
        title=obj.get("title", ""),
        authors=_str_list(obj.get("authors", []), ctx),
        year=_opt_int(obj.get("year"), ctx),
    )


def _parse_raster(obj: Any, ctx: str, base_dir: Optional[Path]) -> Raster:
    if isinstance(obj, str):
        path = Path(obj)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise SchemaError(f"{ctx}: cannot read PGM file {path}: {exc}") from exc
        return read_pgm(data)
    if not isinstance(obj, dict):
        raise SchemaError(f"{ctx}: pixels must be an object or a PGM path")
    width = _require(obj, "width", ctx)
    height = _require(obj, "height", ctx)
    values = _require(obj, "values", ctx)
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise SchemaError(f"{ctx}: width/height must be positive integers")
    if not isinstance(values, list) or len(values) != width * height:
        raise SchemaError(f"{ctx}: values must hold width*height entries")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= 255:
            raise SchemaError(f"{ctx}: pixel values must be integers in [0, 255]")
    return Raster(width=width, height=height, values=tuple(values))


def _parse_image(obj: Any, ctx: str, base_dir: Optional[Path]) -> ImageRecord:
    if not isinstance(obj, dict):
        raise SchemaError(f"{ctx}: image must be an object")
    image_id = _require(obj, "image_id", ctx)
    image_type = obj.get("image_type", "other")
    if image_type not in IMAGE_TYPES:
        raise SchemaError(f"{ctx}: unknown image_type '{image_type}'")
    pixels = obj.get("pixels")
    raster = _parse_raster(pixels, ctx, base_dir) if pixels is not None else None
    bar_heights = obj.get("bar_heights")
    if bar_heights is not None:
        if not isinstance(bar_heights, list) or any(
            not isinstance(h, (int, float)) or isinstance(h, bool) or h < 0 for h in bar_heights
        ):
            raise SchemaError(f"{ctx}: bar_heights must be non-negative numbers")
        bar_heights = tuple(float(h) for h in bar_heights)
    ocr_tokens = obj.get("ocr_tokens")
    if ocr_tokens is not None:
        parsed = []
        for tok in ocr_tokens:
            if not isinstance(tok, dict):
                raise SchemaError(f"{ctx}: ocr token must be an object")
            x, y = tok.get("x"), tok.get("y")
            img_height = tok.get("img_height")
            text = tok.get("text")
            if not isinstance(text, str) or not text:
                raise SchemaError(f"{ctx}: ocr token text must be a nonempty string")
            if any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in (x, y, img_height)):
                raise SchemaError(f"{ctx}: ocr token x/y/img_height must be numbers")
            if x < 0 or y < 0 or img_height <= 0:
                raise SchemaError(f"{ctx}: ocr token coordinates out of range")
            parsed.append(OcrToken(text=text, x=float(x), y=float(y), img_height=float(img_height)))
        ocr_tokens = tuple(parsed)
    if raster is None and bar_heights is None and ocr_tokens is None:
        raise SchemaError(f"{ctx}: image needs at least one of pixels/bar_heights/ocr_tokens")
    return ImageRecord(
        image_id=image_id,
        image_type=image_type,
        pixels=raster,
        bar_heights=bar_heights,
        ocr_tokens=ocr_tokens,
    )


def text_length(doc: DocumentRecord) -> int:
    """Length of the text in the document's declared offset unit."""
    if doc.offset_unit == "byte":
        return len(doc.text.encode("utf-8"))
    return len(doc.text)


def validate_document(doc: DocumentRecord) -> DocumentRecord:
    """Check all DocumentRecord invariants; returns the record unchanged."""
    if not doc.doc_id:
        raise SchemaError("doc_id must be nonempty")
    if doc.offset_unit not in OFFSET_UNITS:
        raise SchemaError(f"unknown offset_unit '{doc.offset_unit}'")
    seen = set()
    for ref in doc.references:
        if ref.ref_key in seen:
            raise DuplicateRefKey(f"{doc.doc_id}: duplicate reference key '{ref.ref_key}'")
        seen.add(ref.ref_key)
    limit = text_length(doc)
    prev_offset = -1
    prev_units = {"word_index": -1, "sentence_index": -1, "paragraph_index": -1}
    for cit in doc.citations:
        if not 0 <= cit.char_offset <= limit:
            raise OffsetOutOfRange(
                f"{doc.doc_id}: citation offset {cit.char_offset} outside [0, {limit}]"
            )
        if cit.ref_key not in seen:
            raise DanglingCitation(f"{doc.doc_id}: citation key '{cit.ref_key}' has no reference")
        if cit.char_offset < prev_offset:
            raise SchemaError(f"{doc.doc_id}: citations not sorted by char_offset")
        prev_offset = cit.char_offset
        for name in prev_units:
            value = getattr(cit, name)
            if value is None:
                continue
            if value < 0:
                raise SchemaError(f"{doc.doc_id}: negative {name}")
            if value < prev_units[name]:
                raise SchemaError(f"{doc.doc_id}: {name} not monotone with char_offset")
            prev_units[name] = value
    return doc


def load_document(data: bytes | str | dict, base_dir: str | Path | None = None) -> DocumentRecord:
    """Parse and validate a normalized document JSON record.

    ``base_dir`` resolves relative PGM pixel paths. Citations are normalized
    to ascending char_offset order (stable), so the feature views depend only
    on the marker offsets, not on input list order.
    """
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version '{version}'")
    doc_id = _require(obj, "doc_id", "document")
    if not isinstance(doc_id, str) or not doc_id:
        raise SchemaError("doc_id must be a nonempty string")
    text = _require(obj, "text", "document")
    if not isinstance(text, str):
        raise SchemaError("text must be a string")
    base = Path(base_dir) if base_dir is not None else None
    ctx = f"document '{doc_id}'"
    citations = tuple(_parse_citation(c, ctx) for c in obj.get("citations", []))
    citations = tuple(sorted(citations, key=lambda c: c.char_offset))
    references = tuple(_parse_reference(r, ctx) for r in obj.get("references", []))
    images = tuple(_parse_image(i, ctx, base) for i in obj.get("images", []))
    doc = DocumentRecord(
        doc_id=doc_id,
        text=text,
        title=obj.get("title", ""),
        authors=_str_list(obj.get("authors", []), ctx),
        year=_opt_int(obj.get("year"), ctx),
        citations=citations,
        references=references,
        identifiers=_str_list(obj.get("identifiers", []), ctx),
        numbers=_str_list(obj.get("numbers", []), ctx),
        operators=_str_list(obj.get("operators", []), ctx),
        images=images,
        offset_unit=obj.get("offset_unit", "byte"),
    )
    return validate_document(doc)


def document_to_dict(doc: DocumentRecord) -> dict:
    """Inverse of load_document; PGM paths are inlined as raster values."""
    out: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "doc_id": doc.doc_id,
        "title": doc.title,
        "authors": list(doc.authors),
        "year": doc.year,
        "text": doc.text,
        "offset_unit": doc.offset_unit,
        "citations": [
            {
                "ref_key": c.ref_key,
                "char_offset": c.char_offset,
                "word_index": c.word_index,
                "sentence_index": c.sentence_index,
                "paragraph_index": c.paragraph_index,
            }
            for c in doc.citations
        ],
        "references": [
            {
                "ref_key": r.ref_key,
                "title": r.title,
                "authors": list(r.authors),
                "year": r.year,
            }
            for r in doc.references
        ],
        "identifiers": list(doc.identifiers),
        "numbers": list(doc.numbers),
        "operators": list(doc.operators),
        "images": [],
    }
    for img in doc.images:
        entry: dict[str, Any] = {"image_id": img.image_id, "image_type": img.image_type}
        if img.pixels is not None:
            entry["pixels"] = {
                "width": img.pixels.width,
                "height": img.pixels.height,
                "values": list(img.pixels.values),
            }
        if img.bar_heights is not None:
            entry["bar_heights"] = list(img.bar_heights)
        if img.ocr_tokens is not None:
            entry["ocr_tokens"] = [
                {"text": t.text, "x": t.x, "y": t.y, "img_height": t.img_height}
                for t in img.ocr_tokens
            ]
        out["images"].append(entry)
    return out


def serialize_document(doc: DocumentRecord) -> str:
    """Canonical JSON serialization (sorted keys, stable across runs)."""
    return json.dumps(document_to_dict(doc), sort_keys=True, ensure_ascii=False)


def citation_sequence(doc: DocumentRecord) -> list[str]:
    """Ordered ref_keys of all citation markers; repeats preserved."""
    return [c.ref_key for c in doc.citations]


def tokenize_text(doc_or_text: DocumentRecord | str) -> list[WordToken]:
    """Lowercased word tokens split on non-alphanumeric runs.

    Offsets are codepoint indices into the original text, so
    ``text[t.start:t.end].lower() == t.text`` always holds.
    """
    text = doc_or_text.text if isinstance(doc_or_text, DocumentRecord) else doc_or_text
    return [
        WordToken(m.group(0).lower(), m.start(), m.end()) for m in _WORD_RE.finditer(text)
    ]


def read_pgm(data: bytes) -> Raster:
    """Parse a binary (P5) PGM image with maxval <= 255."""
    if not data.startswith(b"P5"):
        raise SchemaError("not a binary PGM (P5) file")
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise SchemaError("malformed PGM header")
        fields.append(int(token))
    pos += 1  # single whitespace byte before raster data
    width, height, maxval = fields
    if maxval > 255:
        raise SchemaError("only 8-bit PGM supported (maxval <= 255)")
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise SchemaError("PGM raster truncated")
    return Raster(width=width, height=height, values=tuple(raster))


def write_pgm(raster: Raster | np.ndarray, path: str | Path) -> None:
    if isinstance(raster, np.ndarray):
        arr = np.clip(np.rint(raster), 0, 255).astype(np.uint8)
        raster = Raster(width=arr.shape[1], height=arr.shape[0], values=tuple(int(v) for v in arr.ravel()))
    header = f"P5\n{raster.width} {raster.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + bytes(raster.values))


def _author_initials(authors: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(a.strip()[:1].casefold() for a in authors if a.strip()))


def _levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        curr = [i]
        for j, cb in enumerate(b, 1):
            curr.append(min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = curr
    return prev[-1]


def merge_references(
    docs: list[DocumentRecord], max_title_distance: int = 2
) -> list[DocumentRecord]:
    """Optional normalization pass unifying near-duplicate references.

    References across documents whose titles are within the given Levenshtein
    distance and whose author initials match get one canonical ref_key (the
    lexicographically smallest). Off by default at ingest; ref_key equality is
    the sole matching rule otherwise.
    """
    entries: list[ReferenceEntry] = []
    seen_keys = set()
    for doc in docs:
        for ref in doc.references:
            if ref.ref_key not in seen_keys:
                seen_keys.add(ref.ref_key)
                entries.append(ref)
    parent = {r.ref_key: r.ref_key for r in entries}

    def find(k: str) -> str:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for i, a in enumerate(entries):
        for b in entries[i + 1 :]:
            if abs(len(a.title) - len(b.title)) > max_title_distance:
                continue
            if _author_initials(a.authors) != _author_initials(b.authors):
                continue
            if _levenshtein(a.title.casefold(), b.title.casefold()) <= max_title_distance:
                ra, rb = find(a.ref_key), find(b.ref_key)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    mapping = {k: find(k) for k in parent}
    if all(k == v for k, v in mapping.items()):
        return list(docs)
    out = []
    for doc in docs:
        refs: list[ReferenceEntry] = []
        kept = set()
        for ref in doc.references:
            key = mapping.get(ref.ref_key, ref.ref_key)
            if key not in kept:
                kept.add(key)
                refs.append(ReferenceEntry(key, ref.title, ref.authors, ref.year))
        cits = tuple(
            CitationMarker(
                mapping.get(c.ref_key, c.ref_key),
                c.char_offset,
                c.word_index,
                c.sentence_index,
                c.paragraph_index,
            )
            for c in doc.citations
        )
        out.append(
            validate_document(
                DocumentRecord(
                    doc_id=doc.doc_id,
                    text=doc.text,
                    title=doc.title,
                    authors=doc.authors,
                    year=doc.year,
                    citations=cits,
                    references=tuple(refs),
                    identifiers=doc.identifiers,
                    numbers=doc.numbers,
                    operators=doc.operators,
                    images=doc.images,
                    offset_unit=doc.offset_unit,
                )
            )
        )
    return out
