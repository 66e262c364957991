"""Inverted index over references, citations, identifiers, text signatures,
and image descriptors, with directory persistence."""

from __future__ import annotations

import json
from bisect import insort
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from . import imagedetect, textdetect
from .docmodel import DocumentRecord, document_to_dict, load_document
from .errors import DuplicateDocId, NoBarsFound, SchemaError

INDEX_FORMAT_VERSION = "1"

# method applicability by declared image type: photographs and bar charts are
# served by their specialist method alone; everything else gets the hash plus
# both OCR text methods
IMAGE_METHODS_BY_TYPE = {
    "photo": ("phash",),
    "bar_chart": ("ratio_hash",),
    "table": ("phash", "ngram_tm", "pos_tm"),
    "line_chart": ("phash", "ngram_tm", "pos_tm"),
    "diagram": ("phash", "ngram_tm", "pos_tm"),
    "other": ("phash", "ngram_tm", "pos_tm"),
}


@dataclass
class ImageDescriptor:
    doc_id: str
    image_id: str
    image_type: str
    phash: Optional[int] = None
    phash_degenerate: bool = False
    trigrams: Optional[frozenset] = None
    ratios: Optional[tuple[float, ...]] = None
    has_ocr: bool = False


@dataclass
class DocStats:
    n_references: int
    n_citations: int
    n_identifiers: int
    n_signatures: int


class IndexStore:
    """In-memory posting lists plus resident documents.

    Writes are single-threaded; after building, the store is treated as an
    immutable snapshot readable by any number of analysis workers.
    """

    def __init__(
        self,
        ngram_len: int = textdetect.DEFAULT_NGRAM_LEN,
        retention_zero_bits: int = textdetect.DEFAULT_RETENTION_ZERO_BITS,
    ):
        self.ngram_len = ngram_len
        self.retention_zero_bits = retention_zero_bits
        self.docs: dict[str, DocumentRecord] = {}
        self.doc_stats: dict[str, DocStats] = {}
        self.ref_postings: dict[str, list[str]] = {}
        self.cit_postings: dict[str, list[str]] = {}
        self.ident_postings: dict[str, list[tuple[str, int]]] = {}
        self.sig_postings: dict[int, list[str]] = {}
        self.fingerprints: dict[str, tuple[int, ...]] = {}
        self.images: dict[str, list[ImageDescriptor]] = {}

    def __len__(self) -> int:
        return len(self.docs)

    def add(self, doc: DocumentRecord) -> None:
        if doc.doc_id in self.docs:
            raise DuplicateDocId(f"doc_id '{doc.doc_id}' already indexed")
        self.docs[doc.doc_id] = doc

        for ref in doc.references:
            insort(self.ref_postings.setdefault(ref.ref_key, []), doc.doc_id)
        cited = sorted({c.ref_key for c in doc.citations})
        for key in cited:
            insort(self.cit_postings.setdefault(key, []), doc.doc_id)

        counts: dict[str, int] = {}
        for token in doc.identifiers:
            counts[token] = counts.get(token, 0) + 1
        for token, tf in counts.items():
            insort(self.ident_postings.setdefault(token, []), (doc.doc_id, tf))

        from .docmodel import tokenize_text

        fp = textdetect.build_fingerprint(
            tokenize_text(doc), self.ngram_len, self.retention_zero_bits
        )
        self.fingerprints[doc.doc_id] = fp.signatures
        for sig in sorted(set(fp.signatures)):
            insort(self.sig_postings.setdefault(sig, []), doc.doc_id)

        self.images[doc.doc_id] = [self._describe_image(doc.doc_id, img) for img in doc.images]
        self.doc_stats[doc.doc_id] = DocStats(
            n_references=len(doc.references),
            n_citations=len(doc.citations),
            n_identifiers=len(doc.identifiers),
            n_signatures=len(set(fp.signatures)),
        )

    @staticmethod
    def _describe_image(doc_id: str, img) -> ImageDescriptor:
        desc = ImageDescriptor(doc_id=doc_id, image_id=img.image_id, image_type=img.image_type)
        methods = IMAGE_METHODS_BY_TYPE[img.image_type]
        if "phash" in methods and img.pixels is not None:
            h = imagedetect.dct_phash(img.pixels)
            desc.phash = h.bits
            desc.phash_degenerate = h.degenerate
        if "ratio_hash" in methods:
            heights = img.bar_heights
            if heights is None and img.pixels is not None:
                try:
                    heights = tuple(imagedetect.extract_bar_heights(img.pixels))
                except NoBarsFound:
                    heights = None
            if heights:
                desc.ratios = imagedetect.ratio_hash(heights).ratios
        if ("ngram_tm" in methods or "pos_tm" in methods) and img.ocr_tokens:
            desc.trigrams = imagedetect.trigram_descriptor(img.ocr_tokens)
            desc.has_ocr = True
        return desc

    def remove(self, doc_id: str) -> None:
        doc = self.docs.pop(doc_id, None)
        if doc is None:
            raise KeyError(doc_id)
        for ref in doc.references:
            postings = self.ref_postings.get(ref.ref_key, [])
            if doc_id in postings:
                postings.remove(doc_id)
            if not postings:
                self.ref_postings.pop(ref.ref_key, None)
        for key in {c.ref_key for c in doc.citations}:
            postings = self.cit_postings.get(key, [])
            if doc_id in postings:
                postings.remove(doc_id)
            if not postings:
                self.cit_postings.pop(key, None)
        for token in set(doc.identifiers):
            postings = self.ident_postings.get(token, [])
            self.ident_postings[token] = [p for p in postings if p[0] != doc_id]
            if not self.ident_postings[token]:
                self.ident_postings.pop(token, None)
        for sig in set(self.fingerprints.get(doc_id, ())):
            postings = self.sig_postings.get(sig, [])
            if doc_id in postings:
                postings.remove(doc_id)
            if not postings:
                self.sig_postings.pop(sig, None)
        self.fingerprints.pop(doc_id, None)
        self.images.pop(doc_id, None)
        self.doc_stats.pop(doc_id, None)

    def save(self, directory: str | Path) -> None:
        path = Path(directory)
        path.mkdir(parents=True, exist_ok=True)
        manifest = {
            "format_version": INDEX_FORMAT_VERSION,
            "type": "nontext-pd-index",
            "config": {
                "ngram_len": self.ngram_len,
                "retention_zero_bits": self.retention_zero_bits,
            },
            "documents": len(self.docs),
        }
        (path / "manifest.json").write_text(json.dumps(manifest, sort_keys=True))
        with open(path / "documents.jsonl", "w", encoding="utf-8") as fh:
            for doc_id in sorted(self.docs):
                fh.write(json.dumps(document_to_dict(self.docs[doc_id]), sort_keys=True))
                fh.write("\n")
        self._write_postings(path / "postings_references.jsonl", self.ref_postings)
        self._write_postings(path / "postings_citations.jsonl", self.cit_postings)
        with open(path / "postings_identifiers.jsonl", "w", encoding="utf-8") as fh:
            for term in sorted(self.ident_postings):
                entry = {"term": term, "docs": [[d, tf] for d, tf in self.ident_postings[term]]}
                fh.write(json.dumps(entry, sort_keys=True))
                fh.write("\n")
        with open(path / "postings_signatures.jsonl", "w", encoding="utf-8") as fh:
            for sig in sorted(self.sig_postings):
                fh.write(json.dumps({"term": sig, "docs": self.sig_postings[sig]}))
                fh.write("\n")
        with open(path / "fingerprints.jsonl", "w", encoding="utf-8") as fh:
            for doc_id in sorted(self.fingerprints):
                fh.write(json.dumps({"doc_id": doc_id, "signatures": list(self.fingerprints[doc_id])}))
                fh.write("\n")
        with open(path / "images.jsonl", "w", encoding="utf-8") as fh:
            for doc_id in sorted(self.images):
                for d in self.images[doc_id]:
                    fh.write(
                        json.dumps(
                            {
                                "doc_id": d.doc_id,
                                "image_id": d.image_id,
                                "image_type": d.image_type,
                                "phash": d.phash,
                                "phash_degenerate": d.phash_degenerate,
                                "trigrams": sorted(d.trigrams) if d.trigrams is not None else None,
                                "ratios": list(d.ratios) if d.ratios is not None else None,
                                "has_ocr": d.has_ocr,
                            },
                            sort_keys=True,
                        )
                    )
                    fh.write("\n")

    @staticmethod
    def _write_postings(path: Path, postings: dict[str, list[str]]) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for term in sorted(postings):
                fh.write(json.dumps({"term": term, "docs": postings[term]}))
                fh.write("\n")

    @classmethod
    def load(cls, directory: str | Path) -> "IndexStore":
        path = Path(directory)
        manifest_path = path / "manifest.json"
        if not manifest_path.exists():
            raise SchemaError(f"no index manifest in {path}")
        manifest = json.loads(manifest_path.read_text())
        if manifest.get("type") != "nontext-pd-index":
            raise SchemaError("not a nontext-pd index directory")
        config = manifest.get("config", {})
        store = cls(
            ngram_len=config.get("ngram_len", textdetect.DEFAULT_NGRAM_LEN),
            retention_zero_bits=config.get(
                "retention_zero_bits", textdetect.DEFAULT_RETENTION_ZERO_BITS
            ),
        )
        with open(path / "documents.jsonl", encoding="utf-8") as fh:
            for line in fh:
                doc = load_document(line)
                store.docs[doc.doc_id] = doc
        store.ref_postings = cls._read_postings(path / "postings_references.jsonl")
        store.cit_postings = cls._read_postings(path / "postings_citations.jsonl")
        with open(path / "postings_identifiers.jsonl", encoding="utf-8") as fh:
            for line in fh:
                entry = json.loads(line)
                store.ident_postings[entry["term"]] = [(d, tf) for d, tf in entry["docs"]]
        with open(path / "postings_signatures.jsonl", encoding="utf-8") as fh:
            for line in fh:
                entry = json.loads(line)
                store.sig_postings[int(entry["term"])] = list(entry["docs"])
        with open(path / "fingerprints.jsonl", encoding="utf-8") as fh:
            for line in fh:
                entry = json.loads(line)
                store.fingerprints[entry["doc_id"]] = tuple(entry["signatures"])
        images_path = path / "images.jsonl"
        if images_path.exists():
            with open(images_path, encoding="utf-8") as fh:
                for line in fh:
                    entry = json.loads(line)
                    desc = ImageDescriptor(
                        doc_id=entry["doc_id"],
                        image_id=entry["image_id"],
                        image_type=entry["image_type"],
                        phash=entry.get("phash"),
                        phash_degenerate=entry.get("phash_degenerate", False),
                        trigrams=frozenset(entry["trigrams"])
                        if entry.get("trigrams") is not None
                        else None,
                        ratios=tuple(entry["ratios"]) if entry.get("ratios") is not None else None,
                        has_ocr=entry.get("has_ocr", False),
                    )
                    store.images.setdefault(entry["doc_id"], []).append(desc)
        for doc_id, doc in store.docs.items():
            store.images.setdefault(doc_id, [])
            store.doc_stats[doc_id] = DocStats(
                n_references=len(doc.references),
                n_citations=len(doc.citations),
                n_identifiers=len(doc.identifiers),
                n_signatures=len(set(store.fingerprints.get(doc_id, ()))),
            )
        return store

    @staticmethod
    def _read_postings(path: Path) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                entry = json.loads(line)
                out[entry["term"]] = list(entry["docs"])
        return out


def build_index(
    docs: Iterable[DocumentRecord],
    ngram_len: int = textdetect.DEFAULT_NGRAM_LEN,
    retention_zero_bits: int = textdetect.DEFAULT_RETENTION_ZERO_BITS,
) -> IndexStore:
    store = IndexStore(ngram_len=ngram_len, retention_zero_bits=retention_zero_bits)
    for doc in docs:
        store.add(doc)
    return store
