"""Hybrid plagiarism detection engine analyzing citation patterns,
mathematical identifiers, image features, and lexical text similarity."""

from .docmodel import (
    CitationMarker,
    DocumentRecord,
    ImageRecord,
    OcrToken,
    ReferenceEntry,
    citation_sequence,
    load_document,
    serialize_document,
    tokenize_text,
)
from .index import IndexStore, build_index
from .pipeline import (
    DEFAULT_THRESHOLDS,
    AnalysisConfig,
    AnalysisResult,
    analyze_pair,
    apply_thresholds,
    detailed_analysis,
    retrieve_candidates,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisResult",
    "CitationMarker",
    "DEFAULT_THRESHOLDS",
    "DocumentRecord",
    "ImageRecord",
    "IndexStore",
    "OcrToken",
    "ReferenceEntry",
    "analyze_pair",
    "apply_thresholds",
    "build_index",
    "citation_sequence",
    "detailed_analysis",
    "load_document",
    "retrieve_candidates",
    "serialize_document",
    "tokenize_text",
    "__version__",
]
