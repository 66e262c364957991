import json

import pytest

from nontext_pd.docmodel import (
    DocumentRecord,
    Raster,
    citation_sequence,
    load_document,
    merge_references,
    read_pgm,
    serialize_document,
    tokenize_text,
    write_pgm,
)
from nontext_pd.errors import (
    DanglingCitation,
    DuplicateRefKey,
    OffsetOutOfRange,
    SchemaError,
)


def make_doc(**overrides):
    base = {
        "doc_id": "a",
        "text": "",
        "citations": [],
        "references": [],
        "identifiers": [],
        "images": [],
    }
    base.update(overrides)
    return base


def test_minimal_record_is_valid():
    doc = load_document(json.dumps(make_doc()))
    assert doc.doc_id == "a"
    assert citation_sequence(doc) == []
    assert tokenize_text(doc) == []
    assert doc.identifiers == ()


def test_dangling_citation_rejected():
    record = make_doc(
        text="see [r9]",
        citations=[{"ref_key": "r9", "char_offset": 4}],
    )
    with pytest.raises(DanglingCitation):
        load_document(json.dumps(record))


def test_duplicate_ref_key_rejected():
    record = make_doc(
        references=[
            {"ref_key": "r1", "title": "One"},
            {"ref_key": "r1", "title": "Other"},
        ]
    )
    with pytest.raises(DuplicateRefKey):
        load_document(json.dumps(record))


def test_offset_out_of_range():
    record = make_doc(
        text="ab",
        references=[{"ref_key": "r1"}],
        citations=[{"ref_key": "r1", "char_offset": 99}],
    )
    with pytest.raises(OffsetOutOfRange):
        load_document(json.dumps(record))


def test_missing_field_is_schema_error():
    with pytest.raises(SchemaError):
        load_document(json.dumps({"text": "no id"}))


def test_citation_sequence_sorted_by_offset():
    record = make_doc(
        text="x" * 20,
        references=[{"ref_key": k} for k in "ABC"],
        citations=[
            {"ref_key": "B", "char_offset": 5},
            {"ref_key": "A", "char_offset": 2},
            {"ref_key": "C", "char_offset": 9},
        ],
    )
    doc = load_document(json.dumps(record))
    assert citation_sequence(doc) == ["A", "B", "C"]


def test_citation_sequence_preserves_repeats():
    record = make_doc(
        text="x" * 10,
        references=[{"ref_key": "X"}],
        citations=[
            {"ref_key": "X", "char_offset": 1},
            {"ref_key": "X", "char_offset": 4},
        ],
    )
    doc = load_document(json.dumps(record))
    assert citation_sequence(doc) == ["X", "X"]


def test_citation_sequence_permutation_invariant():
    refs = [{"ref_key": k} for k in "ABCD"]
    cits = [
        {"ref_key": "D", "char_offset": 30},
        {"ref_key": "A", "char_offset": 1},
        {"ref_key": "C", "char_offset": 20},
        {"ref_key": "B", "char_offset": 8},
    ]
    doc1 = load_document(json.dumps(make_doc(text="y" * 40, references=refs, citations=cits)))
    doc2 = load_document(
        json.dumps(make_doc(text="y" * 40, references=refs, citations=list(reversed(cits))))
    )
    assert citation_sequence(doc1) == citation_sequence(doc2) == ["A", "B", "C", "D"]


def test_tokenizer_examples():
    assert [t.text for t in tokenize_text("A fast, fast dog")] == ["a", "fast", "fast", "dog"]
    assert tokenize_text("") == []
    assert [t.text for t in tokenize_text("x=y+1")] == ["x", "y", "1"]


def test_tokenizer_offsets_strictly_increasing_and_sliceable():
    text = "The parser splits on runs; офсеты must map back, x=y+1."
    tokens = tokenize_text(text)
    prev_end = -1
    for tok in tokens:
        assert tok.start > prev_end or prev_end == -1
        assert tok.start >= prev_end
        assert text[tok.start : tok.end].lower() == tok.text
        prev_end = tok.end
    starts = [t.start for t in tokens]
    assert starts == sorted(starts)


def test_round_trip_equality():
    record = make_doc(
        text="hello [r1] мир",
        title="Round trip",
        authors=["A. One", "B. Two"],
        year=2014,
        references=[{"ref_key": "r1", "title": "T", "authors": ["X"], "year": 2000}],
        citations=[{"ref_key": "r1", "char_offset": 6, "word_index": 1}],
        identifiers=["x", "θ_t"],
        numbers=["2"],
        operators=["+"],
        images=[
            {
                "image_id": "img1",
                "image_type": "bar_chart",
                "bar_heights": [4.0, 2.0],
            }
        ],
    )
    doc = load_document(json.dumps(record))
    again = load_document(serialize_document(doc))
    assert doc == again


def test_byte_offsets_validate_against_utf8_length():
    # text has 3 codepoints but 5 utf-8 bytes; offset 4 valid only as byte
    record = make_doc(
        text="aбв",
        references=[{"ref_key": "r1"}],
        citations=[{"ref_key": "r1", "char_offset": 4}],
    )
    doc = load_document(json.dumps(record))
    assert doc.offset_unit == "byte"
    record["offset_unit"] = "codepoint"
    with pytest.raises(OffsetOutOfRange):
        load_document(json.dumps(record))


def test_unit_indices_must_be_monotone():
    record = make_doc(
        text="z" * 30,
        references=[{"ref_key": "r1"}, {"ref_key": "r2"}],
        citations=[
            {"ref_key": "r1", "char_offset": 3, "word_index": 5},
            {"ref_key": "r2", "char_offset": 10, "word_index": 2},
        ],
    )
    with pytest.raises(SchemaError):
        load_document(json.dumps(record))


def test_image_requires_some_payload():
    record = make_doc(images=[{"image_id": "i", "image_type": "photo"}])
    with pytest.raises(SchemaError):
        load_document(json.dumps(record))


def test_pgm_round_trip(tmp_path):
    raster = Raster(width=3, height=2, values=(0, 127, 255, 10, 20, 30))
    path = tmp_path / "img.pgm"
    write_pgm(raster, path)
    back = read_pgm(path.read_bytes())
    assert back == raster


def test_pgm_path_loading(tmp_path):
    raster = Raster(width=2, height=2, values=(1, 2, 3, 4))
    write_pgm(raster, tmp_path / "img.pgm")
    record = make_doc(images=[{"image_id": "i", "image_type": "photo", "pixels": "img.pgm"}])
    doc = load_document(json.dumps(record), base_dir=tmp_path)
    assert doc.images[0].pixels == raster


def test_merge_references_unifies_near_duplicates():
    doc1 = load_document(
        json.dumps(
            make_doc(
                doc_id="d1",
                text="x" * 10,
                references=[{"ref_key": "k1", "title": "Deep learning", "authors": ["Y. LeCun"]}],
                citations=[{"ref_key": "k1", "char_offset": 0}],
            )
        )
    )
    doc2 = load_document(
        json.dumps(
            make_doc(
                doc_id="d2",
                text="x" * 10,
                references=[{"ref_key": "k9", "title": "Deep learnin", "authors": ["Y. LeCun"]}],
                citations=[{"ref_key": "k9", "char_offset": 3}],
            )
        )
    )
    merged = merge_references([doc1, doc2])
    keys1 = {r.ref_key for r in merged[0].references}
    keys2 = {r.ref_key for r in merged[1].references}
    assert keys1 == keys2 == {"k1"}
    assert citation_sequence(merged[1]) == ["k1"]


def test_merge_references_requires_matching_initials():
    doc1 = load_document(
        json.dumps(
            make_doc(
                doc_id="d1",
                references=[{"ref_key": "k1", "title": "Same title", "authors": ["A. Smith"]}],
            )
        )
    )
    doc2 = load_document(
        json.dumps(
            make_doc(
                doc_id="d2",
                references=[{"ref_key": "k2", "title": "Same title", "authors": ["B. Jones"]}],
            )
        )
    )
    merged = merge_references([doc1, doc2])
    assert {r.ref_key for r in merged[0].references} == {"k1"}
    assert {r.ref_key for r in merged[1].references} == {"k2"}
