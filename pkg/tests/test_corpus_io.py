import pytest
from hypothesis import given
from hypothesis import strategies as st

from postocr.corpus_io import (
    AlignedCorpus,
    Document,
    Token,
    apply_decisions,
    load_aligned,
    load_documents,
    load_ocr_document,
    load_text_corpus,
    tokenize,
    write_corrected,
    write_documents,
)
from postocr.errors import DataError
from postocr.pipeline import CorrectionDecision


def test_tokenize_positions():
    d = tokenize("the graat wall", "x")
    assert d.surfaces == ["the", "graat", "wall"]
    assert [t.position for t in d] == [0, 1, 2]


def test_tokenize_empty_and_whitespace_runs():
    assert len(tokenize("")) == 0
    assert tokenize("  a  b ").surfaces == ["a", "b"]
    assert tokenize("a\tb\nc").surfaces == ["a", "b", "c"]


@given(st.text())
def test_tokenize_idempotent(text):
    once = tokenize(text).surfaces
    assert tokenize(" ".join(once)).surfaces == once


def test_punctuation_stays_attached():
    assert tokenize("wall, of China.").surfaces == ["wall,", "of", "China."]


def test_load_confidence(tmp_path):
    p = tmp_path / "ocr.tsv"
    p.write_text("graat\t0.40\ngreat\n", encoding="utf-8")
    d = load_ocr_document(p)
    assert d.tokens[0] == Token("graat", d.doc_id, 0, 0.40)
    assert d.tokens[1].confidence is None


def test_character_confidences_reduce_to_minimum(tmp_path):
    p = tmp_path / "ocr.tsv"
    p.write_text("abc\t0.9,0.3,0.8\n", encoding="utf-8")
    assert load_ocr_document(p).tokens[0].confidence == 0.3
    p.write_text("abc\t0.9,0.3\n", encoding="utf-8")
    with pytest.raises(DataError, match="character confidences"):
        load_ocr_document(p)


def test_confidence_out_of_range(tmp_path):
    p = tmp_path / "ocr.tsv"
    p.write_text("ok\t0.5\nbad\t1.5\n", encoding="utf-8")
    with pytest.raises(DataError, match="confidence out of range") as exc:
        load_ocr_document(p)
    assert ":2" in str(exc.value)


def test_malformed_line_names_line_number(tmp_path):
    p = tmp_path / "ocr.tsv"
    p.write_text("a\nb\t0.5\textra\n", encoding="utf-8")
    with pytest.raises(DataError, match=":2"):
        load_documents(p)


def test_truth_rejects_confidence(tmp_path):
    (tmp_path / "o.tsv").write_text("a\t0.5\n", encoding="utf-8")
    (tmp_path / "t.tsv").write_text("a\t0.5\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_aligned(tmp_path / "o.tsv", tmp_path / "t.tsv")


def test_multi_document_files_and_headers(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("# doc: first\na\nb\n\n# doc: second\nc\n\nd\n", encoding="utf-8")
    docs = load_documents(p)
    assert [d.doc_id for d in docs] == ["first", "second", "c-2"]
    assert [d.surfaces for d in docs] == [["a", "b"], ["c"], ["d"]]


def test_nfc_normalisation(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("café\n", encoding="utf-8")
    assert load_documents(p)[0].surfaces == ["café"]


def test_load_aligned_requires_truth(tmp_path):
    (tmp_path / "o.tsv").write_text("# doc: x\na\n", encoding="utf-8")
    (tmp_path / "t.tsv").write_text("# doc: y\na\n", encoding="utf-8")
    with pytest.raises(DataError, match="no ground truth"):
        load_aligned(tmp_path / "o.tsv", tmp_path / "t.tsv")


def test_write_then_load_round_trip(tmp_path):
    docs = [Document.from_surfaces(["ab", "c"], "one", [0.5, None]), Document.from_surfaces(["d"], "two")]
    write_documents(docs, tmp_path / "x.tsv")
    back = load_documents(tmp_path / "x.tsv")
    assert back == docs


def test_text_corpus_one_document_per_line(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b\n\n c \n", encoding="utf-8")
    assert [d.surfaces for d in load_text_corpus(p)] == [["a", "b"], ["c"]]


def test_aligned_corpus_validates_ids():
    with pytest.raises(DataError):
        AlignedCorpus(((Document.from_surfaces(["a"], "x"), Document.from_surfaces(["a"], "y")),))
    with pytest.raises(DataError):
        AlignedCorpus(((Document.from_surfaces(["a"], "x"), Document.from_surfaces(["a"], "x", [0.5])),))


def test_split_by_token_count():
    pairs = tuple((Document.from_surfaces(["w"] * n, str(k)),) * 2 for k, n in enumerate([4, 4, 1, 1]))
    train, test = AlignedCorpus(pairs).split(0.8)
    assert len(train) == 2 and len(test) == 2


def _decision(pos, orig, repl, kind="segment_edit"):
    return CorrectionDecision(pos, orig, repl, 0.9, 0.8, kind)


def test_write_corrected_replacement(tmp_path):
    d = tokenize("the graat wall", "doc")
    write_corrected(d, [_decision(1, "graat", "great")], tmp_path / "out.txt")
    assert (tmp_path / "out.txt").read_text(encoding="utf-8") == "the great wall\n"
    log = (tmp_path / "out.txt.changes.tsv").read_text(encoding="utf-8").splitlines()
    assert log[0].split("\t") == ["doc_id", "position", "original", "replacement", "ranker_score", "decision_score"]
    assert log[1].split("\t")[1:4] == ["1", "graat", "great"]


def test_write_corrected_identity(tmp_path):
    d = tokenize("a  b c", "doc")
    write_corrected(d, [], tmp_path / "out.txt")
    assert (tmp_path / "out.txt").read_text(encoding="utf-8").split() == d.surfaces


def test_split_and_join_change_token_count():
    d = tokenize("the wallof gr eat", "doc")
    out = apply_decisions(d, [_decision(1, "wallof", "wall of", "space_insert"),
                              _decision(2, "gr", "great", "space_delete")])
    assert out.surfaces == ["the", "wall", "of", "great"]
    assert len(out) == len(d) + 1 - 1


def test_rejected_decisions_change_nothing():
    d = tokenize("the graat", "doc")
    assert apply_decisions(d, [_decision(1, "graat", None)]).surfaces == d.surfaces
