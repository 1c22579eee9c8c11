import pytest
from hypothesis import given
from hypothesis import strategies as st

from postocr.corpus_io import Document, tokenize
from postocr.errors import DataError
from postocr.language_model import NGramModel, train_lm


def docs(*texts):
    return [tokenize(t, str(k)) for k, t in enumerate(texts)]


def test_document_frequencies():
    lm = train_lm(docs("a b", "a"), cutoff=1)
    assert lm.unigram == {"a": 2, "b": 1}
    assert lm.bigram == {("a", "b"): 1}
    assert lm.doc_count == 2


def test_cutoff_drops_rare_bigrams():
    assert train_lm(docs("a b", "a"), cutoff=2).bigram == {}
    assert train_lm(docs("a b", "a b")).bigram == {("a", "b"): 2}


def test_counted_once_per_document():
    lm = train_lm(docs("a a a b a b"), cutoff=1)
    assert lm.unigram == {"a": 1, "b": 1}
    assert lm.bigram[("a", "b")] == 1


def test_empty_corpus_fails():
    with pytest.raises(DataError):
        train_lm([])


def test_queries(great_lm):
    assert great_lm.is_word("great")
    assert not great_lm.is_word("graat")
    assert not great_lm.is_word("")
    assert great_lm.unigram_freq("great") == 17222
    assert great_lm.bigram_freq("the", "great") == 1238
    assert great_lm.bigram_freq("great", "wall") == 73
    assert great_lm.bigram_freq("greet", "wall") == 0
    assert great_lm.unigram_freq("absent") == 0
    assert great_lm.bigram_freq(None, "great") == 0


def test_save_load(tmp_path, great_lm):
    great_lm.save(tmp_path / "lm")
    assert NGramModel.load(tmp_path / "lm") == great_lm
    header = (tmp_path / "lm" / "unigrams.tsv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "# doc_count=25000 cutoff=2"


corpora = st.lists(st.lists(st.sampled_from("abcd"), max_size=6), min_size=1, max_size=8)


@given(corpora, st.lists(st.sampled_from("abcd"), max_size=6))
def test_bounds_and_monotone_growth(texts, extra):
    base = [Document.from_surfaces(t, str(k)) for k, t in enumerate(texts)]
    lm = train_lm(base, cutoff=1)
    assert all(1 <= f <= lm.doc_count for f in lm.unigram.values())
    for (w1, w2), f in lm.bigram.items():
        assert f <= min(lm.unigram[w1], lm.unigram[w2])
    for w in "abcd":
        assert lm.is_word(w) == (lm.unigram_freq(w) > 0)
    grown = train_lm(base + [Document.from_surfaces(extra, "new")], cutoff=1)
    assert all(grown.unigram[w] >= f for w, f in lm.unigram.items())
    assert all(grown.bigram[b] >= f for b, f in lm.bigram.items())
