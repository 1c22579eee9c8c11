import pytest

from postocr.alignment import EditInstance
from postocr.confusion import ConfusionMatrix, corpus_edit_instances, train_confusion
from postocr.corpus_io import AlignedCorpus, Document
from postocr.errors import DataError


def aligned(*pairs):
    docs = []
    for k, (ocr, truth) in enumerate(pairs):
        docs.append((Document.from_surfaces(ocr.split(), str(k)), Document.from_surfaces(truth.split(), str(k))))
    return AlignedCorpus(tuple(docs))


def test_two_example_pairs():
    m = train_confusion(aligned(("tln", "the"), ("amual", "annual")))
    assert dict(m.counts) == {("ln", "he"): 1, ("m", "nn"): 1}


def test_identical_pairs_give_empty_matrix():
    m = train_confusion(aligned(("a b c", "a b c")))
    assert len(m) == 0


def test_empty_corpus_fails():
    with pytest.raises(DataError, match="no training pairs"):
        train_confusion(AlignedCorpus(()))


def test_counts_accumulate():
    m = train_confusion(aligned(*[("graat", "great")] * 41))
    assert m.weight("a", "e") == 41
    assert m.lookup("a") == {("e", 41)}
    assert m.lookup("zz") == set()


def test_pair_lookup():
    m = ConfusionMatrix.from_instances([EditInstance("aa", "ee")] * 5)
    assert m.lookup("aa") == {("ee", 5)}


def test_no_self_mapping():
    with pytest.raises(ValueError):
        ConfusionMatrix({("a", "a"): 1})


def test_conservation_and_doubling():
    corpus = aligned(("tln graat amual xyzzy", "the great annual abcde"), ("hcllo", "hello"))
    m = train_confusion(corpus)
    assert m.total() == sum(1 for _ in corpus_edit_instances(corpus))
    doubled = train_confusion(AlignedCorpus(corpus.pairs + corpus.pairs))
    assert doubled.counts == {k: 2 * v for k, v in m.counts.items()}
    assert m.merged(m) == doubled


def test_out_of_class_pairs_are_ignored():
    assert len(train_confusion(aligned(("xbcdy", "abcde")))) == 0


def test_probability():
    m = ConfusionMatrix({("a", "e"): 3, ("a", "o"): 1})
    assert m.probability("a", "e") == pytest.approx(0.75)
    assert m.probability("q", "e") == 0.0


def test_save_load_sorted_with_empty_sentinel(tmp_path):
    m = ConfusionMatrix({("", "e"): 2, ("b", ""): 3, ("a", "e"): 41})
    m.save(tmp_path / "m.tsv")
    lines = (tmp_path / "m.tsv").read_text(encoding="utf-8").splitlines()
    assert lines == ["∅\te\t2", "a\te\t41", "b\t∅\t3"]
    assert ConfusionMatrix.load(tmp_path / "m.tsv") == m


def test_load_rejects_garbage(tmp_path):
    (tmp_path / "m.tsv").write_text("a\te\n", encoding="utf-8")
    with pytest.raises(DataError):
        ConfusionMatrix.load(tmp_path / "m.tsv")
