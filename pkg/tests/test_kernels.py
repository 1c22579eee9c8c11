import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postocr import _kernels_py, kernels

compiled = pytest.importorskip("postocr._kernels")

words = st.text(alphabet="abcd", max_size=8)
token_lists = st.lists(st.text(alphabet="abc", min_size=1, max_size=4), max_size=7)


@settings(max_examples=400, deadline=None)
@given(words, words)
def test_align_ops_backends_agree(s, t):
    assert compiled.align_ops(s, t) == _kernels_py.align_ops(s, t)


@settings(max_examples=400, deadline=None)
@given(words, words)
def test_align_cost_backends_agree(s, t):
    assert compiled.align_cost(s, t) == _kernels_py.align_cost(s, t) == _kernels_py.align_ops(s, t)[0]


@settings(max_examples=300, deadline=None)
@given(token_lists, token_lists)
def test_align_tokens_backends_agree(a, b):
    assert compiled.align_tokens(a, b) == _kernels_py.align_tokens(a, b)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from("xyz"), max_size=9), st.lists(st.sampled_from("xyz"), max_size=9))
def test_edit_distance_backends_agree(a, b):
    assert compiled.edit_distance(a, b) == _kernels_py.edit_distance(a, b)


def test_unicode_words_agree():
    for s, t in [("مرحبا", "مرحب"), ("naïve", "naive"), ("日本語", "日本")]:
        assert compiled.align_ops(s, t) == _kernels_py.align_ops(s, t)


def test_backend_selected_at_import():
    assert kernels.BACKEND == "compiled"


def test_env_var_forces_python_backend():
    code = "from postocr import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, POSTOCR_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_pipeline_identical_on_both_backends(tmp_path):
    script = (
        "import sys\n"
        "from postocr.corpora import stdlib_docstrings\n"
        "from postocr.error_channel import ChannelSpec, corrupt\n"
        "from postocr.experiment import select_documents\n"
        "from postocr.language_model import train_lm\n"
        "from postocr.pipeline import train_all\n"
        "docs = select_documents(stdlib_docstrings(), 2500, stride=13)\n"
        "aligned = corrupt(docs, ChannelSpec(word_error_rate=0.3), seed=2).corpus\n"
        "models = train_all(aligned, train_lm(docs))\n"
        "out = sys.argv[1]\n"
        "models.matrix.save(out + '.matrix')\n"
        "models.ranker.save(out + '.ranker')\n"
        "models.decider.save(out + '.decider')\n"
    )
    for name, flag in (("compiled", ""), ("python", "1")):
        env = dict(os.environ, POSTOCR_PURE_PYTHON=flag)
        subprocess.run([sys.executable, "-c", script, str(tmp_path / name)], env=env, check=True)
    for suffix in (".matrix", ".ranker", ".decider"):
        assert (tmp_path / f"compiled{suffix}").read_bytes() == (tmp_path / f"python{suffix}").read_bytes()
