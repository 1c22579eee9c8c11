"""Clean-text corpora available offline.

The Python standard library ships a few hundred thousand words of English
prose in its docstrings. They make a reproducible stand-in for a public
plain-text corpus when no network is available.
"""

from __future__ import annotations

import ast
import logging
import re
import sysconfig
from pathlib import Path

from .corpus_io import Document

logger = logging.getLogger(__name__)

_WORD = re.compile(r"[a-z]+")
_SKIP_DIRS = {"test", "tests", "site-packages", "dist-packages", "idlelib", "lib2to3", "__pycache__"}


def _docstrings(tree: ast.AST):
    for node in ast.walk(tree):
        if isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef)):
            doc = ast.get_docstring(node, clean=True)
            if doc:
                yield doc


def stdlib_docstrings(min_words: int = 8, root: str | Path | None = None) -> list[Document]:
    """Lower-cased alphabetic words of every stdlib docstring, one document each.

    Order is deterministic: files in sorted path order, docstrings in AST
    walk order.
    """
    root = Path(root or sysconfig.get_paths()["stdlib"])
    docs: list[Document] = []
    for path in sorted(root.rglob("*.py")):
        if _SKIP_DIRS.intersection(path.relative_to(root).parts[:-1]):
            continue
        try:
            tree = ast.parse(path.read_text(encoding="utf-8"))
        except (SyntaxError, UnicodeDecodeError, ValueError, OSError):
            continue
        for doc in _docstrings(tree):
            words = _WORD.findall(doc.lower())
            if len(words) >= min_words:
                docs.append(Document.from_surfaces(words, f"d{len(docs):05d}"))
    logger.info("docstring corpus: %d documents, %d tokens", len(docs), sum(len(d) for d in docs))
    return docs
