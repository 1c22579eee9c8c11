"""Backend selection for the dynamic-programming kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python twin. Set ``POSTOCR_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("POSTOCR_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "compiled"

align_ops = _impl.align_ops
align_cost = _impl.align_cost
align_tokens = _impl.align_tokens
edit_distance = _impl.edit_distance

MATCH, SUB, DEL, INS, MERGE, SPLIT, PAIR = range(7)
T_MATCH, T_SUB, T_DEL, T_INS, T_JOIN, T_SPLIT = range(6)
OP_SPANS = _kernels_py.OP_SPANS
TOKEN_SPANS = _kernels_py.TOKEN_SPANS

__all__ = ["BACKEND", "align_ops", "align_cost", "align_tokens", "edit_distance"]
