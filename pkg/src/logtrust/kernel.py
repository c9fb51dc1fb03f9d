"""Audit scan backend selection.

Prefers the compiled extension and falls back to the pure-Python kernel
when the extension is unavailable.  Set ``LOGTRUST_PURE_PY=1`` to force
the fallback, mainly for benchmarking and differential testing.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _kernel_py

_impl = None
USING_COMPILED = False

if not os.environ.get("LOGTRUST_PURE_PY"):
    try:
        from . import _kernel as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        USING_COMPILED = True

if _impl is None:
    _impl = _kernel_py


def backend_name() -> str:
    return "compiled" if USING_COMPILED else "pure-python"


def scan_governing(
    obl_to: Sequence[int],
    obl_verb: Sequence[int],
    obl_allow: Sequence[int],
    obl_clock: Sequence[int],
    act_by: Sequence[int],
    act_verb: Sequence[int],
    act_clock: Sequence[int],
    literal: bool = False,
) -> list[int]:
    """Run the governing-obligation scan on the selected backend.

    See ``_kernel_py.scan_governing`` for the contract.  Always returns a
    plain list regardless of backend.
    """
    if USING_COMPILED:
        as_arr = lambda seq: np.ascontiguousarray(seq, dtype=np.intc)
        out = _impl.scan_governing(
            as_arr(obl_to),
            as_arr(obl_verb),
            as_arr(obl_allow),
            as_arr(obl_clock),
            as_arr(act_by),
            as_arr(act_verb),
            as_arr(act_clock),
            literal,
        )
        return [int(x) for x in out]
    return _impl.scan_governing(
        list(obl_to),
        list(obl_verb),
        list(obl_allow),
        list(obl_clock),
        list(act_by),
        list(act_verb),
        list(act_clock),
        literal,
    )
