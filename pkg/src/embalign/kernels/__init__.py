"""EM hot-kernel backends: compiled extension with a numpy fallback.

The backend is selected at import time. Set EMBALIGN_KERNELS to "pure" or
"compiled" to force one; the default ("auto") prefers the compiled
extension and silently falls back to numpy when it is not built. Both
backends implement the same contracts; see ``pure.py`` for the layout.
"""

from __future__ import annotations

import os

from . import pure as _pure

try:
    from . import _em as _compiled
except ImportError:
    _compiled = None


def _select(name: str):
    if name == "pure":
        return _pure
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError(
                "compiled kernels requested but not built; run "
                "'python setup.py build_ext --inplace' or set "
                "EMBALIGN_KERNELS=pure"
            )
        return _compiled
    if name == "auto":
        return _compiled if _compiled is not None else _pure
    raise RuntimeError(f"unknown EMBALIGN_KERNELS value {name!r}")


_active = _select(os.environ.get("EMBALIGN_KERNELS", "auto"))


def use(name: str) -> str:
    """Switch the active backend ("pure", "compiled", "auto"); returns its name."""
    global _active
    _active = _select(name)
    return _active.NAME


def active() -> str:
    return _active.NAME


def available() -> list[str]:
    return ["pure"] + (["compiled"] if _compiled is not None else [])


def model1_estep(*args):
    return _active.model1_estep(*args)


def hmm_estep(*args):
    return _active.hmm_estep(*args)


def hmm_viterbi(*args):
    return _active.hmm_viterbi(*args)
