"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_kernels_py``. Set ``PJ_PURE_PYTHON=1`` to force
the fallback (the benchmark and the backend-agreement tests do this).
"""

import os

from . import _kernels_py

__all__ = ["backend", "available_backends", "get_backend"]


def _load_compiled():
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()


def available_backends() -> dict:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def get_backend(name: str | None = None):
    if name is None:
        if os.environ.get("PJ_PURE_PYTHON", "") not in ("", "0") or _compiled is None:
            return _kernels_py
        return _compiled
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


backend = get_backend()
