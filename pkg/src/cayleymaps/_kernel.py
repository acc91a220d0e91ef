"""Census kernel selection: compiled extension when available, pure twin otherwise.

Set CAYLEYMAPS_KERNEL=pure to force the fallback (useful for benchmarks and
parity tests), or CAYLEYMAPS_KERNEL=cython to fail loudly if the extension
did not build.
"""

from __future__ import annotations

import os

from . import _purecensus

_FORCED = os.environ.get("CAYLEYMAPS_KERNEL", "auto").strip().lower()

if _FORCED in ("pure", "python"):
    _active = _purecensus
    BACKEND = "pure"
elif _FORCED in ("auto", "", "cython", "fast"):
    try:
        from . import _fastcensus as _active  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        if _FORCED in ("cython", "fast"):
            raise
        _active = _purecensus
        BACKEND = "pure"
else:
    raise RuntimeError(f"CAYLEYMAPS_KERNEL={_FORCED!r} not recognised (use auto, cython, or pure)")

census_block = _active.census_block
is_mrr_cycle = _active.is_mrr_cycle


def get_kernel(name: str | None = None):
    """Kernel module by name ('pure' or 'cython'); default is the active one."""
    if name is None or name == BACKEND:
        return _active
    if name == "pure":
        return _purecensus
    if name == "cython":
        from . import _fastcensus
        return _fastcensus
    raise ValueError(f"unknown kernel {name!r}")
