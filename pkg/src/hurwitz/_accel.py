"""Backend selection: numba kernels when available, pure numpy otherwise.

Set ``HURWITZ_DISABLE_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import os

_DISABLED = os.environ.get("HURWITZ_DISABLE_NUMBA", "").lower() in ("1", "true", "yes", "on")

# the TBB layer shipped with some numba wheels is too old and only warns; the
# work-queue layer is always available
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_backend = "numba" if (HAVE_NUMBA and not _DISABLED) else "numpy"


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


def kernels():
    if _backend == "numba":
        from . import _kernels_numba as k
    else:
        from . import _kernels_numpy as k
    return k


def set_threads(n: int | None) -> None:
    if n and _backend == "numba":
        import numba

        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
