"""Backend switch for the hot kernels.

``RAYBENCH_BACKEND=numba`` (default) compiles the scalar kernels with
``numba.njit``. ``RAYBENCH_BACKEND=numpy`` never imports numba: the scalar
kernels run as plain Python and whole-frame work goes through the
vectorized numpy implementations in :mod:`raybench.vectorized`.
"""

from __future__ import annotations

import os
import warnings

BACKENDS = ("numba", "numpy")

_requested = os.environ.get("RAYBENCH_BACKEND", "numba").strip().lower() or "numba"
if _requested not in BACKENDS:
    raise ImportError(f"RAYBENCH_BACKEND must be one of {BACKENDS}, got {_requested!r}")

numba = None
if _requested == "numba":
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        warnings.warn("numba not importable, falling back to the numpy backend")
        numba = None

JIT_ENABLED = numba is not None
DEFAULT_BACKEND = "numba" if JIT_ENABLED else "numpy"

if JIT_ENABLED:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # TBB on this class of machine is often too old and only produces a warning.
        numba.config.THREADING_LAYER = "workqueue"

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    prange = numba.prange
else:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn

    prange = range


def resolve_backend(backend: str | None) -> str:
    """Return a usable backend name, defaulting to the env-selected one."""
    if backend is None:
        return DEFAULT_BACKEND
    backend = backend.lower()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    if backend == "numba" and not JIT_ENABLED:
        raise RuntimeError("numba backend requested but JIT is disabled (RAYBENCH_BACKEND=numpy)")
    return backend
