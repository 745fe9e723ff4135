"""Backend selection for the hot loops.

The compiled Cython module is used when it imports; otherwise (or when
``UPBW_PURE_PYTHON=1``) the numpy fallback is used. Both expose
``min_singular_values(vecs, subsets)`` and
``seesaw(H, dA, dB, phiA0, phiB0, iters, tol)``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback
from .config import max_threads

try:
    if os.environ.get("UPBW_PURE_PYTHON") == "1":
        raise ImportError("pure-python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"


def _impl(backend: str | None):
    return BACKENDS[backend or BACKEND]


def min_singular_values(vecs, subsets, *, backend: str | None = None, threads: int | None = None):
    """Smallest singular value of ``vecs[subset]`` for every row of ``subsets``.

    Rows are split into contiguous chunks over a thread pool; the output order
    does not depend on the thread count. Vectors with no imaginary part are
    processed in real arithmetic.
    """
    vecs = np.asarray(vecs)
    if np.iscomplexobj(vecs) and not np.any(vecs.imag):
        vecs = vecs.real
    dtype = np.complex128 if np.iscomplexobj(vecs) else np.float64
    vecs = np.ascontiguousarray(vecs, dtype=dtype)
    subsets = np.ascontiguousarray(subsets, dtype=np.intp)
    if subsets.ndim != 2:
        raise ValueError("subsets must be a 2-d index array")
    impl = _impl(backend)
    threads = threads or max_threads()
    m = subsets.shape[0]
    if threads == 1 or m < 4096:
        return impl.min_singular_values(vecs, subsets)
    bounds = np.linspace(0, m, threads + 1).astype(int)
    chunks = [subsets[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda c: impl.min_singular_values(vecs, c), chunks))
    return np.concatenate(parts)


def seesaw(H, dA, dB, phiA0, phiB0, iters=500, tol=1e-13, *, backend: str | None = None):
    H = np.ascontiguousarray(H, dtype=np.complex128)
    if H.shape != (dA * dB, dA * dB):
        raise ValueError(f"operator shape {H.shape} does not match dims ({dA}, {dB})")
    phiA0 = np.ascontiguousarray(phiA0, dtype=np.complex128)
    phiB0 = np.ascontiguousarray(phiB0, dtype=np.complex128)
    return _impl(backend).seesaw(H, int(dA), int(dB), phiA0, phiB0, int(iters), float(tol))
