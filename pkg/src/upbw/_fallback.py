"""Pure numpy implementations of the kernels in ``_kernels.pyx``."""
from __future__ import annotations

import numpy as np

_CHUNK = 20000


def min_singular_values(vecs: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    m, k = subsets.shape
    d = vecs.shape[1]
    out = np.zeros(m, dtype=np.float64)
    if k < d or m == 0:
        return out
    for start in range(0, m, _CHUNK):
        block = vecs[subsets[start:start + _CHUNK]]
        sv = np.linalg.svd(block, compute_uv=False)
        out[start:start + len(block)] = sv[:, d - 1]
    return out


def seesaw(H, dA, dB, phiA0, phiB0, iters, tol):
    H4 = np.asarray(H).reshape(dA, dB, dA, dB)
    pa = np.array(phiA0, dtype=np.complex128)
    pb = np.array(phiB0, dtype=np.complex128)
    hist = [float(np.einsum("a,b,abcd,c,d->", pa.conj(), pb.conj(), H4, pa, pb).real)]
    prev = hist[0]
    for _ in range(iters):
        ma = np.einsum("b,abcd,d->ac", pb.conj(), H4, pb)
        w, v = np.linalg.eigh(ma)
        pa = v[:, 0]
        hist.append(float(w[0]))
        mb = np.einsum("a,abcd,c->bd", pa.conj(), H4, pa)
        w, v = np.linalg.eigh(mb)
        pb = v[:, 0]
        hist.append(float(w[0]))
        if abs(prev - w[0]) < tol:
            break
        prev = float(w[0])
    return pa, pb, np.array(hist)
