"""Dense linear algebra on small bipartite spaces.

Composite indices follow the row-major A-then-B convention: basis vector
|i>_A (x) |j>_B sits at position ``i * dB + j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import get_tolerances


class DimensionError(ValueError):
    pass


class HermiticityError(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteIndex:
    dA: int
    dB: int

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise DimensionError(f"local dimensions must be positive, got ({self.dA}, {self.dB})")

    @property
    def total(self) -> int:
        return self.dA * self.dB

    def composite(self, i: int, j: int) -> int:
        return i * self.dB + j

    def check(self, m: np.ndarray) -> None:
        if m.ndim != 2 or m.shape != (self.total, self.total):
            raise DimensionError(f"expected a {self.total}x{self.total} operator, got shape {m.shape}")


def as_index(idx) -> BipartiteIndex:
    if isinstance(idx, BipartiteIndex):
        return idx
    dA, dB = idx
    return BipartiteIndex(int(dA), int(dB))


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``(a⊗b)[i*rb+k, j*cb+l] = a[i,j] * b[k,l]``.

    Vectors are treated as columns, so ``kron(u, v)`` is the product ket.
    """
    return np.kron(np.asarray(a), np.asarray(b))


def hermiticity_defect(m: np.ndarray) -> float:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def as_hermitian(m, tol: float | None = None) -> np.ndarray:
    """Return ``(m + m†)/2``, refusing inputs whose defect exceeds ``tol``."""
    m = np.asarray(m, dtype=np.complex128)
    tol = get_tolerances().herm if tol is None else tol
    defect = hermiticity_defect(m)
    if defect > tol:
        raise HermiticityError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return (m + m.conj().T) / 2


def partial_trace_B(m, idx) -> np.ndarray:
    idx = as_index(idx)
    m = np.asarray(m)
    idx.check(m)
    return np.einsum("ijkj->ik", m.reshape(idx.dA, idx.dB, idx.dA, idx.dB))


def partial_trace_A(m, idx) -> np.ndarray:
    idx = as_index(idx)
    m = np.asarray(m)
    idx.check(m)
    return np.einsum("ijil->jl", m.reshape(idx.dA, idx.dB, idx.dA, idx.dB))


def partial_transpose_B(m, idx) -> np.ndarray:
    """Apply id⊗T: transpose every dB×dB block in place. An exact involution."""
    idx = as_index(idx)
    m = np.asarray(m)
    idx.check(m)
    out = m.reshape(idx.dA, idx.dB, idx.dA, idx.dB).transpose(0, 3, 2, 1)
    return np.ascontiguousarray(out).reshape(idx.total, idx.total)


class Eigh(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns


def hermitian_eig(m) -> Eigh:
    """Ascending eigenvalues and orthonormal eigenvector columns of a Hermitian matrix."""
    h = as_hermitian(m)
    w, v = np.linalg.eigh(h)
    return Eigh(w, v)


def min_eigenvalue(m) -> float:
    return float(np.linalg.eigvalsh(as_hermitian(m))[0])


def projector(v) -> np.ndarray:
    v = np.asarray(v)
    return np.outer(v, v.conj())


def is_unit(v, tol: float | None = None) -> bool:
    tol = get_tolerances().norm if tol is None else tol
    return abs(np.linalg.norm(v) - 1.0) <= tol


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector from normalised complex Gaussian entries."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_states(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)
