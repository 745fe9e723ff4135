"""The bound-entangled state ρ = (id - Π_S) / (dim H - |S|) and its checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .linalg import BipartiteIndex, DimensionError, as_index, partial_transpose_B
from .serialize import encode_matrix
from .upb import InvalidUpbError, Upb, Verdict


@dataclass(frozen=True, eq=False)
class BoundEntangledState:
    rho: np.ndarray
    source: Upb | None
    idx: BipartiteIndex
    norm_factor: float
    ppt_min_eig: float
    rank: int

    @property
    def certified_unextendible(self) -> bool:
        return self.source is not None and self.source.is_valid

    def to_json(self) -> dict:
        return {
            "dims": [self.idx.dA, self.idx.dB],
            "rho": encode_matrix(self.rho),
            "ppt_min_eig": self.ppt_min_eig,
            "rank": self.rank,
            "source_label": self.source.label if self.source is not None else None,
            "certified_unextendible": self.certified_unextendible,
        }


class PptResult(NamedTuple):
    is_ppt: bool
    min_eig: float


def bound_entangled_state(s: Upb) -> BoundEntangledState:
    """Normalised projector onto the orthogonal complement of the product basis.

    The basis must be orthonormal and leave a nonzero complement. A basis whose
    unextendibility has not been certified (verdict Unverified, e.g. a large
    tensor product) is accepted and flagged via ``certified_unextendible``.
    """
    tol = get_tolerances()
    dim = s.idx.total
    if len(s) >= dim:
        raise InvalidUpbError(f"|S| = {len(s)} leaves no complement in dimension {dim}")
    if s.validation is not None and s.validation.verdict is Verdict.INVALID:
        raise InvalidUpbError(f"'{s.label}' failed validation: {'; '.join(s.validation.notes)}")
    v = s.vectors
    if np.max(np.abs(v.conj() @ v.T - np.eye(len(s)))) > tol.orth:
        raise InvalidUpbError(f"'{s.label}' is not an orthonormal set")
    norm = 1.0 / (dim - len(s))
    rho = norm * (np.eye(dim) - s.projector())
    rho = (rho + rho.conj().T) / 2
    w = np.linalg.eigvalsh(rho)
    rank = int(np.sum(w > 0.5 * norm))
    ppt = float(np.linalg.eigvalsh(partial_transpose_B(rho, s.idx))[0])
    return BoundEntangledState(rho, s, s.idx, norm, ppt, rank)


def wrap_density(rho, idx) -> BoundEntangledState:
    """Wrap an arbitrary density matrix (test fixtures, foreign states)."""
    idx = as_index(idx)
    rho = np.asarray(rho, dtype=np.complex128)
    idx.check(rho)
    w = np.linalg.eigvalsh(rho)
    ppt = float(np.linalg.eigvalsh(partial_transpose_B(rho, idx))[0])
    return BoundEntangledState(rho, None, idx, float("nan"), ppt, int(np.sum(w > 1e-9)))


def is_ppt(b: BoundEntangledState) -> PptResult:
    m = float(np.linalg.eigvalsh(partial_transpose_B(b.rho, b.idx))[0])
    return PptResult(m >= -get_tolerances().ppt, m)


def overlap_with(b: BoundEntangledState, psi) -> float:
    """<ψ|ρ|ψ> for a unit vector ψ on the composite space."""
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.shape[0] != b.idx.total:
        raise DimensionError(f"ψ has dimension {psi.shape[0]}, expected {b.idx.total}")
    if abs(np.linalg.norm(psi) - 1.0) > get_tolerances().norm:
        raise ValueError("ψ must be unit-norm")
    return float(np.real(psi.conj() @ b.rho @ psi))
