"""The positive map S: B(H_A) -> B(H_B) with S(|i><j|) = <i|H|j>, and its certificates.

S is carried by its Choi-type operator H together with the orthonormal
basis {|i>} of H_A that fixes the correspondence; no superoperator matrix is
ever formed. With unnormalised Ψ⁺ = Σ_i |i>|i>, H = (id ⊗ S)(|Ψ⁺><Ψ⁺|).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .epsilon import minimize_product_expectation
from .linalg import DimensionError, as_hermitian, haar_states, partial_transpose_B
from .serialize import encode_matrix
from .states import BoundEntangledState
from .upb import Upb
from .witness import Witness


@dataclass(frozen=True, eq=False)
class PositiveMapRep:
    choi: np.ndarray
    in_dim: int
    out_dim: int
    basis: np.ndarray  # columns are the basis vectors |i> of H_A
    basis_label: str = "standard"
    source: Upb | None = None

    def __post_init__(self):
        n = self.in_dim * self.out_dim
        choi = as_hermitian(self.choi)
        if choi.shape != (n, n):
            raise DimensionError(f"Choi operator must be {n}x{n}, got {choi.shape}")
        U = np.asarray(self.basis, dtype=np.complex128)
        if U.shape != (self.in_dim, self.in_dim) or not np.allclose(U.conj().T @ U, np.eye(self.in_dim),
                                                                     atol=get_tolerances().orth):
            raise ValueError("basis must be an orthonormal basis of H_A given as matrix columns")
        object.__setattr__(self, "choi", choi)
        object.__setattr__(self, "basis", U)
        UI = np.kron(U, np.eye(self.out_dim))
        local = (UI.conj().T @ choi @ UI).reshape(self.in_dim, self.out_dim, self.in_dim, self.out_dim)
        object.__setattr__(self, "_blocks", local)

    @classmethod
    def from_choi(cls, choi, in_dim: int, out_dim: int, basis=None, basis_label: str | None = None,
                  source: Upb | None = None) -> "PositiveMapRep":
        if basis is None:
            basis, basis_label = np.eye(in_dim), basis_label or "standard"
        return cls(np.asarray(choi), in_dim, out_dim, basis, basis_label or "custom", source)

    def block(self, i: int, j: int) -> np.ndarray:
        """S(|i><j|) for basis vectors |i>, |j>."""
        return self._blocks[i, :, j, :]

    def to_json(self, certificates: dict | None = None) -> dict:
        return {
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "basis": self.basis_label,
            "choi": encode_matrix(self.choi),
            "certificates": certificates,
        }


def map_from_witness(w: Witness, basis=None, basis_label: str | None = None) -> PositiveMapRep:
    idx = w.source.idx
    return PositiveMapRep.from_choi(w.H, idx.dA, idx.dB, basis, basis_label, w.source)


def identity_map(d: int) -> PositiveMapRep:
    """id on B(H_d); its Choi operator is the unnormalised |Ψ⁺><Ψ⁺|."""
    v = np.eye(d).ravel()
    return PositiveMapRep.from_choi(np.outer(v, v), d, d, basis_label="standard")


def transposition_map(d: int) -> PositiveMapRep:
    """Matrix transposition on B(H_d); its Choi operator is the swap."""
    swap = np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)
    return PositiveMapRep.from_choi(swap, d, d, basis_label="standard")


def _local_coords(m: PositiveMapRep, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    return m.basis.conj().T @ X @ m.basis


def apply(m: PositiveMapRep, X) -> np.ndarray:
    """S(X) = Σ_ij x_ij S(|i><j|) with x the coordinates of X in the map's basis."""
    X = np.asarray(X)
    if X.shape != (m.in_dim, m.in_dim):
        raise DimensionError(f"input must be {m.in_dim}x{m.in_dim}, got {X.shape}")
    return np.einsum("ij,iajb->ab", _local_coords(m, X), m._blocks)


def _adjoint_coords(m: PositiveMapRep, Y) -> np.ndarray:
    # [S*(Y)]_ij = Tr(S(|j><i|) Y) in the map's basis
    return np.einsum("jbic,cb->ij", m._blocks, Y)


def adjoint_apply(m: PositiveMapRep, Y) -> np.ndarray:
    """The dual map S*: B(H_B) -> B(H_A), fixed by Tr[S*(Y) X] = Tr[Y S(X)].

    For Hermitian H this is also the Hilbert-Schmidt adjoint:
    Tr[S*(Y)† X] = Tr[Y† S(X)].
    """
    Y = np.asarray(Y, dtype=np.complex128)
    if Y.shape != (m.out_dim, m.out_dim):
        raise DimensionError(f"input must be {m.out_dim}x{m.out_dim}, got {Y.shape}")
    return m.basis @ _adjoint_coords(m, Y) @ m.basis.conj().T


def lifted_adjoint(m: PositiveMapRep, rho) -> np.ndarray:
    """(id_A ⊗ S*)(ρ) in the map's basis, an operator on H_A ⊗ H_A."""
    dA, dB = m.in_dim, m.out_dim
    UI = np.kron(m.basis, np.eye(dB))
    r4 = (UI.conj().T @ np.asarray(rho) @ UI).reshape(dA, dB, dA, dB)
    out = np.zeros((dA, dA, dA, dA), dtype=np.complex128)
    for a in range(dA):
        for b in range(dA):
            out[a, :, b, :] = _adjoint_coords(m, r4[a, :, b, :])
    return out.reshape(dA * dA, dA * dA)


def rank_one_min_eigs(m: PositiveMapRep, phis: np.ndarray) -> np.ndarray:
    """λ_min(S(|φ><φ|)) for each row φ."""
    xi = phis @ m.basis.conj()
    out = np.einsum("ti,tj,iajb->tab", xi, xi.conj(), m._blocks)
    return np.linalg.eigvalsh(out)[:, 0]


def positivity_probe(m: PositiveMapRep, trials: int = 10_000, restarts: int = 64, rng_seed: int = 0) -> float:
    """Smallest λ_min(S(|φ><φ|)) found over random and seesaw-optimised φ.

    Rank-one inputs suffice: every PSD input is a positive combination of them.
    <ψ|S(|φ><φ|)|ψ> equals <ξ̄ψ|H|ξ̄ψ> with ξ the coordinates of φ, so the
    seesaw runs on the (basis-rotated) Choi operator.
    """
    n = m.in_dim * m.out_dim
    best = np.inf
    if restarts > 0:
        local = m._blocks.reshape(n, n)
        _, a, _, _ = minimize_product_expectation(local, m.in_dim, m.out_dim, restarts, 500, rng_seed)
        phi = m.basis @ a.conj()
        best = float(rank_one_min_eigs(m, phi[None, :])[0])
    if trials > 0:
        rng = np.random.default_rng(rng_seed + max(restarts, 0))
        best = min(best, float(rank_one_min_eigs(m, haar_states(trials, m.in_dim, rng)).min()))
    return best


def complete_positivity_check(m: PositiveMapRep) -> float:
    """λ_min of the Choi operator; negative means S is not completely positive."""
    return float(np.linalg.eigvalsh(m.choi)[0])


def unitality_defect(m: PositiveMapRep) -> float:
    """Eigenvalue spread λ_max - λ_min of S(I_A); zero exactly when S(I_A) ∝ I_B."""
    w = np.linalg.eigvalsh(as_hermitian(apply(m, np.eye(m.in_dim))))
    return float(w[-1] - w[0])


@dataclass(frozen=True)
class MapCertificates:
    positivity_min_sampled: float
    choi_min_eig: float
    indecomp_value: float
    trace_H_rho: float
    ppt_of_rho: float
    unitality_defect: float
    tol: float

    @property
    def positive(self) -> bool:
        return self.positivity_min_sampled >= -self.tol

    @property
    def completely_positive(self) -> bool:
        return self.choi_min_eig >= -self.tol

    @property
    def granted(self) -> bool:
        return (self.positive and self.choi_min_eig < -self.tol and self.indecomp_value < -self.tol
                and self.ppt_of_rho >= -self.tol)

    def to_json(self) -> dict:
        return {
            "positivity_min_sampled": self.positivity_min_sampled,
            "choi_min_eig": self.choi_min_eig,
            "indecomp_value": self.indecomp_value,
            "trace_H_rho": self.trace_H_rho,
            "ppt_of_rho": self.ppt_of_rho,
            "unitality_defect": self.unitality_defect,
            "positive": self.positive,
            "completely_positive": self.completely_positive,
            "indecomposable": self.granted,
            "granted": self.granted,
        }


def _same_basis(s1: Upb, s2: Upb) -> bool:
    if s1 is s2:
        return True
    return s1.idx == s2.idx and len(s1) == len(s2) and np.allclose(s1.vectors, s2.vectors, atol=1e-12)


def indecomposability_certificate(m: PositiveMapRep, b: BoundEntangledState, trials: int = 10_000,
                                  restarts: int = 64, rng_seed: int = 0) -> MapCertificates:
    """Certify S positive, not CP and indecomposable against a PPT state ρ.

    Every decomposable map S₁ + T∘S₂ keeps (id ⊗ ·)(ρ) positive semidefinite
    for PPT ρ, so a PPT ρ with <Ψ⁺|(id ⊗ S*)(ρ)|Ψ⁺> < 0 rules out any
    decomposition.
    """
    if m.source is not None and b.source is not None and not _same_basis(m.source, b.source):
        raise ValueError("the map and the state come from different product bases")
    if b.idx.dA != m.in_dim or b.idx.dB != m.out_dim:
        raise DimensionError("state dimensions do not match the map")
    dA = m.in_dim
    lifted = lifted_adjoint(m, b.rho)
    psi_plus = np.eye(dA).ravel()
    indecomp = float(np.real(psi_plus @ lifted @ psi_plus))
    ppt = float(np.linalg.eigvalsh(partial_transpose_B(b.rho, b.idx))[0])
    return MapCertificates(
        positivity_min_sampled=positivity_probe(m, trials, restarts, rng_seed),
        choi_min_eig=complete_positivity_check(m),
        indecomp_value=indecomp,
        trace_H_rho=float(np.real(np.trace(m.choi @ b.rho))),
        ppt_of_rho=ppt,
        unitality_defect=unitality_defect(m),
        tol=get_tolerances().cert,
    )
