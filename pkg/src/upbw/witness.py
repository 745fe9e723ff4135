"""Entanglement witnesses H = Π_S - d·μ|Ψ><Ψ| built from a UPB."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .config import get_tolerances
from .epsilon import EpsilonBounds, epsilon_bounds, minimize_product_expectation
from .linalg import BipartiteIndex, DimensionError, as_index, haar_states, partial_trace_B
from .serialize import encode_matrix, encode_vector
from .states import BoundEntangledState, bound_entangled_state, overlap_with
from .upb import ProductState, Upb


class WitnessError(ValueError):
    pass


def entanglement_entropy(psi, idx) -> float:
    """Base-2 von Neumann entropy of Tr_B|ψ><ψ| (with 0·log 0 = 0)."""
    idx = as_index(idx)
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.shape[0] != idx.total:
        raise DimensionError(f"ψ has dimension {psi.shape[0]}, expected {idx.total}")
    w = np.linalg.eigvalsh(partial_trace_B(np.outer(psi, psi.conj()), idx))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def is_maximally_entangled(psi, idx) -> tuple[bool, float]:
    idx = as_index(idx)
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > get_tolerances().norm:
        raise ValueError("ψ must be unit-norm")
    ent = entanglement_entropy(psi, idx)
    d = min(idx.dA, idx.dB)
    return abs(ent - np.log2(d)) <= get_tolerances().maxent, ent


@dataclass(frozen=True, eq=False)
class MaxEntangledState:
    psi: np.ndarray
    idx: BipartiteIndex
    entropy: float
    label: str = "custom"

    def __post_init__(self):
        tol = get_tolerances().maxent
        d = self.schmidt_dim
        schmidt = np.linalg.svd(np.asarray(self.psi).reshape(self.idx.dA, self.idx.dB), compute_uv=False)
        if np.max(np.abs(schmidt[:d] - 1 / np.sqrt(d))) > tol or abs(self.entropy - np.log2(d)) > tol:
            raise WitnessError(f"state '{self.label}' is not maximally entangled")

    @property
    def schmidt_dim(self) -> int:
        return min(self.idx.dA, self.idx.dB)

    @classmethod
    def from_vector(cls, psi, idx, label: str = "custom") -> "MaxEntangledState":
        idx = as_index(idx)
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        ok, ent = is_maximally_entangled(psi, idx)
        if not ok:
            raise WitnessError(f"entropy {ent:.10g} differs from log2({min(idx.dA, idx.dB)})")
        return cls(psi, idx, ent, label)


def bell_family(idx) -> Iterator[tuple[tuple[int, int, int], np.ndarray]]:
    """Generalised Bell states Ψ_{k,l} = d^{-1/2} Σ_j ω^{jk}|j>|j+l mod d>.

    When dA != dB they are placed on every contiguous d-dimensional window of
    the larger factor. Yields ((offset, k, l), ψ) in that lexicographic order,
    so (0, 0, 0) is the usual Ψ⁺ on the leading corner.
    """
    idx = as_index(idx)
    d = min(idx.dA, idx.dB)
    omega = np.exp(2j * np.pi / d)
    j = np.arange(d)
    for off in range(max(idx.dA, idx.dB) - d + 1):
        for k in range(d):
            for l in range(d):
                a, b = j.copy(), (j + l) % d
                if idx.dA >= idx.dB:
                    a = a + off
                else:
                    b = b + off
                psi = np.zeros(idx.total, dtype=np.complex128)
                psi[a * idx.dB + b] = omega ** (j * k) / np.sqrt(d)
                yield (off, k, l), psi


def psi_plus(idx) -> MaxEntangledState:
    """(|00> + |11> + ... + |d-1,d-1>)/√d on the leading corner."""
    label, psi = next(bell_family(idx))
    return MaxEntangledState.from_vector(psi, idx, "bell(0,0,0)")


def choose_max_entangled(b: BoundEntangledState, threshold: float | None = None,
                         prefer: str = "first") -> MaxEntangledState:
    """Pick a maximally entangled Ψ with <Ψ|ρ|Ψ> > threshold from the Bell family.

    ``prefer="first"`` returns the first qualifying member in scan order (Ψ⁺
    whenever it qualifies); ``prefer="max"`` returns the member with the largest
    overlap, earliest on ties.
    """
    if prefer not in ("first", "max"):
        raise ValueError("prefer must be 'first' or 'max'")
    threshold = get_tolerances().overlap if threshold is None else threshold
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    best, best_val = None, -np.inf
    for (off, k, l), psi in bell_family(b.idx):
        val = overlap_with(b, psi)
        if val > best_val:
            best, best_val = ((off, k, l), psi), val
        if prefer == "first" and val > threshold:
            break
    if best_val <= threshold:
        raise WitnessError(f"no Bell-family state has overlap above {threshold:g} (best {best_val:.3e})")
    (off, k, l), psi = best
    return MaxEntangledState.from_vector(psi, b.idx, f"bell({off},{k},{l})")


@dataclass(frozen=True, eq=False)
class Witness:
    H: np.ndarray
    mu: float
    psi: MaxEntangledState
    source: Upb
    eps_bounds: EpsilonBounds
    state: BoundEntangledState
    overlap: float  # <Ψ|ρ|Ψ>
    trace_H_rho: float

    @property
    def d(self) -> int:
        return self.psi.schmidt_dim

    def to_json(self, positivity_min_found: float | None = None) -> dict:
        return {
            "H": encode_matrix(self.H),
            "mu": self.mu,
            "psi": encode_vector(self.psi.psi),
            "psi_label": self.psi.label,
            "overlap": self.overlap,
            "trace_H_rho": self.trace_H_rho,
            "eps_lower": self.eps_bounds.lower,
            "eps_upper": self.eps_bounds.upper,
            "positivity_min_found": positivity_min_found,
        }


def witness_operator(s: Upb, psi: np.ndarray, mu: float, d: int) -> np.ndarray:
    H = s.projector() - d * mu * np.outer(psi, psi.conj())
    return (H + H.conj().T) / 2


def build_witness(s: Upb, psi: MaxEntangledState | None = None, mu: float | None = None, *,
                  bounds: EpsilonBounds | None = None, state: BoundEntangledState | None = None,
                  threshold: float | None = None, restarts: int = 64, iters: int = 500,
                  rng_seed: int = 0) -> Witness:
    """H = Σ_i |α_iβ_i><α_iβ_i| - d·μ|Ψ><Ψ| with 0 < μ <= certified ε lower bound.

    ``mu`` defaults to the lower bound itself; ``psi`` to :func:`choose_max_entangled`.
    """
    state = state if state is not None else bound_entangled_state(s)
    bounds = bounds if bounds is not None else epsilon_bounds(s, restarts, iters, rng_seed)
    threshold = get_tolerances().overlap if threshold is None else threshold
    psi = psi if psi is not None else choose_max_entangled(state, threshold)
    if psi.idx != s.idx:
        raise DimensionError("Ψ and the basis live on different spaces")
    mu = bounds.lower if mu is None else float(mu)
    if not (0 < mu <= bounds.lower):
        raise WitnessError(f"μ = {mu!r} outside (0, {bounds.lower!r}]")
    overlap = overlap_with(state, psi.psi)
    if overlap <= threshold:
        raise WitnessError(f"<Ψ|ρ|Ψ> = {overlap:.3e} does not exceed {threshold:g}")
    H = witness_operator(s, psi.psi, mu, psi.schmidt_dim)
    tr = float(np.real(np.trace(H @ state.rho)))
    if not tr < 0:
        raise WitnessError(f"Tr(Hρ) = {tr!r} is not negative")
    return Witness(H, mu, psi, s, bounds, state, overlap, tr)


def product_expectations(H, idx, phiA, phiB) -> np.ndarray:
    """<φ_A φ_B|H|φ_A φ_B> for rows of ``phiA`` and ``phiB``."""
    idx = as_index(idx)
    X = (phiA[:, :, None] * phiB[:, None, :]).reshape(len(phiA), idx.total)
    return np.einsum("ti,ij,tj->t", X.conj(), H, X).real


class PositivityProbe(NamedTuple):
    min_found: float
    analytic_floor: float
    argmin: ProductState


def check_product_positivity(w: Witness, restarts: int = 64, samples: int = 10_000,
                             rng_seed: int = 0) -> PositivityProbe:
    """Search for product states with Tr(H·P_A⊗P_B) < 0.

    Combines seesaw restarts with Haar-random product samples. Since f >= ε and
    |<Ψ|φ_Aφ_B>|² <= 1/d, the true minimum is at least ε_lower - μ, reported
    as ``analytic_floor``.
    """
    idx = w.source.idx
    best, pa, pb, _ = minimize_product_expectation(w.H, idx.dA, idx.dB, restarts, 500, rng_seed)
    if samples > 0:
        rng = np.random.default_rng(rng_seed + restarts)
        A = haar_states(samples, idx.dA, rng)
        B = haar_states(samples, idx.dB, rng)
        vals = product_expectations(w.H, idx, A, B)
        t = int(np.argmin(vals))
        if vals[t] < best:
            best, pa, pb = float(vals[t]), A[t], B[t]
    argmin = ProductState(pa / np.linalg.norm(pa), pb / np.linalg.norm(pb))
    return PositivityProbe(float(best), w.eps_bounds.lower - w.mu, argmin)


def lemma1_check(psi: MaxEntangledState, phiA, phiB) -> float:
    """|<Ψ|φ_A⊗φ_B>|², bounded by 1/d for maximally entangled Ψ."""
    phiA = np.asarray(phiA, dtype=np.complex128).ravel()
    phiB = np.asarray(phiB, dtype=np.complex128).ravel()
    if phiA.shape[0] != psi.idx.dA or phiB.shape[0] != psi.idx.dB:
        raise DimensionError("product factors do not match Ψ's dimensions")
    return float(abs(psi.psi.conj() @ np.kron(phiA, phiB)) ** 2)
