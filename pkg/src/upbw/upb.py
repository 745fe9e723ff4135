"""Unextendible product bases: constructions, tensor products and validation."""
from __future__ import annotations

import dataclasses
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import get_tolerances
from .linalg import BipartiteIndex, DimensionError, as_index
from .serialize import decode_vector, encode_vector


class Verdict(str, enum.Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    UNVERIFIED = "Unverified"


class InvalidUpbError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ProductState:
    """|alpha> ⊗ |beta> stored by its two local factors."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.complex128).ravel()
        beta = np.asarray(self.beta, dtype=np.complex128).ravel()
        tol = get_tolerances().norm
        for name, v in (("alpha", alpha), ("beta", beta)):
            if abs(np.linalg.norm(v) - 1.0) > tol:
                raise ValueError(f"{name} factor is not unit-norm (‖v‖ = {np.linalg.norm(v):.12g})")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def vector(self) -> np.ndarray:
        return np.kron(self.alpha, self.beta)

    def to_json(self) -> dict:
        return {"alpha": encode_vector(self.alpha), "beta": encode_vector(self.beta)}


@dataclass(frozen=True)
class ValidationOptions:
    compute_epsilon: bool = True
    tol_rank: float | None = None
    threads: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    orthonormality_defect: float
    spans_A: bool
    spans_B: bool
    proper_subspace: bool
    epsilon_lower: float | None
    verdict: Verdict
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "orthonormality_defect": self.orthonormality_defect,
            "spans_A": self.spans_A,
            "spans_B": self.spans_B,
            "proper_subspace": self.proper_subspace,
            "epsilon_lower": self.epsilon_lower,
            "verdict": self.verdict.value,
            "notes": list(self.notes),
        }


@dataclass(frozen=True, eq=False)
class Upb:
    """An ordered set of product states; ``validation`` is filled by :func:`validate`."""

    states: tuple[ProductState, ...]
    idx: BipartiteIndex
    label: str = "custom"
    validation: ValidationReport | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "idx", as_index(self.idx))
        if not self.states:
            raise ValueError("a product basis needs at least one state")
        for k, st in enumerate(self.states):
            if st.alpha.shape[0] != self.idx.dA or st.beta.shape[0] != self.idx.dB:
                raise DimensionError(
                    f"state {k} has factor dims ({st.alpha.shape[0]}, {st.beta.shape[0]}), "
                    f"expected ({self.idx.dA}, {self.idx.dB})"
                )

    def __len__(self) -> int:
        return len(self.states)

    @property
    def alphas(self) -> np.ndarray:
        """A-side vectors as rows, shape (|S|, dA)."""
        return np.array([s.alpha for s in self.states])

    @property
    def betas(self) -> np.ndarray:
        return np.array([s.beta for s in self.states])

    @property
    def vectors(self) -> np.ndarray:
        """Full product vectors as rows, shape (|S|, dA*dB)."""
        return np.array([s.vector for s in self.states])

    def projector(self) -> np.ndarray:
        """Π_S = Σ_i |α_i β_i><α_i β_i|."""
        v = self.vectors
        return v.T @ v.conj()

    @property
    def is_valid(self) -> bool:
        return self.validation is not None and self.validation.verdict is Verdict.VALID

    def with_validation(self, report: ValidationReport) -> "Upb":
        return dataclasses.replace(self, validation=report)

    def relabel(self, order) -> "Upb":
        """Same set with states reordered (validation is dropped)."""
        return Upb(tuple(self.states[i] for i in order), self.idx, self.label)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "dims": [self.idx.dA, self.idx.dB],
            "states": [s.to_json() for s in self.states],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Upb":
        try:
            dA, dB = (int(x) for x in data["dims"])
            states = tuple(
                ProductState(decode_vector(s["alpha"]), decode_vector(s["beta"])) for s in data["states"]
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed UPB document: {exc}") from exc
        return cls(states, BipartiteIndex(dA, dB), str(data.get("label", "custom")))


def load_upb(path) -> Upb:
    return Upb.from_json(json.loads(Path(path).read_text()))


# --------------------------------------------------------------------------- constructions


def pyramid_vectors() -> np.ndarray:
    """The five apex vectors of the regular pentagonal pyramid, as rows."""
    s5 = np.sqrt(5.0)
    h = 0.5 * np.sqrt(1.0 + s5)
    norm = 2.0 / np.sqrt(5.0 + s5)
    ang = 2.0 * np.pi * np.arange(5) / 5.0
    return norm * np.stack([np.cos(ang), np.sin(ang), np.full(5, h)], axis=1)


def build_pyramid(validate_now: bool = True) -> Upb:
    """Pyramid UPB in 3⊗3: p_i = v_i ⊗ v_{2i mod 5}."""
    v = pyramid_vectors()
    states = tuple(ProductState(v[i], v[(2 * i) % 5]) for i in range(5))
    upb = Upb(states, BipartiteIndex(3, 3), "pyramid")
    return upb.with_validation(validate(upb)) if validate_now else upb


def build_gentiles3n(n: int, validate_now: bool = True) -> Upb:
    """The 3n-5 state UPB in 3⊗n (n >= 4).

    Order: F_k^0, F_k^1, F_k^2 for k = 1..n-3, then psi_3, psi_4, psi_5, psi_6.
    """
    if n < 4:
        raise ValueError(f"the 3⊗n family needs n >= 4, got {n}")
    omega = np.exp(2j * np.pi / (n - 2))
    e3 = np.eye(3, dtype=np.complex128)
    en = np.eye(n, dtype=np.complex128)
    tail_idx = np.arange(3, n)
    states = []
    for p, lead in ((0, 1), (1, 2), (2, 0)):
        for k in range(1, n - 2):
            beta = en[lead].copy()
            beta[tail_idx] = omega ** (k * (tail_idx - 2))
            states.append(ProductState(e3[p], beta / np.sqrt(n - 2)))
    r2 = np.sqrt(2.0)
    states.append(ProductState((e3[0] - e3[1]) / r2, en[0]))
    states.append(ProductState((e3[1] - e3[2]) / r2, en[1]))
    states.append(ProductState((e3[2] - e3[0]) / r2, en[2]))
    states.append(ProductState(np.ones(3) / np.sqrt(3.0), np.ones(n) / np.sqrt(n)))
    upb = Upb(tuple(states), BipartiteIndex(3, n), f"gentiles:{n}")
    return upb.with_validation(validate(upb)) if validate_now else upb


def tensor_upb(s1: Upb, s2: Upb, *, require_valid: bool = True, validate_now: bool = True,
               options: ValidationOptions | None = None) -> Upb:
    """S1 ⊗ S2 on (A1A2)|(B1B2); state (i, j) is (α_i⊗α_j, β_i⊗β_j), i-major.

    Validation of the result skips the ε bound by default, because subset
    enumeration is combinatorial in the product dimension; the verdict is then
    Unverified unless ``options`` asks for ε.
    """
    if require_valid:
        for name, s in (("first", s1), ("second", s2)):
            if not s.is_valid:
                raise InvalidUpbError(f"{name} factor '{s.label}' is not a validated UPB")
    states = tuple(
        ProductState(np.kron(p.alpha, q.alpha), np.kron(p.beta, q.beta)) for p in s1.states for q in s2.states
    )
    idx = BipartiteIndex(s1.idx.dA * s2.idx.dA, s1.idx.dB * s2.idx.dB)
    upb = Upb(states, idx, f"({s1.label})x({s2.label})")
    if not validate_now:
        return upb
    return upb.with_validation(validate(upb, options or ValidationOptions(compute_epsilon=False)))


def regroup_permutation(d1: BipartiteIndex, d2: BipartiteIndex) -> np.ndarray:
    """Permutation ``perm`` with ``v_regrouped = v_naive[perm]``.

    ``v_naive`` lives on A1 B1 A2 B2 (plain Kronecker product of two product
    vectors); ``v_regrouped`` on A1 A2 B1 B2.
    """
    a1, b1, a2, b2 = d1.dA, d1.dB, d2.dA, d2.dB
    naive = np.arange(a1 * b1 * a2 * b2).reshape(a1, b1, a2, b2)
    return naive.transpose(0, 2, 1, 3).ravel()


def standard_product_basis(dA: int, dB: int) -> Upb:
    """All dA*dB computational product states: complete, hence extendible-by-definition fixture."""
    states = tuple(ProductState(np.eye(dA)[i], np.eye(dB)[j]) for i in range(dA) for j in range(dB))
    return Upb(states, BipartiteIndex(dA, dB), f"standard:{dA}x{dB}")


def trivial_upb() -> Upb:
    """The single state |0>⊗|0> in 1⊗1; only meaningful as a tensor-product unit."""
    return Upb((ProductState([1.0], [1.0]),), BipartiteIndex(1, 1), "trivial")


# --------------------------------------------------------------------------- validation


def gram_defect(vectors: np.ndarray) -> float:
    g = vectors.conj() @ vectors.T
    return float(np.max(np.abs(g - np.eye(len(vectors)))))


def local_rank(vectors: np.ndarray, tol_rank: float) -> int:
    sv = np.linalg.svd(vectors, compute_uv=False)
    return int(np.sum(sv > tol_rank))


def validate(s: Upb, opts: ValidationOptions | None = None) -> ValidationReport:
    """Check orthonormality, local spanning and (optionally) a certified ε > 0.

    Never raises for a bad basis; the outcome is in ``verdict``.
    """
    from .epsilon import NoAdmissiblePairError, epsilon_lower_bound

    opts = opts or ValidationOptions()
    tol = get_tolerances()
    tol_rank = tol.rank if opts.tol_rank is None else opts.tol_rank
    defect = gram_defect(s.vectors)
    spans_A = local_rank(s.alphas, tol_rank) == s.idx.dA
    spans_B = local_rank(s.betas, tol_rank) == s.idx.dB
    proper = len(s) < s.idx.total
    notes = []
    if defect > tol.orth:
        notes.append("product states are not orthonormal")
    if not proper:
        notes.append("the states span the whole space")
    if not (spans_A and spans_B):
        notes.append("local vectors do not span both factors")
    structural = defect <= tol.orth and spans_A and spans_B and proper

    eps = None
    if opts.compute_epsilon and structural:
        try:
            eps, _ = epsilon_lower_bound(s, tol_rank=tol_rank, threads=opts.threads)
        except NoAdmissiblePairError as exc:
            eps = 0.0
            notes.append(str(exc))

    if not structural or eps == 0.0:
        verdict = Verdict.INVALID
    elif eps is None:
        verdict = Verdict.UNVERIFIED
    else:
        verdict = Verdict.VALID if eps > 0 else Verdict.INVALID
    return ValidationReport(defect, spans_A, spans_B, proper, eps, verdict, tuple(notes))
