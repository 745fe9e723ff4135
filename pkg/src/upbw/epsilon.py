"""The separation constant ε = min over product states of f(φ_A, φ_B).

``epsilon_lower_bound`` gives a certified lower bound from minimal spanning
subsets of the local vectors; ``epsilon_upper_bound`` attacks the minimum
directly by alternating eigenvector steps.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np

from . import kernels
from .config import get_tolerances, max_threads
from .linalg import DimensionError, haar_state
from .upb import ProductState, Upb

# Rows of A-subsets processed per block; bounds peak memory for large bases.
_BLOCK = 50_000
_TIE_RTOL = 1e-12


class NoAdmissiblePairError(ValueError):
    """No (S_A, i*) pair spans both sides: the basis is extendible or degenerate."""


@dataclass(frozen=True)
class SubsetCertificate:
    best_SA: tuple[int, ...]
    best_istar: int
    best_SB: tuple[int, ...]
    lambda_A: float
    lambda_B: float
    admissible_A: int  # spanning A-subsets found
    admissible_pairs: int

    @property
    def value(self) -> float:
        return (self.lambda_A / len(self.best_SA)) * (self.lambda_B / len(self.best_SB))

    def to_json(self) -> dict:
        return {
            "best_SA": list(self.best_SA),
            "best_istar": self.best_istar,
            "best_SB": list(self.best_SB),
            "lambda_A": self.lambda_A,
            "lambda_B": self.lambda_B,
            "admissible_A": self.admissible_A,
            "admissible_pairs": self.admissible_pairs,
        }


class UpperBound(NamedTuple):
    value: float
    argmin: ProductState
    histories: list[np.ndarray]


@dataclass(frozen=True)
class EpsilonBounds:
    lower: float
    upper: float
    argmin_upper: ProductState
    certificate: SubsetCertificate

    def __post_init__(self):
        if not (0 < self.lower <= self.upper + 1e-9):
            raise ValueError(f"inconsistent ε bounds: lower={self.lower!r}, upper={self.upper!r}")

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "certificate": self.certificate.to_json(),
            "argmin": self.argmin_upper.to_json(),
        }


# --------------------------------------------------------------------------- f


def f_value(s: Upb, phiA, phiB) -> float:
    """Σ_i |<φ_A|α_i>|² |<φ_B|β_i>|²."""
    phiA = np.asarray(phiA, dtype=np.complex128).ravel()
    phiB = np.asarray(phiB, dtype=np.complex128).ravel()
    if phiA.shape[0] != s.idx.dA or phiB.shape[0] != s.idx.dB:
        raise DimensionError(f"expected factors of dims ({s.idx.dA}, {s.idx.dB})")
    xa = np.abs(s.alphas @ phiA.conj()) ** 2
    xb = np.abs(s.betas @ phiB.conj()) ** 2
    return float(xa @ xb)


# --------------------------------------------------------------------------- lower bound


def _projector_ids(vecs: np.ndarray) -> np.ndarray:
    """Label vectors by their rounded projector so duplicates (up to phase) share an id."""
    seen: dict[bytes, int] = {}
    ids = np.empty(len(vecs), dtype=np.intp)
    for i, v in enumerate(vecs):
        key = (np.round(np.outer(v, v.conj()), 12) + 0.0).tobytes()
        ids[i] = seen.setdefault(key, len(seen))
    return ids


def _dedup_min_sv(vecs, ids, subsets, threads, backend):
    """Smallest singular value per subset, evaluated once per distinct multiset of projectors."""
    if len(subsets) == 0:
        return np.zeros(0)
    keys = np.sort(ids[subsets], axis=1)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    sv = kernels.min_singular_values(vecs, subsets[first], threads=threads, backend=backend)
    return sv[inverse.ravel()]


def _combinations(n: int, k: int, start: int, stop: int) -> np.ndarray:
    it = itertools.islice(itertools.combinations(range(n), k), start, stop)
    flat = np.fromiter(itertools.chain.from_iterable(it), dtype=np.intp, count=(stop - start) * k)
    return flat.reshape(stop - start, k)


def epsilon_lower_bound(s: Upb, *, tol_rank: float | None = None, threads: int | None = None,
                        backend: str | None = None) -> tuple[float, SubsetCertificate]:
    """Certified ε lower bound over all minimal spanning A-subsets.

    For each dA-subset S_A of A-side vectors that spans H_A and each i* in it,
    S_B = (indices outside S_A) ∪ {i*}. Pairs whose S_B does not span H_B are
    skipped. The bound is the minimum over the remaining pairs of
    ``λ_min(Σ_{S_A}|α><α|)/|S_A| · λ_min(Σ_{S_B}|β><β|)/|S_B|``; ties go to the
    lexicographically smallest (S_A, i*).
    """
    tol_rank = get_tolerances().rank if tol_rank is None else tol_rank
    n, dA, dB = len(s), s.idx.dA, s.idx.dB
    if n < dA:
        raise NoAdmissiblePairError(f"{n} A-side vectors cannot span a {dA}-dimensional space")
    kB = n - dA + 1
    A, B = s.alphas, s.betas
    idsA, idsB = _projector_ids(A), _projector_ids(B)

    total = comb(n, dA)
    best_val = np.inf
    best = None
    n_adm_A = 0
    n_pairs = 0
    for start in range(0, total, _BLOCK):
        SA = _combinations(n, dA, start, min(total, start + _BLOCK))
        svA = _dedup_min_sv(A, idsA, SA, threads, backend)
        ok = svA > tol_rank
        SA, lamA = SA[ok], svA[ok] ** 2
        m = len(SA)
        n_adm_A += m
        if m == 0 or kB < dB:
            continue
        mask = np.ones((m, n), dtype=bool)
        mask[np.arange(m)[:, None], SA] = False
        comp = np.nonzero(mask)[1].reshape(m, n - dA)
        # row r*dA + p pairs S_A[r] with i* = S_A[r, p]
        SB = np.concatenate([np.repeat(comp, dA, axis=0), SA.reshape(-1, 1)], axis=1)
        SB.sort(axis=1)
        svB = _dedup_min_sv(B, idsB, SB, threads, backend)
        okB = svB > tol_rank
        n_pairs += int(okB.sum())
        if not okB.any():
            continue
        vals = np.where(okB, np.repeat(lamA, dA) / dA * (svB ** 2) / kB, np.inf)
        vmin = vals.min()
        if vmin < best_val * (1 - _TIE_RTOL):
            j = int(np.argmax(vals <= vmin * (1 + _TIE_RTOL)))
            r, p = divmod(j, dA)
            best_val = float(vmin)
            best = (tuple(int(x) for x in SA[r]), int(SA[r, p]), tuple(int(x) for x in SB[j]),
                    float(lamA[r]), float(svB[j] ** 2))
    if best is None:
        raise NoAdmissiblePairError(
            "no minimal spanning A-subset yields a spanning B-side set; "
            "the basis is extendible or degenerate"
        )
    cert = SubsetCertificate(best[0], best[1], best[2], best[3], best[4], n_adm_A, n_pairs)
    return best_val, cert


# --------------------------------------------------------------------------- upper bound


def check_monotone(history: np.ndarray, slack: float = 1e-12) -> None:
    steps = np.diff(history)
    scale = np.maximum(1.0, np.abs(history[1:]))
    bad = np.nonzero(steps > slack * scale)[0]
    if bad.size:
        k = int(bad[0])
        raise RuntimeError(f"seesaw increased the objective at half-step {k + 1}: "
                           f"{history[k]!r} -> {history[k + 1]!r}")


def minimize_product_expectation(H, dA: int, dB: int, restarts: int, iters: int, rng_seed: int, *,
                                 tol: float = 1e-13, backend: str | None = None,
                                 threads: int | None = None):
    """Best-of-restarts seesaw for min <φ_A φ_B|H|φ_A φ_B>.

    Restart r starts from Haar-random factors drawn with seed ``rng_seed + r``.
    Returns (value, phiA, phiB, histories); ties go to the lowest restart.
    """
    if restarts < 1 or iters < 1:
        raise ValueError("restarts and iters must be >= 1")
    H = np.ascontiguousarray(H, dtype=np.complex128)

    def run(r):
        rng = np.random.default_rng(rng_seed + r)
        pa0, pb0 = haar_state(dA, rng), haar_state(dB, rng)
        pa, pb, hist = kernels.seesaw(H, dA, dB, pa0, pb0, iters, tol, backend=backend)
        check_monotone(hist)
        return pa, pb, hist

    threads = min(threads or max_threads(), restarts)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]
    finals = [float(np.real(np.kron(pa, pb).conj() @ H @ np.kron(pa, pb))) for pa, pb, _ in results]
    r = int(np.argmin(finals))
    return finals[r], results[r][0], results[r][1], [h for _, _, h in results]


def epsilon_upper_bound(s: Upb, restarts: int = 64, iters: int = 500, rng_seed: int = 0, *,
                        backend: str | None = None, threads: int | None = None) -> UpperBound:
    """Numerical upper bound on ε: the best local minimum of f found by seesaw."""
    _, pa, pb, hists = minimize_product_expectation(
        s.projector(), s.idx.dA, s.idx.dB, restarts, iters, rng_seed, backend=backend, threads=threads
    )
    argmin = ProductState(pa / np.linalg.norm(pa), pb / np.linalg.norm(pb))
    return UpperBound(f_value(s, argmin.alpha, argmin.beta), argmin, hists)


def epsilon_bounds(s: Upb, restarts: int = 64, iters: int = 500, rng_seed: int = 0, *,
                   tol_rank: float | None = None, backend: str | None = None,
                   threads: int | None = None) -> EpsilonBounds:
    lower, cert = epsilon_lower_bound(s, tol_rank=tol_rank, threads=threads, backend=backend)
    up = epsilon_upper_bound(s, restarts, iters, rng_seed, backend=backend, threads=threads)
    return EpsilonBounds(lower, up.value, up.argmin, cert)


# --------------------------------------------------------------------------- sandwich bound


class SandwichTerms(NamedTuple):
    sum: float
    max_term: float
    lambda_min: float
    count: int


def proposition1_check(vectors, phi) -> SandwichTerms:
    """Terms of ``n·max|<φ|ψ_i>|² >= Σ|<φ|ψ_i>|² >= λ_min(Σ|ψ_i><ψ_i|)`` for a spanning set."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    if vecs.shape[1] != phi.shape[0]:
        raise DimensionError("vectors and phi live in different spaces")
    P = vecs.T @ vecs.conj()
    lam = np.linalg.eigvalsh(P)
    if np.linalg.matrix_rank(vecs, tol=get_tolerances().rank) < vecs.shape[1]:
        raise ValueError("the vectors do not span the space")
    terms = np.abs(vecs @ phi.conj()) ** 2
    return SandwichTerms(float(terms.sum()), float(terms.max()), float(lam[0]), len(vecs))
