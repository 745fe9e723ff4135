"""Numerical tolerances shared by every module.

The active set lives in a context variable, so overrides made with
:func:`use_tolerances` are local to the current thread/context.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-10  # |‖v‖ - 1| for state vectors
    herm: float = 1e-10  # max |A_ij - conj(A_ji)|
    eig: float = 1e-9  # eigen-residual, relative to spectral norm
    orth: float = 1e-10  # |<p_i|p_j>| for i != j
    rank: float = 1e-8  # smallest singular value of a spanning set
    ppt: float = 1e-9  # min eigenvalue of the partial transpose
    cert: float = 1e-9  # sign decisions in map certificates
    maxent: float = 1e-8  # entropy / Schmidt coefficient checks
    overlap: float = 1e-6  # default threshold for <Psi|rho|Psi> > 0


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "upbw_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace the active tolerances for the current context and return them."""
    tol = dataclasses.replace(_current.get(), **overrides)
    _current.set(tol)
    return tol


@contextlib.contextmanager
def use_tolerances(**overrides: float):
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def max_threads() -> int:
    """Thread cap from ``UPBW_THREADS`` (defaults to the CPU count, at most 8)."""
    raw = os.environ.get("UPBW_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))
