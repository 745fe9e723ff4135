"""JSON encoding: complex numbers as ``[re, im]``, matrices as row-major nested lists.

Floats go through ``json``'s shortest round-trip repr, so equal inputs give
byte-identical documents and decoding recovers every double exactly.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def encode_matrix(m) -> list[list[list[float]]]:
    m = np.asarray(m)
    return [[encode_complex(z) for z in row] for row in m]


def decode_vector(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("a vector must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def decode_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("a matrix must be nested rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"
