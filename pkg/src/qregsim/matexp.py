"""Matrix-exponential time stepping, independent of the spectral route.

Used as the brute-force oracle for the eigendecomposition propagator: U(t) =
exp(-i H t) is built by scaling and squaring with a Taylor series on the
scaled matrix, no eigensolver involved.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["expm", "expm_evolve"]

_TAYLOR_MAX_TERMS = 60


def expm(a: np.ndarray) -> np.ndarray:
    """exp(a) for a square complex matrix by scaling-and-squaring Taylor.

    The matrix is scaled by 2**-s until its 1-norm is at most 0.5, the series
    is summed to machine precision, and the result squared s times.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    norm = float(np.linalg.norm(a, 1)) if a.size else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0)
    b = a / (2.0**s)

    n = a.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _TAYLOR_MAX_TERMS + 1):
        term = term @ b / k
        result = result + term
        if float(np.max(np.abs(term))) < 1e-20 * max(1.0, float(np.max(np.abs(result)))):
            break
    for _ in range(s):
        result = result @ result
    return result


def expm_evolve(h: np.ndarray, c0: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) applied to c0."""
    return expm(-1j * t * np.asarray(h, dtype=complex)) @ np.asarray(c0, dtype=complex)
