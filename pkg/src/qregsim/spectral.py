"""Dense Hermitian eigendecomposition and the secular-equation spectrum.

Two independent routes to the same physics. `diagonalize` wraps a dense
Hermitian eigensolver and enforces the residual/orthonormality contract.
`secular_roots` solves, by bracketed bisection between the pole frequencies,
the rational secular equation

    P(E) = E - epsilon - N * sum_k |g_k|^2 / (E - omega_k) = 0

whose N_b + 1 zeros are the eigenvalues of the symmetric (permutation-
invariant) sector under qubit-independent coupling; the two routes are
cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, UniformCoupling, mode_frequencies

__all__ = [
    "DiagonalizationError",
    "BracketError",
    "SpectralDecomposition",
    "diagonalize",
    "secular_function",
    "secular_roots",
]

#: widths below max(1, |E|) * this factor end a bisection
_ROOT_RTOL = 1e-12
_RESIDUAL_RTOL = 1e-10
_ORTHO_TOL = 1e-10


class DiagonalizationError(RuntimeError):
    """Eigensolver failed to converge or violated its accuracy contract."""


class BracketError(RuntimeError):
    """A secular-root bracket did not change sign (degenerate-pole mishandling)."""


@dataclass(eq=False)
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix.

    ``eigenvalues`` are real and nondecreasing; column i of ``eigenvectors``
    is the (orthonormal) eigenvector of eigenvalue i.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def diagonalize(h: np.ndarray) -> SpectralDecomposition:
    """Full eigensystem of a Hermitian matrix, with contract checks.

    Deterministic: identical input bytes give identical output. Raises
    DiagonalizationError if the solver does not converge or if the residual
    ||H v - E v|| exceeds 1e-10 * max(1, ||H||_F) for any eigenpair, or the
    eigenvector Gram matrix deviates from the identity by more than 1e-10.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ValueError("matrix entries must be finite")
    scale = max(1.0, float(np.linalg.norm(h)))
    herm_defect = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if herm_defect > 1e-12 * scale:
        raise ValueError(f"matrix is not Hermitian (defect {herm_defect:.3e})")

    try:
        evals, evecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"eigensolver did not converge: {exc}") from exc

    residual = float(np.max(np.abs(h @ evecs - evecs * evals))) if h.size else 0.0
    if residual > _RESIDUAL_RTOL * scale:
        raise DiagonalizationError(
            f"eigenpair residual {residual:.3e} exceeds {_RESIDUAL_RTOL:.0e} * {scale:.3e}"
        )
    gram_defect = float(
        np.max(np.abs(evecs.conj().T @ evecs - np.eye(evals.size)))
    )
    if gram_defect > _ORTHO_TOL:
        raise DiagonalizationError(
            f"eigenvectors not orthonormal (Gram defect {gram_defect:.3e})"
        )
    return SpectralDecomposition(evals, evecs)


def secular_function(params: ModelParams, e: float | np.ndarray):
    """P(E) for uniform coupling; vectorized over E. Poles sit at the omega_k."""
    c = params.coupling
    if not isinstance(c, UniformCoupling):
        raise ValueError("the secular equation presumes qubit-independent coupling")
    n = params.shape.n_qubits
    omegas = mode_frequencies(params)
    w = n * abs(c.g0) ** 2
    e = np.asarray(e, dtype=float)
    terms = w / (e[..., np.newaxis] - omegas)
    return e - params.epsilon - np.sum(terms, axis=-1)


def _bisect(f, lo: float, hi: float) -> float:
    """Root of f on [lo, hi] given f(lo) < 0 < f(hi); pure bisection."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _ROOT_RTOL * max(1.0, abs(mid)):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _edge_inside(f, pole: float, width: float, side: int, want_negative: bool) -> float:
    """Point near `pole` (offset into the interval, direction `side` = +-1)
    where f has the requested sign; f diverges at the pole, so shrinking the
    offset is guaranteed to succeed up to floating-point resolution."""
    delta = width
    for _ in range(600):
        x = pole + side * delta
        if x != pole:
            fx = f(x)
            if (fx < 0.0) if want_negative else (fx > 0.0):
                return x
        delta *= 0.25
        if delta == 0.0:
            break
    raise BracketError(
        f"no sign change found approaching pole {pole!r}; "
        "check for mishandled degenerate frequencies"
    )


def secular_roots(params: ModelParams) -> np.ndarray:
    """All N_b + 1 zeros of the secular function, in ascending order.

    There is exactly one zero below the lowest mode frequency, one between
    each pair of adjacent (distinct) frequencies, and one above the highest:
    P is strictly increasing between poles, so bracketed bisection locates
    each root to width 1e-12 * max(1, |E|). Degenerate frequencies are merged
    into one pole of combined weight and contribute the frequency itself as a
    root with multiplicity (group size - 1); with zero coupling every pole
    cancels and the frequencies themselves are returned alongside epsilon.
    """
    c = params.coupling
    if not isinstance(c, UniformCoupling):
        raise ValueError("the secular equation presumes qubit-independent coupling")
    n = params.shape.n_qubits
    eps = params.epsilon
    omegas = mode_frequencies(params)
    poles, counts = np.unique(omegas, return_counts=True)

    # Degenerate groups keep (count - 1) roots pinned at the frequency itself.
    roots = [float(p) for p, cnt in zip(poles, counts) for _ in range(cnt - 1)]

    per_mode_weight = n * abs(c.g0) ** 2
    if per_mode_weight == 0.0:
        roots.extend(float(p) for p in poles)
        roots.append(eps)
        return np.sort(np.asarray(roots))

    weights = per_mode_weight * counts.astype(float)

    def f(e: float) -> float:
        return e - eps - float(np.sum(weights / (e - poles)))

    span = max(1.0, float(poles[-1] - poles[0]), abs(eps - poles[0]), abs(eps - poles[-1]))

    # Leftmost interval (-inf, poles[0]).
    hi = _edge_inside(f, float(poles[0]), span / 4, side=-1, want_negative=False)
    step = span
    lo = float(poles[0]) - step
    for _ in range(200):
        if f(lo) < 0.0:
            break
        step *= 2.0
        lo = float(poles[0]) - step
    else:
        raise BracketError("could not bracket the leftmost root")
    roots.append(_bisect(f, lo, hi))

    # Interior intervals (poles[j], poles[j+1]).
    for j in range(poles.size - 1):
        p_lo, p_hi = float(poles[j]), float(poles[j + 1])
        width = (p_hi - p_lo) / 4
        lo = _edge_inside(f, p_lo, width, side=+1, want_negative=True)
        hi = _edge_inside(f, p_hi, width, side=-1, want_negative=False)
        roots.append(_bisect(f, lo, hi))

    # Rightmost interval (poles[-1], +inf).
    lo = _edge_inside(f, float(poles[-1]), span / 4, side=+1, want_negative=True)
    step = span
    hi = float(poles[-1]) + step
    for _ in range(200):
        if f(hi) > 0.0:
            break
        step *= 2.0
        hi = float(poles[-1]) + step
    else:
        raise BracketError("could not bracket the rightmost root")
    roots.append(_bisect(f, lo, hi))

    return np.sort(np.asarray(roots))
