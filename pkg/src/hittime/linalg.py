"""Dense complex linear algebra built on a row-stacking vectorization.

A square matrix is flattened row by row, so ``vec([[a, b], [c, d]])`` is
``(a, b, c, d)``.  Under this convention

    vec(A @ X @ B.T) == kron(A, B) @ vec(X)

for all square ``A, B, X``, and the matrix representation of the conjugation
``X -> B X B*`` is ``kron(B, B.conj())``.  Everything downstream (superoperator
representations, fundamental matrices, hitting maps) relies on this identity,
which is pinned by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "vec",
    "unvec",
    "kron",
    "hs_inner",
    "hermitize",
    "frobenius",
    "fixed_space",
    "is_psd",
    "PsdCheck",
    "spectral_radius",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by the validation routines."""

    atol: float = 1e-10
    rtol: float = 1e-10

    def __post_init__(self) -> None:
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be non-negative")


DEFAULT_TOL = Tolerance()


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {m.shape}")
    return m


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = _as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def vec(a) -> np.ndarray:
    """Flatten a square matrix row by row into a length-n^2 vector."""
    return _as_square(a, "vec input").reshape(-1)


def unvec(v) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a length-n^2 vector into an n x n matrix."""
    w = np.asarray(v, dtype=complex).reshape(-1)
    n = math.isqrt(w.size)
    if n * n != w.size:
        raise DimensionError(f"unvec input length {w.size} is not a perfect square")
    return w.reshape(n, n)


def kron(a, b) -> np.ndarray:
    """Kronecker product, consistent with vec: vec(A X B^T) = kron(A, B) vec(X)."""
    return np.kron(_as_matrix(a, "a"), _as_matrix(b, "b"))


def hs_inner(b, a) -> complex:
    """Hilbert-Schmidt inner product Tr(B* A), conjugate-linear in ``b``."""
    bm = _as_square(b, "b")
    am = _as_square(a, "a")
    if bm.shape != am.shape:
        raise DimensionError(f"shape mismatch {bm.shape} vs {am.shape}")
    return complex(np.vdot(bm, am))


def hermitize(x) -> np.ndarray:
    """Hermitian part (X + X*) / 2, used before positivity checks."""
    m = _as_square(x, "x")
    return (m + m.conj().T) / 2


def frobenius(x) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(x)))


def fixed_space(m, tol: Tolerance | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the numerical eigenvalue-1 eigenspace of ``m``.

    Returns the right singular vectors ``v`` of ``m - I`` whose residual
    ``norm((m - I) v)`` is at most ``atol + rtol * norm(m, 2)``.  The list is
    empty when 1 is not an eigenvalue.
    """
    if tol is None:
        tol = DEFAULT_TOL
    mm = _as_square(m, "m")
    n = mm.shape[0]
    _, sing, vh = np.linalg.svd(mm - np.eye(n))
    threshold = tol.atol + tol.rtol * float(np.linalg.norm(mm, 2))
    return [vh[i].conj() for i in range(n) if sing[i] <= threshold]


class PsdCheck(NamedTuple):
    ok: bool
    min_eigenvalue: float


def is_psd(x, tol: Tolerance | None = None) -> PsdCheck:
    """Check positive semidefiniteness of a (nearly) Hermitian matrix.

    ``ok`` is true iff ``x`` is Hermitian within tolerance and the smallest
    eigenvalue of its Hermitian part is at least ``-atol``.  The minimum
    eigenvalue is always reported; a value above ``atol`` certifies strict
    positivity.
    """
    if tol is None:
        tol = DEFAULT_TOL
    m = _as_square(x, "x")
    herm_residual = frobenius(m - m.conj().T)
    min_eig = float(np.linalg.eigvalsh(hermitize(m))[0])
    hermitian = herm_residual <= tol.atol + tol.rtol * frobenius(m)
    return PsdCheck(hermitian and min_eig >= -tol.atol, min_eig)


def spectral_radius(m) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    mm = _as_square(m, "m")
    if mm.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(mm))))
