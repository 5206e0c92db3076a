"""Positive trace-preserving maps on M_n and their matrix representations.

A map T on n x n matrices is stored through its n^2 x n^2 matrix
representation ``rep`` acting on row-stacked vectorizations:
``T(X) = unvec(rep @ vec(X))``.  Constructors are provided for Kraus
families (``rep = sum_i kron(V_i, V_i.conj())``), for classical
column-stochastic matrices, and for raw representation matrices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    PsdCheck,
    Tolerance,
    fixed_space,
    frobenius,
    hermitize,
    is_psd,
    unvec,
    vec,
)

__all__ = [
    "SuperOperator",
    "DensityMatrix",
    "IrreducibilityCertificate",
    "CERTIFIED_IRREDUCIBLE",
    "NOT_IRREDUCIBLE",
    "INCONCLUSIVE",
    "density",
    "pure_density",
    "from_kraus",
    "from_stochastic",
    "from_raw",
    "apply",
    "adjoint",
    "choi_matrix",
    "check_trace_preserving",
    "check_complete_positivity",
    "positivity_sample",
    "invariant_state",
    "validate_column_stochastic",
    "TraceCheck",
    "CpCheck",
    "PositivitySample",
]

CERTIFIED_IRREDUCIBLE = "certified_irreducible"
NOT_IRREDUCIBLE = "not_irreducible"
INCONCLUSIVE = "inconclusive"

# Unit-norm fixed vectors of genuine states have |trace| >= 1, so anything
# this small signals a traceless fixed point, not a state.
_TRACE_FLOOR = 1e-8
# Hermitizing the fixed vector must not move it off the fixed space.
_FIXED_RESIDUAL_CEIL = 1e-8


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """Matrix representation of a linear map on M_n.

    Attributes
    ----------
    dim : int
        Dimension n of the underlying pure-state space.
    rep : ndarray, shape (n^2, n^2)
        Representation matrix acting on row-stacked vectorizations.
    provenance : str
        One of ``"kraus"``, ``"stochastic"``, ``"raw"``.
    kraus_ops : tuple of ndarray or None
        The Kraus family, when constructed from one.
    stochastic : ndarray or None
        The column-stochastic matrix, when constructed from one.
    """

    dim: int
    rep: np.ndarray
    provenance: str
    kraus_ops: tuple[np.ndarray, ...] | None = None
    stochastic: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A positive semidefinite matrix of unit trace."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class IrreducibilityCertificate:
    """Operational irreducibility verdict for a trace-preserving map.

    ``certified_irreducible`` requires a one-dimensional fixed space whose
    normalized fixed point is a strictly positive state.
    """

    invariant_state: DensityMatrix | None
    fixed_space_dim: int
    min_eigenvalue_of_pi: float
    verdict: str


class TraceCheck(NamedTuple):
    ok: bool
    residual: float


class CpCheck(NamedTuple):
    ok: bool
    min_choi_eigenvalue: float


class PositivitySample(NamedTuple):
    ok: bool
    failures: int
    worst_eigenvalue: float
    samples: int
    seed: int


def _as_square(a, name: str) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def density(matrix, tol: Tolerance | None = None) -> DensityMatrix:
    """Validate and wrap a matrix as a density matrix.

    Requires Hermiticity, unit trace and positive semidefiniteness, each
    within tolerance.  Positivity is checked on the Hermitian part.
    """
    if tol is None:
        tol = DEFAULT_TOL
    m = _as_square(matrix, "density matrix")
    herm_residual = frobenius(m - m.conj().T)
    if herm_residual > tol.atol + tol.rtol * frobenius(m):
        raise ValidationError(
            f"density matrix is not Hermitian (residual {herm_residual:.3e})"
        )
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol.atol + tol.rtol:
        raise ValidationError(f"density matrix has trace {tr}, expected 1")
    check = is_psd(m, tol)
    if not check.ok:
        raise ValidationError(
            f"density matrix is not positive semidefinite "
            f"(min eigenvalue {check.min_eigenvalue:.3e})"
        )
    return DensityMatrix(m.copy())


def pure_density(state) -> DensityMatrix:
    """Density matrix |phi><phi| of a pure state, normalizing the vector."""
    v = np.asarray(state, dtype=complex).reshape(-1)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ValidationError("pure state vector must be nonzero")
    v = v / nrm
    return DensityMatrix(np.outer(v, v.conj()))


def as_density(rho, tol: Tolerance | None = None) -> DensityMatrix:
    """Coerce a DensityMatrix or raw matrix into a validated DensityMatrix."""
    if isinstance(rho, DensityMatrix):
        return rho
    return density(rho, tol)


def from_kraus(kraus_ops: Sequence, tol: Tolerance | None = None) -> SuperOperator:
    """Superoperator of the map X -> sum_i V_i X V_i*.

    Trace preservation (sum V_i* V_i = I) is checked and reported as a
    warning, never enforced.
    """
    if tol is None:
        tol = DEFAULT_TOL
    if len(kraus_ops) == 0:
        raise ValidationError("at least one Kraus operator is required")
    ops = tuple(_as_square(v, "Kraus operator") for v in kraus_ops)
    n = ops[0].shape[0]
    for v in ops:
        if v.shape[0] != n:
            raise DimensionError(
                f"Kraus operators have mixed dimensions {v.shape[0]} vs {n}"
            )
    rep = np.zeros((n * n, n * n), dtype=complex)
    for v in ops:
        rep += np.kron(v, v.conj())
    residual = frobenius(sum(v.conj().T @ v for v in ops) - np.eye(n))
    if residual > tol.atol + tol.rtol * math.sqrt(n):
        warnings.warn(
            f"Kraus operators are not trace preserving (residual {residual:.3e})",
            stacklevel=2,
        )
    return SuperOperator(n, rep, "kraus", kraus_ops=ops)


def validate_column_stochastic(p, tol: Tolerance | None = None) -> np.ndarray:
    """Validate a column-stochastic matrix and return it as a float array.

    Column j holds the outgoing distribution of state j; entries must be
    non-negative and each column must sum to 1 within tolerance.  Offending
    columns are named 1-based in error messages.
    """
    if tol is None:
        tol = DEFAULT_TOL
    arr = np.asarray(p)
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag)) > tol.atol:
            raise ValidationError("stochastic matrix must be real")
        arr = arr.real
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"stochastic matrix must be square, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("stochastic matrix contains non-finite entries")
    for j in range(arr.shape[1]):
        col = arr[:, j]
        if col.min() < -tol.atol:
            raise ValidationError(
                f"column {j + 1} has a negative entry ({col.min():.3e})"
            )
        colsum = float(col.sum())
        if abs(colsum - 1.0) > tol.atol + tol.rtol:
            raise ValidationError(f"column {j + 1} sums to {colsum!r}, expected 1")
    return arr


def from_stochastic(p, tol: Tolerance | None = None) -> SuperOperator:
    """Embed a column-stochastic matrix as a map on M_n.

    The resulting map sends diag(x) to diag(P x) and annihilates off-diagonal
    components, so its action on diagonal matrices mimics the Markov chain.
    """
    arr = validate_column_stochastic(p, tol)
    n = arr.shape[0]
    rep = np.zeros((n * n, n * n), dtype=complex)
    diag_idx = np.arange(n) * (n + 1)
    rep[np.ix_(diag_idx, diag_idx)] = arr
    return SuperOperator(n, rep, "stochastic", stochastic=arr.copy())


def from_raw(rep) -> SuperOperator:
    """Wrap an n^2 x n^2 representation matrix verbatim; nothing is assumed."""
    m = _as_square(rep, "superoperator representation")
    n = math.isqrt(m.shape[0])
    if n * n != m.shape[0]:
        raise DimensionError(
            f"representation size {m.shape[0]} is not a perfect square"
        )
    return SuperOperator(n, m.copy(), "raw")


def apply(t: SuperOperator, x) -> np.ndarray:
    """Apply the map to a matrix: unvec(rep @ vec(X))."""
    m = _as_square(x, "map argument")
    if m.shape[0] != t.dim:
        raise DimensionError(f"expected a {t.dim} x {t.dim} matrix, got {m.shape}")
    return unvec(t.rep @ vec(m))


def adjoint(t: SuperOperator) -> SuperOperator:
    """Adjoint map for the Hilbert-Schmidt inner product; rep is rep*."""
    if t.provenance == "kraus" and t.kraus_ops is not None:
        ops = tuple(v.conj().T for v in t.kraus_ops)
        return SuperOperator(t.dim, t.rep.conj().T, "kraus", kraus_ops=ops)
    return SuperOperator(t.dim, t.rep.conj().T, "raw")


def choi_matrix(t: SuperOperator) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) T(|i><j|), PSD iff T is completely positive."""
    n = t.dim
    rep4 = t.rep.reshape(n, n, n, n)
    return np.einsum("klij->ikjl", rep4).reshape(n * n, n * n)


def check_trace_preserving(
    t: SuperOperator, tol: Tolerance | None = None
) -> TraceCheck:
    """Check T*(I) = I; returns the verdict and the Frobenius residual."""
    if tol is None:
        tol = DEFAULT_TOL
    n = t.dim
    residual = frobenius(unvec(t.rep.conj().T @ vec(np.eye(n))) - np.eye(n))
    return TraceCheck(residual <= tol.atol + tol.rtol * math.sqrt(n), residual)


def check_complete_positivity(
    t: SuperOperator, tol: Tolerance | None = None
) -> CpCheck:
    """PSD test on the Choi matrix; certifies complete positivity."""
    check: PsdCheck = is_psd(choi_matrix(t), tol)
    return CpCheck(check.ok, check.min_eigenvalue)


def positivity_sample(
    t: SuperOperator,
    samples: int = 1000,
    seed: int = 0,
    tol: Tolerance | None = None,
) -> PositivitySample:
    """Heuristic positivity check for maps whose Choi matrix is not PSD.

    Applies the map to ``samples`` random pure-state densities and checks the
    outputs for positive semidefiniteness.  A pass does not prove positivity;
    a failure disproves it.
    """
    if tol is None:
        tol = DEFAULT_TOL
    rng = np.random.default_rng(seed)
    failures = 0
    worst = math.inf
    for _ in range(samples):
        v = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
        out = apply(t, pure_density(v).matrix)
        check = is_psd(out, tol)
        worst = min(worst, check.min_eigenvalue)
        if not check.ok:
            failures += 1
    return PositivitySample(failures == 0, failures, worst, samples, seed)


def invariant_state(
    t: SuperOperator, tol: Tolerance | None = None
) -> IrreducibilityCertificate:
    """Compute the fixed space of the map and certify irreducibility.

    The map must be trace preserving.  A one-dimensional fixed space whose
    Hermitized, trace-normalized fixed point is a strictly positive state
    yields the verdict ``certified_irreducible``; a larger fixed space yields
    ``not_irreducible``; degenerate numerical outcomes are ``inconclusive``.
    """
    if tol is None:
        tol = DEFAULT_TOL
    tp = check_trace_preserving(t, tol)
    if not tp.ok:
        raise PreconditionError(
            f"map is not trace preserving (residual {tp.residual:.3e})"
        )
    basis = fixed_space(t.rep, tol)
    dim = len(basis)
    if dim == 0:
        return IrreducibilityCertificate(None, 0, float("nan"), INCONCLUSIVE)
    if dim > 1:
        return IrreducibilityCertificate(None, dim, float("nan"), NOT_IRREDUCIBLE)
    candidate = hermitize(unvec(basis[0]))
    tr = float(np.trace(candidate).real)
    if abs(tr) < _TRACE_FLOOR:
        return IrreducibilityCertificate(None, 1, float("nan"), INCONCLUSIVE)
    pi = candidate / tr
    check = is_psd(pi, tol)
    fixed_residual = frobenius(apply(t, pi) - pi)
    if not check.ok or fixed_residual > _FIXED_RESIDUAL_CEIL:
        return IrreducibilityCertificate(None, 1, check.min_eigenvalue, INCONCLUSIVE)
    verdict = (
        CERTIFIED_IRREDUCIBLE if check.min_eigenvalue > tol.atol else NOT_IRREDUCIBLE
    )
    return IrreducibilityCertificate(
        DensityMatrix(pi), 1, check.min_eigenvalue, verdict
    )
