"""Monitored first visits to a subspace: hitting and return time machinery.

Monitoring means a projective check after every application of the map T: the
process survives step r with the compressed state (QT)^r rho, where Q(X) = QXQ
projects onto the complement of the arrival subspace V.  The maps

    H = T (I - QT)^{-1},          (hitting probability map)
    K = T (I - QT)^{-2},          (mean hitting time map)

collect the whole monitored evolution:  Tr((I - Q) H rho) is the probability
of ever reaching V and Tr((I - Q) K rho) the expected time of the first visit.
The block decomposition induced by I - Q and Q links K to the fundamental map
Z and yields the mean hitting time formula used by :func:`mhtf_orthogonal`
and :func:`mhtf_general`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, NumericError, OrthogonalityError, ValidationError
from .fundamental import FundamentalData, fundamental_map
from .linalg import DEFAULT_TOL, Tolerance, frobenius, hermitize, spectral_radius, vec, unvec
from .maps import (
    DensityMatrix,
    IrreducibilityCertificate,
    SuperOperator,
    as_density,
    density,
    invariant_state,
)

__all__ = [
    "ArrivalSubspace",
    "SuperProjectors",
    "HittingSolution",
    "OrthogonalMhtf",
    "FirstStep",
    "ORTHOGONALITY_TOL",
    "subspace_from_vectors",
    "subspace_from_indices",
    "super_projectors",
    "hitting_maps",
    "block",
    "solve_hitting",
    "hitting_probability",
    "mean_hitting_time_direct",
    "mhtf_orthogonal",
    "dnl_maps",
    "condition_first_step",
    "mhtf_general",
]

# User-supplied states carry entry round-off, so support preconditions are
# checked against a residual looser than the numerical tolerance.
ORTHOGONALITY_TOL = 1e-8

# Monitored evolution must contract; spectral radius of QT this close to 1
# makes the resolvent solves meaningless.
_MIN_SPECTRAL_GAP = 1e-9

_COND_CEIL = 1e14


@dataclass(frozen=True, eq=False)
class ArrivalSubspace:
    """Orthogonal projector pair (P, Q = I - P) for a proper nonzero subspace."""

    dim_ambient: int
    rank: int
    projector_p: np.ndarray
    projector_q: np.ndarray
    basis: np.ndarray  # n x rank, orthonormal columns spanning the subspace


@dataclass(frozen=True, eq=False)
class SuperProjectors:
    """Projectors P.P, Q.Q and the traceless remainder on M_n."""

    pp_rep: np.ndarray
    qq_rep: np.ndarray
    rr_rep: np.ndarray


@dataclass(frozen=True, eq=False)
class HittingSolution:
    """Everything needed to answer hitting-time queries for one (map, subspace)."""

    map: SuperOperator
    subspace: ArrivalSubspace
    projectors: SuperProjectors
    fd: FundamentalData
    h_rep: np.ndarray
    k_rep: np.ndarray
    k11: np.ndarray
    k12: np.ndarray
    k21: np.ndarray
    k22: np.ndarray
    spectral_radius_qphi: float
    condition_estimate: float
    tol: Tolerance


class HittingMapsResult(NamedTuple):
    h_rep: np.ndarray
    k_rep: np.ndarray
    spectral_radius_qphi: float
    condition_estimate: float


class OrthogonalMhtf(NamedTuple):
    tau: float
    psi_term: float  # Tr((DZ)_11 rho_psi), independent of rho_psi
    phi_term: float  # Tr((DZ)_12 rho_phi)


class FirstStep(NamedTuple):
    absorbed: bool
    weight: float
    next_state: DensityMatrix | None


class DnlMaps(NamedTuple):
    d_rep: np.ndarray
    n_rep: np.ndarray
    l_rep: np.ndarray


def subspace_from_vectors(vectors, tol: Tolerance | None = None) -> ArrivalSubspace:
    """Arrival subspace spanned by the given vectors.

    The vectors are orthonormalized; linear dependence is collapsed.  The
    span must be proper and nonzero.
    """
    if tol is None:
        tol = DEFAULT_TOL
    cols = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not cols:
        raise ValidationError("at least one spanning vector is required")
    n = cols[0].size
    for v in cols:
        if v.size != n:
            raise DimensionError("spanning vectors have mixed lengths")
    a = np.column_stack(cols)
    u, sing, _ = np.linalg.svd(a, full_matrices=False)
    if sing.size == 0 or sing[0] <= tol.atol:
        raise ValidationError("spanning vectors span the zero subspace")
    rank = int(np.sum(sing > tol.atol + tol.rtol * sing[0]))
    if rank >= n:
        raise ValidationError(
            "arrival subspace must be proper (a nontrivial subspace is required)"
        )
    basis = u[:, :rank]
    p = hermitize(basis @ basis.conj().T)
    return ArrivalSubspace(n, rank, p, np.eye(n) - p, basis)


def subspace_from_indices(n: int, indices) -> ArrivalSubspace:
    """Arrival subspace spanned by computational basis states (0-based indices)."""
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise ValidationError("at least one basis index is required")
    if idx[0] < 0 or idx[-1] >= n:
        raise ValidationError(f"basis indices must lie in [0, {n - 1}]")
    if len(idx) >= n:
        raise ValidationError(
            "arrival subspace must be proper (a nontrivial subspace is required)"
        )
    basis = np.zeros((n, len(idx)), dtype=complex)
    for col, i in enumerate(idx):
        basis[i, col] = 1.0
    p = np.zeros((n, n), dtype=complex)
    p[idx, idx] = 1.0
    return ArrivalSubspace(n, len(idx), p, np.eye(n) - p, basis)


def super_projectors(subspace: ArrivalSubspace) -> SuperProjectors:
    """Lift (P, Q) to M_n: PP = kron(P, conj(P)), QQ = kron(Q, conj(Q))."""
    p, q = subspace.projector_p, subspace.projector_q
    pp = np.kron(p, p.conj())
    qq = np.kron(q, q.conj())
    rr = np.eye(pp.shape[0]) - pp - qq
    return SuperProjectors(pp, qq, rr)


def hitting_maps(
    t: SuperOperator,
    sp: SuperProjectors,
    tol: Tolerance | None = None,
) -> HittingMapsResult:
    """Representations of H = T (I - QT)^{-1} and K = T (I - QT)^{-2}.

    Computed by two successive linear solves (never by squaring an inverse).
    Requires the monitored evolution QT to contract, which holds whenever the
    map is certified irreducible and the subspace is proper.
    """
    if tol is None:
        tol = DEFAULT_TOL
    qphi = sp.qq_rep @ t.rep
    radius = spectral_radius(qphi)
    if radius >= 1.0 - _MIN_SPECTRAL_GAP:
        raise NumericError(
            f"monitored evolution does not contract: spectral radius of the "
            f"survival map is {radius:.12g} (map reducible or subspace trivial)"
        )
    d = qphi.shape[0]
    m = np.eye(d) - qphi
    cond = float(np.linalg.cond(m))
    if not np.isfinite(cond) or cond > _COND_CEIL:
        raise NumericError(
            f"survival resolvent is singular to working precision "
            f"(condition estimate {cond:.3e}, spectral radius {radius:.12g})"
        )
    h_rep = np.linalg.solve(m.T, t.rep.T).T
    k_rep = np.linalg.solve(m.T, h_rep.T).T
    return HittingMapsResult(h_rep, k_rep, radius, cond)


def block(t_rep: np.ndarray, sp: SuperProjectors, i: int, j: int) -> np.ndarray:
    """Full-size block of the decomposition induced by I - QQ (index 1) and QQ (2)."""
    if i not in (1, 2) or j not in (1, 2):
        raise ValidationError("block indices must be 1 or 2")
    eye = np.eye(t_rep.shape[0])
    left = eye - sp.qq_rep if i == 1 else sp.qq_rep
    right = eye - sp.qq_rep if j == 1 else sp.qq_rep
    return left @ t_rep @ right


def solve_hitting(
    t: SuperOperator,
    subspace: ArrivalSubspace,
    cert: IrreducibilityCertificate | None = None,
    tol: Tolerance | None = None,
) -> HittingSolution:
    """Bundle fundamental data, hitting maps and K blocks for one (map, subspace)."""
    if tol is None:
        tol = DEFAULT_TOL
    if subspace.dim_ambient != t.dim:
        raise DimensionError(
            f"subspace lives in dimension {subspace.dim_ambient}, map in {t.dim}"
        )
    if cert is None:
        cert = invariant_state(t, tol)
    sp = super_projectors(subspace)
    fd = fundamental_map(t, cert, tol)
    hm = hitting_maps(t, sp, tol)
    return HittingSolution(
        map=t,
        subspace=subspace,
        projectors=sp,
        fd=fd,
        h_rep=hm.h_rep,
        k_rep=hm.k_rep,
        k11=block(hm.k_rep, sp, 1, 1),
        k12=block(hm.k_rep, sp, 1, 2),
        k21=block(hm.k_rep, sp, 2, 1),
        k22=block(hm.k_rep, sp, 2, 2),
        spectral_radius_qphi=hm.spectral_radius_qphi,
        condition_estimate=hm.condition_estimate,
        tol=tol,
    )


def _trace_vec(n: int) -> np.ndarray:
    return vec(np.eye(n))


def _trace_of(n: int, w: np.ndarray) -> float:
    return float(np.real(_trace_vec(n) @ w))


def hitting_probability(hs: HittingSolution, rho) -> float:
    """Probability of ever reaching the subspace: Tr((I - Q) H rho).

    Equals 1 for certified irreducible maps; the residual from 1 is a useful
    numerical health indicator.
    """
    state = as_density(rho, hs.tol)
    d = hs.h_rep.shape[0]
    w = (np.eye(d) - hs.projectors.qq_rep) @ (hs.h_rep @ vec(state.matrix))
    return _trace_of(hs.map.dim, w)


def mean_hitting_time_direct(hs: HittingSolution, rho) -> float:
    """Mean time of first visit, Tr((I - Q) K rho).

    The equivalent resolvent expression Tr(H rho) is evaluated as a built-in
    cross-check; disagreement signals numerical breakdown.
    """
    state = as_density(rho, hs.tol)
    d = hs.k_rep.shape[0]
    w = vec(state.matrix)
    tau = _trace_of(hs.map.dim, (np.eye(d) - hs.projectors.qq_rep) @ (hs.k_rep @ w))
    cross = _trace_of(hs.map.dim, hs.h_rep @ w)
    if abs(tau - cross) > hs.tol.atol * max(1.0, abs(tau)):
        raise NumericError(
            f"mean hitting time cross-check failed: {tau!r} vs {cross!r}"
        )
    return tau


def _require_supported(label: str, residual: float, ortho_tol: float) -> None:
    if residual > ortho_tol:
        raise OrthogonalityError(
            f"{label} violates its support precondition (residual {residual:.3e})"
        )


def _uniform_state_on_subspace(hs: HittingSolution) -> DensityMatrix:
    return DensityMatrix(hs.subspace.projector_p / hs.subspace.rank)


def mhtf_orthogonal(
    hs: HittingSolution,
    rho_phi,
    rho_psi=None,
    ortho_tol: float = ORTHOGONALITY_TOL,
) -> OrthogonalMhtf:
    """Mean hitting time via the fundamental map, for starts orthogonal to V.

    Requires Q rho_phi Q = rho_phi (start supported in the complement) and
    P rho_psi P = rho_psi (reference state supported in V; defaults to the
    normalized projector).  Returns

        tau = Tr((DZ)_11 rho_psi) - Tr((DZ)_12 rho_phi)

    together with the two summands; the first one does not depend on the
    choice of rho_psi.
    """
    phi_state = as_density(rho_phi, hs.tol)
    psi_state = (
        _uniform_state_on_subspace(hs) if rho_psi is None else as_density(rho_psi, hs.tol)
    )
    q = hs.subspace.projector_q
    p = hs.subspace.projector_p
    _require_supported(
        "initial state",
        frobenius(q @ phi_state.matrix @ q - phi_state.matrix),
        ortho_tol,
    )
    _require_supported(
        "arrival-side state",
        frobenius(p @ psi_state.matrix @ p - psi_state.matrix),
        ortho_tol,
    )
    dz = (hs.k11 + hs.k22) @ hs.fd.z_rep
    dz11 = block(dz, hs.projectors, 1, 1)
    dz12 = block(dz, hs.projectors, 1, 2)
    n = hs.map.dim
    psi_term = _trace_of(n, dz11 @ vec(psi_state.matrix))
    phi_term = _trace_of(n, dz12 @ vec(phi_state.matrix))
    return OrthogonalMhtf(psi_term - phi_term, psi_term, phi_term)


def dnl_maps(hs: HittingSolution) -> DnlMaps:
    """Diagonal part D of K, off-diagonal part N = K - D, and L = K - N T."""
    d_rep = hs.k11 + hs.k22
    n_rep = hs.k_rep - d_rep
    l_rep = hs.k_rep - n_rep @ hs.map.rep
    return DnlMaps(d_rep, n_rep, l_rep)


def condition_first_step(
    t: SuperOperator,
    sp: SuperProjectors,
    rho,
    tol: Tolerance | None = None,
) -> FirstStep:
    """One monitored step: either absorbed into V, or the surviving state.

    Computes sigma = Q T rho.  If sigma vanishes the walk is absorbed at the
    first step (mean hitting time 1); otherwise the surviving weight Tr(sigma)
    and the renormalized state sigma / Tr(sigma) are returned, satisfying
    tau(rho) = 1 + Tr(sigma) * tau(sigma / Tr(sigma)).
    """
    if tol is None:
        tol = DEFAULT_TOL
    state = as_density(rho, tol)
    sigma = unvec(sp.qq_rep @ (t.rep @ vec(state.matrix)))
    if frobenius(sigma) <= tol.atol:
        return FirstStep(True, 0.0, None)
    weight = float(np.trace(sigma).real)
    next_state = density(hermitize(sigma) / weight, Tolerance(ORTHOGONALITY_TOL, ORTHOGONALITY_TOL))
    return FirstStep(False, weight, next_state)


def mhtf_general(
    hs: HittingSolution,
    rho,
    rho_psi=None,
    ortho_tol: float = ORTHOGONALITY_TOL,
) -> float:
    """Mean hitting time via the fundamental map for an arbitrary start.

    Conditions on the first monitored step:

        tau = 1 + Tr(K11 Z11 rho_psi) Tr(Q T rho) - Tr(K11 Z12 Q T rho),

    where rho_psi is any density supported in V (defaults to the normalized
    projector; the value does not depend on the choice).  An absorbed first
    step gives tau = 1 exactly.
    """
    state = as_density(rho, hs.tol)
    psi_state = (
        _uniform_state_on_subspace(hs) if rho_psi is None else as_density(rho_psi, hs.tol)
    )
    p = hs.subspace.projector_p
    _require_supported(
        "arrival-side state",
        frobenius(p @ psi_state.matrix @ p - psi_state.matrix),
        ortho_tol,
    )
    sigma_vec = hs.projectors.qq_rep @ (hs.map.rep @ vec(state.matrix))
    if float(np.linalg.norm(sigma_vec)) <= hs.tol.atol:
        return 1.0
    n = hs.map.dim
    z11 = block(hs.fd.z_rep, hs.projectors, 1, 1)
    z12 = block(hs.fd.z_rep, hs.projectors, 1, 2)
    weight = _trace_of(n, sigma_vec)
    psi_term = _trace_of(n, hs.k11 @ (z11 @ vec(psi_state.matrix)))
    start_term = _trace_of(n, hs.k11 @ (z12 @ sigma_vec))
    return 1.0 + psi_term * weight - start_term
