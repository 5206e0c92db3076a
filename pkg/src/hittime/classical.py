r"""Classical irreducible Markov chains and their hitting-time formulas.

Everything is phrased in the column-stochastic convention: ``p[i, j]`` is the
probability of the transition j -> i, so one step maps a distribution x to
``p @ x``.  The fundamental matrix

    Z = (I - P + Omega)^{-1},    Omega[:, j] = pi,

turns mean hitting times into matrix lookups:

    E_i T_j = (Z[j, j] - Z[j, i]) / pi[j]            (i != j)
    tau(j -> j) = 1 / pi[j]                          (mean return time)
    tau(x -> j) = 1 + (Z[j, j] - (Z P x)[j]) / pi[j] (distribution start)
    tau(i -> S) = sum_{k in S} (Z[k, j] - Z[k, i]) tau(k -> S),  any j in S.

The subset return times tau(k -> S) are obtained from the matrix-map
embedding of the chain, exercising the same machinery the quantum side uses.
State indices are 0-based here; the command-line layer converts from the
1-based indices used in files and messages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, PreconditionError, ValidationError
from .hitting import mean_hitting_time_direct, solve_hitting, subspace_from_indices
from .linalg import DEFAULT_TOL, Tolerance, fixed_space
from .maps import from_stochastic, invariant_state, pure_density, validate_column_stochastic

__all__ = [
    "MarkovChain",
    "SubsetHitting",
    "build_chain",
    "classical_mhtf",
    "kac_return_time",
    "classical_mhtf_distribution",
    "classical_mhtf_subset",
]

_J_INDEPENDENCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Validated irreducible chain with stationary distribution and fundamental matrix."""

    n: int
    p: np.ndarray
    pi: np.ndarray
    z: np.ndarray


@dataclass(frozen=True, eq=False)
class SubsetHitting:
    """Mean time to reach a subset, with the per-state return times used."""

    tau: float
    return_times: dict[int, float]
    j_independence_residual: float


def build_chain(p, tol: Tolerance | None = None) -> MarkovChain:
    """Validate a column-stochastic matrix and build its fundamental matrix.

    The chain must be irreducible: the eigenvalue-1 eigenspace of P must be
    one-dimensional with a strictly positive stationary vector.
    """
    if tol is None:
        tol = DEFAULT_TOL
    arr = validate_column_stochastic(p, tol)
    n = arr.shape[0]
    basis = fixed_space(arr, tol)
    if len(basis) != 1:
        raise ValidationError(
            f"chain is not irreducible: stationary space has dimension {len(basis)}"
        )
    v = basis[0]
    pivot = v[int(np.argmax(np.abs(v)))]
    v = (v * np.conj(pivot) / abs(pivot)).real
    pi = v / v.sum()
    if pi.min() <= tol.atol:
        raise ValidationError(
            f"chain is not irreducible: stationary distribution has a "
            f"non-positive entry ({pi.min():.3e})"
        )
    omega = np.outer(pi, np.ones(n))
    z = np.linalg.solve(np.eye(n) - arr + omega, np.eye(n))
    return MarkovChain(n, arr, pi, z)


def _check_state(mc: MarkovChain, label: str, idx: int) -> int:
    i = int(idx)
    if i < 0 or i >= mc.n:
        raise ValidationError(f"{label} must lie in [0, {mc.n - 1}], got {i}")
    return i


def classical_mhtf(mc: MarkovChain, i: int, j: int) -> float:
    """Mean time of first visit to state j starting from state i (i != j)."""
    i = _check_state(mc, "initial state", i)
    j = _check_state(mc, "target state", j)
    if i == j:
        raise PreconditionError(
            "initial and target state coincide; use kac_return_time for "
            "mean return times"
        )
    return float((mc.z[j, j] - mc.z[j, i]) / mc.pi[j])


def kac_return_time(mc: MarkovChain, j: int) -> float:
    """Mean return time of state j, 1 / pi_j."""
    j = _check_state(mc, "state", j)
    return float(1.0 / mc.pi[j])


def classical_mhtf_distribution(mc: MarkovChain, x, j: int) -> float:
    """Mean time to reach state j when the start is drawn from distribution x."""
    j = _check_state(mc, "target state", j)
    dist = np.asarray(x, dtype=float).reshape(-1)
    if dist.size != mc.n:
        raise ValidationError(
            f"distribution has length {dist.size}, chain has {mc.n} states"
        )
    if dist.min() < -DEFAULT_TOL.atol or abs(dist.sum() - 1.0) > 1e-9:
        raise ValidationError("initial distribution must be non-negative and sum to 1")
    reached = mc.z @ (mc.p @ dist)
    return float(1.0 + (mc.z[j, j] - reached[j]) / mc.pi[j])


def classical_mhtf_subset(
    mc: MarkovChain,
    i: int,
    subset,
    tol: Tolerance | None = None,
    j_tol: float = _J_INDEPENDENCE_TOL,
) -> SubsetHitting:
    """Mean time to reach a subset of states from outside it.

    The per-state return times tau(k -> S) are computed on the matrix-map
    embedding of the chain.  The defining sum is evaluated for every anchor
    state j in S; its independence of j is verified to ``j_tol`` and the
    residual reported.
    """
    if tol is None:
        tol = DEFAULT_TOL
    i = _check_state(mc, "initial state", i)
    states = sorted(set(_check_state(mc, "subset state", k) for k in subset))
    if not states:
        raise PreconditionError("subset must be nonempty")
    if len(states) >= mc.n:
        raise PreconditionError("subset must be a proper subset of the states")
    if i in states:
        raise PreconditionError("initial state must lie outside the subset")

    embedded = from_stochastic(mc.p, tol)
    cert = invariant_state(embedded, tol)
    sub = subspace_from_indices(mc.n, states)
    hs = solve_hitting(embedded, sub, cert, tol)
    unit = np.eye(mc.n)
    return_times = {
        k: mean_hitting_time_direct(hs, pure_density(unit[:, k])) for k in states
    }
    sums = [sum(mc.z[k, j] * return_times[k] for k in states) for j in states]
    residual = float(max(sums) - min(sums))
    if residual > j_tol:
        raise NumericError(
            f"anchor-state independence violated: sums over the subset spread "
            f"by {residual:.3e} (tolerance {j_tol:.1e})"
        )
    j0 = states[0]
    tau = float(
        sum((mc.z[k, j0] - mc.z[k, i]) * return_times[k] for k in states)
    )
    return SubsetHitting(tau, return_times, residual)
