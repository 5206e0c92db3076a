"""Independent ground truth for hitting quantities.

The monitored-evolution series evaluates first-visit probabilities directly
from their definition,

    pi_r = Tr(P T (Q T)^{r-1} rho),    tau = sum_r r pi_r,

by iterating the survival map, without touching the resolvent solves used by
the hitting module.  A Monte-Carlo trajectory estimator provides a second,
statistical oracle for classical chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, ValidationError
from .hitting import SuperProjectors
from .linalg import DEFAULT_TOL, Tolerance, spectral_radius, vec
from .maps import SuperOperator, as_density, validate_column_stochastic

__all__ = [
    "FirstVisitDistribution",
    "MonteCarloEstimate",
    "first_visit_series",
    "tau_series",
    "classical_monte_carlo",
]

_MIN_SPECTRAL_GAP = 1e-9
_MAX_SERIES_TERMS = 1_000_000


@dataclass(frozen=True, eq=False)
class FirstVisitDistribution:
    """First-visit probabilities pi_1 .. pi_{r_max} with a geometric tail bound."""

    probabilities: np.ndarray
    tail_bound: float
    r_max: int


@dataclass(frozen=True, eq=False)
class MonteCarloEstimate:
    """Sample mean and standard error of a trajectory simulation."""

    mean: float
    std_error: float
    trials: int
    seed: int


def _survival_data(t: SuperOperator, sp: SuperProjectors):
    qphi = sp.qq_rep @ t.rep
    radius = spectral_radius(qphi)
    if radius >= 1.0 - _MIN_SPECTRAL_GAP:
        raise NonConvergenceError(
            f"monitored series does not converge: spectral radius of the "
            f"survival map is {radius:.12g} (map not irreducible)"
        )
    return qphi, sp.pp_rep @ t.rep, radius


def first_visit_series(
    t: SuperOperator,
    sp: SuperProjectors,
    rho,
    r_max: int,
    tol: Tolerance | None = None,
) -> FirstVisitDistribution:
    """First r_max terms of the first-visit distribution of ``rho``.

    The tail bound dominates the probability mass beyond r_max and decreases
    geometrically in r_max while the survival map contracts.
    """
    if tol is None:
        tol = DEFAULT_TOL
    if r_max < 1:
        raise ValidationError("r_max must be at least 1")
    state = as_density(rho, tol)
    qphi, pphi, radius = _survival_data(t, sp)
    tvec = vec(np.eye(t.dim))
    sigma = vec(state.matrix)
    probs = np.empty(r_max)
    for r in range(r_max):
        probs[r] = float(np.real(tvec @ (pphi @ sigma)))
        sigma = qphi @ sigma
    tail = float(np.linalg.norm(sigma, 1)) / (1.0 - radius)
    return FirstVisitDistribution(probs, tail, r_max)


def tau_series(
    t: SuperOperator,
    sp: SuperProjectors,
    rho,
    tol: Tolerance | None = None,
    max_terms: int = _MAX_SERIES_TERMS,
) -> float:
    """Mean hitting time by direct summation of r * pi_r.

    Truncates once the geometric tail estimate of the remaining sum drops
    below atol / 10, so the series error is dominated by any comparison
    tolerance down to atol.
    """
    if tol is None:
        tol = DEFAULT_TOL
    state = as_density(rho, tol)
    qphi, pphi, radius = _survival_data(t, sp)
    tvec = vec(np.eye(t.dim))
    sigma = vec(state.matrix)
    gap = 1.0 - radius
    target = tol.atol / 10.0
    total = 0.0
    r = 0
    while True:
        r += 1
        if r > max_terms:
            raise NonConvergenceError(
                f"series did not reach the target accuracy in {max_terms} terms "
                f"(spectral radius {radius:.12g})"
            )
        total += r * float(np.real(tvec @ (pphi @ sigma)))
        sigma = qphi @ sigma
        tail = float(np.linalg.norm(sigma, 1)) * ((r + 1) * gap + radius) / (gap * gap)
        if tail < target:
            return total


def classical_monte_carlo(
    p,
    start,
    target,
    trials: int,
    seed: int,
    step_cap: int = 10_000_000,
    tol: Tolerance | None = None,
) -> MonteCarloEstimate:
    """Trajectory estimate of the mean first-visit time of a classical chain.

    ``p`` is column-stochastic (column j is the outgoing distribution of
    state j).  ``start`` is a 0-based state index or an initial distribution;
    ``target`` a set of 0-based state indices.  The first visit is counted at
    step r >= 1, so a start inside the target records the return time.  The
    RNG is numpy PCG64 seeded with ``seed``; results are deterministic.
    """
    arr = validate_column_stochastic(p, tol)
    n = arr.shape[0]
    target_set = sorted(set(int(i) for i in target))
    if not target_set:
        raise ValidationError("target set must be nonempty")
    if target_set[0] < 0 or target_set[-1] >= n:
        raise ValidationError(f"target indices must lie in [0, {n - 1}]")
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    rng = np.random.default_rng(int(seed))
    if np.isscalar(start):
        s0 = int(start)
        if s0 < 0 or s0 >= n:
            raise ValidationError(f"start index must lie in [0, {n - 1}]")
        states = np.full(trials, s0, dtype=np.int64)
    else:
        dist = np.asarray(start, dtype=float).reshape(-1)
        if dist.size != n:
            raise ValidationError("start distribution length does not match the chain")
        if dist.min() < 0 or abs(dist.sum() - 1.0) > 1e-9:
            raise ValidationError("start distribution must be non-negative and sum to 1")
        states = rng.choice(n, size=trials, p=dist / dist.sum()).astype(np.int64)

    cum = np.cumsum(arr, axis=0)
    cum[-1, :] = 1.0  # guard against float round-off at the top
    in_target = np.zeros(n, dtype=bool)
    in_target[target_set] = True

    times = np.zeros(trials, dtype=np.int64)
    alive = np.ones(trials, dtype=bool)
    step = 0
    while alive.any():
        step += 1
        if step > step_cap:
            raise NonConvergenceError(
                f"{int(alive.sum())} trajectories exceeded the step cap {step_cap}"
            )
        idx = np.flatnonzero(alive)
        cur = states[idx]
        draws = rng.random(idx.size)
        nxt = np.empty_like(cur)
        for s in np.unique(cur):
            mask = cur == s
            nxt[mask] = np.searchsorted(cum[:, s], draws[mask], side="right")
        states[idx] = nxt
        hit = in_target[nxt]
        times[idx[hit]] = step
        alive[idx[hit]] = False

    mean = float(times.mean())
    if trials > 1:
        std_error = float(times.std(ddof=1) / np.sqrt(trials))
    else:
        std_error = 0.0
    return MonteCarloEstimate(mean, std_error, trials, int(seed))
