"""Hitting probabilities, mean hitting times and return times for
irreducible positive trace-preserving maps, with the classical Markov-chain
special case and an independent series oracle for cross-validation."""

from .classical import (
    MarkovChain,
    SubsetHitting,
    build_chain,
    classical_mhtf,
    classical_mhtf_distribution,
    classical_mhtf_subset,
    kac_return_time,
)
from .errors import (
    DimensionError,
    HittimeError,
    NonConvergenceError,
    NumericError,
    OrthogonalityError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .fundamental import (
    FundamentalData,
    FundamentalReport,
    build_omega,
    fundamental_map,
    verify_fundamental_identities,
)
from .hitting import (
    ORTHOGONALITY_TOL,
    ArrivalSubspace,
    FirstStep,
    HittingSolution,
    OrthogonalMhtf,
    SuperProjectors,
    block,
    condition_first_step,
    dnl_maps,
    hitting_maps,
    hitting_probability,
    mean_hitting_time_direct,
    mhtf_general,
    mhtf_orthogonal,
    solve_hitting,
    subspace_from_indices,
    subspace_from_vectors,
    super_projectors,
)
from .linalg import (
    DEFAULT_TOL,
    PsdCheck,
    Tolerance,
    fixed_space,
    frobenius,
    hermitize,
    hs_inner,
    is_psd,
    kron,
    spectral_radius,
    unvec,
    vec,
)
from .maps import (
    CERTIFIED_IRREDUCIBLE,
    INCONCLUSIVE,
    NOT_IRREDUCIBLE,
    CpCheck,
    DensityMatrix,
    IrreducibilityCertificate,
    PositivitySample,
    SuperOperator,
    TraceCheck,
    adjoint,
    apply,
    as_density,
    check_complete_positivity,
    check_trace_preserving,
    choi_matrix,
    density,
    from_kraus,
    from_raw,
    from_stochastic,
    invariant_state,
    positivity_sample,
    pure_density,
    validate_column_stochastic,
)
from .oracle import (
    FirstVisitDistribution,
    MonteCarloEstimate,
    classical_monte_carlo,
    first_visit_series,
    tau_series,
)

__version__ = "0.1.0"
