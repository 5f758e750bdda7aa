"""Random sparse binary matrices as expander-graph adjacency matrices:
sampling and certification, failure-probability bounds with Monte Carlo and
exact-law verification, and phase-transition curves for constructions and
sparse-recovery algorithm conditions.
"""

from .domain import (
    AsymptoticRatios,
    BETA_MODES,
    BoundConfig,
    ExpanderParams,
    ProblemSize,
    ValidationError,
    validate,
)
from .splitting import (
    BetaParams,
    ChainCollapseError,
    NeighborChain,
    SplitCounts,
    beta,
    constrained_chain,
    cubic_residual,
    expected_chain,
    split_counts,
)
from .bounds import (
    BinomialSandwich,
    BoundResult,
    PsiTerms,
    beta_value,
    binom_sandwich,
    ceil_pow2,
    entropy,
    entropy_deriv,
    log_binom,
    p_n_intersect,
    p_n_new,
    p_n_old,
    pi_poly,
    prob_bound_dyadic,
    prob_bound_epsilon,
    prob_bound_union,
    psi_cap_n_new,
    psi_cap_n_old,
    psi_i,
    psi_i_upper,
    psi_n_exponent,
    psi_terms,
    tau_value,
)
from .ensemble import (
    BudgetExceededError,
    CertificationReport,
    Seed,
    SparseBinaryMatrix,
    TailEstimate,
    certify,
    from_text,
    mc_tail,
    neighbors,
    read_matrix_file,
    rip1_ratio,
    sample,
    to_text,
    write_matrix_file,
)
from .phase_transition import (
    AlgoCondition,
    DELTA_GRID,
    Feasibility,
    PTCurve,
    RootResult,
    algo_conditions,
    algo_curves,
    curve,
    degree_threshold,
    f_bi,
    f_bm,
    f_bt,
    feasible,
    is_safely_below,
    solve_rho,
)

__version__ = "0.1.0"
