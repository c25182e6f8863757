"""Divisor sums over arithmetic progressions, and the machinery around them.

Exact S(X; a, q) via sieves, the main-term polynomial and error terms,
Kloosterman sums (scalar, batched, bilinear), the Bessel-kernel transform
identity for the error term, complete-sum Poisson checks, multiplicative
character statistics, and sweep drivers that compare measured errors
against the analytic envelopes.
"""

from .arith import (
    MultiplicativeSieveTables,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    mobius,
    mod_inverse,
    primitive_root,
    ramanujan_sum,
    tau_of,
)
from .bessel import bessel_k0, bessel_y0, y0_envelope
from .bilinear import (
    BilinearInstance,
    ExponentFit,
    Measurement,
    bilinear_bound_general,
    bilinear_bound_initial_interval,
    bilinear_sum,
    bilinear_sum_unweighted_a,
    exponent_fit,
    initial_interval_conditions,
)
from .characters import (
    CharacterTable,
    character_table,
    congruence_bound_report,
    eta_factor,
    fourth_moment,
    fourth_moment_brute,
    gauss_sum,
    multiplicative_congruence_count,
    multiplicative_congruence_count_brute,
)
from .cutoff import SmoothCutoff, SmoothPartition, smooth_partition, smoothstep
from .errors import (
    ConfigInvalid,
    InsufficientSpread,
    IntervalOutOfRange,
    InvalidModulus,
    InvalidRange,
    NonReducedResidue,
    NotInvertible,
    NotPrimitive,
    NotPrime,
    SupportTooLarge,
    WindowTooLarge,
)
from .kloosterman import (
    KloostermanEvaluator,
    check_weil,
    kloosterman,
    kloosterman_batch_over_a,
    kloosterman_table,
)
from .mainterm import (
    EULER_GAMMA,
    AveragedErrors,
    ErrorTermRecord,
    ErrorVector,
    MainTermPolynomial,
    averaged_errors,
    error_term,
    error_vector,
    exceptional_set,
    interval_residues,
    main_term,
    main_term_coprime,
    main_term_vector,
)
from .poisson import (
    BumpFunction,
    PoissonCheck,
    ProductTestFunction,
    TwistedPoissonCheck,
    poisson_tau,
    poisson_tau_twisted,
)
from .sweeps import (
    ExperimentConfig,
    SweepResult,
    choose_y,
    emit_report,
    exceptional_count_bound,
    interval_abs_error_bound,
    interval_signed_error_bound,
    run_theorem_sweep,
    set_abs_error_bound,
)
from .tausieve import (
    ProgressionSumVector,
    TauTable,
    divisor_sum_progressions,
    progression_sum_single,
    sieve_tau,
    total_divisor_sum,
)
from .voronoi import (
    VoronoiErrorTerm,
    VoronoiWeights,
    WeightValue,
    error_budget,
    truncation_thresholds,
    voronoi_error_term,
    voronoi_error_terms,
    weight_u,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
