"""Weighted divisor sums under congruence conditions.

Library layout:

  arith       sawtooth, rational digamma, squarefree kernels, divisor counts
  congruence  d(n; r1,q1,r2,q2), its summatory function, main term, error term
  weighted    the cosine-sine weighted divisor sum S and its step series
  voronoi     truncated oscillatory expansion of S (head, tails, diagnostics)
  constants   square-root relation sets and the moment constants B_k
  moments     exact step integration, moment reports, large-value census
  cli         the ``wdiv`` command-line tool

Hot kernels run through ``wdiv.backend``: a compiled extension when
built, a numpy fallback otherwise.
"""

__version__ = "0.1.0"

from .arith import (
    BudgetError,
    CongruenceSpec,
    EULER_GAMMA,
    RationalPhase,
    SqrtKernel,
    digamma_rational,
    divisor_count,
    divisors,
    sawtooth,
    squarefree_kernel,
)
from .congruence import (
    D_cong,
    DeltaSample,
    d_cong,
    delta_cong,
    delta_psi_form,
    main_term,
)
from .constants import (
    B2_constant,
    Bk_constant,
    K0_of,
    SeriesConstant,
    SignPattern,
    SqrtRelation,
    enumerate_S_k_v,
    is_sqrt_relation,
    lemsum_partial,
    s_exponent,
    s_k_v_partial,
)
from .moments import (
    CensusReport,
    MomentReport,
    growth_exponent_fit,
    integrate_S_power,
    integrate_delta_power,
    large_value_census,
    moment_report,
    oscillatory_integral_check,
)
from .voronoi import (
    CoefficientTable,
    E_set,
    G_diagnostic,
    R0_series,
    R_tail_series,
    TruncationParams,
    char_collapse_check,
    delta_d2,
)
from .weighted import (
    PhasePair,
    S_direct,
    S_step_series,
    S_via_delta,
    StepSeries,
    phases,
    trig_orthogonality,
)

__all__ = [
    "BudgetError",
    "CongruenceSpec",
    "EULER_GAMMA",
    "RationalPhase",
    "SqrtKernel",
    "digamma_rational",
    "divisor_count",
    "divisors",
    "sawtooth",
    "squarefree_kernel",
    "D_cong",
    "DeltaSample",
    "d_cong",
    "delta_cong",
    "delta_psi_form",
    "main_term",
    "B2_constant",
    "Bk_constant",
    "K0_of",
    "SeriesConstant",
    "SignPattern",
    "SqrtRelation",
    "enumerate_S_k_v",
    "is_sqrt_relation",
    "lemsum_partial",
    "s_exponent",
    "s_k_v_partial",
    "CensusReport",
    "MomentReport",
    "growth_exponent_fit",
    "integrate_S_power",
    "integrate_delta_power",
    "large_value_census",
    "moment_report",
    "oscillatory_integral_check",
    "CoefficientTable",
    "E_set",
    "G_diagnostic",
    "R0_series",
    "R_tail_series",
    "TruncationParams",
    "char_collapse_check",
    "delta_d2",
    "PhasePair",
    "S_direct",
    "S_step_series",
    "S_via_delta",
    "StepSeries",
    "phases",
    "trig_orthogonality",
]
