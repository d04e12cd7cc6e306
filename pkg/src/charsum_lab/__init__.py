"""charsum-lab: a computational laboratory for partial character sums.

Exact identity checks (Fourier expansion, Gauss sums, twisted-sum
decompositions), explicit bound evaluators, and reproducible empirical
scans of how the classical asymptotic inequalities behave at desk scale.
"""

__version__ = "0.1.0"

from .arith import (
    Factorization,
    PrimeTable,
    UnitGroupStructure,
    convergents,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    sieve_primes,
    unit_group,
)
from .characters import (
    DirichletCharacter,
    character_from_label,
    classify,
    enumerate_characters,
    evaluate,
    legendre_character,
    principal_character,
    value_table,
)
from .charsums import (
    PrefixSumTable,
    TwistDecomposition,
    fourier_expansion_sum,
    fourier_split,
    gauss_sum,
    head_sine_form,
    max_partial_sum,
    partial_sum,
    prefix_table,
    twisted_decompose,
    twisted_sum,
)
from .approx import (
    RationalApproximation,
    denominator_lower_bound_check,
    dirichlet_approx,
    log_power_window,
    pv_window_gate,
)
from .bounds import (
    BoundProfile,
    burgess_profile_ratio,
    default_profile,
    montgomery_vaughan_bound,
    parse_profile,
    pomerance_bound,
    pomerance_trig_sum,
    pv_general_integral,
    pv_improved_rhs,
    pv_ratio_scan,
)
from .multfunc import (
    HalaszEvaluation,
    MultiplicativeFunction,
    ShortSumResult,
    capped_distance,
    distance_threshold,
    halasz_distance,
    halasz_mean_bound_check,
    mean_difference_bound_check,
    mean_difference_ratio,
    mean_value,
    short_sum_scan,
)
from .errors import DomainError, UsageError
from .experiments import ExperimentConfig, run_experiment
from .report import ScanReport, emit, read_report
