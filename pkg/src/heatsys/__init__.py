"""Desk-scale numerics for coupled semilinear heat systems.

The package builds up from gridded fields and weak-Lebesgue norms through
the Dirichlet heat semigroup to scalar-majorant supersolutions, monotone
mild solvers, regime classification by critical exponents, and blow-up
rate measurement, with a CLI (`heatsys`) orchestrating configured runs.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BlowupNotDetectedError,
    ConfigurationError,
    NumericsError,
)
from .fields import (
    Domain,
    Field,
    field_from_values,
    field_exp,
    field_lincomb,
    field_power,
    field_to_csv,
    linf_norm,
    load_field,
    pointwise_map,
    sample_function,
    save_field,
)
from .lorentz import (
    RearrangementTable,
    distribution_function,
    lp_norm,
    rearrange,
    uloc_norm,
    uloc_norm_detail,
    weak_norm,
    weak_norm_detail,
)
from .semigroup import (
    SemigroupEngine,
    apply_semigroup,
    heat_kernel,
    smoothing_ratio,
)
from .exponents import (
    CriticalIndices,
    RegimeReport,
    SystemSpec,
    classify_regime,
    critical_integrability,
    criticality_indices,
    fujita_exponent,
    majorant_powers,
)
from .blowup import (
    BlowupReport,
    NormHistory,
    TimeEstimate,
    estimate_blowup_time,
    fit_rate,
    theory_rate_exponents,
    windowed_norm_history,
)
from .solver import (
    SOLVE_STATUSES,
    STATUS_BLOW_UP,
    STATUS_CONVERGED,
    STATUS_MAX_ITER,
    CompareReport,
    IterationState,
    SolveResult,
    comparison_check,
    default_time_grid,
    direct_solve,
    direct_solve_scalar,
    monotone_solve,
    monotone_solve_scalar,
    picard_step,
    seed_iteration,
)
from .supersolution import (
    GAMMA_COMBINED_DEFAULT,
    GAMMA_SPLIT_DEFAULT,
    ONSET_TIME_DEFAULT,
    SmallnessCheck,
    SupersolutionProfile,
    ViolationReport,
    check_smallness_condition,
    choose_mode,
    default_sigma,
    evaluate_profile,
    majorant_initial_data,
    smallness_functional,
    verify_supersolution_inequality,
)
from .config import (
    FORMATS,
    METHODS,
    RunConfig,
    load_config,
    parse_config,
    serialize_config,
    validate_config,
)
from .pipeline import (
    ENVELOPE_CAP,
    RATE_RTOL,
    RunReport,
    calibrate_profile,
    component_names,
    emit,
    report_json,
    resolve_gamma,
    run,
)

__all__ = [
    "GAMMA_COMBINED_DEFAULT",
    "GAMMA_SPLIT_DEFAULT",
    "ONSET_TIME_DEFAULT",
    "SmallnessCheck",
    "SupersolutionProfile",
    "ViolationReport",
    "check_smallness_condition",
    "choose_mode",
    "default_sigma",
    "evaluate_profile",
    "majorant_initial_data",
    "smallness_functional",
    "verify_supersolution_inequality",
    "__version__",
    "BlowupNotDetectedError",
    "ConfigurationError",
    "NumericsError",
    "Domain",
    "Field",
    "sample_function",
    "field_from_values",
    "pointwise_map",
    "field_power",
    "field_exp",
    "field_lincomb",
    "linf_norm",
    "save_field",
    "load_field",
    "field_to_csv",
    "RearrangementTable",
    "distribution_function",
    "rearrange",
    "lp_norm",
    "weak_norm",
    "weak_norm_detail",
    "uloc_norm",
    "uloc_norm_detail",
    "SemigroupEngine",
    "apply_semigroup",
    "heat_kernel",
    "smoothing_ratio",
    "SystemSpec",
    "CriticalIndices",
    "RegimeReport",
    "criticality_indices",
    "majorant_powers",
    "critical_integrability",
    "fujita_exponent",
    "classify_regime",
    "SOLVE_STATUSES",
    "STATUS_BLOW_UP",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITER",
    "CompareReport",
    "IterationState",
    "SolveResult",
    "comparison_check",
    "default_time_grid",
    "direct_solve",
    "direct_solve_scalar",
    "monotone_solve",
    "monotone_solve_scalar",
    "picard_step",
    "seed_iteration",
    "BlowupReport",
    "NormHistory",
    "TimeEstimate",
    "estimate_blowup_time",
    "fit_rate",
    "theory_rate_exponents",
    "windowed_norm_history",
    "FORMATS",
    "METHODS",
    "RunConfig",
    "load_config",
    "parse_config",
    "serialize_config",
    "validate_config",
    "ENVELOPE_CAP",
    "RATE_RTOL",
    "RunReport",
    "calibrate_profile",
    "component_names",
    "emit",
    "report_json",
    "resolve_gamma",
    "run",
]
