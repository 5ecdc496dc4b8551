"""Adversarial quantum hypothesis testing with finitely repeated observations.

A deterministic numpy toolkit for binary discrimination of n-fold product
quantum states under a committed optimal measurement, the spoofing
attacker's closed-form best-response distortions against it, and the
empirical decay of miss and false-alarm rates with the number of
observations.
"""

from .analysis import (
    DecayFit,
    RobustnessCheck,
    SeparabilityReport,
    decay_rate_fit,
    product_test,
    relative_entropy,
    robustness_check,
    separability_report,
    wasserstein_single,
)
from .attacker import (
    ATTACK_OFF,
    AttackConfig,
    CompletenessCheck,
    KrausChannel,
    attack_exponent,
    attacker_objective,
    best_response_rho0,
    best_response_rho1,
    beta,
    kraus_completeness_check,
    verify_stationarity,
)
from .detector import (
    HypothesisPair,
    ProjectiveEffect,
    ThresholdSchedule,
    bayes_risk,
    decide,
    helstrom_effect,
    helstrom_effect_from_states,
    rates,
    risk_weights,
    threshold,
)
from .errors import (
    AllErrorsZero,
    ConfigError,
    ConvergenceFailure,
    DimensionCapExceeded,
    DomainError,
    InsufficientData,
    ParseError,
    QspoofError,
    ShapeMismatch,
)
from .qmat import (
    DEFAULT_DIMENSION_CAP,
    DensityOperator,
    HermitianOperator,
    SpectralDecomposition,
    StateVector,
    eig_hermitian,
    matrix_exp,
    matrix_function,
    matrix_log,
    operator_norm,
    partial_trace,
    tensor_power,
    tensor_product,
    trace_norm,
)
from .radar import (
    ScenarioConfig,
    build_hypotheses,
    coherent_state,
    default_scenario,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "ATTACK_OFF",
    "AllErrorsZero",
    "AttackConfig",
    "CompletenessCheck",
    "ConfigError",
    "ConvergenceFailure",
    "DEFAULT_DIMENSION_CAP",
    "DecayFit",
    "DensityOperator",
    "DimensionCapExceeded",
    "DomainError",
    "HermitianOperator",
    "HypothesisPair",
    "InsufficientData",
    "KrausChannel",
    "ParseError",
    "ProjectiveEffect",
    "QspoofError",
    "RobustnessCheck",
    "ScenarioConfig",
    "SeparabilityReport",
    "ShapeMismatch",
    "SpectralDecomposition",
    "StateVector",
    "ThresholdSchedule",
    "attack_exponent",
    "attacker_objective",
    "bayes_risk",
    "best_response_rho0",
    "best_response_rho1",
    "beta",
    "build_hypotheses",
    "coherent_state",
    "decay_rate_fit",
    "decide",
    "default_scenario",
    "eig_hermitian",
    "helstrom_effect",
    "helstrom_effect_from_states",
    "kraus_completeness_check",
    "matrix_exp",
    "matrix_function",
    "matrix_log",
    "operator_norm",
    "partial_trace",
    "product_test",
    "rates",
    "relative_entropy",
    "risk_weights",
    "robustness_check",
    "separability_report",
    "tensor_power",
    "tensor_product",
    "threshold",
    "trace_norm",
    "validate_scenario",
    "verify_stationarity",
    "wasserstein_single",
]
