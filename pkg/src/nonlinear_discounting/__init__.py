"""Non-linear (notional-dependent) discounting with default compensation."""

__version__ = "0.1.0"

from .capacity import (
    CapacityState,
    StepSurvivalFunction,
    advance_state,
    compensated_amount,
    compensation_probability,
    integrate_q,
    intensity_limit_survival,
    survival_probability,
)
from .curves import FlatRateSet, defaultable_value, rate_conversions, zero_bond
from .diversify import (
    DiversificationSpec,
    adjusted_discount_rate,
    adjusted_rate_first_order,
    compensation_factor,
    quantile_multiplier,
    simulate_diversified_funding,
)
from .errors import (
    BracketFailureError,
    CapacityExhaustedError,
    ConfigError,
    InfeasibleDiversificationError,
    NonlinearDiscountingError,
)
from .stochastic import GbmSpec, LmmEnsemble, LmmSpec, PathEnsemble, simulate_gbm, simulate_lmm
from .valuation import (
    CompensationMode,
    ForwardMinusStrike,
    ParRateResult,
    Stream,
    Swap,
    TerminalFlow,
    ValuationResult,
    maturity_profile,
    par_rate,
    spread_approximation,
    value,
)

__all__ = [
    "BracketFailureError",
    "CapacityExhaustedError",
    "CapacityState",
    "CompensationMode",
    "ConfigError",
    "DiversificationSpec",
    "FlatRateSet",
    "ForwardMinusStrike",
    "GbmSpec",
    "InfeasibleDiversificationError",
    "LmmEnsemble",
    "LmmSpec",
    "NonlinearDiscountingError",
    "ParRateResult",
    "PathEnsemble",
    "StepSurvivalFunction",
    "Stream",
    "Swap",
    "TerminalFlow",
    "ValuationResult",
    "advance_state",
    "adjusted_discount_rate",
    "adjusted_rate_first_order",
    "compensated_amount",
    "compensation_factor",
    "compensation_probability",
    "defaultable_value",
    "integrate_q",
    "intensity_limit_survival",
    "maturity_profile",
    "par_rate",
    "quantile_multiplier",
    "rate_conversions",
    "simulate_diversified_funding",
    "simulate_gbm",
    "simulate_lmm",
    "spread_approximation",
    "survival_probability",
    "value",
    "zero_bond",
]
