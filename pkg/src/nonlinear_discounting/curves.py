"""Zero-bond and rate conventions, and classical defaultable discounting.

All times are year fractions, all rates continuously compounded. This module
is the linear baseline that the notional-dependent machinery is contrasted
against: ``defaultable_value`` is linear in the amount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class FlatRateSet:
    """Flat rate triple: risk-free rate, market-implied and objective default intensity.

    Negative values are permitted for all three rates.
    """

    r: float
    lambda_implied: float = 0.0
    lambda_objective: float = 0.0

    def __post_init__(self) -> None:
        for name in ("r", "lambda_implied", "lambda_objective"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")


class RateConversions(NamedTuple):
    zero_rate: float
    forward_rate: float
    implied_intensity: float


def zero_bond(r: float, maturity: float) -> float:
    """Discount factor exp(-r*T) of a zero-coupon bond under a flat rate."""
    if maturity < 0:
        raise ValueError(f"maturity must be >= 0, got {maturity}")
    return math.exp(-r * maturity)


def rate_conversions(discount_factor: float, maturity: float, r: float = 0.0) -> RateConversions:
    """Convert a discount factor to rate conventions.

    Returns the continuously compounded zero rate -log(P)/T, the simple
    (linear) forward rate (1/P - 1)/T, and -log(P)/T - r, which is the
    implied default intensity when ``discount_factor`` is read as the price
    of a defaultable bond and ``r`` as the risk-free component.
    """
    if discount_factor <= 0:
        raise ValueError(f"discount factor must be > 0, got {discount_factor}")
    if maturity <= 0:
        raise ValueError(f"maturity must be > 0, got {maturity}")
    zero_rate = -math.log(discount_factor) / maturity
    forward_rate = (1.0 / discount_factor - 1.0) / maturity
    return RateConversions(zero_rate, forward_rate, zero_rate - r)


def defaultable_value(amount: float, rates: FlatRateSet, maturity: float) -> float:
    """Risk-neutral value of a defaultable cash-flow: V * exp(-(r + lambda) * T).

    The survival factor uses the market-implied intensity. With
    ``lambda_implied == 0`` this is plain risk-free discounting.
    """
    if maturity < 0:
        raise ValueError(f"maturity must be >= 0, got {maturity}")
    return amount * math.exp(-(rates.r + rates.lambda_implied) * maturity)
