"""Compensation factors for guaranteeing a payment via diversified defaultable funding.

A payment is split equally over ``n`` independent funding providers, each
surviving with probability p. Contracting a larger amount X* makes the total
received exceed the target X at confidence 1 - epsilon; the multiplier X*/X
is the compensation factor. The module also provides the resulting adjusted
discount rate and a Bernoulli simulation harness used as validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import ndtri

from .curves import FlatRateSet
from .errors import InfeasibleDiversificationError

QUANTILE_RULES = ("normal", "cantelli", "none")


@dataclass(frozen=True)
class DiversificationSpec:
    """Number of providers, shortfall probability and quantile rule.

    ``rule="none"`` requests funding in expectation only (quantile
    multiplier c = 0, the provider count then has no effect).
    """

    n: int = 1
    epsilon: float = 0.01
    rule: str = "none"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"provider count must be >= 1, got {self.n}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.rule not in QUANTILE_RULES:
            raise ValueError(f"rule must be one of {QUANTILE_RULES}, got {self.rule!r}")


def quantile_multiplier(spec: DiversificationSpec) -> float:
    """Multiplier c of the shortfall standard deviation for the chosen rule.

    normal: upper-tail standard normal quantile (c ~ 2.326 at 1%);
    cantelli: sqrt(1/eps - 1), a distribution-free but much rougher bound;
    none: 0.
    """
    if spec.rule == "none":
        return 0.0
    if spec.rule == "normal":
        return max(float(ndtri(1.0 - spec.epsilon)), 0.0)
    return math.sqrt(1.0 / spec.epsilon - 1.0)


def compensation_factor(p_tilde: float, spec: DiversificationSpec) -> float:
    """Ratio X*/X of contracted to target amount: 1 / (p - (c/sqrt(n)) sqrt(p(1-p))).

    Always >= 1/p; equals 1/p exactly for c = 0.
    """
    if not 0.0 < p_tilde <= 1.0:
        raise ValueError(f"survival probability must be in (0, 1], got {p_tilde}")
    c = quantile_multiplier(spec)
    denominator = p_tilde - c / math.sqrt(spec.n) * math.sqrt(p_tilde * (1.0 - p_tilde))
    if denominator <= 0.0:
        raise InfeasibleDiversificationError(
            f"confidence level 1-{spec.epsilon} cannot be met with n={spec.n} "
            f"providers at survival probability {p_tilde}"
        )
    return 1.0 / denominator


def adjusted_discount_rate(rates: FlatRateSet, spec: DiversificationSpec, maturity: float) -> float:
    """Discount rate equivalent to the diversified-compensation discount factor.

    r* = r + (lambda - lambda_obj) + log(1 - (c/sqrt(n)) sqrt(exp(lambda_obj T) - 1)) / T.
    With c = 0 and matching intensities this is just r.
    """
    if maturity <= 0:
        raise ValueError(f"maturity must be > 0, got {maturity}")
    c = quantile_multiplier(spec)
    argument = 1.0 - c / math.sqrt(spec.n) * math.sqrt(
        math.expm1(rates.lambda_objective * maturity)
    )
    if argument <= 0.0:
        raise InfeasibleDiversificationError(
            f"quantile term exceeds 1 for n={spec.n}, T={maturity}: no feasible rate"
        )
    return (
        rates.r
        + (rates.lambda_implied - rates.lambda_objective)
        + math.log(argument) / maturity
    )


def adjusted_rate_first_order(
    r: float, intensity: float, spec: DiversificationSpec, maturity: float
) -> float:
    """First-order approximation r - (c/sqrt(n)) sqrt(lambda T) / T of the adjusted rate."""
    if maturity <= 0:
        raise ValueError(f"maturity must be > 0, got {maturity}")
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    c = quantile_multiplier(spec)
    return r - c / math.sqrt(spec.n) * math.sqrt(intensity * maturity) / maturity


def simulate_diversified_funding(
    target: float,
    p_tilde: float,
    spec: DiversificationSpec,
    trials: int,
    seed: int,
) -> Tuple[float, float]:
    """Monte-Carlo check of the diversification scheme.

    Contracts ``target * compensation_factor`` split equally over n providers,
    draws independent survivals with probability p per provider and trial, and
    returns (empirical frequency of receiving less than the target,
    mean received / target).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    contracted = target * compensation_factor(p_tilde, spec)
    rng = np.random.default_rng(seed)
    survivors = rng.binomial(spec.n, p_tilde, size=trials)
    received = contracted * survivors / spec.n
    shortfall_frequency = float(np.mean(received < target))
    mean_ratio = float(np.mean(received) / target)
    return shortfall_frequency, mean_ratio
