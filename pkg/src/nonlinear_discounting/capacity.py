"""Capacity-dependent survival kernel: the non-linear discounting primitive.

The marginal survival probability of the x-th unit of requested funding is a
piecewise-constant, non-increasing step function q(x) of the cumulative
capacity consumption x. Given a consumption level b, a requested amount X is
delivered as the integral of q over [b, b + X]; conversely the contracted
amount X* needed to deliver X in expectation inverts that integral step by
step in closed form. Consumption decays exponentially between funding dates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import CapacityExhaustedError


@dataclass(frozen=True)
class StepSurvivalFunction:
    """Piecewise-constant marginal survival probability over capacity consumption.

    ``breakpoints`` are strictly increasing levels starting at 0;
    ``values[j]`` applies on [breakpoints[j], breakpoints[j+1]) and the last
    value extends to infinity. Values lie in [0, 1] and are non-increasing.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    _cumulative: Tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        breakpoints = tuple(float(x) for x in breakpoints)
        values = tuple(float(q) for q in values)
        if len(breakpoints) != len(values):
            raise ValueError("breakpoints and values must have the same length")
        if not breakpoints or breakpoints[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if any(b >= a for a, b in zip(breakpoints[1:], breakpoints)):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not 0.0 <= q <= 1.0 for q in values):
            raise ValueError("values must lie in [0, 1]")
        if any(b > a for a, b in zip(values, values[1:])):
            raise ValueError("values must be non-increasing")
        # cumulative integral of q at each breakpoint
        cumulative = [0.0]
        for j in range(len(breakpoints) - 1):
            cumulative.append(
                cumulative[-1] + values[j] * (breakpoints[j + 1] - breakpoints[j])
            )
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_cumulative", tuple(cumulative))

    @classmethod
    def constant(cls, value: float = 1.0) -> "StepSurvivalFunction":
        return cls((0.0,), (value,))

    def __call__(self, x: float) -> float:
        """Marginal survival value of the step containing x (x >= 0)."""
        if x < 0:
            raise ValueError(f"consumption level must be >= 0, got {x}")
        j = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return self.values[j]

    # ------------------------------------------------------------------
    # vectorized kernel primitives used by the Monte-Carlo valuation
    # ------------------------------------------------------------------

    def delivered(self, levels: np.ndarray, amounts: np.ndarray) -> np.ndarray:
        """Integral of q over [level, level + amount], element-wise.

        This is the amount delivered in expectation when ``amounts`` are
        contracted at consumption ``levels``.
        """
        levels = np.asarray(levels, dtype=float)
        amounts = np.asarray(amounts, dtype=float)
        position = levels.copy()
        remaining = amounts.copy()
        out = np.zeros_like(remaining)
        breaks = self.breakpoints
        for j, q in enumerate(self.values):
            if not (remaining > 0.0).any():
                break
            upper = breaks[j + 1] if j + 1 < len(breaks) else math.inf
            active = (remaining > 0.0) & (position < upper)
            if not active.any():
                continue
            room = upper - position
            fits = active & (remaining <= room)
            out[fits] += q * remaining[fits]
            remaining[fits] = 0.0
            partial = active & ~fits
            out[partial] += q * room[partial]
            remaining[partial] -= room[partial]
            position[partial] = upper
        return out

    def contracted(
        self, levels: np.ndarray, amounts: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Smallest X* with integral of q over [level, level + X*] = amount.

        Inverts ``delivered`` step by step: within a step of value q, a target
        increment dX consumes dX / q of contracted notional. Returns
        (contracted amounts, exhausted mask); exhausted entries (a zero step
        reached with target remaining) are NaN in the first array.
        """
        levels = np.asarray(levels, dtype=float)
        amounts = np.asarray(amounts, dtype=float)
        position = levels.copy()
        remaining = amounts.copy()
        out = np.zeros_like(remaining)
        exhausted = np.zeros(remaining.shape, dtype=bool)
        breaks = self.breakpoints
        for j, q in enumerate(self.values):
            if not (remaining > 0.0).any():
                break
            upper = breaks[j + 1] if j + 1 < len(breaks) else math.inf
            active = (remaining > 0.0) & (position < upper)
            if not active.any():
                continue
            if q == 0.0:
                # non-increasing values: nothing further can be funded
                exhausted |= active
                break
            capacity = q * (upper - position)
            fits = active & (remaining <= capacity)
            out[fits] += remaining[fits] / q
            remaining[fits] = 0.0
            partial = active & ~fits
            out[partial] += upper - position[partial]
            remaining[partial] -= capacity[partial]
            position[partial] = upper
        exhausted |= remaining > 0.0
        out[exhausted] = np.nan
        return out, exhausted


@dataclass(frozen=True)
class CapacityState:
    """Funding-consumption level with exponential decay between updates."""

    level: float = 0.0
    decay: float = math.inf
    time: float = 0.0

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if self.decay < 0:
            raise ValueError(f"decay must be >= 0 (or inf), got {self.decay}")


def integrate_q(q: StepSurvivalFunction, x: float, y: float) -> float:
    """Exact integral of the step function over [x, y], 0 <= x <= y."""
    if x < 0:
        raise ValueError(f"lower bound must be >= 0, got {x}")
    if y < x:
        raise ValueError(f"upper bound {y} below lower bound {x}")
    return float(q.delivered(np.array([x]), np.array([y - x]))[0])


def survival_probability(q: StepSurvivalFunction, level: float, amount: float) -> float:
    """Effective survival probability of a requested amount: integral / amount.

    The X -> 0 limit is the marginal value ``q(level)`` and is not covered
    here; amount must be positive.
    """
    if amount <= 0:
        raise ValueError(f"amount must be > 0, got {amount}")
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    return float(q.delivered(np.array([level]), np.array([amount]))[0]) / amount


def compensated_amount(q: StepSurvivalFunction, level: float, amount: float) -> float:
    """Contracted amount X* >= X delivering the target amount in expectation."""
    if amount <= 0:
        raise ValueError(f"amount must be > 0, got {amount}")
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    out, exhausted = q.contracted(np.array([level]), np.array([amount]))
    if exhausted[0]:
        raise CapacityExhaustedError(
            f"capacity exhausted funding {amount} at consumption level {level}"
        )
    return float(out[0])


def compensation_probability(q: StepSurvivalFunction, level: float, amount: float) -> float:
    """Survival probability of the compensated amount: X / X*.

    1/p* - 1 is the fractional extra amount that must be contracted; the map
    X -> X / p*(b, X) is the inverse of X* -> X* p(b, X*).
    """
    return amount / compensated_amount(q, level, amount)


def advance_state(state: CapacityState, t_new: float, drawn: float) -> CapacityState:
    """Decay the consumption level to ``t_new`` and add the drawn amount.

    level' = level * exp(-decay * dt) + drawn; infinite decay resets the
    level, zero decay accumulates without forgetting.
    """
    if t_new < state.time:
        raise ValueError(f"time going backwards: {state.time} -> {t_new}")
    if drawn < 0:
        raise ValueError(f"drawn amount must be >= 0, got {drawn}")
    dt = t_new - state.time
    if math.isinf(state.decay):
        decayed = 0.0 if dt > 0 else state.level
    else:
        decayed = state.level * math.exp(-state.decay * dt)
    return CapacityState(level=decayed + drawn, decay=state.decay, time=t_new)


def intensity_limit_survival(
    mu: float,
    beta: float,
    t_grid: Sequence[float],
    paths: int,
    seed: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Expected survival E[exp(-a(t))] for diffusive consumption a(t) = mu t + beta W(t).

    With the exponential kernel q(x) = exp(-x) this is the limit case in
    which capacity-dependent survival reduces to classical intensity-based
    discounting with intensity mu - beta^2 / 2. Returns (mean, standard
    error) arrays over the grid; at t = 0 the estimate is exactly 1.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if paths < 1:
        raise ValueError(f"paths must be >= 1, got {paths}")
    if t_grid.ndim != 1 or t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing and start at 0")
    rng = np.random.default_rng(np.random.Philox(key=seed))
    dt = np.diff(t_grid)
    increments = rng.standard_normal((paths, dt.size)) * np.sqrt(dt)
    consumption = mu * t_grid[1:] + beta * np.cumsum(increments, axis=1)
    survival = np.exp(-consumption)
    mean = np.concatenate(([1.0], survival.mean(axis=0)))
    stderr = np.concatenate(([0.0], survival.std(axis=0, ddof=1) / math.sqrt(paths)))
    return mean, stderr
