"""Seeded Monte-Carlo path generation.

Two models: exact lognormal stepping of a geometric Brownian motion (used for
the forward-contract experiments) and a single-factor lognormal forward-rate
model with exponentially decaying instantaneous volatility under the spot
(rolling) measure (used for the par-rate experiments). All randomness comes
from a counter-based Philox generator keyed by the master seed, so results
are reproducible independent of execution schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class GbmSpec:
    """Lognormal model dX = r X dt + sigma X dW."""

    x0: float
    r: float
    sigma: float

    def __post_init__(self) -> None:
        if self.x0 <= 0:
            raise ValueError(f"initial value must be > 0, got {self.x0}")
        if self.sigma < 0:
            raise ValueError(f"volatility must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class LmmSpec:
    """Single-factor forward-rate model on a uniform tenor grid.

    The initial forward curve is flat at ``initial_rate``; the instantaneous
    volatility of the forward fixing at T is
    vol_scale * exp(-vol_decay * (T - t)).
    """

    tenor: float
    horizon: float
    initial_rate: float
    vol_scale: float
    vol_decay: float

    def __post_init__(self) -> None:
        if self.tenor <= 0:
            raise ValueError(f"tenor must be > 0, got {self.tenor}")
        periods = self.horizon / self.tenor
        if abs(periods - round(periods)) > 1e-9 or round(periods) < 1:
            raise ValueError(
                f"horizon {self.horizon} must be a positive multiple of tenor {self.tenor}"
            )
        if self.initial_rate <= -1.0 / self.tenor:
            raise ValueError(f"initial rate {self.initial_rate} below -1/tenor")
        if self.vol_scale < 0 or self.vol_decay < 0:
            raise ValueError("volatility scale and decay must be >= 0")

    @property
    def periods(self) -> int:
        return round(self.horizon / self.tenor)

    def grid(self) -> np.ndarray:
        return np.arange(self.periods + 1) * self.tenor


@dataclass(frozen=True)
class PathEnsemble:
    """Simulated values and numeraire on a time grid, one row per path."""

    times: np.ndarray
    values: np.ndarray
    numeraire: np.ndarray
    seed: int
    paths: int

    def time_index(self, t: float) -> int:
        idx = int(np.searchsorted(self.times, t))
        if idx >= self.times.size or abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"time {t} is not on the simulation grid")
        return idx


@dataclass(frozen=True)
class LmmEnsemble:
    """Forward-rate fixings and spot numeraire of a forward-rate simulation.

    ``fixings[:, i]`` is the realized forward L(T_i, T_i + tenor) observed at
    its fixing T_i; ``numeraire[:, k]`` is the rolled-up spot account at grid
    time T_k (product of realized simple compounding factors).
    """

    spec: LmmSpec
    times: np.ndarray
    fixings: np.ndarray
    numeraire: np.ndarray
    seed: int
    paths: int

    def time_index(self, t: float) -> int:
        idx = int(np.searchsorted(self.times, t))
        if idx >= self.times.size or abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"time {t} is not on the simulation grid")
        return idx

    def discount_bond(self, t: float) -> float:
        """Initial zero-coupon bond P(0, t) from the flat simple-rate curve."""
        return (1.0 + self.spec.initial_rate * self.spec.tenor) ** (-t / self.spec.tenor)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.Philox(key=seed))


def simulate_gbm(
    spec: GbmSpec, times: Sequence[float], paths: int, seed: int
) -> PathEnsemble:
    """Exact lognormal stepping on the given grid; numeraire exp(r t)."""
    times = np.asarray(times, dtype=float)
    if paths < 1:
        raise ValueError(f"paths must be >= 1, got {paths}")
    if times.ndim != 1 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be increasing and start at 0")
    dt = np.diff(times)
    normals = _rng(seed).standard_normal((paths, dt.size))
    log_increments = (spec.r - 0.5 * spec.sigma**2) * dt + spec.sigma * np.sqrt(dt) * normals
    values = np.empty((paths, times.size))
    values[:, 0] = spec.x0
    values[:, 1:] = spec.x0 * np.exp(np.cumsum(log_increments, axis=1))
    numeraire = np.broadcast_to(np.exp(spec.r * times), (paths, times.size)).copy()
    return PathEnsemble(times=times, values=values, numeraire=numeraire, seed=seed, paths=paths)


def _step_volatilities(spec: LmmSpec) -> np.ndarray:
    """Effective per-step volatilities vol[k, i] over [T_k, T_{k+1}] for forward i.

    Uses the exact root-mean-square of the decaying instantaneous volatility
    over the step, so the simulated terminal variance matches the continuous
    integral; zero once the forward has fixed (i <= k).
    """
    n = spec.periods
    delta = spec.tenor
    vol = np.zeros((n, n))
    for k in range(n):
        for i in range(k + 1, n):
            t_fix = i * delta
            if spec.vol_decay == 0.0:
                variance = spec.vol_scale**2 * delta
            else:
                a = 2.0 * spec.vol_decay
                variance = (
                    spec.vol_scale**2
                    / a
                    * (
                        math.exp(-a * (t_fix - (k + 1) * delta))
                        - math.exp(-a * (t_fix - k * delta))
                    )
                )
            vol[k, i] = math.sqrt(variance / delta)
    return vol


def simulate_lmm(spec: LmmSpec, paths: int, seed: int) -> LmmEnsemble:
    """Log-Euler simulation of all forwards under the spot measure.

    Single factor: all forwards share one Brownian increment per step,
    perfectly correlated. The drift uses the standard spot-measure adjustment
    with a predictor-corrector average to reduce discretization bias. The
    numeraire rolls realized period rates: N(T_{k+1}) = N(T_k)(1 + delta L_k(T_k)).
    """
    if paths < 1:
        raise ValueError(f"paths must be >= 1, got {paths}")
    n = spec.periods
    delta = spec.tenor
    vol = _step_volatilities(spec)
    rng = _rng(seed)

    forwards = np.full((paths, n), spec.initial_rate, dtype=float)
    fixings = np.empty((paths, n))
    fixings[:, 0] = forwards[:, 0]
    numeraire = np.empty((paths, n + 1))
    numeraire[:, 0] = 1.0

    def drift(rates: np.ndarray, k: int) -> np.ndarray:
        """Spot-measure drift of log L_i over step k, for i = k+1 .. n-1."""
        sigma = vol[k, k + 1 :]
        weight = delta * rates[:, k + 1 :] * sigma / (1.0 + delta * rates[:, k + 1 :])
        return sigma * np.cumsum(weight, axis=1)

    for k in range(n - 1):
        z = rng.standard_normal(paths)
        sigma = vol[k, k + 1 :]
        diffusion = sigma * (math.sqrt(delta) * z[:, None])
        mu_start = drift(forwards, k)
        predicted = forwards.copy()
        predicted[:, k + 1 :] = forwards[:, k + 1 :] * np.exp(
            (mu_start - 0.5 * sigma**2) * delta + diffusion
        )
        mu = 0.5 * (mu_start + drift(predicted, k))
        forwards[:, k + 1 :] = forwards[:, k + 1 :] * np.exp(
            (mu - 0.5 * sigma**2) * delta + diffusion
        )
        fixings[:, k + 1] = forwards[:, k + 1]
        numeraire[:, k + 1] = numeraire[:, k] * (1.0 + delta * fixings[:, k])
    if n >= 1:
        numeraire[:, n] = numeraire[:, n - 1] * (1.0 + delta * fixings[:, n - 1])

    return LmmEnsemble(
        spec=spec,
        times=spec.grid(),
        fixings=fixings,
        numeraire=numeraire,
        seed=seed,
        paths=paths,
    )
