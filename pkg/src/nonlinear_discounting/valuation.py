"""Monte-Carlo valuation of flows, streams and swaps under the capacity kernel.

Per path, flows are visited in time order. Depending on the compensation
mode a flow F is either left unchanged, scaled by the constant-intensity
factor exp(+lambda t), replaced by the contracted amount X* that delivers F
in expectation (compensation direction), or replaced by the amount actually
delivered when F is contracted (survival direction, used for the defaultable
par-rate experiments). The capacity consumption level is threaded through
the flow sequence per path, decaying between payment dates.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .capacity import StepSurvivalFunction
from .errors import BracketFailureError, CapacityExhaustedError
from .stochastic import LmmEnsemble, LmmSpec, PathEnsemble, simulate_lmm

# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TerminalFlow:
    """A single positive cash requirement X(T) at maturity."""

    maturity: float


@dataclass(frozen=True)
class ForwardMinusStrike:
    """A single signed requirement X(T) - K at maturity."""

    maturity: float
    strike: float


@dataclass(frozen=True)
class Stream:
    """Requirements X(T_i) - K at each time of an increasing grid."""

    times: Tuple[float, ...]
    strike: float = 0.0

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        if not times or any(t <= 0 for t in times) or any(
            b <= a for a, b in zip(times, times[1:])
        ):
            raise ValueError("stream times must be positive and strictly increasing")
        object.__setattr__(self, "times", times)


@dataclass(frozen=True)
class Swap:
    """Periodic payments M (L(T_i, T_i+tenor; T_i) - K) * tenor at T_i + tenor.

    ``fixing_times`` must lie on the tenor grid of the simulated forward-rate
    model. The accrual factor is included in each payment.
    """

    fixing_times: Tuple[float, ...]
    fixed_rate: float
    notional: float = 1.0

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.fixing_times)
        if not times or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("fixing times must be strictly increasing")
        if self.notional <= 0:
            raise ValueError(f"notional must be > 0, got {self.notional}")
        object.__setattr__(self, "fixing_times", times)


Product = Union[TerminalFlow, ForwardMinusStrike, Stream, Swap]
Ensemble = Union[PathEnsemble, LmmEnsemble]


# ---------------------------------------------------------------------------
# compensation modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompensationMode:
    """How each flow is transformed before discounting.

    kind "none": flows pass through (classical risk-neutral value).
    kind "constant": each time-t flow is multiplied by exp(+lambda t).
    kind "state": the capacity kernel is applied; ``direction`` selects
    between contracting enough to deliver the flow ("compensate", flow is
    replaced by X* >= X) and receiving what a defaultable provider delivers
    ("survive", flow is replaced by X p(b, X) <= X).

    ``asymmetric`` restricts the transformation to positive flows; negative
    flows then pass through unchanged and consume no capacity.
    ``accumulate`` chooses whether the requested or the contracted amount is
    added to the consumption level. ``exhausted_limit`` is the tolerated
    fraction of capacity-exhausted paths (0 = strict).
    """

    kind: str = "none"
    intensity: float = 0.0
    kernel: Optional[StepSurvivalFunction] = None
    decay: float = math.inf
    asymmetric: bool = False
    direction: str = "compensate"
    accumulate: str = "requested"
    exhausted_limit: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "constant", "state"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == "state" and self.kernel is None:
            raise ValueError("state-dependent mode requires a kernel")
        if self.direction not in ("compensate", "survive"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.accumulate not in ("requested", "contracted"):
            raise ValueError(f"unknown accumulation rule {self.accumulate!r}")

    @classmethod
    def none(cls) -> "CompensationMode":
        return cls(kind="none")

    @classmethod
    def constant_intensity(cls, intensity: float, asymmetric: bool = False) -> "CompensationMode":
        return cls(kind="constant", intensity=intensity, asymmetric=asymmetric)

    @classmethod
    def state_dependent(
        cls,
        kernel: StepSurvivalFunction,
        decay: float = math.inf,
        asymmetric: bool = False,
        direction: str = "compensate",
        accumulate: str = "requested",
        exhausted_limit: float = 0.0,
    ) -> "CompensationMode":
        return cls(
            kind="state",
            kernel=kernel,
            decay=decay,
            asymmetric=asymmetric,
            direction=direction,
            accumulate=accumulate,
            exhausted_limit=exhausted_limit,
        )


@dataclass(frozen=True)
class ValuationResult:
    value: float
    standard_error: float
    mean_compensation_factor: float = 1.0
    exhausted_fraction: float = 0.0


# ---------------------------------------------------------------------------
# flow extraction
# ---------------------------------------------------------------------------


def _product_flows(product: Product, ensemble: Ensemble) -> List[Tuple[float, np.ndarray]]:
    """(payment time, flow per path) list in time order."""
    if isinstance(product, TerminalFlow):
        idx = ensemble.time_index(product.maturity)
        return [(product.maturity, ensemble.values[:, idx])]
    if isinstance(product, ForwardMinusStrike):
        idx = ensemble.time_index(product.maturity)
        return [(product.maturity, ensemble.values[:, idx] - product.strike)]
    if isinstance(product, Stream):
        flows = []
        for t in product.times:
            idx = ensemble.time_index(t)
            flows.append((t, ensemble.values[:, idx] - product.strike))
        return flows
    if isinstance(product, Swap):
        if not isinstance(ensemble, LmmEnsemble):
            raise ValueError("swap valuation requires a forward-rate ensemble")
        delta = ensemble.spec.tenor
        flows = []
        for t_fix in product.fixing_times:
            i = ensemble.time_index(t_fix)
            if i >= ensemble.fixings.shape[1]:
                raise ValueError(f"fixing time {t_fix} beyond the model horizon")
            flow = product.notional * (ensemble.fixings[:, i] - product.fixed_rate) * delta
            flows.append((t_fix + delta, flow))
        return flows
    raise TypeError(f"unsupported product {product!r}")


def _numeraire_at(ensemble: Ensemble, t: float) -> np.ndarray:
    return ensemble.numeraire[:, ensemble.time_index(t)]


# ---------------------------------------------------------------------------
# the path walker
# ---------------------------------------------------------------------------


def _walk(
    product: Product, ensemble: Ensemble, mode: CompensationMode
) -> Tuple[List[np.ndarray], np.ndarray, float]:
    """Discounted transformed flows per payment date.

    Returns (list of per-path discounted flows, exhausted path mask,
    mean compensation factor over positive transformed flows).
    """
    flows = _product_flows(product, ensemble)
    paths = flows[0][1].shape[0]
    level = np.zeros(paths)
    exhausted = np.zeros(paths, dtype=bool)
    t_prev = 0.0
    discounted: List[np.ndarray] = []
    factor_sum = 0.0
    factor_count = 0

    for t_pay, flow in flows:
        if mode.kind == "state":
            dt = t_pay - t_prev
            if math.isinf(mode.decay):
                if dt > 0:
                    level = np.zeros(paths)
            elif dt > 0:
                level = level * math.exp(-mode.decay * dt)

        if mode.kind == "none":
            transformed = flow
        elif mode.kind == "constant":
            factor = math.exp(mode.intensity * t_pay)
            if mode.asymmetric:
                transformed = np.where(flow > 0, flow * factor, flow)
            else:
                transformed = flow * factor
        else:
            kernel = mode.kernel
            magnitude = np.abs(flow)
            apply_to = flow > 0 if mode.asymmetric else flow != 0
            amounts = np.where(apply_to, magnitude, 0.0)
            if mode.direction == "compensate":
                contracted, newly_exhausted = kernel.contracted(level, amounts)
                exhausted |= newly_exhausted
                out_magnitude = np.where(apply_to, contracted, magnitude)
                drawn = contracted if mode.accumulate == "contracted" else amounts
                drawn = np.where(newly_exhausted, 0.0, np.nan_to_num(drawn))
            else:
                delivered = kernel.delivered(level, amounts)
                out_magnitude = np.where(apply_to, delivered, magnitude)
                drawn = amounts
            transformed = np.where(flow >= 0, out_magnitude, -out_magnitude)
            level = level + drawn
            positive = (flow > 0) & ~exhausted
            if positive.any():
                factor_sum += float(np.sum(transformed[positive] / flow[positive]))
                factor_count += int(positive.sum())
        discounted.append(transformed / _numeraire_at(ensemble, t_pay))
        t_prev = t_pay

    mean_factor = factor_sum / factor_count if factor_count else 1.0
    return discounted, exhausted, mean_factor


def _reduce(values: np.ndarray, exhausted: np.ndarray, mode: CompensationMode) -> Tuple[float, float, float]:
    fraction = float(exhausted.mean())
    if fraction > mode.exhausted_limit:
        raise CapacityExhaustedError(
            f"{fraction:.4%} of paths exhausted the funding capacity "
            f"(limit {mode.exhausted_limit:.4%})"
        )
    kept = values[~exhausted]
    mean = float(kept.mean())
    stderr = float(kept.std(ddof=1) / math.sqrt(kept.size)) if kept.size > 1 else 0.0
    return mean, stderr, fraction


def value(product: Product, ensemble: Ensemble, mode: CompensationMode) -> ValuationResult:
    """Present value of all (transformed) product flows, averaged over paths."""
    discounted, exhausted, mean_factor = _walk(product, ensemble, mode)
    totals = np.sum(discounted, axis=0)
    mean, stderr, fraction = _reduce(totals, exhausted, mode)
    return ValuationResult(mean, stderr, mean_factor, fraction)


def maturity_profile(
    stream: Union[Stream, Swap], ensemble: Ensemble, mode: CompensationMode
) -> List[Tuple[float, ValuationResult]]:
    """Per-payment-date valuation, threading the shared capacity state."""
    flows = _product_flows(stream, ensemble)
    discounted, exhausted, mean_factor = _walk(stream, ensemble, mode)
    profile = []
    for (t_pay, _), values_t in zip(flows, discounted):
        mean, stderr, fraction = _reduce(values_t, exhausted, mode)
        profile.append((t_pay, ValuationResult(mean, stderr, mean_factor, fraction)))
    return profile


# ---------------------------------------------------------------------------
# par rates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParRateResult:
    par_rate: float
    risk_free_par_rate: float

    @property
    def spread(self) -> float:
        return self.par_rate - self.risk_free_par_rate


def _bisect(
    objective: Callable[[float], float], bracket: Tuple[float, float], tol: float
) -> float:
    lo, hi = bracket
    f_lo, f_hi = objective(lo), objective(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise BracketFailureError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def par_rate(
    template: Swap,
    model: LmmSpec,
    mode: CompensationMode,
    paths: int,
    seed: int,
    bracket: Tuple[float, float] = (-0.20, 0.40),
    tol: float = 1e-7,
    ensemble: Optional[LmmEnsemble] = None,
) -> ParRateResult:
    """Fixed rate K* making the payer swap (receive float, pay K) worth zero.

    Bisection on K with common random numbers: one ensemble is simulated per
    seed and reused for every trial rate, for both the requested mode and the
    risk-free reference, so the reported spread is free of independent
    Monte-Carlo noise.
    """
    if ensemble is None:
        ensemble = simulate_lmm(model, paths, seed)

    def objective(mode_: CompensationMode) -> Callable[[float], float]:
        def f(k: float) -> float:
            swap = dataclasses.replace(template, fixed_rate=k)
            return value(swap, ensemble, mode_).value

        return f

    rate = _bisect(objective(mode), bracket, tol)
    if mode.kind == "none":
        risk_free = rate
    else:
        risk_free = _bisect(objective(CompensationMode.none()), bracket, tol)
    return ParRateResult(par_rate=rate, risk_free_par_rate=risk_free)


def spread_approximation(variance: float, bond: float, log_survival_slope: float) -> float:
    """First-order par-rate spread: variance of the flow times slope of log-survival / bond."""
    if bond <= 0:
        raise ValueError(f"bond must be > 0, got {bond}")
    return variance / bond * log_survival_slope
