"""Experiment runs reproducing the numerical studies as CSV tables.

Each experiment has a name, a default configuration (every parameter that is
a modelling choice rather than a published value lives here and can be
overridden from a JSON config file) and produces an ExperimentReport that
serializes to CSV with ``#``-prefixed metadata lines. Identical configuration
and seed reproduce a byte-identical file.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from . import __version__
from .capacity import StepSurvivalFunction, intensity_limit_survival
from .diversify import DiversificationSpec, adjusted_discount_rate, adjusted_rate_first_order
from .curves import FlatRateSet
from .errors import ConfigError
from .stochastic import GbmSpec, LmmSpec, simulate_gbm, simulate_lmm
from .valuation import (
    CompensationMode,
    ForwardMinusStrike,
    Stream,
    Swap,
    TerminalFlow,
    maturity_profile,
    par_rate,
    value,
)

EXPERIMENTS = (
    "intensity-analogy",
    "forward-compensation",
    "forward-asymmetry",
    "stream-temporal",
    "par-swap-notional",
    "forward-curve-notional",
    "iam-rate",
)


@dataclass
class ExperimentReport:
    """Tabular experiment result with reproducibility metadata."""

    experiment: str
    columns: List[str]
    rows: List[Tuple[float, ...]]
    metadata: Dict[str, str] = field(default_factory=dict)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as handle:
            handle.write(self.render())

    def render(self) -> str:
        lines = [f"# {key}: {value}" for key, value in sorted(self.metadata.items())]
        lines.append(",".join(self.columns))
        for row in self.rows:
            if any(not math.isfinite(x) for x in row):
                raise ValueError(f"non-finite value in report row {row!r}")
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    # survival in the diffusive-consumption limit vs exp(-(mu - beta^2/2) t)
    "intensity-analogy": {
        "mu": 0.1,
        "beta": 0.2,
        "t_max": 10.0,
        "steps_per_year": 52,
        "paths": 100000,
        "seed": 3141,
    },
    # terminal flow with threshold kernel, swept over volatility
    "forward-compensation": {
        "model": {"x0": 1.0, "r": 0.05, "sigma": 0.2},
        "maturity": 5.0,
        "sigmas": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
        "kernel": [[0.0, 1.0], [1.5, 0.75]],
        "intensity": 0.0575,
        "paths": 100000,
        "seed": 3141,
    },
    # signed flow X(T) - K, compensation applied to positive flows only
    "forward-asymmetry": {
        "model": {"x0": 1.0, "r": 0.05, "sigma": 0.2},
        "maturity": 5.0,
        "strike": 1.2,
        "sigmas": [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
        "kernel": [[0.0, 1.0], [0.5, 0.75]],
        "intensity": 0.0575,
        "paths": 100000,
        "seed": 3141,
    },
    # per-maturity value of a flow stream with threaded capacity state
    "stream-temporal": {
        "model": {"x0": 1.0, "r": 0.05, "sigma": 0.2},
        "times": {"first": 1.0, "last": 10.0, "step": 1.0},
        "strike": 1.3,
        "kernel": [[0.0, 1.0], [0.5, 0.75]],
        "decay": 0.5,
        "asymmetric": True,
        "accumulate": "requested",
        "intensity": 0.0575,
        "paths": 100000,
        "seed": 3141,
    },
    # 20Y par swap rate as a function of the notional
    "par-swap-notional": {
        "model": {
            "tenor": 0.5,
            "horizon": 20.0,
            "initial_rate": 0.05,
            "vol_scale": 0.5,
            "vol_decay": 0.25,
        },
        "first_fixing": 0.5,
        "last_fixing": 19.5,
        "kernel": [[0.0, 1.0], [0.1, 0.85], [0.25, 0.7], [0.5, 0.55], [1.0, 0.4], [2.0, 0.3]],
        "decay": "inf",
        "asymmetric": False,
        "direction": "survive",
        "accumulate": "requested",
        "notionals": [0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0],
        "bracket": [-0.20, 0.40],
        "paths": 10000,
        "seed": 3141,
    },
    # par forward rate curve per notional (run twice: vol 0.5 / 1.0)
    "forward-curve-notional": {
        "model": {
            "tenor": 0.5,
            "horizon": 10.0,
            "initial_rate": 0.05,
            "vol_scale": 0.5,
            "vol_decay": 0.25,
        },
        "maturities": [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
        "kernel": [[0.0, 1.0], [0.1, 0.85], [0.25, 0.7], [0.5, 0.55], [1.0, 0.4], [2.0, 0.3]],
        "decay": "inf",
        "asymmetric": True,
        "direction": "survive",
        "accumulate": "requested",
        "notionals": [1.0, 5.0, 10.0, 20.0],
        "bracket": [-0.20, 0.40],
        "paths": 20000,
        "seed": 3141,
    },
    # Social-discount-rate adjustment for an integrated assessment model
    "iam-rate": {
        "r": 0.01,
        "intensity": 0.01,
        "n": 10,
        "epsilon": 0.01,
        "rule": "normal",
        "maturity": 25.0,
        "paths": 1,
        "seed": 0,
    },
}


def default_config(experiment: str) -> Dict[str, Any]:
    if experiment not in _DEFAULTS:
        raise ConfigError("experiment", f"unknown experiment {experiment!r}")
    return copy.deepcopy(_DEFAULTS[experiment])


def merge_config(base: Dict[str, Any], override: Dict[str, Any], path: str = "") -> Dict[str, Any]:
    """Recursive dict merge; scalar and list overrides replace wholesale."""
    merged = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}.{key}" if path else key
        if key not in merged:
            raise ConfigError(where, "unknown configuration field")
        if isinstance(merged[key], dict) and isinstance(val, dict):
            merged[key] = merge_config(merged[key], val, where)
        else:
            merged[key] = val
    return merged


def config_hash(config: Dict[str, Any]) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _parse_kernel(pairs: Any, where: str = "kernel") -> StepSurvivalFunction:
    try:
        breakpoints = [float(p[0]) for p in pairs]
        values = [float(p[1]) for p in pairs]
        return StepSurvivalFunction(breakpoints, values)
    except (TypeError, IndexError, ValueError) as exc:
        raise ConfigError(where, str(exc)) from exc


def _parse_decay(raw: Any, where: str = "decay") -> float:
    if raw in ("inf", "Infinity", None):
        return math.inf
    try:
        decay = float(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(where, f"not a decay rate: {raw!r}") from exc
    if decay < 0:
        raise ConfigError(where, f"decay must be >= 0, got {decay}")
    return decay


def _require(config: Dict[str, Any], key: str, kind, where: str = ""):
    path = f"{where}.{key}" if where else key
    if key not in config:
        raise ConfigError(path, "missing required field")
    val = config[key]
    try:
        if kind is float:
            return float(val)
        if kind is int:
            coerced = int(val)
            if coerced != val:
                raise ValueError("not an integer")
            return coerced
        if kind is list:
            if not isinstance(val, (list, tuple)) or not val:
                raise ValueError("expected a non-empty list")
            return list(val)
        return val
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, f"invalid value {val!r}") from exc


def _state_mode(config: Dict[str, Any]) -> CompensationMode:
    return CompensationMode.state_dependent(
        kernel=_parse_kernel(config["kernel"]),
        decay=_parse_decay(config.get("decay", "inf")),
        asymmetric=bool(config.get("asymmetric", False)),
        direction=str(config.get("direction", "compensate")),
        accumulate=str(config.get("accumulate", "requested")),
    )


# ---------------------------------------------------------------------------
# individual experiments
# ---------------------------------------------------------------------------


def _run_intensity_analogy(config: Dict[str, Any]) -> Tuple[List[str], List[Tuple[float, ...]]]:
    mu = _require(config, "mu", float)
    beta = _require(config, "beta", float)
    t_max = _require(config, "t_max", float)
    steps = _require(config, "steps_per_year", int)
    paths = _require(config, "paths", int)
    seed = _require(config, "seed", int)
    grid = np.linspace(0.0, t_max, round(t_max * steps) + 1)
    mean, stderr = intensity_limit_survival(mu, beta, grid, paths, seed)
    intensity = mu - 0.5 * beta**2
    analytic = np.exp(-intensity * grid)
    rows = [
        (t, m, s, a) for t, m, s, a in zip(grid, mean, stderr, analytic)
    ]
    return ["t", "mc_survival", "mc_stderr", "analytic"], rows


def _gbm_sweep(
    config: Dict[str, Any], product_for_sigma, asymmetric: bool
) -> Tuple[List[str], List[Tuple[float, ...]]]:
    model = config["model"]
    x0 = _require(model, "x0", float, "model")
    r = _require(model, "r", float, "model")
    maturity = _require(config, "maturity", float)
    sigmas = _require(config, "sigmas", list)
    intensity = _require(config, "intensity", float)
    paths = _require(config, "paths", int)
    seed = _require(config, "seed", int)
    state_mode = _state_mode(config)
    state_mode = CompensationMode.state_dependent(
        kernel=state_mode.kernel,
        decay=state_mode.decay,
        asymmetric=asymmetric,
        direction=state_mode.direction,
        accumulate=state_mode.accumulate,
    )
    constant = CompensationMode.constant_intensity(intensity, asymmetric=asymmetric)
    rows = []
    for sigma in sigmas:
        spec = GbmSpec(x0=x0, r=r, sigma=float(sigma))
        ensemble = simulate_gbm(spec, [0.0, maturity], paths, seed)
        product = product_for_sigma()
        compensated = value(product, ensemble, state_mode)
        plain = value(product, ensemble, CompensationMode.none())
        benchmark = value(product, ensemble, constant)
        rows.append(
            (
                float(sigma),
                compensated.value,
                compensated.standard_error,
                plain.value,
                plain.standard_error,
                benchmark.value,
                benchmark.standard_error,
            )
        )
    columns = [
        "sigma",
        "compensated",
        "compensated_stderr",
        "uncompensated",
        "uncompensated_stderr",
        "constant_intensity",
        "constant_intensity_stderr",
    ]
    return columns, rows


def _run_forward_compensation(config):
    maturity = _require(config, "maturity", float)
    return _gbm_sweep(config, lambda: TerminalFlow(maturity), asymmetric=False)


def _run_forward_asymmetry(config):
    maturity = _require(config, "maturity", float)
    strike = _require(config, "strike", float)
    return _gbm_sweep(
        config, lambda: ForwardMinusStrike(maturity, strike), asymmetric=True
    )


def _run_stream_temporal(config):
    model = config["model"]
    spec = GbmSpec(
        x0=_require(model, "x0", float, "model"),
        r=_require(model, "r", float, "model"),
        sigma=_require(model, "sigma", float, "model"),
    )
    times_cfg = config["times"]
    first = _require(times_cfg, "first", float, "times")
    last = _require(times_cfg, "last", float, "times")
    step = _require(times_cfg, "step", float, "times")
    strike = _require(config, "strike", float)
    intensity = _require(config, "intensity", float)
    paths = _require(config, "paths", int)
    seed = _require(config, "seed", int)
    times = np.round(np.arange(first, last + 0.5 * step, step), 12)
    stream = Stream(tuple(times), strike)
    grid = np.concatenate(([0.0], times))
    ensemble = simulate_gbm(spec, grid, paths, seed)
    asymmetric = bool(config.get("asymmetric", True))
    state_mode = _state_mode(config)
    constant = CompensationMode.constant_intensity(intensity, asymmetric=asymmetric)
    compensated = maturity_profile(stream, ensemble, state_mode)
    plain = maturity_profile(stream, ensemble, CompensationMode.none())
    benchmark = maturity_profile(stream, ensemble, constant)
    rows = []
    for (t, comp), (_, rf), (_, ci) in zip(compensated, plain, benchmark):
        rows.append(
            (
                t,
                comp.value,
                comp.standard_error,
                rf.value,
                rf.standard_error,
                ci.value,
                ci.standard_error,
            )
        )
    columns = [
        "maturity",
        "compensated",
        "compensated_stderr",
        "risk_free",
        "risk_free_stderr",
        "constant_intensity",
        "constant_intensity_stderr",
    ]
    return columns, rows


def _lmm_spec(model: Dict[str, Any]) -> LmmSpec:
    return LmmSpec(
        tenor=_require(model, "tenor", float, "model"),
        horizon=_require(model, "horizon", float, "model"),
        initial_rate=_require(model, "initial_rate", float, "model"),
        vol_scale=_require(model, "vol_scale", float, "model"),
        vol_decay=_require(model, "vol_decay", float, "model"),
    )


def _run_par_swap_notional(config):
    spec = _lmm_spec(config["model"])
    first = _require(config, "first_fixing", float)
    last = _require(config, "last_fixing", float)
    notionals = _require(config, "notionals", list)
    bracket = tuple(_require(config, "bracket", list))
    paths = _require(config, "paths", int)
    seed = _require(config, "seed", int)
    fixings = np.round(np.arange(first, last + 0.5 * spec.tenor, spec.tenor), 12)
    mode = _state_mode(config)
    ensemble = simulate_lmm(spec, paths, seed)
    rows = []
    for notional in notionals:
        template = Swap(tuple(fixings), fixed_rate=0.0, notional=float(notional))
        result = par_rate(
            template, spec, mode, paths, seed, bracket=bracket, ensemble=ensemble
        )
        rows.append(
            (float(notional), result.par_rate, result.risk_free_par_rate, result.spread)
        )
    return ["notional", "par_rate", "risk_free_par_rate", "spread"], rows


def _run_forward_curve_notional(config):
    spec = _lmm_spec(config["model"])
    maturities = _require(config, "maturities", list)
    notionals = _require(config, "notionals", list)
    bracket = tuple(_require(config, "bracket", list))
    paths = _require(config, "paths", int)
    seed = _require(config, "seed", int)
    mode = _state_mode(config)
    ensemble = simulate_lmm(spec, paths, seed)
    columns = ["maturity", "risk_free_rate"]
    columns += [f"par_rate_notional_{notional:g}" for notional in notionals]
    rows = []
    for maturity in maturities:
        template = Swap((float(maturity),), fixed_rate=0.0, notional=1.0)
        risk_free = par_rate(
            template,
            spec,
            CompensationMode.none(),
            paths,
            seed,
            bracket=bracket,
            ensemble=ensemble,
        ).par_rate
        row = [float(maturity), risk_free]
        for notional in notionals:
            template = Swap((float(maturity),), fixed_rate=0.0, notional=float(notional))
            result = par_rate(
                template, spec, mode, paths, seed, bracket=bracket, ensemble=ensemble
            )
            row.append(result.par_rate)
        rows.append(tuple(row))
    return columns, rows


def _run_iam_rate(config):
    r = _require(config, "r", float)
    intensity = _require(config, "intensity", float)
    spec = DiversificationSpec(
        n=_require(config, "n", int),
        epsilon=_require(config, "epsilon", float),
        rule=str(config.get("rule", "normal")),
    )
    maturity = _require(config, "maturity", float)
    first_order = adjusted_rate_first_order(r, intensity, spec, maturity)
    exact = adjusted_discount_rate(
        FlatRateSet(r=r, lambda_implied=intensity, lambda_objective=intensity),
        spec,
        maturity,
    )
    columns = [
        "r",
        "intensity",
        "n",
        "epsilon",
        "maturity",
        "adjusted_rate_first_order",
        "adjusted_rate_exact",
    ]
    return columns, [(r, intensity, spec.n, spec.epsilon, maturity, first_order, exact)]


_RUNNERS = {
    "intensity-analogy": _run_intensity_analogy,
    "forward-compensation": _run_forward_compensation,
    "forward-asymmetry": _run_forward_asymmetry,
    "stream-temporal": _run_stream_temporal,
    "par-swap-notional": _run_par_swap_notional,
    "forward-curve-notional": _run_forward_curve_notional,
    "iam-rate": _run_iam_rate,
}


def run(experiment: str, config: Dict[str, Any]) -> ExperimentReport:
    """Run one experiment with a fully resolved config and return its report."""
    if experiment not in _RUNNERS:
        raise ConfigError("experiment", f"unknown experiment {experiment!r}")
    columns, rows = _RUNNERS[experiment](config)
    metadata = {
        "experiment": experiment,
        "config_hash": config_hash(config),
        "seed": str(config.get("seed", "")),
        "version": __version__,
    }
    return ExperimentReport(experiment=experiment, columns=columns, rows=rows, metadata=metadata)
