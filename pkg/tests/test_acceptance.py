"""End-to-end acceptance checks, one per shipped numerical guarantee.

Each test prints a single machine-readable PASS/FAIL line before asserting,
so running this module gives a compact scoreboard of the package's
quantitative claims at their stated tolerances.
"""

import math

import numpy as np
import pytest

from nonlinear_discounting import (
    CompensationMode,
    DiversificationSpec,
    GbmSpec,
    LmmSpec,
    StepSurvivalFunction,
    Stream,
    Swap,
    TerminalFlow,
    adjusted_rate_first_order,
    compensated_amount,
    intensity_limit_survival,
    par_rate,
    quantile_multiplier,
    simulate_diversified_funding,
    simulate_gbm,
    simulate_lmm,
    survival_probability,
    value,
)

from oracles import black76_call, black_scholes_call


def _report(name, passed, detail):
    print(f"ACCEPTANCE {'PASS' if passed else 'FAIL'} {name}: {detail}")
    assert passed, f"{name}: {detail}"


def test_social_discount_rate_adjustment():
    spec = DiversificationSpec(n=10, epsilon=0.01, rule="normal")
    rate = adjusted_rate_first_order(0.01, 0.01, spec, 25.0)
    _report(
        "social-discount-rate-adjustment",
        -0.0052 <= rate <= -0.0042,
        f"first-order adjusted rate {rate:.5f} within [-0.52%, -0.42%]",
    )


def test_quantile_multipliers():
    normal = quantile_multiplier(DiversificationSpec(n=1, epsilon=0.01, rule="normal"))
    cantelli = quantile_multiplier(DiversificationSpec(n=1, epsilon=0.01, rule="cantelli"))
    ok = abs(normal - 2.326) <= 0.001 and abs(cantelli - 9.9499) <= 0.001
    _report(
        "quantile-multipliers",
        ok,
        f"normal {normal:.4f} (want 2.326 +/- 0.001), "
        f"cantelli {cantelli:.4f} (want 9.9499 +/- 0.001)",
    )


def test_intensity_limit_analogy():
    grid = np.linspace(0.0, 10.0, 521)
    mean, stderr = intensity_limit_survival(0.1, 0.2, grid, 100000, 3141)
    target = np.exp(-0.08 * grid)
    dev = np.abs(mean[1:] - target[1:]) / stderr[1:]
    _report(
        "intensity-limit-analogy",
        float(dev.max()) < 3.0,
        f"max |MC - exp(-0.08 t)| = {dev.max():.2f} standard errors (limit 3)",
    )


def test_diversification_shortfall_frequency():
    freq, _ = simulate_diversified_funding(
        1.0, 0.9, DiversificationSpec(n=100, epsilon=0.01, rule="normal"), 100000, 3141
    )
    half_width = 2.5758 * math.sqrt(0.01 * 0.99 / 100000)
    lo, hi = 0.01 - half_width, 0.01 + half_width
    _report(
        "diversification-shortfall-frequency",
        lo <= freq <= hi,
        f"empirical shortfall {freq:.4%} vs 99% binomial CI [{lo:.4%}, {hi:.4%}] "
        "around the 1% design level",
    )


@pytest.mark.parametrize("sigma", [0.1, 0.2, 0.4])
def test_forward_compensation_call_decomposition(sigma):
    kernel = StepSurvivalFunction([0.0, 1.5], [1.0, 0.75])
    spec = GbmSpec(x0=1.0, r=0.05, sigma=sigma)
    ensemble = simulate_gbm(spec, [0.0, 5.0], 100000, 3141)
    result = value(TerminalFlow(5.0), ensemble, CompensationMode.state_dependent(kernel))
    target = 1.0 + (1.0 / 0.75 - 1.0) * black_scholes_call(1.0, 1.5, 0.05, sigma, 5.0)
    dev = abs(result.value - target) / result.standard_error
    _report(
        f"forward-compensation-call-decomposition[sigma={sigma}]",
        dev < 3.0,
        f"MC {result.value:.5f} vs closed form {target:.5f} "
        f"({dev:.2f} standard errors, limit 3)",
    )


def test_classical_limit_bitwise():
    unit = StepSurvivalFunction.constant(1.0)
    gbm = simulate_gbm(GbmSpec(x0=1.0, r=0.05, sigma=0.2), [0.0, 1.0, 2.0, 5.0], 1000, 7)
    lmm = simulate_lmm(
        LmmSpec(tenor=0.5, horizon=5.0, initial_rate=0.05, vol_scale=0.3, vol_decay=0.25),
        1000,
        7,
    )
    cases = [
        (TerminalFlow(5.0), gbm),
        (Stream((1.0, 2.0, 5.0), strike=0.8), gbm),
        (Swap((0.5, 1.0, 1.5), fixed_rate=0.05), lmm),
    ]
    ok = True
    for direction in ("compensate", "survive"):
        mode = CompensationMode.state_dependent(unit, direction=direction)
        for product, ensemble in cases:
            a = value(product, ensemble, mode)
            b = value(product, ensemble, CompensationMode.none())
            ok &= a.value == b.value and a.standard_error == b.standard_error
    _report(
        "classical-limit-bitwise",
        ok,
        "unit-kernel state valuation bitwise equal to plain valuation "
        "for terminal flow, stream and swap in both directions",
    )


def test_capacity_round_trip_property():
    rng = np.random.default_rng(2718)
    worst_rel = 0.0
    superadditive = True
    monotone = True
    for _ in range(10000):
        m = rng.integers(1, 7)
        breakpoints = np.concatenate(([0.0], np.cumsum(rng.uniform(0.1, 20.0, m - 1))))
        values = np.sort(rng.uniform(0.05, 1.0, m))[::-1]
        q = StepSurvivalFunction(breakpoints, values)
        level = rng.uniform(0.0, 25.0)
        amount = rng.uniform(1e-3, 25.0)
        xstar = compensated_amount(q, level, amount)
        back = xstar * survival_probability(q, level, xstar)
        worst_rel = max(worst_rel, abs(back - amount) / amount)
        double = compensated_amount(q, level, 2.0 * amount)
        superadditive &= double >= 2.0 * xstar - 1e-9 * double
        deeper = compensated_amount(q, level + rng.uniform(0.0, 10.0), amount)
        monotone &= deeper >= xstar - 1e-9 * deeper
    _report(
        "capacity-round-trip-property",
        worst_rel < 1e-12 and superadditive and monotone,
        f"worst round-trip relative error {worst_rel:.2e} (limit 1e-12); "
        f"superadditive={superadditive}, level-monotone={monotone} on 10^4 samples",
    )


def test_portfolio_decomposition():
    kernel = StepSurvivalFunction([0.0, 0.5], [1.0, 0.75])
    times = (1.0, 2.0, 3.0, 4.0, 5.0)
    ensemble = simulate_gbm(GbmSpec(x0=1.0, r=0.05, sigma=0.2), [0.0, *times], 100000, 3141)
    stream = Stream(times, strike=0.5)
    fresh_mode = CompensationMode.state_dependent(kernel, asymmetric=True)
    fresh = value(stream, ensemble, fresh_mode)
    per_flow = sum(
        value(Stream((t,), strike=0.5), ensemble, fresh_mode).value for t in times
    )
    rel = abs(fresh.value - per_flow) / abs(per_flow)
    sticky = value(
        stream,
        ensemble,
        CompensationMode.state_dependent(kernel, decay=0.1, asymmetric=True),
    )
    gap = abs(sticky.value - fresh.value) / max(
        sticky.standard_error, fresh.standard_error
    )
    _report(
        "portfolio-decomposition",
        rel < 1e-12 and gap > 5.0,
        f"instant-recovery stream vs per-flow sum relative gap {rel:.2e} "
        f"(limit 1e-12); persistent-state value differs by {gap:.1f} standard "
        "errors (need > 5)",
    )


DEFAULT_KERNEL = StepSurvivalFunction(
    [0.0, 0.1, 0.25, 0.5, 1.0, 2.0], [1.0, 0.85, 0.7, 0.55, 0.4, 0.3]
)


def test_par_rate_notional_dependence():
    spec = LmmSpec(tenor=0.5, horizon=20.0, initial_rate=0.05, vol_scale=0.5, vol_decay=0.25)
    ensemble = simulate_lmm(spec, 10000, 3141)
    fixings = tuple(np.round(np.arange(0.5, 19.5 + 0.25, 0.5), 12))
    mode = CompensationMode.state_dependent(DEFAULT_KERNEL, direction="survive")
    spreads = {}
    for notional in (0.1, 100.0):
        template = Swap(fixings, fixed_rate=0.0, notional=notional)
        spreads[notional] = par_rate(
            template, spec, mode, 10000, 3141, ensemble=ensemble
        ).spread
    small_ok = abs(spreads[0.1]) < 2e-4
    large_ok = spreads[100.0] < -1e-3
    _report(
        "par-rate-notional-dependence",
        small_ok and large_ok,
        f"spread {spreads[0.1] * 1e4:.2f} bp at notional 0.1 (|.| < 2 bp), "
        f"{spreads[100.0] * 1e4:.2f} bp at notional 100 (< -10 bp, negative "
        "matching the decreasing survival kernel)",
    )


def test_spread_scales_with_squared_volatility():
    maturity, notional = 2.0, 20.0
    template = Swap((maturity,), fixed_rate=0.0, notional=notional)
    mode = CompensationMode.state_dependent(
        DEFAULT_KERNEL, asymmetric=True, direction="survive"
    )
    spreads = {}
    for vol in (0.5, 1.0):
        spec = LmmSpec(
            tenor=0.5, horizon=10.0, initial_rate=0.05, vol_scale=vol, vol_decay=0.25
        )
        ensemble = simulate_lmm(spec, 20000, 3141)
        spreads[vol] = par_rate(
            template, spec, mode, 20000, 3141, ensemble=ensemble
        ).spread
    ratio = spreads[1.0] / spreads[0.5]
    _report(
        "spread-scales-with-squared-volatility",
        3.0 <= ratio <= 5.0,
        f"doubling vol_scale multiplies the 2Y spread by {ratio:.2f} "
        f"({spreads[0.5] * 1e4:.2f} bp -> {spreads[1.0] * 1e4:.2f} bp; want [3, 5])",
    )


@pytest.mark.parametrize("t_fix", [2.0, 4.0, 8.0])
def test_caplet_against_lognormal_closed_form(t_fix):
    spec = LmmSpec(tenor=0.5, horizon=12.0, initial_rate=0.05, vol_scale=0.3, vol_decay=0.25)
    ensemble = simulate_lmm(spec, 50000, 3141)
    i = ensemble.time_index(t_fix)
    strike = 0.05
    payoff = np.maximum(ensemble.fixings[:, i] - strike, 0.0) * spec.tenor
    discounted = payoff / ensemble.numeraire[:, i + 1]
    se = discounted.std(ddof=1) / math.sqrt(discounted.size)
    a = 2.0 * spec.vol_decay
    variance = spec.vol_scale**2 / a * (1.0 - math.exp(-a * t_fix))
    target = (
        black76_call(
            spec.initial_rate, strike, variance, ensemble.discount_bond(t_fix + spec.tenor)
        )
        * spec.tenor
    )
    dev = abs(discounted.mean() - target) / se
    _report(
        f"caplet-lognormal-closed-form[T={t_fix}]",
        dev < 3.0,
        f"MC {discounted.mean():.6f} vs closed form {target:.6f} "
        f"({dev:.2f} standard errors, limit 3)",
    )
