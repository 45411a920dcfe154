import math

import pytest

from nonlinear_discounting import (
    FlatRateSet,
    defaultable_value,
    rate_conversions,
    zero_bond,
)


def test_zero_bond_zero_maturity():
    assert zero_bond(0.05, 0.0) == 1.0


def test_zero_bond_hand_values():
    # r = -ln(0.95)
    assert zero_bond(0.0513, 1.0) == pytest.approx(0.95, abs=1e-4)
    assert zero_bond(0.02, 10.0) == pytest.approx(math.exp(-0.2), rel=1e-15)


def test_zero_bond_rejects_negative_maturity():
    with pytest.raises(ValueError):
        zero_bond(0.02, -1.0)


def test_rate_conversions_unit_bond():
    conv = rate_conversions(1.0, 1.0)
    assert conv.zero_rate == 0.0
    assert conv.forward_rate == 0.0


def test_rate_conversions_hand_values():
    conv = rate_conversions(0.95, 1.0)
    assert conv.zero_rate == pytest.approx(0.051293, abs=1e-6)
    assert conv.forward_rate == pytest.approx(0.052632, abs=1e-6)


def test_implied_intensity_subtracts_risk_free():
    conv = rate_conversions(math.exp(-0.05), 1.0, r=0.02)
    assert conv.implied_intensity == pytest.approx(0.03, abs=1e-12)


@pytest.mark.parametrize("bad", [(0.0, 1.0), (-0.5, 1.0), (0.9, 0.0), (0.9, -2.0)])
def test_rate_conversions_invalid_arguments(bad):
    with pytest.raises(ValueError):
        rate_conversions(*bad)


@pytest.mark.parametrize("r", [-0.01, 0.0, 0.02, 0.1])
@pytest.mark.parametrize("maturity", [0.25, 1.0, 7.5, 30.0])
def test_round_trip_rate_to_bond(r, maturity):
    p = zero_bond(r, maturity)
    assert rate_conversions(p, maturity).zero_rate == pytest.approx(r, abs=1e-12)


@pytest.mark.parametrize("t, s", [(1.0, 2.0), (0.5, 10.0), (3.0, 3.0)])
def test_zero_bond_reinvestment(t, s):
    r = 0.037
    assert zero_bond(r, t) * zero_bond(r, s) == pytest.approx(
        zero_bond(r, t + s), rel=1e-12
    )


def test_defaultable_value_reduces_to_risk_free():
    rates = FlatRateSet(r=0.02, lambda_implied=0.0)
    assert defaultable_value(1.0, rates, 10.0) == pytest.approx(math.exp(-0.2), rel=1e-15)


def test_defaultable_value_hand_value():
    rates = FlatRateSet(r=0.02, lambda_implied=0.03)
    assert defaultable_value(1.0, rates, 10.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_defaultable_value_linear_in_amount():
    rates = FlatRateSet(r=0.03, lambda_implied=0.01)
    assert defaultable_value(0.0, rates, 4.0) == 0.0
    v1 = defaultable_value(1.0, rates, 4.0)
    assert defaultable_value(7.5, rates, 4.0) == pytest.approx(7.5 * v1, rel=1e-15)


def test_flat_rate_set_rejects_non_finite():
    with pytest.raises(ValueError):
        FlatRateSet(r=math.nan)
    with pytest.raises(ValueError):
        FlatRateSet(r=0.01, lambda_objective=math.inf)


def test_flat_rate_set_allows_negative_rates():
    rates = FlatRateSet(r=-0.005, lambda_implied=-0.001, lambda_objective=-0.002)
    assert rates.r == -0.005
