import math

import numpy as np
import pytest

from moebius_colorcode.analysis import (
    FitError,
    _crossing_model,
    fit_lowp,
    fit_threshold,
    linear_fit,
)
from moebius_colorcode.noise import MCResult

LOWP_D = (5, 7, 9, 11)
LOWP_P = (0.01, 0.0175, 0.025, 0.0325, 0.04)
TH_D = (7, 9, 11, 13, 15)
TH_P = tuple(np.round(np.arange(0.07, 0.1101, 0.005), 4))


def _ansatz(alpha, gamma, n, beta):
    return [(d, p, beta * (n * p) ** (alpha * d + gamma)) for d in LOWP_D for p in LOWP_P]


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_linear_fit_examples():
    assert linear_fit([0, 1], [3, 5]) == pytest.approx((2, 3, 1.0))
    xs = list(range(10))
    assert linear_fit(xs, [2 * x + 1 for x in xs]) == pytest.approx((2, 1, 1.0))
    slope, icpt, _ = linear_fit(xs, [4.0] * 10)
    assert slope == 0 and icpt == 4
    for xs, ys in (([1], [1]), ([2, 2, 2], [1, 2, 3])):
        with pytest.raises(FitError):
            linear_fit(xs, ys)


def test_lowp_reference_parameters_round_trip():
    fit = fit_lowp(_ansatz(0.422, 0.488, 12.49, 0.148), discard_threshold=0.0)
    for got, want in ((fit.alpha, 0.422), (fit.gamma, 0.488), (fit.N, 12.49), (fit.beta, 0.148)):
        assert _rel(got, want) < 1e-6
    assert all(x.G > 0 for x in fit.per_d)


def test_lowp_random_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        params = (rng.uniform(0.2, 0.6), rng.uniform(-1, 1), rng.uniform(2, 30), rng.uniform(0.01, 1))
        fit = fit_lowp(_ansatz(*params), discard_threshold=0.0)
        for got, want in zip((fit.alpha, fit.gamma, fit.N, fit.beta), params):
            assert _rel(got, want) < 1e-5
        assert fit.predict(9, 0.02) == pytest.approx(params[3] * (params[2] * 0.02) ** (params[0] * 9 + params[1]))


def test_discard_rule_excludes_low_points():
    data = _ansatz(0.422, 0.488, 12.49, 0.148)
    low = [(d, p) for d, p, pf in data if pf < 5e-6]
    assert low
    # scramble every sub-threshold value while keeping it below the threshold
    rng = np.random.default_rng(3)
    scrambled = [(d, p, pf if pf >= 5e-6 else rng.uniform(1e-9, 4e-6)) for d, p, pf in data]
    fit = fit_lowp(scrambled)
    reference = fit_lowp([x for x in data if x[2] >= 5e-6])
    assert sorted(fit.discarded_points) == sorted(low)
    assert fit.alpha == reference.alpha and fit.N == reference.N
    assert _rel(fit.alpha, 0.422) < 1e-6


def test_lowp_errors():
    with pytest.raises(FitError):
        fit_lowp([(d, p, 1e-7) for d in LOWP_D for p in LOWP_P])
    with pytest.raises(FitError, match="d=11"):
        fit_lowp([x for x in _ansatz(0.4, 0.5, 10, 0.1) if not (x[0] == 11 and x[1] > 0.02)], 0.0)
    with pytest.raises(FitError):
        fit_lowp([x for x in _ansatz(0.4, 0.5, 10, 0.1) if x[0] in (5, 7)], 0.0)


def test_lowp_accepts_mc_results():
    rows = [MCResult(d, p, 10**6, max(1, round(pf * 10**6)), 0, "moebius") for d, p, pf in _ansatz(0.4, 0.5, 12, 0.2)]
    fit = fit_lowp(rows)
    assert 0.3 < fit.alpha < 0.5


def _crossing(theta):
    out = []
    for d in TH_D:
        for p in TH_P:
            out.append((d, float(p), float(_crossing_model(theta, np.array([float(d)]), np.array([p]))[0])))
    return out


def test_threshold_reference_parameters_round_trip():
    theta = (0.090, 1.422, 1.215, 0.783, 0.122)
    fit = fit_threshold(_crossing(theta))
    for got, want in zip((fit.p_c, fit.nu0, fit.A, fit.B, fit.C), theta):
        assert _rel(got, want) < 1e-6


def test_threshold_random_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(100):
        theta = (rng.uniform(0.08, 0.10), rng.uniform(1.1, 2.0), rng.uniform(0.5, 2.0),
                 rng.uniform(0.3, 1.5), rng.uniform(0.05, 0.3))
        fit = fit_threshold(_crossing(theta))
        for got, want in zip((fit.p_c, fit.nu0, fit.A, fit.B, fit.C), theta):
            assert _rel(got, want) < 1e-5, (theta, got, want)


def test_threshold_residual_trace_monotone():
    rng = np.random.default_rng(2)
    data = [(d, p, y + rng.normal(0, 0.003)) for d, p, y in _crossing((0.09, 1.4, 1.2, 0.8, 0.12))]
    fit = fit_threshold(data)
    assert all(b <= a for a, b in zip(fit.residual_trace, fit.residual_trace[1:]))
    assert 0.085 < fit.p_c < 0.095


def test_threshold_errors():
    with pytest.raises(FitError):
        fit_threshold([(7, p, 0.1) for p in TH_P])
    with pytest.raises(FitError):
        fit_threshold(_crossing((0.09, 1.4, 1.2, 0.8, 0.12)), window=(0.2, 0.3))


def test_threshold_window_filters_points():
    theta = (0.09, 1.4, 1.2, 0.8, 0.12)
    junk = [(d, 0.2, 5.0) for d in TH_D]
    fit = fit_threshold(_crossing(theta) + junk)
    assert _rel(fit.p_c, 0.09) < 1e-6
    assert math.isfinite(fit.residual)
