import math

import numpy as np
import pytest

import rdchain


def test_constants():
    c, tau = rdchain.lower_constant()
    assert abs(c - 0.0935918) < 1e-6 and abs(tau - 0.23457905) < 1e-5
    cbar, a = rdchain.majorizing_constant()
    assert abs(cbar - 0.0218988) < 1e-6 and abs(a - 1.4392) < 1e-3


def test_binary_rate_distortion():
    rate, dist = rdchain.blahut_arimoto([0.0, 1.0], 0.11)
    h = -0.11 * math.log(0.11) - 0.89 * math.log(0.89)
    assert abs(rate - (math.log(2) - h)) < 1e-6
    assert dist <= 0.11 + 1e-7
    curve = rdchain.rd_curve([0.0, 1.0])
    assert np.all(np.diff(curve["rate"]) <= 0)
    assert 2 <= rdchain.penalized_rd_integral([0.0, 1.0]) / curve["integral"] <= 4


def test_width_and_sandwich():
    w, se = rdchain.width_of_measure([-1.0, 1.0])
    assert abs(w - math.sqrt(2 / math.pi)) < 3 * se + 0.01
    assert rdchain.trace_sqrt_cov_bound([-1.0, 1.0]) == pytest.approx(1.0)
    s = rdchain.sandwich_check(np.random.default_rng(0).normal(size=(6, 3)), pairs=1024)
    assert s["pass"] and s["lower"] <= s["upper"]


def test_projections():
    axes = rdchain.sobolev_axes(1.0, 4)
    p = rdchain.project_ellipsoid(np.array([2.0, 0, 0, 0]), axes)
    assert np.allclose(p, [1, 0, 0, 0])
    x = np.array([3.0, -2.0, 1.0])
    y = rdchain.project_weak_lq(x, 0.5, 1.0)
    assert rdchain.weak_lq_radius(y, 0.5) <= 1 + 1e-12
    assert np.all(np.abs(y) <= np.abs(x))


def test_errors_are_typed():
    with pytest.raises(rdchain.RdchainError, match="UnsupportedBeta"):
        rdchain.sobolev_axes(0.4, 5)
    with pytest.raises(ValueError):
        rdchain.run_toy(ns=[64, 128], replicas=20)


def test_rates():
    r = rdchain.run_ellipsoid(beta=1.0, replicas=20)
    assert abs(r["slope"] + 2 / 3) < 0.1
    assert r["ci"][0] <= r["slope"] <= r["ci"][1]
    assert rdchain.run_toy(replicas=20)["slope"] == pytest.approx(-1.0, abs=0.07)
