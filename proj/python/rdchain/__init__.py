"""Rate-distortion chaining toolkit."""

import numpy as _np

from . import _core
from ._core import (
    RdchainError,
    __version__,
    c_beta,
    f_func,
    g_env,
    gaussian_rd,
    lower_constant,
    majorizing_constant,
    project_ellipsoid,
    project_weak_lq,
    psi_bound,
    run_ellipsoid,
    run_sparse,
    run_toy,
    sobolev_axes,
    weak_lq_radius,
)


def _points(points):
    arr = _np.asarray(points, dtype=float)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def blahut_arimoto(points, target_distortion_sq, weights=(), tolerance=1e-7):
    """Rate in nats and achieved E d^2 for the measure on `points`."""
    return _core.blahut_arimoto(_points(points), list(weights), target_distortion_sq, tolerance)


def rd_curve(points, weights=(), grid_points=128):
    return _core.rd_curve(_points(points), list(weights), grid_points)


def penalized_rd_integral(points, weights=()):
    return _core.penalized_rd_integral(_points(points), list(weights))


def mc_sup(points, samples=100000, seed=1):
    return _core.mc_sup(_points(points), samples, seed)


def width_of_measure(points, weights=(), pairs=4096, seed=1):
    return _core.width_of_measure(_points(points), list(weights), pairs, seed)


def trace_sqrt_cov_bound(points, weights=()):
    return _core.trace_sqrt_cov_bound(_points(points), list(weights))


def sandwich_check(points, weights=(), pairs=4096, seed=1):
    return _core.sandwich_check(_points(points), list(weights), pairs, seed)
