"""Quadrature rules: zonal 1-D reductions for any sphere dimension, product
grids for S^2 and S^3, and a simple adaptive Gauss-Legendre integrator.

Zonal integrands (functions of the cosine c = x . x0 alone) reduce to a
weighted 1-D rule; the (1-c^2)^((n-2)/2) surface density is absorbed into
Gauss-Jacobi weights so polynomial integrands are integrated exactly.
"""
from __future__ import annotations

import functools
import math

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import DimensionError


def sphere_surface(n: int) -> float:
    """Surface measure of the unit n-sphere embedded in R^(n+1)."""
    if n < 0:
        raise DimensionError("sphere dimension must be nonnegative")
    return 2.0 * math.pi ** (0.5 * (n + 1)) / math.gamma(0.5 * (n + 1))


@functools.lru_cache(maxsize=128)
def zonal_rule(n: int, m: int):
    """Nodes and weights for averaging zonal functions over S^n.

    Returns (c, w) with sum(w) = 1 such that sum(w * f(c)) equals the surface
    average of x -> f(x . x0); exact whenever f is a polynomial of degree
    at most 2m-1.
    """
    if n < 1:
        raise DimensionError("sphere dimension must be at least 1")
    if m < 1:
        raise ValueError("node count must be at least 1")
    alpha = 0.5 * (n - 2)
    c, w = roots_jacobi(m, alpha, alpha)
    w = w * (sphere_surface(n - 1) / sphere_surface(n))
    c.setflags(write=False)
    w.setflags(write=False)
    return c, w


def zonal_integral(n: int, f, m: int) -> float:
    """Surface average of the zonal function x -> f(x . x0) on S^n."""
    c, w = zonal_rule(n, m)
    return float(w @ f(c))


@functools.lru_cache(maxsize=32)
def s2_grid(m_lat: int, m_lon: int):
    """Product grid on S^2: Gauss-Legendre in cos(theta) x uniform longitude.

    Weights sum to 1; exact for spherical polynomials whenever the latitude
    degree is below 2*m_lat and no longitude frequency is a nonzero multiple
    of m_lon.
    """
    if m_lat < 1 or m_lon < 1:
        raise ValueError("grid resolutions must be positive")
    c, w = roots_legendre(m_lat)
    phi = 2.0 * math.pi * np.arange(m_lon) / m_lon
    s = np.sqrt(1.0 - c**2)
    x = np.outer(s, np.cos(phi)).ravel()
    y = np.outer(s, np.sin(phi)).ravel()
    z = np.repeat(c, m_lon)
    points = np.column_stack([x, y, z])
    weights = np.repeat(w, m_lon) / (2.0 * m_lon)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


@functools.lru_cache(maxsize=8)
def s3_grid(m_chi: int, m_lat: int, m_lon: int):
    """Product grid on S^3: Gauss-Jacobi in cos(chi), Gauss-Legendre in
    cos(theta), uniform longitude.  Weights sum to 1."""
    if m_chi < 1 or m_lat < 1 or m_lon < 1:
        raise ValueError("grid resolutions must be positive")
    u, wu = roots_jacobi(m_chi, 0.5, 0.5)      # u = cos(chi), density (1-u^2)^(1/2)
    c, wc = roots_legendre(m_lat)
    phi = 2.0 * math.pi * np.arange(m_lon) / m_lon
    su = np.sqrt(1.0 - u**2)
    sc = np.sqrt(1.0 - c**2)
    # broadcast to (m_chi, m_lat, m_lon)
    x = su[:, None, None] * sc[None, :, None] * np.cos(phi)[None, None, :]
    y = su[:, None, None] * sc[None, :, None] * np.sin(phi)[None, None, :]
    z = (su[:, None] * c[None, :])[:, :, None] * np.ones_like(phi)[None, None, :]
    t = u[:, None, None] * np.ones((1, m_lat, m_lon))
    points = np.stack([x, y, z, t], axis=-1).reshape(-1, 4)
    weights = (wu[:, None, None] * wc[None, :, None] * np.ones_like(phi)[None, None, :])
    weights = weights.reshape(-1) / (math.pi * m_lon)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def product_grid(n: int, resolution: int):
    """(points, weights) covering S^n for n in {2, 3}; weights sum to 1."""
    if n == 2:
        return s2_grid(resolution, 2 * resolution)
    if n == 3:
        return s3_grid(resolution, resolution, 2 * resolution)
    raise DimensionError("product grids are provided for S^2 and S^3 only")


_PANEL_NODES = 15


@functools.lru_cache(maxsize=4)
def _panel_rules(nodes):
    coarse = roots_legendre(nodes)
    fine = roots_legendre(2 * nodes)
    return coarse, fine


def adaptive_gauss_legendre(f, a: float, b: float, tol: float = 1e-10,
                            max_depth: int = 40) -> float:
    """Integrate a vectorized f over [a, b] to absolute tolerance tol.

    Panels are bisected until the coarse/fine Gauss-Legendre estimates agree
    within the (halved-per-level) tolerance or the depth cap is reached.
    """
    if not b > a:
        raise ValueError("integration interval is empty")
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    (xc, wc), (xf, wf) = _panel_rules(_PANEL_NODES)

    def recurse(lo, hi, budget, depth):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        coarse = half * float(wc @ f(mid + half * xc))
        fine = half * float(wf @ f(mid + half * xf))
        if abs(fine - coarse) <= budget or depth >= max_depth:
            return fine
        return (recurse(lo, mid, 0.5 * budget, depth + 1)
                + recurse(mid, hi, 0.5 * budget, depth + 1))

    return recurse(float(a), float(b), tol, 0)
