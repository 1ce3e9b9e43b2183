"""Independent oracles and small utilities shared across test modules.

These deliberately avoid the production code paths they are used to check.
"""
import math

import numpy as np
from scipy.spatial import cKDTree


def explicit_legendre(n, k, t):
    """Zonal polynomial by the explicit finite-sum coefficient formula.

    P(t) = sum_j C_{2j} t^(k-2j) (1-t^2)^j with C_0 = 1 and
    C_{2j} = (-1)^j k(k-1)...(k-2j+1) / ((2.4...2j)(n(n+2)...(n+2j-2))).
    Numerically unstable for large k; test oracle only.
    """
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for j in range(k // 2 + 1):
        if j == 0:
            coef = 1.0
        else:
            num = 1.0
            for i in range(2 * j):
                num *= (k - i)
            den = 1.0
            for i in range(1, j + 1):
                den *= 2 * i
            for i in range(j):
                den *= (n + 2 * i)
            coef = (-1.0) ** j * num / den
        total = total + coef * t ** (k - 2 * j) * (1.0 - t * t) ** j
    return total


def binomial_dim(n, k):
    """Harmonic-space dimension by direct binomial evaluation."""
    second = math.comb(n + k - 2, n) if n + k - 2 >= 0 else 0
    return math.comb(n + k, n) - second


def weighted_sets_match(points_a, mult_a, points_b, mult_b, tol):
    """True when two weighted point sets coincide within tol, exact weights."""
    if len(points_a) != len(points_b):
        return False
    tree = cKDTree(points_b)
    dist, idx = tree.query(points_a, k=1)
    if np.max(dist) > tol:
        return False
    if len(set(idx.tolist())) != len(points_b):
        return False
    return bool(np.all(np.asarray(mult_a) == np.asarray(mult_b)[idx]))


def pairwise_min_distance(points):
    tree = cKDTree(points)
    dist, _ = tree.query(points, k=2)
    return float(dist[:, 1].min())
