"""Spherical-harmonic dimensions and eigenvalues, the zonal polynomials
P_{k,n}, truncated heat-kernel series, and the distance-kernel coefficients
gamma_k.

Dimensions h_k are exact integers.  Everything public is indexed by degree;
the eigenvalue cutoff appearing in the truncation bound is converted to a
degree inside truncation_cutoffs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .params import compute_a_n
from .quadrature import adaptive_gauss_legendre

# |c| may exceed 1 by at most this before clamping to [-1, 1]
_COS_SLACK = 1e-12


def dim_harmonic(n: int, k: int) -> int:
    """Dimension of the degree-k harmonic space on S^n, as an exact integer."""
    if n < 1:
        raise DomainError("sphere dimension must be at least 1")
    if k < 0:
        raise DomainError("degree must be nonnegative")
    upper = math.comb(n + k, n)
    lower = math.comb(n + k - 2, n) if n + k - 2 >= 0 else 0
    return upper - lower


def eigenvalue(n: int, k: int) -> int:
    """Laplace-Beltrami eigenvalue k(n+k-1) of the degree-k space."""
    if n < 1 or k < 0:
        raise DomainError("need n >= 1 and k >= 0")
    return k * (n + k - 1)


def cumulative_dim_identity_check(n: int, k: int) -> bool:
    """Self-test: sum of the first k+1 dimensions on S^n equals h_k on S^(n+1)."""
    total = sum(dim_harmonic(n, a) for a in range(k + 1))
    return total == dim_harmonic(n + 1, k)


@dataclass(frozen=True)
class HarmonicSpec:
    n: int
    k: int
    h_k: int
    lambda_k: int

    def __post_init__(self):
        if self.h_k != dim_harmonic(self.n, self.k):
            raise ValueError("h_k inconsistent with (n, k)")
        if self.lambda_k != eigenvalue(self.n, self.k):
            raise ValueError("lambda_k inconsistent with (n, k)")

    @classmethod
    def for_degree(cls, n: int, k: int) -> "HarmonicSpec":
        return cls(n=n, k=k, h_k=dim_harmonic(n, k), lambda_k=eigenvalue(n, k))


def _clamp_cosine(values):
    arr = np.asarray(values, dtype=float)
    if np.any(np.abs(arr) > 1.0 + _COS_SLACK):
        raise DomainError("cosine argument lies outside [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def legendre_all(n: int, kmax: int, t):
    """P_{0,n}(t) .. P_{kmax,n}(t) by the three-term recurrence, stacked on axis 0."""
    if n < 1:
        raise DomainError("sphere dimension must be at least 1")
    if kmax < 0:
        raise DomainError("degree must be nonnegative")
    x = np.atleast_1d(_clamp_cosine(t))
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    for j in range(1, kmax):
        out[j + 1] = ((2 * j + n - 1) * x * out[j] - j * out[j - 1]) / (j + n - 1)
    return out


def legendre_eval(n: int, k: int, t):
    """The zonal polynomial P_{k,n}(t); accepts scalars or arrays in [-1, 1]."""
    if n < 1:
        raise DomainError("sphere dimension must be at least 1")
    if k < 0:
        raise DomainError("degree must be nonnegative")
    x = _clamp_cosine(t)
    scalar = x.ndim == 0
    xs = np.atleast_1d(x)
    p_prev = np.ones_like(xs)
    if k == 0:
        return float(p_prev[0]) if scalar else p_prev.reshape(x.shape)
    p_cur = xs.copy()
    for j in range(1, k):
        p_next = ((2 * j + n - 1) * xs * p_cur - j * p_prev) / (j + n - 1)
        p_prev, p_cur = p_cur, p_next
    return float(p_cur[0]) if scalar else p_cur.reshape(x.shape)


@dataclass(frozen=True)
class HeatKernelSeries:
    """Truncated expansion of the heat kernel: coeffs[k] = exp(-lambda_k t) h_k.

    Coefficients too damped to represent in double precision underflow to
    exactly zero; they contribute nothing to any evaluation.
    """

    n: int
    t: float
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if self.t <= 0.0:
            raise DomainError("diffusion time t must be positive")
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ValueError("coeffs must be a nonempty 1-D sequence")
        if coeffs[0] != 1.0:
            raise ValueError("coeffs[0] must be exactly 1")
        if np.any(coeffs < 0.0):
            raise ValueError("coefficients must be nonnegative")
        start = max(1, math.ceil(self.n / self.t))
        if np.any(np.diff(coeffs[start:]) > 0.0):
            raise ValueError("coefficients must decrease beyond degree n/t")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def K(self) -> int:
        return self.coeffs.size - 1


def build_series(n: int, t: float, K: int) -> HeatKernelSeries:
    """Heat-kernel series on S^n at time t, keeping degrees 0..K."""
    if n < 1:
        raise DomainError("sphere dimension must be at least 1")
    if t <= 0.0:
        raise DomainError("diffusion time t must be positive")
    if K < 0:
        raise DomainError("truncation degree must be nonnegative")
    logs = np.array([
        -eigenvalue(n, k) * t + math.log(dim_harmonic(n, k)) for k in range(K + 1)
    ])
    coeffs = np.exp(logs)
    coeffs[0] = 1.0
    return HeatKernelSeries(n=n, t=float(t), coeffs=coeffs)


def brownian_motion_series(n: int, t: float, K: int) -> HeatKernelSeries:
    """Series of the time-t law of standard Brownian motion on S^n.

    Standard Brownian motion has generator half the Laplacian, so its time-t
    density is the heat-kernel series at time t/2.  The second moment of the
    geodesic displacement under this law is n*t at leading order in t.
    """
    return build_series(n, 0.5 * t, K)


def effective_degree(series: HeatKernelSeries) -> int:
    """Largest degree whose coefficient is nonzero in double precision."""
    nonzero = np.nonzero(series.coeffs)[0]
    return int(nonzero[-1])


def heat_kernel_point(series: HeatKernelSeries, c):
    """Kernel value at cosine c of the angle to the base point."""
    x = _clamp_cosine(c)
    scalar = x.ndim == 0
    xs = np.atleast_1d(x).ravel()
    kmax = effective_degree(series)
    coeffs = series.coeffs
    n = series.n
    total = np.full_like(xs, coeffs[0])
    if kmax >= 1:
        p_prev = np.ones_like(xs)
        p_cur = xs.copy()
        total += coeffs[1] * p_cur
        for j in range(1, kmax):
            p_next = ((2 * j + n - 1) * xs * p_cur - j * p_prev) / (j + n - 1)
            cj = coeffs[j + 1]
            if cj != 0.0:
                total += cj * p_next
            p_prev, p_cur = p_cur, p_next
    return float(total[0]) if scalar else total.reshape(x.shape)


def l2_norm_sq(series: HeatKernelSeries) -> float:
    """Squared L^2 norm over the kept degrees: sum of exp(-2 lambda_k t) h_k.

    Recomputed from (n, t, K) directly; the exponent doubles relative to the
    stored coefficients.
    """
    n, t = series.n, series.t
    return float(sum(
        math.exp(-2.0 * eigenvalue(n, k) * t + math.log(dim_harmonic(n, k)))
        for k in range(series.K + 1)
    ))


class TruncationCutoffs(NamedTuple):
    k0: int
    eigenvalue_cap: float
    degree: int


def truncation_cutoffs(n: int, t: float, eta: float) -> TruncationCutoffs:
    """Cutoffs guaranteeing the dropped tail has squared L^2 mass at most eta^2.

    k0 = ceil(max{log2(1/eta), (3n/2)(1+a_n) log2(1/t)}); the eigenvalue cap
    is 4^(k0/n) and the degree cutoff is the largest k with k(n+k-1) under it.
    The bound is proved for t < 1/6; larger diffusion times are accepted
    because every tail term only shrinks as t grows, so the guarantee holds
    a fortiori.
    """
    if n < 2:
        raise DomainError("truncation bound requires sphere dimension n >= 2")
    if t <= 0.0:
        raise DomainError("truncation bound requires t > 0")
    if not 0.0 < eta < 1.0:
        raise DomainError("truncation bound requires eta in (0, 1)")
    a = compute_a_n(n)
    k0 = math.ceil(max(math.log2(1.0 / eta),
                       1.5 * n * (1.0 + a) * math.log2(1.0 / t)))
    k0 = max(k0, 1)
    cap = 4.0 ** (k0 / n)
    # largest integer k with k(n+k-1) <= cap
    degree = int((-(n - 1) + math.sqrt((n - 1) ** 2 + 4.0 * cap)) / 2.0)
    while eigenvalue(n, degree + 1) <= cap:
        degree += 1
    while degree > 0 and eigenvalue(n, degree) > cap:
        degree -= 1
    return TruncationCutoffs(k0=k0, eigenvalue_cap=cap, degree=degree)


def truncation_degree(n: int, t: float, eta: float) -> int:
    """Degree cutoff K for an eta-accurate truncation (see truncation_cutoffs)."""
    return truncation_cutoffs(n, t, eta).degree


def hecke_funk_gamma(n: int, k: int, tol: float = 1e-10) -> float:
    """gamma_k = integral over [-1,1] of (1-t)^(1/2) (1-t^2)^((n-2)/2) P_{k,n}(t).

    Computed by adaptive Gauss-Legendre bisection to absolute tolerance tol;
    the integrand is continuous for n >= 2.
    """
    if n < 2:
        raise DomainError("gamma_k requires n >= 2 (endpoint singularity at n = 1)")
    if k < 0:
        raise DomainError("degree must be nonnegative")
    expo = 0.5 * (n - 2)

    def integrand(x):
        base = np.sqrt(np.maximum(1.0 - x, 0.0))
        if expo != 0.0:
            base = base * np.maximum(1.0 - x * x, 0.0) ** expo
        return base * legendre_eval(n, k, x)

    return adaptive_gauss_legendre(integrand, -1.0, 1.0, tol=tol, max_depth=40)
