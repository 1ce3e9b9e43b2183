"""Closed-form parameter formulas tying the target scale eps and failure
probability delta to the generator count k, the word length l, the net radius
r, and the diffusion time t.

The constant C_n entering r is not pinned down by the theory; it is exposed
as a configurable input with default 1.0 rather than silently invented.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

_EIGHT_LN2 = 8.0 * math.log(2.0)


def compute_a_n(n: int) -> float:
    """The dimension constant a_n = 2*log2(log2(5n)) / log2(5n), for n >= 2."""
    if n < 2:
        raise DomainError("a_n is defined for sphere dimension n >= 2")
    outer = math.log2(5 * n)
    return 2.0 * math.log2(outer) / outer


def _check_eps(n: int, eps: float):
    limit = 1.0 / (3.0 * n)
    if not 0.0 < eps < limit:
        raise DomainError(f"eps must lie in (0, 1/(3n)) = (0, {limit:.6g}); got {eps!r}")


def _check_delta(delta: float):
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1); got {delta!r}")


def compute_r(n: int, eps: float, c_n: float) -> float:
    """Net radius r = 2*eps*sqrt(ln(3*C_n / eps^(2n-1)))."""
    if n < 2:
        raise DomainError("r formula requires n >= 2")
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")
    if c_n <= 0.0:
        raise DomainError("C_n must be positive")
    argument = 3.0 * c_n / eps ** (2 * n - 1)
    if argument <= 1.0:
        raise DomainError("3*C_n must exceed eps^(2n-1) for the logarithm to be positive")
    return 2.0 * eps * math.sqrt(math.log(argument))


def _k_real(n: int, eps: float, delta: float) -> float:
    if n < 2:
        raise DomainError("k formula requires n >= 2")
    _check_eps(n, eps)
    _check_delta(delta)
    a = compute_a_n(n)
    inner = (n + 4) + 2.0 * math.log(1.0 / delta) \
        + 6.0 * n * (1.0 + a) * math.log(1.0 / eps) - math.lgamma(n + 1)
    return _EIGHT_LN2 * inner


def compute_k(n: int, eps: float, delta: float) -> int:
    """Generator count: ceil(8 ln2 ((n+4) + 2 ln(1/delta) + 6n(1+a_n) ln(1/eps) - ln n!))."""
    return math.ceil(_k_real(n, eps, delta))


def _l_real(n: int, eps: float, r: float, dimension_factor: bool = True) -> float:
    if n < 2:
        raise DomainError("l formula requires n >= 2")
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    a = compute_a_n(n)
    second = (4.0 + 3.0 * a) * math.log2(1.0 / eps)
    if dimension_factor:
        second *= n
    return 0.5 * n * math.log2(1.0 / (r * eps)) + second


def compute_l(n: int, eps: float, r: float) -> int:
    """Word length: ceil(n/2 log2(1/(r eps)) + (4+3a_n) n log2(1/eps))."""
    return math.ceil(_l_real(n, eps, r, dimension_factor=True))


@dataclass(frozen=True)
class TheoremParams:
    """Bundle of every derived parameter for one (n, eps, delta, C_n) choice.

    l_alt is the word length from the weaker published variant that omits the
    dimension factor on the second term; both are surfaced so the discrepancy
    between the two statements stays visible.
    """

    n: int
    eps: float
    delta: float
    c_n: float
    a_n: float
    t: float
    r: float
    k: int
    l: int
    l_alt: int
    log2_words: float

    def __post_init__(self):
        if not 0.0 < self.a_n < 2.0:
            raise DomainError("a_n must lie in (0, 2)")
        if self.t != self.eps * self.eps:
            raise DomainError("diffusion time must equal eps^2")
        if self.r <= 0.0 or self.k < 1 or self.l < 1:
            raise DomainError("derived parameters out of range")


def theorem_params(n: int, eps: float, delta: float, c_n: float = 1.0) -> TheoremParams:
    """Evaluate all parameter formulas and report log2((2k)^l) overflow-safe."""
    r = compute_r(n, eps, c_n)
    k = compute_k(n, eps, delta)
    l = compute_l(n, eps, r)
    l_alt = math.ceil(_l_real(n, eps, r, dimension_factor=False))
    return TheoremParams(
        n=n,
        eps=float(eps),
        delta=float(delta),
        c_n=float(c_n),
        a_n=compute_a_n(n),
        t=float(eps) * float(eps),
        r=r,
        k=k,
        l=l,
        l_alt=l_alt,
        log2_words=l * (1.0 + math.log2(k)),
    )
