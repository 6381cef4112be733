"""The square-root metric rho, the kernel distance kappa and moduli of continuity.

For m < n the densities K(m, .) and K(n, .) cross exactly once, at r*
with ln r* = (ln n! - ln m!) / (n - m).  Hence

    kappa(m, n) = 2 [P(m+1, r*) - P(n+1, r*)] = 2 sum_{k=m+1}^{n} K(k, r*),

the second form being a sum of positive Poisson weights, which is free
of the cancellation in the difference of incomplete gamma functions.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import DomainError
from .kernel import log1p_minus, stirling_remainder

_LOG_SQRT_2_OVER_PI = 0.5 * math.log(2.0 / math.pi)


def rho(m, n):
    """|sqrt(m) - sqrt(n)| (vectorised)."""
    out = np.abs(np.sqrt(np.asarray(m, dtype=float)) - np.sqrt(np.asarray(n, dtype=float)))
    return float(out) if out.ndim == 0 else out


def crossing_point(m: int, n: int) -> float:
    """r* where K(m, r*) = K(n, r*), for m < n."""
    if not 0 <= m < n:
        raise DomainError("need 0 <= m < n")
    d = n - m
    if d <= 1_000_000:
        # sum of logs keeps full relative accuracy of ln(n!/m!)
        log_ratio = float(np.sum(np.log(np.arange(m + 1, n + 1, dtype=float))))
    else:
        log_ratio = float(gammaln(n + 1) - gammaln(m + 1))
    return math.exp(log_ratio / d)


def kappa(m: int, n: int) -> float:
    """L1 distance between K(m, .) and K(n, .)."""
    m, n = int(m), int(n)
    if m < 0 or n < 0:
        raise DomainError("indices must be nonnegative")
    if m == n:
        return 0.0
    if m > n:
        m, n = n, m
    rs = crossing_point(m, n)
    # Poisson(r*) weights beyond 40 standard deviations are < 1e-300
    spread = 40.0 * math.sqrt(rs) + 40.0
    k_lo = max(m + 1, int(math.floor(rs - spread)))
    k_hi = min(n, int(math.ceil(rs + spread)))
    if k_lo > k_hi:
        return 0.0
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    x = np.sqrt(k)
    u = math.sqrt(rs) - x
    t = u / x
    # ln F(sqrt k, sqrt r*), vectorised over k
    lf = (2 * k + 1) * log1p_minus(t) + t - u * u
    logk = lf - stirling_remainder(k) - 0.5 * math.log(2 * math.pi * rs)
    return float(min(2.0, 2.0 * math.fsum(np.exp(logk))))


def kappa_gammainc(m: int, n: int) -> float:
    """Direct incomplete-gamma form 2[P(m+1, r*) - P(n+1, r*)] (for comparison)."""
    if m == n:
        return 0.0
    if m > n:
        m, n = n, m
    rs = crossing_point(m, n)
    return float(2.0 * (gammainc(m + 1, rs) - gammainc(n + 1, rs)))


def kappa_adjacent(n):
    """kappa(n-1, n) = 2 n^n e^{-n} / n! = sqrt(2/(pi n)) e^{-mu(n)} (vectorised)."""
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 1):
        raise DomainError("kappa_adjacent needs n >= 1")
    out = np.exp(_LOG_SQRT_2_OVER_PI - 0.5 * np.log(n_arr) - stirling_remainder(n_arr))
    return float(out) if out.ndim == 0 else out


def lipschitz_statistic(prefix) -> float:
    """sup_n sqrt(n+1) |s(n+1) - s(n)| over the prefix."""
    s = np.asarray(prefix, dtype=complex)
    if s.size < 2:
        raise DomainError("need at least two terms")
    n = np.arange(s.size - 1)
    return float(np.max(np.sqrt(n + 1.0) * np.abs(np.diff(s))))


def modulus_estimate(prefix, delta: float) -> float:
    """max |s_j - s_k| over pairs of the prefix with rho(j, k) <= delta.

    Exhaustive: for each offset d the admissible j form a tail
    j >= j_min(d), since rho(j, j+d) decreases in j.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    s = np.asarray(prefix, dtype=complex)
    N = s.size
    sq = np.sqrt(np.arange(N, dtype=float))
    best = 0.0
    for d in range(1, N):
        gaps = sq[d:] - sq[:-d]
        ok = gaps <= delta + 1e-12
        if not ok[-1]:
            # gaps shrink with j, so no pair at this or any larger offset qualifies
            break
        j0 = int(np.argmax(ok))
        diff = np.abs(s[d + j0:] - s[j0:N - d])
        best = max(best, float(diff.max()))
    return best


def sharp_constant_deviation(n):
    """sqrt(2/pi) - sqrt(n) kappa_adjacent(n), evaluated without cancellation."""
    mu = stirling_remainder(np.asarray(n, dtype=float))
    out = math.sqrt(2 / math.pi) * -np.expm1(-mu)
    return float(out) if np.ndim(out) == 0 else out


def sharp_constant_bound(n):
    """sqrt(2/pi) (1 - e^{-1/(12n)})."""
    n = np.asarray(n, dtype=float)
    out = math.sqrt(2 / math.pi) * -np.expm1(-1.0 / (12.0 * n))
    return float(out) if out.ndim == 0 else out
