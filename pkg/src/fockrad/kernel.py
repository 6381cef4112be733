"""Gamma-density kernel K(n, r) = r^n e^{-r} / n! and related quantities.

Everything is evaluated in the log domain.  The y-form of the kernel is
written through the off-diagonal ratio

    F(x, y) = y^(2x^2+1) e^(x^2) / (x^(2x^2+1) e^(y^2)),

using the identity  K(n, y^2) 2y = sqrt(2/pi) e^{-mu(n)} F(sqrt(n), y),
where mu(n) is the Stirling remainder of ln n!.  Around the peak this
keeps full relative accuracy even for n ~ 1e6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli-number coefficients of the Stirling series for ln n! - mu(n).
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188)


def _stirling_series(n):
    inv2 = 1.0 / (n * n)
    acc = np.zeros_like(n)
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc / n


def _small_remainders() -> np.ndarray:
    """mu(1..19) by stepping down from mu(20).

    mu(k) - mu(k+1) = (k + 1/2) ln(1 + 1/k) - 1 = sum_j x^(2j) / (2j + 1) with
    x = 1/(2k + 1); all terms are positive, so nothing cancels.
    """
    out = np.empty(21)
    out[20] = _stirling_series(np.array(20.0))
    for k in range(19, 0, -1):
        x2 = 1.0 / (2 * k + 1) ** 2
        step = sum(x2 ** j / (2 * j + 1) for j in range(1, 40))
        out[k] = out[k + 1] + step
    return out


_MU_SMALL = _small_remainders()


def stirling_remainder(n):
    """mu(n) = ln n! - (n + 1/2) ln n + n - ln sqrt(2 pi), for n >= 1.

    Uses the asymptotic series for n >= 20 (truncation < 1e-17).  Below
    that, integers come from a table built with a cancellation-free
    recurrence and other reals from the direct difference.
    """
    n = np.asarray(n, dtype=float)
    if np.any(n < 1):
        raise DomainError("stirling_remainder needs n >= 1")
    out = np.empty_like(n)
    big = n >= 20
    out[big] = _stirling_series(n[big])
    ns = n[~big]
    direct = gammaln(ns + 1) - (ns + 0.5) * np.log(ns) + ns - _HALF_LOG_2PI
    whole = ns == np.floor(ns)
    out[~big] = np.where(whole, _MU_SMALL[np.where(whole, ns, 20).astype(int)], direct)
    return out[()] if out.ndim == 0 else out


def log_kernel(n: int, r):
    """ln K(n, r) = n ln r - r - ln Gamma(n+1)."""
    r_arr = np.asarray(r, dtype=float)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if np.any(r_arr < 0) or (n > 0 and np.any(r_arr == 0)):
        raise DomainError("log_kernel needs r > 0 (r = 0 only for n = 0)")
    if n == 0:
        out = -r_arr
    else:
        # n ln(r/n) - (r - n) = n (log1p(t) - t), t = r/n - 1: no cancellation near the peak
        q = r_arr / n
        t = q - 1.0
        with np.errstate(divide="ignore"):
            far = n * np.log(np.where(q > 0, q, 1.0)) - n * t
        shifted = np.where(np.abs(t) < 0.5, n * log1p_minus(t), far)
        out = shifted - 0.5 * math.log(2 * math.pi * n) - stirling_remainder(n)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def kernel(n: int, r):
    """K(n, r), with K(n, 0) = 0 for n > 0."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("kernel needs r >= 0")
    y = np.sqrt(r_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(y > 0, _kernel_y(n, y) / (2 * np.where(y > 0, y, 1.0)),
                       1.0 if n == 0 else 0.0)
    return float(out) if out.ndim == 0 else out


def log1p_minus(t):
    """log(1+t) - t, accurate for small |t|."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 0.1
    out = np.empty_like(t)
    ts = t[small]
    acc = np.zeros_like(ts)
    for k in range(22, 1, -1):
        acc = acc * -ts + 1.0 / k
    out[small] = -ts * ts * acc
    tb = t[~small]
    with np.errstate(divide="ignore"):
        out[~small] = np.log1p(tb) - tb
    return out


def log_F_shift(x: float, u):
    """ln F(x, x+u) = (2x^2+1)(log1p(u/x) - u/x) + u/x - u^2.

    Equal to -inf at u = -x.
    """
    if not x > 0:
        raise DomainError("log_F_shift needs x > 0")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < -x):
        raise DomainError("log_F_shift needs u >= -x")
    t = u_arr / x
    out = (2 * x * x + 1) * log1p_minus(t) + t - u_arr * u_arr
    return float(out) if out.ndim == 0 else out


def log_F(x: float, y):
    """ln F(x, y) for y >= 0."""
    return log_F_shift(x, np.asarray(y, dtype=float) - x)


def _kernel_y(n: int, y: np.ndarray) -> np.ndarray:
    if n == 0:
        return 2 * y * np.exp(-y * y)
    x = math.sqrt(n)
    lf = log_F_shift(x, np.maximum(y - x, -x))
    return SQRT_2_OVER_PI * np.exp(lf - stirling_remainder(n))


def kernel_y(n: int, y):
    """K(n, y^2) 2y, the kernel in the radius variable."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("kernel_y needs y >= 0")
    out = _kernel_y(int(n), y_arr)
    return float(out) if out.ndim == 0 else out


def log_kernel_y(n: int, y):
    """ln(K(n, y^2) 2y); -inf at y = 0."""
    y_arr = np.asarray(y, dtype=float)
    if n == 0:
        with np.errstate(divide="ignore"):
            out = math.log(2) + np.log(y_arr) - y_arr * y_arr
    else:
        x = math.sqrt(n)
        out = (math.log(SQRT_2_OVER_PI) - stirling_remainder(n)
               + log_F_shift(x, np.maximum(y_arr - x, -x)))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class StirlingBracket:
    """Bounds n^n e^-n sqrt(2 pi n) <= n! <= that * e^(1/(12n))."""

    n: int
    lower: float
    upper: float
    log_lower: float
    log_upper: float

    def contains_factorial(self) -> bool:
        if self.n <= 170:
            # float vs int comparison in Python is exact
            f = math.factorial(self.n)
            return self.lower <= f <= self.upper
        # the upper margin is ~1/(360 n^3), far below lgamma's rounding,
        # so compare the Stirling remainder instead of ln n! itself
        mu = float(stirling_remainder(self.n))
        return 0.0 <= mu <= 1.0 / (12 * self.n)


def stirling_bracket(n: int) -> StirlingBracket:
    if n < 1:
        raise DomainError("stirling_bracket needs n >= 1")
    lo = n * math.log(n) - n + 0.5 * math.log(2 * math.pi * n)
    hi = lo + 1.0 / (12 * n)
    with np.errstate(over="ignore"):
        lower = math.exp(lo) if lo < 709 else math.inf
        upper = math.exp(hi) if hi < 709 else math.inf
    return StirlingBracket(n, lower, upper, lo, hi)
