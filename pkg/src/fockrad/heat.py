"""Heat and Fejer kernels, heat convolution, and the kernel-versus-Gaussian estimates.

Fourier convention: F[g](xi) = int g(x) e^{-i xi x} dx, so the heat
kernel H(x) = sqrt(2/pi) e^{-2x^2} (time t = 1/8) has spectrum
e^{-xi^2/8}, and the unit-mass Fejer kernel sin^2(nx)/(pi n x^2) has the
triangle spectrum (1 - |xi|/(2n))_+.

For large n the eigenvalue kernel K(n, y^2) 2y is close to H(y - sqrt n),
so gamma_a(n) ~ (H * a)(sqrt n) with a restricted to the half-line.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf, erfc, sici

from .errors import DomainError
from .kernel import SQRT_2_OVER_PI, kernel_y, log_F_shift, stirling_remainder
from .quadrature import EPS, legendre_intervals, legendre_pieces
from .sampling import SampledFunction
from .symbols import Sampled, Symbol

HEAT_TIME = 0.125
CONV_NODES = 60
CONV_HALF_WIDTH = 6.0


def heat(x, t: float = HEAT_TIME):
    """(4 pi t)^{-1/2} exp(-x^2 / (4t)); t = 1/8 gives sqrt(2/pi) e^{-2x^2}."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-x * x / (4 * t)) / math.sqrt(4 * math.pi * t)
    return float(out) if out.ndim == 0 else out


def heat_spectrum(xi, t: float = HEAT_TIME):
    xi = np.asarray(xi, dtype=float)
    out = np.exp(-t * xi * xi)
    return float(out) if out.ndim == 0 else out


def heat_outer_mass(delta: float, t: float = HEAT_TIME) -> float:
    """Mass of the heat kernel outside [-delta, delta]."""
    return float(erfc(delta / math.sqrt(4 * t)))


def fejer(n: float, x):
    """sin^2(n x) / (pi n x^2), with value n/pi at x = 0 (unit mass)."""
    if not n > 0:
        raise DomainError("Fejer order must be positive")
    x = np.asarray(x, dtype=float)
    out = n / math.pi * np.sinc(n * x / math.pi) ** 2
    return float(out) if out.ndim == 0 else out


def fejer_spectrum(n: float, xi):
    xi = np.asarray(xi, dtype=float)
    out = np.clip(1.0 - np.abs(xi) / (2.0 * n), 0.0, None)
    return float(out) if out.ndim == 0 else out


def fejer_outer_mass(n: float, delta: float) -> float:
    """int_{|x| > delta} fejer(n, x) dx in closed form (via the sine integral)."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    z = n * delta
    si, _ = sici(2 * z)
    return float(2 / math.pi * (math.sin(z) ** 2 / z + math.pi / 2 - si))


# --- convolution ----------------------------------------------------------------------

def _sampled_heat_integral(g: SampledFunction, x: float, lower: float) -> complex:
    """int_{lower}^{inf} g(y) H(x - y) dy, exact for piecewise-linear g with held ends."""
    s = g.samples
    y = g.nodes
    lo_cut, hi_cut = x - 10.0, x + 10.0
    k0 = max(int(np.searchsorted(y, max(lo_cut, lower), side="right")) - 1, 0)
    k1 = min(int(np.searchsorted(y, hi_cut, side="left")), y.size - 1)
    r2 = math.sqrt(2.0)

    def mass(a, b):
        # int_a^b H(x - y) dy
        return 0.5 * (erf(r2 * (b - x)) - erf(r2 * (a - x)))

    total = 0j
    if k1 > k0:
        yc = y[k0:k1 + 1].copy()
        vc = s[k0:k1 + 1].copy()
        if yc[0] < lower:
            # cut the first cell at the domain edge
            frac = (lower - yc[0]) / g.step
            vc[0] = vc[0] * (1 - frac) + vc[1] * frac
            yc[0] = lower
        t0, t1 = yc[:-1] - x, yc[1:] - x
        dy = yc[1:] - yc[:-1]
        slope = np.where(dy > 0, np.diff(vc) / np.where(dy > 0, dy, 1.0), 0.0)
        m = 0.5 * (erf(r2 * t1) - erf(r2 * t0))
        first = SQRT_2_OVER_PI * (np.exp(-2 * t0 * t0) - np.exp(-2 * t1 * t1)) / 4
        total += np.sum((vc[:-1] - slope * t0) * m + slope * first)
    start = max(y[k0], lower)
    if k0 == 0 and start > lower:
        total += s[0] * mass(lower, start)
    if k1 == y.size - 1:
        total += s[-1] * 0.5 * erfc(r2 * (y[-1] - x))
    return complex(total)


def convolve_heat(a, x, *, half_line: bool = True):
    """(H * a)(x) with a restricted to [0, inf) (or the whole line).

    ``a`` may be a Symbol, a SampledFunction or a vectorised callable.
    Sampled pieces are integrated exactly; everything else with a
    60-node Gauss-Legendre rule per piece on [x-6, x+6], split at the
    symbol's discontinuities.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([_convolve_one(a, float(xi), half_line) for xi in xs])
    return complex(out[0]) if np.ndim(x) == 0 else out


def _convolve_one(a, x: float, half_line: bool) -> complex:
    lower = 0.0 if half_line else -math.inf
    if isinstance(a, SampledFunction):
        return _sampled_heat_integral(a, x, lower)
    smooth, breaks = [], []
    total = 0j
    if isinstance(a, Symbol):
        if not half_line:
            raise DomainError("symbols live on [0, inf); use half_line=True")
        for w, leaf in a.linear_parts():
            if isinstance(leaf, Sampled):
                total += w * _sampled_heat_integral(leaf.grid, x, lower)
            else:
                smooth.append((w, leaf))
                breaks.extend(leaf.breakpoints)

        def f(y):
            acc = np.zeros(y.shape, dtype=complex)
            for w, leaf in smooth:
                acc += w * leaf._eval(y)
            return acc
    else:
        smooth = [(1.0, a)]
        f = a
    if smooth:
        lo = max(x - CONV_HALF_WIDTH, lower)
        hi = x + CONV_HALF_WIDTH
        if hi <= lo:
            return total
        edges = sorted({lo, hi} | {b for b in breaks if lo < b < hi})
        v, _ = legendre_pieces(lambda y: f(y) * heat(x - y), edges, CONV_NODES)
        total += v
    return complex(total)


def asymptotic_gamma(spec: Symbol, n: int) -> complex:
    """(H * a)(sqrt n), a restricted to the half-line."""
    return convolve_heat(spec, math.sqrt(n))


# --- |kernel - Gaussian| integrals --------------------------------------------------

_U_SPLITS = (-16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0)


def _abs_expm1_integral(logratio, base, lo: float, hi: float, *, grid: int = 4000):
    """int_lo^hi base(u) |expm1(logratio(u))| du and an error estimate.

    The integrand has kinks where logratio changes sign; those roots are
    bracketed on a dense grid, refined with brentq, and used as piece
    boundaries together with a fixed ladder of split points.
    """
    u = np.linspace(lo, hi, grid)
    L = logratio(u)
    sign = np.sign(L)
    roots = []
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        roots.append(brentq(lambda t: float(logratio(np.array([t]))[0]), u[i], u[i + 1],
                            xtol=1e-15, rtol=4 * EPS))
    edges = sorted({lo, hi} | {r for r in roots if lo < r < hi}
                   | {s for s in _U_SPLITS if lo < s < hi})

    def g(t):
        return base(t) * np.abs(np.expm1(logratio(t)))

    a, b = np.array(edges[:-1]), np.array(edges[1:])
    coarse, _ = legendre_intervals(g, a, b, 64)
    fine, mag = legendre_intervals(g, a, b, 128)
    return float(fine), float(abs(fine - coarse) + 64 * EPS * mag)


def convoluzation_error(n: int, *, with_error: bool = False):
    """int_0^inf |K(n, y^2) 2y - sqrt(2/pi) e^{-2(sqrt n - y)^2}| dy."""
    if n < 1:
        raise DomainError("n must be >= 1")
    x = math.sqrt(n)
    mu = float(stirling_remainder(n))

    def logratio(u):
        uu = np.maximum(u, -x)
        return log_F_shift(x, uu) - mu + 2 * uu * uu

    def base(u):
        return SQRT_2_OVER_PI * np.exp(-2 * u * u)

    val, err = _abs_expm1_integral(logratio, base, -x, 12.0)
    # both functions are below e^{-140} beyond u = 12
    return (val, err) if with_error else val


def near_diagonal_distance(x: float, h: float = 2.0) -> float:
    """int_{-h}^{h} |F(x, x+u) - e^{-2u^2}| du (requires h <= x)."""
    if h > x:
        raise DomainError("need h <= x")

    def logratio(u):
        return log_F_shift(x, u) + 2 * u * u

    return _abs_expm1_integral(logratio, lambda u: np.exp(-2 * u * u), -h, h)[0]


def near_diagonal_bound(x: float, h: float = 2.0) -> float:
    return 2 * h * math.expm1(5 * h ** 3 / x)


def far_diagonal_mass(x: float, h: float) -> float:
    """int over u >= -x with |u| > h of F(x, x+u)."""
    def f(u):
        return np.exp(log_F_shift(x, np.maximum(u, -x)))

    pieces = []
    if -x < -h:
        pieces.append((-x, -h))
    pieces.append((h, h + 40.0))
    total = 0.0
    for a, b in pieces:
        edges = np.unique(np.clip(np.concatenate([[a], np.arange(math.ceil(a), b, 2.0), [b]]), a, b))
        v, _ = legendre_pieces(f, edges, 64)
        total += float(v)
    return total


def far_diagonal_bound(h: float) -> float:
    """2 int_h^inf e^{-u^2/2} du."""
    return math.sqrt(2 * math.pi) * float(erfc(h / math.sqrt(2)))


def kernel_F_distance(n: int) -> float:
    """int_0^inf |K(n, y^2) 2y - sqrt(2/pi) F(sqrt n, y)| dy by quadrature."""
    if n < 1:
        raise DomainError("n must be >= 1")
    x = math.sqrt(n)

    def f(y):
        kf = SQRT_2_OVER_PI * np.exp(log_F_shift(x, y - x))
        return np.abs(kernel_y(n, y) - kf)

    lo, hi = max(0.0, x - 14.0), x + 14.0
    edges = np.linspace(lo, hi, 15)
    v, _ = legendre_pieces(f, edges, 64)
    return float(v)
