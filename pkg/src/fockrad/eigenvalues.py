"""Eigenvalue sequences gamma_a(n) = int_0^inf a(y) K(n, y^2) 2y dy.

The main path integrates over a window of half-width 9 around the kernel
peak (in the scaled variable when the symbol grows like exp(delta y^2))
with a piecewise 128-node Gauss-Legendre rule; running the same rule with
doubled node counts gives the quadrature error.  Step-like parts of a
symbol are merged into a single piecewise-constant function first, and
sampled (piecewise-linear) parts are integrated exactly cell by cell with
regularized incomplete gamma functions.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln

from .errors import AccuracyError, ClosedFormFallback, DivergenceError, DomainError, SpecError
from .kernel import kernel_y
from .quadrature import EPS, legendre_intervals
from .sampling import SampledFunction
from .symbols import (
    ROTATION_COEFFICIENT,
    AveragedSymbol,
    Constant,
    Cosine,
    Envelope,
    ExpComplex,
    Indicator,
    PiecewiseConstant,
    Power,
    Sampled,
    Sum,
    Symbol,
)

HALF_WIDTH = 9.0
SMALL_N = 25
KUMMER_MAX_N = 200


@dataclass(frozen=True, eq=False)
class EigenSequence:
    values: np.ndarray
    err: np.ndarray
    symbol: Symbol | None = None

    def __len__(self):
        return self.values.size

    def __getitem__(self, n):
        return self.values[n]


# --- windows and tails ---------------------------------------------------------

def window(n: int, env: Envelope) -> tuple[float, float, float]:
    """(lo, hi, peak) in y for index n and the symbol envelope."""
    s = 1.0 - env.delta
    zc = math.sqrt(n + env.power / 2)
    zlo = 0.0 if n < SMALL_N else max(0.0, zc - HALF_WIDTH)
    zhi = zc + HALF_WIDTH
    scale = 1.0 / math.sqrt(s)
    return zlo * scale, zhi * scale, zc * scale


def tail_bound(n: int, env: Envelope, lo: float, hi: float) -> float:
    """Bound on int |a| kernel_y(n, .) outside [lo, hi] from the envelope."""
    s = 1.0 - env.delta
    rlo, rhi = s * lo * lo, s * hi * hi
    parts = []
    for shift in ((0.0, env.power / 2) if env.power > 0 else (0.0,)):
        a = n + 1 + shift
        mass = (gammainc(a, rlo) if rlo > 0 else 0.0) + gammaincc(a, rhi)
        logc = math.log(env.scale) if env.scale > 0 else -math.inf
        logfac = -a * math.log(s) + gammaln(a) - gammaln(n + 1)
        parts.append(math.exp(logc + logfac) * mass if mass > 0 else 0.0)
    return float(sum(parts))


def _node_count(length: float) -> int:
    if length > 3.0:
        return 128
    return 64 if length > 1.0 else 32


def _windowed_quadrature(f, breaks, env: Envelope, n: int, ferr=None):
    """int f(y) kernel_y(n, y) dy over the window, plus an error bound.

    ``ferr``, if given, bounds the pointwise error of f; its kernel
    integral is added to the estimate.
    """
    lo, hi, peak = window(n, env)
    cuts = {lo, hi}
    if lo < peak < hi:
        cuts.add(peak)
    cuts.update(b for b in breaks if lo < b < hi)
    edges = np.array(sorted(cuts))

    def integrand(y):
        return f(y) * kernel_y(n, y)

    a, b = edges[:-1], edges[1:]
    ms = np.array([_node_count(L) for L in b - a])
    val, coarse, mag = 0j, 0j, 0.0
    val_err_extra = []
    for m in np.unique(ms):
        sel = ms == m
        c, _ = legendre_intervals(integrand, a[sel], b[sel], int(m))
        v, g = legendre_intervals(integrand, a[sel], b[sel], 2 * int(m))
        val += v
        coarse += c
        mag += g
        if ferr is not None:
            e, _ = legendre_intervals(lambda y: ferr(y) * kernel_y(n, y), a[sel], b[sel], 2 * int(m))
            val_err_extra.append(abs(e))
    err = sum(val_err_extra) + abs(val - coarse) + 64 * EPS * mag + tail_bound(n, env, lo, hi)
    return complex(val), float(err)


def _cell_masses(a: float, r: np.ndarray) -> np.ndarray:
    """P(a, r[k+1]) - P(a, r[k]) without cancellation in the upper tail."""
    p = gammainc(a, r)
    q = gammaincc(a, r)
    upper = r[:-1] >= a
    return np.where(upper, q[:-1] - q[1:], p[1:] - p[:-1])


def _gamma_sampled(grid: SampledFunction, n: int, lo: float, hi: float):
    """Exact gamma for a piecewise-linear symbol (ends held), cut to [lo, hi]."""
    s = grid.samples
    y = grid.nodes
    a1, a2 = n + 1.0, n + 1.5
    g = math.exp(gammaln(a2) - gammaln(a1))
    k0 = max(int(np.searchsorted(y, lo, side="right")) - 1, 0)
    k1 = min(int(np.searchsorted(y, hi, side="left")), y.size - 1)
    total = 0j
    if k1 > k0:
        yc = y[k0:k1 + 1]
        vc = s[k0:k1 + 1]
        r = yc * yc
        dp1 = _cell_masses(a1, r)
        dp2 = _cell_masses(a2, r)
        slope = np.diff(vc) / grid.step
        y0 = yc[:-1]
        cells = (vc[:-1] - slope * y0) * dp1 + slope * g * dp2
        total += np.sum(cells)
    # held end values; only the parts reaching into the window matter
    r_first, r_last = y[k0] ** 2, y[k1] ** 2
    if k0 == 0 and y[0] > 0:
        total += s[0] * gammainc(a1, r_first)
    if k1 == y.size - 1:
        total += s[-1] * gammaincc(a1, r_last)
    # mass neglected on the cut side(s)
    outside = 0.0
    if k0 > 0:
        outside += gammainc(a1, r_first)
    if k1 < y.size - 1:
        outside += gammaincc(a1, r_last)
    err = float(np.abs(s).max()) * outside + 64 * EPS * float(np.abs(s).max())
    return complex(total), err


def _split_parts(spec: Symbol):
    """Partition a symbol into (step-like, sampled, other) weighted leaves."""
    steps, sampled, other = [], [], []
    for w, leaf in spec.linear_parts():
        if isinstance(leaf, (Constant, Indicator, PiecewiseConstant)):
            steps.append((w, leaf))
        elif isinstance(leaf, Sampled):
            sampled.append((w, leaf))
        else:
            other.append((w, leaf))
    return steps, sampled, other


def merge_steps(steps) -> PiecewiseConstant | None:
    """Collapse a weighted sum of step-like symbols into one piecewise constant."""
    if not steps:
        return None
    knots = sorted({b for _, leaf in steps for b in leaf.breakpoints})
    if knots:
        k = np.array(knots)
        probes = np.concatenate([[k[0] / 2], 0.5 * (k[:-1] + k[1:]), [k[-1] + 1.0]])
    else:
        probes = np.array([1.0])
    vals = np.zeros(probes.size, dtype=complex)
    for w, leaf in steps:
        vals += w * leaf(probes)
    return PiecewiseConstant(tuple(knots), tuple(complex(v) for v in vals))


def _check_growth(spec: Symbol) -> Envelope:
    env = spec.envelope
    if env.delta >= 1:
        raise DivergenceError(f"symbol grows like exp({env.delta} y^2); gamma diverges")
    return env


def gamma(spec: Symbol, n: int, *, tol: float = 1e-6) -> tuple[complex, float]:
    """gamma_a(n) and an absolute error estimate.

    Raises AccuracyError (carrying the best estimate) if the estimate
    exceeds ``tol * max(1, |value|)``.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    _check_growth(spec)
    steps, sampled, other = _split_parts(spec)
    total, err = 0j, 0.0

    smooth = []
    merged = merge_steps(steps)
    if merged is not None:
        smooth.append((1.0, merged))
    smooth.extend(other)
    if smooth:
        env = Sum(tuple(smooth)).envelope
        breaks = sorted({b for _, leaf in smooth for b in leaf.breakpoints})

        def f(y):
            out = np.zeros(y.shape, dtype=complex)
            for w, leaf in smooth:
                out += w * leaf._eval(y)
            return out

        v, e = _windowed_quadrature(f, breaks, env, n)
        total += v
        err += e
    for w, leaf in sampled:
        lo, hi, _ = window(n, Envelope(1.0, 0.0, 0.0))
        v, e = _gamma_sampled(leaf.grid, n, lo, hi)
        total += w * v
        err += abs(w) * e
    if not (np.isfinite(total.real) and np.isfinite(total.imag)) or not math.isfinite(err):
        raise AccuracyError(f"gamma({n}) overflowed", value=total, err=math.inf)
    if err > tol * max(1.0, abs(total)):
        raise AccuracyError(f"gamma({n}) error estimate {err:.3g} exceeds tolerance",
                            value=total, err=err)
    return total, err


def gamma_prefix(spec: Symbol, N: int, *, tol: float = 1e-6) -> EigenSequence:
    """gamma(spec, n) for n = 0..N."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    vals = np.empty(N + 1, dtype=complex)
    errs = np.empty(N + 1)
    for n in range(N + 1):
        vals[n], errs[n] = gamma(spec, n, tol=tol)
    return EigenSequence(vals, errs, spec)


def gamma_values(spec: Symbol, ns, *, tol: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """gamma at arbitrary indices (values, errors)."""
    ns = np.asarray(ns, dtype=int)
    vals = np.empty(ns.size, dtype=complex)
    errs = np.empty(ns.size)
    for i, n in enumerate(ns.ravel()):
        vals[i], errs[i] = gamma(spec, int(n), tol=tol)
    return vals, errs


# --- closed forms -------------------------------------------------------------

def kummer_m(a: float, b: float, z: float, *, max_terms: int = 100000) -> tuple[float, float]:
    """Confluent hypergeometric M(a, b, z) for real arguments by its power series.

    Terms are summed with math.fsum; the series stops once three
    consecutive terms fall below 1e-16 relative to the partial sum.
    Returns (value, estimated rounding loss).
    """
    term = 1.0
    terms = [term]
    small = 0
    k = 0
    while k < max_terms:
        term *= (a + k) / (b + k) * z / (k + 1)
        k += 1
        terms.append(term)
        if term == 0.0:
            break
        partial = math.fsum(terms) if k % 16 == 0 else None
        ref = abs(partial) if partial is not None else abs(terms[0])
        if abs(term) < 1e-16 * max(ref, 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        return math.fsum(terms), math.inf
    # each term carries a few ulps of relative error from the recurrence
    loss = EPS * math.fsum(abs(t) for t in terms)
    return math.fsum(terms), loss


def gamma_cosine_closed(n: int, frequency: float = 1.0, *, rtol: float = 1e-9) -> float:
    """gamma of cos(frequency * y): M(n+1, 1/2, -frequency^2/4)."""
    if n <= KUMMER_MAX_N:
        val, loss = kummer_m(n + 1.0, 0.5, -frequency * frequency / 4)
        if loss <= rtol * max(1.0, abs(val)):
            return val
        warnings.warn(f"Kummer series lost precision at n={n}; using quadrature",
                      ClosedFormFallback, stacklevel=2)
    v, _ = gamma(Cosine(frequency), n, tol=1e-8)
    return v.real


def _incomplete_diff(n: int, alpha: float, beta: float) -> float:
    a = n + 1.0
    ra, rb = alpha * alpha, beta * beta
    if math.isinf(beta):
        return float(gammaincc(a, ra))
    if ra >= a:
        return float(gammaincc(a, ra) - gammaincc(a, rb))
    return float(gammainc(a, rb) - gammainc(a, ra))


def rotation_closed(n: int) -> complex:
    """e^{-i(n+1)pi/4}, reduced mod 8 so the octant values are exact."""
    k = (n + 1) % 8
    h = math.sqrt(0.5)
    table = [1, complex(h, -h), -1j, complex(-h, -h), -1, complex(-h, h), 1j, complex(h, h)]
    return complex(table[k])


def gamma_closed(name: str, n: int, *, alpha: float = 0.0, beta: float = 1.0,
                 frequency: float = 1.0) -> complex:
    """Closed forms for the named families ``cosine``, ``indicator``, ``rotation``.

    ``exp83`` is accepted as an alias of ``rotation``.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if name == "cosine":
        return complex(gamma_cosine_closed(n, frequency))
    if name == "indicator":
        return complex(_incomplete_diff(n, alpha, beta))
    if name in ("rotation", "exp83"):
        return rotation_closed(n)
    raise SpecError("name", f"no closed form named {name!r}")


def gamma_closed_spec(spec: Symbol, n: int) -> complex:
    """Closed-form gamma for symbols built from kinds that have one."""
    if isinstance(spec, Constant):
        return complex(spec.value)
    if isinstance(spec, Indicator):
        return complex(_incomplete_diff(n, spec.alpha, spec.beta))
    if isinstance(spec, PiecewiseConstant):
        edges = [0.0, *spec.knots, math.inf]
        return complex(sum(v * _incomplete_diff(n, a, b)
                           for v, a, b in zip(spec.values, edges[:-1], edges[1:])))
    if isinstance(spec, Cosine):
        return complex(gamma_cosine_closed(n, spec.frequency))
    if isinstance(spec, Power):
        p = spec.exponent
        return complex(math.exp(gammaln(n + 1 + p / 2) - gammaln(n + 1)))
    if isinstance(spec, ExpComplex):
        lam = complex(spec.coefficient)
        if lam == ROTATION_COEFFICIENT:
            return rotation_closed(n)
        if lam.real >= 1:
            raise DivergenceError("exp-complex with Re(coefficient) >= 1 diverges")
        return cmath.exp(-(n + 1) * cmath.log(1 - lam))
    if isinstance(spec, Sum):
        return sum(complex(w) * gamma_closed_spec(s, n) for w, s in spec.terms)
    raise SpecError("kind", f"no closed form for kind {spec.kind!r}")


# --- through the averages ---------------------------------------------------------

def gamma_via_averages(spec: Symbol, j: int, n: int, *, tol: float = 1e-6) -> complex:
    """gamma_a(n) computed as the (n-j)-th eigenvalue of y -> B_j a(y^2)."""
    if j < 0 or n < j:
        raise DomainError("need 0 <= j <= n")
    if j == 0:
        return gamma(spec, n, tol=tol)[0]
    _check_growth(spec)
    avg = AveragedSymbol(spec, j)
    env = avg.envelope_r

    def f(y):
        return avg.evaluate(y * y)[0]

    def ferr(y):
        return avg.evaluate(y * y)[1]

    v, e = _windowed_quadrature(f, avg.breakpoints_y, env, n - j, ferr)
    if not math.isfinite(e) or e > tol * max(1.0, abs(v)):
        raise AccuracyError(f"average path for n={n}, j={j} did not converge", value=v, err=e)
    return v
