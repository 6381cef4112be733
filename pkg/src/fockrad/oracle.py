"""Slow reference computations that share no code path with the fast ones.

* ``toeplitz_entry`` integrates a radial symbol times e^{ik theta} against
  two Fock monomials over the plane (radial Gauss-Legendre x angular
  trapezoid), so diagonality is observed rather than assumed.
* ``brute_kappa`` applies the trapezoid rule to |K(m, .) - K(n, .)|.
* ``brute_gamma`` runs adaptive QUADPACK integration in the r variable.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import DomainError
from .metrics import crossing_point
from .quadrature import gauss_legendre
from .symbols import Symbol

ANGULAR_NODES = 64
RADIAL_NODES = 120


def toeplitz_entry(spec: Symbol, k: int, m: int, n: int) -> complex:
    """<T_phi e_m, e_n> for phi(z) = a(|z|) (z/|z|)^k and e_j = z^j / sqrt(j!).

    The Fock measure is e^{-|z|^2} dA / pi.
    """
    if not (0 <= m <= 40 and 0 <= n <= 40):
        raise DomainError("toeplitz_entry supports 0 <= m, n <= 40")
    R = math.sqrt(m + n + 1) + 9.0
    cuts = sorted({0.0, R} | {b for b in spec.breakpoints if 0 < b < R}
                  | set(np.arange(1.0, R, 2.0)))
    x, w = gauss_legendre(RADIAL_NODES)
    rs, rw = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        rs.append(a + 0.5 * (b - a) * (x + 1))
        rw.append(0.5 * (b - a) * w)
    r = np.concatenate(rs)
    wr = np.concatenate(rw)
    theta = 2 * math.pi * np.arange(ANGULAR_NODES) / ANGULAR_NODES
    wt = 2 * math.pi / ANGULAR_NODES

    # plane points z = r e^{i theta}; phi evaluated there, monomials z^m conj(z)^n
    z = r[:, None] * np.exp(1j * theta[None, :])
    phi = spec(np.abs(z)) * np.exp(1j * k * np.angle(z))
    log_rad = ((m + n + 1) * np.log(r) - r * r
               - 0.5 * (gammaln(m + 1) + gammaln(n + 1)) - math.log(math.pi))
    angular = np.exp(1j * (m - n) * theta)[None, :]
    integrand = phi * angular * np.exp(log_rad)[:, None]
    return complex(np.sum(integrand * wr[:, None]) * wt)


def _abs_diff(m: int, n: int, r: np.ndarray) -> np.ndarray:
    safe = np.where(r > 0, r, 1.0)
    lr = np.log(safe)

    def k(j):
        v = np.exp(j * lr - r - gammaln(j + 1))
        return np.where(r > 0, v, 1.0 if j == 0 else 0.0)

    return np.abs(k(m) - k(n))


def _trapezoid(f, a: float, b: float, N: int) -> float:
    x = np.linspace(a, b, N + 1)
    y = f(x)
    return float((b - a) / N * (y.sum() - 0.5 * (y[0] + y[-1])))


def brute_kappa(m: int, n: int, *, rtol: float = 1e-10) -> float:
    """Trapezoid integration of |K(m, r) - K(n, r)|, refined until stable."""
    if not (0 <= m <= 500 and 0 <= n <= 500):
        raise DomainError("brute_kappa supports 0 <= m, n <= 500")
    if m == n:
        return 0.0
    lo, hi = min(m, n), max(m, n)
    rs = crossing_point(lo, hi)
    R = hi + 40 * math.sqrt(hi + 1) + 60
    # segments: [0, r*] and [r*, R]; the kink at r* is a grid node
    segments = [(0.0, rs), (rs, R)]
    N = 4000
    prev = None
    while True:
        val = sum(_trapezoid(lambda r: _abs_diff(m, n, r), a, b, N) for a, b in segments)
        if prev is not None and abs(val - prev) <= rtol * max(val, 1e-300):
            # Richardson step for the O(h^2) trapezoid error
            return val + (val - prev) / 3
        if N > 2 ** 22:
            return val
        prev = val
        N *= 2


def brute_gamma(spec: Symbol, n: int) -> complex:
    """Adaptive quadrature of a(sqrt r) r^n e^{-r} / n! over r in [0, inf)."""
    if not 0 <= n <= 500:
        raise DomainError("brute_gamma supports 0 <= n <= 500")
    env = spec.envelope
    s = 1.0 - env.delta
    B = (n + env.power / 2 + 40 * math.sqrt(n + 1) + 60) / s
    pts = sorted({b * b for b in spec.breakpoints if 0 < b * b < B} | {float(n)} - {0.0})
    lg = gammaln(n + 1)

    def weight(r):
        if r <= 0:
            return 1.0 if n == 0 else 0.0
        return math.exp(n * math.log(r) - r - lg)

    def part(fn):
        total = 0.0
        edges = [0.0, *[p for p in pts if p < B], B]
        for a, b in zip(edges[:-1], edges[1:]):
            total += quad(fn, a, b, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
        total += quad(fn, B, math.inf, limit=200, epsabs=1e-14)[0]
        return total

    def f_re(r):
        return (spec(math.sqrt(r)) * weight(r)).real

    def f_im(r):
        return (spec(math.sqrt(r)) * weight(r)).imag

    return complex(part(f_re), part(f_im))
