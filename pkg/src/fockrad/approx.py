"""Constructing a symbol whose eigenvalue sequence approximates a target.

Tail stage: extend the target to h(x) = f(x^2) on a symmetric grid,
divide its spectrum by the heat spectrum e^{-xi^2/8} inside a band
|xi| <= Omega (smoothly windowed), and take the resulting l on [0, inf)
as a sampled symbol b.  Since gamma_b(n) ~ (H * b)(sqrt n) ~ h(sqrt n),
b reproduces the target for large n.

Head stage: the residual theta(n) = sigma(n) - gamma_b(n) on n <= N is
fitted by a combination of indicators 1[0, x_k], whose eigenvalues are
P(n+1, x_k^2) and die out factorially in n, by ridge least squares.
The fit also asks for zero beyond N so the correction does not leak
into the tail.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg
from scipy.special import gammainc

from .eigenvalues import gamma
from .errors import AliasingError, AmplificationError, ConditioningError, DomainError, InfeasibleError
from .oscillation import TargetSequence, h_transform, membership_report
from .sampling import SampledFunction
from .symbols import Constant, Indicator, Sampled, Sum, Symbol

MAX_BANDWIDTH = 12.0
WINDOWS = ("trapezoid", "triangle", "sharp")


@dataclass(frozen=True)
class PipelineConfig:
    bandwidth: float = 8.0
    step: float = 0.05
    extent: float | None = None  # default sqrt(n_check) + 40
    window: str = "trapezoid"
    n_check: int = 5000
    max_split: int = 200
    split_slack: float = 1.0
    ridge: float = 1e-10
    knots_per_octave: int = 4
    min_knot: float = 2.0 ** -10
    max_condition: float = 1e12

    def grid_extent(self) -> float:
        if self.extent is not None:
            return float(self.extent)
        return math.sqrt(self.n_check) + 40.0


def spectral_window(kind: str, xi, bandwidth: float):
    """Band-limiting weights W(xi), zero for |xi| > bandwidth.

    ``trapezoid`` is flat up to bandwidth/2 then linear (2 Fejer(B/2) -
    Fejer(B/4) in kernel terms), ``triangle`` is the Fejer triangle and
    ``sharp`` the ideal low-pass.
    """
    a = np.abs(np.asarray(xi, dtype=float)) / bandwidth
    if kind == "trapezoid":
        return np.clip(2.0 - 2.0 * a, 0.0, 1.0)
    if kind == "triangle":
        return np.clip(1.0 - a, 0.0, 1.0)
    if kind == "sharp":
        return (a <= 1.0).astype(float)
    raise DomainError(f"unknown window {kind!r}; choose from {WINDOWS}")


def check_band(step: float, bandwidth: float):
    if bandwidth > MAX_BANDWIDTH:
        raise AmplificationError(
            f"bandwidth {bandwidth} > {MAX_BANDWIDTH}: amplification e^(B^2/8) = "
            f"{math.exp(bandwidth ** 2 / 8):.3g}")
    if not bandwidth > 0:
        raise DomainError("bandwidth must be positive")
    if step > math.pi / bandwidth:
        raise AliasingError(f"grid step {step} exceeds pi/bandwidth = {math.pi / bandwidth:.4g}")


def deconvolve_heat(h: SampledFunction, bandwidth: float, window: str = "trapezoid",
                    *, closed: bool = True) -> SampledFunction:
    """l with (H * l) ~ h: spectral division by e^{-xi^2/8} inside the band.

    The grid is treated as one period.  With ``closed`` the last sample
    repeats the first (as for the even samples of h_transform) and is
    left out of the transform.
    """
    check_band(h.step, bandwidth)
    vals = h.samples
    M = vals.size - 1 if closed else vals.size
    xi = 2 * math.pi * np.fft.fftfreq(M, h.step)
    spec = np.fft.fft(vals[:M])
    w = spectral_window(window, xi, bandwidth)
    ell = np.fft.ifft(spec * w * np.exp(xi * xi / 8))
    if M < vals.size:
        ell = np.concatenate([ell, ell[:1]])
    return SampledFunction(h.origin, h.step, ell)


@dataclass
class TailReport:
    bandwidth: float
    window: str
    step: float
    extent: float
    split: int
    n_check: int
    tail_sup_error: float
    amplification_factor: float
    membership: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def choose_split(diff: np.ndarray, max_split: int, slack: float) -> int:
    """Smallest n0 <= max_split whose suffix error is within ``slack`` of the best.

    ``diff[n]`` is |sigma(n) - gamma_b(n)|; the suffix error of n0 is
    max over n > n0.
    """
    suffix = np.maximum.accumulate(diff[::-1])[::-1]  # suffix[n] = max diff[n:]
    tails = np.append(suffix[1:], 0.0)  # tails[n0] = max diff[n0+1:]
    limit = min(max_split, diff.size - 1)
    target = slack * tails[limit] + 1e-15
    return int(np.argmax(tails[:limit + 1] <= target))


def construct_tail_symbol(sigma: TargetSequence, config: PipelineConfig = PipelineConfig()):
    """(b, N, TailReport, gamma_b values on 0..n_check)."""
    check_band(config.step, config.bandwidth)
    X = config.grid_extent()
    need = int(math.ceil(X * X)) + 1
    held = sigma.rule is None
    if not held:
        sigma = sigma.materialize(max(need, config.n_check))
    if sigma.N < config.n_check:
        raise DomainError(f"target known only up to n={sigma.N} < n_check={config.n_check}")
    memb = membership_report(TargetSequence(sigma.prefix[:config.n_check + 1]))
    if not memb.consistent:
        raise InfeasibleError("target is not consistent with uniform continuity in the "
                              f"square-root metric (moduli {memb.moduli})")
    h = h_transform(sigma, config.step, X, hold=held)
    ell = deconvolve_heat(h, config.bandwidth, config.window)
    b = Sampled(ell.restrict(0.0))
    gb = np.array([gamma(b, n)[0] for n in range(config.n_check + 1)])
    diff = np.abs(sigma.prefix[:config.n_check + 1] - gb)
    N = choose_split(diff, config.max_split, config.split_slack)
    tail = float(diff[N + 1:].max()) if N < config.n_check else 0.0
    report = TailReport(config.bandwidth, config.window, config.step, X, N, config.n_check,
                        tail, math.exp(config.bandwidth ** 2 / 8), memb.to_dict())
    return b, N, report, gb


@dataclass
class HeadReport:
    residual: float
    tail_perturbation: float
    condition: float
    knots: list
    tail_rows: int

    def to_dict(self):
        return asdict(self)


def head_knots(N: int, per_octave: int = 4, min_knot: float = 2.0 ** -10) -> np.ndarray:
    """Knots r_k = 2^(k/per_octave) in [min_knot, 4N] (so r = 1 is one of them)."""
    kmin = math.ceil(per_octave * math.log2(min_knot))
    kmax = math.floor(per_octave * math.log2(4 * max(N, 1)) + 1e-9)
    return 2.0 ** (np.arange(kmin, kmax + 1) / per_octave)


def construct_head_correction(theta, config: PipelineConfig = PipelineConfig(), *,
                              ridge: float | None = None):
    """Fit theta on 0..N by sum_k c_k 1[0, sqrt(r_k)] (ridge least squares).

    Returns (symbol, HeadReport).  Rows n in (N, N_tail] with target 0
    keep the correction small past N.
    """
    theta = np.asarray(theta, dtype=complex)
    N = theta.size - 1
    if N > 200:
        raise DomainError("head correction supports N <= 200")
    lam = config.ridge if ridge is None else ridge
    r = head_knots(N, config.knots_per_octave, config.min_knot)
    n_tail = int(4 * N + 10 * math.sqrt(4 * N) + 20)
    n = np.arange(n_tail + 1)
    A = gammainc(n[:, None] + 1.0, r[None, :])
    target = np.zeros(n_tail + 1, dtype=complex)
    target[:N + 1] = theta
    if not np.any(theta):
        return Constant(0.0), HeadReport(0.0, 0.0, 1.0, r.tolist(), n_tail - N)
    aug = np.vstack([A, math.sqrt(lam) * np.eye(r.size)])
    rhs = np.concatenate([target, np.zeros(r.size)])
    cond = float(np.linalg.cond(aug))
    if cond > config.max_condition:
        raise ConditioningError(f"head basis condition {cond:.3g} > {config.max_condition:.3g}")
    coef, *_ = scipy.linalg.lstsq(aug.astype(complex), rhs)
    fit = A @ coef
    residual = float(np.abs(fit[:N + 1] - theta).max())
    leak = float(np.abs(fit[N + 1:]).max()) if n_tail > N else 0.0
    sym = Sum(tuple((complex(c), Indicator(0.0, math.sqrt(rk))) for c, rk in zip(coef, r)))
    return sym, HeadReport(residual, leak, cond, r.tolist(), n_tail - N)


@dataclass
class ApproxReport:
    bandwidth: float
    fejer_order: float
    window: str
    split: int
    n_check: int
    tail_sup_error: float
    head_residual: float
    head_tail_perturbation: float
    head_condition: float
    measured_sup_error: float
    total_sup_error_estimate: float
    amplification_factor: float
    feasible: bool
    eps: float | None = None
    membership: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def approximate_sequence(sigma: TargetSequence, eps: float | None = None,
                         config: PipelineConfig = PipelineConfig()) -> tuple[Symbol, ApproxReport]:
    """Symbol a = b + c with gamma_a close to sigma on 0..n_check.

    Raises InfeasibleError (or a subclass) when the guards reject the
    configuration or the target.
    """
    b, N, tail, gb = construct_tail_symbol(sigma, config)
    sig = sigma.materialize(config.n_check) if sigma.rule is not None else sigma
    s = sig.prefix[:config.n_check + 1]
    theta = s[:N + 1] - gb[:N + 1]
    c, head = construct_head_correction(theta, config)
    a = Sum(((1.0, b), (1.0, c)))
    ga = np.array([gamma(a, n)[0] for n in range(config.n_check + 1)])
    measured = float(np.abs(s - ga).max())
    total = max(measured, tail.tail_sup_error, head.residual)
    report = ApproxReport(
        bandwidth=config.bandwidth, fejer_order=config.bandwidth / 2, window=config.window,
        split=N, n_check=config.n_check, tail_sup_error=tail.tail_sup_error,
        head_residual=head.residual, head_tail_perturbation=head.tail_perturbation,
        head_condition=head.condition, measured_sup_error=measured,
        total_sup_error_estimate=total, amplification_factor=tail.amplification_factor,
        feasible=True if eps is None else total <= eps, eps=eps, membership=tail.membership)
    return a, report
