"""Target sequences, their square-root interpolation and oscillation diagnostics.

A sequence s on {0, 1, 2, ...} is extended to x >= 0 by interpolating
linearly in sqrt(x) between consecutive integers,

    f(x) = s(n) + (sqrt x - sqrt n) / (sqrt(n+1) - sqrt n) * (s(n+1) - s(n)),

so f is a convex combination of s(n) and s(n+1) and inherits the modulus
of continuity of s in the metric |sqrt m - sqrt n| up to a factor 3.
The moduli measured here are restricted to a finite prefix, so every
verdict reads "consistent with", never "member of".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, RangeError
from .metrics import lipschitz_statistic, modulus_estimate
from .sampling import SampledFunction

MEMBERSHIP_DELTAS = (0.5, 0.2, 0.1, 0.05, 0.02)
MEMBERSHIP_FACTOR = 1.2


@dataclass(frozen=True, eq=False)
class TargetSequence:
    """A complex sequence: a stored prefix plus an optional rule for n beyond it."""

    prefix: np.ndarray
    rule: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def __post_init__(self):
        p = np.array(self.prefix, dtype=complex).ravel()
        if p.size == 0:
            raise DomainError("prefix must be non-empty")
        p.setflags(write=False)
        object.__setattr__(self, "prefix", p)

    @classmethod
    def from_rule(cls, rule, N: int, name: str = "") -> "TargetSequence":
        return cls(np.asarray(rule(np.arange(N + 1)), dtype=complex), rule, name)

    @property
    def N(self) -> int:
        return self.prefix.size - 1

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.prefix).max())

    def __len__(self):
        return self.prefix.size

    def __call__(self, n):
        n = np.asarray(n, dtype=int)
        if np.any(n < 0):
            raise DomainError("indices must be nonnegative")
        inside = n <= self.N
        out = np.empty(n.shape, dtype=complex)
        out[inside] = self.prefix[n[inside]]
        if not np.all(inside):
            if self.rule is None:
                raise RangeError(f"index {int(n.max())} beyond prefix 0..{self.N} and no rule")
            out[~inside] = np.asarray(self.rule(n[~inside]), dtype=complex)
        return out[()] if out.ndim == 0 else out

    def materialize(self, N: int) -> "TargetSequence":
        """Same sequence with the prefix extended (via the rule) to 0..N."""
        if N <= self.N:
            return self
        extra = np.asarray(self(np.arange(self.N + 1, N + 1)), dtype=complex)
        return TargetSequence(np.concatenate([self.prefix, extra]), self.rule, self.name)


@dataclass(frozen=True, eq=False)
class ExtendedFunction:
    """f(x) on x >= 0 built from a target sequence."""

    source: TargetSequence
    hold: bool = False

    def weights(self, x):
        """(n, 1 - w, w) with f(x) = (1 - w) s(n) + w s(n+1)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("x must be nonnegative")
        n = np.floor(x).astype(int)
        rx, rn = np.sqrt(x), np.sqrt(n)
        w = (rx - rn) / (np.sqrt(n + 1.0) - rn)
        return n, 1.0 - w, w

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.hold and self.source.rule is None:
            x = np.minimum(x, float(self.source.N))
        n, _, w1 = self.weights(x)
        exact = w1 == 0
        s = self.source
        lo = s(n)
        hi = np.where(exact, lo, s(np.where(exact, n, n + 1)))
        out = np.where(exact, lo, lo + w1 * (hi - lo))
        return out[()] if np.ndim(out) == 0 else out


def extend(sigma: TargetSequence, x):
    """Square-root interpolation of sigma at x >= 0."""
    return ExtendedFunction(sigma)(x)


def omega_bound(sigma: TargetSequence, delta: float) -> float:
    """3 max(w(sqrt delta), sqrt(delta) w(1)), w the prefix modulus.

    Upper bound for the modulus of the extension at delta (0 < delta <= 1),
    restricted to the prefix range.  The constant 3 uses
    w(delta) <= w(sqrt delta), valid because delta <= 1.
    """
    if not 0 < delta <= 1:
        raise DomainError("delta must lie in (0, 1]")
    p = sigma.prefix
    rd = math.sqrt(delta)
    return 3.0 * max(modulus_estimate(p, rd), rd * modulus_estimate(p, 1.0))


def h_transform(sigma: TargetSequence, step: float = 0.05, extent: float | None = None,
                *, hold: bool = False) -> SampledFunction:
    """Samples of h(x) = f(x^2) on [-X, X], even in x.

    ``extent`` defaults to sqrt(N) for the stored prefix.  With ``hold``
    the sequence is continued by its last stored value when it has no rule.
    """
    if sigma.prefix.size < 2:
        raise DomainError("prefix must have length >= 2")
    X = math.sqrt(sigma.N) if extent is None else float(extent)
    M = int(round(2 * X / step))
    x = -X + step * np.arange(M + 1)
    r = x * x
    if sigma.rule is None and not hold:
        # rounding at the grid ends must not push x^2 past the prefix
        r[(r > sigma.N) & (r <= sigma.N * (1 + 1e-9))] = sigma.N
    vals = ExtendedFunction(sigma, hold=hold)(r)
    return SampledFunction(-X, step, vals)


@dataclass(frozen=True)
class MembershipReport:
    deltas: tuple[float, ...]
    moduli: tuple[float, ...]
    lipschitz: float
    verdict: str
    prefix_length: int
    note: str = "finite-prefix diagnostic: consistent-with only, never a membership proof"

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent-with-SO-sqrt"

    def to_dict(self):
        return {"deltas": list(self.deltas), "moduli": list(self.moduli),
                "lipschitz_statistic": self.lipschitz, "verdict": self.verdict,
                "prefix_length": self.prefix_length, "note": self.note}


def membership_report(sigma: TargetSequence, *, deltas=MEMBERSHIP_DELTAS,
                      factor: float = MEMBERSHIP_FACTOR) -> MembershipReport:
    """Moduli on a delta ladder, the Lipschitz statistic and a verdict.

    Consistent means the modulus shrinks by at least ``factor`` at every
    step of the ladder (or is already negligible).
    """
    p = sigma.prefix
    if p.size < 100:
        raise DomainError("membership_report needs a prefix of length >= 100")
    moduli = tuple(modulus_estimate(p, d) for d in deltas)
    scale = max(sigma.sup_norm, 1e-300)
    ok = all(b * factor <= a or a <= 1e-12 * scale for a, b in zip(moduli, moduli[1:]))
    verdict = "consistent-with-SO-sqrt" if ok else "inconsistent"
    return MembershipReport(tuple(deltas), moduli, lipschitz_statistic(p), verdict, int(p.size))


# --- named targets -----------------------------------------------------------------

def _cos_sqrt(n):
    return np.cos(np.sqrt(np.asarray(n, dtype=float))) + 0j


def _exp_i_sqrt(n):
    return np.exp(1j * np.sqrt(np.asarray(n, dtype=float)))


def _constant(n):
    return np.ones(np.shape(n), dtype=complex)


def _alternating(n):
    return np.where(np.asarray(n) % 2 == 0, 1.0, -1.0) + 0j


NAMED_RULES: dict[str, Callable] = {
    "cos-sqrt": _cos_sqrt,
    "exp-i-sqrt": _exp_i_sqrt,
    "constant": _constant,
    "alternating": _alternating,
}


def named_target(name: str, N: int = 200) -> TargetSequence:
    if name not in NAMED_RULES:
        raise DomainError(f"unknown target {name!r}; choose from {sorted(NAMED_RULES)}")
    return TargetSequence.from_rule(NAMED_RULES[name], N, name)


def gamma_target(spec, N: int = 200) -> TargetSequence:
    """The eigenvalue sequence of a symbol as a target (rule = quadrature)."""
    from .eigenvalues import gamma_values

    def rule(ns):
        return gamma_values(spec, ns)[0]

    return TargetSequence.from_rule(rule, N, f"gamma-of:{spec.kind}")
