"""Radial symbols a: [0, inf) -> C described by a small declarative grammar.

A symbol is one of a fixed set of kinds (see ``KINDS``) and can be
serialised to and from plain JSON-compatible dicts.  Every symbol knows

* how to evaluate itself (vectorised over the radius ``y``),
* its discontinuities (``breakpoints``), which quadrature splits at,
* a growth envelope |a(y)| <= C * max(1, y)^p * exp(delta * y^2).

``average_B`` builds the iterated exponential averages

    B_0 a(r) = a(sqrt r),   B_j a(r) = int_0^inf B_{j-1} a(r + t) e^{-t} dt,

which are evaluated through the closed j-fold form

    B_j a(r) = int_0^inf a(sqrt(r + t)) t^{j-1} e^{-t} / (j-1)! dt.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar, NamedTuple

import numpy as np

from .errors import DomainError, GrowthError, SpecError
from .quadrature import EPS, gauss_laguerre, gauss_legendre
from .sampling import SampledFunction

# coefficient of the rotating exponential whose eigenvalues are e^{-i(n+1)pi/4}
ROTATION_COEFFICIENT = complex(1 - 1 / math.sqrt(2), -1 / math.sqrt(2))


class Envelope(NamedTuple):
    scale: float
    power: float
    delta: float


@dataclass(frozen=True)
class Growth:
    """Growth class: ``bounded``, ``vanishing`` or ``subgaussian``."""

    kind: str
    delta: float = 0.0

    def to_dict(self):
        if self.kind == "subgaussian":
            return {"class": "subgaussian", "delta": self.delta}
        return self.kind

    @property
    def bounded(self) -> bool:
        return self.kind in ("bounded", "vanishing")


BOUNDED = Growth("bounded")
VANISHING = Growth("vanishing")


def _cnum(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}


class Symbol:
    """Base class; concrete kinds are frozen dataclasses below."""

    kind: ClassVar[str] = ""

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise DomainError("symbols are defined for y >= 0")
        out = np.asarray(self._eval(y), dtype=complex)
        if out.shape != y.shape:
            out = np.broadcast_to(out, y.shape).copy()
        return complex(out) if out.ndim == 0 else out

    def _eval(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points in (0, inf) where the symbol jumps."""
        return ()

    @property
    def envelope(self) -> Envelope:
        return Envelope(self.sup_norm, 0.0, 0.0)

    @property
    def growth(self) -> Growth:
        return BOUNDED

    @property
    def sup_norm(self) -> float:
        """Upper bound for sup|a| (exact for the elementary kinds)."""
        return math.inf

    def linear_parts(self) -> list[tuple[complex, "Symbol"]]:
        return [(1.0 + 0j, self)]

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        d = {"kind": self.kind, **self.params()}
        return d

    def __add__(self, other: "Symbol") -> "Sum":
        return Sum(((1.0, self), (1.0, other)))

    def scaled(self, w: complex) -> "Sum":
        return Sum(((w, self),))


@dataclass(frozen=True)
class Constant(Symbol):
    kind: ClassVar[str] = "constant"
    value: complex = 1.0

    def _eval(self, y):
        return np.full(y.shape, complex(self.value))

    @property
    def sup_norm(self):
        return abs(self.value)

    @property
    def growth(self):
        return VANISHING if self.value == 0 else BOUNDED

    def params(self):
        return {"value": _cnum(self.value)}


@dataclass(frozen=True)
class Indicator(Symbol):
    """Characteristic function of alpha <= y <= beta."""

    kind: ClassVar[str] = "indicator"
    alpha: float = 0.0
    beta: float = math.inf

    def __post_init__(self):
        if not (0 <= self.alpha < self.beta):
            raise SpecError("beta", "indicator needs 0 <= alpha < beta")

    def _eval(self, y):
        return ((y >= self.alpha) & (y <= self.beta)).astype(complex)

    @property
    def breakpoints(self):
        return tuple(b for b in (self.alpha, self.beta) if 0 < b < math.inf)

    @property
    def sup_norm(self):
        return 1.0

    @property
    def growth(self):
        return VANISHING if math.isfinite(self.beta) else BOUNDED

    def params(self):
        return {"alpha": self.alpha, "beta": None if math.isinf(self.beta) else self.beta}


@dataclass(frozen=True)
class PiecewiseConstant(Symbol):
    """values[i] on knots[i-1] <= y < knots[i] (with knots[-1]=0, knots[len]=inf)."""

    kind: ClassVar[str] = "piecewise-constant"
    knots: tuple[float, ...] = ()
    values: tuple[complex, ...] = (0j,)

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        if len(self.values) != len(self.knots) + 1:
            raise SpecError("values", "need len(values) == len(knots) + 1")
        if k.size and (k[0] <= 0 or np.any(np.diff(k) <= 0)):
            raise SpecError("knots", "knots must be positive and strictly increasing")

    def _eval(self, y):
        idx = np.searchsorted(np.asarray(self.knots), y, side="right")
        return np.asarray(self.values, dtype=complex)[idx]

    @property
    def breakpoints(self):
        return tuple(self.knots)

    @property
    def sup_norm(self):
        return max(abs(v) for v in self.values)

    @property
    def growth(self):
        return VANISHING if self.values[-1] == 0 else BOUNDED

    def params(self):
        return {"knots": list(self.knots), "values": [_cnum(v) for v in self.values]}


@dataclass(frozen=True)
class Cosine(Symbol):
    kind: ClassVar[str] = "cosine"
    frequency: float = 1.0

    def _eval(self, y):
        return np.cos(self.frequency * y)

    @property
    def sup_norm(self):
        return 1.0

    def params(self):
        return {"frequency": self.frequency}


@dataclass(frozen=True)
class Power(Symbol):
    kind: ClassVar[str] = "power"
    exponent: float = 1.0

    def __post_init__(self):
        if not self.exponent >= 0:
            raise SpecError("exponent", "power exponent must be >= 0")

    def _eval(self, y):
        return y ** self.exponent

    @property
    def envelope(self):
        return Envelope(1.0, float(self.exponent), 0.0)

    @property
    def sup_norm(self):
        return 1.0 if self.exponent == 0 else math.inf

    @property
    def growth(self):
        return BOUNDED if self.exponent == 0 else Growth("subgaussian", 0.0)

    def params(self):
        return {"exponent": self.exponent}


@dataclass(frozen=True)
class ExpComplex(Symbol):
    """a(y) = exp(coefficient * y^2)."""

    kind: ClassVar[str] = "exp-complex"
    coefficient: complex = ROTATION_COEFFICIENT

    def _eval(self, y):
        return np.exp(complex(self.coefficient) * (y * y))

    @property
    def delta(self) -> float:
        return max(complex(self.coefficient).real, 0.0)

    @property
    def envelope(self):
        return Envelope(1.0, 0.0, self.delta)

    @property
    def sup_norm(self):
        return 1.0 if self.delta == 0 else math.inf

    @property
    def growth(self):
        re = complex(self.coefficient).real
        if re < 0:
            return VANISHING
        return BOUNDED if re == 0 else Growth("subgaussian", re)

    def params(self):
        c = complex(self.coefficient)
        return {"coefficient": {"re": c.real, "im": c.imag}}


@dataclass(frozen=True, eq=False)
class Sampled(Symbol):
    """Piecewise-linear symbol through uniform samples (ends held)."""

    kind: ClassVar[str] = "sampled"
    grid: SampledFunction = field(default=None)

    def __post_init__(self):
        if not isinstance(self.grid, SampledFunction):
            raise SpecError("grid", "sampled symbol needs a SampledFunction")
        if self.grid.origin < 0:
            raise SpecError("origin", "sampled symbol grid must start at y >= 0")
        if not np.all(np.isfinite(self.grid.samples)):
            raise SpecError("re", "samples must be finite")

    def _eval(self, y):
        return self.grid(y)

    @property
    def sup_norm(self):
        return self.grid.sup_norm()

    @property
    def growth(self):
        return VANISHING if self.grid.samples[-1] == 0 else BOUNDED

    def params(self):
        s = self.grid.samples
        return {"origin": self.grid.origin, "step": self.grid.step,
                "re": s.real.tolist(), "im": s.imag.tolist()}


@dataclass(frozen=True)
class Sum(Symbol):
    kind: ClassVar[str] = "sum"
    terms: tuple[tuple[complex, Symbol], ...] = ()

    def __post_init__(self):
        if not self.terms:
            raise SpecError("terms", "sum needs at least one term")

    def _eval(self, y):
        out = np.zeros(y.shape, dtype=complex)
        for w, s in self.terms:
            out += complex(w) * s._eval(y)
        return out

    def linear_parts(self):
        parts = []
        for w, s in self.terms:
            parts.extend((complex(w) * v, leaf) for v, leaf in s.linear_parts())
        return parts

    @property
    def breakpoints(self):
        return tuple(sorted({b for _, s in self.terms for b in s.breakpoints}))

    @property
    def envelope(self):
        envs = [(abs(w), s.envelope) for w, s in self.terms]
        return Envelope(sum(a * e.scale for a, e in envs),
                        max(e.power for _, e in envs),
                        max(e.delta for _, e in envs))

    @property
    def sup_norm(self):
        return sum(abs(w) * s.sup_norm for w, s in self.terms)

    @property
    def growth(self):
        gs = [s.growth for _, s in self.terms]
        sub = [g.delta for g in gs if g.kind == "subgaussian"]
        if sub:
            return Growth("subgaussian", max(sub))
        if all(g.kind == "vanishing" for g in gs):
            return VANISHING
        return BOUNDED

    def params(self):
        return {"terms": [{"weight": _cnum(w), "symbol": s.to_dict()} for w, s in self.terms]}


KINDS = {cls.kind: cls for cls in
         (Constant, Indicator, PiecewiseConstant, Cosine, Power, ExpComplex, Sampled, Sum)}

SymbolSpec = Symbol


# --- parsing -----------------------------------------------------------------

def _num(doc, path: str, real=False):
    if isinstance(doc, bool) or doc is None:
        raise SpecError(path, "expected a number")
    if isinstance(doc, (int, float)):
        v = complex(float(doc))
    elif isinstance(doc, dict) and set(doc) <= {"re", "im"} and doc:
        try:
            v = complex(float(doc.get("re", 0.0)), float(doc.get("im", 0.0)))
        except (TypeError, ValueError):
            raise SpecError(path, "re/im must be numbers") from None
    else:
        raise SpecError(path, "expected a number or {re, im}")
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise SpecError(path, "must be finite")
    if real:
        if v.imag != 0:
            raise SpecError(path, "expected a real number")
        return v.real
    return v


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise SpecError(f"{path}.{key}", "missing field")
    return doc[key]


def _check_keys(doc: dict, allowed: set, path: str):
    extra = set(doc) - allowed - {"kind", "growth"}
    if extra:
        raise SpecError(f"{path}.{sorted(extra)[0]}", "unknown field")


def _parse_growth(doc, path):
    if isinstance(doc, str):
        if doc in ("bounded", "vanishing"):
            return Growth(doc)
        raise SpecError(path, f"unknown growth class {doc!r}")
    if isinstance(doc, dict) and doc.get("class") == "subgaussian":
        d = _num(_require(doc, "delta", path), path + ".delta", real=True)
        return Growth("subgaussian", d)
    raise SpecError(path, "growth must be 'bounded', 'vanishing' or {class: subgaussian, delta}")


_ORDER = {"vanishing": 0, "bounded": 1, "subgaussian": 2}


def parse_symbol(doc, path: str = "symbol") -> Symbol:
    """Validate a dict document and build the corresponding symbol."""
    if not isinstance(doc, dict):
        raise SpecError(path, "expected an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError(path + ".kind", f"unknown kind {kind!r}")
    if kind == "constant":
        _check_keys(doc, {"value"}, path)
        sym = Constant(_num(_require(doc, "value", path), path + ".value"))
    elif kind == "indicator":
        _check_keys(doc, {"alpha", "beta"}, path)
        alpha = _num(doc.get("alpha", 0.0), path + ".alpha", real=True)
        beta = doc.get("beta")
        beta = math.inf if beta is None else _num(beta, path + ".beta", real=True)
        if alpha < 0:
            raise SpecError(path + ".alpha", "must be >= 0")
        if not alpha < beta:
            raise SpecError(path + ".beta", "need alpha < beta")
        sym = Indicator(alpha, beta)
    elif kind == "piecewise-constant":
        _check_keys(doc, {"knots", "values"}, path)
        knots = _require(doc, "knots", path)
        values = _require(doc, "values", path)
        if not isinstance(knots, list) or not isinstance(values, list):
            raise SpecError(path + ".knots", "knots and values must be lists")
        k = tuple(_num(v, f"{path}.knots[{i}]", real=True) for i, v in enumerate(knots))
        vals = tuple(_num(v, f"{path}.values[{i}]") for i, v in enumerate(values))
        try:
            sym = PiecewiseConstant(k, vals)
        except SpecError as e:
            raise SpecError(f"{path}.{e.field}", str(e).split(": ", 1)[1]) from None
    elif kind == "cosine":
        _check_keys(doc, {"frequency"}, path)
        sym = Cosine(_num(doc.get("frequency", 1.0), path + ".frequency", real=True))
    elif kind == "power":
        _check_keys(doc, {"exponent"}, path)
        p = _num(_require(doc, "exponent", path), path + ".exponent", real=True)
        if p < 0:
            raise SpecError(path + ".exponent", "must be >= 0")
        sym = Power(p)
    elif kind == "exp-complex":
        _check_keys(doc, {"coefficient"}, path)
        sym = ExpComplex(_num(_require(doc, "coefficient", path), path + ".coefficient"))
    elif kind == "sampled":
        _check_keys(doc, {"origin", "step", "re", "im"}, path)
        origin = _num(_require(doc, "origin", path), path + ".origin", real=True)
        step = _num(_require(doc, "step", path), path + ".step", real=True)
        re = _require(doc, "re", path)
        im = doc.get("im", [0.0] * len(re) if isinstance(re, list) else None)
        if not isinstance(re, list) or not re:
            raise SpecError(path + ".re", "expected a non-empty list")
        if not isinstance(im, list) or len(im) != len(re):
            raise SpecError(path + ".im", "must be a list as long as re")
        if step <= 0:
            raise SpecError(path + ".step", "must be positive")
        if origin < 0:
            raise SpecError(path + ".origin", "must be >= 0")
        try:
            vals = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
        except (TypeError, ValueError):
            raise SpecError(path + ".re", "samples must be numbers") from None
        if not np.all(np.isfinite(vals)):
            raise SpecError(path + ".re", "samples must be finite")
        sym = Sampled(SampledFunction(origin, step, vals))
    else:
        _check_keys(doc, {"terms"}, path)
        terms = _require(doc, "terms", path)
        if not isinstance(terms, list) or not terms:
            raise SpecError(path + ".terms", "expected a non-empty list")
        parsed = []
        for i, t in enumerate(terms):
            tp = f"{path}.terms[{i}]"
            if not isinstance(t, dict):
                raise SpecError(tp, "expected an object")
            w = _num(t.get("weight", 1.0), tp + ".weight")
            parsed.append((w, parse_symbol(_require(t, "symbol", tp), tp + ".symbol")))
        sym = Sum(tuple(parsed))

    if "growth" in doc:
        declared = _parse_growth(doc["growth"], path + ".growth")
        actual = sym.growth
        if _ORDER[declared.kind] < _ORDER[actual.kind] or (
                declared.kind == actual.kind == "subgaussian" and declared.delta < actual.delta):
            raise SpecError(path + ".growth",
                            f"declared {declared.to_dict()} but symbol is {actual.to_dict()}")
    return sym


def load_symbol(path) -> Symbol:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SpecError("document", f"not valid JSON ({e.msg} at line {e.lineno})") from None
    return parse_symbol(doc)


def dump_symbol(sym: Symbol) -> str:
    return json.dumps(sym.to_dict(), indent=2, sort_keys=True)


def eval_symbol(spec: Symbol, y):
    """a(y) for y >= 0."""
    return spec(y)


# --- iterated averages -------------------------------------------------------

_V_SPLITS = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


class AveragedSymbol:
    """B_j a as a function of r >= 0.

    For j >= 1 the integral is taken in the scaled variable v = (1-delta) t,
    which turns exp(delta t) growth of the base symbol into a plain
    e^{-v} weight.  The v axis is split at the base symbol's
    discontinuities and at a fixed geometric ladder; finite pieces use
    Gauss-Legendre and the last piece Gauss-Laguerre.  The same rule with
    doubled node counts gives the error estimate.
    """

    def __init__(self, base: Symbol, j: int, *, tol: float = 1e-8):
        if j < 0:
            raise DomainError("j must be nonnegative")
        self.base = base
        self.j = int(j)
        self.tol = tol
        env = base.envelope
        self._delta = env.delta
        if self._delta >= 1:
            raise GrowthError(f"B_{j} diverges: growth exp({self._delta} y^2) with delta >= 1")
        self._ubreaks = np.array(sorted(b * b for b in base.breakpoints), dtype=float)
        if base.growth.bounded:
            self.sup_norm_estimate = base.sup_norm
        else:
            self.sup_norm_estimate = math.inf
        if self.j > 0:
            vals, err = self.evaluate(np.array([0.0, 1.0, 10.0]))
            bad = ~np.isfinite(vals) | (err > 1e-6 * np.maximum(1.0, np.abs(vals)))
            if np.any(bad):
                raise GrowthError(f"B_{j} quadrature does not converge")

    @property
    def breakpoints_y(self) -> tuple[float, ...]:
        return self.base.breakpoints

    @property
    def envelope_r(self) -> Envelope:
        """Bound |B_j a(r)| <= C max(1, r)^(p/2) e^{delta r}."""
        env = self.base.envelope
        s = 1.0 - env.delta
        c = env.scale * s ** (-self.j)
        if env.power > 0:
            c *= 2 ** (env.power / 2) * (1 + math.gamma(self.j + env.power / 2 + 1) / math.gamma(self.j + 1))
        return Envelope(c, env.power, env.delta)

    def __call__(self, r):
        vals, err = self.evaluate(r)
        if np.any(~np.isfinite(vals)) or np.any(err > self.tol * np.maximum(1.0, np.abs(vals))):
            raise GrowthError(f"B_{self.j} evaluation did not converge", value=vals,
                              err=float(np.max(err)))
        return vals[()] if np.ndim(vals) == 0 else vals

    def evaluate(self, r, m: int = 32, mlag: int = 64):
        """Return (values, error estimates) at the radii r (no raising)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise DomainError("B_j is defined for r >= 0")
        shape = r.shape
        r = r.ravel()
        if self.j == 0:
            with np.errstate(over="ignore", invalid="ignore"):
                vals = self.base(np.sqrt(r))
            vals = np.asarray(vals, dtype=complex).reshape(shape)
            return vals, np.zeros(shape)
        with np.errstate(over="ignore", invalid="ignore"):
            lo = self._average(r, m, mlag)
            hi = self._average(r, 2 * m, 2 * mlag)
        vals = hi.reshape(shape)
        err = np.abs(hi - lo).reshape(shape)
        err = np.where(np.isfinite(err), err, np.inf)
        return vals, err + 64 * EPS * np.abs(vals)

    def _average(self, r: np.ndarray, m: int, mlag: int) -> np.ndarray:
        j, d = self.j, self._delta
        s = 1.0 - d
        vcap = max(64.0, 2.0 * j + 48.0)
        splits = np.array([v for v in _V_SPLITS if v < vcap] + [vcap])
        # discontinuities of a(sqrt(r + v/s)) in v, clipped into [0, vcap]
        vb = np.clip(s * (self._ubreaks[None, :] - r[:, None]), 0.0, vcap)
        edges = np.concatenate([np.zeros((r.size, 1)), vb,
                                np.broadcast_to(splits, (r.size, splits.size))], axis=1)
        edges.sort(axis=1)
        lg = math.lgamma(j)

        def g(v, rr):
            # a(sqrt(r + v/s)) e^{-delta v / s} v^{j-1} / (j-1)!
            u = rr + v / s
            a = self.base(np.sqrt(u))
            with np.errstate(divide="ignore"):
                logw = (j - 1) * np.log(v) - lg - d * v / s if j > 1 else -d * v / s + 0.0 * v
            return a * np.exp(logw)

        x, w = gauss_legendre(m)
        a_, b_ = edges[:, :-1, None], edges[:, 1:, None]
        half = 0.5 * (b_ - a_)
        v = a_ + half * (x + 1.0)
        rr = r[:, None, None]
        finite = (g(v, rr) * np.exp(-v) * (half * w)).sum(axis=(1, 2))

        xl, wl = gauss_laguerre(mlag)
        vt = vcap + xl[None, :]
        tail = (g(vt, r[:, None]) * wl).sum(axis=1) * math.exp(-vcap)
        return (finite + tail) * s ** (-j)


def average_B(spec: Symbol, j: int) -> AveragedSymbol:
    return AveragedSymbol(spec, j)


def in_class_M(spec: Symbol, j_max: int = 4) -> int | None:
    """Least j <= j_max with B_j a bounded on a probe grid up to r = 1e4.

    Heuristic: boundedness is judged on a finite logarithmic grid only
    (values on [1e3, 1e4] may not exceed 1.5x the maximum below 1e3).
    """
    if j_max > 4:
        raise DomainError("j_max must be <= 4")
    probe = np.concatenate([[0.0], np.logspace(-3, 4, 71)])
    head = probe < 1e3
    for j in range(j_max + 1):
        try:
            avg = AveragedSymbol(spec, j)
            vals, _ = avg.evaluate(probe)
        except GrowthError:
            continue
        mag = np.abs(vals)
        if not np.all(np.isfinite(mag)):
            continue
        if mag[~head].max() <= 1.5 * mag[head].max() + 1e-12:
            return j
    return None
