"""Numerical checks of the kernel, metric and asymptotic claims, as a report.

Each check yields a row {suite, claim, bound, measured, pass}.  Nothing
here draws random numbers or reads the clock, so a report is a pure
function of its arguments and serialises to identical bytes every run.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .eigenvalues import gamma, gamma_cosine_closed
from .heat import convoluzation_error
from .kernel import stirling_bracket, stirling_remainder
from .metrics import (kappa, kappa_adjacent, sharp_constant_bound, sharp_constant_deviation)
from .symbols import Cosine

SUITES = ("kappa", "convoluzation", "stirling", "asymptotic")
DEFAULT_MAX_N = {"kappa": 10_000, "convoluzation": 1000, "stirling": 1000, "asymptotic": 10_000}

NORMALIZATION_NOTE = (
    "eigenvalues use K(n, r) = r^n e^-r / n!; the alternative prefactor 1/sqrt(n!) "
    "does not integrate to 1 and does not match the Fock inner product, so it is not used")

CONVOLUZATION_CONSTANT = 0.54
ASYMPTOTIC_CONSTANT = 0.6
HEAT_COS_FACTOR = math.exp(-0.125)


def _row(suite, claim, bound, measured, ok, witness=None):
    return {"suite": suite, "claim": claim, "bound": float(bound), "measured": float(measured),
            "pass": bool(ok)}, witness


def _first_bad(bad, labels, worst: int):
    """Label of the first failing entry, or of the worst one when nothing fails."""
    idx = np.flatnonzero(bad)
    return int(labels[idx[0] if idx.size else worst])


def _triples(limit: int, count: int):
    """Deterministic spread of index triples in [0, limit] (a Weyl sequence)."""
    g = (math.sqrt(5) - 1) / 2
    out = []
    for i in range(1, count + 1):
        m = int(limit * ((i * g) % 1.0))
        n = int(limit * ((i * g * g) % 1.0))
        p = int(limit * ((i * math.sqrt(2)) % 1.0))
        out.append((m, n, p))
    return out


def suite_kappa(max_n: int):
    rows = []
    ns = np.arange(1, max_n + 1)
    adj = kappa_adjacent(ns)
    rel = np.array([abs(kappa(n - 1, n) - a) / a for n, a in zip(ns, adj)])
    i = int(np.argmax(rel))
    rows.append(_row("kappa", f"kappa(n-1, n) = 2 n^n e^-n / n! for 1 <= n <= {max_n}",
                     1e-12, rel[i], rel[i] <= 1e-12, _first_bad(rel > 1e-12, ns, i)))

    probe = np.unique(np.concatenate([ns, [10 ** 5, 10 ** 6]]))
    dev = sharp_constant_deviation(probe)
    ratio = dev / sharp_constant_bound(probe)
    i = int(np.argmax(ratio))
    ok = bool(np.all(dev >= 0) and ratio[i] <= 1.0)
    rows.append(_row("kappa", "0 <= sqrt(2/pi) - sqrt(n) kappa(n-1, n) <= sqrt(2/pi)(1 - e^(-1/(12n))), "
                     "as a fraction of the bound", 1.0, ratio[i], ok,
                     _first_bad((dev < 0) | (ratio > 1.0), probe, i)))

    scaled = np.sqrt(probe) * kappa_adjacent(probe)
    steps = np.diff(scaled)
    i = int(np.argmin(steps))
    rows.append(_row("kappa", "sqrt(n) kappa(n-1, n) increases with n (smallest step)",
                     0.0, steps[i], steps[i] > 0, _first_bad(steps <= 0, probe[1:], i)))

    worst, at = -math.inf, None
    for m, n, p in _triples(500, 200):
        v = kappa(m, p) - kappa(m, n) - kappa(n, p)
        if v > worst:
            worst, at = v, [m, n, p]
    rows.append(_row("kappa", "triangle inequality kappa(m,p) <= kappa(m,n) + kappa(n,p), "
                     "200 triples <= 500 (largest excess)", 1e-12, worst, worst <= 1e-12, at))

    worst, at = -math.inf, None
    chain = np.concatenate([[0.0], np.cumsum(kappa_adjacent(np.arange(1, 51)))])
    for m in range(51):
        for n in range(m + 1, 51):
            v = kappa(m, n) - (chain[n] - chain[m])
            if v > worst:
                worst, at = v, [m, n]
    rows.append(_row("kappa", "kappa(m, n) <= sum of adjacent kappas, m < n <= 50 (largest excess)",
                     1e-12, worst, worst <= 1e-12, at))
    return rows


def suite_convoluzation(max_n: int):
    ratios, errs = [], []
    for n in range(1, max_n + 1):
        v, e = convoluzation_error(n, with_error=True)
        ratios.append(v * math.sqrt(n))
        errs.append(e)
    ratios, errs = np.array(ratios), np.array(errs)
    i, j = int(np.argmax(ratios)), int(np.argmax(errs))
    # witness the smallest failing n, not the worst one
    bad_r = np.flatnonzero(ratios >= CONVOLUZATION_CONSTANT)
    bad_e = np.flatnonzero(errs > 1e-8)
    return [
        _row("convoluzation",
             f"sqrt(n) int |K(n,y^2) 2y - H(y - sqrt n)| dy < {CONVOLUZATION_CONSTANT}, 1 <= n <= {max_n}",
             CONVOLUZATION_CONSTANT, ratios[i], bad_r.size == 0,
             int(bad_r[0]) + 1 if bad_r.size else None),
        _row("convoluzation", "quadrature error estimate of each integral",
             1e-8, errs[j], bad_e.size == 0, int(bad_e[0]) + 1 if bad_e.size else None),
    ]


def suite_stirling(max_n: int):
    bad = None
    worst = math.inf
    for n in range(1, max_n + 1):
        b = stirling_bracket(n)
        if not b.contains_factorial() and bad is None:
            bad = n
        # normalised distance of ln n! to the nearer end of the bracket
        mu = float(stirling_remainder(n))
        worst = min(worst, 12 * n * min(mu, 1 / (12 * n) - mu))
    return [_row("stirling", f"n^n e^-n sqrt(2 pi n) <= n! <= same * e^(1/(12n)), 1 <= n <= {max_n}; "
                 "measured = smallest margin in units of 1/(12n)", 0.0, worst,
                 bad is None and worst > 0, bad)]


def suite_asymptotic(max_n: int):
    rows = []
    spec = Cosine(1.0)
    top = min(100, max_n)
    diffs = [abs(gamma(spec, n)[0].real - gamma_cosine_closed(n)) for n in range(top + 1)]
    i = int(np.argmax(diffs))
    rows.append(_row("asymptotic", f"gamma(cos, n) matches the Kummer series, n <= {top}",
                     1e-8, diffs[i], diffs[i] <= 1e-8, _first_bad(np.array(diffs) > 1e-8, np.arange(top + 1), i)))
    if max_n >= 100:
        ns = np.unique(np.round(np.logspace(2, math.log10(max_n), 50)).astype(int))
        scaled = [abs(gamma(spec, int(n))[0].real - HEAT_COS_FACTOR * math.cos(math.sqrt(n)))
                  * math.sqrt(n) for n in ns]
        i = int(np.argmax(scaled))
        rows.append(_row("asymptotic", f"sqrt(n) |gamma(cos, n) - e^(-1/8) cos sqrt n| <= {ASYMPTOTIC_CONSTANT}, "
                         f"{ns.size} log-spaced n in [100, {max_n}]",
                         ASYMPTOTIC_CONSTANT, scaled[i], scaled[i] <= ASYMPTOTIC_CONSTANT,
                         _first_bad(np.array(scaled) > ASYMPTOTIC_CONSTANT, ns, i)))
    return rows


_RUNNERS = {"kappa": suite_kappa, "convoluzation": suite_convoluzation,
            "stirling": suite_stirling, "asymptotic": suite_asymptotic}


def run_verification(suite: str = "all", max_n: int | None = None) -> dict:
    """Run one suite (or all) and return the report as a dict."""
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in _RUNNERS:
            raise ValueError(f"unknown suite {s!r}; choose from {SUITES + ('all',)}")
    results, first = [], None
    for s in names:
        for row, witness in _RUNNERS[s](max_n if max_n is not None else DEFAULT_MAX_N[s]):
            results.append(row)
            if not row["pass"] and first is None:
                first = {"suite": row["suite"], "claim": row["claim"], "at": witness}
    return {"note": NORMALIZATION_NOTE, "suites": list(names), "max_n": max_n,
            "results": results, "all_pass": all(r["pass"] for r in results),
            "first_counterexample": first}


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
