from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockrad.eigenvalues import gamma
from fockrad.errors import DomainError
from fockrad.kernel import kernel
from fockrad.metrics import (crossing_point, kappa, kappa_adjacent, kappa_gammainc,
                             lipschitz_statistic, modulus_estimate, rho, sharp_constant_bound,
                             sharp_constant_deviation)
from fockrad.symbols import Constant, Indicator, Sum

# mpmath, 40 digits: 2 [P(m+1, r*) - P(n+1, r*)]
KAPPA = {(0, 1): 0.7357588823428847, (1, 2): 0.5413411329464508, (10, 30): 1.95233069016023,
         (999, 1000): 0.025229222697442998, (77, 120): 1.9399842155983846,
         (100, 130): 1.6754854753156978, (400, 430): 1.0764134953225004,
         (0, 2): 1.173871435021876, (5, 6): 0.32124628209596007}
# 2 n^n e^-n / n!
KAPPA_ADJ = {1: 0.7357588823428847, 2: 0.5413411329464508, 10: 0.2502200714422666,
             100: 0.07972199361829427, 10 ** 4: 0.007978779117925652,
             10 ** 6: 0.0007978844943124881}


@pytest.mark.parametrize("m, n, expected", [(0, 0, 0.0), (4, 9, 1.0), (1, 2, math.sqrt(2) - 1)])
def test_rho(m, n, expected):
    assert rho(m, n) == pytest.approx(expected, abs=1e-15)


@settings(max_examples=200)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_rho_triangle(m, n, p):
    assert rho(m, p) <= rho(m, n) + rho(n, p) + 1e-12


@pytest.mark.parametrize("pair, expected", KAPPA.items())
def test_kappa_oracle(pair, expected):
    assert kappa(*pair) == pytest.approx(expected, rel=1e-13)
    assert kappa(*pair[::-1]) == kappa(*pair)


@pytest.mark.parametrize("n, expected", KAPPA_ADJ.items())
def test_kappa_adjacent_oracle(n, expected):
    assert kappa_adjacent(n) == pytest.approx(expected, rel=1e-13)


def test_kappa_identity_and_range():
    assert kappa(3, 3) == 0.0
    assert kappa(0, 500) <= 2.0
    with pytest.raises(DomainError):
        kappa(-1, 3)
    with pytest.raises(DomainError):
        kappa_adjacent(0)


def test_kappa_adjacent_matches_kappa():
    ns = np.arange(1, 1001)
    adj = kappa_adjacent(ns)
    rel = [abs(kappa(n - 1, n) - a) / a for n, a in zip(ns, adj)]
    assert max(rel) <= 1e-12


def test_kappa_gammainc_form_agrees_when_well_conditioned():
    for m, n in [(0, 1), (10, 30), (77, 120)]:
        assert kappa_gammainc(m, n) == pytest.approx(kappa(m, n), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 500))
def test_kappa_triangle(m, n, p):
    assert kappa(m, p) <= kappa(m, n) + kappa(n, p) + 1e-12


def test_kappa_chain_bound():
    chain = np.concatenate([[0.0], np.cumsum(kappa_adjacent(np.arange(1, 51)))])
    for m in range(51):
        for n in range(m + 1, 51):
            assert kappa(m, n) <= chain[n] - chain[m] + 1e-12


def test_single_sign_change():
    for m in range(0, 50, 3):
        for n in range(m + 1, 51, 4):
            r = np.linspace(1e-3, 3 * n + 40, 4000)
            d = kernel(m, r) - kernel(n, r)
            s = np.sign(d[np.abs(d) > 1e-300])
            assert np.count_nonzero(s[1:] != s[:-1]) == 1
            rs = crossing_point(m, n)
            assert kernel(m, rs) == pytest.approx(kernel(n, rs), rel=1e-10)


@pytest.mark.parametrize("m, n", [(0, 1), (3, 8), (20, 21), (40, 90)])
def test_kappa_duality(m, n):
    # a = +1 where K(m) > K(n), -1 beyond the crossing
    rs = crossing_point(m, n)
    a0 = Sum(((2.0, Indicator(0.0, math.sqrt(rs))), (-1.0, Constant(1.0))))
    gap = abs(gamma(a0, m)[0] - gamma(a0, n)[0])
    assert gap == pytest.approx(kappa(m, n), abs=1e-8)


# mpmath, 50 digits: sqrt(2/pi) - sqrt(n) kappa_adjacent(n)
SHARP_DEVIATION = {10: 0.006619218755249825, 100: 0.0006646246199226512,
                   1000: 6.648760749519684e-05, 10 ** 4: 6.649010300226146e-06,
                   10 ** 6: 6.649037729647081e-08}


@pytest.mark.parametrize("n, expected", SHARP_DEVIATION.items())
def test_sharp_constant(n, expected):
    dev = sharp_constant_deviation(n)
    assert dev == pytest.approx(expected, rel=1e-12)
    assert 0 <= dev <= sharp_constant_bound(n)


def test_sharp_constant_monotone():
    ns = np.arange(1, 10 ** 5)
    scaled = np.sqrt(ns) * kappa_adjacent(ns)
    assert np.all(np.diff(scaled) > 0)
    assert np.all(scaled < math.sqrt(2 / math.pi))


def test_lipschitz_statistic():
    assert lipschitz_statistic(np.ones(50)) == 0.0
    s = np.sqrt(np.arange(500.0))
    assert lipschitz_statistic(s) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        lipschitz_statistic([1.0])


def test_modulus_examples():
    n = np.arange(10 ** 4 + 1)
    assert modulus_estimate(np.ones(300), 0.3) == 0.0
    assert modulus_estimate(np.cos(np.sqrt(n)), 0.1) <= 0.1 + 1e-12
    assert modulus_estimate(np.where(n % 2 == 0, 1.0, -1.0), 0.05) == 2.0


def test_modulus_matches_brute_force():
    rng = np.random.default_rng(7)
    s = rng.normal(size=120) + 1j * rng.normal(size=120)
    sq = np.sqrt(np.arange(120))
    for delta in (0.05, 0.3, 1.0, 20.0):
        close = np.abs(sq[:, None] - sq[None, :]) <= delta
        brute = np.abs(s[:, None] - s[None, :])[close].max()
        assert modulus_estimate(s, delta) == pytest.approx(brute, rel=1e-15)
