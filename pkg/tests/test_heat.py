from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from fockrad.eigenvalues import gamma
from fockrad.errors import DomainError
from fockrad.heat import (asymptotic_gamma, convolve_heat, convoluzation_error, far_diagonal_bound,
                          far_diagonal_mass, fejer, fejer_outer_mass, fejer_spectrum, heat,
                          heat_outer_mass, heat_spectrum, kernel_F_distance, near_diagonal_bound,
                          near_diagonal_distance)
from fockrad.kernel import stirling_remainder
from fockrad.sampling import SampledFunction
from fockrad.symbols import Constant, Cosine, Indicator

# mpmath quad (30 digits, split at the sign change of the difference) of
# int_0^inf |K(n,y^2) 2y - sqrt(2/pi) e^{-2(sqrt n - y)^2}| dy
CONVOLUZATION = {1: 0.4539885110557509, 2: 0.3529381244269149, 10: 0.1662545206764212,
                 100: 0.05312993763165916, 500: 0.02378273898281456,
                 1000: 0.016818909553725395}
# (2 - int_{1/2}^inf cos(6x)/x^2 dx) / (3 pi), mpmath quadosc
FEJER3_OUTER_HALF = 0.24540077183788156


def test_heat_values():
    assert heat(0.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
    assert quad(heat, -np.inf, np.inf)[0] == pytest.approx(1.0, abs=1e-12)
    for xi in (0.0, 1.0, 4.0):
        re = quad(lambda x: heat(x) * math.cos(xi * x), -10, 10, epsabs=1e-14)[0]
        assert re == pytest.approx(heat_spectrum(xi), abs=1e-12)
        assert heat_spectrum(xi) == pytest.approx(math.exp(-xi * xi / 8))


def test_heat_outer_mass_vanishes():
    assert heat_outer_mass(0.5) > heat_outer_mass(1.0) > heat_outer_mass(2.0)
    assert heat_outer_mass(2.0) == pytest.approx(math.erfc(2 * math.sqrt(2)), rel=1e-14)
    assert heat_outer_mass(3.0) < 1e-8


@pytest.mark.parametrize("n", [1.0, 4.0, 16.0])
def test_fejer_unit_mass(n):
    edges = np.linspace(-200, 200, 2001)
    mass = sum(quad(lambda x: fejer(n, x), a, b, epsabs=1e-14)[0] for a, b in zip(edges[:-1], edges[1:]))
    tail = 2 * 1 / (math.pi * n * 200)  # int_{|x|>200} <= 2/(pi n 200)
    assert abs(mass - 1.0) <= 1e-6 + tail


def test_fejer_shape():
    assert fejer(3.0, 0.0) == pytest.approx(3.0 / math.pi)
    assert np.all(fejer(2.0, np.linspace(-5, 5, 101)) >= 0)
    assert fejer_spectrum(2.0, 0.0) == 1.0
    assert fejer_spectrum(2.0, 4.0) == 0.0
    with pytest.raises(DomainError):
        fejer(0.0, 1.0)


def test_fejer_outer_mass():
    assert fejer_outer_mass(3.0, 0.5) == pytest.approx(FEJER3_OUTER_HALF, rel=1e-12)
    assert fejer_outer_mass(100.0, 0.5) < fejer_outer_mass(1.0, 0.5)
    assert fejer_outer_mass(1e4, 0.5) < 1e-3


def test_convolve_full_line():
    for x in (0.0, 1.3, 50.0):
        assert convolve_heat(lambda y: np.ones_like(y), x, half_line=False) == pytest.approx(1.0, abs=1e-14)
        c = convolve_heat(np.cos, x, half_line=False)
        assert c == pytest.approx(math.exp(-0.125) * math.cos(x), abs=1e-10)


def test_convolve_half_line_tail():
    for x in (0.0, 0.5, 2.0):
        full = convolve_heat(np.cos, x, half_line=False)
        half = convolve_heat(Cosine(), x)
        tail = 0.5 * math.erfc(math.sqrt(2) * x)  # heat mass on y < 0
        assert abs(full - half) <= tail + 1e-14


def test_convolve_sampled_is_exact_for_linear():
    g = SampledFunction(-20.0, 0.25, np.linspace(-20, 20, 161))
    # H is even with unit mass, so H * (y) = x
    for x in (-3.0, 0.0, 2.7):
        assert convolve_heat(g, x, half_line=False) == pytest.approx(x, abs=1e-12)


@pytest.mark.parametrize("n, expected", CONVOLUZATION.items())
def test_convoluzation_oracle(n, expected):
    val, err = convoluzation_error(n, with_error=True)
    assert val == pytest.approx(expected, abs=1e-12)
    assert err < 1e-8


def test_convoluzation_examples():
    assert convoluzation_error(1) < 0.54
    assert convoluzation_error(100) < 0.054
    assert convoluzation_error(400) < convoluzation_error(100)
    with pytest.raises(DomainError):
        convoluzation_error(0)


@pytest.mark.parametrize("spec", [Cosine(), Indicator(0.0, 1.0)])
@pytest.mark.parametrize("n", [1, 10, 100, 1000])
def test_sandwich(spec, n):
    gap = abs(gamma(spec, n)[0] - asymptotic_gamma(spec, n))
    assert gap <= spec.sup_norm * convoluzation_error(n) + 1e-12


def test_asymptotic_examples():
    # only the heat mass on y < 0 is lost
    lost = 0.5 * math.erfc(3 * math.sqrt(2))
    assert asymptotic_gamma(Constant(1.0), 9) == pytest.approx(1 - lost, abs=1e-14)
    x = asymptotic_gamma(Cosine(), 10 ** 4)
    assert x == pytest.approx(math.exp(-0.125) * math.cos(100), abs=1e-12)
    assert abs(x - gamma(Cosine(), 10 ** 4)[0]) < 0.006
    assert abs(asymptotic_gamma(Indicator(0.0, 1.0), 400)) < 1e-100


@pytest.mark.parametrize("x", [1.0, 10.0, 100.0])
@pytest.mark.parametrize("h", [2.0, 4.0])
def test_far_diagonal(x, h):
    assert far_diagonal_mass(x, h) <= far_diagonal_bound(h)


@pytest.mark.parametrize("x", [1e2, 1e4])
def test_near_diagonal(x):
    assert near_diagonal_distance(x, 2.0) <= near_diagonal_bound(x, 2.0)


def test_kernel_to_F_distance_decreases():
    d = [kernel_F_distance(n) for n in (10, 100, 1000)]
    assert d[0] > d[1] > d[2]
    assert d[2] < 0.1
    # kernel_y = sqrt(2/pi) e^{-mu(n)} F and kernel_y has unit mass, so the distance is e^{mu} - 1
    assert d[1] == pytest.approx(math.expm1(float(stirling_remainder(100))), rel=1e-10)
