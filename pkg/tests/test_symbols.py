from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fockrad.errors import GrowthError, SpecError
from fockrad.sampling import SampledFunction
from fockrad.symbols import (ROTATION_COEFFICIENT, Constant, Cosine, ExpComplex, Indicator,
                             PiecewiseConstant, Power, Sampled, Sum, average_B, dump_symbol,
                             eval_symbol, in_class_M, load_symbol, parse_symbol)


@pytest.mark.parametrize("spec, y, expected", [
    (Constant(1.0), 3.3, 1.0),
    (Cosine(), math.pi, -1.0),
    (Indicator(0.0, 1.0), 0.5, 1.0),
    (Indicator(0.0, 1.0), 2.0, 0.0),
    (Indicator(0.0, 1.0), 1.0, 1.0),
    (PiecewiseConstant((1.0, 2.0), (3.0, 4.0, 5.0)), 1.5, 4.0),
    (Power(2.0), 3.0, 9.0),
    (ExpComplex(1j), 2.0, complex(math.cos(4), math.sin(4))),
])
def test_eval_symbol(spec, y, expected):
    assert eval_symbol(spec, y) == pytest.approx(expected, abs=1e-15)


def test_sampled_holds_end_values():
    s = Sampled(SampledFunction(0.0, 0.5, [0.0, 1.0, 3.0]))
    assert s(0.25) == pytest.approx(0.5)
    assert s(0.75) == pytest.approx(2.0)
    assert s(10.0) == 3.0


def test_sum_and_scaling():
    a = Constant(2.0) + Indicator(0.0, 1.0).scaled(-1j)
    assert a(0.5) == 2 - 1j
    assert a(1.5) == 2


def test_growth_classes():
    assert Indicator(0.0, 1.0).growth.kind == "vanishing"
    assert Cosine().growth.kind == "bounded"
    g = ExpComplex(ROTATION_COEFFICIENT).growth
    assert g.kind == "subgaussian"
    assert g.delta == pytest.approx(1 - 1 / math.sqrt(2))


SPEC_DOCS = [
    {"kind": "constant", "value": 1.5},
    {"kind": "indicator", "alpha": 0.0, "beta": 1.0},
    {"kind": "indicator", "alpha": 2.0, "beta": None},
    {"kind": "piecewise-constant", "knots": [1.0, 2.0], "values": [1.0, {"re": 0.0, "im": 1.0}, 0.0]},
    {"kind": "cosine", "frequency": 2.0},
    {"kind": "power", "exponent": 2.0},
    {"kind": "exp-complex", "coefficient": {"re": 0.25, "im": -0.5}},
    {"kind": "sampled", "origin": 0.0, "step": 0.1, "re": [1.0, 2.0, 3.0], "im": [0.0, 0.0, 1.0]},
    {"kind": "sum", "terms": [{"weight": 2.0, "symbol": {"kind": "cosine"}},
                              {"weight": {"re": 0, "im": 1}, "symbol": {"kind": "constant", "value": 1}}]},
]


@pytest.mark.parametrize("doc", SPEC_DOCS)
def test_document_roundtrip(doc, tmp_path):
    sym = parse_symbol(doc)
    path = tmp_path / "s.json"
    path.write_text(dump_symbol(sym))
    again = load_symbol(path)
    y = np.linspace(0, 3, 31)
    assert np.array_equal(sym(y), again(y))
    assert dump_symbol(again) == dump_symbol(sym)


@pytest.mark.parametrize("doc, field", [
    ({"kind": "nope"}, "symbol.kind"),
    ({"kind": "constant"}, "symbol.value"),
    ({"kind": "constant", "value": "x"}, "symbol.value"),
    ({"kind": "indicator", "alpha": -1.0, "beta": 1.0}, "symbol.alpha"),
    ({"kind": "indicator", "alpha": 2.0, "beta": 1.0}, "symbol.beta"),
    ({"kind": "cosine", "frequncy": 1.0}, "symbol.frequncy"),
    ({"kind": "power", "exponent": -1}, "symbol.exponent"),
    ({"kind": "piecewise-constant", "knots": [2.0, 1.0], "values": [1, 2, 3]}, "symbol.knots"),
    ({"kind": "sum", "terms": [{"symbol": {"kind": "bad"}}]}, "symbol.terms[0].symbol.kind"),
    ({"kind": "power", "exponent": 2, "growth": "bounded"}, "symbol.growth"),
])
def test_validation_names_field(doc, field):
    with pytest.raises(SpecError) as info:
        parse_symbol(doc)
    assert info.value.field == field


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{kind: constant")
    with pytest.raises(SpecError):
        load_symbol(p)


def test_declared_growth_accepted():
    sym = parse_symbol({"kind": "indicator", "alpha": 0, "beta": 1, "growth": "bounded"})
    assert sym(0.5) == 1


# --- averages ---------------------------------------------------------------------

def test_average_level_zero_is_base():
    b = average_B(Cosine(), 0)
    r = np.array([0.0, 2.0, 9.0])
    assert np.allclose(b(r), np.cos(np.sqrt(r)), atol=0)


@pytest.mark.parametrize("r", [0.0, 1.0, 10.0, 250.0])
def test_average_power_two(r):
    assert average_B(Power(2.0), 1)(r) == pytest.approx(r + 1, rel=1e-12)
    assert average_B(Power(2.0), 3)(r) == pytest.approx(r + 3, rel=1e-12)


@pytest.mark.parametrize("j", [1, 2, 3])
@pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 7.5])
def test_average_indicator(j, r):
    # B_j 1[0,1](r) = P(j, 1 - r) for r < 1 (regularized lower incomplete gamma)
    from scipy.special import gammainc
    expected = gammainc(j, 1 - r) if r < 1 else 0.0
    assert average_B(Indicator(0.0, 1.0), j)(r) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("j", [1, 2])
@pytest.mark.parametrize("r", [0.0, 1.5, 20.0])
def test_average_exp_complex(j, r):
    lam = ROTATION_COEFFICIENT
    expected = np.exp(lam * r) / (1 - lam) ** j
    assert average_B(ExpComplex(lam), j)(r) == pytest.approx(expected, rel=1e-10)


def test_average_exp_real_oracle():
    # mpmath: e^{0.3 r} / 0.7^2 at r = 0 and 1.5
    b = average_B(ExpComplex(0.3), 2)
    assert b(0.0) == pytest.approx(2.0408163265306123, rel=1e-12)
    assert b(1.5) == pytest.approx(3.2006371132452425, rel=1e-12)


@pytest.mark.parametrize("base", [Cosine(), Indicator(0.0, 1.0)])
@pytest.mark.parametrize("j", [1, 2])
@pytest.mark.parametrize("r", [0.0, 1.0, 10.0])
def test_average_recursion(base, j, r):
    prev = average_B(base, j - 1)
    cur = average_B(base, j)
    pts = [1.0 - r] if 0 < 1.0 - r < 60 else None

    def part(fn):
        return quad(lambda t: fn(prev(r + t)) * math.exp(-t), 0, 60, points=pts, limit=200,
                    epsabs=1e-13)[0]

    expected = complex(part(lambda z: z.real), part(lambda z: z.imag))
    assert abs(cur(r) - expected) < 1e-8


def test_average_linearity():
    a, b = Cosine(), Indicator(0.0, 2.0)
    r = np.array([0.0, 0.5, 3.0, 12.0])
    combo = average_B(Sum(((2.0, a), (-1j, b))), 2)(r)
    parts = 2.0 * average_B(a, 2)(r) - 1j * average_B(b, 2)(r)
    assert np.max(np.abs(combo - parts)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 200.0), st.floats(0.1, 3.0))
def test_average_contraction(r, freq):
    assert abs(average_B(Cosine(freq), 2)(r)) <= 1.0 + 1e-12


def test_average_divergent_level():
    with pytest.raises(GrowthError):
        average_B(ExpComplex(1.2), 1)


@pytest.mark.parametrize("spec, expected", [
    (Constant(1.0), 0),
    (Indicator(0.0, 1.0), 0),
    (Cosine(), 0),
    (Power(2.0), None),
    (ExpComplex(ROTATION_COEFFICIENT), None),
])
def test_in_class_M(spec, expected):
    assert in_class_M(spec) == expected


def test_dump_is_sorted_json():
    text = dump_symbol(Indicator(0.0, 1.0))
    assert json.loads(text) == {"kind": "indicator", "alpha": 0.0, "beta": 1.0}
