import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperladder import tilde
from hyperladder.cases import (CanonicalCase, capital_lambda, kappa_at, lambda_l, m_set, make_case,
                               max_index, weight_at)
from hyperladder.errors import NotPowerWeight, OutsideInterval, ParameterOutOfRange


def test_hermite_case():
    c = make_case("one", -2, 0)
    assert c.interval == (-math.inf, math.inf)
    assert c.sigma_dd == 0
    assert c.k_exponent is None
    for s in (-1.5, 0.0, 0.7, 2.0):
        assert c.weight(s) == pytest.approx(math.exp(-s * s), rel=1e-15)


def test_flat_weight_power_row():
    c = make_case("s", 0, 1)
    assert c.interval == (0.0, math.inf)
    assert c.k_exponent == 0.0
    assert not c.classical
    assert c.weight(3.7) == pytest.approx(1.0)


@pytest.mark.parametrize("tag,alpha,beta", [
    ("one", 1.0, 0.0), ("one", 0.0, 0.0), ("s", -1.0, 0.0), ("one_minus_s2", -1.0, 2.0),
    ("s2_minus_one", -6.0, 1.0), ("s2_plus_one", 0.5, 0.0), ("s2", -1.0, -1.0),
])
def test_invalid_parameters_name_constraint(tag, alpha, beta):
    with pytest.raises(ParameterOutOfRange, match="constraint"):
        make_case(tag, alpha, beta)


def test_boundary_values_are_invalid():
    with pytest.raises(ParameterOutOfRange):
        make_case("one_minus_s2", -3.0, 3.0)
    with pytest.raises(ParameterOutOfRange):
        make_case("s2_minus_one", -2.0, 2.0)


def test_unknown_tag():
    with pytest.raises(ParameterOutOfRange):
        make_case("cubic", -1, 0)


def test_lambda_examples():
    assert lambda_l(make_case("one", -2, 0), 3) == 6
    # sigma'' = 2, alpha = -6: l (1 - alpha - l) at l = 2
    assert lambda_l(make_case("s2_plus_one", -6, 1), 2) == 10
    for tag, (a, b) in {"one": (-2, 0), "s2": (-1, 1), "one_minus_s2": (-3, 0)}.items():
        assert lambda_l(make_case(tag, a, b), 0) == 0


def test_capital_lambda_examples():
    assert capital_lambda(make_case("one", -2, 0)) == math.inf
    assert capital_lambda(make_case("one_minus_s2", -3, 0)) == math.inf
    assert capital_lambda(make_case("s2_plus_one", -6, 1)) == 3.5
    assert capital_lambda(make_case("s2_minus_one", -6, 7)) == 3.5
    assert capital_lambda(make_case("s2_plus_one", -1, 0)) == 1.0
    assert max_index(make_case("s2_plus_one", -6, 1), 12) == 3
    assert max_index(make_case("s2_plus_one", -5, 1), 12) == 2


def test_weight_and_kappa_examples():
    assert weight_at(make_case("one", -2, 0), 0.0) == 1.0
    c = make_case("one_minus_s2", -3, 0)
    assert weight_at(c, 0.0) == pytest.approx(1.0)
    assert kappa_at(c, 0.0) == 1.0
    c = make_case("s", -1, 1)
    assert weight_at(c, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert kappa_at(c, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    with pytest.raises(OutsideInterval):
        weight_at(c, -1.0)


def test_weight_solves_pearson_equation(sample_case):
    # (sigma rho)' = tau rho, checked by central differences
    a, b = sample_case.interval
    lo = max(a, -2.0) + 0.3
    hi = min(b, 3.0) - 0.3
    h = 1e-5
    for s in np.linspace(lo, hi, 7):
        f = lambda x: sample_case.sigma(x) * sample_case.weight(x)
        lhs = (f(s + h) - f(s - h)) / (2 * h)
        assert lhs == pytest.approx(sample_case.tau(s) * sample_case.weight(s), rel=1e-6, abs=1e-12)


def test_case_json_shape():
    c = make_case("one_minus_s2", -3, 0)
    assert c.to_dict() == {"sigma": "one_minus_s2", "alpha": -3.0, "beta": 0.0}
    assert CanonicalCase.from_dict(c.to_dict()) == c


def test_lambda_strictly_increasing(sample_case):
    top = max_index(sample_case, 20)
    vals = [lambda_l(sample_case, l) for l in range(top + 1)]
    assert vals[0] == 0
    assert all(b > a for a, b in zip(vals, vals[1:]))


def _boundary_gammas(case):
    if case.sigma_dd == 2:
        return (0.0, -case.alpha - 1e-3)
    return (0.0, 1.0, 2.0)


def test_boundary_terms_vanish(sample_case):
    """sigma rho s**gamma tends to zero at both ends of the interval."""
    a, b = sample_case.interval
    for gamma in _boundary_gammas(sample_case):
        for end, inward in ((a, 1.0), (b, -1.0)):
            if math.isfinite(end):
                pts = [end + inward * d for d in (1e-4, 1e-6, 1e-8)]
            else:
                pts = [-inward * x for x in (1e3, 1e5, 1e7)]
            vals = [abs(sample_case.sigma(p) * sample_case.weight(p) * abs(p) ** gamma) for p in pts]
            assert vals[2] < vals[1] < vals[0] or vals[0] == 0.0
            if math.isfinite(end) or sample_case.sigma_dd != 2:
                assert vals[-1] < 1e-3
            else:
                # algebraic decay at infinity: the log-slope stays negative
                slope = math.log(vals[2] / vals[1]) / math.log(abs(pts[2] / pts[1]))
                assert slope < -0.5e-3


def test_m_set_examples():
    assert m_set(make_case("s", 0, 1), 1.0).to_list() == [[-0.5, math.inf]]
    assert m_set(make_case("s2", -1, 0), 7.0).empty
    assert m_set(make_case("one_minus_s2", -3, 0), -5.0).to_list() == [[-1.0, math.inf]]
    with pytest.raises(NotPowerWeight):
        m_set(make_case("one", -2, 0), 1.0)


def test_m_set_two_components():
    c = make_case("s2_minus_one", -9.0, 0.0)
    assert len(m_set(c, 0.3).intervals) == 2
    assert len(m_set(c, 3.0).intervals) == 1
    assert len(m_set(c, -0.3).intervals) == 1


POWER_ROWS = [("s", 0.0, 1.5), ("one_minus_s2", -3.0, 0.0), ("one_minus_s2", -5.0, 0.0),
              ("s2_minus_one", -9.0, 0.0), ("s2_plus_one", -9.0, 0.0), ("s2_plus_one", -4.0, 0.0)]


@settings(max_examples=60, deadline=None)
@given(row=st.sampled_from(POWER_ROWS), delta=st.floats(-4, 4).filter(lambda d: abs(d) > 1e-3),
       u=st.floats(0.01, 0.99))
def test_m_set_inside_increasing_region(row, delta, u):
    case = make_case(*row)
    for lo, hi in m_set(case, delta).intervals:
        lo_f = lo if math.isfinite(lo) else hi - 30.0
        hi_f = hi if math.isfinite(hi) else lo + 30.0
        m = lo_f + u * (hi_f - lo_f)
        assert 2 * m + 2 * case.k_exponent + 1 != 0
        assert tilde.dlambda_dm(tilde.DeformedParams(case, delta, m)) > 0
