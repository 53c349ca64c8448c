import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperladder import hypfun as hf
from hyperladder import quadrature as q
from hyperladder import tilde as td
from hyperladder._forms import KappaForm, h_operator_form
from hyperladder.cases import lambda_l, m_set, make_case
from hyperladder.errors import (ChainLeavesM, DivisionByZeroShift, IndexMismatch, NotInM, NotPowerWeight,
                                OutsideInterval)

JAC = make_case("one_minus_s2", -3.0, 0.0)
FLAT = make_case("s", 0.0, 1.0)


def P(case, delta, m):
    return td.DeformedParams(case, delta, m)


def test_tilde_lambda_examples():
    assert td.tilde_lambda(P(JAC, 1.0, 0.0)) == pytest.approx(-0.25, abs=1e-15)
    assert td.tilde_lambda(P(JAC, 0.0, 2.0)) == lambda_l(JAC, 2)
    assert td.tilde_lambda(P(FLAT, 3.0, 1.0)) == pytest.approx(-1.0, abs=1e-15)


def test_dlambda_examples():
    assert td.dlambda_dm(P(FLAT, 1.0, 1.0)) == pytest.approx(4 / 27, rel=1e-14)
    assert td.dlambda_dm(P(JAC, 0.0, 0.0)) == pytest.approx(2.0, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(case=st.sampled_from([JAC, FLAT, make_case("s2_plus_one", -9.0, 0.0)]),
       delta=st.floats(0.2, 3.0), m=st.floats(-0.4, 3.0), frac=st.floats(1e-4, 1e-2))
def test_dlambda_matches_difference_quotient(case, delta, m, frac):
    x = 2 * m + 2 * case.k_exponent + 1
    if abs(x) < 0.3:
        return
    # step relative to the pole distance keeps the central-difference error below 2 (2 frac)^2
    h = frac * abs(x) / 2
    fd = (td.tilde_lambda(P(case, delta, m + h)) - td.tilde_lambda(P(case, delta, m - h))) / (2 * h)
    assert fd == pytest.approx(td.dlambda_dm(P(case, delta, m)), rel=1e-3, abs=1e-6)


def test_s2_row_has_no_admissible_indices():
    c = make_case("s2", -3.0, 0.0)
    for delta in (-2.0, 0.1, 7.0):
        assert m_set(c, delta).empty
    with pytest.raises(ChainLeavesM):
        td.deformed_family(P(c, 1.0, 1.0), 1.0, 0)
    # the eigenvalue and ground function remain computable
    assert math.isfinite(td.tilde_lambda(P(c, 1.0, 1.0)))


def test_ground_examples():
    s = np.linspace(-0.9, 0.9, 7)
    g = td.ground(P(JAC, 1.0, 0.0))
    assert np.allclose(g(s), np.exp(-np.arcsin(s) / 2), rtol=1e-14)
    g0 = td.ground(P(JAC, 0.0, 2.0))
    assert np.allclose(g0(s), 1 - s * s, rtol=1e-14)
    x = np.linspace(0.1, 5, 7)
    gs = td.ground(P(FLAT, 1.0, 0.0))
    assert np.allclose(gs(x), np.exp(-2 * np.sqrt(x)), rtol=1e-14)
    assert gs.basis == "sqrt_s_powers" and g.basis == "s_power_kappa_power"


def test_lowering_kills_ground():
    for case, delta, l in ((JAC, 1.0, 2.0), (FLAT, 1.0, 1.5), (make_case("s2_plus_one", -9.0, 0.0), 0.4, 1.0)):
        out = td.apply_tilde_A(P(case, delta, l), td.ground(P(case, delta, l)))
        assert all(c == 0.0 for c in out.coeffs) and out.m == l + 1


def test_raising_eigen_relation():
    fam = td.deformed_family(P(JAC, 1.0, 1.0), 1.0, 1)
    top, low = fam
    raised = td.apply_tilde_A_plus(P(JAC, 1.0, 0.0), top)
    gap = td.tilde_lambda(P(JAC, 1.0, 1.0)) - td.tilde_lambda(P(JAC, 1.0, 0.0))
    assert np.allclose(raised.coeffs, gap * np.array(low.coeffs), rtol=1e-13, atol=1e-15)


def test_undeformed_limit_matches_plain_family():
    s = np.array([-0.83, -0.41, 0.12, 0.37, 0.88])
    fam = td.deformed_family(P(JAC, 0.0, 3.0), 3.0, 3)
    for f in fam:
        plain = hf.associated(JAC, 3, int(f.m))
        ratio = f(s) / plain(s)
        assert np.ptp(ratio) < 1e-12 * abs(ratio[0])
    lowered = td.apply_tilde_A(P(JAC, 0.0, 1.0), fam[2])
    ratio = lowered(s) / hf.apply_A(JAC, 1, hf.associated(JAC, 3, 1))(s)
    assert np.ptp(ratio) < 1e-12 * abs(ratio[0])


def test_chain_shape_and_exponent():
    fam = td.deformed_family(P(JAC, 1.0, 1.0), 1.0, 1)
    assert [f.m for f in fam] == [1.0, 0.0]
    assert all(f.exp_param == pytest.approx(-0.25) for f in fam)
    assert len(fam[1].coeffs) == 2
    assert td.deformed_family(P(JAC, 1.0, 2.0), 2.0, 0)[0] == td.ground(P(JAC, 1.0, 2.0))


def test_chain_eigen_residual_and_integrability():
    for case, delta, l, n in ((JAC, 1.0, 3.0, 3), (make_case("one_minus_s2", -5.0, 0.0), 1.0, 4.0, 4),
                              (make_case("s", 0.0, 1.5), 2.0, 3.0, 3),
                              (make_case("s2_plus_one", -9.0, 0.0), 0.4, 3.0, 3)):
        lam = td.tilde_lambda(P(case, delta, l))
        a, b = case.interval
        s = np.linspace(max(a, -3) + 0.05, min(b, 4) - 0.05, 25)
        for f in td.deformed_family(P(case, delta, l), l, n):
            r = td.apply_tilde_H(P(case, delta, f.m), f, s) - lam * f(s)
            assert np.max(np.abs(r)) < 1e-9 * np.max(np.abs(f(s)))
            assert math.isfinite(td.deformed_norm(f))


def test_orthogonality_same_m():
    fam0 = td.deformed_family(P(JAC, 1.0, 0.0), 0.0, 0)[-1]
    fam1 = td.deformed_family(P(JAC, 1.0, 1.0), 1.0, 1)[-1]
    assert abs(q.inner_product(JAC, fam0, fam1)) < 1e-8 * td.deformed_norm(fam0) * td.deformed_norm(fam1)


def test_gram_with_stronger_premise():
    case = make_case("one_minus_s2", -5.0, 0.0)
    members = [td.normalized_family(P(case, 1.0, float(l)), float(l), l)[-1] for l in range(4)]
    gram = np.array([[q.inner_product(case, f, g) for g in members] for f in members])
    assert np.max(np.abs(gram - np.eye(4))) < 1e-8


def test_norm_chain_examples():
    fam = td.deformed_family(P(JAC, 1.0, 1.0), 1.0, 1)
    ratio = td.deformed_norm(fam[0]) / td.deformed_norm(fam[1])
    gap = td.tilde_lambda(P(JAC, 1.0, 1.0)) - td.tilde_lambda(P(JAC, 1.0, 0.0))
    assert ratio == pytest.approx(math.sqrt(gap), rel=1e-10)
    assert td.deformed_norm_chain(P(JAC, 1.0, 1.0), 1.0, 0.0) == pytest.approx(td.deformed_norm(fam[1]))
    # undeformed: the ladder ratio of the plain family
    fam = td.deformed_family(P(JAC, 0.0, 2.0), 2.0, 1)
    ratio = td.deformed_norm(fam[0]) / td.deformed_norm(fam[1])
    assert ratio == pytest.approx(hf.norm(JAC, 2, 2) / hf.norm(JAC, 2, 1), rel=1e-10)
    unit = td.normalized_family(P(JAC, 1.0, 2.0), 2.0, 2)
    assert all(td.deformed_norm(f) == pytest.approx(1.0, abs=1e-10) for f in unit)


def test_errors():
    with pytest.raises(NotPowerWeight):
        P(make_case("one", -2.0, 0.0), 1.0, 0.0)
    with pytest.raises(DivisionByZeroShift):
        P(JAC, 1.0, -1.0)
    with pytest.raises(NotInM):
        td.ground(P(JAC, 1.0, -1.5))
    with pytest.raises(ChainLeavesM):
        td.deformed_family(P(JAC, 1.0, 0.5), 0.5, 2)
    fam = td.deformed_family(P(JAC, 1.0, 2.0), 2.0, 1)
    with pytest.raises(IndexMismatch):
        td.apply_tilde_A(P(JAC, 1.0, 0.0), fam[1])
    with pytest.raises(IndexMismatch):
        td.apply_tilde_A_plus(P(JAC, 1.0, 0.0), fam[0])
    with pytest.raises(OutsideInterval):
        td.apply_tilde_H(P(JAC, 1.0, 1.0), fam[1], 1.5)


def test_json_round_trip():
    fam = td.deformed_family(P(FLAT, 1.0, 3.0), 3.0, 3)
    for f in fam:
        data = json.loads(f.to_json())
        assert data["basis"] == "sqrt_s_powers" and data["exp_param"] == f.exp_param
        back = td.DeformedFunction.from_dict(data)
        assert back == f


ROWS = [(JAC, 1.0), (make_case("one_minus_s2", -5.0, 0.0), -2.0), (make_case("s", 0.0, 1.5), 2.0),
        (make_case("s2_plus_one", -9.0, 0.0), 0.4), (make_case("s2_minus_one", -9.0, 0.0), 3.0)]


@settings(max_examples=40, deadline=None)
@given(row=st.sampled_from(ROWS), coeffs=st.lists(st.floats(-2, 2), min_size=2, max_size=4),
       u=st.floats(0.05, 0.95), v=st.floats(0.05, 0.95))
def test_deformed_factorization_property(row, coeffs, u, v):
    case, delta = row
    lo, hi = m_set(case, delta).intervals[0]
    lo_f = lo if math.isfinite(lo) else hi - 4.0
    hi_f = hi if math.isfinite(hi) else lo + 4.0
    m = lo_f + v * (hi_f - lo_f)
    p, p1 = P(case, delta, m), P(case, delta, m + 1)
    a, b = case.interval
    s = max(a, -2.0) + u * (min(b, 3.0) - max(a, -2.0))
    f = KappaForm(case, m, np.array(coeffs), np.array(coeffs[::-1]), p.epsilon)
    lhs = td.tilde_A_plus_form(p, td.tilde_A_form(p, f))(s)
    rhs = td.apply_tilde_H(p, f, s) - td.tilde_lambda(p) * f(s)
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))
    hf_m = h_operator_form(case, m, f) - f.times_dkappa().scale(delta)
    lhs = td.tilde_A_form(p, hf_m)(s)
    rhs = td.apply_tilde_H(p1, td.tilde_A_form(p, f), s)
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


@pytest.mark.parametrize("row", ROWS)
def test_tilde_lambda_increasing_on_m_set(row):
    case, delta = row
    for lo, hi in m_set(case, delta).intervals:
        lo_f = lo if math.isfinite(lo) else hi - 20.0
        hi_f = hi if math.isfinite(hi) else lo + 20.0
        grid = np.linspace(lo_f, hi_f, 300)[1:-1]
        vals = [td.tilde_lambda(P(case, delta, g)) for g in grid]
        assert np.all(np.diff(vals) > 0)
        assert all(td.dlambda_dm(P(case, delta, g)) > 0 for g in grid)
