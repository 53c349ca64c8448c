import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperladder import coherent as co
from hyperladder import quadrature as q
from hyperladder.cases import make_case, m_set
from hyperladder.errors import (FamilyMismatch, IndexBeyondCap, NotInM, NotPowerWeight, OutOfConvergenceDomain,
                                ParameterOutOfRange, SpecMismatch)
from hyperladder.specmath import bessel_k

LAG = make_case("s", -1.0, 1.0)
JAC = make_case("one_minus_s2", -3.0, 0.0)
FIN = make_case("s2_plus_one", -6.0, 1.0)
FLAT = make_case("s", 0.0, 1.0)


def lag():
    return co.coherent_family(LAG, 0)


def jac():
    return co.coherent_family(JAC, 1)


def fin():
    return co.coherent_family(FIN, 0)


def flat_deformed():
    return co.coherent_family(FLAT, 1.0, delta=3.0)


def jac_deformed():
    return co.coherent_family(JAC, 0.0, delta=1.0)


def test_energy_examples():
    assert co.energy(jac(), 2) == 12
    for fam in (lag(), jac(), fin(), flat_deformed(), jac_deformed()):
        assert co.energy(fam, 0) == 0
    assert co.energy(flat_deformed(), 1) == pytest.approx(0.64, rel=1e-14)


def test_energy_equals_eigenvalue_gap():
    for fam in (lag(), jac(), fin(), flat_deformed(), jac_deformed(),
                co.coherent_family(make_case("s2_plus_one", -9.0, 0.0), 0.0, delta=0.4)):
        for n in range(min(fam.n_max, 6) + 1):
            assert co.energy(fam, n) == pytest.approx(co.energy_from_eigenvalues(fam, n), rel=1e-12, abs=1e-13)


def test_moment_examples():
    assert co.moments(jac())[2] == pytest.approx(60.0, rel=1e-13)
    assert co.energy(jac(), 1) * co.energy(jac(), 2) == pytest.approx(60.0)
    assert co.moments(lag())[0] == 1.0
    assert co.moments(flat_deformed())[1] == pytest.approx(0.64, rel=1e-13)


@pytest.mark.parametrize("make", [lag, jac, fin, flat_deformed, jac_deformed])
def test_moments_equal_energy_products(make):
    fam = make()
    assert np.max(np.abs(co.moments_by_product(fam) / co.moments(fam) - 1)) < 1e-10


def test_deformed_finite_families_product():
    for case, delta, m in ((make_case("s2_plus_one", -9.0, 0.0), 0.4, 0.0),
                           (make_case("s2_plus_one", -9.0, 0.0), -1.5, -1.0),
                           (make_case("s2_minus_one", -9.0, 0.0), 0.3, 4.6)):
        fam = co.coherent_family(case, m, delta=delta)
        assert fam.lambda_cap == pytest.approx(m_set(case, delta).component(m)[1] - m)
        prod = co.moments_by_product(fam)
        assert np.max(np.abs(prod / co.moments(fam) - 1)) < 1e-10


@pytest.mark.parametrize("make", [lag, jac, fin, flat_deformed, jac_deformed])
def test_energies_strictly_increasing(make):
    assert np.all(co.energy_gaps(make()) > 0)


def test_normalizer_examples():
    assert co.normalizer(lag(), 1.0) ** 2 == pytest.approx(math.e, rel=1e-14)
    assert co.normalizer(jac(), 0.0) == 1.0
    direct = co.normalizer(flat_deformed(), 0.5) ** 2
    assert direct == pytest.approx(float(mpmath.hyp2f1(2.5, 2.5, 4, 0.5)), rel=1e-10)
    assert co.normalizer_closed_form(flat_deformed(), 0.5) ** 2 == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("make", [lag, jac, flat_deformed, jac_deformed])
def test_closed_form_normalizers(make):
    fam = make()
    for J in (0.05, 0.3, 0.7):
        closed = co.normalizer_closed_form(fam, J)
        assert closed is not None
        # the tail of a radius-one series decays like J**n, so bound it geometrically
        tail = 2 * co.truncation_tail(fam, J) / (1 - min(J, 0.99))
        assert abs(co.normalizer(fam, J) ** 2 - closed**2) <= 1e-10 * closed**2 + tail


def test_finite_family_has_no_closed_form():
    assert co.normalizer_closed_form(fin(), 0.5) is None
    assert fin().n_max == 3 and fin().finite


def test_convergence_domain():
    with pytest.raises(OutOfConvergenceDomain):
        co.normalizer(flat_deformed(), 1.0)
    with pytest.raises(OutOfConvergenceDomain):
        co.state(lag(), -0.1, 0.0)


def test_state_examples():
    st_ = co.state(jac(), 0.8, 0.4)
    assert co.overlap(st_, st_) == pytest.approx(1.0, abs=1e-14)
    zero = co.state(jac(), 0.0, 1.0)
    assert zero.coeffs[0] == pytest.approx(1.0) and np.all(zero.coeffs[1:] == 0)


@settings(max_examples=50, deadline=None)
@given(which=st.sampled_from([lag, jac, fin, flat_deformed, jac_deformed]), J=st.floats(0.0, 0.8),
       gamma=st.floats(-3, 3), t=st.floats(-3, 3))
def test_normalization_and_temporal_stability(which, J, gamma, t):
    fam = which()
    st_ = co.state(fam, J, gamma)
    assert abs(st_.norm_squared - 1.0) < 1e-12
    moved = co.state(fam, J, gamma + t)
    e = np.abs(np.array(fam.e))
    allowance = 8 * np.finfo(float).eps * (1 + e * (abs(gamma) + abs(t))) * np.abs(st_.coeffs)
    assert np.all(np.abs(moved.coeffs - co.evolve(st_, t)) <= allowance)


def test_overlap_properties():
    a, b = co.state(lag(), 1.5, 0.0), co.state(lag(), 1.5, math.pi)
    assert abs(co.overlap(a, b)) < 1
    assert abs(co.overlap(a, co.state(lag(), 0.2, 0.3))) <= 1
    with pytest.raises(FamilyMismatch):
        co.overlap(a, co.state(jac(), 1.5, 0.0))


@pytest.mark.parametrize("make", [lag, jac])
def test_mean_energy_is_action(make):
    fam = make()
    for J in (0.2, 1.0, 4.0):
        st_ = co.state(fam, J, 0.0)
        assert abs(co.mean_energy(st_) - J) <= co.truncation_tail(fam, J) * J + 1e-12 * J


def test_measure_examples():
    spec = co.measure_spec(lag())
    assert spec.kind == "gamma_exp"
    assert co.measure_rho(spec, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert co.measure_k(spec, lag(), 2.0) == pytest.approx(co.normalizer(lag(), 2.0) ** 2 * math.exp(-2.0))
    spec = co.measure_spec(jac())
    assert spec.kind == "bessel_k"
    assert co.measure_rho(spec, 1.0) == pytest.approx(bessel_k(4.0, 2.0) / 12.0, rel=1e-13)
    g = co.measure_spec(jac_deformed())
    assert g.kind == "meijer_g"
    am = jac_deformed().alpha_m
    assert g.get("g").b[2] == pytest.approx(-am - 1j / (2 * am))


def test_bessel_k_order_reproduces_moments():
    """Order 4 (not 2) in the sigma'' = -2, m = 1, alpha = -3 measure gives unit mass."""
    corrected = q.half_line_integral(lambda J: J**2 * bessel_k(4.0, 2 * np.sqrt(J)) / 12.0, tol=1e-13)
    literal = q.half_line_integral(lambda J: J**2 * bessel_k(2.0, 2 * np.sqrt(J)) / 12.0, tol=1e-13)
    assert corrected == pytest.approx(1.0, rel=1e-10)
    assert literal == pytest.approx(0.25, rel=1e-10)


def test_measure_mismatch():
    with pytest.raises(SpecMismatch):
        co.measure_k(co.measure_spec(lag()), jac(), 1.0)
    with pytest.raises(SpecMismatch):
        co.measure_spec(flat_deformed())


def _rows(fam, n, tol):
    rows = co.verify_moments(co.measure_spec(fam), fam, n)
    assert [r["n"] for r in rows] == list(range(n + 1))
    for r in rows:
        assert r["status"] == "ok" and r["rel_err"] < tol, r
    return rows


def test_gamma_moments_factorial():
    rows = _rows(lag(), 8, 1e-8)
    assert [r["rho_n"] for r in rows] == pytest.approx([math.factorial(n) for n in range(9)])
    assert rows[0]["positivity"] == "positive"


def test_bessel_k_moments():
    rows = _rows(jac(), 8, 1e-6)
    want = [math.factorial(n) * math.gamma(n + 5) / math.gamma(5) for n in range(9)]
    assert [r["rho_n"] for r in rows] == pytest.approx(want, rel=1e-13)


def test_bessel_j_signed_moments():
    rows = _rows(fin(), 3, 1e-4)
    want = [math.factorial(n) * math.gamma(7) / math.gamma(7 - n) for n in range(4)]
    assert [r["rho_n"] for r in rows] == pytest.approx(want, rel=1e-13)
    assert rows[0]["positivity"] == "unchecked"


def test_meijer_moments():
    _rows(jac_deformed(), 3, 1e-3)


def test_meijer_moments_against_mpmath_density():
    fam = jac_deformed()
    spec = co.measure_spec(fam)
    g = spec.get("g")
    for J in (0.3, 2.0):
        ref = spec.get("scale") * float(mpmath.re(mpmath.meijerg([[], list(g.a)], [list(g.b), []], J)))
        assert co.measure_rho(spec, J) == pytest.approx(ref, rel=1e-8)


def test_deformed_finite_meijer_divergence_flag():
    fam = co.coherent_family(make_case("s2_plus_one", -8.5, 0.0), 0.0, delta=0.4)
    rows = co.verify_moments(co.measure_spec(fam), fam, fam.n_max)
    assert [r["status"] for r in rows] == ["divergent"] * (fam.n_max + 1)
    assert all(r["moment_quadrature"] is None for r in rows)


def test_integer_shift_has_no_meijer_density():
    fam = co.coherent_family(make_case("s2_plus_one", -9.0, 0.0), 0.0, delta=0.4)
    assert np.all(np.isfinite(co.moments(fam)))
    with pytest.raises(SpecMismatch):
        co.measure_spec(fam)


def test_signed_deformed_moments_are_real():
    fam = co.coherent_family(make_case("s2_plus_one", -9.0, 0.0), 0.0, delta=0.4)
    assert all(isinstance(r, float) for r in fam.rho)
    assert any(r < 0 for r in fam.rho[1:]) or all(r > 0 for r in fam.rho)


def test_family_errors():
    with pytest.raises(IndexBeyondCap):
        co.coherent_family(FIN, 4)
    with pytest.raises(IndexBeyondCap):
        co.energy(fin(), 4)
    with pytest.raises(IndexBeyondCap):
        co.coherent_family(FIN, 0, n_max=5)
    with pytest.raises(NotPowerWeight):
        co.coherent_family(make_case("one", -2.0, 0.0), 0.0, delta=1.0)
    with pytest.raises(NotInM):
        co.coherent_family(JAC, -2.0, delta=1.0)
    with pytest.raises(ParameterOutOfRange):
        co.coherent_family(FLAT, 0)
    with pytest.raises(IndexBeyondCap):
        co.verify_moments(co.measure_spec(fin()), fin(), 4)


def test_default_truncation():
    assert lag().n_max == co.DEFAULT_N_MAX
    assert co.coherent_family(LAG, 0, n_max=10).n_max == 10
