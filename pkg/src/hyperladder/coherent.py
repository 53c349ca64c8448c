"""Gazeau-Klauder coherent states over the plain and deformed families.

A family fixes a base index ``m`` and lists the shifted energies
``e_n = lambda_{m+n} - lambda_m`` (or their deformed counterparts) with the
moment sequence ``rho_n = e_1 ... e_n``.  States are coefficient vectors in
the orthonormal basis ``|n>``.  The resolution of the identity reduces, after
the Bohr mean over ``gamma`` removes cross terms, to the moment identities
``int_0^inf J**n rho(J) dJ = rho_n``; :func:`verify_moments` checks them by
quadrature against the closed forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .cases import CanonicalCase, capital_lambda, lambda_l, m_set
from .errors import (FamilyMismatch, IndexBeyondCap, NoConvergence, NotInM, NotPowerWeight,
                     OutOfConvergenceDomain, ParameterOutOfRange, PoleAtNonpositiveInteger,
                     SpecMismatch)
from .specmath import (MeijerG2440Params, bessel_j, bessel_j_zeros, bessel_k, log_gamma,
                       meijer_g_2440, pfq)

DEFAULT_N_MAX = 64


def _lg(z) -> complex:
    return complex(log_gamma(complex(z)))


@dataclass(frozen=True)
class CoherentFamily:
    case: CanonicalCase
    m: float
    deformed: bool
    delta: float | None
    n_max: int
    e: tuple[float, ...] = field(repr=False)
    rho: tuple[float, ...] = field(repr=False)
    lambda_cap: float = math.inf
    beta_m: float | None = None
    alpha_m: float | None = None
    alpha_prime_m: float | None = None

    def label(self) -> str:
        base = f"{self.case.sigma_tag}(alpha={self.case.alpha:g},beta={self.case.beta:g}) m={self.m:g}"
        return base + (f" delta={self.delta:g}" if self.deformed else "")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lambda_cap)

    def key(self) -> tuple:
        return (self.case, self.m, self.deformed, self.delta, self.n_max)


# ---------------------------------------------------------------------------
# energies and moments
# ---------------------------------------------------------------------------


def _plain_energy(case: CanonicalCase, m: float, n: int) -> float:
    al = case.alpha
    if case.sigma_dd == 0:
        return -al * n
    if case.sigma_dd == -2:
        return n * (n + 2 * m - al - 1)
    return n * (1 - al - 2 * m - n)


def _deformed_energy(case: CanonicalCase, m: float, delta: float, n: int) -> float:
    tag = case.sigma_tag
    if tag == "s":
        bm = 2 * m + 2 * case.beta - 1
        return delta**2 / bm**2 * n * (n + bm) / (n + bm / 2) ** 2
    if tag == "one_minus_s2":
        am = (1 + case.alpha) / 2 - m
        # |n - a_m + i delta/(2 a_m)|^2 written out in real arithmetic
        return n * (n - 2 * am) * ((n - am) ** 2 + (delta / (2 * am)) ** 2) / (n - am) ** 2
    ap = (1 - case.alpha) / 2 - m
    w = delta / (2 * ap)
    return -n * (n - 2 * ap) * (n - ap - w) * (n - ap + w) / (n - ap) ** 2


def _plain_log_moment(case: CanonicalCase, m: float, n: int) -> float:
    al = case.alpha
    lf = math.lgamma(n + 1)
    if case.sigma_dd == 0:
        return n * math.log(-al) + lf
    if case.sigma_dd == -2:
        return lf + math.lgamma(n + 2 * m - al) - math.lgamma(2 * m - al)
    return lf + math.lgamma(1 - al - 2 * m) - math.lgamma(1 - al - 2 * m - n)


def _log_poch(x: complex, n: int) -> complex:
    """log of the rising factorial ``(x)_n`` as a sum, finite whenever no factor vanishes."""
    return sum((cmath.log(x + j) for j in range(n)), 0j)


def _deformed_moment(case: CanonicalCase, m: float, delta: float, n: int) -> float:
    """Closed Pochhammer-product moments; complex pairs combine to a real value."""
    tag = case.sigma_tag
    if tag == "s":
        bm = 2 * m + 2 * case.beta - 1
        lg = (2 * n * math.log(abs(delta / bm)) + math.lgamma(n + 1)
              + _log_poch(bm + 1, n) - 2 * _log_poch(bm / 2 + 1, n))
        return cmath.exp(lg).real
    if tag == "one_minus_s2":
        am = (1 + case.alpha) / 2 - m
        w = 1j * delta / (2 * am)
        sign = 1.0
    else:
        am = (1 - case.alpha) / 2 - m
        w = delta / (2 * am)
        sign = (-1.0) ** n
    lg = (math.lgamma(n + 1) + _log_poch(1 - 2 * am, n) + _log_poch(1 - am - w, n)
          + _log_poch(1 - am + w, n) - 2 * _log_poch(1 - am, n))
    return sign * cmath.exp(lg).real


def _top_index(cap: float, n_max: int | None) -> int:
    if math.isinf(cap):
        return DEFAULT_N_MAX if n_max is None else n_max
    top = math.ceil(cap) - 1
    if n_max is None:
        return top
    if n_max > top:
        raise IndexBeyondCap(f"n_max={n_max} is not below the cap {cap}")
    return n_max


def coherent_family(case: CanonicalCase, m: float, delta: float | None = None,
                    n_max: int | None = None) -> CoherentFamily:
    """Plain family when ``delta`` is None, deformed family otherwise."""
    if delta is None:
        if not case.classical:
            raise ParameterOutOfRange(f"{case.sigma_tag}: parameters admit no plain family")
        if m < 0 or int(m) != m or not m < capital_lambda(case):
            raise IndexBeyondCap(f"m={m} must be a natural number below Lambda={capital_lambda(case)}")
        cap = capital_lambda(case) - m
        top = _top_index(cap, n_max)
        e = tuple(float(_plain_energy(case, m, n)) for n in range(top + 1))
        rho = tuple(math.exp(_plain_log_moment(case, m, n)) for n in range(top + 1))
        return CoherentFamily(case, m, False, None, top, e, rho, cap)
    if case.k_exponent is None:
        raise NotPowerWeight(f"{case.sigma_tag}: weight is not a power of sigma")
    if case.sigma_tag == "s2":
        raise NotInM("the admissible set is empty for sigma = s^2")
    mset = m_set(case, delta)
    if m not in mset:
        raise NotInM(f"m={m} is not in M={mset.to_list()} for delta={delta}")
    if case.sigma_tag in ("s", "one_minus_s2"):
        cap = math.inf
    else:
        cap = mset.component(m)[1] - m
    top = _top_index(cap, n_max)
    e = tuple(float(_deformed_energy(case, m, delta, n)) for n in range(top + 1))
    rho = tuple(float(_deformed_moment(case, m, delta, n)) for n in range(top + 1))
    return CoherentFamily(
        case, m, True, float(delta), top, e, rho, cap,
        beta_m=2 * m + 2 * case.beta - 1,
        alpha_m=(1 + case.alpha) / 2 - m,
        alpha_prime_m=(1 - case.alpha) / 2 - m,
    )


def energy(family: CoherentFamily, n: int) -> float:
    if n < 0 or not n < family.lambda_cap:
        raise IndexBeyondCap(f"n={n} is not below the cap {family.lambda_cap}")
    if family.deformed:
        return float(_deformed_energy(family.case, family.m, family.delta, n))
    return float(_plain_energy(family.case, family.m, n))


def energy_from_eigenvalues(family: CoherentFamily, n: int) -> float:
    """``e_n`` as a difference of (deformed) eigenvalues, for cross-checking."""
    case, m = family.case, family.m
    if not family.deformed:
        return lambda_l(case, m + n) - lambda_l(case, m)
    k = case.k_exponent

    def tl(j):
        return lambda_l(case, j) - (family.delta / (2 * j + 2 * k + 1)) ** 2

    return tl(m + n) - tl(m)


def moments(family: CoherentFamily) -> np.ndarray:
    return np.array(family.rho)


def moments_by_product(family: CoherentFamily) -> np.ndarray:
    """Running products ``e_1 ... e_n``."""
    out = np.ones(family.n_max + 1)
    out[1:] = np.cumprod(np.array(family.e[1:]))
    return out


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def _check_J(family: CoherentFamily, J: float) -> None:
    if J < 0:
        raise OutOfConvergenceDomain(f"J={J} must be nonnegative")
    if family.deformed and family.case.sigma_tag == "s":
        radius = family.delta**2 / family.beta_m**2
        if not J < radius:
            raise OutOfConvergenceDomain(f"J={J} outside the convergence disc |J| < {radius}")


def _terms(family: CoherentFamily, J: float) -> np.ndarray:
    n = np.arange(family.n_max + 1)
    with np.errstate(divide="ignore"):
        logs = np.where(n == 0, 0.0, n * math.log(J) if J > 0 else -np.inf) - np.log(np.abs(family.rho))
    return np.exp(logs)


def normalizer(family: CoherentFamily, J: float) -> float:
    """``N(J) = sqrt(sum_n J**n / rho_n)`` over the truncated range."""
    _check_J(family, J)
    if J == 0:
        return 1.0
    t = _terms(family, J) * np.sign(family.rho)
    return math.sqrt(float(np.sum(t)))


def truncation_tail(family: CoherentFamily, J: float) -> float:
    """Size of the first omitted term ``J**(n_max+1)/rho_(n_max+1)`` (zero for finite families)."""
    if family.finite and family.n_max == math.ceil(family.lambda_cap) - 1:
        return 0.0
    n = family.n_max + 1
    if family.deformed:
        r = _deformed_moment(family.case, family.m, family.delta, n)
        return abs(J**n / r)
    return J**n / math.exp(_plain_log_moment(family.case, family.m, n))


def normalizer_closed_form(family: CoherentFamily, J: float) -> float | None:
    """Hypergeometric closed form of ``N(J)``; None for the finite sums."""
    _check_J(family, J)
    case, m = family.case, family.m
    if family.deformed:
        if case.sigma_tag == "s":
            bm = family.beta_m
            return math.sqrt(pfq([1 + bm / 2, 1 + bm / 2], [1 + bm], bm**2 * J / family.delta**2))
        if case.sigma_tag == "one_minus_s2":
            am = family.alpha_m
            w = 1j * family.delta / (2 * am)
            return math.sqrt(pfq([1 - am, 1 - am], [1 - 2 * am, 1 - am - w, 1 - am + w], J))
        return None
    if case.sigma_dd == 0:
        return math.exp(J / (-case.alpha) / 2.0)
    if case.sigma_dd == -2:
        return math.sqrt(pfq([], [2 * m - case.alpha], J))
    return None


@dataclass(frozen=True)
class CoherentState:
    family: CoherentFamily
    J: float
    gamma: float
    coeffs: np.ndarray = field(repr=False)

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def state(family: CoherentFamily, J: float, gamma: float) -> CoherentState:
    """``N(J)^-1 sum_n J**(n/2) rho_n**(-1/2) exp(-i e_n gamma) |n>``.

    A negative ``rho_n`` (signed deformed sequences) gets the principal
    square root, and the vector is scaled to unit length.
    """
    _check_J(family, J)
    root = np.sqrt(np.array(family.rho, dtype=complex))
    amp = np.sqrt(_terms(family, J) * np.abs(family.rho)) / root
    amp = amp / math.sqrt(float(np.sum(np.abs(amp) ** 2)))
    phases = np.exp(-1j * np.array(family.e) * gamma)
    return CoherentState(family, float(J), float(gamma), amp * phases)


def evolve(st: CoherentState, t: float) -> np.ndarray:
    """Coefficients of ``st`` after the phase rotation ``exp(-i e_n t)``."""
    return st.coeffs * np.exp(-1j * np.array(st.family.e) * t)


def overlap(a: CoherentState, b: CoherentState) -> complex:
    if a.family.key() != b.family.key():
        raise FamilyMismatch("states belong to different families")
    return complex(np.vdot(a.coeffs, b.coeffs))


def mean_energy(st: CoherentState) -> float:
    """``sum e_n |c_n|^2``; equals ``J`` for infinite families up to truncation."""
    return float(np.dot(np.array(st.family.e), np.abs(st.coeffs) ** 2))


def energy_gaps(family: CoherentFamily) -> np.ndarray:
    """Consecutive differences of ``e``; all positive means the gamma mean kills cross terms."""
    return np.diff(np.array(family.e))


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    params: tuple[tuple[str, object], ...]

    def get(self, name: str):
        return dict(self.params)[name]


def measure_spec(family: CoherentFamily) -> MeasureSpec:
    case, m = family.case, family.m
    al = case.alpha
    if not family.deformed:
        if case.sigma_dd == 0:
            return MeasureSpec("gamma_exp", (("alpha", al),))
        if case.sigma_dd == -2:
            # order al + 1 - 2m: the Mellin transform of x**(nu/2) K_nu(2 sqrt x) is Gamma(s) Gamma(s + nu)
            return MeasureSpec("bessel_k", (("nu", al + 1 - 2 * m), ("power", m - (1 + al) / 2),
                                            ("scale", 2.0 / math.gamma(2 * m - al))))
        nu = 1 - al - 2 * m
        return MeasureSpec("bessel_j", (("nu", nu), ("power", m - (1 - al) / 2),
                                        ("scale", math.gamma(nu))))
    if case.sigma_tag == "s":
        raise SpecMismatch("no resolution-of-identity measure is available for the deformed sigma = s family")
    if case.sigma_tag == "one_minus_s2":
        am = family.alpha_m
        w = 1j * family.delta / (2 * am)
    else:
        am = family.alpha_prime_m
        w = family.delta / (2 * am)
    try:
        pref = cmath.exp(2 * _lg(1 - am) - _lg(1 - 2 * am) - _lg(1 - am - w) - _lg(1 - am + w)).real
    except PoleAtNonpositiveInteger as exc:
        # the moments stay finite but the density normalizer is singular or zero
        raise SpecMismatch(f"no Meijer-G density for {family.label()}: {exc}") from exc
    g = MeijerG2440Params((-am, -am), (0.0, -2 * am, -am - w, -am + w))
    return MeasureSpec("meijer_g", (("g", g), ("scale", pref)))


def _check_spec(spec: MeasureSpec, family: CoherentFamily) -> None:
    if spec != measure_spec(family):
        raise SpecMismatch(f"measure {spec.kind} does not belong to family {family.label()}")


def measure_rho(spec: MeasureSpec, J):
    """The density ``rho(J)`` whose power moments are the family's ``rho_n``."""
    J = np.asarray(J, dtype=float)
    if spec.kind == "gamma_exp":
        al = spec.get("alpha")
        return -np.exp(J / al) / al
    if spec.kind == "bessel_k":
        return spec.get("scale") * J ** spec.get("power") * bessel_k(spec.get("nu"), 2.0 * np.sqrt(J))
    if spec.kind == "bessel_j":
        return spec.get("scale") * J ** spec.get("power") * bessel_j(spec.get("nu"), 2.0 * np.sqrt(J))
    if spec.kind == "meijer_g":
        return spec.get("scale") * meijer_g_2440(spec.get("g"), J)
    raise SpecMismatch(f"unknown measure kind {spec.kind!r}")


def measure_k(spec: MeasureSpec, family: CoherentFamily, J: float) -> float:
    """``k(J) = N(J)^2 rho(J)``."""
    _check_spec(spec, family)
    if J <= 0:
        raise OutOfConvergenceDomain("the measure is evaluated at J > 0")
    return normalizer(family, J) ** 2 * float(measure_rho(spec, J))


def _divergent(spec: MeasureSpec, n: int) -> bool:
    if spec.kind != "meijer_g":
        return False
    return any(complex(b).real + n + 1 <= 0 for b in spec.get("g").b)


def moment_quadrature(spec: MeasureSpec, n: int, scale: float = 1.0, tol: float = 1e-12) -> float:
    """``int_0^inf J**n rho(J) dJ``; ``tol`` is relative to ``scale``."""
    atol = tol * max(abs(scale), 1e-300)
    if spec.kind == "bessel_j":
        nu = spec.get("nu")
        # J = x^2 turns the measure into 2 x^(2n+2 power+1) J_nu(2x); split at its zeros
        p = 2 * n + 2 * spec.get("power") + 1
        c = spec.get("scale")
        zeros = bessel_j_zeros(nu, 400, start=nu + 10.0) / 2.0

        def integrand(x):
            return 2.0 * c * x**p * bessel_j(nu, 2.0 * x)

        return quadrature.half_line_integral(integrand, tol=tol, oscillatory=True, breakpoints=zeros)
    return quadrature.half_line_integral(lambda J: J**n * measure_rho(spec, J), tol=atol)


def verify_moments(spec: MeasureSpec, family: CoherentFamily, n_check: int,
                   tol: float = 1e-12) -> list[dict]:
    """Moment table ``{family, n, moment_quadrature, rho_n, rel_err, status}`` for ``n <= n_check``."""
    _check_spec(spec, family)
    if not n_check < family.lambda_cap or n_check > family.n_max:
        raise IndexBeyondCap(f"n_check={n_check} is not below the cap {family.lambda_cap}")
    rows = []
    for n in range(n_check + 1):
        rho_n = float(family.rho[n])
        row = {"family": family.label(), "n": n, "rho_n": rho_n}
        if _divergent(spec, n):
            row.update(moment_quadrature=None, rel_err=None, status="divergent")
        else:
            try:
                value = float(moment_quadrature(spec, n, rho_n, tol))
            except NoConvergence as exc:
                row.update(moment_quadrature=None, rel_err=None, status=f"no convergence: {exc}")
            else:
                row.update(moment_quadrature=value, rel_err=abs(value - rho_n) / abs(rho_n), status="ok")
        row["positivity"] = "unchecked" if spec.kind in ("bessel_j", "meijer_g") else "positive"
        rows.append(row)
    return rows
