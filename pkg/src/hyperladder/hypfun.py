"""Polynomial solutions, associated functions and the undeformed ladder.

``phi_l`` returns the monic polynomial solution of
``sigma y'' + tau y' + lambda_l y = 0``.  The associated function of order
``m`` is ``kappa**m`` times the m-th derivative of it and is stored as a
:class:`HypFunction` holding ``m`` and the polynomial factor.  The lowering
and raising operators act exactly on that factor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import quadrature
from ._forms import KappaForm, apply_h_form, h_operator_values
from .cases import CanonicalCase, capital_lambda, lambda_l
from .errors import (IndexBeyondLambda, IndexMismatch, IndexOutOfRange, NoConvergence,
                     OutsideInterval, ParameterOutOfRange)


@dataclass(frozen=True)
class HypFunction:
    """``kappa(s)**m * P(s)`` with ``P = sum coeffs[j] s**j``."""

    case: CanonicalCase
    l: int
    m: int
    coeffs: tuple[float, ...]
    deformed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in np.atleast_1d(self.coeffs)))
        if self.m < 0:
            raise IndexOutOfRange(f"m={self.m} must be nonnegative")

    @classmethod
    def from_poly(cls, case: CanonicalCase, m: int, coeffs) -> "HypFunction":
        """Arbitrary ``kappa**m P``; ``l`` is set to ``m + deg P``."""
        c = np.trim_zeros(np.atleast_1d(np.asarray(coeffs, dtype=float)), "b")
        deg = max(len(c) - 1, 0)
        return cls(case, m + deg, m, c if len(c) else (0.0,))

    @property
    def poly(self) -> np.ndarray:
        return np.array(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def form(self) -> KappaForm:
        return KappaForm(self.case, self.m, self.poly, np.zeros(1))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.case.kappa(s) ** self.m * npoly.polyval(s, self.poly)

    def scaled(self, c: float) -> "HypFunction":
        return HypFunction(self.case, self.l, self.m, self.poly * c, self.deformed)

    def to_dict(self) -> dict:
        return {"case": self.case.to_dict(), "l": int(self.l), "m": int(self.m),
                "coeffs": [float(c) for c in self.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "HypFunction":
        case = CanonicalCase.from_dict(data["case"])
        return cls(case, int(data["l"]), int(data["m"]), tuple(data["coeffs"]))


@dataclass(frozen=True)
class LadderParams:
    """Index of the undeformed ladder pair ``A_m``, ``A_m^+``."""

    m: int

    def check(self, case: CanonicalCase) -> None:
        if self.m < 0 or not self.m + 1 < capital_lambda(case):
            raise IndexBeyondLambda(f"m+1={self.m + 1} is not below Lambda={capital_lambda(case)}")


def _require_classical(case: CanonicalCase) -> None:
    if not case.classical:
        raise ParameterOutOfRange(
            f"{case.sigma_tag} with alpha={case.alpha}, beta={case.beta} has no orthogonal polynomial family"
        )


def _check_l(case: CanonicalCase, l: int) -> None:
    if l < 0 or int(l) != l:
        raise IndexOutOfRange(f"l={l} must be a nonnegative integer")
    cap = capital_lambda(case)
    if not l < cap:
        raise IndexBeyondLambda(f"l={l} is not below Lambda={cap}")


def phi_coefficients(case: CanonicalCase, l: int) -> np.ndarray:
    """Coefficients of the monic polynomial solution of degree ``l``.

    Matching powers of ``s`` gives
    ``c_j (lambda_l - lambda_j) = -(j+1)(sigma1 j + beta) c_{j+1} - sigma0 (j+2)(j+1) c_{j+2}``,
    solved from ``c_l = 1`` downward.
    """
    s0, s1, _ = case.sigma_coeffs
    lam = lambda_l(case, l)
    c = np.zeros(l + 3)
    c[l] = 1.0
    for j in range(l - 1, -1, -1):
        rhs = -(j + 1) * (s1 * j + case.beta) * c[j + 1] - s0 * (j + 2) * (j + 1) * c[j + 2]
        c[j] = rhs / (lam - lambda_l(case, j))
    return c[: l + 1]


def phi_l(case: CanonicalCase, l: int) -> HypFunction:
    _require_classical(case)
    _check_l(case, l)
    return HypFunction(case, l, 0, phi_coefficients(case, l))


def ode_residual(case: CanonicalCase, f: HypFunction, s) -> np.ndarray:
    """``sigma y'' + tau y' + lambda_l y`` for the polynomial factor of ``f``."""
    p = f.poly
    s = np.asarray(s, dtype=float)
    d1 = npoly.polyder(p) if p.size > 1 else np.zeros(1)
    d2 = npoly.polyder(d1) if d1.size > 1 else np.zeros(1)
    return (case.sigma(s) * npoly.polyval(s, d2) + case.tau(s) * npoly.polyval(s, d1)
            + lambda_l(case, f.l) * npoly.polyval(s, p))


# ---------------------------------------------------------------------------
# classical polynomials, evaluated independently of the coefficient solve
# ---------------------------------------------------------------------------


def _hermite(n: int, x):
    h_prev, h = np.ones_like(x), 2.0 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def _rising_binom(top_shift, n: int, k: int):
    """``binom(n + a, k)`` as ``prod_{i=n-k+1}^{n} (a + i) / k!``; ``a`` may be complex."""
    out = 1.0 + 0j
    for i in range(n - k + 1, n + 1):
        out *= top_shift + i
    return out / math.factorial(k)


def _laguerre(n: int, a, x):
    return sum((-1) ** k * _rising_binom(a, n, n - k) * x**k / math.factorial(k) for k in range(n + 1))


def _jacobi(n: int, a, b, x):
    total = 0.0
    for k in range(n + 1):
        total = total + (_rising_binom(a, n, n - k) * _rising_binom(b, n, k)
                         * ((x - 1) / 2) ** k * ((x + 1) / 2) ** (n - k))
    return total


def classical_oracle(case: CanonicalCase, l: int, s):
    """Classical Hermite, Laguerre or Jacobi expression proportional to ``phi_l``."""
    _check_l(case, l)
    s = np.asarray(s, dtype=float)
    al, be = case.alpha, case.beta
    tag = case.sigma_tag
    if tag == "one":
        return _hermite(l, math.sqrt(-al / 2.0) * s - be / math.sqrt(-2.0 * al))
    if tag == "s":
        return np.real(_laguerre(l, be - 1.0, -al * s))
    if tag == "one_minus_s2":
        return np.real(_jacobi(l, -(al + be) / 2.0 - 1.0, (-al + be) / 2.0 - 1.0, s))
    if tag == "s2_minus_one":
        return np.real(_jacobi(l, (al - be) / 2.0 - 1.0, (al + be) / 2.0 - 1.0, -s))
    if tag == "s2":
        return np.real((s / be) ** l * _laguerre(l, 1.0 - al - 2.0 * l, be / s))
    a = (al + 1j * be) / 2.0 - 1.0
    b = (al - 1j * be) / 2.0 - 1.0
    return np.real(1j**l * _jacobi(l, a, b, 1j * s))


# ---------------------------------------------------------------------------
# associated functions and ladder operators
# ---------------------------------------------------------------------------


def associated(case: CanonicalCase, l: int, m: int) -> HypFunction:
    if not (isinstance(m, (int, np.integer)) and 0 <= m <= l):
        raise IndexOutOfRange(f"need 0 <= m <= l, got l={l}, m={m}")
    base = phi_l(case, l)
    return HypFunction(case, l, m, npoly.polyder(base.poly, m) if m else base.poly)


def _poly_der(p: np.ndarray) -> np.ndarray:
    return npoly.polyder(p) if p.size > 1 else np.zeros(1)


def apply_A(case: CanonicalCase, m: int, f: HypFunction) -> HypFunction:
    """``A_m = kappa d/ds - m kappa'``; maps ``kappa**m P`` to ``kappa**(m+1) P'``."""
    if f.m != m:
        raise IndexMismatch(f"A_{m} needs a function of index {m}, got {f.m}")
    return HypFunction(case, f.l, m + 1, _poly_der(f.poly), f.deformed)


def apply_A_plus(case: CanonicalCase, m: int, f: HypFunction) -> HypFunction:
    """``A_m^+ = -kappa d/ds - tau/kappa - (m-1) kappa'``.

    Maps ``kappa**(m+1) P`` to ``kappa**m (-sigma P' - m sigma' P - tau P)``.
    """
    if f.m != m + 1 or m < 0:
        raise IndexMismatch(f"A_{m}^+ needs a function of index {m + 1}, got {f.m}")
    sig = np.array(case.sigma_coeffs)
    dsig = _poly_der(sig)
    tau = np.array(case.tau_coeffs)
    p = f.poly
    q = -npoly.polymul(sig, _poly_der(p))
    q = npoly.polyadd(q, -m * npoly.polymul(dsig, p))
    q = npoly.polyadd(q, -npoly.polymul(tau, p))
    return HypFunction(case, f.l, m, q, f.deformed)


def _numeric_derivatives(f, s: float):
    h = 1e-3 * max(1.0, abs(s))
    # fourth-order central differences
    pts = s + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    v = np.asarray([f(x) for x in pts], dtype=float)
    d1 = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h)
    d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    return v[2], d1, d2


def apply_H(case: CanonicalCase, m: float, f, s):
    """Pointwise ``H_m f`` at ``s``.

    Exact derivatives are used for :class:`HypFunction` and for anything
    exposing a ``form()`` method; other callables are differentiated by
    fourth-order finite differences.
    """
    if not case.contains(s):
        raise OutsideInterval(f"s={s!r} not inside {case.interval}")
    if isinstance(f, KappaForm):
        return apply_h_form(case, m, f, s)
    if hasattr(f, "form"):
        return apply_h_form(case, m, f.form(), s)
    vals = [_numeric_derivatives(f, float(x)) for x in np.atleast_1d(s)]
    f0, f1, f2 = (np.array(v) for v in zip(*vals))
    out = h_operator_values(case, m, f0, f1, f2, np.atleast_1d(s))
    return out if np.ndim(s) else float(out[0])


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def norm_squared(f: HypFunction, tol: float = quadrature.DEFAULT_TOL) -> float:
    return quadrature.inner_product(f.case, f, f, tol)


def norm(case: CanonicalCase, l: int, m: int, tol: float = quadrature.DEFAULT_TOL,
         check_rtol: float = 1e-6) -> float:
    """Quadrature norm of ``Phi_{l,m}``, cross-checked against the ladder chain.

    The chain predicts ``||Phi_{l,m}||^2 = prod_{j<m} (lambda_l - lambda_j) ||Phi_{l,0}||^2``;
    a relative disagreement above ``check_rtol`` raises :class:`NoConvergence`.
    """
    value = math.sqrt(norm_squared(associated(case, l, m), tol))
    if m:
        base = math.sqrt(norm_squared(associated(case, l, 0), tol))
        lam = lambda_l(case, l)
        chain = base * math.sqrt(math.prod(lam - lambda_l(case, j) for j in range(m)))
        if abs(value - chain) > check_rtol * chain:
            raise NoConvergence(f"norm of Phi_({l},{m}) disagrees with the ladder chain: {value} vs {chain}")
    return value


def normalized(case: CanonicalCase, l: int, m: int, tol: float = quadrature.DEFAULT_TOL) -> HypFunction:
    f = associated(case, l, m)
    c = 1.0 / norm(case, l, m, tol)
    if f.poly[-1] < 0:
        c = -c
    return f.scaled(c)


__all__ = [
    "HypFunction", "LadderParams", "phi_l", "phi_coefficients", "ode_residual", "classical_oracle",
    "associated", "apply_A", "apply_A_plus", "apply_H", "norm", "norm_squared", "normalized",
]
