"""Schrodinger form of the associated equations.

A change of variable with ``ds/dx = orientation * kappa(s(x))`` turns
``H_m`` into ``-d^2/dx^2 + V_m(x)`` acting on
``Psi_{l,m}(x) = sqrt(kappa rho) Phi_{l,m}(s(x))``.  The ladder operators
become ``orientation d/dx + W_m`` and ``-orientation d/dx + W_m``.

Derivatives in ``x`` are computed from exact ``s``-derivatives:
``d/dx = orientation kappa d/ds`` and ``d^2/dx^2 = sigma d^2/ds^2 + (sigma'/2) d/ds``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature
from ._forms import KappaForm
from .cases import CanonicalCase, lambda_l
from .errors import OutsideInterval
from .hypfun import associated

_X_INTERVALS = {
    "one": (-math.inf, math.inf),
    "one_minus_s2": (-0.5 * math.pi, 0.5 * math.pi),
    "s": (0.0, math.inf),
    "s2_minus_one": (0.0, math.inf),
    "s2": (-math.inf, math.inf),
    "s2_plus_one": (-math.inf, math.inf),
}

# plotting windows for infinite ends
_X_WINDOWS = {
    "one": (-6.0, 6.0),
    "one_minus_s2": (-0.5 * math.pi, 0.5 * math.pi),
    "s": (0.0, 12.0),
    "s2_minus_one": (0.0, 5.0),
    "s2": (-4.0, 4.0),
    "s2_plus_one": (-4.0, 4.0),
}


def _forward(tag: str, x):
    if tag == "one":
        return x
    if tag == "one_minus_s2":
        return np.sin(x)
    if tag == "s":
        return x * x / 4.0
    if tag == "s2_minus_one":
        return np.cosh(x)
    if tag == "s2":
        return np.exp(x)
    return np.sinh(x)


def _backward(tag: str, s):
    if tag == "one":
        return s
    if tag == "one_minus_s2":
        return np.arcsin(s)
    if tag == "s":
        return 2.0 * np.sqrt(s)
    if tag == "s2_minus_one":
        return np.arccosh(s)
    if tag == "s2":
        return np.log(s)
    return np.arcsinh(s)


@dataclass(frozen=True)
class VariableMap:
    case: CanonicalCase
    orientation: int
    x_interval: tuple[float, float]

    def s_of_x(self, x):
        return _forward(self.case.sigma_tag, self.orientation * np.asarray(x, dtype=float))

    def x_of_s(self, s):
        return self.orientation * _backward(self.case.sigma_tag, np.asarray(s, dtype=float))

    def jacobian(self, x):
        """``ds/dx``."""
        return self.orientation * self.case.kappa(self.s_of_x(x))

    def contains(self, x) -> bool:
        a, b = self.x_interval
        x = np.asarray(x)
        return bool(np.all((x > a) & (x < b)))

    def check(self, x) -> None:
        if not self.contains(x):
            raise OutsideInterval(f"x={x!r} not inside {self.x_interval}")

    def grid(self, count: int = 200, margin: float = 1e-3) -> np.ndarray:
        """Uniform interior grid; finite ends are kept ``margin`` away."""
        lo, hi = _X_WINDOWS[self.case.sigma_tag]
        if self.orientation == -1:
            lo, hi = -hi, -lo
        a, b = self.x_interval
        if math.isfinite(a):
            lo = max(lo, a + margin)
        if math.isfinite(b):
            hi = min(hi, b - margin)
        return np.linspace(lo, hi, count)


def build_map(case: CanonicalCase, orientation: int = 1) -> VariableMap:
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    a, b = _X_INTERVALS[case.sigma_tag]
    if orientation == -1:
        a, b = -b, -a
    return VariableMap(case, orientation, (a, b))


# ---------------------------------------------------------------------------
# superpotential and potentials, as functions of s
# ---------------------------------------------------------------------------


def _numerator(case: CanonicalCase, m: float, s):
    """``2 tau + (2m - 1) sigma'`` and its s-derivative."""
    n = 2.0 * case.tau(s) + (2.0 * m - 1.0) * case.dsigma(s)
    dn = 2.0 * case.alpha + (2.0 * m - 1.0) * case.sigma_dd
    return n, dn


def _w_of_s(case: CanonicalCase, m: float, s):
    n, _ = _numerator(case, m, s)
    return -n / (4.0 * case.kappa(s))


def _kappa_dw_ds(case: CanonicalCase, m: float, s):
    """``kappa dW/ds``, which equals ``orientation dW/dx``."""
    n, dn = _numerator(case, m, s)
    return -dn / 4.0 + n * case.dsigma(s) / (8.0 * case.sigma(s))


def superpotential(vmap: VariableMap, m: float, x):
    """``W_m(x) = -(2 tau + (2m-1) sigma') / (4 kappa)`` at ``s(x)``."""
    vmap.check(x)
    return _w_of_s(vmap.case, m, vmap.s_of_x(x))


def superpotential_derivative(vmap: VariableMap, m: float, x):
    """``dW_m/dx``."""
    vmap.check(x)
    return vmap.orientation * _kappa_dw_ds(vmap.case, m, vmap.s_of_x(x))


def potential(vmap: VariableMap, m: float, x):
    """``V_m = W_m^2 - orientation W_m' + lambda_m``."""
    vmap.check(x)
    s = vmap.s_of_x(x)
    return _w_of_s(vmap.case, m, s) ** 2 - _kappa_dw_ds(vmap.case, m, s) + lambda_l(vmap.case, m)


def partner_potential(vmap: VariableMap, m: float, x):
    """``W_m^2 + orientation W_m' + lambda_m``, equal to ``V_{m+1}``."""
    vmap.check(x)
    s = vmap.s_of_x(x)
    return _w_of_s(vmap.case, m, s) ** 2 + _kappa_dw_ds(vmap.case, m, s) + lambda_l(vmap.case, m)


def deformed_potential(vmap: VariableMap, m: float, delta: float, x):
    """``V_m - delta kappa'(s(x))``."""
    return potential(vmap, m, x) - delta * vmap.case.dkappa(vmap.s_of_x(x))


# ---------------------------------------------------------------------------
# transformed eigenfunctions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformedFunction:
    """``Psi(x) = sqrt(kappa rho)(s) F(s)`` with ``F`` an exact form and ``s = s(x)``."""

    vmap: VariableMap
    form: KappaForm

    def _parts(self, x):
        case = self.vmap.case
        s = self.vmap.s_of_x(x)
        sig, dsig, tau = case.sigma(s), case.dsigma(s), case.tau(s)
        with np.errstate(all="ignore"):
            h = np.exp(0.5 * (0.5 * np.log(sig) + case.log_weight(s)))
        u = (2.0 * tau - dsig) / (4.0 * sig)
        du = ((2.0 * case.alpha - case.sigma_dd) * sig - (2.0 * tau - dsig) * dsig) / (4.0 * sig**2)
        d1 = self.form.derivative()
        f0, f1, f2 = self.form(s), d1(s), d1.derivative()(s)
        return s, sig, dsig, h, u, du, f0, f1, f2

    def __call__(self, x):
        _, _, _, h, _, _, f0, _, _ = self._parts(x)
        return h * f0

    def derivative(self, x):
        s, sig, _, h, u, _, f0, f1, _ = self._parts(x)
        return self.vmap.orientation * np.sqrt(sig) * h * (u * f0 + f1)

    def second_derivative(self, x):
        s, sig, dsig, h, u, du, f0, f1, f2 = self._parts(x)
        g1 = h * (u * f0 + f1)
        g2 = h * ((du + u * u) * f0 + 2.0 * u * f1 + f2)
        return sig * g2 + 0.5 * dsig * g1


def psi_function(vmap: VariableMap, m: int, l: int) -> TransformedFunction:
    return TransformedFunction(vmap, associated(vmap.case, l, m).form())


def psi(vmap: VariableMap, m: int, l: int, x):
    """``Psi_{l,m}(x) = sqrt(kappa(s) rho(s)) Phi_{l,m}(s)`` at ``s = s(x)``."""
    vmap.check(x)
    return psi_function(vmap, m, l)(x)


def transformed(vmap: VariableMap, f) -> TransformedFunction:
    """Transform any object exposing ``form()`` (plain or deformed family member)."""
    return TransformedFunction(vmap, f.form())


def _x_derivative(f, x):
    if hasattr(f, "derivative"):
        return f.derivative(x)
    h = 1e-4 * np.maximum(1.0, np.abs(x))
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def ladder_x(vmap: VariableMap, m: float, f: Callable, x, dagger: bool = False):
    """``(orientation d/dx + W_m) f``, or ``(-orientation d/dx + W_m) f`` when ``dagger``."""
    vmap.check(x)
    sign = -1.0 if dagger else 1.0
    return sign * vmap.orientation * _x_derivative(f, x) + superpotential(vmap, m, x) * f(x)


def schrodinger_residual(vmap: VariableMap, m: float, f: TransformedFunction, eigenvalue: float, x,
                         potential_fn=None):
    """``-Psi'' + V Psi - eigenvalue Psi`` on ``x``."""
    v = potential(vmap, m, x) if potential_fn is None else potential_fn(x)
    return -f.second_derivative(x) + v * f(x) - eigenvalue * f(x)


def x_inner_product(vmap: VariableMap, f: Callable, g: Callable, tol: float = quadrature.DEFAULT_TOL) -> float:
    a, b = vmap.x_interval
    return quadrature.integrate(lambda x: f(x) * g(x), a, b, tol)


@dataclass(frozen=True)
class SchrodingerFamily:
    vmap: VariableMap
    m: int

    def W(self, x):
        return superpotential(self.vmap, self.m, x)

    def V(self, x):
        return potential(self.vmap, self.m, x)

    def psi(self, l: int) -> TransformedFunction:
        return psi_function(self.vmap, self.m, l)
