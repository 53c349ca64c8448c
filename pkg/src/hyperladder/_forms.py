"""Closed algebra of functions ``exp(-eps G(s)) kappa(s)**p (P0(s) + kappa(s) P1(s))``.

``kappa = sqrt(sigma)`` and ``G`` is a primitive of ``1/kappa``, so
``kappa * d/ds exp(-eps G) = -eps exp(-eps G)``.  With ``P0`` and ``P1``
polynomials this class is closed under ``d/ds``, multiplication by
polynomials and by powers of ``kappa``, which is all the ladder operators
need.  Every operation is an exact map on coefficient arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .cases import CanonicalCase


def _arr(c) -> np.ndarray:
    a = np.atleast_1d(np.asarray(c, dtype=float))
    return a if a.size else np.zeros(1)


def padd(a, b) -> np.ndarray:
    return npoly.polyadd(_arr(a), _arr(b))


def pmul(a, b) -> np.ndarray:
    return npoly.polymul(_arr(a), _arr(b))


def pder(a) -> np.ndarray:
    a = _arr(a)
    return npoly.polyder(a) if a.size > 1 else np.zeros(1)


def pscale(a, c: float) -> np.ndarray:
    return _arr(a) * c


def ppow(a, n: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(n):
        out = pmul(out, a)
    return out


def trim(a, tol: float = 0.0) -> np.ndarray:
    a = _arr(a).copy()
    scale = np.max(np.abs(a)) if a.size else 0.0
    n = a.size
    while n > 1 and abs(a[n - 1]) <= tol * scale:
        n -= 1
    return a[:n]


def primitive_of_inverse_kappa(case: CanonicalCase, s):
    """``G(s)`` with ``G' = 1/kappa`` on the interval of ``case``."""
    s = np.asarray(s, dtype=float)
    tag = case.sigma_tag
    if tag == "one":
        return s
    if tag == "s":
        return 2.0 * np.sqrt(s)
    if tag == "one_minus_s2":
        return np.arcsin(s)
    if tag == "s2_minus_one":
        return np.arccosh(s)
    if tag == "s2":
        return np.log(s)
    return np.arcsinh(s)


@dataclass(frozen=True)
class KappaForm:
    case: CanonicalCase
    p: float
    P0: np.ndarray
    P1: np.ndarray
    eps: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "P0", _arr(self.P0))
        object.__setattr__(self, "P1", _arr(self.P1))

    # polynomials of sigma -------------------------------------------------
    @property
    def _sigma(self) -> np.ndarray:
        return np.array(self.case.sigma_coeffs)

    @property
    def _dsigma(self) -> np.ndarray:
        return pder(self._sigma)

    @property
    def _tau(self) -> np.ndarray:
        return np.array(self.case.tau_coeffs)

    # evaluation ------------------------------------------------------------
    def __call__(self, s):
        return self.evaluate(s)

    def evaluate(self, s, da=None, db=None):
        """Value at ``s``; endpoint distances, when given, keep ``kappa`` accurate near finite ends."""
        s = np.asarray(s, dtype=float)
        if da is None or db is None:
            k = self.case.kappa(s)
        else:
            k = np.sqrt(self.case.sigma_near_ends(s, da, db))
        with np.errstate(all="ignore"):
            val = k**self.p * (npoly.polyval(s, self.P0) + k * npoly.polyval(s, self.P1))
            if self.eps != 0.0:
                val = val * np.exp(-self.eps * primitive_of_inverse_kappa(self.case, s))
        return val

    # structure -------------------------------------------------------------
    def with_parts(self, p, P0, P1) -> "KappaForm":
        return KappaForm(self.case, p, P0, P1, self.eps)

    def scale(self, c: float) -> "KappaForm":
        return self.with_parts(self.p, pscale(self.P0, c), pscale(self.P1, c))

    def times_poly(self, q) -> "KappaForm":
        return self.with_parts(self.p, pmul(self.P0, q), pmul(self.P1, q))

    def times_kappa(self, n: int = 1) -> "KappaForm":
        return self.with_parts(self.p + n, self.P0, self.P1)

    def at_power(self, p_new: float) -> "KappaForm":
        """Same function rewritten with base power ``p_new <= p``."""
        d = self.p - p_new
        di = int(round(d))
        if abs(d - di) > 1e-12 or di < 0:
            raise ValueError(f"cannot lower power {self.p} to {p_new}")
        half = ppow(self._sigma, di // 2)
        if di % 2 == 0:
            return self.with_parts(p_new, pmul(self.P0, half), pmul(self.P1, half))
        # kappa (P0 + kappa P1) = sigma P1 + kappa P0
        return self.with_parts(p_new, pmul(pmul(self.P1, self._sigma), half), pmul(self.P0, half))

    def __add__(self, other: "KappaForm") -> "KappaForm":
        if other.eps != self.eps:
            raise ValueError("cannot add forms with different exponential factors")
        p = min(self.p, other.p)
        a, b = self.at_power(p), other.at_power(p)
        return self.with_parts(p, padd(a.P0, b.P0), padd(a.P1, b.P1))

    def __sub__(self, other: "KappaForm") -> "KappaForm":
        return self + other.scale(-1.0)

    # calculus --------------------------------------------------------------
    def derivative(self) -> "KappaForm":
        sig, dsig, p, e = self._sigma, self._dsigma, self.p, self.eps
        A = padd(padd(pmul(sig, pder(self.P0)), pscale(pmul(dsig, self.P0), p / 2.0)),
                 pscale(pmul(sig, self.P1), -e))
        B = padd(padd(pmul(sig, pder(self.P1)), pscale(pmul(dsig, self.P1), (p + 1) / 2.0)),
                 pscale(self.P0, -e))
        return self.with_parts(p - 2, A, B)

    def kappa_derivative(self) -> "KappaForm":
        """``kappa * f'``."""
        return self.derivative().times_kappa()

    def times_dkappa(self) -> "KappaForm":
        """``kappa' * f`` with ``kappa' = sigma'/(2 kappa)``."""
        return self.with_parts(self.p - 1, pmul(self.P0, self._dsigma / 2.0), pmul(self.P1, self._dsigma / 2.0))

    def times_tau_over_kappa(self) -> "KappaForm":
        return self.with_parts(self.p - 1, pmul(self.P0, self._tau), pmul(self.P1, self._tau))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.P0) <= tol) and np.all(np.abs(self.P1) <= tol))


def ladder_down(f: KappaForm, m: float, shift: float = 0.0) -> KappaForm:
    """``(kappa d/ds - m kappa' + shift) f``."""
    out = f.kappa_derivative() - f.times_dkappa().scale(m)
    if shift != 0.0:
        out = out + f.scale(shift)
    return out


def ladder_up(f: KappaForm, m: float, shift: float = 0.0) -> KappaForm:
    """``(-kappa d/ds - tau/kappa - (m-1) kappa' + shift) f``."""
    out = f.kappa_derivative().scale(-1.0) - f.times_tau_over_kappa() - f.times_dkappa().scale(m - 1.0)
    if shift != 0.0:
        out = out + f.scale(shift)
    return out


def h_operator_values(case: CanonicalCase, m: float, f0, f1, f2, s) -> np.ndarray:
    """Pointwise ``H_m f`` from values of ``f, f', f''`` at ``s``."""
    s = np.asarray(s, dtype=float)
    sig, dsig, tau = case.sigma(s), case.dsigma(s), case.tau(s)
    sdd = float(case.sigma_dd)
    potential = (m * (m - 2) / 4.0 * dsig**2 / sig + m * tau / 2.0 * dsig / sig
                 - 0.5 * m * (m - 2) * sdd - m * case.alpha)
    return -sig * f2 - tau * f1 + potential * f0


def apply_h_form(case: CanonicalCase, m: float, f: KappaForm, s) -> np.ndarray:
    d1 = f.derivative()
    d2 = d1.derivative()
    return h_operator_values(case, m, f(s), d1(s), d2(s), s)


def h_operator_form(case: CanonicalCase, m: float, f: KappaForm) -> KappaForm:
    """``H_m f`` as an exact form; the ``1/sigma`` terms lower the kappa power by two."""
    sig = np.array(case.sigma_coeffs)
    dsig = pder(sig)
    tau = np.array(case.tau_coeffs)
    d1 = f.derivative()
    out = d1.derivative().times_poly(-sig) - d1.times_poly(tau)
    singular = padd(pscale(pmul(dsig, dsig), m * (m - 2) / 4.0), pscale(pmul(tau, dsig), m / 2.0))
    out = out + f.times_poly(singular).times_kappa(-2)
    const = -0.5 * m * (m - 2) * case.sigma_dd - m * case.alpha
    return out + f.scale(const)
