"""Weighted inner products and half-line integrals.

Double-exponential rules cover every canonical interval: tanh-sinh on finite
intervals, exp-sinh on half lines and sinh-sinh on the real line.  The step
is halved until two consecutive levels agree.  Rules also report the
distance of each node to the finite endpoints, so weights with algebraic
endpoint singularities are evaluated without cancellation in ``1 - s``.

Oscillatory half-line integrals are summed between user-supplied zeros and
the partial sums are accelerated with Wynn's epsilon algorithm.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import NoConvergence

DEFAULT_TOL = float(os.environ.get("HYPERLADDER_TOL", "1e-10"))

_T_MAX = 6.0
_MIN_LEVEL = 3
_MAX_LEVEL = 11
_HALF_PI = 0.5 * math.pi
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of one quadrature level.

    ``da`` and ``db`` hold the distances of each node to the endpoints
    (``inf`` for an infinite endpoint).
    """

    kind: str
    points: np.ndarray
    weights: np.ndarray
    da: np.ndarray
    db: np.ndarray
    target_tol: float = DEFAULT_TOL

    @property
    def nodes(self) -> list[tuple[float, float]]:
        return list(zip(self.points.tolist(), self.weights.tolist()))


def _de_nodes(a: float, b: float, t: np.ndarray):
    """Map abscissae ``t`` to (points, jacobian, da, db) for the interval (a, b)."""
    ch = np.cosh(t)
    sh = np.sinh(t)
    with np.errstate(over="ignore", under="ignore"):
        if math.isfinite(a) and math.isfinite(b):
            half = 0.5 * (b - a)
            u = _HALF_PI * sh
            # 1/(1+exp(-2u)) and 1/(1+exp(2u)) keep full relative precision near the ends
            da = (b - a) / (1.0 + np.exp(-2.0 * u))
            db = (b - a) / (1.0 + np.exp(2.0 * u))
            x = np.where(t < 0, a + da, b - db)
            jac = half * _HALF_PI * ch / np.cosh(u) ** 2
            return "tanh_sinh", x, jac, da, db
        if math.isfinite(a):
            e = np.exp(_HALF_PI * sh)
            jac = _HALF_PI * ch * e
            return "half_line_exp_map", a + e, jac, e, np.full_like(e, np.inf)
        if math.isfinite(b):
            e = np.exp(_HALF_PI * sh)
            jac = _HALF_PI * ch * e
            return "half_line_exp_map", b - e, jac, np.full_like(e, np.inf), e
        u = _HALF_PI * sh
        x = np.sinh(u)
        jac = _HALF_PI * ch * np.cosh(u)
        inf = np.full_like(x, np.inf)
        return "sinh_sinh", x, jac, inf, inf


def build_rule(a: float, b: float, level: int, tol: float = DEFAULT_TOL) -> QuadratureRule:
    """Full double-exponential rule with step ``2**-level``; zero-weight and boundary nodes dropped."""
    h = 2.0**-level
    t = np.arange(-_T_MAX, _T_MAX + h / 2, h)
    kind, x, jac, da, db = _de_nodes(a, b, t)
    w = h * jac
    # nodes that round onto an endpoint are dropped so every point is strictly interior
    keep = np.isfinite(x) & np.isfinite(w) & (w > 0) & (da > 0) & (db > 0) & (x > a) & (x < b)
    return QuadratureRule(kind, x[keep], w[keep], da[keep], db[keep], tol)


def _sum_level(func, a, b, t, h):
    kind, x, jac, da, db = _de_nodes(a, b, t)
    ok = np.isfinite(x) & np.isfinite(jac) & (jac > 0) & (da > 0) & (db > 0)
    vals = np.zeros_like(t)
    if np.any(ok):
        with np.errstate(all="ignore"):
            fv = np.asarray(func(x[ok], da[ok], db[ok]), dtype=float) * jac[ok]
        # non-finite values only occur at extreme nodes where the true integrand vanishes
        vals[ok] = np.where(np.isfinite(fv), fv, 0.0)
    return h * vals.sum(), h * np.abs(vals).sum()


def integrate_de(func3: Callable, a: float, b: float, tol: float = DEFAULT_TOL,
                 return_error: bool = False):
    """Integrate ``func3(s, da, db)`` over (a, b) by a refining DE rule.

    Convergence is declared when two consecutive levels differ by at most
    ``max(tol, 64 eps * integral of |f|)``; the returned error estimate is
    that difference.
    """
    h = 1.0
    t = np.arange(-_T_MAX, _T_MAX + h / 2, h)
    total, l1 = _sum_level(func3, a, b, t, h)
    prev = total
    for level in range(1, _MAX_LEVEL + 1):
        h_new = h / 2.0
        t_odd = np.arange(-_T_MAX + h_new, _T_MAX, h)
        add, add_l1 = _sum_level(func3, a, b, t_odd, h_new)
        total = 0.5 * total + add
        l1 = 0.5 * l1 + add_l1
        h = h_new
        err = abs(total - prev)
        if level >= _MIN_LEVEL and err <= max(tol, 64 * _EPS * l1):
            return (total, err) if return_error else total
        prev = total
    raise NoConvergence(f"DE quadrature on ({a}, {b}) stalled at error {err:.3e} > tol {tol:.1e}")


def integrate(f: Callable, a: float, b: float, tol: float = DEFAULT_TOL, return_error: bool = False):
    """Integrate a vectorized ``f(s)`` over (a, b); endpoints may be infinite."""
    return integrate_de(lambda s, da, db: f(s), a, b, tol, return_error)


def _value(f, s, da, db):
    """Evaluate with endpoint distances when ``f`` supports them."""
    if hasattr(f, "evaluate"):
        return f.evaluate(s, da, db)
    if hasattr(f, "form"):
        return f.form().evaluate(s, da, db)
    return f(s)


def inner_product(case, f: Callable, g: Callable, tol: float = DEFAULT_TOL, return_error: bool = False):
    """``<f, g> = int_a^b f g rho ds`` on the interval of ``case``."""
    a, b = case.interval

    def integrand(s, da, db):
        return _value(f, s, da, db) * _value(g, s, da, db) * case.weight(s, da, db)

    return integrate_de(integrand, a, b, tol, return_error)


def weighted_integral(case, f: Callable, tol: float = DEFAULT_TOL) -> float:
    """``int_a^b f rho ds``."""
    a, b = case.interval
    return integrate_de(lambda s, da, db: f(s) * case.weight(s, da, db), a, b, tol)


# --------------------------------------------------------------------------
# oscillatory tails
# --------------------------------------------------------------------------


def wynn_epsilon(partial_sums) -> float:
    """Wynn epsilon extrapolation of a sequence of partial sums."""
    s = [float(v) for v in partial_sums]
    if len(s) < 3:
        return s[-1]
    prev = [0.0] * (len(s) + 1)
    cur = s
    best = s[-1]
    for k in range(1, len(s)):
        nxt = []
        for j in range(len(cur) - 1):
            diff = cur[j + 1] - cur[j]
            if diff == 0.0:
                return cur[j + 1] if k % 2 == 1 else best
            nxt.append(prev[j + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            best = cur[-1]
        if len(cur) < 2:
            break
    return best


def gauss_legendre_rule(lo: float, hi: float, order: int = 24) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    pts = lo + half * (x + 1.0)
    return QuadratureRule("gauss_legendre_mapped", pts, half * w, pts - lo, hi - pts)


def half_line_integral(f: Callable, tol: float = DEFAULT_TOL, oscillatory: bool = False,
                       breakpoints: Iterable[float] | Callable[[int], np.ndarray] | None = None,
                       max_segments: int = 400, return_error: bool = False):
    """``int_0^inf f(x) dx``.

    Without ``oscillatory`` the exp-sinh rule is used.  With it, the integral
    over ``(0, x_1)`` is done by tanh-sinh and each segment between
    successive ``breakpoints`` (ideally zeros of the oscillating factor) by
    Gauss-Legendre; the alternating partial sums are accelerated by Wynn's
    epsilon algorithm until two successive estimates agree to ``tol``
    (relative to the size of the result, floored at 1).  ``breakpoints``
    may be a callable returning the first ``n`` points.
    """
    if not oscillatory:
        return integrate(f, 0.0, math.inf, tol, return_error)
    if breakpoints is None:
        raise ValueError("oscillatory integration needs the zeros of the oscillation as breakpoints")
    if callable(breakpoints):
        pts = np.asarray(breakpoints(max_segments + 1), dtype=float)
    else:
        pts = np.asarray(list(breakpoints), dtype=float)
    if pts.size < 4 or np.any(np.diff(pts) <= 0) or pts[0] <= 0:
        raise ValueError("breakpoints must be positive, increasing and at least four")
    head = integrate(f, 0.0, float(pts[0]), tol)
    sums = [head]
    estimates = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        rule = gauss_legendre_rule(float(lo), float(hi), 24)
        sums.append(sums[-1] + float(np.dot(rule.weights, f(rule.points))))
        if len(sums) >= 8:
            estimates.append(wynn_epsilon(sums[-24:]))
            if len(estimates) >= 3:
                err = max(abs(estimates[-1] - estimates[-2]), abs(estimates[-2] - estimates[-3]))
                if err <= tol * max(1.0, abs(estimates[-1])):
                    return (estimates[-1], err) if return_error else estimates[-1]
    raise NoConvergence("oscillatory tail did not converge; supply more breakpoints")
