"""Scalar special functions: log-Gamma, Bessel K and J, pFq, and a Meijer-G evaluator.

Everything here works in double precision.  ``log_gamma`` and the Meijer-G
engine accept numpy arrays; the Bessel functions accept an array ``x`` for a
scalar order.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ContourFailure,
    DivergentSeries,
    NonpositiveArgument,
    PoleAtNonpositiveInteger,
)

_EPS = np.finfo(float).eps
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Taylor coefficients of 1/Gamma(1+x) about x = 0
_RGAMMA1P = (
    1.0,
    0.57721566490153286,
    -0.65587807152025388,
    -0.042002635034095236,
    0.16653861138229149,
    -0.042197734555544337,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.00021524167411495097,
    0.00012805028238811619,
    -2.0134854780788239e-5,
    -1.2504934821426707e-6,
    1.1330272319816959e-6,
    -2.0563384169776071e-7,
    6.1160951044814158e-9,
    5.0020076444692229e-9,
    -1.1812745704870201e-9,
    1.0434267116911005e-10,
    7.7822634399050713e-12,
    -3.6968056186422057e-12,
    5.100370287454476e-13,
    -2.0583260535665068e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516003e-18,
)


# --------------------------------------------------------------------------
# Gamma
# --------------------------------------------------------------------------


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = np.full(z.shape, _LANCZOS[0], dtype=complex)
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


# B_{2k} / (2k (2k-1)) for the Stirling series
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)


def _stirling_log(z: np.ndarray) -> np.ndarray:
    # |z| >= 10, Re z >= 1/2
    inv = 1.0 / z
    inv2 = inv * inv
    acc = np.zeros(z.shape, dtype=complex)
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + acc * inv


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape, dtype=complex)
    far = np.abs(z) >= 10.0
    if np.any(far):
        out[far] = _stirling_log(z[far])
    if np.any(~far):
        out[~far] = _lanczos_log(z[~far])
    return out


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log(sin(pi z)) without overflow for large |Im z| (branch unspecified)."""
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    # sin(pi w) = exp(-i pi w) (exp(2 i pi w) - 1) / (2i); |exp(2 i pi w)| <= 1 here
    out = -1j * math.pi * w + np.log((np.exp(2j * math.pi * w) - 1.0) / 2j)
    return np.where(flip, np.conj(out), out)


def log_gamma(z):
    """Complex log-Gamma.

    Lanczos approximation for ``Re z >= 1/2`` (Stirling series once
    ``|z| >= 10``) and the reflection formula below that.  The imaginary
    part is only defined modulo ``2 pi``.  Real inputs still return complex
    values so that signs of Gamma at negative arguments survive
    (``exp(log_gamma(-0.5))`` is negative).

    >>> abs(log_gamma(5) - math.log(24)) < 1e-14
    True
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    bad = (zz.imag == 0) & (zz.real <= 0) & (zz.real == np.round(zz.real))
    if np.any(bad):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {zz[bad][0].real:g}")
    out = np.empty(zz.shape, dtype=complex)
    right = zz.real >= 0.5
    if np.any(right):
        out[right] = _log_gamma_right(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _log_gamma_right(1.0 - zl)
    return complex(out[0]) if scalar else out


def gamma(z):
    """Gamma via :func:`log_gamma`; real for real input."""
    val = np.exp(log_gamma(z))
    if np.all(np.imag(np.asarray(z)) == 0):
        return np.real(val) if np.ndim(val) else float(np.real(val))
    return val


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2."""
    plus = 0.0
    minus = 0.0
    gam1 = 0.0
    gam2 = 0.0
    for j, d in enumerate(_RGAMMA1P):
        term = d * mu**j
        plus += term
        minus += term if j % 2 == 0 else -term
        if j % 2:
            gam1 -= d * mu ** (j - 1)
        else:
            gam2 += term
    return gam1, gam2, plus, minus


# --------------------------------------------------------------------------
# Bessel K
# --------------------------------------------------------------------------

_BESSEL_MAXIT = 100000


def _bessel_k_scalar(nu: float, x: float) -> float:
    # Temme series for x < 2, Steed's continued fraction otherwise, then
    # upward recurrence in the order (stable for K).
    nu = abs(nu)
    nl = int(nu + 0.5)
    mu = nu - nl
    mu2 = mu * mu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    if x < 2.0:
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        sum1 = p
        for i in range(1, _BESSEL_MAXIT):
            ff = (i * ff + p + q) / (i * i - mu2)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delta = c * ff
            total += delta
            sum1 += c * (p - i * ff)
            if abs(delta) < abs(total) * _EPS:
                break
        rkmu = total
        rk1 = sum1 * xi2
    else:
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = delh = d
        q1, q2 = 0.0, 1.0
        a1 = 0.25 - mu2
        q = c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, _BESSEL_MAXIT):
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1, q2 = q2, qnew
            q += c * qnew
            b += 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if abs(dels / s) < _EPS:
                break
        h = a1 * h
        rkmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
        rk1 = rkmu * (mu + x + 0.5 - h) * xi
    for i in range(1, nl + 1):
        rkmu, rk1 = rk1, (mu + i) * xi2 * rk1 + rkmu
    return rkmu


def bessel_k(nu: float, x):
    """Modified Bessel function of the second kind, ``K_nu(x)`` for ``x > 0``."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise NonpositiveArgument("bessel_k requires x > 0")
    if xa.ndim == 0:
        return _bessel_k_scalar(float(nu), float(xa))
    out = np.empty(xa.shape)
    flat = out.reshape(-1)
    for i, xv in enumerate(xa.reshape(-1)):
        flat[i] = _bessel_k_scalar(float(nu), float(xv))
    return out


# --------------------------------------------------------------------------
# Bessel J
# --------------------------------------------------------------------------


def _bessel_j_series(nu: float, x: np.ndarray) -> np.ndarray:
    q = -(x * x) / 4.0
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 500):
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    with np.errstate(divide="ignore"):
        lead = np.exp(nu * np.log(x / 2.0) - math.lgamma(nu + 1.0))
    if nu == 0.0:
        lead = np.ones_like(x)
    return lead * total


def _bessel_j_miller(nu: float, x: np.ndarray) -> np.ndarray:
    """Backward recurrence from a high order, normalized by the Neumann sum

    (x/2)^nu / Gamma(nu+1) = sum_j w_j J_{nu+2j}(x),
    w_0 = 1,  w_j = (nu+2j) Gamma(nu+j) / (Gamma(nu+1) j!).
    """
    top = float(np.max(x))
    kmax = int(max(top, nu) + 40 + 8 * top ** (1.0 / 3.0))
    kmax += kmax % 2
    nxt = np.zeros_like(x)
    cur = np.full_like(x, 1e-300)
    acc = np.zeros_like(x)
    for k in range(kmax, 0, -1):
        if k % 2 == 0:
            j = k // 2
            w = math.exp(
                math.log(nu + 2 * j) + math.lgamma(nu + j) - math.lgamma(nu + 1.0) - math.lgamma(j + 1.0)
            )
            acc = acc + w * cur
        prev = (2.0 * (nu + k) / x) * cur - nxt
        nxt, cur = cur, prev
        big = np.abs(cur) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            cur = cur * scale
            nxt = nxt * scale
            acc = acc * scale
    acc = acc + cur  # w_0 J_nu
    lead = np.exp(nu * np.log(x / 2.0) - math.lgamma(nu + 1.0))
    return lead * cur / acc


def bessel_j(nu: float, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``nu >= 0``, ``x >= 0``.

    Ascending series while ``x**2/4 <= 2(nu+1)``; Miller's backward recurrence
    with the Neumann normalization sum beyond that.
    """
    nu = float(nu)
    if nu < 0:
        raise ValueError("bessel_j requires nu >= 0")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(xa < 0):
        raise ValueError("bessel_j requires x >= 0")
    out = np.empty_like(xa)
    zero = xa == 0.0
    out[zero] = 1.0 if nu == 0.0 else 0.0
    series = ~zero & (xa * xa / 4.0 <= 2.0 * (nu + 1.0))
    rest = ~zero & ~series
    if np.any(series):
        out[series] = _bessel_j_series(nu, xa[series])
    if np.any(rest):
        out[rest] = _bessel_j_miller(nu, xa[rest])
    return float(out[0]) if scalar else out


def bessel_j_prime(nu: float, x):
    """Derivative in ``x`` via ``J'_nu = (nu/x) J_nu - J_{nu+1}``."""
    return (nu / np.asarray(x, dtype=float)) * bessel_j(nu, x) - bessel_j(nu + 1.0, x)


def bessel_j_zeros(nu: float, count: int, start: float = 0.0) -> np.ndarray:
    """The first ``count`` positive zeros of ``J_nu`` greater than ``start``.

    Sign changes are located on a grid of spacing 0.2 (consecutive zeros are
    more than 2 apart) and each bracket is polished by Newton steps.
    """
    found: list[np.ndarray] = []
    lo = max(float(start), 1e-3)
    total = 0
    while total < count:
        grid = lo + 0.2 * np.arange(int((count - total) * math.pi / 0.2) + 32)
        vals = bessel_j(nu, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        a, b = grid[idx], grid[idx + 1]
        fa, fb = vals[idx], vals[idx + 1]
        z = a - fa * (b - a) / (fb - fa)
        for _ in range(50):
            step = bessel_j(nu, z) / bessel_j_prime(nu, z)
            z = np.clip(z - step, a, b)
            if np.all(np.abs(step) < 1e-15 * z):
                break
        found.append(z[: count - total])
        total += min(z.size, count - total)
        lo = grid[-1]
    return np.concatenate(found)


# --------------------------------------------------------------------------
# Generalized hypergeometric series
# --------------------------------------------------------------------------


def _pair_conjugates(params: Sequence[complex]):
    """Split parameters into reals, conjugate pairs and unpaired complexes."""
    reals: list[float] = []
    pairs: list[complex] = []
    loose: list[complex] = []
    pending = [complex(p) for p in params]
    while pending:
        p = pending.pop(0)
        if p.imag == 0:
            reals.append(p.real)
            continue
        for i, q in enumerate(pending):
            if abs(q - p.conjugate()) <= 1e-14 * max(1.0, abs(p)):
                pending.pop(i)
                pairs.append(p)
                break
        else:
            loose.append(p)
    return reals, pairs, loose


def _is_nonpositive_int(p: complex) -> bool:
    return p.imag == 0 and p.real <= 0 and p.real == round(p.real)


def pfq(numerators: Sequence[complex], denominators: Sequence[complex], z: float,
        tol: float = 1e-16, max_terms: int = 200000):
    """Generalized hypergeometric series ``pFq(numerators; denominators; z)``.

    Conjugate pairs among the parameters are multiplied out as
    ``(Re a + k)**2 + (Im a)**2`` so that a series with only real or paired
    parameters is summed in real arithmetic and returns a float.
    """
    nums = [complex(a) for a in numerators]
    dens = [complex(b) for b in denominators]
    for b in dens:
        if _is_nonpositive_int(b):
            raise PoleAtNonpositiveInteger(f"denominator parameter {b.real:g} is a nonpositive integer")
    terminating = any(_is_nonpositive_int(a) for a in nums)
    p, q = len(nums), len(dens)
    if not terminating:
        if p == q + 1 and abs(z) >= 1:
            raise DivergentSeries(f"{p}F{q} series diverges at |z| = {abs(z):g} >= 1")
        if p > q + 1 and z != 0:
            raise DivergentSeries(f"{p}F{q} series diverges for z != 0")

    n_real, n_pair, n_loose = _pair_conjugates(nums)
    d_real, d_pair, d_loose = _pair_conjugates(dens)
    complex_mode = bool(n_loose or d_loose)
    term = complex(1.0) if complex_mode else 1.0
    total = term
    for k in range(max_terms):
        num = 1.0
        for a in n_real:
            num *= a + k
        for a in n_pair:
            num *= (a.real + k) ** 2 + a.imag**2
        den = 1.0
        for b in d_real:
            den *= b + k
        for b in d_pair:
            den *= (b.real + k) ** 2 + b.imag**2
        if complex_mode:
            for a in n_loose:
                num = num * (a + k)
            for b in d_loose:
                den = den * (b + k)
        term = term * num / den * z / (k + 1)
        if term == 0:
            return total
        total += term
        if abs(term) <= tol * abs(total):
            return total
    raise DivergentSeries(f"pFq did not converge within {max_terms} terms")


# --------------------------------------------------------------------------
# Meijer G via Mellin-Barnes contour
# --------------------------------------------------------------------------


def _log_gamma_ratio(b: Sequence[complex], a: Sequence[complex], s: np.ndarray) -> np.ndarray:
    out = np.zeros(s.shape, dtype=complex)
    for bj in b:
        out += log_gamma(bj + s)
    for aj in a:
        out -= log_gamma(aj + s)
    return out


@functools.lru_cache(maxsize=64)
def _contour_setup(b: tuple, a: tuple, t_max: float, step: float, shifts: int):
    """Candidate abscissae with the peak of ``log|R|`` and the useful half-length of each line."""
    c0 = max(-v.real for v in b) + 0.5
    coarse = np.arange(-t_max, t_max + step / 2, step)
    cs = c0 + np.arange(shifts + 1)
    peak = np.empty(cs.size)
    reach = np.empty(cs.size)
    for i, c in enumerate(cs):
        lr = _log_gamma_ratio(b, a, c + 1j * coarse).real
        peak[i] = lr.max()
        reach[i] = np.abs(coarse[lr >= peak[i] - 60.0]).max() + 1.0
    return cs, peak, reach


def meijer_g_q0(b: Sequence[complex], a: Sequence[complex], z, *,
                t_max: float = 200.0, step: float = 0.05, shifts: int = 40,
                tol: float = 1e-10):
    """``G^{q,0}_{p,q}(a; b | z)`` by trapezoidal quadrature along ``Re s = c``.

    G(z) = (1/2 pi) * integral over t of R(c + i t) z^{-(c + i t)},
    R(s) = prod Gamma(b_j + s) / prod Gamma(a_j + s).

    The integrand is analytic in a strip around the line and decays like
    ``exp(-pi |t| (q - p) / 2)``, so the trapezoid rule converges
    geometrically once the step resolves the ``z**(-i t)`` oscillation; the
    step is therefore reduced to ``1/|log z|`` for extreme ``z`` and the line
    is cut where ``|R|`` has dropped by ``e**-60`` from its peak.  For each
    ``z`` the abscissa ``c`` is picked from ``c0, c0+1, ..., c0+shifts`` to
    minimize the peak integrand magnitude, which limits cancellation.
    Raises :class:`ContourFailure` when halving the step changes the result
    beyond ``tol`` (relative to the integrand scale) or the imaginary residue
    exceeds ``1e-8``.
    """
    b = [complex(v) for v in b]
    a = [complex(v) for v in a]
    if len(b) <= len(a):
        raise ContourFailure("need q > p for an exponentially decaying contour integrand")
    za = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(za <= 0):
        raise NonpositiveArgument("Meijer-G contour evaluation requires z > 0")
    cs, peak, reach = _contour_setup(tuple(b), tuple(a), t_max, step, shifts)
    logz = np.log(za)
    choice = np.argmin(peak[None, :] - cs[None, :] * logz[:, None], axis=1)
    # halvings of the base step needed to resolve z**(-i t)
    level = np.maximum(0, np.ceil(np.log2(step * np.maximum(1.0, np.abs(logz))))).astype(int)
    out = np.empty(za.shape)
    for ci, lv in sorted(set(zip(choice.tolist(), level.tolist()))):
        sel = (choice == ci) & (level == lv)
        h = step / 2.0**lv
        t = np.arange(-reach[ci], reach[ci] + h / 2, h)
        logr = _log_gamma_ratio(b, a, cs[ci] + 1j * t)
        lz = logz[sel][:, None]
        expo = logr[None, :] - (cs[ci] + 1j * t[None, :]) * lz
        with np.errstate(under="ignore"):
            vals = np.exp(expo)
        full = vals.sum(axis=1) * h / (2.0 * math.pi)
        half = vals[:, ::2].sum(axis=1) * 2.0 * h / (2.0 * math.pi)
        scale = np.exp(peak[ci] - cs[ci] * lz[:, 0])
        if np.any(np.abs(full - half) > tol * np.maximum(scale, 1e-300) + 1e-300):
            raise ContourFailure("trapezoid estimate not converged on the Mellin-Barnes line")
        if np.any(np.abs(full.imag) > 1e-8 * np.maximum(np.maximum(1.0, np.abs(full.real)), scale)):
            raise ContourFailure("non-negligible imaginary residue; parameters not conjugate-symmetric?")
        out[sel] = full.real
    return float(out[0]) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class MeijerG2440Params:
    """Parameters of ``G^{4,0}_{2,4}(a1, a2; b1, b2, b3, b4 | J)``."""

    a: tuple[float, float]
    b: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        if len(self.a) != 2 or len(self.b) != 4:
            raise ValueError("expected two a-parameters and four b-parameters")
        if abs(sum(complex(v).imag for v in self.b)) > 1e-12:
            raise ValueError("complex b-parameters must come in conjugate pairs")

    def mellin(self, s: complex) -> complex:
        """Mellin transform ``int_0^inf J^(s-1) G dJ`` as a Gamma ratio."""
        return cmath.exp(sum(log_gamma(bj + s) for bj in self.b) - sum(log_gamma(aj + s) for aj in self.a))


def meijer_g_2440(params: MeijerG2440Params, J, **kwargs):
    return meijer_g_q0(params.b, params.a, J, **kwargs)
