"""Registry of the six canonical hypergeometric-type cases.

Every equation ``sigma y'' + tau y' + lambda y = 0`` with ``deg sigma <= 2`` and
``deg tau <= 1`` reduces by an affine change of variable to one of six forms of
``sigma``; ``tau(s) = alpha*s + beta`` throughout.  A :class:`CanonicalCase`
carries the polynomial coefficients, the interval, the weight ``rho`` solving
``(sigma rho)' = tau rho`` and, when ``rho`` is a power of ``sigma``, the
exponent ``k`` used by the deformed operators in :mod:`hyperladder.tilde`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPowerWeight, OutsideInterval, ParameterOutOfRange

SIGMA_TAGS = ("one", "s", "one_minus_s2", "s2_minus_one", "s2", "s2_plus_one")

# sigma(s) = c0 + c1 s + c2 s^2
_SIGMA_COEFFS = {
    "one": (1.0, 0.0, 0.0),
    "s": (0.0, 1.0, 0.0),
    "one_minus_s2": (1.0, 0.0, -1.0),
    "s2_minus_one": (-1.0, 0.0, 1.0),
    "s2": (0.0, 0.0, 1.0),
    "s2_plus_one": (1.0, 0.0, 1.0),
}

_INTERVALS = {
    "one": (-math.inf, math.inf),
    "s": (0.0, math.inf),
    "one_minus_s2": (-1.0, 1.0),
    "s2_minus_one": (1.0, math.inf),
    "s2": (0.0, math.inf),
    "s2_plus_one": (-math.inf, math.inf),
}


def _primary_violation(tag: str, alpha: float, beta: float) -> str | None:
    """Name the violated constraint of the main table, or None if admissible."""
    if tag in ("one", "s2_plus_one"):
        return None if alpha < 0 else "alpha < 0"
    if tag in ("s", "s2"):
        if not alpha < 0:
            return "alpha < 0"
        return None if beta > 0 else "beta > 0"
    if tag == "one_minus_s2":
        return None if alpha < beta < -alpha else "alpha < beta < -alpha"
    if tag == "s2_minus_one":
        return None if -beta < alpha < 0 else "-beta < alpha < 0"
    raise ParameterOutOfRange(f"unknown sigma tag {tag!r}; expected one of {SIGMA_TAGS}")


def _power_exponent(tag: str, alpha: float, beta: float) -> float | None:
    """Exponent k with rho = sigma**k, or None when no such k exists."""
    if tag == "s":
        if alpha == 0.0 and beta > 0:
            return beta - 1.0
        return None
    if tag == "one":
        return None
    if beta != 0.0 or not alpha < 0:
        return None
    if tag == "one_minus_s2":
        return -alpha / 2.0 - 1.0
    return alpha / 2.0 - 1.0


@dataclass(frozen=True)
class CanonicalCase:
    """One canonical (sigma, tau) pair together with its interval and weight.

    ``classical`` is True when the main admissibility constraints hold, i.e.
    the polynomial family and its orthogonality are available.  Rows admitted
    only because rho is a power of sigma (for instance ``sigma = s`` with
    ``alpha = 0``) have ``classical`` False and are meant for the deformed
    operators.
    """

    sigma_tag: str
    alpha: float
    beta: float
    interval: tuple[float, float] = field(repr=False)
    sigma_dd: int = field(repr=False)
    k_exponent: float | None = None
    classical: bool = field(default=True, repr=False)

    @property
    def sigma_coeffs(self) -> tuple[float, float, float]:
        return _SIGMA_COEFFS[self.sigma_tag]

    @property
    def tau_coeffs(self) -> tuple[float, float]:
        return (self.beta, self.alpha)

    # polynomial pieces -------------------------------------------------

    def sigma(self, s):
        c0, c1, c2 = self.sigma_coeffs
        return c0 + c1 * s + c2 * s * s

    def dsigma(self, s):
        _, c1, c2 = self.sigma_coeffs
        return c1 + 2.0 * c2 * s

    def tau(self, s):
        return self.alpha * s + self.beta

    def kappa(self, s):
        return np.sqrt(self.sigma(s))

    def sigma_near_ends(self, s, da, db):
        """``sigma(s)`` from endpoint distances, exact where ``sigma`` vanishes at a finite end."""
        tag = self.sigma_tag
        if tag == "s":
            return np.asarray(da, dtype=float)
        if tag == "one_minus_s2":
            return np.asarray(da, dtype=float) * db
        if tag == "s2_minus_one":
            return np.asarray(da, dtype=float) * (np.asarray(s, dtype=float) + 1.0)
        return self.sigma(s)

    def dkappa(self, s):
        return self.dsigma(s) / (2.0 * self.kappa(s))

    def log_weight(self, s, da=None, db=None):
        """Natural log of rho(s).

        ``da = s - a`` and ``db = b - s`` may be supplied by quadrature rules
        that know the distance to a finite endpoint more accurately than
        ``s`` itself does.
        """
        s = np.asarray(s, dtype=float)
        a, b = self.interval
        if da is None:
            da = s - a
        if db is None:
            db = b - s
        al, be = self.alpha, self.beta
        tag = self.sigma_tag
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if tag == "one":
                return al * s * s / 2.0 + be * s
            if tag == "s":
                return (be - 1.0) * np.log(da) + al * s
            if tag == "one_minus_s2":
                return (-(al - be) / 2.0 - 1.0) * np.log(da) + (-(al + be) / 2.0 - 1.0) * np.log(db)
            if tag == "s2_minus_one":
                return ((al - be) / 2.0 - 1.0) * np.log(s + 1.0) + ((al + be) / 2.0 - 1.0) * np.log(da)
            if tag == "s2":
                return (al - 2.0) * np.log(s) - be / s
            return (al / 2.0 - 1.0) * np.log1p(s * s) + be * np.arctan(s)

    def weight(self, s, da=None, db=None):
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(self.log_weight(s, da, db))

    def contains(self, s) -> bool:
        a, b = self.interval
        return bool(np.all((np.asarray(s) > a) & (np.asarray(s) < b)))

    def to_dict(self) -> dict:
        return {"sigma": self.sigma_tag, "alpha": float(self.alpha), "beta": float(self.beta)}

    @classmethod
    def from_dict(cls, data: dict) -> "CanonicalCase":
        return make_case(data["sigma"], float(data["alpha"]), float(data["beta"]))


def make_case(sigma_tag: str, alpha: float, beta: float) -> CanonicalCase:
    """Build a validated case.

    Raises :class:`ParameterOutOfRange` naming the violated constraint when the
    parameters satisfy neither the main constraints nor a power-weight row.
    """
    if sigma_tag not in _SIGMA_COEFFS:
        raise ParameterOutOfRange(f"unknown sigma tag {sigma_tag!r}; expected one of {SIGMA_TAGS}")
    alpha = float(alpha)
    beta = float(beta)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ParameterOutOfRange("alpha and beta must be finite")
    violation = _primary_violation(sigma_tag, alpha, beta)
    k = _power_exponent(sigma_tag, alpha, beta)
    if violation is not None and k is None:
        raise ParameterOutOfRange(
            f"sigma={sigma_tag}, alpha={alpha}, beta={beta}: constraint {violation} violated"
        )
    c2 = _SIGMA_COEFFS[sigma_tag][2]
    return CanonicalCase(
        sigma_tag=sigma_tag,
        alpha=alpha,
        beta=beta,
        interval=_INTERVALS[sigma_tag],
        sigma_dd=int(round(2 * c2)),
        k_exponent=k,
        classical=violation is None,
    )


def lambda_l(case: CanonicalCase, l: float) -> float:
    """Eigenvalue ``-(sigma''/2) l (l-1) - tau' l``; real ``l`` is allowed."""
    return -(case.sigma_dd / 2.0) * l * (l - 1.0) - case.alpha * l


def capital_lambda(case: CanonicalCase) -> float:
    """Upper bound on admissible polynomial indices (``math.inf`` if unbounded)."""
    if case.sigma_dd == 2:
        return (1.0 - case.alpha) / 2.0
    return math.inf


def max_index(case: CanonicalCase, limit: int) -> int:
    """Largest integer ``l <= limit`` with ``l < Lambda``."""
    cap = capital_lambda(case)
    if math.isinf(cap):
        return limit
    return min(limit, math.ceil(cap) - 1)


def _check_inside(case: CanonicalCase, s) -> None:
    if not case.contains(s):
        raise OutsideInterval(f"s={s!r} not inside {case.interval}")


def weight_at(case: CanonicalCase, s: float) -> float:
    _check_inside(case, s)
    return float(case.weight(s))


def kappa_at(case: CanonicalCase, s: float) -> float:
    _check_inside(case, s)
    return float(case.kappa(s))


@dataclass(frozen=True)
class MSet:
    """Finite union of disjoint open intervals."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
        ordered = sorted(self.intervals)
        for (_, hi), (lo, _) in zip(ordered, ordered[1:]):
            if lo < hi:
                raise ValueError("intervals overlap")

    @property
    def empty(self) -> bool:
        return not self.intervals

    def contains(self, m: float) -> bool:
        return any(lo < m < hi for lo, hi in self.intervals)

    __contains__ = contains

    def component(self, m: float) -> tuple[float, float] | None:
        for lo, hi in self.intervals:
            if lo < m < hi:
                return (lo, hi)
        return None

    def to_list(self) -> list[list[float]]:
        return [[lo, hi] for lo, hi in self.intervals]


def m_set(case: CanonicalCase, delta: float) -> MSet:
    """Values of m where the deformed eigenvalue increases and the ground state is normalizable."""
    if case.k_exponent is None:
        raise NotPowerWeight(f"{case}: weight is not a power of sigma")
    al, be = case.alpha, case.beta
    tag = case.sigma_tag
    delta = float(delta)
    if tag == "s":
        return MSet(((-be + 0.5, math.inf),)) if delta > 0 else MSet()
    if tag == "one_minus_s2":
        return MSet((((1.0 + al) / 2.0, math.inf),))
    if tag == "s2":
        return MSet()
    top = (1.0 - al) / 2.0
    root = math.sqrt(abs(delta) / 2.0)
    if tag == "s2_plus_one":
        return MSet(((-math.inf, top - root),))
    # s2_minus_one
    parts = []
    if -0.5 < delta < 0.5 and -al / 2.0 < top - root:
        parts.append((-al / 2.0, top - root))
    if delta > 0:
        parts.append((top, top + root))
    return MSet(tuple(parts))
