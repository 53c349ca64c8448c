"""Deformed ladder operators and the families they generate.

For weights ``rho = sigma**k`` the shifted operators
``A_m + eps``, ``A_m^+ + eps`` with ``eps = delta/(2m + 2k + 1)`` factorize
``H_m - delta kappa'`` with eigenvalue ``lambda_m - eps**2``.  The ground
function at level ``l`` is ``kappa**l exp(-eps_l G)`` with ``G' = 1/kappa``,
and lower members of a chain are obtained by the raising operator.  Every
member keeps the level-``l`` exponential and is stored by its coefficients
over the basis ``s**j kappa**(l-j)``, ``j = 0..l-m`` (``kappa**(l-j)`` alone
for ``sigma = s``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from ._forms import KappaForm, apply_h_form, ladder_down, ladder_up
from .cases import CanonicalCase, lambda_l, m_set
from .errors import (ChainLeavesM, DegenerateDenominator, DivisionByZeroShift, IndexMismatch,
                     NoConvergence, NotInM, NotPowerWeight, OutsideInterval)

LEAKAGE_TOL = 1e-12


def _shift_denominator(case: CanonicalCase, m: float) -> float:
    return 2.0 * m + 2.0 * case.k_exponent + 1.0


def epsilon_at(case: CanonicalCase, delta: float, m: float) -> float:
    den = _shift_denominator(case, m)
    if den == 0.0:
        raise DivisionByZeroShift(f"2m + 2k + 1 = 0 at m={m}")
    return delta / den


@dataclass(frozen=True)
class DeformedParams:
    case: CanonicalCase
    delta: float
    m: float

    def __post_init__(self):
        if self.case.k_exponent is None:
            raise NotPowerWeight(f"{self.case}: weight is not a power of sigma")
        if _shift_denominator(self.case, self.m) == 0.0:
            raise DivisionByZeroShift(f"2m + 2k + 1 = 0 at m={self.m}")

    @property
    def epsilon(self) -> float:
        return epsilon_at(self.case, self.delta, self.m)

    def at(self, m: float) -> "DeformedParams":
        return DeformedParams(self.case, self.delta, m)


def tilde_lambda(params: DeformedParams) -> float:
    return lambda_l(params.case, params.m) - params.epsilon**2


def dlambda_dm(params: DeformedParams) -> float:
    """Derivative of ``tilde_lambda`` with respect to a real ``m``."""
    case, m = params.case, params.m
    return (-(case.sigma_dd / 2.0) * (2.0 * m - 1.0) - case.alpha
            + 4.0 * params.delta**2 / _shift_denominator(case, m) ** 3)


# ---------------------------------------------------------------------------
# basis bookkeeping
# ---------------------------------------------------------------------------


def _basis_form(case: CanonicalCase, l: float, j: int, base: float, eps: float) -> KappaForm:
    """``s**j kappa**(l-j)`` (or ``kappa**(l-j)`` for sigma = s) written at kappa power ``base``."""
    s_power = np.zeros(j + 1)
    s_power[-1] = 1.0
    poly = np.ones(1) if case.sigma_tag == "s" else s_power
    return KappaForm(case, l - j, poly, np.zeros(1), eps).at_power(base)


def _stack(form: KappaForm, size: int) -> np.ndarray:
    out = np.zeros(2 * size)
    out[: form.P0.size] = form.P0
    out[size: size + form.P1.size] = form.P1
    return out


def project_to_basis(form: KappaForm, l: float, m: float) -> tuple[np.ndarray, float]:
    """Coefficients over the index-``m`` basis and the relative leakage outside it."""
    n = int(round(l - m))
    base = min(form.p, m)
    target = form.at_power(base)
    cols = [_basis_form(form.case, l, j, base, form.eps) for j in range(n + 1)]
    size = max([target.P0.size, target.P1.size] + [max(c.P0.size, c.P1.size) for c in cols])
    mat = np.column_stack([_stack(c, size) for c in cols])
    vec = _stack(target, size)
    coeffs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    resid = vec - mat @ coeffs
    scale = max(1.0, float(np.max(np.abs(vec))))
    return coeffs, float(np.max(np.abs(resid)) / scale)


@dataclass(frozen=True)
class DeformedFunction:
    """``exp(exp_param G(s)) sum_j coeffs[j] s**j kappa**(l-j)``.

    ``exp_param = -delta/(2l + 2k + 1)``; ``G`` is the primitive of ``1/kappa``.
    """

    case: CanonicalCase
    l: float
    m: float
    coeffs: tuple[float, ...]
    exp_param: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in np.atleast_1d(self.coeffs)))
        steps = self.l - self.m
        if abs(steps - round(steps)) > 1e-12 or round(steps) < 0:
            raise IndexMismatch(f"l - m = {steps} must be a nonnegative integer")
        if len(self.coeffs) != int(round(steps)) + 1:
            raise IndexMismatch(f"expected {int(round(steps)) + 1} coefficients, got {len(self.coeffs)}")

    @property
    def basis(self) -> str:
        return "sqrt_s_powers" if self.case.sigma_tag == "s" else "s_power_kappa_power"

    def form(self) -> KappaForm:
        eps = -self.exp_param
        total = KappaForm(self.case, self.m, np.zeros(1), np.zeros(1), eps)
        for j, c in enumerate(self.coeffs):
            total = total + _basis_form(self.case, self.l, j, self.m, eps).scale(c)
        return total

    def __call__(self, s):
        return self.form()(s)

    def scaled(self, c: float) -> "DeformedFunction":
        return DeformedFunction(self.case, self.l, self.m, tuple(np.array(self.coeffs) * c), self.exp_param)

    def to_dict(self) -> dict:
        return {"case": self.case.to_dict(), "l": float(self.l), "m": float(self.m),
                "coeffs": [float(c) for c in self.coeffs], "basis": self.basis,
                "exp_param": float(self.exp_param)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "DeformedFunction":
        return cls(CanonicalCase.from_dict(data["case"]), float(data["l"]), float(data["m"]),
                   tuple(data["coeffs"]), float(data["exp_param"]))


def _from_form(form: KappaForm, l: float, m: float) -> DeformedFunction:
    coeffs, leak = project_to_basis(form, l, m)
    if leak > LEAKAGE_TOL:
        raise NoConvergence(f"ladder output leaves the basis (relative leakage {leak:.2e})")
    return DeformedFunction(form.case, l, m, tuple(coeffs), -form.eps)


# ---------------------------------------------------------------------------
# operators and families
# ---------------------------------------------------------------------------


def _check_member(params: DeformedParams, m: float, err=NotInM) -> None:
    mset = m_set(params.case, params.delta)
    if m not in mset:
        raise err(f"m={m} is not in M={mset.to_list()} for delta={params.delta}")


def ground(params: DeformedParams) -> DeformedFunction:
    """Kernel of the deformed lowering operator: ``kappa**m exp(-eps_m G)``."""
    _check_member(params, params.m)
    return DeformedFunction(params.case, params.m, params.m, (1.0,), -params.epsilon)


def apply_tilde_A(params: DeformedParams, f: DeformedFunction) -> DeformedFunction:
    """``(A_m + eps_m) f``; the index rises from ``m`` to ``m + 1``."""
    if abs(f.m - params.m) > 1e-12:
        raise IndexMismatch(f"operator index {params.m} does not match function index {f.m}")
    out = tilde_A_form(params, f.form())
    if f.l - f.m < 0.5:
        scale = max(abs(c) for c in f.coeffs) or 1.0
        if not out.is_zero(1e-12 * scale):
            raise IndexMismatch("only the ground function can be lowered past its level")
        return DeformedFunction(f.case, f.l + 1, f.m + 1, (0.0,), f.exp_param)
    return _from_form(out, f.l, f.m + 1)


def tilde_A_form(params: DeformedParams, form: KappaForm) -> KappaForm:
    return ladder_down(form, params.m, params.epsilon)


def tilde_A_plus_form(params: DeformedParams, form: KappaForm) -> KappaForm:
    return ladder_up(form, params.m, params.epsilon)


def apply_tilde_A_plus(params: DeformedParams, f: DeformedFunction) -> DeformedFunction:
    """``(A_m^+ + eps_m) f``; the index falls from ``m + 1`` to ``m``."""
    if abs(f.m - (params.m + 1)) > 1e-12:
        raise IndexMismatch(f"operator index {params.m} needs function index {params.m + 1}, got {f.m}")
    out = tilde_A_plus_form(params, f.form())
    return _from_form(out, f.l, params.m)


def apply_tilde_H(params: DeformedParams, f, s):
    """Pointwise ``(H_m - delta kappa') f``."""
    case = params.case
    if not case.contains(s):
        raise OutsideInterval(f"s={s!r} not inside {case.interval}")
    form = f if isinstance(f, KappaForm) else f.form()
    return apply_h_form(case, params.m, form, s) - params.delta * case.dkappa(s) * form(s)


def deformed_family(params: DeformedParams, l: float, n: int) -> list[DeformedFunction]:
    """``[Phi~_{l,l}, Phi~_{l,l-1}, ..., Phi~_{l,l-n}]`` built by the raising operator."""
    for j in range(n + 1):
        _check_member(params, l - j, ChainLeavesM)
    top = params.at(l)
    lam_top = tilde_lambda(top)
    chain = [ground(top)]
    for j in range(1, n + 1):
        pm = params.at(l - j)
        gap = lam_top - tilde_lambda(pm)
        if abs(gap) <= 1e-14 * max(1.0, abs(lam_top)):
            raise DegenerateDenominator(f"tilde lambda at l={l} equals that at m={l - j}")
        chain.append(apply_tilde_A_plus(pm, chain[-1]).scaled(1.0 / gap))
    return chain


def deformed_norm(f: DeformedFunction, tol: float = quadrature.DEFAULT_TOL) -> float:
    return math.sqrt(quadrature.inner_product(f.case, f, f, tol))


def deformed_norm_chain(params: DeformedParams, l: float, m: float,
                        tol: float = quadrature.DEFAULT_TOL, check_rtol: float = 1e-6) -> float:
    """Quadrature norm of ``Phi~_{l,m}``, checked against ``||Phi~_{l,m+1}|| / sqrt(lambda~_l - lambda~_m)``."""
    steps = int(round(l - m))
    chain = deformed_family(params, l, steps)
    value = deformed_norm(chain[-1], tol)
    if steps:
        upper = deformed_norm(chain[-2], tol)
        gap = tilde_lambda(params.at(l)) - tilde_lambda(params.at(m))
        predicted = upper / math.sqrt(gap)
        if abs(value - predicted) > check_rtol * predicted:
            raise NoConvergence(f"deformed norm {value} disagrees with the ladder ratio {predicted}")
    return value


def normalized_family(params: DeformedParams, l: float, n: int,
                      tol: float = quadrature.DEFAULT_TOL) -> list[DeformedFunction]:
    return [f.scaled(1.0 / deformed_norm(f, tol)) for f in deformed_family(params, l, n)]


def basis_element(case: CanonicalCase, l: float, m: float, j: int, exp_param: float = 0.0) -> DeformedFunction:
    """Single basis function ``s**j kappa**(l-j)`` at index ``m`` (for operator tests)."""
    coeffs = np.zeros(int(round(l - m)) + 1)
    coeffs[j] = 1.0
    return DeformedFunction(case, l, m, tuple(coeffs), exp_param)
