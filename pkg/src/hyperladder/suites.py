"""Verification suites behind ``hyperladder verify``.

Each suite returns a list of checks ``{"suite", "name", "value", "threshold",
"passed"}``; a check passes when ``value <= threshold``.  Suites run on a
default set of cases unless a single case is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import coherent as co
from . import hypfun as hf
from . import quadrature
from . import schrodinger as sch
from . import tilde as td
from ._forms import KappaForm, h_operator_form, ladder_down, ladder_up
from .cases import CanonicalCase, capital_lambda, lambda_l, m_set, make_case, max_index

SUITES = ("ode", "classical", "ladder", "orthogonality", "norms", "deformed", "moments",
          "coherent", "schrodinger")

DEFAULT_CASES = (
    ("one", -2.0, 0.0),
    ("s", -1.0, 1.0),
    ("one_minus_s2", -3.0, 0.0),
    ("s2_minus_one", -6.0, 7.0),
    ("s2", -7.0, 1.0),
    ("s2_plus_one", -6.0, 1.0),
)

# (sigma, alpha, beta, delta, top level l, chain length n)
DEFAULT_DEFORMED = (
    ("one_minus_s2", -5.0, 0.0, 1.0, 4.0, 4),
    ("s", 0.0, 1.5, 2.0, 3.0, 3),
    ("s2_plus_one", -9.0, 0.0, 0.4, 3.0, 3),
    ("s2_minus_one", -9.0, 0.0, 3.0, 6.1, 1),
)

_SAMPLE_WINDOWS = {
    "one": (-3.0, 3.0),
    "s": (0.05, 10.0),
    "one_minus_s2": (-0.95, 0.95),
    "s2_minus_one": (1.05, 5.0),
    "s2": (0.05, 5.0),
    "s2_plus_one": (-3.0, 3.0),
}


@dataclass
class Options:
    case: CanonicalCase | None = None
    m: float | None = None
    n: int | None = None
    delta: float | None = None
    tol: float = quadrature.DEFAULT_TOL
    seed: int = 20240611
    extra: dict = field(default_factory=dict)


def _check(suite: str, name: str, value: float, threshold: float) -> dict:
    value = float(value)
    return {"suite": suite, "name": name, "value": value, "threshold": float(threshold),
            "passed": bool(math.isfinite(value) and value <= threshold)}


def _cases(opts: Options) -> list[CanonicalCase]:
    if opts.case is not None:
        return [opts.case]
    return [make_case(*row) for row in DEFAULT_CASES]


def sample_points(case: CanonicalCase, count: int) -> np.ndarray:
    """Chebyshev points of the first kind mapped into a window of the interval."""
    lo, hi = _SAMPLE_WINDOWS[case.sigma_tag]
    k = np.arange(count)
    t = np.cos((2 * k + 1) * math.pi / (2 * count))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def _tag(case: CanonicalCase) -> str:
    return f"{case.sigma_tag}(a={case.alpha:g},b={case.beta:g})"


# ---------------------------------------------------------------------------


def suite_ode(opts: Options) -> list[dict]:
    out = []
    for case in _cases(opts):
        if not case.classical:
            continue
        for l in range(max_index(case, 12) + 1):
            f = hf.phi_l(case, l)
            s = sample_points(case, 2 * l + 5)
            res = np.max(np.abs(hf.ode_residual(case, f, s))) / (1.0 + np.max(np.abs(f.poly)))
            out.append(_check("ode", f"{_tag(case)} l={l}", res, 1e-9))
    return out


def suite_classical(opts: Options) -> list[dict]:
    out = []
    for case in _cases(opts):
        if not case.classical:
            continue
        for l in range(max_index(case, 6) + 1):
            # even count keeps s = 0 (a node of odd polynomials) out of the sample
            s = sample_points(case, 6)
            ratio = hf.classical_oracle(case, l, s) / hf.phi_l(case, l)(s)
            spread = np.ptp(ratio) / np.max(np.abs(ratio))
            out.append(_check("classical", f"{_tag(case)} l={l}", spread, 1e-8))
    return out


def _rel_coeff_diff(a: np.ndarray, b: np.ndarray) -> float:
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def suite_ladder(opts: Options) -> list[dict]:
    out = []
    rng = np.random.default_rng(opts.seed)
    for case in _cases(opts):
        if not case.classical:
            continue
        top = max_index(case, 10)
        worst_a = worst_ap = 0.0
        for l in range(top + 1):
            for m in range(l):
                lo, hi = hf.associated(case, l, m), hf.associated(case, l, m + 1)
                worst_a = max(worst_a, _rel_coeff_diff(hf.apply_A(case, m, lo).poly, hi.poly))
                gap = lambda_l(case, l) - lambda_l(case, m)
                worst_ap = max(worst_ap, _rel_coeff_diff(hf.apply_A_plus(case, m, hi).poly, gap * lo.poly))
        out.append(_check("ladder", f"{_tag(case)} A_m coefficients", worst_a, 1e-12))
        out.append(_check("ladder", f"{_tag(case)} A_m^+ eigen-relation", worst_ap, 1e-12))
        s = rng.uniform(*_SAMPLE_WINDOWS[case.sigma_tag], size=20)
        worst = {"shape": 0.0, "partner": 0.0, "intertwine_up": 0.0, "intertwine_down": 0.0}
        for m in range(3):
            f = KappaForm(case, m, rng.normal(size=4), np.zeros(1))
            g = KappaForm(case, m + 1, rng.normal(size=4), np.zeros(1))
            lm = lambda_l(case, m)
            pairs = {
                "shape": (ladder_up(ladder_down(f, m), m)(s), h_operator_form(case, m, f)(s) - lm * f(s)),
                "partner": (ladder_down(ladder_up(g, m), m)(s), h_operator_form(case, m + 1, g)(s) - lm * g(s)),
                "intertwine_up": (h_operator_form(case, m, ladder_up(g, m))(s),
                                  ladder_up(h_operator_form(case, m + 1, g), m)(s)),
                "intertwine_down": (ladder_down(h_operator_form(case, m, f), m)(s),
                                    h_operator_form(case, m + 1, ladder_down(f, m))(s)),
            }
            for key, (u, v) in pairs.items():
                worst[key] = max(worst[key], float(np.max(np.abs(u - v) / np.maximum(1.0, np.abs(v)))))
        for key, val in worst.items():
            out.append(_check("ladder", f"{_tag(case)} {key}", val, 1e-9))
    return out


def suite_orthogonality(opts: Options) -> list[dict]:
    out = []
    for case in _cases(opts):
        if not case.classical:
            continue
        for m in (0, 1, 2):
            top = max_index(case, m + 8)
            if top < m:
                continue
            fams = [hf.normalized(case, l, m, opts.tol) for l in range(m, top + 1)]
            gram = np.array([[quadrature.inner_product(case, f, g, opts.tol) for g in fams] for f in fams])
            off = gram - np.diag(np.diag(gram))
            check = _check("orthogonality", f"{_tag(case)} m={m} off-diagonal", np.max(np.abs(off)), 1e-8)
            check["levels"] = list(range(m, top + 1))
            check["off_diagonal"] = [[i + m, j + m, float(gram[i, j])]
                                     for i in range(len(fams)) for j in range(len(fams)) if i < j]
            out.append(check)
            out.append(_check("orthogonality", f"{_tag(case)} m={m} diagonal",
                              np.max(np.abs(np.diag(gram) - 1.0)), 1e-8))
    return out


def suite_norms(opts: Options) -> list[dict]:
    out = []
    for case in _cases(opts):
        if not case.classical:
            continue
        worst = 0.0
        for l in range(max_index(case, 8) + 1):
            base = math.sqrt(hf.norm_squared(hf.associated(case, l, 0), opts.tol))
            lam = lambda_l(case, l)
            for m in range(1, l + 1):
                quad = math.sqrt(hf.norm_squared(hf.associated(case, l, m), opts.tol))
                chain = base * math.sqrt(math.prod(lam - lambda_l(case, j) for j in range(m)))
                worst = max(worst, abs(quad - chain) / chain)
        out.append(_check("norms", f"{_tag(case)} chain", worst, 1e-8))
    return out


def _deformed_rows(opts: Options):
    if opts.case is not None and opts.delta is not None:
        m = 0.0 if opts.m is None else float(opts.m)
        n = 0 if opts.n is None else int(opts.n)
        return [(opts.case, opts.delta, m + n, n)]
    return [(make_case(t, a, b), d, l, n) for t, a, b, d, l, n in DEFAULT_DEFORMED]


def suite_deformed(opts: Options) -> list[dict]:
    out = []
    rng = np.random.default_rng(opts.seed)
    for case, delta, l, n in _deformed_rows(opts):
        params = td.DeformedParams(case, delta, l)
        name = f"{_tag(case)} delta={delta:g} l={l:g}"
        chain = td.deformed_family(params, l, n)
        lam = td.tilde_lambda(params)
        s = sample_points(case, 20)
        res = leak = 0.0
        for f in chain:
            form = f.form()
            vals = np.abs(form(s))
            r = td.apply_tilde_H(params.at(f.m), form, s) - lam * form(s)
            res = max(res, float(np.max(np.abs(r)) / np.max(vals)))
        for upper, lower in zip(chain, chain[1:]):
            lowered = td.tilde_A_form(params.at(lower.m), lower.form())
            leak = max(leak, td.project_to_basis(lowered, l, upper.m)[1])
        out.append(_check("deformed", f"{name} eigen-residual", res, 1e-9))
        out.append(_check("deformed", f"{name} basis leakage", leak, 1e-12))
        # lowering undoes raising: A~_m Phi~_{l,m} = Phi~_{l,m+1}
        worst = 0.0
        for upper, lower in zip(chain, chain[1:]):
            got = td.apply_tilde_A(params.at(lower.m), lower)
            worst = max(worst, float(np.max(np.abs(np.array(got.coeffs) - np.array(upper.coeffs)))
                                     / np.max(np.abs(upper.coeffs))))
        out.append(_check("deformed", f"{name} lowering inverts raising", worst, 1e-10))
        # factorization identities on random forms
        ident = 0.0
        for comp in m_set(case, delta).intervals:
            lo, hi = comp
            m = min(max(lo + 0.25 * min(1.0, hi - lo), l - n), hi - 1e-3)
            p = td.DeformedParams(case, delta, m)
            lm = td.tilde_lambda(p)
            f = KappaForm(case, m, rng.normal(size=3), rng.normal(size=2), rng.normal())
            lhs = td.tilde_A_plus_form(p, td.tilde_A_form(p, f))(s)
            rhs = td.apply_tilde_H(p, f, s) - lm * f(s)
            ident = max(ident, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
            p1 = td.DeformedParams(case, delta, m + 1)
            a = td.tilde_A_form(p, f)
            lhs = td.tilde_A_form(p, _h_tilde_form(p, f))(s)
            rhs = _h_tilde_form(p1, a)(s)
            ident = max(ident, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
        out.append(_check("deformed", f"{name} factorization and intertwining", ident, 1e-9))
        # monotone eigenvalue on grids inside each component of the admissible set
        worst_step = math.inf
        for lo, hi in m_set(case, delta).intervals:
            lo_f = lo if math.isfinite(lo) else hi - 20.0
            hi_f = hi if math.isfinite(hi) else lo + 20.0
            grid = np.linspace(lo_f, hi_f, 202)[1:-1]
            vals = np.array([td.tilde_lambda(td.DeformedParams(case, delta, g)) for g in grid])
            worst_step = min(worst_step, float(np.min(np.diff(vals))))
        out.append(_check("deformed", f"{name} tilde-lambda increasing (negated min step)", -worst_step, 0.0))
        # orthogonality and norm ratios of the chain heads at fixed m
        if n >= 1:
            norms = [td.deformed_norm(f, opts.tol) for f in chain]
            worst = 0.0
            for j in range(1, len(chain)):
                gap = lam - td.tilde_lambda(params.at(chain[j].m))
                worst = max(worst, abs(norms[j - 1] - math.sqrt(gap) * norms[j]) / norms[j - 1])
            out.append(_check("deformed", f"{name} norm chain", worst, 1e-8))
        out.extend(_deformed_gram(case, delta, l - n, n, opts, name))
    return out


def _h_tilde_form(p: td.DeformedParams, f: KappaForm) -> KappaForm:
    dk = f.times_dkappa().scale(-p.delta)
    return h_operator_form(p.case, p.m, f) + dk


def _deformed_gram(case, delta, m, n, opts, name) -> list[dict]:
    """Gram matrix of normalized ``Phi~_{l,m}``, ``l = m..m+n``."""
    members = []
    for l in np.arange(m, m + n + 1):
        steps = int(round(l - m))
        try:
            fam = td.deformed_family(td.DeformedParams(case, delta, float(l)), float(l), steps)
        except Exception:
            return []
        f = fam[-1]
        members.append(f.scaled(1.0 / td.deformed_norm(f, opts.tol)))
    if len(members) < 2:
        return []
    gram = np.array([[quadrature.inner_product(case, f, g, opts.tol) for g in members] for f in members])
    off = gram - np.diag(np.diag(gram))
    return [_check("deformed", f"{name} gram off-diagonal at m={m:g}", np.max(np.abs(off)), 1e-8),
            _check("deformed", f"{name} gram diagonal at m={m:g}", np.max(np.abs(np.diag(gram) - 1)), 1e-8)]


# ---------------------------------------------------------------------------


def default_moment_families():
    """(family, n_check, tolerance) rows with their acceptance tolerances."""
    return [
        (co.coherent_family(make_case("s", -1.0, 1.0), 0), 8, 1e-8),
        (co.coherent_family(make_case("one_minus_s2", -3.0, 0.0), 1), 8, 1e-6),
        (co.coherent_family(make_case("s2_plus_one", -6.0, 1.0), 0), 3, 1e-4),
        (co.coherent_family(make_case("one_minus_s2", -3.0, 0.0), 0.0, delta=1.0), 3, 1e-3),
    ]


def _moment_threshold(family: co.CoherentFamily) -> float:
    kind = co.measure_spec(family).kind
    return {"gamma_exp": 1e-8, "bessel_k": 1e-6, "bessel_j": 1e-4, "meijer_g": 1e-3}[kind]


def suite_moments(opts: Options) -> list[dict]:
    if opts.case is not None:
        fam = co.coherent_family(opts.case, 0 if opts.m is None else opts.m, delta=opts.delta)
        n = min(3 if opts.n is None else opts.n, fam.n_max)
        rows = [(fam, n, _moment_threshold(fam))]
    else:
        rows = default_moment_families()
    out = []
    for fam, n_check, thr in rows:
        spec = co.measure_spec(fam)
        for row in co.verify_moments(spec, fam, n_check):
            if row["status"] == "divergent":
                continue
            err = row["rel_err"] if row["rel_err"] is not None else math.inf
            check = _check("moments", f"{row['family']} {spec.kind} n={row['n']}", err, thr)
            check.update({k: row[k] for k in ("family", "n", "rho_n", "moment_quadrature", "rel_err", "status")})
            out.append(check)
    return out


def default_coherent_families():
    return [
        co.coherent_family(make_case("s", -1.0, 1.0), 0),
        co.coherent_family(make_case("one_minus_s2", -3.0, 0.0), 1),
        co.coherent_family(make_case("s2_plus_one", -6.0, 1.0), 0),
        co.coherent_family(make_case("s", 0.0, 1.0), 1.0, delta=3.0),
        co.coherent_family(make_case("one_minus_s2", -3.0, 0.0), 0.0, delta=1.0),
    ]


def phase_tolerance(st: co.CoherentState, t: float) -> np.ndarray:
    """Rounding allowance for ``exp(-i e_n (gamma + t))`` against the product of the two phases."""
    e = np.abs(np.array(st.family.e))
    return 8 * np.finfo(float).eps * (1.0 + e * (abs(st.gamma) + abs(t))) * np.abs(st.coeffs)


def suite_coherent(opts: Options) -> list[dict]:
    out = []
    fams = default_coherent_families()
    if opts.case is not None:
        fams = [co.coherent_family(opts.case, 0 if opts.m is None else opts.m, delta=opts.delta)]
    for fam in fams:
        name = fam.label()
        gaps = co.energy_gaps(fam)
        out.append(_check("coherent", f"{name} energies increasing (negated min gap)",
                          -float(np.min(gaps)) if gaps.size else -1.0, 0.0))
        if all(r > 0 for r in fam.rho):
            prod = co.moments_by_product(fam)
            out.append(_check("coherent", f"{name} moments vs energy products",
                              float(np.max(np.abs(prod / co.moments(fam) - 1.0))), 1e-10))
        j_values = (0.1, 0.5) if fam.deformed and fam.case.sigma_tag == "s" else (0.1, 0.5, 2.0)
        for J in j_values:
            st = co.state(fam, J, 0.7)
            out.append(_check("coherent", f"{name} J={J} normalization", abs(st.norm_squared - 1.0), 1e-12))
            moved = co.state(fam, J, 0.7 + 1.3)
            diff = np.abs(moved.coeffs - co.evolve(st, 1.3)) - phase_tolerance(st, 1.3)
            out.append(_check("coherent", f"{name} J={J} temporal stability (excess over rounding)",
                              float(np.max(diff)), 0.0))
            closed = co.normalizer_closed_form(fam, J)
            if closed is not None:
                direct = co.normalizer(fam, J)
                out.append(_check("coherent", f"{name} J={J} closed-form normalizer",
                                  abs(direct**2 - closed**2) / closed**2, 1e-10))
            if not fam.finite and not fam.deformed:
                tail = co.truncation_tail(fam, J)
                err = abs(co.mean_energy(st) - J) - (tail * J + 1e-12 * J)
                out.append(_check("coherent", f"{name} J={J} mean energy equals J (excess)", err, 0.0))
    return out


def suite_schrodinger(opts: Options) -> list[dict]:
    out = []
    cases = [make_case("one", -2.0, 0.0), make_case("one_minus_s2", -3.0, 0.0)]
    if opts.case is not None:
        cases = [opts.case]
    for case in cases:
        top = max_index(case, 6)
        for orientation in (1, -1):
            vmap = sch.build_map(case, orientation)
            x = vmap.grid()
            worst = 0.0
            for l in range(top + 1):
                for m in range(l + 1):
                    f = sch.psi_function(vmap, m, l)
                    r = sch.schrodinger_residual(vmap, m, f, lambda_l(case, l), x)
                    worst = max(worst, float(np.max(np.abs(r)) / np.max(np.abs(f(x)))))
            out.append(_check("schrodinger", f"{_tag(case)} orientation={orientation} residual", worst, 1e-7))
        vmap = sch.build_map(case, 1)
        worst = 0.0
        for m in range(min(top, 2) + 1):
            ls = list(range(m, min(top, m + 3) + 1))
            fs = [sch.psi_function(vmap, m, l) for l in ls]
            hs = [hf.associated(case, l, m) for l in ls]
            for i in range(len(ls)):
                for j in range(i, len(ls)):
                    gx = sch.x_inner_product(vmap, fs[i], fs[j], opts.tol)
                    gs = quadrature.inner_product(case, hs[i], hs[j], opts.tol)
                    scale = math.sqrt(quadrature.inner_product(case, hs[i], hs[i], opts.tol)
                                      * quadrature.inner_product(case, hs[j], hs[j], opts.tol))
                    worst = max(worst, abs(gx - gs) / scale)
        out.append(_check("schrodinger", f"{_tag(case)} norm transfer", worst, 1e-8))
        x = sch.build_map(case, 1).grid()
        xi = x[1:-1]
        partner = np.max(np.abs(sch.potential(vmap, 1, xi) - sch.potential(vmap, 0, xi)
                                - 2.0 * sch.superpotential_derivative(vmap, 0, xi)))
        out.append(_check("schrodinger", f"{_tag(case)} partner potential", partner, 1e-9))
        both = np.max(np.abs(sch.potential(sch.build_map(case, -1), 0, -xi) - sch.potential(vmap, 0, xi)))
        out.append(_check("schrodinger", f"{_tag(case)} orientation-independent potential", both, 1e-12))
    if opts.case is None:
        ho = make_case("one", -2.0, 0.0)
        vmap = sch.build_map(ho)
        x = vmap.grid()
        spec = max(abs(lambda_l(ho, l) - 2 * l) for l in range(7))
        v = np.max(np.abs(sch.potential(vmap, 0, x) - (x * x - 1.0)))
        out.append(_check("schrodinger", "harmonic oscillator spectrum 2l", spec, 0.0))
        out.append(_check("schrodinger", "harmonic oscillator potential x^2 - 1", v, 1e-12))
        well = make_case("one_minus_s2", -3.0, 0.0)
        vmap = sch.build_map(well)
        x = vmap.grid()
        v = np.max(np.abs(sch.potential(vmap, 0, x) + 1.0))
        spec = max(abs(lambda_l(well, l) + 1.0 - (l + 1) ** 2) for l in range(7))
        out.append(_check("schrodinger", "infinite well potential -1", v, 1e-9))
        out.append(_check("schrodinger", "infinite well levels (l+1)^2", spec, 0.0))
        # deformed analogue on the default deformed Jacobi-type chain
        case = make_case("one_minus_s2", -5.0, 0.0)
        params = td.DeformedParams(case, 1.0, 2.0)
        vmap = sch.build_map(case)
        x = vmap.grid()
        lam = td.tilde_lambda(params)
        worst = 0.0
        for f in td.deformed_family(params, 2.0, 2):
            tf = sch.transformed(vmap, f)
            r = sch.schrodinger_residual(vmap, f.m, tf, lam, x,
                                         potential_fn=lambda xx, mm=f.m: sch.deformed_potential(vmap, mm, 1.0, xx))
            worst = max(worst, float(np.max(np.abs(r)) / np.max(np.abs(tf(x)))))
        out.append(_check("schrodinger", "deformed potential residual", worst, 1e-7))
    return out


RUNNERS = {
    "ode": suite_ode,
    "classical": suite_classical,
    "ladder": suite_ladder,
    "orthogonality": suite_orthogonality,
    "norms": suite_norms,
    "deformed": suite_deformed,
    "moments": suite_moments,
    "coherent": suite_coherent,
    "schrodinger": suite_schrodinger,
}


def run(names, opts: Options) -> dict:
    report = {"suites": {}, "passed": True}
    for name in names:
        checks = RUNNERS[name](opts)
        ok = all(c["passed"] for c in checks)
        report["suites"][name] = {"passed": ok, "checks": checks}
        report["passed"] = report["passed"] and ok
    return report
