"""Command-line entry point: ``hyperladder {family,verify,coherent,potential}``.

Settings come from flags, from an optional ``--config`` file of ``key=value``
lines, and from built-in defaults, in that order of precedence.  Exit codes:
0 success, 1 a verification check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Any

import numpy as np

from . import coherent as co
from . import hypfun as hf
from . import quadrature
from . import schrodinger as sch
from . import suites
from . import tilde as td
from .cases import SIGMA_TAGS, capital_lambda, lambda_l, make_case
from .errors import HyperladderError

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# settings
# ---------------------------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{num}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"0..6"`` (inclusive) or ``"0,2,4"``."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return sorted({int(part) for part in text.split(",")})
    except ValueError:
        raise UsageError(f"cannot parse index range {text!r}") from None


class Settings:
    """Flag values layered over a config file."""

    def __init__(self, args: argparse.Namespace, config: dict[str, str]):
        self.args = args
        self.config = config

    def get(self, name: str, kind=str, default: Any = None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.config:
            try:
                return kind(self.config[name])
            except ValueError:
                raise UsageError(f"config value for {name!r} is not a valid {kind.__name__}") from None
        return default

    def require(self, name: str, kind=str):
        value = self.get(name, kind)
        if value is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")
        return value

    def case(self, required: bool = True):
        tag = self.get("sigma")
        if tag is None:
            if required:
                raise UsageError("--sigma is required")
            return None
        if tag not in SIGMA_TAGS:
            raise UsageError(f"--sigma must be one of {', '.join(SIGMA_TAGS)}")
        return make_case(tag, self.require("alpha", float), self.require("beta", float))

    @property
    def tol(self) -> float:
        return self.get("tol", float, quadrature.DEFAULT_TOL)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def write_atomic(path: str, text: str) -> None:
    """Write UTF-8 text through a temporary file in the target directory."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".hyperladder-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(settings: Settings, text: str) -> None:
    out = settings.get("out")
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _finite_or_label(x: float):
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _clean(data):
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(data, dict):
        return {k: _clean(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_clean(v) for v in data]
    if isinstance(data, (float, np.floating)):
        return _finite_or_label(float(data))
    if isinstance(data, np.integer):
        return int(data)
    return data


def _json(data) -> str:
    return json.dumps(_clean(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _plain_family(settings: Settings, case) -> dict:
    levels = parse_range(settings.get("l", str, "0..6"))
    m_fixed = settings.get("m", float)
    functions = []
    for l in levels:
        ms = range(l + 1) if m_fixed is None else [int(m_fixed)]
        for m in ms:
            functions.append(hf.associated(case, l, m))
    functions.sort(key=lambda f: (f.l, f.m))
    return {
        "kind": "plain",
        "case": case.to_dict(),
        "capital_lambda": capital_lambda(case),
        "functions": [f.to_dict() for f in functions],
        "spectrum": [{"l": l, "lambda": lambda_l(case, l)} for l in sorted(set(f.l for f in functions))],
    }


def _deformed_family(settings: Settings, case, delta: float) -> dict:
    m = settings.require("m", float)
    levels = [float(l) for l in parse_range(settings.get("l", str, "0"))] if settings.get("l") is not None else [m]
    functions, spectrum = [], []
    for l in levels:
        steps = l - m
        if steps < 0 or abs(steps - round(steps)) > 1e-12:
            raise UsageError(f"--l {l:g} must be --m plus a nonnegative integer")
        params = td.DeformedParams(case, delta, l)
        functions.extend(td.deformed_family(params, l, int(round(steps))))
        spectrum.append({"l": l, "lambda_tilde": td.tilde_lambda(params)})
    functions.sort(key=lambda f: (f.l, f.m))
    return {
        "kind": "deformed",
        "case": case.to_dict(),
        "delta": delta,
        "m_set": td.m_set(case, delta).to_list(),
        "functions": [f.to_dict() for f in functions],
        "spectrum": spectrum,
    }


def load_family(path: str) -> list:
    """Reload the functions of a ``family`` artifact."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    cls = td.DeformedFunction if data["kind"] == "deformed" else hf.HypFunction
    return [cls.from_dict(item) for item in data["functions"]]


def cmd_family(settings: Settings) -> int:
    case = settings.case()
    delta = settings.get("delta", float)
    data = _plain_family(settings, case) if delta is None else _deformed_family(settings, case, delta)
    if settings.get("format", str, "json") == "csv":
        rows = []
        for f in data["functions"]:
            for j, c in enumerate(f["coeffs"]):
                rows.append([f["l"], f["m"], j, c])
        emit(settings, _csv(["l", "m", "j", "coeff"], rows))
    else:
        emit(settings, _json(data))
    return EXIT_OK


def cmd_verify(settings: Settings) -> int:
    name = settings.get("suite", str, "all")
    if name != "all" and name not in suites.SUITES:
        raise UsageError(f"--suite must be 'all' or one of {', '.join(suites.SUITES)}")
    n = settings.get("n", int)
    opts = suites.Options(case=settings.case(required=False), m=settings.get("m", float), n=n,
                          delta=settings.get("delta", float), tol=settings.tol)
    names = suites.SUITES if name == "all" else (name,)
    report = suites.run(names, opts)
    if settings.get("format", str, "json") == "csv":
        rows = [[c["suite"], c["name"], c["value"], c["threshold"], c["passed"]]
                for s in report["suites"].values() for c in s["checks"]]
        emit(settings, _csv(["suite", "check", "value", "threshold", "passed"], rows))
    else:
        emit(settings, _json(report))
    for suite_name, body in report["suites"].items():
        failed = sum(not c["passed"] for c in body["checks"])
        status = "PASS" if body["passed"] else f"FAIL ({failed} checks)"
        print(f"{suite_name}: {status}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_coherent(settings: Settings) -> int:
    case = settings.case()
    m = settings.require("m", float)
    fam = co.coherent_family(case, m, delta=settings.get("delta", float), n_max=settings.get("n", int))
    J = settings.require("J", float)
    gamma = settings.get("gamma", float, 0.0)
    st = co.state(fam, J, gamma)
    closed = co.normalizer_closed_form(fam, J)
    data = {
        "family": fam.label(),
        "case": case.to_dict(),
        "m": fam.m,
        "delta": fam.delta,
        "lambda_cap": fam.lambda_cap,
        "J": J,
        "gamma": gamma,
        "normalizer": co.normalizer(fam, J),
        "normalizer_closed_form": closed,
        "mean_energy": co.mean_energy(st),
        "levels": [{"n": n, "e": fam.e[n], "rho": fam.rho[n],
                    "re": float(st.coeffs[n].real), "im": float(st.coeffs[n].imag)}
                   for n in range(len(fam.e))],
    }
    if settings.get("format", str, "json") == "csv":
        emit(settings, _csv(["n", "e", "rho", "re", "im"],
                            [[r["n"], r["e"], r["rho"], r["re"], r["im"]] for r in data["levels"]]))
    else:
        emit(settings, _json(data))
    return EXIT_OK


def cmd_potential(settings: Settings) -> int:
    case = settings.case()
    m = settings.require("m", int)
    levels = [l for l in parse_range(settings.get("l", str, f"{m}..{m + 3}")) if l >= m]
    orientation = settings.get("orientation", int, 1)
    if orientation not in (1, -1):
        raise UsageError("--orientation must be 1 or -1")
    vmap = sch.build_map(case, orientation)
    x = vmap.grid(settings.get("points", int, 200))
    columns = [x, sch.potential(vmap, m, x)]
    header = ["x", f"V_{m}"]
    for l in levels:
        columns.append(sch.psi(vmap, m, l, x))
        header.append(f"psi_{l}_{m}")
    emit(settings, _csv(header, zip(*columns)))
    return EXIT_OK


COMMANDS = {"family": cmd_family, "verify": cmd_verify, "coherent": cmd_coherent, "potential": cmd_potential}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperladder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file; flags take precedence")
        p.add_argument("--sigma", help="one, s, one_minus_s2, s2_minus_one, s2 or s2_plus_one")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--m", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--tol", type=float, help="quadrature tolerance (default from HYPERLADDER_TOL)")
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=("json", "csv"))

    p = sub.add_parser("family", help="build a family of associated or deformed functions")
    common(p)
    p.add_argument("--l", help="levels: 3, 0..6 or 0,2,4")

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", help="all or one of " + ", ".join(suites.SUITES))
    p.add_argument("--n", type=int)

    p = sub.add_parser("coherent", help="coherent-state coefficients")
    common(p)
    p.add_argument("--J", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n", type=int, help="truncation for infinite families")

    p = sub.add_parser("potential", help="CSV table of x, V_m(x) and transformed functions")
    common(p)
    p.add_argument("--l", help="levels: 3, 0..6 or 0,2,4")
    p.add_argument("--orientation", type=int)
    p.add_argument("--points", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        config = read_config(args.config) if args.config else {}
        if args.command == "potential" and args.m is not None and args.m != int(args.m):
            raise UsageError("--m must be an integer for potential tables")
        if args.command == "potential" and args.m is not None:
            args.m = int(args.m)
        return COMMANDS[args.command](Settings(args, config))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HyperladderError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
