"""Command-line front end.

Four subcommands, all driven by a single JSON config file (flags only
override fields inside it):

* ``constant``  — ball measures, modulus ball integrals, and the averaged
  deviation ``I(h)/mu(B_h)`` over a grid of window scales.
* ``verify``    — equality/inequality reports for the named sharp bounds,
  optionally in exact rational arithmetic on lattices.
* ``stechkin``  — the best-approximation curve ``n -> E(n)``.
* ``oracle``    — randomized suites, Monte Carlo cross-checks, and exact
  rational replays, as one JSON document.

Exit codes: 0 success, 1 a checked inequality was violated (or a suite /
cross-check failed), 2 bad configuration, 3 numeric failure (divergent
integral, unreachable tolerance).  Data goes to stdout (or ``--out``),
diagnostics to stderr; output bytes are a pure function of config + seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from ._quad import QuadratureError
from .calculus import (
    CertificationError,
    QuadratureSpec,
    ball_integral_of_modulus,
    default_spec,
)
from .modulus import Modulus, from_config as modulus_from_config
from .operators import (
    THEOREM_IDS,
    InequalityReport,
    kernel_from_config,
    modulus_label,
    stechkin_curve,
    theorem_report,
)
from .oracle import EXACT_THEOREMS, MC_CHECKS, exact_verify, mc_cross_check, random_suite
from .space import Space

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(Exception):
    """Raised for anything wrong with the config file itself."""


# ----------------------------------------------------------------------
# formatting
# ----------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _csv(columns: list[str], rows: list[dict]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _render(columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _json_text(rows)
    return _csv(columns, rows)


# ----------------------------------------------------------------------
# config digestion
# ----------------------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _number(value, *, exact: bool = False):
    """A config number: JSON numerals, or strings like "3/2" for rationals."""
    if isinstance(value, str):
        try:
            q = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad number {value!r}") from exc
        return q if exact else float(q)
    if isinstance(value, (int, float)):
        return Fraction(value) if exact else float(value)
    raise ConfigError(f"bad number {value!r}")


def _space_from(cfg: dict) -> Space:
    node = cfg.get("space")
    if not isinstance(node, dict):
        raise ConfigError("config needs a 'space' object with kind/d/m")
    try:
        return Space.from_config(node)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _modulus_from(cfg: dict) -> Modulus:
    node = cfg.get("modulus")
    if not isinstance(node, dict):
        raise ConfigError("config needs a 'modulus' object")
    if node.get("kind") == "table":
        pts = node.get("points")
        if isinstance(pts, list):
            node = dict(node)
            node["points"] = [
                [Fraction(p) if isinstance(p, str) else p for p in pair] for pair in pts
            ]
    try:
        return modulus_from_config(node)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad modulus config: {exc}") from exc


def _spec_from(cfg: dict, space: Space, omega: Modulus, seed: Optional[int]) -> Optional[QuadratureSpec]:
    method = cfg.get("method")
    overrides = {}
    if seed is not None:
        overrides["seed"] = int(seed)
    elif "seed" in cfg:
        overrides["seed"] = int(cfg["seed"])
    if "mc_samples" in cfg:
        overrides["mc_samples"] = int(cfg["mc_samples"])
    if method is None and not overrides:
        return None
    try:
        spec = default_spec(space, omega, **overrides)
        return spec.with_method(str(method)) if method is not None else spec
    except ValueError as exc:
        raise ConfigError(f"bad quadrature settings: {exc}") from exc


def _h_values(cfg: dict, *, exact: bool) -> list:
    values = cfg.get("h_values")
    if values is None and "h" in cfg:
        values = [cfg["h"]]
    if not isinstance(values, list) or not values:
        raise ConfigError("config needs 'h_values' (a nonempty list) or a single 'h'")
    return [_number(v, exact=exact) for v in values]


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------


def cmd_constant(cfg: dict, args) -> tuple[str, int]:
    space = _space_from(cfg)
    omega = _modulus_from(cfg)
    spec = _spec_from(cfg, space, omega, args.seed)
    rows = []
    for h in _h_values(cfg, exact=False):
        mu = float(space.ball_measure(h))
        est = ball_integral_of_modulus(space, omega, h, spec)
        rows.append(
            {
                "d": space.d,
                "m": space.m,
                "alpha_or_modulus": modulus_label(omega),
                "h": float(h),
                "mu": mu,
                "integral": est.value,
                "deviation": est.value / mu,
            }
        )
    columns = ["d", "m", "alpha_or_modulus", "h", "mu", "integral", "deviation"]
    return _render(columns, rows, args.format), EXIT_OK


def _report_row(report: InequalityReport, want_exact: bool) -> dict:
    row = report.to_row()
    if want_exact:
        row["exact"] = str(report.exact["gap"]) if report.exact else ""
    return row


def cmd_verify(cfg: dict, args) -> tuple[str, int]:
    space = _space_from(cfg)
    omega = _modulus_from(cfg)
    exact = bool(cfg.get("exact", False))
    theorems = cfg.get("theorems")
    if theorems is None:
        theorems = list(EXACT_THEOREMS) if exact else list(THEOREM_IDS)
    if not isinstance(theorems, list) or not theorems:
        raise ConfigError("'theorems' must be a nonempty list of theorem ids")
    for tid in theorems:
        if tid not in THEOREM_IDS:
            raise ConfigError(f"unknown theorem id {tid!r}; expected one of {THEOREM_IDS}")
        if exact and tid not in EXACT_THEOREMS:
            raise ConfigError(f"exact mode covers {EXACT_THEOREMS}, not {tid!r}")
    if exact and not space.is_lattice:
        raise ConfigError("exact mode runs on lattice spaces")
    kernel = None
    if "kernel" in cfg:
        try:
            kernel = kernel_from_config(cfg["kernel"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad kernel config: {exc}") from exc
    tol = args.tol if args.tol is not None else cfg.get("tol")
    spec = _spec_from(cfg, space, omega, args.seed)

    rows = []
    violated = False
    for h in _h_values(cfg, exact=exact):
        for tid in theorems:
            if exact:
                report = exact_verify(tid, space, omega, h)
            else:
                report = theorem_report(
                    tid, space, omega, h, kernel=kernel, spec=spec,
                    tol=float(tol) if tol is not None else None,
                )
            violated = violated or report.verdict == "Violated"
            rows.append(_report_row(report, exact))
    columns = [
        "theorem_id", "d", "m", "alpha_or_modulus", "h",
        "lhs", "rhs_term1", "rhs_term2", "gap", "verdict",
    ]
    if exact:
        columns.append("exact")
    return _render(columns, rows, args.format), EXIT_VIOLATION if violated else EXIT_OK


def cmd_stechkin(cfg: dict, args) -> tuple[str, int]:
    space = _space_from(cfg)
    omega = _modulus_from(cfg)
    values = cfg.get("n_values")
    if not isinstance(values, list) or not values:
        raise ConfigError("config needs 'n_values' (a nonempty list)")
    ns = [_number(v) for v in values]
    spec = _spec_from(cfg, space, omega, args.seed)
    points = stechkin_curve(space, omega, ns, spec)
    rows = [
        {
            "d": space.d,
            "m": space.m,
            "alpha_or_modulus": modulus_label(omega),
            "n": p.n,
            "h": p.h,
            "e_n": p.e_n,
        }
        for p in points
    ]
    columns = ["d", "m", "alpha_or_modulus", "n", "h", "e_n"]
    return _render(columns, rows, args.format), EXIT_OK


def cmd_oracle(cfg: dict, args) -> tuple[str, int]:
    if args.format == "csv":
        raise ConfigError("oracle output is nested; use --format json")
    out: dict = {}
    failed = False

    suites = cfg.get("suites", [])
    if suites:
        if not isinstance(suites, list):
            raise ConfigError("'suites' must be a list of suite objects")
        reports = []
        for node in suites:
            if not isinstance(node, dict) or "theorem_id" not in node:
                raise ConfigError("each suite needs at least a 'theorem_id'")
            tid = node["theorem_id"]
            if tid not in THEOREM_IDS:
                raise ConfigError(f"unknown theorem id {tid!r}")
            seed = args.seed if args.seed is not None else int(node.get("seed", 1))
            rep = random_suite(tid, trials=int(node.get("trials", 1000)), seed=seed)
            failed = failed or rep.violations > 0
            reports.append(rep.to_json())
        out["suites"] = reports

    checks = cfg.get("mc_checks")
    if checks:
        if checks is True or checks == "all":
            checks = list(MC_CHECKS)
        if not isinstance(checks, list):
            raise ConfigError("'mc_checks' must be a list of check names, true, or 'all'")
        results = []
        for name in checks:
            if name not in MC_CHECKS:
                raise ConfigError(f"unknown cross-check {name!r}; expected one of {MC_CHECKS}")
            seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
            res = mc_cross_check(name, seed=seed)
            failed = failed or not res["ok"]
            results.append(res)
        out["mc_checks"] = results

    exact_nodes = cfg.get("exact", [])
    if exact_nodes:
        if not isinstance(exact_nodes, list):
            raise ConfigError("'exact' must be a list of exact-verification objects")
        reports = []
        for node in exact_nodes:
            if not isinstance(node, dict):
                raise ConfigError("each exact entry must be an object")
            tid = node.get("theorem_id")
            if tid not in EXACT_THEOREMS:
                raise ConfigError(f"exact mode covers {EXACT_THEOREMS}, not {tid!r}")
            space = _space_from(node)
            omega = _modulus_from(node)
            if "h" not in node:
                raise ConfigError("each exact entry needs 'h'")
            h = _number(node["h"], exact=True)
            report = exact_verify(tid, space, omega, h)
            failed = failed or report.verdict == "Violated"
            reports.append(_report_row(report, True))
        out["exact"] = reports

    if not out:
        raise ConfigError("oracle config needs at least one of 'suites', 'mc_checks', 'exact'")
    return _json_text(out), EXIT_VIOLATION if failed else EXIT_OK


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

_COMMANDS = {
    "constant": cmd_constant,
    "verify": cmd_verify,
    "stechkin": cmd_stechkin,
    "oracle": cmd_oracle,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sharp-ineq",
        description="Sharp-constant laboratory for smoothness inequalities",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("constant", "ball measures and averaged modulus integrals"),
        ("verify", "equality reports for the named sharp bounds"),
        ("stechkin", "best-approximation curve of the identity"),
        ("oracle", "randomized suites, cross-checks, exact replays"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--seed", type=int, default=None, help="override every RNG seed")
        p.add_argument("--tol", type=float, default=None, help="override verdict tolerance")
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument(
            "--format", choices=("csv", "json"),
            default="json" if name == "oracle" else "csv",
            help="output format",
        )
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        text, code = _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, CertificationError, ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
