"""Command-line front end.

Exit codes: 0 success, 1 a verification or verdict failed, 2 malformed
input, 3 domain violation (q, order, |z| >= 1), 4 complex coefficients
handed to a criterion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, criteria, membership, verification
from .membership import CheckConfig
from .qspecial import CATALOG_IDS, dilog, friedman_catalog, kq_series, psi_series, quantum_dilog, quantum_dilog_scaled
from .series import DEFAULT_ORDER, MIN_Q, DiskGrid, TruncatedSeries

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_COMPLEX = 4

ORDER_RANGE = (8, 4096)
ORDER_ENV = "QCONVEX_ORDER"

# named constructors; all but dilog need 0 < q < 1
NAMED_SERIES = {
    "kq": lambda q, n: kq_series(q, n),
    "psi": lambda q, n: psi_series(q, n),
    "quantum_dilog": lambda q, n: quantum_dilog(q, n),
    "quantum_dilog_scaled": lambda q, n: quantum_dilog_scaled(q, n),
    "dilog": lambda q, n: dilog(n),
}
Q_FREE = {"dilog", *CATALOG_IDS}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --- argument handling ------------------------------------------------------


def _default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise CliError(EXIT_INPUT, f"{ORDER_ENV}={raw!r} is not an integer") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_range(text: str) -> tuple[int, int]:
    """``"5"`` or ``"2..10"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None


def _points(values: list[str]) -> list[complex]:
    out = []
    for chunk in values:
        for part in chunk.split(","):
            part = part.strip().replace(" ", "")
            if not part:
                continue
            try:
                out.append(complex(part))
            except ValueError:
                raise CliError(EXIT_INPUT, f"cannot parse sample point {part!r}") from None
    if not out:
        raise CliError(EXIT_INPUT, "no sample points given")
    return out


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", type=float, default=0.5, help="deformation parameter, 0 < q <= 1 (default 0.5)")
    p.add_argument("--order", type=int, default=None, help=f"truncation order N (default ${ORDER_ENV} or {DEFAULT_ORDER})")
    p.add_argument("--radii", type=_float_list, default=(0.5, 0.8, 0.95), help="sample circle radii, comma-separated")
    p.add_argument("--angles", type=int, default=720, help="samples per circle")
    p.add_argument("--tol", type=float, default=None, help="membership tolerance (default 10*tail_note + 1e-9)")
    p.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qconvex", description="q-starlike and q-close-to-convex function toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    designator = "catalog tag, kq, psi, quantum_dilog, quantum_dilog_scaled, dilog, or a series JSON file"

    p = sub.add_parser("eval", parents=[common], help="evaluate a series at points inside the disk")
    p.add_argument("--fn", required=True, help=designator)
    p.add_argument("--z", action="append", required=True, help="sample point(s), e.g. 0.5 or 0.3+0.2j; repeatable")

    p = sub.add_parser("coeffs", parents=[common], help="emit series coefficients")
    p.add_argument("--fn", required=True, help=designator)
    p.add_argument("--n", type=_int_range, default=None, help="only coefficient N (or LO..HI)")

    p = sub.add_parser("check-membership", parents=[common], help="grid check of a class inequality")
    p.add_argument("--f", required=True, help=designator)
    p.add_argument("--g", default=None, help="reference function (" + designator + ")")
    p.add_argument("--check", choices=tuple(membership.CHECKS), default=None, help="default: kq with --g, else sq_star_def")

    p = sub.add_parser("check-criteria", parents=[common], help="coefficient criteria for K_q membership")
    p.add_argument("--f", required=True, help=designator)
    p.add_argument("--criterion", choices=(*criteria.CRITERIA, "all"), default="all")
    p.add_argument("--variant", choices=("sum", "chain"), default=None)

    p = sub.add_parser("bounds", parents=[common], help="coefficient bound table")
    p.add_argument("--class", dest="class_tag", required=True, choices=bounds.CLASS_TAGS)
    p.add_argument("--n", type=_int_range, default=(2, 10), help="LO..HI (default 2..10)")
    p.add_argument("--eps", type=float, default=bounds.CLASSICAL_EPS, help="classical limit evaluated at q = 1 - eps")

    sub.add_parser("verify", parents=[common], help="run the full verification suite")
    return parser


def _validate(args: argparse.Namespace) -> None:
    q = args.q
    if not (np.isfinite(q) and MIN_Q <= q <= 1.0):
        raise CliError(EXIT_DOMAIN, f"q must lie in [{MIN_Q}, 1], got {q!r}")
    if args.order is None:
        args.order = _default_order()
    lo, hi = ORDER_RANGE
    if not lo <= args.order <= hi:
        raise CliError(EXIT_DOMAIN, f"order must lie in [{lo}, {hi}], got {args.order}")


def _require_q_below_one(args: argparse.Namespace, what: str) -> None:
    if args.q >= 1.0:
        raise CliError(EXIT_DOMAIN, f"{what} needs 0 < q < 1")


def _config(args: argparse.Namespace) -> CheckConfig:
    try:
        grid = DiskGrid(args.radii, args.angles)
    except ValueError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    if args.tol is not None and args.tol < 0:
        raise CliError(EXIT_INPUT, "tol must be non-negative")
    return CheckConfig(grid=grid, tol=args.tol)


def load_series(designator: str, q: float, order: int) -> TruncatedSeries:
    """Resolve a designator: catalog tag, named constructor, or series JSON file."""
    if designator in CATALOG_IDS:
        return friedman_catalog(designator, order)
    if designator in NAMED_SERIES:
        if designator not in Q_FREE and q >= 1.0:
            raise CliError(EXIT_DOMAIN, f"{designator} needs 0 < q < 1")
        return NAMED_SERIES[designator](q, order)
    path = Path(designator)
    if not path.is_file():
        raise CliError(EXIT_INPUT, f"{designator!r} is neither a known function nor a readable file")
    try:
        return TruncatedSeries.from_json(path.read_text())
    except (OSError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None


def load_for_check(designator: str, q: float, order: int) -> TruncatedSeries:
    # generated functions are built long so their tail never inflates the tolerance
    if designator in CATALOG_IDS or designator in NAMED_SERIES:
        return load_series(designator, q, max(order, verification.REFERENCE_ORDER))
    return load_series(designator, q, order)


# --- output -------------------------------------------------------------------


def dumps_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def dumps_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


# --- commands -------------------------------------------------------------------


def cmd_eval(args) -> tuple[str, int]:
    f = load_series(args.fn, args.q, args.order)
    pts = _points(args.z)
    for z in pts:
        if abs(z) >= 1.0:
            raise CliError(EXIT_DOMAIN, f"|z| must be < 1, got |{z}| = {abs(z)}")
    vals = [f(z) for z in pts]
    if args.format == "csv":
        rows = [(z.real, z.imag, v.real, v.imag) for z, v in zip(pts, vals)]
        return dumps_csv(["z_re", "z_im", "value_re", "value_im"], rows), EXIT_OK
    doc = {
        "fn": args.fn,
        "order": f.order,
        "q": args.q,
        "values": [{"z": _pair(z), "value": _pair(v)} for z, v in zip(pts, vals)],
    }
    return dumps_json(doc), EXIT_OK


def cmd_coeffs(args) -> tuple[str, int]:
    f = load_series(args.fn, args.q, args.order)
    if args.n is None:
        lo, hi = 0, f.order
    else:
        lo, hi = args.n
        if lo < 0 or hi > f.order or lo > hi:
            raise CliError(EXIT_DOMAIN, f"coefficient range {lo}..{hi} outside 0..{f.order}")
    if args.format == "csv":
        rows = [(n, f.coeffs[n].real, f.coeffs[n].imag) for n in range(lo, hi + 1)]
        return dumps_csv(["n", "re", "im"], rows), EXIT_OK
    if args.n is None:
        return dumps_json(f.to_dict(name=f.name or args.fn)), EXIT_OK
    doc = {
        "fn": args.fn,
        "q": args.q,
        "order": f.order,
        "coefficients": [{"n": n, "value": _pair(f.coeffs[n])} for n in range(lo, hi + 1)],
    }
    return dumps_json(doc), EXIT_OK


def cmd_check_membership(args) -> tuple[str, int]:
    check = args.check or ("kq" if args.g else "sq_star_def")
    needs_g = membership.CHECKS[check]
    if needs_g and args.g is None:
        raise CliError(EXIT_INPUT, f"check {check!r} needs --g")
    if check not in ("classical_starlike", "classical_ctc"):
        _require_q_below_one(args, check)
    cfg = _config(args)
    f = load_for_check(args.f, args.q, args.order)
    g = load_for_check(args.g, args.q, args.order) if needs_g else None
    verdict = membership.run_check(check, f, g, args.q, cfg)
    code = EXIT_OK if verdict.holds else EXIT_FAILED
    if args.format == "csv":
        grid = cfg.grid
        z = grid.points()
        m = membership.margin_field(check, f, g, args.q, z)
        rows = []
        for i, r in enumerate(grid.radii):
            for theta, v in zip(grid.thetas, m[i]):
                rows.append((float(theta), r, float(v)))
        return dumps_csv(["theta", "radius", "margin"], rows), code
    doc = verdict.to_dict()
    doc.update({"f": args.f, "g": args.g, "q": args.q, "order": args.order})
    return dumps_json(doc), code


def cmd_check_criteria(args) -> tuple[str, int]:
    f = load_series(args.f, args.q, args.order)
    A = f.coeffs
    criteria.as_real_sequence(A)  # type and normalization errors surface before any criterion runs
    names = list(criteria.CRITERIA) if args.criterion == "all" else [args.criterion]
    results = []
    for name in names:
        allowed = criteria.CRITERION_VARIANTS[name]
        if args.variant is not None and args.variant not in allowed:
            if args.criterion != "all":
                raise CliError(EXIT_INPUT, f"{name} has no {args.variant!r} variant")
            continue
        for variant in [args.variant] if args.variant else allowed:
            try:
                res = criteria.CRITERIA[name](A, args.q, variant).to_dict()
            except ValueError as exc:
                if args.criterion != "all":
                    raise
                res = {"criterion": name, "variant": variant, "satisfied": False, "not_applicable": str(exc)}
            results.append(res)
    any_ok = any(r["satisfied"] for r in results)
    code = EXIT_OK if any_ok else EXIT_FAILED
    if args.format == "csv":
        rows = [
            (r["criterion"], r["variant"], r["satisfied"], r.get("statistic", float("nan")), r.get("certifies", ""))
            for r in results
        ]
        return dumps_csv(["criterion", "variant", "satisfied", "statistic", "certifies"], rows), code
    doc = {"f": args.f, "q": args.q, "order": f.order, "results": results}
    return dumps_json(_finite(doc)), code


def cmd_bounds(args) -> tuple[str, int]:
    lo, hi = args.n
    if args.class_tag == "sq_cn" or args.class_tag == "sq_product":
        _require_q_below_one(args, args.class_tag)
    if not 0.0 < args.eps < 1.0:
        raise CliError(EXIT_DOMAIN, "eps must lie in (0, 1)")
    lo, hi = max(lo, 1), min(hi, args.order)
    if hi < lo:
        raise CliError(EXIT_DOMAIN, f"empty n range after clamping to [1, {args.order}]")
    table = bounds.bound_table(args.class_tag, args.q, lo, hi, args.eps)
    if args.format == "json":
        return dumps_json(table.to_dict()), EXIT_OK
    return table.to_csv(), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    _require_q_below_one(args, "verify")
    outcomes = verification.run_suite(args.q, args.order, _config(args))
    code = EXIT_OK if verification.suite_passed(outcomes) else EXIT_FAILED
    if args.format == "csv":
        return dumps_csv(["check", "status"], [(o.name, o.status) for o in outcomes]), code
    doc = {"q": args.q, "order": args.order, "passed": code == EXIT_OK, "checks": [o.to_dict() for o in outcomes]}
    return dumps_json(_finite(doc)), code


def _finite(obj):
    """Replace non-finite floats by None and numpy scalars by Python ones for JSON."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


COMMANDS = {
    "eval": cmd_eval,
    "coeffs": cmd_coeffs,
    "check-membership": cmd_check_membership,
    "check-criteria": cmd_check_criteria,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
}
DEFAULT_FORMAT = {"bounds": "csv"}


def execute(args: argparse.Namespace) -> tuple[str, int]:
    """Run a parsed command; returns the report text and the exit code."""
    if args.format is None:
        args.format = DEFAULT_FORMAT.get(args.command, "json")
    _validate(args)
    try:
        return COMMANDS[args.command](args)
    except criteria.ComplexCoefficientsError as exc:
        raise CliError(EXIT_COMPLEX, str(exc)) from None
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def run(argv: list[str] | None = None) -> tuple[str, int]:
    return execute(build_parser().parse_args(argv))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = execute(args)
        if args.out is not None:
            args.out.write_text(text)
        else:
            sys.stdout.write(text)
    except CliError as exc:
        print(f"qconvex: error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"qconvex: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code
