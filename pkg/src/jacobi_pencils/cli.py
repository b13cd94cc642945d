"""Command-line interface.

Exit status: 0 success, 1 a verification check failed, 2 bad configuration
or arguments, 3 internal error.  Errors are also written to stderr as one
JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
from pathlib import Path

from .numeric import Field, QuadField, field_for_mode
from .operator import (
    build_operator,
    build_operator_via_basis,
    check_hessenberg,
    verify_vector_recurrence,
    verify_basis_images,
    verify_gram_identity,
    verify_oprl_degeneration,
)
from .pencil import ConfigError, JacobiPencil, load_pencil, pencil_from_config, validate_pencil
from .recurrence import generate, generate_values, recurrence_residual
from .report import CheckReport, dump_reports
from .roots import realness_report, rows_to_json
from . import theta1 as th

log = logging.getLogger("jacobi_pencils")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

BUILTINS = {
    "theta1": {"builtin": "theta1"},
    "chebyshev": {"builtin": "oprl_square", "a": {"kind": "constant", "value": "1/2"},
                  "b": {"kind": "constant", "value": "0"}, "name": "chebyshev"},
}

SUITES = ("recurrence", "operator", "theta1", "system", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--pencil", type=Path, help="pencil config file (JSON)")
    src.add_argument("--builtin", choices=sorted(BUILTINS), help="builtin pencil")
    p.add_argument("--n", type=int, default=10, help="degree / truncation size")
    p.add_argument("--mode", choices=("f64", "rational", "quadext"), help="scalar mode")
    p.add_argument("--radicand", type=int, help="radicand d for quadext mode")
    p.add_argument("--tol", type=float, help="float tolerance override")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="directory for output files")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobi-pencils", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="coefficient table of p_0..p_N")
    _common(g)

    e = sub.add_parser("eval", help="values p_n(x) at given points")
    _common(e)
    e.add_argument("--at", required=True, help="comma-separated points")

    v = sub.add_parser("verify", help="run identity checks")
    _common(v)
    v.add_argument("--suite", choices=SUITES, default="all")

    o = sub.add_parser("operator", help="export the truncation of A and its Gram matrix")
    _common(o)

    c = sub.add_parser("theta1-crosscheck", help="recurrence vs closed forms for theta1")
    _common(c)
    c.add_argument("--grid", default="64", help="point count, or comma-separated t values")

    z = sub.add_parser("zeros", help="zeros of p_1..p_N and realness summary")
    _common(z)
    z.add_argument("--imag-tol", type=float, default=1e-8)
    z.add_argument("--allow-high-degree", action="store_true")
    return parser


# ---------------------------------------------------------------------------

def _field(args, default: Field | None) -> Field | None:
    if args.mode is None:
        if args.radicand is not None:
            return QuadField(args.radicand)
        return default
    if args.mode == "quadext":
        return field_for_mode("quadext", args.radicand if args.radicand is not None else 2)
    return field_for_mode(args.mode)


def _load(args, max_index: int) -> JacobiPencil:
    try:
        fld = _field(args, None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.pencil is not None:
        return load_pencil(args.pencil, max_index, fld)
    cfg = BUILTINS[args.builtin or "theta1"]
    return pencil_from_config(cfg, max_index, fld)


def _valid(p: JacobiPencil) -> None:
    bad = validate_pencil(p)
    if bad:
        raise ConfigError("invalid pencil: " + "; ".join(str(v) for v in bad[:10]))


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(args, files: dict[str, str], stdout_key: str) -> None:
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (args.out / name).write_text(text)
    sys.stdout.write(files[stdout_key])


def cmd_gen(args) -> int:
    p = _load(args, max(args.n, 2))
    _valid(p)
    sys_ = generate(p, max(args.n, 1))
    polys = sys_.polys[: args.n + 1]
    fmt = p.field.format
    width = len(polys)
    rows = [["n"] + [f"c{k}" for k in range(width)]]
    for n, q in enumerate(polys):
        coeffs = [fmt(c) for c in q]
        rows.append([n] + coeffs + [""] * (width - len(coeffs)))
    doc = {
        "pencil": p.name,
        "mode": p.field.name,
        **({"radicand": p.field.d} if isinstance(p.field, QuadField) else {}),
        "polynomials": [{"n": n, "coeffs": [fmt(c) for c in q]} for n, q in enumerate(polys)],
    }
    _emit(args, {"polynomials.csv": _csv(rows), "polynomials.json": json.dumps(doc, indent=2) + "\n"},
          "polynomials.csv")
    return EXIT_OK


def cmd_eval(args) -> int:
    p = _load(args, max(args.n, 2))
    _valid(p)
    try:
        points = [p.field.parse(s) for s in args.at.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [["n", "x", "value"]]
    for x in points:
        vals = generate_values(p, args.n, x)
        for n, v in enumerate(vals):
            rows.append([n, p.field.format(x), p.field.format(v)])
    _emit(args, {"values.csv": _csv(rows)}, "values.csv")
    return EXIT_OK


def _recurrence_suite(p: JacobiPencil, N: int) -> list[CheckReport]:
    sys_ = generate(p, max(N, 2))
    bad, worst = [], 0.0
    for n in range(sys_.N - 1):
        r = recurrence_residual(sys_, n)
        if p.field.exact:
            if not r.is_zero():
                bad.append(n)
        else:
            scale = max(1.0, max(abs(float(c)) for c in sys_[n + 2]))
            dev = max((abs(float(c)) for c in r), default=0.0) / scale
            worst = max(worst, dev)
            if dev > 1e-12:
                bad.append(n)
    return [CheckReport("recurrence residuals", not bad, worst, 0.0 if p.field.exact else 1e-12,
                        {"N": sys_.N, "mode": p.field.name, "failed_rows": bad})]


def _operator_suite(p: JacobiPencil, N: int, tol) -> list[CheckReport]:
    T = build_operator(p, N)
    reports = [
        check_hessenberg(T),
        verify_basis_images(p, N, tol, T),
        verify_gram_identity(p, N, tol, T),
        verify_vector_recurrence(p, N, tol, T),
    ]
    small = min(N, 12)
    Tb = build_operator_via_basis(p, small)
    if p.field.exact:
        same = Tb.columns == T.columns[: small + 1]
        dev = 0.0 if same else float("inf")
    else:
        dev = max((c1 - c2).norm() for c1, c2 in zip(Tb.columns, T.columns))
        same = dev <= 1e-12 * T.kappa()
    reports.append(CheckReport("column recursion = basis expansion", same, dev, 0.0, {"N": small}))
    if p.origin == "oprl_square":
        reports.append(verify_oprl_degeneration(p, N, T))
    return reports


def _theta1_suite(N: int, seed: int) -> list[CheckReport]:
    reports = [th.crosscheck_theta1(min(N, 30))]
    left, right = th.factorization_identity()
    reports.append(CheckReport("quartic factorization", left == right, 0.0, 0.0))
    return reports


def _system_suite(seed: int, samples: int = 50) -> list[CheckReport]:
    rng = random.Random(seed)
    det_worst = res_worst = flip_worst = 0.0
    for _ in range(samples):
        lam = _admissible(rng)
        s = th.coefficient_system(lam)
        det_worst = max(det_worst, s.det_relative_error)
        res_worst = max(res_worst, s.residual)
        for n in range(0, 31):
            a = th.root_representation(n, lam, sign=1)
            b = th.root_representation(n, lam, sign=-1)
            flip_worst = max(flip_worst, abs(a - b) / max(abs(a), 1e-300))
    return [
        CheckReport("determinant of 4x4 system", det_worst <= 1e-10, det_worst, 1e-10, {"samples": samples}),
        CheckReport("closed-form coefficients solve system", res_worst <= 1e-10, res_worst, 1e-10, {"samples": samples}),
        CheckReport("square-root branch invariance", flip_worst <= 1e-12, flip_worst, 1e-12, {"samples": samples}),
    ]


def _admissible(rng: random.Random, radius: float = 3.0) -> complex:
    while True:
        lam = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(lam) <= radius and min(abs(lam + 2), abs(lam + 1 - 2 ** 0.5), abs(lam + 1 + 2 ** 0.5)) > 1e-3:
            return lam


def cmd_verify(args) -> int:
    suite = args.suite
    N = args.n
    p = _load(args, N + 1)
    bad = validate_pencil(p)
    reports = [CheckReport("pencil constraints", not bad, float(len(bad)), 0.0,
                           {"violations": [str(v) for v in bad]})]
    if not bad:
        if suite in ("recurrence", "all"):
            reports += _recurrence_suite(p, N)
        if suite in ("operator", "all"):
            reports += _operator_suite(p, N, args.tol)
        if suite in ("theta1", "all") and p.origin == "theta1":
            reports += _theta1_suite(N, args.seed)
        if suite in ("system", "all") and p.origin == "theta1":
            reports += _system_suite(args.seed)
    text = dump_reports(reports) + "\n"
    _emit(args, {"verify.json": text}, "verify.json")
    for r in reports:
        log.info(r.line())
    return EXIT_OK if all(reports) else EXIT_FAIL


def cmd_operator(args) -> int:
    p = _load(args, args.n + 1)
    _valid(p)
    T = build_operator(p, args.n)
    fmt = p.field.format
    dense = T.dense()
    a_rows = [[""] + [f"Ae{k}" for k in range(T.N + 1)]]
    a_rows += [[f"e{j}"] + [fmt(x) for x in row] for j, row in enumerate(dense)]
    g = verify_gram_identity(p, args.n, args.tol, T)
    gram = g.data["gram"]
    g_rows = [[fmt(x) for x in row] for row in gram]
    files = {
        "operator.csv": _csv(a_rows),
        "gram.csv": _csv(g_rows),
        "operator_report.json": dump_reports([check_hessenberg(T), g]) + "\n",
    }
    _emit(args, files, "operator.csv")
    return EXIT_OK if g.passed else EXIT_FAIL


def _parse_grid(text: str) -> list[float]:
    text = text.strip()
    if "," in text:
        return [float(x) for x in text.split(",") if x.strip()]
    return th.default_grid(int(text))


def cmd_crosscheck(args) -> int:
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        raise ConfigError(f"bad --grid: {exc}") from exc
    try:
        rep = th.crosscheck_theta1(args.n, grid, tol=args.tol or 1e-9)
    except th.DomainError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(args, {"crosscheck.json": dump_reports([rep]) + "\n"}, "crosscheck.json")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_zeros(args) -> int:
    p = _load(args, max(args.n, 2))
    _valid(p)
    if args.n > 60 and not args.allow_high_degree:
        raise ConfigError("degrees above 60 need --allow-high-degree")
    rows = realness_report(p, args.n, args.imag_tol, seed=args.seed,
                           allow_high_degree=args.allow_high_degree)
    system = generate(p, max(args.n, 1))
    z_rows = [["n", "re", "im", "residual"]]
    for row in rows:
        q = system[row.n].map(complex)
        for r in row.roots:
            z_rows.append([row.n, repr(float(r.real)), repr(float(r.imag)), repr(float(abs(q(r))))])
    files = {"zeros.csv": _csv(z_rows), "realness.json": rows_to_json(rows, args.imag_tol) + "\n"}
    _emit(args, files, "zeros.csv")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "operator": cmd_operator,
    "theta1-crosscheck": cmd_crosscheck,
    "zeros": cmd_zeros,
}


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_CONFIG)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if getattr(args, "n", 0) < 0:
        return _fail("config", "--n must be >= 0", EXIT_CONFIG)
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        return _fail("config", "--tol must be positive", EXIT_CONFIG)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        return _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
