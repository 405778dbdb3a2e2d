"""Command-line front end.

Exit codes: 0 success or PASS, 1 FAIL verdict, 2 parse error, 3 precondition
violated, 4 truncation unstable.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from . import generators, projective, structure, web
from .errors import ParseError, PreconditionError
from .exact import fmt_rat, rat
from .pipeline import run_pipeline

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_UNSTABLE = 0, 1, 2, 3, 4


class Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.lines: List[str] = []

    def __call__(self, line: str = "") -> None:
        self.lines.append(line)

    def flush(self) -> None:
        text = "".join(line + "\n" for line in self.lines)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_web(path: str, order: Optional[int]) -> web.WebGerm:
    w = web.parse_web(_read(path))
    if order is not None:
        if order > w.order:
            raise PreconditionError(f"--order {order} exceeds the file's J={w.order}")
        w = w.truncate(order)
    return w


def _kv(tokens: List[str]) -> dict:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}")
        out[key] = val
    return out


def _int(kv: dict, key: str, default=None) -> int:
    if key not in kv:
        if default is None:
            raise ParseError(f"missing {key}=")
        return default
    try:
        return int(kv[key])
    except ValueError as exc:
        raise ParseError(f"{key} must be an integer") from exc


def _rats(text: str) -> list:
    try:
        return [rat(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- commands ---------------------------------------------------------------------


def cmd_chern(args, out: Output) -> int:
    out(str(web.chern_bound(args.n, args.d)))
    return EXIT_OK


def cmd_powrank(args, out: Output) -> int:
    w = _load_web(args.web, args.order)
    forms = w.linear_forms()
    qs = [args.q] if args.q is not None else range(web.filtration_levels(w.n, w.d) + 1)
    for q in qs:
        out(f"r_{q} = {web.power_rank(forms, q)}")
    return EXIT_OK


def cmd_relations(args, out: Output) -> int:
    w = _load_web(args.web, args.order)
    rs = web.abelian_relations(w)
    out(web.format_relations(rs).rstrip("\n"))
    return EXIT_OK


def cmd_certify(args, out: Output) -> int:
    w = _load_web(args.web, args.order)
    rs = web.abelian_relations(w)
    cert = web.certify_max_rank_val1(w, rs)
    out(f"certificate n={w.n} d={w.d} J={w.order}")
    out("filtration " + " ".join(str(v) for v in cert.filtration))
    out(f"chern_bound {cert.chern}")
    out(f"quotient_dims {cert.quotient_dims[0]} {cert.quotient_dims[1]}")
    out(f"quotient_max {cert.quotient_max[0]} {cert.quotient_max[1]}")
    out(f"jet1_rank {cert.jet1_rank} required {cert.required}")
    out(f"valuation_one_relations {cert.valuation_one}")
    if w.order >= 4:
        stab = web.stabilization_check(w, rs)
        out(f"stability J={stab.low_order}:" + " ".join(map(str, stab.low)) + f" J={stab.high_order}:" + " ".join(map(str, stab.high)))
        if not stab.stable:
            out("verdict UNSTABLE raise J")
            return EXIT_UNSTABLE
    out("verdict " + ("PASS" if cert.verdict else "FAIL"))
    return EXIT_OK if cert.verdict else EXIT_FAIL


def cmd_gen(args, out: Output) -> int:
    recipe, rest = args.recipe, args.params
    kv = _kv([t for t in rest if "=" in t])
    files = [t for t in rest if "=" not in t]
    order = args.order
    if recipe == "rnc-web":
        n, d = _int(kv, "n"), _int(kv, "d")
        theta = _rats(kv["theta"]) if "theta" in kv else [Fraction(i) for i in range(d)]
        w = generators.rnc_linear_web(n, d, theta, order or _int(kv, "J", 5))
        out(web.format_web(w).rstrip("\n"))
    elif recipe == "family":
        n, d = _int(kv, "n"), _int(kv, "d")
        U = generators.random_family_U(n, d, _int(kv, "seed", args.seed), _int(kv, "degree", 2))
        w = generators.separable_family_web(n, d, U, order or _int(kv, "J", 4))
        out(web.format_web(w).rstrip("\n"))
    elif recipe == "pushforward":
        if len(files) != 2:
            raise ParseError("gen pushforward needs <webfile> <mapfile>")
        w = _load_web(files[0], order)
        phi = generators.parse_map(_read(files[1]))
        out(web.format_web(generators.pushforward(w, phi)).rstrip("\n"))
    elif recipe == "curve-web":
        if len(files) != 2:
            raise ParseError("gen curve-web needs <curvefile> <hyperplane>")
        c = generators.parse_curve(_read(files[0]))
        w = generators.algebraic_web(c, _rats(files[1]), order or _int(kv, "J", 4))
        out(web.format_web(w).rstrip("\n"))
    elif recipe == "random":
        w = generators.random_web(_int(kv, "n"), _int(kv, "d"), order or _int(kv, "J", 6), _int(kv, "seed", args.seed))
        out(web.format_web(w).rstrip("\n"))
    elif recipe == "map":
        n, J = _int(kv, "n"), order or _int(kv, "J", 5)
        kind = kv.get("kind", "triangular")
        seed = _int(kv, "seed", args.seed)
        if kind == "triangular":
            phi = generators.triangular_quadratic_map(n, J, seed)
        elif kind == "quadratic":
            phi = generators.random_quadratic_diffeo(n, J, seed)
        else:
            raise ParseError(f"unknown map kind {kind!r}")
        out(generators.format_map(phi).rstrip("\n"))
    elif recipe == "curve":
        roots = _rats(kv.get("roots", ""))
        c = generators.curve_with_section(_int(kv, "n"), roots, _int(kv, "seed", args.seed))
        out(generators.format_curve(c).rstrip("\n"))
    else:
        raise ParseError(f"unknown recipe {recipe!r}")
    return EXIT_OK


def cmd_rnc(args, out: Output) -> int:
    pts = projective.parse_points(_read(args.points))
    if not pts:
        raise ParseError("empty point file")
    if args.mode == "through":
        curve = projective.rnc_through(pts)
    else:
        curve = projective.castelnuovo_recover(pts)
    out(projective.format_rnc(curve).rstrip("\n"))
    for p in pts:
        t = projective.point_on_rnc(curve, p)
        out("# " + " ".join(map(fmt_rat, p)) + " at t=" + (t if t == projective.INF else fmt_rat(t)))
    return EXIT_OK


def cmd_coframe(args, out: Output) -> int:
    w = _load_web(args.web, args.order)
    cf = structure.adapted_coframe(w)
    res = structure.coframe_residual(w, cf)
    out(structure.format_coframe(cf, res).rstrip("\n"))
    ok = res.exact
    if w.order >= 3:
        so = structure.second_order_conditions(w, cf)
        out("second_order kdtheta " + ("zero" if so.exact5 else "nonzero"))
        out("second_order dtheta " + ("zero" if so.exact6 else "nonzero"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_pipeline(args, out: Output) -> int:
    w = _load_web(args.web, args.order)
    out(f"pipeline n={w.n} d={w.d} J={w.order} seed={args.seed}")
    checks = run_pipeline(w, seed=args.seed, corrupt=args.corrupt_basis, emit=out)
    for c in checks:
        out(c.line())
    failed = sum(1 for c in checks if not c.ok)
    out(f"SUMMARY checks={len(checks)} passed={len(checks) - failed} failed={failed}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_selftest(args, out: Output) -> int:
    out(f"selftest seed={args.seed}")
    checks = []

    def check(name, expect, got):
        checks.append(expect == got)
        out(f"CHECK {name} EXPECT {expect} GOT {got} {'PASS' if expect == got else 'FAIL'}")

    check("chern(2,5)", 6, web.chern_bound(2, 5))
    check("chern(3,7)", 6, web.chern_bound(3, 7))
    w = generators.rnc_linear_web(3, 7, range(7), 5)
    cert = web.certify_max_rank_val1(w)
    check("rnc_web_rank", 6, cert.filtration[0])
    check("rnc_web_quotients", (4, 2), cert.quotient_dims)
    moment = [[Fraction(t) ** k for k in range(4)] for t in range(9)]
    check("castelnuovo_moment", True, projective.same_curve(projective.castelnuovo_recover(moment), projective.RNC.moment(3)))
    pw = generators.pushforward(w, generators.triangular_quadratic_map(3, 5, args.seed))
    for c in run_pipeline(pw, seed=args.seed, pairs=2, leaf_pairs=1, generic_pairs=1, grid=2):
        checks.append(c.ok)
        out(c.line())
    failed = checks.count(False)
    out(f"SUMMARY checks={len(checks)} passed={len(checks) - failed} failed={failed}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=None, metavar="J", help="truncation order override")
    common.add_argument("--seed", type=int, default=0, help="seed for probe points and random recipes")
    common.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="webalg", description="Exact computations on webs, abelian relations and rational normal curves.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("chern", parents=[common], help="print the Chern bound pi(n, d)")
    s.add_argument("n", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_chern)

    s = sub.add_parser("powrank", parents=[common], help="ranks r_q of powers of the linear parts")
    s.add_argument("web")
    s.add_argument("q", type=int, nargs="?")
    s.set_defaults(func=cmd_powrank)

    s = sub.add_parser("relations", parents=[common], help="basis of abelian relations and filtration")
    s.add_argument("web")
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("certify", parents=[common], help="maximal rank in valuation <= 1 certificate")
    s.add_argument("web")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("gen", parents=[common], help="generate a web, map or curve file")
    s.add_argument("recipe", choices=["rnc-web", "family", "pushforward", "curve-web", "random", "map", "curve"])
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("rnc", parents=[common], help="rational normal curve through or recovered from points")
    s.add_argument("mode", choices=["through", "recover"])
    s.add_argument("points")
    s.set_defaults(func=cmd_rnc)

    s = sub.add_parser("coframe", parents=[common], help="adapted coframe and residual checks")
    s.add_argument("web")
    s.set_defaults(func=cmd_coframe)

    s = sub.add_parser("pipeline", parents=[common], help="full structure and curve-field report")
    s.add_argument("web")
    s.add_argument("--corrupt-basis", action="store_true", help="replace a relation by a duplicate (soundness probe)")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("selftest", parents=[common], help="run a small built-in check suite")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    out = Output(args.out)
    try:
        code = args.func(args, out)
    except ParseError as exc:
        out.flush()
        print(f"error[parse]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        out.flush()
        print(f"error[precondition]: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ArithmeticError as exc:
        out.flush()
        print(f"error[consistency]: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        out.flush()
        print(f"error[precondition]: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
