"""Batch command-line front end.

Exit status is 0 on success, 1 on domain errors (a JSON error object is
printed) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import brackets, growth, semigroup, sl2_uea, structure
from .errors import QmlabError
from .qm_algebra import (
    NAMED_FORMS,
    QmPolynomial,
    apply_D,
    apply_delta,
    apply_H,
    iterate,
    qexpansion,
)
from .qseries import DEFAULT_PRECISION


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status=0, message=None):
        # --help lands here; surface it as output rather than exiting the process
        if status:
            raise UsageError(message or self.format_usage())
        raise _HelpExit(self.format_help())


class _HelpExit(Exception):
    pass


@dataclass(frozen=True)
class CommandResult:
    status: str
    payload: str
    exit_code: int


def default_precision() -> int:
    raw = os.environ.get("QMLAB_PRECISION")
    return int(raw) if raw else DEFAULT_PRECISION


def _point_json(p) -> list[str]:
    return [str(Fraction(c)) for c in p]


_SYMBOLS = {name: sympy.Symbol(name) for name in ("E2", "E4", "E6")}


def parse_form(text: str) -> QmPolynomial:
    """JSON term list, a named form, or an expression in E2, E4, E6, Delta, phi."""
    text = text.strip()
    if text.startswith("["):
        return QmPolynomial.from_json(json.loads(text))
    if text in NAMED_FORMS:
        return NAMED_FORMS[text]
    e2, e4, e6 = (_SYMBOLS[n] for n in ("E2", "E4", "E6"))
    local = dict(_SYMBOLS)
    local["Delta"] = (e4**3 - e6**2) / 1728
    local["phi"] = e2 / 12
    try:
        expr = sympy.parse_expr(text.replace("^", "**"), local_dict=local, evaluate=True)
        poly = sympy.Poly(sympy.expand(expr), e2, e4, e6, domain="QQ")
    except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as exc:
        raise UsageError(f"cannot parse form {text!r}: {exc}") from exc
    return QmPolynomial(
        [(m, Fraction(int(c.numerator), int(c.denominator))) for m, c in poly.terms()]
    )


def _form_payload(f: QmPolynomial) -> dict:
    out = {"form": f.to_json(), "text": str(f)}
    if f and f.is_homogeneous():
        out["weight"] = f.weight
        out["depth"] = f.depth
    return out


def _ints(text: str, n: int | None = None) -> list[int]:
    vals = [int(v) for v in text.split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


# subcommands; each returns (payload_text, ok)


def cmd_qexp(args):
    if args.form:
        f = parse_form(args.form)
    else:
        f = NAMED_FORMS[args.series]
    n = args.terms or default_precision()
    s = qexpansion(f, n)
    if args.tsv:
        return "n\tcoeff\n" + "\n".join(f"{i}\t{c}" for i, c in enumerate(s.coeffs)), True
    data = s.to_json()
    data["text"] = s.to_text()
    return _dump(data), True


_OPS = {
    "D": apply_D,
    "delta": apply_delta,
    "H": apply_H,
    "serre": brackets.serre_derivative,
}


def cmd_apply(args):
    f = iterate(_OPS[args.op], parse_form(args.form), args.times)
    return _dump(_form_payload(f)), True


def cmd_decompose(args):
    f = parse_form(args.form)
    if f and f.weight != args.weight:
        raise UsageError(f"form has weight {f.weight}, not {args.weight}")
    d = structure.decompose(f)
    data = d.to_json()
    data["weight"] = args.weight
    data["roundtrip"] = structure.recompose(d) == f
    return _dump(data), True


def cmd_pbw(args):
    e = sl2_uea.pbw_reduce(args.word)
    if args.mod_delta:
        e = sl2_uea.mod_U_delta(e)
    if args.json:
        return _dump({"word": args.word, "pbw": e.to_json(), "text": str(e)}), True
    return e.to_text() or "0", True


def cmd_verify_prop4(args):
    if args.n < 1:
        raise UsageError("--n must be positive")
    lhs = sl2_uea.mod_U_delta(sl2_uea.pbw_reduce("d" * args.n + "D" * args.n))
    rhs = sl2_uea.prop4_rhs(args.n)
    ok = lhs == rhs
    data = {"n": args.n, "status": "match" if ok else "mismatch", "lhs": str(lhs), "rhs": str(rhs)}
    return _dump(data), ok


def cmd_bracket(args):
    f, g = parse_form(args.f), parse_form(args.g)
    report = brackets.check_trivialization(f, g)
    data = {
        "bracket": report.left.to_json(),
        "text": str(report.left),
        "trivialization": report.to_json(),
    }
    return _dump(data), True


def cmd_serre(args):
    return _dump(_form_payload(brackets.serre_derivative(parse_form(args.form)))), True


def cmd_check_eq(args):
    a, b, c, d = _ints(args.gamma, 4)
    re, im = (float(v) for v in args.z.split(","))
    report = structure.check_functional_equation(
        parse_form(args.form),
        structure.GroupElement(a, b, c, d),
        complex(re, im),
        tol=args.tol,
        precision=args.terms or default_precision(),
    )
    return report.to_tsv(), report.ok


def cmd_growth(args):
    spec = growth.GradedRingSpec(tuple(_ints(args.weights)), cocompact=args.cocompact)
    K = args.kmax
    mod = growth.hilbert_modular(spec, K)
    cl = growth.hilbert_closure(spec, K)
    rows = [(k, mod[k], cl[k], growth.new_generator_count(spec, k)) for k in mod.weights()]
    if args.json:
        keys = ("k", "dim_M", "dim_CL", "new_generators")
        return _dump([dict(zip(keys, r)) for r in rows]), True
    lines = ["k\tdim_M\tdim_CL\tnew_generators"] + ["\t".join(map(str, r)) for r in rows]
    return "\n".join(lines), True


def cmd_generators(args):
    dims = structure.new_generator_dims_sl2z(args.kmax)
    if args.tsv:
        return "k\tnew_generators\n" + "\n".join(f"{k}\t{d}" for k, d in dims), True
    return _dump([{"k": k, "new_generators": d} for k, d in dims]), True


def cmd_semigroup_bound(args):
    inst = semigroup.sector_and_lattice(semigroup.parse_points(args.gens))
    rep = semigroup.arbitrate_bound(inst, args.radius)
    data = {
        "A": _point_json(rep.point),
        "variant": rep.chosen,
        "strict": {"A": _point_json(rep.strict), "verified": rep.strict_ok.ok},
        "printed": {"A": _point_json(rep.printed), "verified": rep.printed_ok.ok},
        "radius": args.radius,
        "verdict": "verified" if rep.ok else "counterexample",
    }
    return _dump(data), rep.ok


def cmd_semigroup_verify(args):
    inst = semigroup.sector_and_lattice(semigroup.parse_points(args.gens))
    point = semigroup.parse_points(args.point)
    if len(point) != 1:
        raise UsageError("--point takes a single x,y")
    res = semigroup.verify_bound(inst, point[0], args.radius)
    data = {
        "ok": res.ok,
        "checked": res.checked,
        "counterexample": None if res.counterexample is None else _point_json(res.counterexample),
    }
    return _dump(data), True


def _parse_rule(text: str):
    key, _, value = text.partition("=")
    if key.strip() != "beta" or not value:
        raise UsageError(f"rule must look like beta=<rational>, got {text!r}")
    return semigroup.constant_rule(Fraction(value.strip()))


def cmd_saturate(args):
    window = tuple(_ints(args.window, 2))
    if args.scenario:
        return semigroup.BUNDLED_SCENARIOS[args.scenario].run(args.cap, window).to_tsv(), True
    if not args.init:
        raise UsageError("saturate needs --init or --scenario")
    state = semigroup.saturate(
        semigroup.parse_points(args.init),
        Fraction(args.kappa),
        _parse_rule(args.rule),
        stage_cap=args.cap,
        window=window,
    )
    return state.to_tsv(), True


def _dump(obj) -> str:
    return json.dumps(obj)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmlab", description="Exact operator calculus on quasimodular forms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("qexp", help="q-expansion of a form")
    s.add_argument("--series", choices=sorted(NAMED_FORMS), default="E4")
    s.add_argument("--form")
    s.add_argument("--terms", type=int)
    s.add_argument("--tsv", action="store_true")
    s.set_defaults(func=cmd_qexp)

    s = sub.add_parser("apply", help="apply D, delta, H or the Serre derivative")
    s.add_argument("--op", choices=sorted(_OPS), required=True)
    s.add_argument("--form", required=True)
    s.add_argument("--times", type=int, default=1)
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("decompose", help="split into derivatives of modular forms and the phi line")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--form", required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("pbw", help="PBW normal form of a word in D, H, d")
    s.add_argument("--word", required=True)
    s.add_argument("--mod-delta", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_pbw)

    s = sub.add_parser("verify-prop4", help="d^n D^n modulo U*d against n! prod (H + j)")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_verify_prop4)

    s = sub.add_parser("bracket", help="first Rankin-Cohen bracket and its trivialization")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("serre", help="Serre derivative")
    s.add_argument("--form", required=True)
    s.set_defaults(func=cmd_serre)

    s = sub.add_parser("check-eq", help="numeric residuals of the transformation laws")
    s.add_argument("--gamma", required=True)
    s.add_argument("--z", required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--form", default="E2")
    s.add_argument("--terms", type=int)
    s.set_defaults(func=cmd_check_eq)

    s = sub.add_parser("growth", help="Hilbert series of a free ring and its closure")
    s.add_argument("--weights", required=True)
    s.add_argument("--cocompact", action="store_true")
    s.add_argument("--kmax", type=int, default=60)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("generators", help="new-generator dimensions for C[E2, E4, E6]")
    s.add_argument("--kmax", type=int, default=40)
    s.add_argument("--tsv", action="store_true")
    s.set_defaults(func=cmd_generators)

    s = sub.add_parser("semigroup-bound", help="saturation bound for a plane semigroup")
    s.add_argument("--gens", required=True)
    s.add_argument("--radius", type=int, default=10)
    s.set_defaults(func=cmd_semigroup_bound)

    s = sub.add_parser("semigroup-verify", help="brute-force check of a saturation point")
    s.add_argument("--gens", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--radius", type=int, default=10)
    s.set_defaults(func=cmd_semigroup_verify)

    s = sub.add_parser("saturate", help="invariant-point saturation simulator")
    s.add_argument("--init")
    s.add_argument("--scenario", choices=sorted(semigroup.BUNDLED_SCENARIOS))
    s.add_argument("--kappa", default="1")
    s.add_argument("--rule", default="beta=1")
    s.add_argument("--cap", type=int, default=20)
    s.add_argument("--window", default="200,200")
    s.set_defaults(func=cmd_saturate)
    return p


def run(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        payload, ok = args.func(args)
    except _HelpExit as exc:
        return CommandResult("ok", str(exc), 0)
    except UsageError as exc:
        return CommandResult("usage", str(exc), 2)
    except QmlabError as exc:
        return CommandResult(exc.code, _dump({"error": exc.code, "message": str(exc)}), 1)
    except (ValueError, ZeroDivisionError) as exc:
        return CommandResult("invalid", _dump({"error": "invalid", "message": str(exc)}), 1)
    return CommandResult("ok" if ok else "failed", payload, 0 if ok else 1)


def main(argv=None) -> None:
    result = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if result.exit_code == 2 else sys.stdout
    print(result.payload, file=stream)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
