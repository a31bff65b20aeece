"""Command-line front end.

Every command reads terms in the s-expression syntax from an argument,
from ``@path`` or from ``-`` (standard input).  Results go to standard
output; diagnostics go to standard error.

Exit codes: 0 success, 1 parse or usage error, 2 divergence detected,
3 domain error, 4 self-test failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .body import BodyElement, Polynomial, eval_at, linearize, mul, weak_complete
from .completion import make_wn, p_divisibility_check, telescope_check
from .errors import Divergent, DomainError, ParseError
from .freeness import exchange_add, exchange_sum, shift
from .reduction import canonicalize, essentially_equal
from .skeleton import SkeletonElement, times
from .syntax import parse, to_text
from .terms import SpecifiedTerm, Term, Var, free_vars, is_skeleton

EXIT_OK, EXIT_PARSE, EXIT_DIVERGENT, EXIT_DOMAIN, EXIT_SELFTEST = 0, 1, 2, 3, 4
SCHEMA = 1

__all__ = ["main", "run"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(f"{self.prog}: {message}")


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _term(arg: str) -> Term:
    return parse(_read(arg))


def _var(name: str) -> Var:
    try:
        return Var.parse(name.strip())
    except ValueError:
        raise DomainError(f"not a variable name: {name!r}") from None


def _vars(text: str) -> list[Var]:
    return [_var(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def _binding(text: str) -> tuple[Var, BodyElement]:
    name, sep, value = text.partition("=")
    if not sep:
        raise DomainError(f"binding must look like NAME=TERM, got {text!r}")
    return _var(name), BodyElement.from_term(_term(value))


class _Out:
    """Collects human-readable lines and the JSON payload side by side."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.payload: dict = {"schema": SCHEMA}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def render(self) -> str:
        if self.as_json:
            return json.dumps(self.payload, sort_keys=True) + "\n"
        return "".join(x + "\n" for x in self.lines)


def _cmd_canon(args, out: _Out) -> int:
    t = canonicalize(_term(args.term), args.fuel)
    out.line(to_text(t))
    out.payload["term"] = to_text(t)
    return EXIT_OK


def _cmd_eq(args, out: _Out) -> int:
    verdict = essentially_equal(_term(args.left), _term(args.right), args.fuel)
    out.line("true" if verdict else "false")
    out.payload["verdict"] = verdict
    return EXIT_OK


def _cmd_mul(args, out: _Out) -> int:
    a, b = _term(args.left), _term(args.right)
    if is_skeleton(a) and is_skeleton(b):
        t = times(SkeletonElement.of(a, args.fuel), SkeletonElement.of(b, args.fuel),
                  args.fuel).term
    else:
        t = mul(BodyElement.from_term(a, args.fuel), BodyElement.from_term(b, args.fuel),
                args.fuel).to_term()
    out.line(to_text(t))
    out.payload["term"] = to_text(t)
    return EXIT_OK


def _cmd_linearize(args, out: _Out) -> int:
    pairs = linearize(_term(args.term), args.fuel)
    for c, m in pairs:
        out.line(f"{c} {to_text(m)}")
    if not pairs:
        out.line("0")
    out.payload["monomials"] = [[c, to_text(m)] for c, m in pairs]
    return EXIT_OK


def _cmd_wct(args, out: _Out) -> int:
    t = _term(args.term)
    applicand = _var(args.applicand)
    if args.vars:
        names = _vars(args.vars)
    else:
        names = [applicand] + sorted(free_vars(t) - {applicand}, key=lambda v: v.key)
    s = SpecifiedTerm(t, tuple(names))
    result = weak_complete(s, applicand, args.fuel)
    out.line(to_text(result))
    out.payload["term"] = to_text(result)
    return EXIT_OK


def _cmd_eval(args, out: _Out) -> int:
    q = _term(args.poly)
    env = dict(_binding(b) for b in args.bind or ())
    at = BodyElement.from_term(_term(args.at), args.fuel) if args.at else None
    value = eval_at(Polynomial(q), at, env, args.fuel)
    out.line(str(value))
    out.payload["term"] = str(value)
    out.payload["monomials"] = [[c, to_text(m.term)] for m, c in value.items()]
    return EXIT_OK


def _cmd_shift(args, out: _Out) -> int:
    q2 = shift(Polynomial(_term(args.poly)), args.r)
    out.line(to_text(q2.expr))
    out.payload["term"] = to_text(q2.expr)
    return EXIT_OK


def _cmd_exchange(args, out: _Out) -> int:
    basis = _vars(args.basis)
    v = _var(args.replace)
    w = _term(args.by)
    if args.sub is not None:
        ex = exchange_sum(_vars(args.sub), basis, w, v, args.fuel)
    else:
        ex = exchange_add(basis, v, w, args.fuel)
    verdict = ex.verify_generators()
    for extra in args.terms:
        verdict = verdict and ex.round_trip_old(_term(extra), args.fuel)
    fwd = {k.name: to_text(t) for k, t in sorted(ex.forward.items(), key=lambda kv: kv[0].key)}
    bwd = {k.name: to_text(t) for k, t in sorted(ex.backward.items(), key=lambda kv: kv[0].key)}
    out.line("old basis: " + " ".join(x.name for x in ex.old_basis))
    out.line("new basis: " + " ".join(x.name for x in ex.new_basis))
    for k, t in fwd.items():
        out.line(f"forward: {k} -> {t}")
    for k, t in bwd.items():
        out.line(f"backward: {k} -> {t}")
    out.line("round-trip: " + ("true" if verdict else "false"))
    out.payload.update(old_basis=[x.name for x in ex.old_basis],
                       new_basis=[x.name for x in ex.new_basis],
                       forward=fwd, backward=bwd, verdict=verdict)
    return EXIT_OK


def _cmd_wn(args, out: _Out) -> int:
    l, a = _ints(args.l), _ints(args.a)
    names = _vars(args.v) if args.v else [Var("x", i) for i in range(args.K)]
    v = [SkeletonElement(x) for x in names]
    modulo = [SkeletonElement(x) for x in _vars(args.modulo)] if args.modulo is not None else v
    w = make_wn(args.n, args.K, l, a, v)
    out.line(f"w_{args.n} = {w}")
    out.payload["term"] = str(w)
    tele = divisible = None
    if args.n + 1 < args.K:
        tele = telescope_check(args.n, args.K, l, a, v)
        divisible = p_divisibility_check(args.n, args.K, l, a, v, modulo, args.prime)
        out.line("telescope: " + ("true" if tele else "false"))
        out.line("p-divisible: " + ("true" if divisible else "false"))
    else:
        out.line("telescope: n/a (needs n + 1 < K)")
    out.payload.update(telescope=tele, p_divisible=divisible,
                       verdict=bool(tele and divisible) if tele is not None else None)
    return EXIT_OK


def _cmd_selftest(args, out: _Out) -> int:
    from .acceptance import run_all
    only = [x.strip().upper() for x in args.only.split(",")] if args.only else None
    results = run_all(only=only, scale=args.scale, seed=args.seed, p=args.prime)
    for r in results:
        out.line(r.line())
    ok = all(r.passed for r in results)
    out.payload["verdict"] = ok
    out.payload["criteria"] = [r.as_dict() for r in results]
    return EXIT_OK if ok else EXIT_SELFTEST


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=2, help="designated prime p (default 2)")
    common.add_argument("--fuel", type=int, default=10_000,
                        help="work limit for a single reduction (default 10000)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="skelbody", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    for name in ("reduce", "canon"):
        add(name, _cmd_canon, "print the canonical form of a skeleton term").add_argument("term")
    p = add("eq", _cmd_eq, "essential equality of two skeleton terms")
    p.add_argument("left")
    p.add_argument("right")
    p = add("mul", _cmd_mul, "skeleton or body product")
    p.add_argument("left")
    p.add_argument("right")
    add("linearize", _cmd_linearize, "coefficient/monomial pairs of a body term").add_argument("term")
    p = add("wct", _cmd_wct, "weak completeness transform")
    p.add_argument("term")
    p.add_argument("--applicand", default="x0")
    p.add_argument("--vars", help="comma-separated variable list (applicand first)")
    p = add("eval", _cmd_eval, "evaluate a polynomial in y")
    p.add_argument("poly")
    p.add_argument("--at", help="value for y")
    p.add_argument("--bind", action="append", metavar="NAME=TERM",
                   help="value for another free variable (repeatable)")
    p = add("shift", _cmd_shift, "the shift polynomial q'(y1, y2)")
    p.add_argument("poly")
    p.add_argument("--r", type=int, default=1)
    p = add("exchange", _cmd_exchange, "basis exchange and round-trip verdict")
    p.add_argument("--basis", required=True, help="comma-separated basis")
    p.add_argument("--replace", required=True, help="generator to exchange")
    p.add_argument("--by", required=True, help="term added to the replaced generator")
    p.add_argument("--sub", help="smaller basis the added term lives over")
    p.add_argument("terms", nargs="*", help="extra terms to round-trip")
    p = add("wn", _cmd_wn, "truncated completion element with telescope checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--l", required=True, help="comma-separated exponents")
    p.add_argument("--a", required=True, help="comma-separated 0/1 coefficients")
    p.add_argument("--v", help="comma-separated generators (default x0..x{K-1})")
    p.add_argument("--modulo", help="comma-separated generators spanning the quotient")
    p = add("selftest", _cmd_selftest, "run the acceptance checks")
    p.add_argument("--only", help="comma-separated criterion ids, e.g. A1,A10")
    p.add_argument("--scale", type=float, default=1.0, help="fraction of the sample sizes")
    p.add_argument("--seed", type=int, default=20240601)
    return parser


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(list(argv))
    except _UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_PARSE
    out = _Out(args.json)
    try:
        code = args.func(args, out)
    except ParseError as exc:
        stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except Divergent as exc:
        if args.json:
            stdout.write(json.dumps({"schema": SCHEMA, "divergent": {
                "reason": exc.reason, "steps": exc.steps,
                "witness": to_text(exc.witness)}}, sort_keys=True) + "\n")
        else:
            stdout.write(f"{exc}\n")
        return EXIT_DIVERGENT
    except (DomainError, ValueError) as exc:
        stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        stderr.write(f"cannot read input: {exc}\n")
        return EXIT_PARSE
    stdout.write(out.render())
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
