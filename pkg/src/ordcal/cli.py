"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 indeterminate
(the precision floor hides the answer).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import free, hahn, orders, tgroup
from .chain import check_lemma51, ideal_dimension
from .products import verify_axioms

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INDETERMINATE = 0, 1, 2, 3


class InputError(Exception):
    pass


def rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def emit(args, text: str, obj=None):
    if args.json:
        print(json.dumps(obj if obj is not None else text))
    else:
        print(text)


def _series(args, text: str) -> hahn.HahnSeries:
    return hahn.parse_series(text)


def _emit_series(args, s: hahn.HahnSeries):
    emit(args, str(s), hahn.to_json(s))


def _telem(s: hahn.HahnSeries) -> tgroup.TElement:
    try:
        return tgroup.TElement(s)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# hahn


def cmd_hahn(args):
    op = args.hahn_op
    F = args.floor
    a = _series(args, args.exprs[0])
    need = {"add": 2, "mul": 2, "compose": 2}.get(op, 1)
    if len(args.exprs) != need:
        raise InputError(f"hahn {op} takes {need} expression(s)")
    b = _series(args, args.exprs[1]) if need == 2 else None
    if op == "eval":
        out = a.with_floor(F)
    elif op == "add":
        out = (a + b).truncate(F)
    elif op == "mul":
        out = hahn.mul(a, b, F)
    elif op == "deriv":
        out = hahn.derivative(a).truncate(F)
    elif op == "pow":
        out = hahn.power(a, _need_e(args), F)
    elif op == "compose":
        out = tgroup.compose(a, _telem(b), F)
    elif op == "invert":
        out = tgroup.invert(_telem(a), F).series
    elif op == "iterate":
        out = tgroup.iterate(_telem(a), _need_e(args), F).series
    elif op == "go":
        go = tgroup.growth_order(_telem(a.with_floor(F)))
        obj = {"zero": True} if go.is_zero else {"coef": str(go.c), "exp": str(go.e)}
        emit(args, str(go), obj)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(op)
    _emit_series(args, out)
    return EXIT_OK


def _need_e(args) -> Fraction:
    if args.e is None:
        raise InputError(f"hahn {args.hahn_op} needs -e")
    return args.e


# decomposition


def _signs(text: str):
    if text in ("left", "right", "alt"):
        return text
    signs = int_list(text)
    if not signs or any(s not in (1, -1) for s in signs):
        raise InputError("signs must be left, right, alt or a list of 1/-1")
    return signs


def _decomp_text(d: tgroup.Decomposition) -> str:
    lines = [f"scale: {d.scale.name}", f"floor: {d.floor}", f"length: {len(d)}"]
    signs = list(d.signs.signs) + ([None] if len(d) else [])
    for g, (e, c, s) in enumerate(zip(d.e, d.c, signs)):
        side = "" if s is None else ("  left" if s == 1 else "  right")
        lines.append(f"{g}: {hahn.format_term(e, c)}{side}")
    return "\n".join(lines)


def cmd_decompose(args):
    scale = tgroup.SCALES[args.scale.upper()]
    a = _telem(_series(args, args.expr))
    d = tgroup.decompose(a, scale, _signs(args.signs), args.floor)
    emit(args, _decomp_text(d), d.to_json())
    return EXIT_OK


def cmd_recompose(args):
    try:
        with open(args.file) as fh:
            obj = json.load(fh)
        d = tgroup.Decomposition.from_json(obj)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad decomposition file: {exc}") from exc
    _emit_series(args, tgroup.recompose(d, args.floor).series)
    return EXIT_OK


# free algebra


def cmd_free(args):
    op = args.free_op
    if op in ("op", "log-op"):
        order = args.order if args.order is not None else list(range(args.vars or 2))
        if len(set(order)) != len(order):
            raise InputError("order has repeated variables")
        p = free.op_series(order, args.cap)
        if op == "log-op":
            p = free.log_series(p)
        emit(args, free.format_series(p),
             {free.format_word(w): str(c) for w, c in sorted(p.items(), key=lambda t: free.word_key(t[0]))})
        return EXIT_OK
    n = args.vars if args.vars is not None else 2
    if op == "check-lemma47":
        I = list(range(n))
        gens = [free.log_series(free.FreeSeries.one(args.cap) + free.FreeSeries.var(i, args.cap)) for i in I]
        ok = free.lie_span_contains(free.log_series(free.op_series(I, args.cap)), gens, args.cap)
        emit(args, f"membership: {str(ok).lower()}", {"vars": n, "cap": args.cap, "membership": ok})
    else:
        ok = check_lemma51(list(range(n)), args.cap)
        dim = ideal_dimension(list(range(n)), args.cap)
        emit(args, f"membership: {str(ok).lower()}\nideal dimension: {dim}",
             {"vars": n, "cap": args.cap, "membership": ok, "ideal_dimension": dim})
    return EXIT_OK if ok else EXIT_FAIL


# orders


def cmd_order(args):
    signs = args.signs
    if any(s not in (1, -1) for s in signs):
        raise InputError("signs must be 1 or -1")
    t = orders.TreeOrder(len(signs) + 1, tuple(signs))
    lin = list(t.linearization)
    obj = {"length": t.length, "signs": signs, "linearization": lin}
    lines = ["linearization: " + " ".join(map(str, lin))]
    if args.segments is not None:
        if len(args.segments) != 2:
            raise InputError("--segments takes alpha,mu")
        try:
            L, R = t.segments(*args.segments)
        except IndexError as exc:
            raise InputError(str(exc)) from exc
        obj["L"], obj["R"] = list(L), list(R)
        lines.append("L: {" + ", ".join(map(str, L)) + "}")
        lines.append("R: {" + ", ".join(map(str, R)) + "}")
    emit(args, "\n".join(lines), obj)
    return EXIT_OK


# verification suites


def cmd_verify(args):
    from . import suites

    kind = args.kind
    if kind == "mg":
        report = verify_axioms(seed=args.seed, iterations=args.iters, cap=args.cap)
    elif kind == "growth":
        report = suites.growth_suite(args.seed, args.iters, args.floor)
    elif kind == "roundtrip":
        report = suites.roundtrip_suite(args.seed, args.iters, args.floor)
    else:
        report = suites.chain_suite(args.seed, args.iters, args.floor)
    text = "\n".join(f"{r.axiom}: {r.status} ({r.instances} instances)" for r in report.results)
    emit(args, text, report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON instead of canonical text")

    p = argparse.ArgumentParser(prog="ordcal", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hahn", parents=[common], help="series arithmetic and composition")
    h.add_argument("hahn_op", choices=["eval", "add", "mul", "deriv", "pow", "compose",
                                       "invert", "iterate", "go"])
    h.add_argument("exprs", nargs="+", metavar="expr")
    h.add_argument("--floor", type=rat, default=None, help="precision floor")
    h.add_argument("-e", type=rat, default=None, help="exponent for pow / iterate")
    h.set_defaults(func=cmd_hahn)

    d = sub.add_parser("decompose", parents=[common], help="scale decomposition of x + ...")
    d.add_argument("expr")
    d.add_argument("--scale", choices=["s0", "s1", "S0", "S1"], default="s0")
    d.add_argument("--signs", default="left", help="left, right, alt or csv of 1/-1 (cycled)")
    d.add_argument("--floor", type=rat, required=True)
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("recompose", parents=[common], help="rebuild a series from decomposition JSON")
    r.add_argument("file")
    r.add_argument("--floor", type=rat, default=None)
    r.set_defaults(func=cmd_recompose)

    f = sub.add_parser("free", parents=[common], help="truncated free algebra")
    f.add_argument("free_op", choices=["op", "log-op", "check-lemma47", "check-lemma51"])
    f.add_argument("--order", type=int_list, default=None, help="variables in increasing order")
    f.add_argument("--vars", type=int, default=None)
    f.add_argument("--cap", type=int, default=3)
    f.set_defaults(func=cmd_free)

    o = sub.add_parser("order", parents=[common], help="tree orders from sign sequences")
    o.add_argument("order_op", choices=["tree"])
    o.add_argument("--signs", type=int_list, required=True)
    o.add_argument("--segments", type=int_list, default=None, metavar="ALPHA,MU")
    o.set_defaults(func=cmd_order)

    v = sub.add_parser("verify", parents=[common], help="randomized verification suites")
    v.add_argument("kind", choices=["mg", "growth", "roundtrip", "chain"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--iters", type=int, default=50)
    v.add_argument("--cap", type=int, default=4)
    v.add_argument("--floor", type=rat, default=Fraction(-3))
    v.set_defaults(func=cmd_verify)
    return p


VALUE_FLAGS = ("--signs", "--segments", "--floor", "--order", "-e")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--floor -3`` and ``--signs -1,1`` through argparse's option detection."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args)
    except hahn.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except hahn.Indeterminate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (InputError, hahn.NonRepresentable, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
