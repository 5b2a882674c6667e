"""Command-line front end.

Every command prints one JSON document on standard output; diagnostics go
to standard error.  Exit status is 0 on success, 1 when a budget ran out
with more than ``--eps`` of mass unresolved, and 2 on user error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .dist import Dist, format_prob, parse_prob, tv_distance
from .errors import FragmentError, ResourceError
from .evaluation import Budget, evaluate, normal_form, sample_many
from .multistep import exact_eval_plus
from .syntax import NAT, App, Num, Pair, ParseError, Term, apps, print_term, print_type
from .transforms.approximant import approximant
from .transforms.derandomize import derandomize_lv, derandomize_mc
from .transforms.encodings import encode_choice, encode_fixr_via_rand, encode_rand_via_fixr
from .transforms.lifting import finite_rep, lift_plus_to_t
from .transforms.sugar import build
from .typecheck import TypeCheckError, typecheck

EXIT_OK, EXIT_RESIDUAL, EXIT_USER = 0, 1, 2

DEFAULT_MAX_STEPS = 10**6
DEFAULT_EPS = "2^-20"


class UserError(Exception):
    pass


def _pass_table(bound: Term | None) -> dict[str, Callable[[Term], Term]]:
    def rep(t: Term) -> Term:
        fr = finite_rep(t)
        return Pair(fr.F, fr.Q)

    return {
        "oplus-to-rand": lambda t: encode_choice(t, "rand"),
        "oplus-to-fixran": lambda t: encode_choice(t, "fixr"),
        "rand-to-fixran": encode_rand_via_fixr,
        "fixran-to-rand": encode_fixr_via_rand,
        "lift-plus": lift_plus_to_t,
        "finite-rep": rep,
        "approximant": approximant,
        "derand-mc": lambda t: derandomize_mc(t, bound),
        "derand-lv": lambda t: derandomize_lv(t, bound),
    }


PASSES = tuple(_pass_table(None))


def load_term(path: str) -> Term:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror}") from exc
    return build(text)


def _checked(path: str, args: argparse.Namespace) -> Term:
    t = load_term(path)
    extra = getattr(args, "arg", None) or []
    if extra:
        t = apps(t, *(Num(n) for n in extra))
    typecheck({}, t)
    return t


def _budget(args: argparse.Namespace) -> Budget:
    eps = parse_prob(args.eps)
    if not 0 <= eps < 1:
        raise UserError("--eps must lie in [0, 1)")
    if args.max_steps < 1:
        raise UserError("--max-steps must be at least 1")
    width = args.rand_width
    if width is None and eps == 0:
        width = 64
    return Budget(max_steps=args.max_steps, epsilon=eps, rand_width=width)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def cmd_check(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    _emit({"type": print_type(typecheck({}, t))})
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    budget = _budget(args)
    if args.mode == "exact-tree":
        res = exact_eval_plus(t)
        doc = res.exact_dist.to_json()
        doc.update(mode=args.mode, expected_steps=format_prob(res.expected_steps),
                   max_depth=res.max_depth, success_bounds=["1/1", "1/1"])
        _emit(doc)
        return EXIT_OK
    res = evaluate(t, budget, args.mode)
    doc = Dist(res.value_dist.support, res.residual).to_json()
    lo, hi = res.success_bounds
    doc.update(mode=args.mode, steps_taken=res.steps_taken,
               success_bounds=[format_prob(lo), format_prob(hi)],
               avlength_lower=format_prob(res.avlength_lower),
               diverging_hint=res.diverging_hint)
    _emit(doc)
    return EXIT_RESIDUAL if res.residual > budget.epsilon else EXIT_OK


def cmd_avlength(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    budget = _budget(args)
    res = evaluate(t, budget, args.mode)
    _emit({"avlength_lower": format_prob(res.avlength_lower),
           "avlength_lower_float": float(res.avlength_lower),
           "diverging_hint": res.diverging_hint, "residual": format_prob(res.residual),
           "steps_taken": res.steps_taken})
    return EXIT_RESIDUAL if res.residual > budget.epsilon else EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    if args.trials < 1:
        raise UserError("--trials must be at least 1")
    d = sample_many(t, args.seed, args.trials)
    _emit({"seed": args.seed, "trials": args.trials, "dist": d.to_json()})
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    t1 = _checked(args.file1, args)
    t2 = _checked(args.file2, args)
    ty1, ty2 = typecheck({}, t1), typecheck({}, t2)
    if ty1 != ty2:
        raise UserError(f"types differ: {print_type(ty1)} and {print_type(ty2)}")
    budget = _budget(args)
    r1, r2 = evaluate(t1, budget, args.mode), evaluate(t2, budget, args.mode)
    d1, d2 = Dist(r1.value_dist.support, r1.residual), Dist(r2.value_dist.support, r2.residual)
    upper = tv_distance(d1, d2)
    lower = max(Fraction(0), upper - d1.residual - d2.residual)
    _emit({"tv_lower": format_prob(lower), "tv_upper": format_prob(upper),
           "tv_upper_float": float(upper),
           "residuals": [format_prob(d1.residual), format_prob(d2.residual)]})
    worst = max(r1.residual, r2.residual)
    return EXIT_RESIDUAL if worst > budget.epsilon else EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    bound = None
    if args.bound is not None:
        bound = build(args.bound)
        typecheck({}, bound)
    out = _pass_table(bound)[args.pass_name](t)
    ty = typecheck({}, out)
    text = print_term(out)
    doc = {"pass": args.pass_name, "type": print_type(ty)}
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        doc["out"] = args.out
    else:
        doc["term"] = text
    _emit(doc)
    return EXIT_OK


def cmd_nf(args: argparse.Namespace) -> int:
    t = _checked(args.file, args)
    v = normal_form(t, args.max_steps, memo=True)
    _emit({"normal_form": print_term(v), "type": print_type(typecheck({}, t))})
    return EXIT_OK


def _budget_flags(p: argparse.ArgumentParser, mode: bool = True) -> None:
    p.add_argument("--eps", default=DEFAULT_EPS, help="tolerated unresolved mass (p/q, decimal or 2^-k)")
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--rand-width", type=int, default=None,
                   help="outcomes kept per rand (default: chosen from --eps)")
    if mode:
        p.add_argument("--mode", choices=("lockstep", "worklist", "exact-tree"), default="lockstep")


def _arg_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--arg", type=int, action="append", metavar="N",
                   help="apply the program to the numeral N (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="print the type of a program")
    p.add_argument("file")
    _arg_flag(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", help="value distribution of a closed program")
    p.add_argument("file")
    _budget_flags(p)
    _arg_flag(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("avlength", help="lower bound on the expected number of steps")
    p.add_argument("file")
    _budget_flags(p)
    _arg_flag(p)
    p.set_defaults(run=cmd_avlength)

    p = sub.add_parser("sample", help="empirical distribution from seeded runs")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10_000)
    _arg_flag(p)
    p.set_defaults(run=cmd_sample)

    p = sub.add_parser("compare", help="total variation distance between two programs")
    p.add_argument("file1")
    p.add_argument("file2")
    _budget_flags(p)
    _arg_flag(p)
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("transform", help="apply a source-to-source pass")
    p.add_argument("file")
    p.add_argument("--pass", dest="pass_name", choices=PASSES, required=True)
    p.add_argument("--out", default=None, help="write the result here instead of the JSON")
    p.add_argument("--bound", default=None,
                   help="pure Nat -> Nat bound H for derandomizing rand-programs")
    _arg_flag(p)
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("nf", help="normal form of a deterministic program")
    p.add_argument("file")
    p.add_argument("--max-steps", type=int, default=10**8)
    _arg_flag(p)
    p.set_defaults(run=cmd_nf)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UserError, ParseError, TypeCheckError, FragmentError) as exc:
        print(f"tprob: {exc}", file=sys.stderr)
        return EXIT_USER
    except ValueError as exc:
        print(f"tprob: {exc}", file=sys.stderr)
        return EXIT_USER
    except (ResourceError, RuntimeError) as exc:
        print(f"tprob: {exc}", file=sys.stderr)
        return EXIT_RESIDUAL


if __name__ == "__main__":
    sys.exit(main())
