"""Mutual encodings of the three sources of randomness.

Each encoding is compositional and preserves the value distribution
exactly:

* ``M (+) N`` becomes a ``rand``-indexed recursion that selects ``N`` on
  draw 0 and ``M`` otherwise, or a ``fixr`` whose step ignores its argument;
  both branches are delayed under a ``Nat`` binder and forced with ``0``.
* ``rand`` becomes ``fixr <S, 0>``.
* ``fixr`` at type ``a`` becomes ``\\x. rec <p2 x, \\z. p1 x, rand>``, which
  iterates the step ``k`` times with probability ``1/2^(k+1)``.
"""

from __future__ import annotations

from ..errors import require_fragment
from ..syntax import (FIXRAN, NAT, RAND, SUCC, App, Arrow, Choice, Const, Lam, Num, Pair,
                      Term, Type, shift)
from ..typecheck import Typed, elaborate
from .sugar import build, _t

TARGETS = ("rand", "fixr")


def _rebuild(node: Typed, visit) -> Term:
    """Bottom-up rewrite; ``visit(node, kids)`` receives the rewritten
    children and returns the replacement for ``node``."""
    kids = [_rebuild(k, visit) for k in node.kids]
    return visit(node, kids)


def _default(node: Typed, kids: list[Term]) -> Term:
    t = node.term
    tt = type(t)
    if tt is Lam:
        return Lam(t.annot, kids[0], t.hint)
    if tt is App:
        return App(kids[0], kids[1])
    if tt is Pair:
        return Pair(kids[0], kids[1])
    if tt is Choice:
        return Choice(kids[0], kids[1])
    return t


def choice_via_rand(left: Term, right: Term, ty: Type) -> Term:
    """``left (+) right`` expressed with ``rand``."""
    thunk = Arrow(NAT, ty)
    step = Lam(NAT, Lam(thunk, Lam(NAT, shift(left, 3), "z"), "y"), "x")
    return App(App(Const("rec"), Pair(Lam(NAT, shift(right, 1), "z"), Pair(step, RAND))), Num(0))


def choice_via_fixr(left: Term, right: Term, ty: Type) -> Term:
    """``left (+) right`` expressed with ``fixr``."""
    thunk = Arrow(NAT, ty)
    step = Lam(thunk, Lam(NAT, shift(left, 2), "y"), "x")
    return App(App(FIXRAN, Pair(step, Lam(NAT, shift(right, 1), "y"))), Num(0))


def encode_choice(t: Term, target: str = "rand", env=None) -> Term:
    """Replace every ``(+)`` by its encoding with ``target``."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")
    require_fragment(t, {"srand"}, "encoding")
    enc = choice_via_rand if target == "rand" else choice_via_fixr

    def visit(node: Typed, kids: list[Term]) -> Term:
        if type(node.term) is Choice:
            return enc(kids[0], kids[1], node.ty)
        return _default(node, kids)

    return _rebuild(elaborate(env, t), visit)


RAND_VIA_FIXR = App(FIXRAN, Pair(SUCC, Num(0)))


def encode_rand_via_fixr(t: Term, env=None) -> Term:
    """Replace every ``rand`` by ``fixr <S, 0>``."""
    require_fragment(t, {"srand"}, "encoding")

    def visit(node: Typed, kids: list[Term]) -> Term:
        if type(node.term) is Const and node.term.name == "rand":
            return RAND_VIA_FIXR
        return _default(node, kids)

    return _rebuild(elaborate(env, t), visit)


def fixr_via_rand(ty: Type) -> Term:
    """``fixr`` at result type ``ty`` as a closed ``rand``-program."""
    return build(rf"\x:({_t(ty)} -> {_t(ty)}) * {_t(ty)}. rec <p2 x, \z:Nat. p1 x, rand>")


def encode_fixr_via_rand(t: Term, env=None) -> Term:
    """Replace every ``fixr`` by :func:`fixr_via_rand` at its instance type."""
    require_fragment(t, {"srand"}, "encoding")

    def visit(node: Typed, kids: list[Term]) -> Term:
        if type(node.term) is Const and node.term.name == "fixr":
            assert isinstance(node.ty, Arrow)
            return fixr_via_rand(node.ty.codomain)
        return _default(node, kids)

    return _rebuild(elaborate(env, t), visit)


__all__ = ["RAND_VIA_FIXR", "TARGETS", "choice_via_fixr", "choice_via_rand", "encode_choice",
           "encode_fixr_via_rand", "encode_rand_via_fixr", "fixr_via_rand"]
