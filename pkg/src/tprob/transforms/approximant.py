"""Approximating ``rand``-programs by ``(+)``-programs.

The program runs in a state monad over ``St = Nat * (Nat * Nat)`` holding
an error flag ``e`` and the two registers ``m, n`` of the state-bounded
semantics.  ``rand`` becomes a cascade of fair choices that draws ``k < m``
with probability ``1/2^(k+1)``, raises ``m`` by ``n`` and sets the error
flag with the remaining probability ``1/2^m``.  Runs that end with the
flag set answer ``0``.  Started with ``m = n = p`` the result differs from
the original program by at most ``1/p`` in total variation, and every
value it returns other than through failure is a value of the original.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import require_fragment
from ..syntax import NAT, App, Arrow, Lam, Num, Pair, Product, Term, Type, Var, apps
from ..typecheck import typecheck
from .lifting import Lifter, _t
from .sugar import build

ST = Product(NAT, Product(NAT, NAT))


class StateLifter(Lifter):
    forbidden = frozenset({"fixr", "srand"})

    def L(self, ty: Type) -> Type:  # noqa: N802
        return Arrow(ST, Product(self.V(ty), ST))

    def ret(self, ty: Type) -> Term:
        return _ret(ty)

    def bind(self, a: Type, b: Type) -> Term:
        return _bind(a, b)

    def choice(self, ty: Type) -> Term:
        return _choice(ty)

    def rand(self) -> Term:
        return _srand()


_STATE = StateLifter()
_ST = _t(ST)


@lru_cache(maxsize=None)
def _ret(ty: Type) -> Term:
    return build(rf"\x:{_t(_STATE.V(ty))}. \s:{_ST}. <x, s>")


@lru_cache(maxsize=None)
def _bind(a: Type, b: Type) -> Term:
    # the argument runs first, matching the evaluation order of the source
    va, fn = _t(_STATE.V(a)), _t(_STATE.V(Arrow(a, b)))
    return build(
        rf"\m:{_t(_STATE.L(Arrow(a, b)))}. \n:{_t(_STATE.L(a))}. \s:{_ST}. "
        rf"(\q:{va} * {_ST}. (\r:{fn} * {_ST}. (p1 r) (p1 q) (p2 r)) (m (p2 q))) (n s)")


@lru_cache(maxsize=None)
def _choice(ty: Type) -> Term:
    lt = _t(_STATE.L(ty))
    return build(rf"\m:{lt}. \n:{lt}. \s:{_ST}. (m s) (+) (n s)")


@lru_cache(maxsize=None)
def _srand() -> Term:
    # step k either stops with outcome 0 or adds one to the outcome of step
    # k-1; the base case is the failure
    return build(
        rf"\s:{_ST}. rec <<0, <1, <add (p1 (p2 s)) (p2 (p2 s)), p2 (p2 s)>>>, "
        rf"\x:Nat. \y:Nat * {_ST}. "
        rf"<0, <p1 s, <add (p1 (p2 s)) (p2 (p2 s)), p2 (p2 s)>>> (+) <S (p1 y), p2 y>, "
        rf"p1 (p2 s)>")


def state_lift(t: Term, ctx: list[Type] | None = None) -> Term:
    """Translation of a program of type ``t`` to ``L t`` in the state monad."""
    return _STATE.translate(t, ctx)


def approximant(t: Term) -> Term:
    """For ``t : Nat -> .. -> Nat`` with ``r`` arguments, a ``(+)``-program
    of type ``Nat -> .. -> Nat -> Nat`` taking the ``r`` arguments and then
    the precision ``p``."""
    require_fragment(t, {"fixr", "srand"}, "approximant")
    ty = typecheck({}, t)
    arity = 0
    while isinstance(ty, Arrow):
        if ty.domain != NAT:
            raise TypeError("approximant expects a program of type Nat -> .. -> Nat")
        arity += 1
        ty = ty.codomain
    if ty != NAT:
        raise TypeError("approximant expects a program of type Nat -> .. -> Nat")
    # context: the arguments, then p innermost
    lifted = state_lift(_args_skip_p(t, arity), [NAT] * (arity + 1))
    finish = build(rf"\r:Nat * {_ST}. rec <p1 r, \u:Nat. \v:Nat. 0, p1 (p2 r)>")
    body = App(finish, App(lifted, Pair(Num(0), Pair(Var(0), Var(0)))))
    out: Term = Lam(NAT, body, "p")
    for i in range(arity):
        out = Lam(NAT, out, f"a{arity - 1 - i}")
    return out


def _args_skip_p(t: Term, arity: int) -> Term:
    """``t`` applied to the argument variables, skipping the innermost ``p``."""
    return apps(t, *(Var(i) for i in reversed(range(1, arity + 1))))


__all__ = ["ST", "StateLifter", "approximant", "state_lift"]
