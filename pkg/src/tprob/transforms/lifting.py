"""Monadic lifting of ``(+)``-programs into pure System T.

A program of type ``t`` becomes a pair ``<f, c>`` of type
``(Nat -> V t) * Nat``: ``c`` bounds the number of coin flips and ``f s``
is the outcome when the flips are read, low bit first, from the seed ``s``.
Value types are translated by ``V Nat = Nat``, ``V (a -> b) = V a -> L b``
and ``V (a * b) = V a * V b``, where ``L t = (Nat -> V t) * Nat``.

Counting the seeds below ``2^c`` that lead to each outcome then yields the
exact distribution as a pure program: see :func:`finite_rep`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import require_fragment
from ..syntax import (NAT, App, Arrow, Choice, Const, Free, Lam, Num, Pair, Product, Term,
                      Type, Var, apps, print_type)
from ..typecheck import Typed, elaborate
from . import sugar
from .sugar import BIN, build


def _t(ty: Type) -> str:
    return f"({print_type(ty)})"


class Lifter:
    """Structural part of a monadic translation.  Subclasses provide the
    type maps and the monad combinators."""

    forbidden: frozenset[str] = frozenset()

    # type maps
    def V(self, ty: Type) -> Type:  # noqa: N802 - mirrors the notation
        if ty == NAT:
            return NAT
        if isinstance(ty, Arrow):
            return Arrow(self.V(ty.domain), self.L(ty.codomain))
        if isinstance(ty, Product):
            return Product(self.V(ty.left), self.V(ty.right))
        raise TypeError(f"cannot lift type {ty!r}")

    def L(self, ty: Type) -> Type:  # noqa: N802
        raise NotImplementedError

    # combinators (closed terms)
    def ret(self, ty: Type) -> Term:
        raise NotImplementedError

    def bind(self, a: Type, b: Type) -> Term:
        raise NotImplementedError

    def choice(self, ty: Type) -> Term:
        raise NotImplementedError

    def rand(self) -> Term:
        raise NotImplementedError

    # derived combinators
    def pairm(self, a: Type, b: Type) -> Term:
        """Lifted ``\\x. \\y. <x, y>``, used for pairs that are not values."""
        return build(rf"\x:{_t(self.V(a))}. retf (\y:{_t(self.V(b))}. retp <x, y>)",
                     retf=self.ret(Arrow(b, Product(a, b))), retp=self.ret(Product(a, b)))

    def const(self, name: str, ty: Type) -> Term:
        """Lifted constant at its instance type ``ty``."""
        if name == "S":
            return build(r"\y:Nat. retn (S y)", retn=self.ret(NAT))
        if name in ("p1", "p2"):
            assert isinstance(ty, Arrow)
            return build(rf"\x:{_t(self.V(ty.domain))}. ret ({name} x)", ret=self.ret(ty.codomain))
        if name == "rec":
            assert isinstance(ty, Arrow)
            a = ty.codomain
            return build(
                rf"\p:{_t(self.V(ty.domain))}. rec <ret (p1 p), \x:Nat. \y:{_t(self.L(a))}. "
                r"bind ((p1 (p2 p)) x) y, p2 (p2 p)>",
                ret=self.ret(a), bind=self.bind(a, a))
        raise ValueError(f"constant {name} has no lifting here")

    # term maps
    def lift(self, node: Typed) -> Term:
        """Translation of a computation of type ``node.ty`` to ``L ty``."""
        t = node.term
        tt = type(t)
        if t.vshape:
            return App(self.ret(node.ty), self.value(node))
        if tt is App:
            fn, arg = node.kids
            return apps(self.bind(arg.ty, node.ty), self.lift(fn), self.lift(arg))
        if tt is Pair:
            left, right = node.kids
            a, b = left.ty, right.ty
            inner = apps(self.bind(a, Arrow(b, node.ty)),
                         App(self.ret(Arrow(a, Arrow(b, node.ty))), self.pairm(a, b)),
                         self.lift(left))
            return apps(self.bind(b, node.ty), inner, self.lift(right))
        if tt is Choice:
            left, right = node.kids
            return apps(self.choice(node.ty), self.lift(left), self.lift(right))
        if tt is Const and t.name in ("rand", "srand"):
            return self.rand()
        raise TypeError(f"cannot lift {t!r}")

    def value(self, node: Typed) -> Term:
        """Translation of an extended value of type ``node.ty`` to ``V ty``."""
        t = node.term
        tt = type(t)
        if tt is Num or tt is Var or tt is Free:
            return t
        if tt is Lam:
            (body,) = node.kids
            return Lam(self.V(t.annot), self.lift(body), t.hint)
        if tt is Pair:
            left, right = node.kids
            return Pair(self.value(left), self.value(right))
        if tt is App:  # S V
            _, arg = node.kids
            return App(t.fn, self.value(arg))
        if tt is Const:
            return self.const(t.name, node.ty)
        raise TypeError(f"not an extended value: {t!r}")

    def translate(self, t: Term, ctx: list[Type] | None = None, env=None) -> Term:
        require_fragment(t, set(self.forbidden), type(self).__name__)
        return self.lift(elaborate(env, t, ctx))


class PlusLifter(Lifter):
    """The coin-flip-counting monad for ``(+)``."""

    forbidden = frozenset({"rand", "fixr", "srand"})

    def L(self, ty: Type) -> Type:  # noqa: N802
        return Product(Arrow(NAT, self.V(ty)), NAT)

    def ret(self, ty: Type) -> Term:
        return _plus_ret(ty)

    def bind(self, a: Type, b: Type) -> Term:
        return _plus_bind(a, b)

    def choice(self, ty: Type) -> Term:
        return _plus_choice(ty)


_PLUS = PlusLifter()


@lru_cache(maxsize=None)
def _plus_ret(ty: Type) -> Term:
    return build(rf"\x:{_t(_PLUS.V(ty))}. <\s:Nat. x, 0>")


@lru_cache(maxsize=None)
def _plus_bind(a: Type, b: Type) -> Term:
    # the function part reads the low bits, the argument the next ones, and
    # the resulting computation whatever follows both
    return build(
        rf"\m:{_t(_PLUS.L(Arrow(a, b)))}. \n:{_t(_PLUS.L(a))}. "
        r"<\s:Nat. p1 ((p1 m) s ((p1 n) (shift s (p2 m)))) (shift s (add (p2 m) (p2 n))), "
        r"add (add (p2 m) (p2 n)) (max_below (\x:Nat. max_below (\y:Nat. "
        r"p2 ((p1 m) x ((p1 n) y))) (pow2 (p2 n))) (pow2 (p2 m)))>")


@lru_cache(maxsize=None)
def _plus_choice(ty: Type) -> Term:
    v = _PLUS.V(ty)
    return build(
        rf"\m:{_t(_PLUS.L(ty))}. \n:{_t(_PLUS.L(ty))}. "
        r"<\s:Nat. itef <mod2 s, \u:Nat. (p1 m) (div2 s), \u:Nat. (p1 n) (div2 s)> 0, "
        r"S (or_max (p2 m) (p2 n))>",
        itef=sugar.ite(Arrow(NAT, v)))


def lift_plus_to_t(t: Term, env=None) -> Term:
    """Pure System T term of type ``L t`` for a ``(+)``-program of type ``t``."""
    return _PLUS.translate(t, env=env)


def lifted_type(ty: Type) -> Type:
    return _PLUS.L(ty)


@dataclass(frozen=True)
class FiniteRep:
    """``F a1 .. ar k`` is ``<c, e>`` meaning probability ``c / 2^e`` of
    outcome ``k``; ``Q a1 .. ar`` bounds the support from above."""

    F: Term
    Q: Term
    arity: int = 1


def _applied(t: Term, arity: int) -> Term:
    """``t #(arity-1) .. #0`` for a closed ``t``."""
    return apps(t, *(Var(i) for i in reversed(range(arity))))


def _nat_lams(body: Term, arity: int, names: str = "n") -> Term:
    for i in range(arity):
        body = Lam(NAT, body, f"{names}{arity - 1 - i}" if arity > 1 else names)
    return body


def finite_rep(t: Term, arity: int = 1) -> FiniteRep:
    """Represent a ``(+)``-program of type ``Nat -> .. -> Nat`` (``arity``
    arguments) by two pure programs."""
    require_fragment(t, {"rand", "fixr", "srand"}, "finite representation")
    lifted = _PLUS.translate(_applied(t, arity), [NAT] * arity)
    lnat = _t(_PLUS.L(NAT))
    f_body = build(rf"\p:{lnat}. \k:Nat. <count_below (\s:Nat. eq ((p1 p) s) k) (pow2 (p2 p)), p2 p>")
    q_body = build(rf"\p:{lnat}. S (max_below (p1 p) (pow2 (p2 p)))")
    return FiniteRep(_nat_lams(App(f_body, lifted), arity), _nat_lams(App(q_body, lifted), arity),
                     arity)


__all__ = ["BIN", "FiniteRep", "Lifter", "PlusLifter", "finite_rep", "lift_plus_to_t",
           "lifted_type"]
