"""Typing judgment.

Binders are annotated, so the only source of ambiguity is the polymorphic
constants (``p1``, ``p2``, ``rec``, ``fixr``).  Those are instantiated with
fresh unification variables; whatever is still unconstrained after checking
the whole term defaults to ``Nat``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .syntax import (NAT, App, Arrow, Choice, Const, Free, Lam, Nat, Num, Pair, Product,
                     Term, TVar, Type, Var, arrows, print_term, print_type, product)


class TypeCheckError(Exception):
    pass


class UnboundVariableError(TypeCheckError):
    pass


TypeEnv = Mapping[str, Type]


@dataclass(frozen=True)
class Typed:
    """A term paired with its type, with typed children in the order
    Lam: (body,), App: (fn, arg), Pair/Choice: (left, right)."""

    term: Term
    ty: Type
    kids: tuple["Typed", ...] = ()


class _Checker:
    def __init__(self, env: TypeEnv):
        self.env = env
        self.subst: dict[int, Type] = {}
        self.counter = 0

    def fresh(self) -> TVar:
        self.counter += 1
        return TVar(self.counter)

    def resolve(self, ty: Type) -> Type:
        while isinstance(ty, TVar) and ty.ident in self.subst:
            ty = self.subst[ty.ident]
        return ty

    def zonk(self, ty: Type, default: bool = False) -> Type:
        ty = self.resolve(ty)
        if isinstance(ty, Arrow):
            return Arrow(self.zonk(ty.domain, default), self.zonk(ty.codomain, default))
        if isinstance(ty, Product):
            return Product(self.zonk(ty.left, default), self.zonk(ty.right, default))
        if isinstance(ty, TVar) and default:
            return NAT
        return ty

    def occurs(self, ident: int, ty: Type) -> bool:
        ty = self.resolve(ty)
        if isinstance(ty, TVar):
            return ty.ident == ident
        if isinstance(ty, Arrow):
            return self.occurs(ident, ty.domain) or self.occurs(ident, ty.codomain)
        if isinstance(ty, Product):
            return self.occurs(ident, ty.left) or self.occurs(ident, ty.right)
        return False

    def unify(self, a: Type, b: Type) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, TVar):
            if self.occurs(a.ident, b):
                return False
            self.subst[a.ident] = b
            return True
        if isinstance(b, TVar):
            return self.unify(b, a)
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            return self.unify(a.domain, b.domain) and self.unify(a.codomain, b.codomain)
        if isinstance(a, Product) and isinstance(b, Product):
            return self.unify(a.left, b.left) and self.unify(a.right, b.right)
        return False

    def show(self, ty: Type) -> str:
        return print_type(self.zonk(ty))

    def const_type(self, name: str) -> Type:
        if name in ("rand", "srand"):
            return NAT
        if name == "S":
            return Arrow(NAT, NAT)
        a, b = self.fresh(), self.fresh()
        if name == "p1":
            return Arrow(Product(a, b), a)
        if name == "p2":
            return Arrow(Product(a, b), b)
        if name == "rec":
            return Arrow(product(a, arrows(NAT, a, a), NAT), a)
        if name == "fixr":
            return Arrow(Product(Arrow(a, a), a), a)
        raise TypeCheckError(f"unknown constant {name}")

    def infer(self, t: Term, ctx: list[Type]) -> Typed:
        tt = type(t)
        if tt is Num:
            return Typed(t, NAT)
        if tt is Const:
            return Typed(t, self.const_type(t.name))
        if tt is Var:
            if t.index >= len(ctx):
                raise UnboundVariableError(f"dangling de Bruijn index {t.index}")
            return Typed(t, ctx[-1 - t.index])
        if tt is Free:
            if t.name not in self.env:
                raise UnboundVariableError(f"unbound variable {t.name!r}")
            return Typed(t, self.env[t.name])
        if tt is Lam:
            ctx.append(t.annot)
            try:
                body = self.infer(t.body, ctx)
            finally:
                ctx.pop()
            return Typed(t, Arrow(t.annot, body.ty), (body,))
        if tt is App:
            fn = self.infer(t.fn, ctx)
            arg = self.infer(t.arg, ctx)
            res = self.fresh()
            if not self.unify(fn.ty, Arrow(arg.ty, res)):
                fty = self.resolve(fn.ty)
                if isinstance(fty, Arrow):
                    msg = (f"argument `{_show(t.arg)}` has type {self.show(arg.ty)}, "
                           f"expected {self.show(fty.domain)}")
                else:
                    msg = (f"`{_show(t.fn)}` has type {self.show(fn.ty)}, "
                           f"which is not a function")
                raise TypeCheckError(f"type mismatch in `{_show(t)}`: {msg}")
            return Typed(t, res, (fn, arg))
        if tt is Pair:
            l = self.infer(t.left, ctx)
            r = self.infer(t.right, ctx)
            return Typed(t, Product(l.ty, r.ty), (l, r))
        if tt is Choice:
            l = self.infer(t.left, ctx)
            r = self.infer(t.right, ctx)
            if not self.unify(l.ty, r.ty):
                raise TypeCheckError(
                    f"type mismatch in `{_show(t)}`: branches have types "
                    f"{self.show(l.ty)} and {self.show(r.ty)}")
            return Typed(t, l.ty, (l, r))
        raise TypeCheckError(f"not a term: {t!r}")

    def finish(self, node: Typed) -> Typed:
        return Typed(node.term, self.zonk(node.ty, default=True),
                     tuple(self.finish(k) for k in node.kids))


def _show(t: Term, limit: int = 60) -> str:
    try:
        s = print_term(t)
    except Exception:  # pragma: no cover - printing open fragments
        s = repr(t)
    return s if len(s) <= limit else s[: limit - 3] + "..."


def elaborate(env: TypeEnv | None, t: Term, ctx: list[Type] | None = None) -> Typed:
    """Typecheck ``t`` and return the fully typed tree."""
    checker = _Checker(env or {})
    return checker.finish(checker.infer(t, list(ctx or [])))


def typecheck(env: TypeEnv | None, t: Term) -> Type:
    checker = _Checker(env or {})
    return checker.zonk(checker.infer(t, []).ty, default=True)


def is_ground_nat(ty: Type) -> bool:
    return isinstance(ty, Nat)
