"""Arithmetic and control sugar as closed System T terms.

Every helper is written in surface syntax and parsed; helpers refer to one
another by free name and are linked by substitution.  All of them are
strict call-by-value programs, so they are written to stay linear in the
size of their numeric arguments (``ite`` evaluates both branches; callers
that need laziness pass thunks).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..syntax import NAT, Arrow, Pair, Product, Term, Type, Free, Lam, parse_term, print_type, subterms, substitute

BIN = Product(NAT, NAT)


def _t(ty: Type) -> str:
    return f"({print_type(ty)})"


def build(text: str, **defs: Term) -> Term:
    """Parse ``text`` and link free names against ``defs`` and the
    monomorphic library."""
    term = parse_term(text)
    names = {u.name for u in subterms(term) if type(u) is Free}
    for name in names:
        if name in defs:
            value = defs[name]
        elif name in _MONO:
            value = _MONO[name]()
        else:
            continue
        term = substitute(term, name, value)
    return term


# -- monomorphic helpers ----------------------------------------------------


@lru_cache(maxsize=None)
def add() -> Term:
    return build(r"\a:Nat. \b:Nat. rec <a, \i:Nat. \x:Nat. S x, b>")


@lru_cache(maxsize=None)
def pred() -> Term:
    return build(r"\a:Nat. rec <0, \i:Nat. \x:Nat. i, a>")


@lru_cache(maxsize=None)
def sub() -> Term:
    """Truncated subtraction."""
    return build(r"\a:Nat. \b:Nat. rec <a, \i:Nat. \x:Nat. pred x, b>")


@lru_cache(maxsize=None)
def or_max() -> Term:
    return build(r"\a:Nat. \b:Nat. add a (sub b a)")


@lru_cache(maxsize=None)
def mul() -> Term:
    return build(r"\a:Nat. \b:Nat. rec <0, \i:Nat. \y:Nat. add a y, b>")


@lru_cache(maxsize=None)
def pow2() -> Term:
    return build(r"\n:Nat. rec <1, \i:Nat. \y:Nat. add y y, n>")


@lru_cache(maxsize=None)
def divmod2() -> Term:
    """``x`` to ``<x div 2, x mod 2>``."""
    return build(r"\x:Nat. rec <<0, 0>, \i:Nat. \p:Nat * Nat. "
                 r"ite2 <p2 p, <S (p1 p), 0>, <p1 p, 1>>, x>", ite2=ite(BIN))


@lru_cache(maxsize=None)
def div2() -> Term:
    return build(r"\x:Nat. p1 (divmod2 x)")


@lru_cache(maxsize=None)
def mod2() -> Term:
    return build(r"\x:Nat. p2 (divmod2 x)")


@lru_cache(maxsize=None)
def shift() -> Term:
    """``shift s y`` drops the ``y`` low bits of ``s``."""
    return build(r"\s:Nat. \y:Nat. rec <s, \i:Nat. \v:Nat. div2 v, y>")


@lru_cache(maxsize=None)
def max_below() -> Term:
    """``max_below f m`` is the largest ``f x`` for ``x < m`` (0 if ``m = 0``)."""
    return build(r"\f:Nat -> Nat. \m:Nat. rec <0, \x:Nat. \y:Nat. or_max (f x) y, m>")


@lru_cache(maxsize=None)
def gt() -> Term:
    return build(r"\a:Nat. \b:Nat. iten <sub a b, 1, 0>", iten=ite(NAT))


@lru_cache(maxsize=None)
def eq() -> Term:
    return build(r"\a:Nat. \b:Nat. iten <add (sub a b) (sub b a), 0, 1>", iten=ite(NAT))


@lru_cache(maxsize=None)
def count_below() -> Term:
    """``count_below f m`` is the number of ``x < m`` with ``f x`` non-zero."""
    return build(r"\f:Nat -> Nat. \m:Nat. rec <0, \x:Nat. \y:Nat. iten <f x, S y, y>, m>",
                 iten=ite(NAT))


@lru_cache(maxsize=None)
def sup_half() -> Term:
    """On ``<a, e>`` read as ``a / 2^e``: 1 if above one half, else 0."""
    return build(r"\b:Nat * Nat. gt (add (p1 b) (p1 b)) (pow2 (p2 b))")


@lru_cache(maxsize=None)
def sup_zero() -> Term:
    return build(r"\b:Nat * Nat. gt (p1 b) 0")


@lru_cache(maxsize=None)
def mul_b() -> Term:
    return build(r"\a:Nat. \b:Nat * Nat. <mul a (p1 b), p2 b>")


_MONO = {
    "add": add, "pred": pred, "sub": sub, "or_max": or_max, "mul": mul, "pow2": pow2,
    "divmod2": divmod2, "div2": div2, "mod2": mod2, "shift": shift, "max_below": max_below,
    "gt": gt, "eq": eq, "count_below": count_below, "sup_half": sup_half,
    "sup_zero": sup_zero, "mul_b": mul_b,
}


# -- type-indexed helpers ---------------------------------------------------


@lru_cache(maxsize=None)
def ite(ty: Type) -> Term:
    """``ite <c, a, b>`` is ``a`` when ``c`` is non-zero and ``b`` otherwise."""
    return build(rf"\x:Nat * {_t(ty)} * {_t(ty)}. rec <p2 (p2 x), \i:Nat. \y:{_t(ty)}. p1 (p2 x), p1 x>")


@lru_cache(maxsize=None)
def bottom(ty: Type) -> Term:
    """A canonical closed value of type ``ty``."""
    if ty == NAT:
        return build("0")
    if isinstance(ty, Arrow):
        return Lam(ty.domain, bottom(ty.codomain), "x")
    if isinstance(ty, Product):
        return Pair(bottom(ty.left), bottom(ty.right))
    raise TypeError(f"no inhabitant for {ty!r}")


@dataclass(frozen=True)
class SugarLib:
    """The helpers at their ``Nat`` instances."""

    ite: Term
    mod2: Term
    div2: Term
    shift: Term
    add: Term
    mul: Term
    pow2: Term
    max_below: Term
    or_max: Term
    gt: Term
    eq: Term
    sub: Term
    sup_half: Term
    sup_zero: Term
    mul_b: Term


def sugar_lib() -> SugarLib:
    return SugarLib(ite=ite(NAT), mod2=mod2(), div2=div2(), shift=shift(), add=add(),
                    mul=mul(), pow2=pow2(), max_below=max_below(), or_max=or_max(), gt=gt(),
                    eq=eq(), sub=sub(), sup_half=sup_half(), sup_zero=sup_zero(),
                    mul_b=mul_b())
