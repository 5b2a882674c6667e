"""Deterministic programs computing the answer of promise programs.

A Monte Carlo program has, for every input, an outcome of probability above
one half; a Las Vegas program returns either a correct answer or ``0``,
with correct answers carrying all of the non-zero mass.  The finite
representation computes outcome probabilities exactly, so a bounded search
over candidates below the support bound finds the answer.

For ``rand``-programs the search runs over the approximant at precision
``2 * H m`` where ``H`` bounds, as a pure program, the quantity the promise
depends on: the Monte Carlo margin must exceed ``1 / H m``, and a Las Vegas
answer must have probability at least ``1 / H m``.
"""

from __future__ import annotations

from ..errors import require_fragment
from ..syntax import NAT, Term, constants_in
from ..typecheck import typecheck
from . import sugar
from .approximant import approximant
from .lifting import finite_rep
from .sugar import build


def _check_nat_fun(t: Term) -> None:
    ty = typecheck({}, t)
    if ty != typecheck({}, build(r"\n:Nat. n")):
        raise TypeError("derandomization expects a program of type Nat -> Nat")


def _plus_search(t: Term, test: str) -> Term:
    rep = finite_rep(t)
    return build(
        r"\n:Nat. (\f:Nat -> Nat * Nat. rec <0, \k:Nat. \y:Nat. iten <" + test + r", k, y>, Q n>) (F n)",
        F=rep.F, Q=rep.Q, iten=sugar.ite(NAT))


def _rand_search(t: Term, h: Term, test: str) -> Term:
    rep = finite_rep(approximant(t), arity=2)
    _check_nat_fun(h)
    return build(
        r"\m:Nat. (\p:Nat. (\f:Nat -> Nat * Nat. rec <0, \k:Nat. \y:Nat. iten <" + test
        + r", k, y>, Q m p>) (F m p)) (add (H m) (H m))",
        F=rep.F, Q=rep.Q, H=h, iten=sugar.ite(NAT))


def derandomize_mc(t: Term, h: Term | None = None) -> Term:
    """Pure program returning, on each input, the outcome of probability
    above one half.  ``h`` is required exactly when ``t`` uses ``rand``."""
    _check_nat_fun(t)
    if "rand" in constants_in(t):
        if h is None:
            raise ValueError("a rand-program needs a bound H")
        return _rand_search(t, h, "sup_half (f k)")
    require_fragment(t, {"fixr", "srand"}, "derandomization")
    return _plus_search(t, "sup_half (f k)")


def derandomize_lv(t: Term, h: Term | None = None) -> Term:
    """Pure program returning, on each input, a non-zero outcome of
    positive probability (or ``0`` when there is none)."""
    _check_nat_fun(t)
    if "rand" in constants_in(t):
        if h is None:
            raise ValueError("a rand-program needs a bound H")
        return _rand_search(t, h, "sup_half (mul_b (H m) (f (S k)))")
    require_fragment(t, {"fixr", "srand"}, "derandomization")
    return _plus_search(t, "sup_zero (f (S k))")


__all__ = ["derandomize_lv", "derandomize_mc"]
