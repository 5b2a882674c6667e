"""Reduction kernel: contraction rules and a refocusing machine.

A configuration is a pair ``(focus, stack)`` where ``stack`` is the
evaluation context as a persistent list of frames and ``focus`` is either
the next redex or, when the stack is empty, the final value.  Evaluation
contexts follow the call-by-value discipline of the calculus: the argument
of an application is reduced before its function, and pairs are reduced
left to right.  ``(+)`` is never reduced under.

Keeping the context outside the term means one contraction costs time
proportional to the redex, not to the depth of the surrounding context,
which matters for terms such as ``Expo`` that build contexts of depth 2^n.
"""

from __future__ import annotations

from fractions import Fraction

from .syntax import (FIXRAN, App, Choice, Const, Free, Lam, Num, Pair, Term, Var, instantiate,
                     print_term)

HALF = Fraction(1, 2)

# frame kinds
ARG, FN, PL, PR = 0, 1, 2, 3


class StuckError(RuntimeError):
    """A closed term that is neither a value nor a redex.  Unreachable for
    well-typed input."""


class Stack:
    """Immutable linked list of frames with a cached hash."""

    __slots__ = ("kind", "term", "parent", "depth", "_hash")

    def __init__(self, kind: int, term: Term, parent: "Stack | None"):
        self.kind = kind
        self.term = term
        self.parent = parent
        self.depth = 1 if parent is None else parent.depth + 1
        self._hash = hash((kind, term._hash, 0 if parent is None else parent._hash))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        a, b = self, other
        while a is not b:
            if (type(b) is not Stack or a._hash != b._hash or a.kind != b.kind
                    or a.depth != b.depth or a.term != b.term):
                return False
            a, b = a.parent, b.parent
            if a is None or b is None:
                return a is b
        return True

    def __reduce__(self):
        return (Stack, (self.kind, self.term, self.parent))


def push(kind: int, term: Term, stack: Stack | None) -> Stack:
    return Stack(kind, term, stack)


def refocus(focus: Term, stack: Stack | None):
    """Return ``(redex, stack)`` or ``(value, None)`` when evaluation is done.

    Every term reached here sits outside all binders of a closed program,
    so it is closed and ``vshape`` alone decides whether it is a value."""
    while True:
        tf = type(focus)
        if tf is App:
            fn, arg = focus.fn, focus.arg
            if not arg.vshape:
                stack = Stack(ARG, fn, stack)
                focus = arg
                continue
            if not fn.vshape:
                stack = Stack(FN, arg, stack)
                focus = fn
                continue
            if not focus.vshape:  # S V is a value, anything else a redex
                return focus, stack
        elif tf is Pair:
            if not focus.left.vshape:
                stack = Stack(PL, focus.right, stack)
                focus = focus.left
                continue
            if not focus.right.vshape:
                stack = Stack(PR, focus.left, stack)
                focus = focus.right
                continue
        elif tf is Choice:
            return focus, stack
        elif tf is Const and not focus.vshape:  # rand, srand
            return focus, stack
        elif tf is Var or tf is Free:
            raise StuckError(f"open term: {focus!r}")
        # focus is a value: plug it into the innermost frame
        while True:
            if stack is None:
                return focus, None
            kind, t, stack = stack.kind, stack.term, stack.parent
            if kind == ARG:
                if t.vshape:
                    redex = App(t, focus)
                    if redex.vshape:  # S V collapsed or stays a value
                        focus = redex
                        continue
                    return redex, stack
                stack = Stack(FN, focus, stack)
                focus = t
                break
            if kind == FN:
                redex = App(focus, t)
                if redex.vshape:
                    focus = redex
                    continue
                return redex, stack
            if kind == PL:
                if t.vshape:
                    focus = Pair(focus, t)
                    continue
                stack = Stack(PR, focus, stack)
                focus = t
                break
            focus = Pair(t, focus)  # PR


def plug(focus: Term, stack: Stack | None) -> Term:
    while stack is not None:
        k, t = stack.kind, stack.term
        if k == ARG:
            focus = App(t, focus)
        elif k == FN:
            focus = App(focus, t)
        elif k == PL:
            focus = Pair(focus, t)
        else:
            focus = Pair(t, focus)
        stack = stack.parent
    return focus


def contract(redex: Term):
    """Apply the rule for a redex that is not ``rand``/``srand``.

    Returns a term for deterministic rules and a tuple of
    ``(term, probability)`` pairs for probabilistic ones.
    """
    tr = type(redex)
    if tr is Choice:
        return ((redex.left, HALF), (redex.right, HALF))
    if tr is App:
        fn, arg = redex.fn, redex.arg
        tf = type(fn)
        if tf is Lam:
            return instantiate(fn.body, arg)
        if tf is Const:
            name = fn.name
            if name == "p1" and type(arg) is Pair:
                return arg.left
            if name == "p2" and type(arg) is Pair:
                return arg.right
            if name == "rec" and type(arg) is Pair and type(arg.right) is Pair:
                base, rest = arg.left, arg.right
                n = rest.right
                if type(n) is Num:
                    if n.value == 0:
                        return base
                    k = Num(n.value - 1)
                    return App(App(rest.left, k), App(fn, Pair(base, Pair(rest.left, k))))
            if name == "fixr" and type(arg) is Pair:
                return ((App(arg.left, App(FIXRAN, arg)), HALF), (arg.right, HALF))
    raise StuckError(f"stuck term: {_short(redex)}")


def _short(t: Term) -> str:
    s = print_term(t)
    return s if len(s) < 120 else s[:117] + "..."


def geometric(width: int) -> tuple[list[tuple[Term, Fraction]], Fraction]:
    """Outcomes ``0 .. width-1`` of ``rand`` and the untaken tail ``2^-width``."""
    return [(Num(k), Fraction(1, 2 ** (k + 1))) for k in range(width)], Fraction(1, 2 ** width)


def adaptive_width(epsilon: Fraction) -> int:
    """Smallest width whose tail ``2^-w`` is at most ``epsilon / 2``."""
    if epsilon <= 0:
        raise ValueError("adaptive rand truncation needs a positive epsilon")
    w = 0
    while Fraction(1, 2 ** w) > epsilon / 2:
        w += 1
    return w
