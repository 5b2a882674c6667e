"""Types and terms of System T with probabilistic choice, plus parsing and printing.

Bound variables are de Bruijn indices (``Var``); free variables are names
(``Free``), so alpha-equivalent terms are structurally equal.  Numerals
``S (S ... 0)`` are stored compactly as ``Num(n)``: building ``App(SUCC, Num(k))``
yields ``Num(k + 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


# --------------------------------------------------------------------------
# Types


class Type:
    __slots__ = ()

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True, slots=True)
class Nat(Type):
    pass


@dataclass(frozen=True, slots=True)
class Arrow(Type):
    domain: Type
    codomain: Type


@dataclass(frozen=True, slots=True)
class Product(Type):
    left: Type
    right: Type


@dataclass(frozen=True, slots=True)
class TVar(Type):
    """Unification variable; only produced inside the typechecker."""

    ident: int


NAT = Nat()


def arrows(*tys: Type) -> Type:
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    out = tys[-1]
    for ty in reversed(tys[:-1]):
        out = Arrow(ty, out)
    return out


def product(*tys: Type) -> Type:
    """Right-nested product: ``product(a, b, c)`` is ``a * (b * c)``."""
    out = tys[-1]
    for ty in reversed(tys[:-1]):
        out = Product(ty, out)
    return out


def print_type(ty: Type, prec: int = 0) -> str:
    if isinstance(ty, Nat):
        return "Nat"
    if isinstance(ty, TVar):
        return f"'t{ty.ident}"
    if isinstance(ty, Arrow):
        s = f"{print_type(ty.domain, 1)} -> {print_type(ty.codomain, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(ty, Product):
        s = f"{print_type(ty.left, 2)} * {print_type(ty.right, 1)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a type: {ty!r}")


# --------------------------------------------------------------------------
# Terms


class Term:
    """Base class.  Every node caches its hash, its loose-index bound ``fv``
    (one more than the largest dangling de Bruijn index, 0 when locally
    closed), whether it mentions free names, and whether it has the shape of
    an (extended) value.

    Nodes are plain slotted classes rather than frozen dataclasses because
    construction sits on the evaluator's hot path; they are never mutated
    after ``__init__``."""

    __slots__ = ("_hash", "fv", "has_free", "vshape")
    _cmp: tuple[str, ...] = ()
    _args: tuple[str, ...] = ()

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return all(getattr(self, a) == getattr(other, a) for a in self._cmp)

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __reduce__(self):
        return (type(self), tuple(getattr(self, a) for a in self._args))

    def __repr__(self) -> str:
        inner = ", ".join(repr(getattr(self, a)) for a in self._cmp)
        return f"{type(self).__name__}({inner})"

    def __str__(self) -> str:
        return print_term(self)

    @property
    def closed(self) -> bool:
        return self.fv == 0 and not self.has_free


class Var(Term):
    __slots__ = ("index",)
    _cmp = _args = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("de Bruijn index must be non-negative")
        self.index = index
        self._hash = hash(("var", index))
        self.fv = index + 1
        self.has_free = False
        self.vshape = True


class Free(Term):
    __slots__ = ("name",)
    _cmp = _args = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("free", name))
        self.fv = 0
        self.has_free = True
        self.vshape = True


class Const(Term):
    """One of the constants ``p1 p2 rec S rand fixr srand``."""

    __slots__ = ("name",)
    _cmp = _args = ("name",)

    def __init__(self, name: str):
        if name not in _CONST_NAMES:
            raise ValueError(f"unknown constant {name!r}")
        self.name = name
        self._hash = hash(("const", name))
        self.fv = 0
        self.has_free = False
        self.vshape = name not in ("rand", "srand")

    def __repr__(self) -> str:
        return _CONST_REPR[self.name]


_CONST_NAMES = ("p1", "p2", "rec", "S", "rand", "fixr", "srand")
_CONST_REPR = {"p1": "P1", "p2": "P2", "rec": "REC", "S": "SUCC", "rand": "RAND",
               "fixr": "FIXRAN", "srand": "SRAND"}


class Num(Term):
    """The numeral ``S^value 0``."""

    __slots__ = ("value",)
    _cmp = _args = ("value",)

    def __init__(self, value: int):
        if value < 0:
            raise ValueError("numerals are non-negative")
        self.value = value
        self._hash = hash(("num", value))
        self.fv = 0
        self.has_free = False
        self.vshape = True


class Lam(Term):
    """``\\hint:annot. body``; the hint is the surface name and is ignored
    by equality."""

    __slots__ = ("annot", "body", "hint")
    _cmp = ("annot", "body")
    _args = ("annot", "body", "hint")

    def __init__(self, annot: Type, body: Term, hint: str = "x"):
        self.annot = annot
        self.body = body
        self.hint = hint
        self._hash = hash(("lam", annot, body._hash))
        self.fv = body.fv - 1 if body.fv else 0
        self.has_free = body.has_free
        self.vshape = True


class App(Term):
    __slots__ = ("fn", "arg")
    _cmp = _args = ("fn", "arg")

    def __new__(cls, fn: Term, arg: Term):
        if type(arg) is Num and type(fn) is Const and fn.name == "S":
            return Num(arg.value + 1)
        return object.__new__(cls)

    def __init__(self, fn: Term, arg: Term):
        if type(self) is not App:  # collapsed to a numeral by __new__
            return
        self.fn = fn
        self.arg = arg
        self._hash = hash(("app", fn._hash, arg._hash))
        self.fv = fn.fv if fn.fv > arg.fv else arg.fv
        self.has_free = fn.has_free or arg.has_free
        self.vshape = arg.vshape and type(fn) is Const and fn.name == "S"


class Pair(Term):
    __slots__ = ("left", "right")
    _cmp = _args = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash(("pair", left._hash, right._hash))
        self.fv = left.fv if left.fv > right.fv else right.fv
        self.has_free = left.has_free or right.has_free
        self.vshape = left.vshape and right.vshape


class Choice(Term):
    """Fair binary choice ``left (+) right``."""

    __slots__ = ("left", "right")
    _cmp = _args = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash(("choice", left._hash, right._hash))
        self.fv = left.fv if left.fv > right.fv else right.fv
        self.has_free = left.has_free or right.has_free
        self.vshape = False


P1 = Const("p1")
P2 = Const("p2")
REC = Const("rec")
SUCC = Const("S")
RAND = Const("rand")
FIXRAN = Const("fixr")
SRAND = Const("srand")
ZERO = Num(0)


def nat(n: int) -> Num:
    return Num(n)


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def tuple_(*items: Term) -> Term:
    """Right-nested tuple ``<a, b, c>`` = ``<a, <b, c>>``."""
    out = items[-1]
    for it in reversed(items[:-1]):
        out = Pair(it, out)
    return out


def is_value(t: Term) -> bool:
    """Closed term in the value grammar."""
    return t.vshape and t.fv == 0 and not t.has_free


def as_nat(t: Term) -> int | None:
    return t.value if type(t) is Num else None


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, Lam):
            stack.append(u.body)
        elif isinstance(u, App):
            stack += (u.arg, u.fn)
        elif isinstance(u, (Pair, Choice)):
            stack += (u.right, u.left)


def constants_in(t: Term) -> set[str]:
    found = {u.name for u in subterms(t) if type(u) is Const}
    if any(type(u) is Choice for u in subterms(t)):
        found.add("(+)")
    return found


# --------------------------------------------------------------------------
# Substitution


def instantiate(body: Term, value: Term, depth: int = 0) -> Term:
    """``body[value/#depth]`` for a body under one binder: index ``depth`` is
    replaced by ``value`` (which must be locally closed) and larger loose
    indices are decremented."""
    if body.fv <= depth:
        return body
    tb = type(body)
    if tb is Var:
        i = body.index
        if i == depth:
            return value
        return Var(i - 1) if i > depth else body
    if tb is App:
        return App(instantiate(body.fn, value, depth), instantiate(body.arg, value, depth))
    if tb is Lam:
        return Lam(body.annot, instantiate(body.body, value, depth + 1), body.hint)
    if tb is Pair:
        return Pair(instantiate(body.left, value, depth), instantiate(body.right, value, depth))
    if tb is Choice:
        return Choice(instantiate(body.left, value, depth), instantiate(body.right, value, depth))
    return body


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every loose index ``>= cutoff``."""
    if t.fv <= cutoff or by == 0:
        return t
    tt = type(t)
    if tt is Var:
        return Var(t.index + by) if t.index >= cutoff else t
    if tt is App:
        return App(shift(t.fn, by, cutoff), shift(t.arg, by, cutoff))
    if tt is Lam:
        return Lam(t.annot, shift(t.body, by, cutoff + 1), t.hint)
    if tt is Pair:
        return Pair(shift(t.left, by, cutoff), shift(t.right, by, cutoff))
    if tt is Choice:
        return Choice(shift(t.left, by, cutoff), shift(t.right, by, cutoff))
    return t


def substitute(body: Term, var: str, value: Term) -> Term:
    """Capture-avoiding substitution of ``value`` for the free name ``var``."""

    def go(t: Term, depth: int) -> Term:
        if not t.has_free:
            return t
        tt = type(t)
        if tt is Free:
            return shift(value, depth) if t.name == var else t
        if tt is App:
            return App(go(t.fn, depth), go(t.arg, depth))
        if tt is Lam:
            return Lam(t.annot, go(t.body, depth + 1), t.hint)
        if tt is Pair:
            return Pair(go(t.left, depth), go(t.right, depth))
        if tt is Choice:
            return Choice(go(t.left, depth), go(t.right, depth))
        return t

    return go(body, 0)


def abstract(body: Term, var: str, annot: Type) -> Lam:
    """Bind the free name ``var`` in ``body``: returns ``\\var:annot. body``."""

    def go(t: Term, depth: int) -> Term:
        if not t.has_free and t.fv <= depth:
            return t
        tt = type(t)
        if tt is Free:
            return Var(depth) if t.name == var else t
        if tt is Var:
            return Var(t.index + 1) if t.index >= depth else t
        if tt is App:
            return App(go(t.fn, depth), go(t.arg, depth))
        if tt is Lam:
            return Lam(t.annot, go(t.body, depth + 1), t.hint)
        if tt is Pair:
            return Pair(go(t.left, depth), go(t.right, depth))
        if tt is Choice:
            return Choice(go(t.left, depth), go(t.right, depth))
        return t

    return Lam(annot, go(body, 0), var)


def replace_const(t: Term, name: str, by: Term) -> Term:
    """Replace every occurrence of constant ``name`` by the closed term ``by``."""
    tt = type(t)
    if tt is Const:
        return by if t.name == name else t
    if tt is App:
        return App(replace_const(t.fn, name, by), replace_const(t.arg, name, by))
    if tt is Lam:
        return Lam(t.annot, replace_const(t.body, name, by), t.hint)
    if tt is Pair:
        return Pair(replace_const(t.left, name, by), replace_const(t.right, name, by))
    if tt is Choice:
        return Choice(replace_const(t.left, name, by), replace_const(t.right, name, by))
    return t


# --------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"(?P<ws>\s+|--[^\n]*)"
    r"|(?P<op>\(\+\)|->|[()<>,.:*\\λ⊕])"
    r"|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
)

_KEYWORDS = {"p1": P1, "p2": P2, "rec": REC, "S": SUCC, "rand": RAND, "fixr": FIXRAN,
             "srand": SRAND}


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if tok == "λ":
                tok = "\\"
            elif tok == "⊕":
                tok = "(+)"
            out.append((kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    out.append(("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def peek(self) -> tuple[str, str, int, int]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, tok, line, col = self.next()
        if tok != text or kind == "eof":
            raise ParseError(f"expected {text!r}, found {tok or 'end of input'!r}", line, col)

    def error(self, msg: str) -> ParseError:
        _, tok, line, col = self.peek()
        return ParseError(f"{msg}, found {tok or 'end of input'!r}", line, col)

    # types
    def type_(self) -> Type:
        left = self.type_prod()
        if self.peek()[1] == "->":
            self.next()
            return Arrow(left, self.type_())
        return left

    def type_prod(self) -> Type:
        left = self.type_atom()
        if self.peek()[1] == "*":
            self.next()
            return Product(left, self.type_prod())
        return left

    def type_atom(self) -> Type:
        kind, tok, _, _ = self.peek()
        if kind == "ident" and tok == "Nat":
            self.next()
            return NAT
        if tok == "(":
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        raise self.error("expected a type")

    # terms
    def expr(self) -> Term:
        if self.peek()[1] == "\\":
            return self.lam()
        left = self.app()
        if self.peek()[1] == "(+)":
            self.next()
            return Choice(left, self.expr())
        return left

    def lam(self) -> Term:
        self.expect("\\")
        kind, name, line, col = self.next()
        if kind != "ident" or name in _KEYWORDS or name == "Nat":
            raise ParseError(f"expected a variable name, found {name!r}", line, col)
        self.expect(":")
        annot = self.type_()
        self.expect(".")
        self.scope.append(name)
        try:
            body = self.expr()
        finally:
            self.scope.pop()
        return Lam(annot, body, name)

    def starts_atom(self) -> bool:
        kind, tok, _, _ = self.peek()
        return kind in ("num", "ident") or tok in ("(", "<")

    def app(self) -> Term:
        if not self.starts_atom():
            raise self.error("expected a term")
        t = self.atom()
        while True:
            if self.starts_atom():
                t = App(t, self.atom())
            elif self.peek()[1] == "\\":
                t = App(t, self.lam())
                return t
            else:
                return t

    def atom(self) -> Term:
        kind, tok, line, col = self.next()
        if kind == "num":
            return Num(int(tok))
        if kind == "ident":
            if tok in _KEYWORDS:
                return _KEYWORDS[tok]
            if tok == "Nat":
                raise ParseError("type name used as a term", line, col)
            for depth, name in enumerate(reversed(self.scope)):
                if name == tok:
                    return Var(depth)
            return Free(tok)
        if tok == "(":
            t = self.expr()
            self.expect(")")
            return t
        if tok == "<":
            items = [self.expr()]
            while self.peek()[1] == ",":
                self.next()
                items.append(self.expr())
            self.expect(">")
            if len(items) < 2:
                raise ParseError("a tuple needs at least two components", line, col)
            return tuple_(*items)
        raise ParseError(f"unexpected {tok or 'end of input'!r}", line, col)


def parse_term(text: str) -> Term:
    """Parse the ASCII surface syntax.  Unbound names become ``Free`` nodes;
    reporting them is left to the typechecker."""
    p = _Parser(text)
    t = p.expr()
    if p.peek()[0] != "eof":
        raise p.error("unexpected trailing input")
    return t


def parse_type(text: str) -> Type:
    p = _Parser(text)
    ty = p.type_()
    if p.peek()[0] != "eof":
        raise p.error("unexpected trailing input")
    return ty


# --------------------------------------------------------------------------
# Printing

# precedence: 0 expression, 1 choice-left operand, 2 function position, 3 argument


def print_term(t: Term) -> str:
    """Canonical surface form: bound variables are named by binding depth,
    so alpha-equivalent terms print identically."""
    free = {u.name for u in subterms(t) if type(u) is Free}
    prefix = "x"
    while any(re.fullmatch(re.escape(prefix) + r"\d+", n) for n in free):
        prefix += "_"
    out: list[str] = []
    _pp(t, [], 0, prefix, out)
    return "".join(out)


def _pp(t: Term, names: list[str], prec: int, prefix: str, out: list[str]) -> None:
    tt = type(t)
    if tt is Num:
        out.append(str(t.value))
    elif tt is Const:
        out.append(t.name)
    elif tt is Free:
        out.append(t.name)
    elif tt is Var:
        if t.index < len(names):
            out.append(names[-1 - t.index])
        else:
            out.append(f"#{t.index - len(names)}")
    elif tt is Lam:
        name = f"{prefix}{len(names)}"
        if prec > 0:
            out.append("(")
        out.append(f"\\{name}:{print_type(t.annot)}. ")
        names.append(name)
        _pp(t.body, names, 0, prefix, out)
        names.pop()
        if prec > 0:
            out.append(")")
    elif tt is Choice:
        if prec > 0:
            out.append("(")
        _pp(t.left, names, 1, prefix, out)
        out.append(" (+) ")
        _pp(t.right, names, 0, prefix, out)
        if prec > 0:
            out.append(")")
    elif tt is App:
        if prec > 2:
            out.append("(")
        _pp(t.fn, names, 2, prefix, out)
        out.append(" ")
        _pp(t.arg, names, 3, prefix, out)
        if prec > 2:
            out.append(")")
    elif tt is Pair:
        out.append("<")
        _pp(t.left, names, 0, prefix, out)
        r = t.right
        while type(r) is Pair:
            out.append(", ")
            _pp(r.left, names, 0, prefix, out)
            r = r.right
        out.append(", ")
        _pp(r, names, 0, prefix, out)
        out.append(">")
    else:
        raise TypeError(f"not a term: {t!r}")
