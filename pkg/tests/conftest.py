"""Shared fixtures: generators of well-typed closed terms and the summary
of acceptance results."""

from __future__ import annotations

from hypothesis import strategies as st

from tprob.syntax import (NAT, RAND, App, Arrow, Choice, Const, Lam, Num, Pair, Term, Var,
                          apps)

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(acceptance_line(criterion))


def acceptance_line(criterion: int) -> str:
    ok, detail = ACCEPTANCE[criterion]
    return f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for c in sorted(ACCEPTANCE):
            terminalreporter.write_line(acceptance_line(c))


REC = Const("rec")


@st.composite
def nat_terms(draw, depth: int = 3, ctx: int = 0, with_rand: bool = False) -> Term:
    """A term of type Nat whose free variables are among the ``ctx``
    innermost binders, all of type Nat."""
    leaves = [st.builds(Num, st.integers(0, 3))]
    if ctx:
        leaves.append(st.builds(Var, st.integers(0, ctx - 1)))
    if with_rand:
        leaves.append(st.just(RAND))
    if depth <= 0:
        return draw(st.one_of(leaves))
    kind = draw(st.sampled_from(["leaf", "succ", "choice", "beta", "proj", "rec", "choice"]))
    sub = lambda c=ctx: nat_terms(depth - 1, c, with_rand)  # noqa: E731
    if kind == "leaf":
        return draw(st.one_of(leaves))
    if kind == "succ":
        return App(Const("S"), draw(sub()))
    if kind == "choice":
        return Choice(draw(sub()), draw(sub()))
    if kind == "beta":
        return App(Lam(NAT, draw(sub(ctx + 1)), "x"), draw(sub()))
    if kind == "proj":
        which = draw(st.sampled_from(["p1", "p2"]))
        return App(Const(which), Pair(draw(sub()), draw(sub())))
    step = Lam(NAT, Lam(NAT, draw(sub(ctx + 2)), "y"), "x")
    return App(REC, Pair(draw(sub()), Pair(step, Num(draw(st.integers(0, 2))))))


@st.composite
def fun_terms(draw, depth: int = 2) -> Term:
    """A closed ``(+)``-program of type Nat -> Nat."""
    return Lam(NAT, draw(nat_terms(depth, 1)), "n")


@st.composite
def higher_terms(draw, depth: int = 2) -> Term:
    """Closed terms of type Nat that pass functions around."""
    body = draw(nat_terms(depth, 1))
    f = Lam(NAT, body, "z")
    g = Lam(Arrow(NAT, NAT), App(Var(0), draw(nat_terms(depth - 1, 0))), "f")
    return apps(g, f)
