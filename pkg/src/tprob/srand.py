"""State-bounded random integers.

A configuration carries two registers next to the term: the threshold ``m``
and the increment ``n``.  ``srand`` draws ``k`` with probability
``1/2^(k+1)`` only when ``k < m`` and then raises the threshold to ``m + n``;
larger draws fail, so the outcome distribution loses exactly ``1/2^m``.
Every other rule leaves the registers alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dist import ZERO_P, Dist
from .errors import FragmentError, require_fragment
from .evaluation import Budget, successors
from .machine import refocus
from .syntax import RAND, SRAND, Const, Num, Term, replace_const


@dataclass(frozen=True)
class Config:
    term: Term
    m: int
    n: int


@dataclass(frozen=True)
class ConfigDist:
    weights: Mapping[Config, Fraction]
    failure: Fraction = ZERO_P

    def norm(self) -> Fraction:
        return sum(self.weights.values(), ZERO_P)

    def erase(self) -> dict[Term, Fraction]:
        """Forget the registers."""
        out: dict[Term, Fraction] = {}
        for c, w in self.weights.items():
            out[c.term] = out.get(c.term, ZERO_P) + w
        return out


@dataclass(frozen=True)
class SRandResult:
    values: ConfigDist
    failure: Fraction
    residual: Fraction
    steps_taken: int

    def erased(self) -> Dist:
        """Value distribution without registers; failed mass is simply
        absent, unexplored mass is the residual."""
        return Dist(self.values.erase(), self.residual)

    @property
    def success_bounds(self) -> tuple[Fraction, Fraction]:
        lo = self.values.norm()
        return lo, lo + self.residual


def star(t: Term) -> Term:
    """Replace every ``rand`` by ``srand``."""
    require_fragment(t, {"fixr", "srand"}, "star")
    return replace_const(t, "rand", SRAND)


def unstar(t: Term) -> Term:
    return replace_const(t, "srand", RAND)


def eval_srand(c: Config, budget: Budget) -> SRandResult:
    """Lockstep evaluation of a configuration.  ``srand`` expansions are
    finite, so the residual only comes from the budget."""
    if c.m < 0 or c.n < 0:
        raise ValueError("registers must be natural numbers")
    if "rand" in {u.name for u in _consts(c.term)} or "fixr" in {u.name for u in _consts(c.term)}:
        raise FragmentError("configurations hold starred terms (no rand, no fixr)")
    n = c.n
    values: dict[Config, Fraction] = {}
    failure = ZERO_P
    focus, stack = refocus(c.term, None)
    if stack is None and focus.vshape:
        return SRandResult(ConfigDist({c: Fraction(1)}), ZERO_P, ZERO_P, 0)
    live: dict[tuple, Fraction] = {(focus, stack, c.m): Fraction(1)}
    live_mass = Fraction(1)
    depth = 0
    eps, max_steps = budget.epsilon, budget.max_steps
    while live:
        if max_steps is not None and depth >= max_steps:
            break
        if eps > 0 and live_mass <= eps:
            break
        depth += 1
        nxt: dict[tuple, Fraction] = {}
        for (f, s, m), p in live.items():
            if type(f) is Const and f.name == "srand":
                kids = [(refocus(Num(k), s), Fraction(1, 2 ** (k + 1))) for k in range(m)]
                m2 = m + n
                lost = p / 2 ** m
                failure += lost
                live_mass -= lost
            else:
                kids, _ = successors(f, s, 0)
                m2 = m
            for (g, st), w in kids:
                q = p if w is None else p * w
                if st is None and g.vshape:
                    key = Config(g, m2, n)
                    values[key] = values.get(key, ZERO_P) + q
                    live_mass -= q
                else:
                    k2 = (g, st, m2)
                    old = nxt.get(k2)
                    nxt[k2] = q if old is None else old + q
        live = nxt
    return SRandResult(ConfigDist(values, failure), failure, live_mass, depth)


def _consts(t: Term):
    from .syntax import subterms

    return [u for u in subterms(t) if type(u) is Const]


def success_product_bound(m: int, n: int, terms: int) -> Fraction:
    """Exact partial product ``prod_{k<terms} (1 - 1/2^(m+k*n))``.

    The factors are below 1, so partial products decrease towards the
    infinite product; see :func:`success_lower_bound` for a value that is
    guaranteed to sit below it."""
    if m < 1 or n < 1 or terms < 1:
        raise ValueError("m, n and terms must be at least 1")
    out = Fraction(1)
    for k in range(terms):
        out *= 1 - Fraction(1, 2 ** (m + k * n))
    return out


def success_lower_bound(m: int, n: int, terms: int) -> Fraction:
    """Certified lower bound on the infinite product: the partial product
    times ``1 - (tail sum of the remaining 1/2^(m+k*n))``, using
    ``prod (1 - a_k) >= 1 - sum a_k``."""
    tail = Fraction(1, 2 ** (m + terms * n)) / (1 - Fraction(1, 2 ** n))
    return success_product_bound(m, n, terms) * (1 - tail)


def euler_sine_bound(n: int) -> float:
    """``sin(pi/n) / (pi/n)``, the closed form of ``prod_{k>=1} (1 - 1/(n k)^2)``."""
    x = math.pi / n
    return math.sin(x) / x
