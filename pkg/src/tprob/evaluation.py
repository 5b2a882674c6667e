"""Evaluation: one-step reduction, lockstep and worklist evaluators, sampler.

``step`` and ``dist_step`` work directly on terms by recursive descent into
evaluation contexts.  ``evaluate`` runs on the refocusing machine of
:mod:`tprob.machine`; the two implementations are tested against each other.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal

from . import machine
from .dist import ZERO_P, Dist, bind_integral, dirac
from .machine import Stack, StuckError, contract, refocus
from .syntax import App, Choice, Const, Num, Pair, Term, is_value, print_term

Mode = Literal["lockstep", "worklist"]

DEFAULT_STEP_WIDTH = 64
SAMPLE_CAP = 10**6


@dataclass(frozen=True)
class Budget:
    """Stopping criteria.  ``max_steps`` counts lockstep rounds (lockstep
    mode) or contractions (worklist mode).  ``rand_width`` fixes how many
    outcomes of each ``rand`` are kept; when absent the width is chosen so
    every expansion leaves a tail of at most ``epsilon / 2`` of its mass."""

    max_steps: int | None = None
    epsilon: Fraction = ZERO_P
    rand_width: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.max_steps is None and self.epsilon <= 0:
            raise ValueError("a budget needs epsilon > 0 or a finite max_steps")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if not 0 <= self.epsilon <= 1:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.rand_width is not None and self.rand_width < 0:
            raise ValueError("rand_width must be non-negative")

    def width(self) -> int:
        if self.rand_width is not None:
            return self.rand_width
        if self.epsilon > 0:
            return machine.adaptive_width(self.epsilon)
        raise ValueError("rand needs a rand_width when epsilon is 0")


UNBOUNDED = None  # marker used by callers that only want exact results


def exact_budget(max_steps: int = 10**7) -> Budget:
    return Budget(max_steps=max_steps, epsilon=ZERO_P)


@dataclass(frozen=True)
class EvalResult:
    value_dist: Dist
    residual: Fraction
    steps_taken: int
    avlength_lower: Fraction
    per_depth_mass: tuple[tuple[int, Fraction], ...] = ()
    contractions: int = 0

    @property
    def success_bounds(self) -> tuple[Fraction, Fraction]:
        lo = self.value_dist.norm()
        return lo, lo + self.residual

    @property
    def diverging_hint(self) -> bool:
        return diverging_hint(self)


# --------------------------------------------------------------------------
# Term-level single step


def step(t: Term, rand_width: int = DEFAULT_STEP_WIDTH) -> Dist:
    """One reduction step of a closed reducible term."""
    if is_value(t):
        raise StuckError("values do not reduce")
    return Dist(*_step(t, rand_width))


def _step(t: Term, width: int) -> tuple[dict[Term, Fraction], Fraction]:
    tt = type(t)
    if tt is App:
        fn, arg = t.fn, t.arg
        if not is_value(arg):
            sub, tail = _step(arg, width)
            return _collect((App(fn, u), w) for u, w in sub.items()), tail
        if not is_value(fn):
            sub, tail = _step(fn, width)
            return _collect((App(u, arg), w) for u, w in sub.items()), tail
        return _rule(t)
    if tt is Pair:
        if not is_value(t.left):
            sub, tail = _step(t.left, width)
            return _collect((Pair(u, t.right), w) for u, w in sub.items()), tail
        sub, tail = _step(t.right, width)
        return _collect((Pair(t.left, u), w) for u, w in sub.items()), tail
    if tt is Const and t.name == "rand":
        outcomes, tail = machine.geometric(width)
        return dict(outcomes), tail
    if tt is Const and t.name == "srand":
        raise StuckError("srand needs the register semantics of tprob.srand")
    if tt is Choice:
        return _rule(t)
    raise StuckError(f"cannot reduce {t!r}")


def _rule(redex: Term) -> tuple[dict[Term, Fraction], Fraction]:
    out = contract(redex)
    if isinstance(out, Term):
        return {out: Fraction(1)}, ZERO_P
    return _collect(out), ZERO_P


def _collect(pairs) -> dict[Term, Fraction]:
    acc: dict[Term, Fraction] = {}
    for u, w in pairs:
        acc[u] = acc.get(u, ZERO_P) + w
    return acc


def dist_step(d: Dist, rand_width: int = DEFAULT_STEP_WIDTH) -> Dist:
    """Lockstep reduction: values stay put, every other term takes one step."""
    return bind_integral(d, lambda t: dirac(t) if is_value(t) else step(t, rand_width))


# --------------------------------------------------------------------------
# Machine successors


MachineConfig = tuple[Term, "Stack | None"]


def successors(focus: Term, stack: Stack | None, width: int):
    """Children of a redex configuration as ``[(config, prob)]`` and the
    probability lost to ``rand`` truncation.  A deterministic rule yields a
    single child with probability ``None`` (meaning 1)."""
    if type(focus) is Const:
        if focus.name != "rand":
            raise StuckError("srand needs the register semantics of tprob.srand")
        outcomes, tail = machine.geometric(width)
        return [(refocus(u, stack), w) for u, w in outcomes], tail
    out = contract(focus)
    if type(out) is not tuple:
        return [(refocus(out, stack), None)], ZERO_P
    return [(refocus(u, stack), w) for u, w in out], ZERO_P


# --------------------------------------------------------------------------
# Evaluators


def evaluate(t: Term, budget: Budget, mode: Mode = "lockstep") -> EvalResult:
    if not t.closed:
        raise ValueError("evaluate expects a closed term")
    if mode == "lockstep":
        return _lockstep(t, budget)
    if mode == "worklist":
        return _worklist(t, budget)
    raise ValueError(f"unknown mode {mode!r}")


def _width_for(budget: Budget) -> Callable[[], int]:
    cache: list[int] = []

    def get() -> int:
        if not cache:
            cache.append(budget.width())
        return cache[0]

    return get


def _lockstep(t: Term, budget: Budget) -> EvalResult:
    width = _width_for(budget)
    values: dict[Term, Fraction] = {}
    per_depth: list[tuple[int, Fraction]] = []
    live: dict[MachineConfig, Fraction] = {}
    lost = ZERO_P
    avlen = ZERO_P
    contractions = 0

    focus, stack = refocus(t, None)
    if stack is None and is_value(focus):
        return EvalResult(Dist({focus: Fraction(1)}), ZERO_P, 0, ZERO_P, ((0, Fraction(1)),))
    live[(focus, stack)] = Fraction(1)
    depth = 0
    eps = budget.epsilon
    max_steps = budget.max_steps
    live_mass = Fraction(1)
    while live:
        if max_steps is not None and depth >= max_steps:
            break
        if eps > 0 and lost + live_mass <= eps:
            break
        depth += 1
        nxt: dict[MachineConfig, Fraction] = {}
        reached = ZERO_P
        lost_now = ZERO_P
        for (f, s), p in live.items():
            kids, tail = successors(f, s, width() if type(f) is Const else 0)
            contractions += 1
            if tail:
                lost_now += p * tail
            for (g, st), w in kids:
                q = p if w is None else p * w
                if st is None and g.vshape:
                    values[g] = values.get(g, ZERO_P) + q
                    reached += q
                else:
                    key = (g, st)
                    old = nxt.get(key)
                    nxt[key] = q if old is None else old + q
        if reached:
            per_depth.append((depth, reached))
            avlen += depth * reached
        live = nxt
        if lost_now:
            lost += lost_now
            live_mass -= lost_now
        if reached:
            live_mass -= reached
    residual = lost + live_mass
    return EvalResult(Dist(values, residual), residual, depth, avlen, tuple(per_depth),
                      contractions)


def _worklist(t: Term, budget: Budget) -> EvalResult:
    """Expand the heaviest pending configuration first.  Deterministic
    chains are followed in place while they stay the heaviest entry."""
    width = _width_for(budget)
    values: dict[Term, Fraction] = {}
    reached_at: dict[int, Fraction] = {}
    lost = ZERO_P
    contractions = 0
    eps = budget.epsilon
    max_steps = budget.max_steps

    focus, stack = refocus(t, None)
    if stack is None and is_value(focus):
        return EvalResult(Dist({focus: Fraction(1)}), ZERO_P, 0, ZERO_P, ((0, Fraction(1)),))
    heap: list = [(-1.0, 0, Fraction(1), 0, focus, stack)]
    counter = 1
    live_mass = Fraction(1)
    while heap:
        if max_steps is not None and contractions >= max_steps:
            break
        if eps > 0 and lost + live_mass <= eps:
            break
        negp, _, p, depth, f, s = heapq.heappop(heap)
        live_mass -= p
        while True:
            kids, tail = successors(f, s, width() if type(f) is Const else 0)
            contractions += 1
            depth += 1
            if tail:
                lost += p * tail
            if len(kids) == 1 and not tail:
                (g, st), _w = kids[0]
                if st is None and g.vshape:
                    values[g] = values.get(g, ZERO_P) + p
                    reached_at[depth] = reached_at.get(depth, ZERO_P) + p
                    break
                if (not heap or heap[0][0] > negp) and (max_steps is None or contractions < max_steps):
                    f, s = g, st
                    continue
                heapq.heappush(heap, (-float(p), counter, p, depth, g, st))
                counter += 1
                live_mass += p
                break
            for (g, st), w in kids:
                q = p * w
                if st is None and g.vshape:
                    values[g] = values.get(g, ZERO_P) + q
                    reached_at[depth] = reached_at.get(depth, ZERO_P) + q
                else:
                    heapq.heappush(heap, (-float(q), counter, q, depth, g, st))
                    counter += 1
                    live_mass += q
            break
    residual = lost + live_mass
    per_depth = tuple(sorted(reached_at.items()))
    avlen = sum((d * m for d, m in per_depth), ZERO_P)
    return EvalResult(Dist(values, residual), residual, contractions, avlen, per_depth,
                      contractions)


# --------------------------------------------------------------------------
# Derived quantities


def success(t: Term, budget: Budget, mode: Mode = "lockstep") -> tuple[Fraction, Fraction]:
    return evaluate(t, budget, mode).success_bounds


DIVERGENCE_THRESHOLD = Fraction(1, 16)


def diverging_hint(res: EvalResult) -> bool:
    """Heuristic: unresolved mass remains and the partial sums of the
    average length still grew by at least 1/16 over the second half of the
    observed depths."""
    if res.residual == 0 or not res.per_depth_mass:
        return False
    last = res.per_depth_mass[-1][0]
    half = last // 2
    late = sum((d * m for d, m in res.per_depth_mass if d > half), ZERO_P)
    return late >= DIVERGENCE_THRESHOLD


def av_length(t: Term, budget: Budget, mode: Mode = "lockstep") -> tuple[Fraction, bool]:
    res = evaluate(t, budget, mode)
    return res.avlength_lower, diverging_hint(res)


# --------------------------------------------------------------------------
# Sampling


class _Capped:
    def __repr__(self) -> str:
        return "CAPPED"


CAPPED = _Capped()


def sample(t: Term, seed: int | random.Random, cap: int = SAMPLE_CAP):
    """Run one trajectory; returns the final value or ``CAPPED``."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    focus, stack = refocus(t, None)
    steps = 0
    while stack is not None or not is_value(focus):
        if steps >= cap:
            return CAPPED
        steps += 1
        if type(focus) is Const:
            if focus.name != "rand":
                raise StuckError("srand needs the register semantics of tprob.srand")
            k = 0
            while rng.getrandbits(1):
                k += 1
            focus, stack = refocus(Num(k), stack)
            continue
        out = contract(focus)
        if not isinstance(out, Term):
            out = out[0][0] if rng.getrandbits(1) == 0 else out[1][0]
        focus, stack = refocus(out, stack)
    return focus


def sample_many(t: Term, seed: int, trials: int, cap: int = SAMPLE_CAP) -> Dist:
    """Empirical distribution; capped trajectories go to the residual."""
    rng = random.Random(seed)
    counts: dict[Term, int] = {}
    capped = 0
    for _ in range(trials):
        v = sample(t, rng, cap)
        if v is CAPPED:
            capped += 1
        else:
            counts[v] = counts.get(v, 0) + 1
    return Dist({v: Fraction(c, trials) for v, c in counts.items()}, Fraction(capped, trials))


# --------------------------------------------------------------------------
# Deterministic normal forms


class NotDeterministicError(RuntimeError):
    pass


def normal_form(t: Term, max_steps: int = 10**8, memo: bool = False) -> Term:
    """Normal form of a closed term whose reduction never branches.

    With ``memo`` the term is evaluated big-step and every application of a
    value to a value is cached, which turns the repeated identical calls
    made by lifted programs from exponential into polynomial work.  The
    result is the same; ``max_steps`` then bounds the contractions actually
    performed."""
    if memo:
        return _memo_normal_form(t, max_steps)
    focus, stack = refocus(t, None)
    steps = 0
    while stack is not None or not focus.vshape:
        if steps >= max_steps:
            raise RuntimeError(f"no normal form within {max_steps} steps")
        steps += 1
        if type(focus) is Const:
            raise NotDeterministicError(f"{focus.name} reached during deterministic evaluation")
        out = contract(focus)
        if type(out) is tuple:
            raise NotDeterministicError("choice reached during deterministic evaluation")
        focus, stack = refocus(out, stack)
    return focus


def _memo_normal_form(t: Term, max_steps: int) -> Term:
    cache: dict[tuple[Term, Term], Term] = {}
    steps = 0

    def ev(u: Term):
        # a generator: yields sub-terms to evaluate, receives their values
        nonlocal steps
        if u.vshape:
            return u
        tu = type(u)
        if tu is Pair:
            left = yield u.left
            right = yield u.right
            return Pair(left, right)
        if tu is not App:
            raise NotDeterministicError(f"{print_term(u)[:60]} reached during deterministic"
                                        " evaluation")
        arg = yield u.arg
        fn = yield u.fn
        key = (fn, arg)
        hit = cache.get(key)
        if hit is not None:
            return hit
        steps += 1
        if steps > max_steps:
            raise RuntimeError(f"no normal form within {max_steps} steps")
        redex = App(fn, arg)
        if redex.vshape:
            return redex
        out = contract(redex)
        if type(out) is tuple:
            raise NotDeterministicError("fixr reached during deterministic evaluation")
        value = yield out
        cache[key] = value
        return value

    stack = [ev(t)]
    sent: Term | None = None
    while True:
        try:
            sub = stack[-1].send(sent)
        except StopIteration as done:
            stack.pop()
            if not stack:
                return done.value
            sent = done.value
            continue
        stack.append(ev(sub))
        sent = None
