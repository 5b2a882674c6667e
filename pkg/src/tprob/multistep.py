"""Exact evaluation of terms whose only randomness is ``(+)``.

Such terms have a finite execution tree, so exploring it depth first with
exact path probabilities yields the whole value distribution and the exact
expected number of reduction steps.  Each node is reduced with the
term-level :func:`tprob.evaluation.step`, independently of the machine used
by :func:`tprob.evaluation.evaluate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dist import ZERO_P, Dist
from .errors import ResourceError, require_fragment
from .evaluation import _step
from .syntax import Term, is_value

NODE_CAP = 10**7


@dataclass(frozen=True)
class TreeEval:
    exact_dist: Dist
    expected_steps: Fraction
    max_depth: int
    node_count: int


def exact_eval_plus(t: Term, node_cap: int = NODE_CAP, reverse: bool = False) -> TreeEval:
    """Explore the execution tree of ``t``.  ``reverse`` visits the branches
    of every probabilistic node in the opposite order."""
    require_fragment(t, {"rand", "fixr", "srand"}, "exact tree evaluation")
    if not t.closed:
        raise ValueError("exact tree evaluation expects a closed term")
    values: dict[Term, Fraction] = {}
    expected = ZERO_P
    max_depth = 0
    nodes = 0
    todo: list[tuple[Term, Fraction, int]] = [(t, Fraction(1), 0)]
    while todo:
        u, p, depth = todo.pop()
        nodes += 1
        if nodes > node_cap:
            raise ResourceError(f"execution tree exceeds {node_cap} nodes")
        if is_value(u):
            values[u] = values.get(u, ZERO_P) + p
            expected += depth * p
            max_depth = max(max_depth, depth)
            continue
        kids, _ = _step(u, 0)
        items = list(kids.items())
        if not reverse:
            items.reverse()  # pop order then follows the left branch first
        for v, w in items:
            todo.append((v, p * w, depth + 1))
    return TreeEval(Dist(values), expected, max_depth, nodes)
