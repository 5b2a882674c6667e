import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from tprob.corpus import BRANCH, DOUBLEFLIP, PLUS_PROGRAMS
from tprob.dist import dirac, from_nats
from tprob.errors import FragmentError, ResourceError
from tprob.evaluation import Budget, evaluate, step
from tprob.multistep import exact_eval_plus
from tprob.syntax import App, Num, is_value, parse_term

from conftest import nat_terms

EXACT = Budget(max_steps=10**6)


def test_doubleflip():
    res = exact_eval_plus(DOUBLEFLIP.term)
    assert res.exact_dist == from_nats({0: F(1, 4), 1: F(1, 2), 2: F(1, 4)})
    assert res.exact_dist.residual == 0


def test_value_needs_no_step():
    res = exact_eval_plus(parse_term(r"\x:Nat. x"))
    assert res.exact_dist == dirac(parse_term(r"\x:Nat. x")) and res.expected_steps == 0


def _path_lengths(t):
    """Reduce ``t`` along every sequence of coin outcomes, choosing branches
    from an explicit list; returns {flips: (value, steps)}."""
    out = {}
    for flips in itertools.product((0, 1), repeat=4):
        u, steps, used = t, 0, 0
        while not is_value(u):
            d = step(u)
            items = list(d.support)
            if len(items) == 2:
                u = items[flips[used]]
                used += 1
            else:
                u = items[0]
            steps += 1
        out[flips[:used]] = (u, steps)
    return out


def test_expected_steps_against_enumeration():
    paths = _path_lengths(DOUBLEFLIP.term)
    expected = sum(F(1, 2 ** len(k)) * s for k, (_, s) in paths.items())
    res = exact_eval_plus(DOUBLEFLIP.term)
    assert res.expected_steps == expected
    lock = evaluate(DOUBLEFLIP.term, EXACT)
    assert lock.avlength_lower == expected


def test_confluence_of_branch_order():
    for t in (BRANCH.term, DOUBLEFLIP.term, App(PLUS_PROGRAMS[4].term, Num(2))):
        assert exact_eval_plus(t).exact_dist == exact_eval_plus(t, reverse=True).exact_dist


def test_fragment_and_cap():
    with pytest.raises(FragmentError):
        exact_eval_plus(parse_term("rand"))
    with pytest.raises(FragmentError):
        exact_eval_plus(parse_term("fixr <S, 0>"))
    with pytest.raises(ResourceError):
        exact_eval_plus(DOUBLEFLIP.term, node_cap=3)


@settings(max_examples=80, deadline=None)
@given(nat_terms(depth=3))
def test_oracle_equivalence(t):
    tree = exact_eval_plus(t)
    lock = evaluate(t, EXACT)
    assert lock.residual == 0
    assert tree.exact_dist == lock.value_dist
    assert tree.expected_steps == lock.avlength_lower
