from fractions import Fraction as F

import pytest

from tprob.corpus import BRANCH, DOUBLEFLIP, EXPO, GEO_FIX, ENCODING_CORPUS
from tprob.dist import Dist, dirac, from_nats
from tprob.evaluation import (Budget, NotDeterministicError, av_length, dist_step, evaluate,
                              normal_form, sample, sample_many, step, success)
from tprob.machine import adaptive_width
from tprob.syntax import App, Num, parse_term

EXACT = Budget(max_steps=10**6)


def test_step_examples():
    assert step(BRANCH.term) == Dist({parse_term("3 (+) 4"): F(1, 2), Num(2): F(1, 2)})
    assert step(GEO_FIX.term) == Dist({parse_term("S (fixr <S, 0>)"): F(1, 2), Num(0): F(1, 2)})
    assert step(parse_term(r"rec <5, \x:Nat. \y:Nat. y, 0>")) == dirac(Num(5))


def test_step_reduces_argument_first():
    t = parse_term(r"(\x:Nat. 0 (+) 1) (2 (+) 3)")
    assert set(step(t).support) == {parse_term(r"(\x:Nat. 0 (+) 1) 2"),
                                    parse_term(r"(\x:Nat. 0 (+) 1) 3")}


def test_step_of_rand_truncates_into_residual():
    d = step(parse_term("rand"), rand_width=3)
    assert d == from_nats({0: F(1, 2), 1: F(1, 4), 2: F(1, 8)}, F(1, 8))


def test_dist_step_twice_on_fixr():
    d = dist_step(dist_step(dirac(GEO_FIX.term)))
    assert d == Dist({parse_term("S (S (fixr <S, 0>))"): F(1, 4), Num(1): F(1, 4),
                      Num(0): F(1, 2)})


def test_dist_step_keeps_values_and_mass():
    assert dist_step(dirac(Num(3))) == dirac(Num(3))
    d = dist_step(dist_step(dirac(parse_term("rand (+) 1")), 5), 5)
    assert d.norm() + d.residual == 1


def test_evaluate_branch():
    res = evaluate(BRANCH.term, EXACT)
    assert res.value_dist == from_nats({3: F(1, 4), 4: F(1, 4), 2: F(1, 2)})
    assert res.residual == 0 and res.success_bounds == (1, 1)


def test_evaluate_geometric():
    res = evaluate(GEO_FIX.term, Budget(epsilon=F(1, 2**20)))
    for n in range(19):
        assert res.value_dist[Num(n)] == F(1, 2 ** (n + 1))
    assert res.residual <= F(1, 2**20)
    assert res.value_dist.norm() + res.residual == 1


def test_evaluate_expo():
    for n in range(4):
        res = evaluate(App(EXPO.term, Num(n)), EXACT)
        assert res.value_dist == dirac(Num(2 ** (n + 1)))


def test_success_and_avlength():
    assert success(DOUBLEFLIP.term, EXACT) == (1, 1)
    assert av_length(Num(0), EXACT) == (0, False)
    lo, hint = av_length(App(EXPO.term, parse_term("rand")), Budget(max_steps=10**5, rand_width=6))
    assert lo > 5


def test_avlength_is_the_series_of_first_hitting_depths():
    res = evaluate(DOUBLEFLIP.term, EXACT)
    assert res.avlength_lower == sum(d * m for d, m in res.per_depth_mass)
    assert sum(m for _, m in res.per_depth_mass) == 1


def test_adaptive_width():
    assert adaptive_width(F(1, 2**16)) == 17
    res = evaluate(parse_term("rand"), Budget(epsilon=F(1, 2**10)))
    assert res.residual <= F(1, 2**10)


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget()
    with pytest.raises(ValueError):
        Budget(max_steps=-1)
    with pytest.raises(ValueError):
        Budget(max_steps=1, epsilon=F(2))


@pytest.mark.parametrize("prog", ENCODING_CORPUS, ids=lambda p: p.name)
def test_lockstep_and_worklist_agree_within_residuals(prog):
    b = Budget(max_steps=200_000, epsilon=F(1, 2**12))
    a, w = evaluate(prog.term, b, "lockstep"), evaluate(prog.term, b, "worklist")
    for v in set(a.value_dist.support) | set(w.value_dist.support):
        gap = abs(a.value_dist[v] - w.value_dist[v])
        assert gap <= max(a.residual, w.residual)
    assert w.value_dist.norm() + w.residual == 1


def test_sampler():
    assert sample(Num(0), 3) == Num(0)
    emp = sample_many(GEO_FIX.term, seed=2024, trials=20_000)
    mean = sum(t.value * p for t, p in emp.items())
    assert abs(mean - 1) < 0.05
    assert sample_many(BRANCH.term, 1, 500) == sample_many(BRANCH.term, 1, 500)


def test_sampler_cap_goes_to_residual():
    expo_big = App(EXPO.term, Num(12))
    d = sample_many(expo_big, seed=0, trials=3, cap=1000)
    assert d.residual == 1


def test_normal_form():
    t = App(EXPO.term, Num(5))
    assert normal_form(t) == Num(64)
    assert normal_form(t, memo=True) == Num(64)
    with pytest.raises(NotDeterministicError):
        normal_form(BRANCH.term)
    with pytest.raises(NotDeterministicError):
        normal_form(parse_term("S rand"), memo=True)
