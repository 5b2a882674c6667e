from fractions import Fraction as F

import pytest

from tprob.corpus import EVENS_RAND, RAND_PROGRAMS
from tprob.dist import tv_distance
from tprob.errors import FragmentError
from tprob.evaluation import Budget, evaluate
from tprob.srand import (Config, eval_srand, euler_sine_bound, star, success_lower_bound,
                         success_product_bound, unstar)
from tprob.syntax import RAND, SRAND, Num, constants_in, parse_term

FULL = Budget(max_steps=10**7, epsilon=F(1, 2**40))


def test_star():
    assert star(RAND) == SRAND
    assert star(Num(0)) == Num(0)
    s = star(EVENS_RAND.term)
    assert "rand" not in constants_in(s) and "srand" in constants_in(s)
    assert unstar(s) == EVENS_RAND.term
    with pytest.raises(FragmentError):
        star(parse_term("fixr <S, 0>"))


def test_one_srand_step():
    res = eval_srand(Config(SRAND, 2, 1), Budget(max_steps=1))
    assert dict(res.values.weights) == {Config(Num(0), 3, 1): F(1, 2),
                                        Config(Num(1), 3, 1): F(1, 4)}
    assert res.failure == F(1, 4)


def test_value_config_is_final():
    res = eval_srand(Config(Num(3), 5, 2), FULL)
    assert dict(res.values.weights) == {Config(Num(3), 5, 2): 1} and res.failure == 0


def test_success_of_evens_example():
    lo, _ = eval_srand(Config(star(EVENS_RAND.term), 4, 4), FULL).success_bounds
    assert lo >= F(3, 4)


def test_registers_grow_by_n_per_draw():
    t = star(parse_term(r"rec <rand, \x:Nat. \y:Nat. S y, rand>"))
    res = eval_srand(Config(t, 3, 2), FULL)
    assert {c.m for c in res.values.weights} == {7}


def test_product_bounds():
    assert success_product_bound(4, 4, 1) == F(15, 16)
    assert success_product_bound(4, 4, 8) >= F(3, 4)
    seq = [success_product_bound(3, 2, k) for k in range(1, 8)]
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    # the certified bound sits below every partial product
    assert success_lower_bound(4, 4, 3) <= success_product_bound(4, 4, 30)
    assert success_lower_bound(4, 4, 8) >= F(3, 4)
    assert 0.9 < euler_sine_bound(8) < 1


@pytest.mark.parametrize("prog", RAND_PROGRAMS, ids=lambda p: p.name)
def test_domination_and_uniform_approximation(prog):
    src = evaluate(prog.term, Budget(epsilon=F(1, 2**20)))
    for n in (4, 8):
        res = eval_srand(Config(star(prog.term), n, n), FULL)
        erased = res.erased()
        for v, p in erased.items():
            assert p <= src.value_dist[v] + src.residual
        assert tv_distance(src.value_dist, erased) <= F(1, n) + src.residual + res.residual
