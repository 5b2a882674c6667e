import json
from fractions import Fraction as F

import pytest

from tprob.dist import (Dist, bind_integral, dirac, format_prob, from_nats, is_dyadic, norm,
                        parse_prob, supp_R, supp_V, tv_distance)
from tprob.syntax import Num, parse_term


def geometric(width: int) -> Dist:
    return from_nats({k: F(1, 2 ** (k + 1)) for k in range(width)}, F(1, 2 ** width))


def test_dirac():
    d = dirac(Num(0))
    assert d.support == {Num(0): 1} and d.residual == 0
    assert norm(d) == 1


def test_dirac_is_unit_of_bind():
    t = parse_term("0 (+) 1")
    assert bind_integral(dirac(t), dirac) == dirac(t)
    k = lambda u: from_nats({0: F(1, 3), 2: F(2, 3)})  # noqa: E731
    assert bind_integral(dirac(Num(5)), k) == k(Num(5))


def test_bind_of_geometric_is_geometric():
    # n goes to n+1 or to 0 with probability 1/2 each: the geometric law is a fixpoint
    def k(t):
        return from_nats({t.value + 1: F(1, 2), 0: F(1, 2)})

    g = geometric(30)
    out = bind_integral(g, k)
    # the truncated tail is not bound, so 0 only misses half of it
    assert out[Num(0)] == (1 - g.residual) / 2
    for n in range(1, 30):
        assert out[Num(n)] == F(1, 2 ** (n + 1))
    assert out.residual == g.residual
    assert out[Num(30)] == F(1, 2 ** 31)


def test_bind_associativity_three_points():
    d = from_nats({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)})
    k1 = lambda t: from_nats({t.value: F(1, 2), t.value + 1: F(1, 3)}, F(1, 6))  # noqa: E731
    k2 = lambda t: from_nats({2 * t.value: F(3, 4), 0: F(1, 4)})  # noqa: E731
    left = bind_integral(bind_integral(d, k1), k2)
    right = bind_integral(d, lambda t: bind_integral(k1(t), k2))
    assert left == right
    # brute-force expansion
    direct: dict = {}
    for a, pa in d.items():
        for b, pb in k1(a).items():
            for c, pc in k2(b).items():
                direct[c] = direct.get(c, 0) + pa * pb * pc
    assert left.support == direct
    assert left.residual == F(1, 6)


def test_bind_mass_conservation():
    d = from_nats({0: F(1, 2), 1: F(1, 4)}, F(1, 4))
    k = lambda t: from_nats({t.value: F(1, 2)}, F(1, 8))  # noqa: E731
    out = bind_integral(d, k)
    expected = sum(p * (norm(k(t)) + k(t).residual) for t, p in d.items()) + d.residual
    assert norm(out) + out.residual == expected


def test_norm_and_tv():
    branch = from_nats({3: F(1, 4), 4: F(1, 4), 2: F(1, 2)})
    assert norm(branch) == 1
    assert tv_distance(branch, branch) == 0
    assert tv_distance(from_nats({0: F(1)}), from_nats({0: F(1, 2), 1: F(1, 2)})) == F(1, 2)
    # residual counts as discrepancy
    assert tv_distance(from_nats({0: F(1, 2)}, F(1, 2)), from_nats({0: F(1, 2)}, F(1, 2))) == F(1, 2)


def test_supports():
    d = Dist({Num(1): F(1, 2), parse_term("0 (+) 1"): F(1, 2)})
    assert supp_V(d) == {Num(1)}
    assert supp_R(d) == {parse_term("0 (+) 1")}


def test_invariants_enforced():
    assert Num(0) not in Dist({Num(0): F(0), Num(1): F(1)}).support
    with pytest.raises(ValueError):
        Dist({}, F(-1))


def test_probability_text():
    assert parse_prob("2^-16") == F(1, 65536)
    assert parse_prob("3/8") == F(3, 8)
    assert parse_prob("0.25") == F(1, 4)
    assert format_prob(F(1, 4)) == "1/4"
    assert format_prob(F(0)) == "0/1"


def test_json_rendering_is_sorted_and_exact():
    d = from_nats({3: F(1, 4), 4: F(1, 4), 2: F(1, 2)})
    doc = json.loads(d.dumps())
    assert doc == {"support": [{"term": "2", "nat": 2, "prob": "1/2"},
                               {"term": "3", "nat": 3, "prob": "1/4"},
                               {"term": "4", "nat": 4, "prob": "1/4"}],
                   "residual": "0/1"}


def test_dyadic():
    assert is_dyadic(F(3, 8)) and is_dyadic(F(1)) and not is_dyadic(F(1, 3))
