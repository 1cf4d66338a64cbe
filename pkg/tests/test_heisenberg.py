from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vhl.errors import ExoticIntegerExponent, IndexOutOfRange, NotInvariant
from vhl.heisenberg import (Exotic, HElement, Standard, Twisted, act_p, act_q, bracket_check,
                            check_condition_C, decompose, h_module_new, truncated_standard)

F = Fraction


def test_generators():
    assert h_module_new(Standard((0,))).generator == HElement(Standard((0,)), {(0,): 1})
    ex = Exotic({1: "1/2"}, (0,))
    assert h_module_new(ex).generator.terms == {(F(1, 2),): 1}
    with pytest.raises(ExoticIntegerExponent):
        Exotic({1: 3}, (0,))


def test_actions():
    s3 = Standard((3,))
    one3 = HElement(s3, {(0,): 1})
    assert act_p(1, one3) == one3.scale(3)
    ex = Exotic({1: "1/2"}, (0,))
    assert act_p(1, HElement(ex, {(F(1, 2),): 1})) == HElement(ex, {(F(-1, 2),): F(1, 2)})
    assert act_q(1, HElement(ex, {(F(-1, 2),): 1})) == HElement(ex, {(F(1, 2),): 1})
    s0 = Standard((0,))
    assert act_p(1, HElement(s0, {(2,): 1})) == HElement(s0, {(1,): 2})
    assert act_q(1, HElement(s0, {(0,): 1})) == HElement(s0, {(1,): 1})
    tw = Twisted((0,), frozenset())
    assert act_q(1, HElement(tw, {(1,): 1})) == HElement(tw, {(0,): -1})
    with pytest.raises(IndexOutOfRange):
        act_p(2, one3)


def test_bracket_examples():
    s = Standard((0, 0))
    assert bracket_check(1, 1, HElement(s, {(3, 0): 1})).passed
    r = bracket_check(1, 2, HElement(s, {(2, 1): 1}))
    assert r.passed and r.lhs == "0"
    ex = Exotic({1: "1/2"}, (0,))
    assert bracket_check(1, 1, HElement(ex, {(F(1, 2),): 1})).passed


def test_decompose_examples():
    groups = decompose(truncated_standard(Standard((0,)), 2))
    assert [(g.weight, g.multiplicity) for g in groups] == [((0,), 1)]
    assert groups[0].highest[0] == HElement(Standard((0,)), {(0,): 1})
    vecs = truncated_standard(Standard((2,)), 1) + truncated_standard(Standard((5,)), 1)
    groups = decompose(vecs)
    assert [(g.weight, g.multiplicity) for g in groups] == [((2,), 1), ((5,), 1)]
    assert groups[1].highest[0] == HElement(Standard((5,)), {(0,): 1})
    groups = decompose(truncated_standard(Standard((2,)), 2))
    assert [(g.weight, g.multiplicity, g.block_dim) for g in groups] == [((2,), 1, 3)]
    with pytest.raises(NotInvariant):
        decompose([HElement(Standard((0,)), {(2,): 1})])


def test_condition_c_examples():
    m = h_module_new(Exotic({1: "1/2"}, (0,)))
    recs = check_condition_C(m, [m.state(("1/2",)), m.state(("-1/2",))])
    assert all(r.passed for r in recs)
    m3 = h_module_new(Exotic({1: "1/3"}, (0,)))
    recs = check_condition_C(m3, [m3.state((F(1, 3) + n,)) for n in range(-2, 3)])
    assert len(recs) == 15 and all(r.passed for r in recs)
    bad = h_module_new(Exotic({1: 0}, (0,), validate=False))
    recs = check_condition_C(bad, [bad.state((0,))])
    assert [r.name for r in recs if not r.passed] == ["p-nonzero"]


# properties

rational = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def realization_and_vector(draw):
    size = draw(st.integers(1, 2))
    kind = draw(st.sampled_from(["standard", "twisted", "exotic"]))
    lam = tuple(draw(rational) for _ in range(size))
    if kind == "standard":
        real = Standard(lam)
    elif kind == "twisted":
        real = Twisted(lam, frozenset(i for i in range(1, size + 1) if draw(st.booleans())))
    else:
        mu = draw(rational.filter(lambda x: x.denominator != 1))
        real = Exotic({1: mu}, lam)
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        exps = []
        for i in range(size):
            e = draw(st.integers(0, 3))
            exps.append(real.mu_at(i) + draw(st.integers(-2, 2)) if real.shifted(i) else e)
        terms[tuple(exps)] = draw(st.integers(-3, 3).filter(bool))
    return real, HElement(real, terms)


@given(realization_and_vector())
def test_heisenberg_relations(data):
    real, v = data
    n = real.size
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert act_p(i, act_p(j, v)) == act_p(j, act_p(i, v))
            assert act_q(i, act_q(j, v)) == act_q(j, act_q(i, v))
            comm = act_p(i, act_q(j, v)) - act_q(j, act_p(i, v))
            assert comm == (v if i == j else HElement(real, {}))


@given(st.lists(rational, min_size=1, max_size=2), st.integers(0, 3), st.integers(0, 3))
def test_twisted_is_conjugated_standard(lam, a, b):
    lam = tuple(lam)
    size = len(lam)
    std, tw = Standard(lam), Twisted(lam, frozenset())
    exps = (a, b)[:size]
    vs, vt = HElement(std, {exps: 1}), HElement(tw, {exps: 1})
    for i in range(1, size + 1):
        assert act_p(i, vt).terms == act_q(i, vs).terms
        assert act_q(i, vt).terms == act_p(i, vs).scale(-1).terms


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=1, max_size=3, unique=True),
       st.integers(0, 2))
def test_decompose_recovers_weights(lams, degree):
    vecs = [v for lam in lams for v in truncated_standard(Standard((lam,)), degree)]
    groups = decompose(vecs)
    assert sorted(g.weight[0] for g in groups) == sorted(lams)
    assert all(g.multiplicity == 1 and g.block_dim == degree + 1 for g in groups)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=5).filter(lambda x: x.denominator != 1),
       st.integers(-4, 4))
def test_exotic_actions_injective(mu, shift):
    real = Exotic({1: mu}, (0,))
    v = HElement(real, {(mu + shift,): 1})
    assert not act_p(1, v).is_zero() and not act_q(1, v).is_zero()
