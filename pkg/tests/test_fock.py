from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from vhl import fock
from vhl.fock import (colored_partitions, conformal_vector, fock_space, graded_dim, h_mode, m1_mode, monomial,
                      monomials_of_weight, virasoro_mode)
from vhl.lattice import QuadraticSpace

F = Fraction
A1 = QuadraticSpace([[2]])
HYP = QuadraticSpace([[0, 1], [1, 0]])
E2 = QuadraticSpace([[1, 0], [0, 3]])
VAC = {(): 1}


def elem(*factors, coef=1):
    return {monomial(factors): coef}


def test_h_mode_examples():
    a = (1,)
    assert h_mode(A1, a, 1, elem((1, 1))) == {(): 2}
    assert h_mode(A1, a, 0, elem((1, 1), (1, 3))) == {}
    assert h_mode(A1, a, 2, elem((1, 1), (1, 1))) == {}


def test_m1_mode_examples():
    u = elem((1, 1))
    assert m1_mode(A1, u, 1, u) == {(): 2}
    assert m1_mode(A1, u, 0, u) == {}
    assert m1_mode(A1, u, -1, u) == elem((1, 1), (1, 1))


def test_conformal_vector_examples():
    assert conformal_vector(A1) == elem((1, 1), (1, 1), coef=F(1, 4))
    assert conformal_vector(HYP) == elem((1, 1), (2, 1))
    m1 = fock_space(A1)
    assert m1.mode(conformal_vector(A1), 0, VAC) == {}


def test_virasoro_examples():
    v = elem((1, 1))
    assert virasoro_mode(A1, 0, v) == v
    assert virasoro_mode(A1, 0, VAC) == {}
    for space in (A1, HYP, E2):
        assert virasoro_mode(space, 2, conformal_vector(space)) == {(): F(space.dim, 2)}


def test_graded_dim_examples():
    assert graded_dim(A1, 6) == [1, 1, 2, 3, 5, 7, 11]
    assert graded_dim(HYP, 3) == [1, 2, 5, 10]
    assert graded_dim(QuadraticSpace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 0) == [1]


def test_graded_dim_oracles():
    q = sympy.Symbol("q")
    for d in (1, 2, 3):
        # truncated geometric series per mode, multiplied out and cut at q^8
        prod = sympy.Poly(1, q)
        for n in range(1, 9):
            geo = sympy.Poly(sum(q ** (n * j) for j in range(8 // n + 1)), q)
            for _ in range(d):
                prod = sympy.Poly(sum(c * q ** e for (e,), c in (prod * geo).terms() if e <= 8), q)
        want = [int(prod.coeff_monomial(q ** k)) for k in range(9)]
        assert colored_partitions(d, 8) == want
        assert [len(monomials_of_weight(d, k)) for k in range(9)] == want


# properties

SPACES = [A1, HYP, E2]
space_idx = st.integers(0, len(SPACES) - 1)


@st.composite
def fock_element(draw, dim, max_weight=5):
    out = {}
    for _ in range(draw(st.integers(1, 3))):
        w = draw(st.integers(0, max_weight))
        keys = monomials_of_weight(dim, w)
        key = keys[draw(st.integers(0, len(keys) - 1))]
        out[key] = out.get(key, 0) + draw(st.integers(-3, 3).filter(bool))
    return {k: c for k, c in out.items() if c}


def hvec(dim):
    return st.tuples(*[st.fractions(min_value=-2, max_value=2, max_denominator=2)] * dim)


def sympy_oracle(space, h, n, v):
    """h(n) as multiplication / differentiation on polynomials in x_{k,m}."""
    xs = {}

    def x(k, m):
        return xs.setdefault((k, m), sympy.Symbol(f"x_{k}_{m}"))

    def to_poly(e):
        return sum((sympy.Rational(F(c).numerator, F(c).denominator)
                    * sympy.prod([x(k, m) ** p for m, k, p in key]) for key, c in e.items()), sympy.Integer(0))

    p = to_poly(v)
    d = space.dim
    if n < 0:
        res = sum(sympy.Rational(h[k].numerator, h[k].denominator) * x(k, -n) for k in range(d)) * p
    elif n == 0:
        res = sympy.Integer(0)
    else:
        pairings = space.lower(h)
        res = sum(n * sympy.Rational(pairings[k].numerator, pairings[k].denominator) * sympy.diff(p, x(k, n))
                  for k in range(d))
    return sympy.expand(res - to_poly(h_mode(space, h, n, v))) == 0


@given(st.data(), space_idx, st.integers(-4, 4))
def test_h_mode_matches_polynomial_oracle(data, idx, n):
    space = SPACES[idx]
    v = data.draw(fock_element(space.dim, 4))
    assert sympy_oracle(space, data.draw(hvec(space.dim)), n, v)


@given(st.data(), space_idx, st.integers(-4, 4), st.integers(-4, 4))
def test_heisenberg_bracket(data, idx, m, n):
    space = SPACES[idx]
    h, g = data.draw(hvec(space.dim)), data.draw(hvec(space.dim))
    v = data.draw(fock_element(space.dim))
    lhs = fock.combine((1, h_mode(space, h, m, h_mode(space, g, n, v))),
                       (-1, h_mode(space, g, n, h_mode(space, h, m, v))))
    want = fock.scale(v, m * space.pair(h, g)) if m + n == 0 else {}
    assert lhs == want


@given(st.data(), space_idx)
def test_truncation(data, idx):
    space = SPACES[idx]
    u = data.draw(fock_element(space.dim, 3))
    v = data.draw(fock_element(space.dim, 3))
    wt = lambda e: max((fock.key_weight(k) for k in e), default=0)
    top = wt(u) + wt(v) + 2
    for n in range(wt(u) + wt(v), top + 1):
        assert m1_mode(space, u, n, v) == {}
    # the implementation's own cutoff is also safe
    bound = fock_space(space).mode_upper(u, v)
    for n in range(bound, max(bound, top) + 1):
        assert m1_mode(space, u, n, v) == {}


@given(st.data(), space_idx, st.integers(-2, 2), st.integers(-2, 2))
def test_virasoro_relations(data, idx, m, n):
    space = SPACES[idx]
    v = data.draw(fock_element(space.dim, 4))
    L = lambda k, x: virasoro_mode(space, k, x)
    lhs = fock.combine((1, L(m, L(n, v))), (-1, L(n, L(m, v))))
    rhs = fock.scale(L(m + n, v), m - n)
    if m + n == 0:
        fock.add_into(rhs, v, F((m ** 3 - m) * space.dim, 12))
    assert lhs == rhs


@given(st.data(), space_idx, st.integers(-3, 3))
def test_translation(data, idx, n):
    space = SPACES[idx]
    u = data.draw(fock_element(space.dim, 3))
    v = data.draw(fock_element(space.dim, 3))
    du = virasoro_mode(space, -1, u)
    assert m1_mode(space, du, n, v) == fock.scale(m1_mode(space, u, n - 1, v), -n)


def test_conformal_vector_basis_invariant():
    for space, other in ((A1, [[3]]), (HYP, [[1, 1], [1, -1]]), (E2, [[1, 2], [0, 1]])):
        assert conformal_vector(space) == conformal_vector(space, other)
