import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import a1_lattice, a2_lattice, hyperbolic_lattice
from vhl import fock
from vhl.axioms import (SuiteConfig, check_commutator, check_iterate, check_module_hcommutator,
                        check_vacuum_creation, check_virasoro, commutator_sides, gbinom, iterate_sides,
                        run_suite, virasoro_sides)
from vhl.latticeva import ModuleSpec, algebra, element, module_new, sector_vectors, vacuum

F = Fraction


def test_gbinom():
    assert [gbinom(-1, i) for i in range(4)] == [1, -1, 1, -1]
    assert gbinom(5, 2) == 10 and gbinom(2, 3) == 0 and gbinom(3, -1) == 0


def test_commutator_examples(a1, hyp):
    V = algebra(a1)
    h = element(V, (0,), [(1, 1)])
    lhs, rhs = commutator_sides(V, h, h, vacuum(a1), 1, -1)
    assert lhs == rhs == fock.scale(vacuum(a1), 2)
    rec = check_commutator(V, element(V, (1,)), element(V, (-1,)), vacuum(a1), 0, 0)
    assert rec.passed
    W = algebra(hyp)
    a, b = element(W, (1,)), element(W, (-1,))
    for m in range(-2, 3):
        for n in range(-2, 3):
            lhs, rhs = commutator_sides(W, a, b, sector_vectors(hyp, 1)[1], m, n)
            assert lhs == rhs == {}


def test_iterate_examples(a1):
    V = algebra(a1)
    h = element(V, (0,), [(1, 1)])
    c = element(V, (1,), [(1, 1)])
    for m in range(0, 3):
        lhs, rhs = iterate_sides(V, h, vacuum(a1), c, m, -1)
        assert lhs == rhs == {}
    ea = element(V, (1,))
    for n in range(-3, 3):
        lhs, rhs = iterate_sides(V, ea, ea, c, -3, n)
        assert lhs == rhs == V.act(element(V, (2,)), n, c)
    rng = random.Random(5)
    vs = sector_vectors(a1, 3)
    for _ in range(20):
        a, b, cc = (rng.choice(vs) for _ in range(3))
        assert check_iterate(V, a, b, cc, rng.randint(-2, 2), rng.randint(-2, 2)).passed


def test_vacuum_creation_examples(a1):
    V = algebra(a1)
    for a in (vacuum(a1), element(V, (1,)), element(V, (1,), [(1, 1)])):
        assert check_vacuum_creation(a1, a).passed


def test_virasoro_examples(a1, hyp):
    for lat in (a1, hyp):
        V = algebra(lat)
        vac = vacuum(lat)
        assert virasoro_sides(V, 1, -1, vac) == ({}, {})
        assert virasoro_sides(V, 0, 0, vac) == ({}, {})
        lhs, rhs = virasoro_sides(V, 2, -2, vac)
        assert lhs == rhs == fock.scale(vac, F(lat.space.dim, 2))


def test_hcommutator_examples(a1, hyp, a1_half):
    g = element(a1_half, (0,))
    assert check_module_hcommutator(a1_half, (1,), (1,), 0, -2, g).passed
    assert check_module_hcommutator(a1_half, (1,), (1,), 1, -2, g).passed
    W = algebra(hyp)
    w = sector_vectors(hyp, 1)[2]
    for m in range(-2, 3):
        for n in range(-2, 3):
            rec = check_module_hcommutator(W, (1, 0), (1,), m, n, w)
            assert rec.passed and rec.lhs == "0"


def test_run_suite_examples(a1):
    rep = run_suite(SuiteConfig(a1, [module_new(a1, ModuleSpec(("1/2",)))], max_weight=2, mode_window=2,
                                samples=5))
    assert rep.ok and rep.passed > 0
    bad = a1.with_cocycle_overrides({((1,), (1,)): -1})
    rep = run_suite(SuiteConfig(bad, samples=3), parts=("cocycle",))
    assert not rep.ok and rep.summary()["by_check"]["cocycle"]["fail"] > 0
    assert run_suite(SuiteConfig(a1, samples=0)).records == []
    assert run_suite(SuiteConfig(a1, samples=0)).ok


def test_report_deterministic(a2):
    cfg = SuiteConfig(a2, max_weight=2, mode_window=1, samples=4, seed=11)
    assert run_suite(cfg).text() == run_suite(cfg).text()


# seeded Jacobi samples per acceptance case

CASES = {
    "A1": (a1_lattice, None),
    "A2": (a2_lattice, None),
    "hyperbolic": (hyperbolic_lattice, None),
    "A1 lambda=1/2": (a1_lattice, ModuleSpec(("1/2",))),
    "hyperbolic exotic": (hyperbolic_lattice, ModuleSpec((0, 0), (((1, 1), "1/2"),))),
}


@settings(max_examples=25)
@given(st.sampled_from(sorted(CASES)), st.randoms(use_true_random=False), st.integers(-3, 3), st.integers(-3, 3))
def test_jacobi_samples(case, rng, m, n):
    make, spec = CASES[case]
    lat = make()
    M = algebra(lat) if spec is None else module_new(lat, spec)
    vs = sector_vectors(lat, 3)
    cs = sector_vectors(lat, 3, module=M)
    a, b, c = rng.choice(vs), rng.choice(vs), rng.choice(cs)
    assert check_commutator(M, a, b, c, m, n).passed
    assert check_iterate(M, a, b, c, m, n).passed


@given(st.sampled_from([0, 1, 2]), st.randoms(use_true_random=False), st.integers(-2, 2), st.integers(-2, 2))
def test_virasoro_samples(idx, rng, m, n):
    lat = [a1_lattice, a2_lattice, hyperbolic_lattice][idx]()
    v = rng.choice(sector_vectors(lat, 4))
    assert all(r.passed for r in check_virasoro(algebra(lat), m, n, [v]))
