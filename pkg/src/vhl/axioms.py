"""Exact verification harness for the vertex-algebra and module axioms.

Every check returns a :class:`~vhl.records.CheckRecord`; sides are compared
as exact rational elements and rendered in canonical text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import fock, textio
from .fock import add_into, scale
from .lattice import Lattice, verify_epsilon_axioms
from .latticeva import LatticeModule, algebra, sector_vectors
from .records import CheckRecord

EXHAUSTIVE_LIMIT = 500


def gbinom(m: int, i: int) -> int:
    """C(m, i) for any integer m, via the falling factorial."""
    if i < 0:
        return 0
    num = 1
    for t in range(i):
        num *= m - t
    den = 1
    for t in range(2, i + 1):
        den *= t
    return num // den


def _diff(x: dict, y: dict) -> dict:
    return add_into(dict(x), y, -1)


def _rec(name, inputs, lhs, rhs, module) -> CheckRecord:
    return CheckRecord(name, inputs, lambda: textio.format_element(lhs, module),
                       lambda: textio.format_element(rhs, module), lhs == rhs)


def commutator_sides(M: LatticeModule, a, b, c, m: int, n: int):
    V = algebra(M.lat)
    lhs = _diff(M.act(a, m, M.act(b, n, c)), M.act(b, n, M.act(a, m, c)))
    rhs: dict = {}
    top = V.mode_upper(a, b)
    stop = min(top, m + 1) if m >= 0 else top
    for i in range(max(stop, 0)):
        ab = V.act(a, i, b)
        if ab:
            add_into(rhs, M.act(ab, m + n - i, c), gbinom(m, i))
    return lhs, rhs


def iterate_sides(M: LatticeModule, a, b, c, m: int, n: int):
    V = algebra(M.lat)
    lhs = M.act(V.act(a, m, b), n, c)
    rhs: dict = {}
    bc_top = M.mode_upper(b, c) - n
    ac_top = M.mode_upper(a, c)
    stop = max(bc_top, ac_top, 0)
    if m >= 0:
        stop = min(stop, m + 1)
    sign_m = -1 if m % 2 else 1
    for i in range(stop):
        coef = gbinom(m, i) * (-1 if i % 2 else 1)
        if not coef:
            continue
        if i < bc_top:
            bc = M.act(b, n + i, c)
            if bc:
                add_into(rhs, M.act(a, m - i, bc), coef)
        if i < ac_top:
            ac = M.act(a, i, c)
            if ac:
                add_into(rhs, M.act(b, m + n - i, ac), -sign_m * coef)
    return lhs, rhs


def _inputs(M, a, b, c, m, n) -> str:
    f = lambda x: textio.format_element(x, M)
    g = lambda x: textio.format_element(x, algebra(M.lat))
    return f"a={g(a)} b={g(b)} c={f(c)} m={m} n={n}"


def check_commutator(M: LatticeModule, a, b, c, m: int, n: int) -> CheckRecord:
    lhs, rhs = commutator_sides(M, a, b, c, m, n)
    return _rec("commutator", lambda: _inputs(M, a, b, c, m, n), lhs, rhs, M)


def check_iterate(M: LatticeModule, a, b, c, m: int, n: int) -> CheckRecord:
    lhs, rhs = iterate_sides(M, a, b, c, m, n)
    return _rec("iterate", lambda: _inputs(M, a, b, c, m, n), lhs, rhs, M)


def check_vacuum_creation(lat: Lattice, a: dict, bound: int = 4) -> CheckRecord:
    V = algebra(lat)
    vac = V.vacuum
    lhs = {f"n={n}": V.act(a, n, vac) for n in range(0, bound + 1)}
    lhs["n=-1"] = V.act(a, -1, vac)
    rhs = {f"n={n}": {} for n in range(0, bound + 1)}
    rhs["n=-1"] = a
    fmt = lambda d: "; ".join(f"{k}: {textio.format_element(v, V)}" for k, v in d.items())
    return CheckRecord("vacuum-creation", f"a={textio.format_element(a, V)}", fmt(lhs), fmt(rhs), lhs == rhs)


def virasoro_sides(M: LatticeModule, m: int, n: int, v: dict):
    d = M.space.dim
    L = lambda k, x: virasoro(M, k, x)
    lhs = _diff(L(m, L(n, v)), L(n, L(m, v)))
    rhs = scale(L(m + n, v), m - n)
    if m + n == 0:
        add_into(rhs, v, mpq((m ** 3 - m) * d, 12))
    return lhs, rhs


def virasoro(M: LatticeModule, n: int, w: dict) -> dict:
    """L(n) = omega_{n+1} acting on a module element."""
    omega = {(M.lat.zero(), key): c for key, c in fock.conformal_vector(M.space).items()}
    return M.act(omega, n + 1, w)


def check_virasoro(M: LatticeModule, m: int, n: int, samples) -> list[CheckRecord]:
    out = []
    for v in samples:
        lhs, rhs = virasoro_sides(M, m, n, v)
        out.append(_rec("virasoro", f"m={m} n={n} v={textio.format_element(v, M)}", lhs, rhs, M))
    return out


def check_module_hcommutator(M: LatticeModule, h, alpha, m: int, n: int, w: dict) -> CheckRecord:
    ea = {(tuple(alpha), ()): 1}
    lhs = _diff(M.h_mode(h, m, M.act(ea, n, w)), M.act(ea, n, M.h_mode(h, m, w)))
    coef = M.lat.pair_with(tuple(alpha), h)
    rhs = scale(M.act(ea, m + n, w), coef)
    inputs = f"h={textio.format_vector(h)} alpha={list(alpha)} m={m} n={n} w={textio.format_element(w, M)}"
    return _rec("h-commutator", inputs, lhs, rhs, M)


# suites


@dataclass
class SuiteConfig:
    lattice: Lattice
    modules: list = field(default_factory=list)  # LatticeModule instances
    max_weight: int = 3
    mode_window: int = 3
    samples: int | None = None  # None: exhaustive when small enough
    seed: int = 0
    window: int = 1
    virasoro_weight: int = 4


@dataclass
class SuiteReport:
    records: list

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> dict:
        names: dict = {}
        for r in self.records:
            entry = names.setdefault(r.name, {"pass": 0, "fail": 0})
            entry["pass" if r.passed else "fail"] += 1
        return {"total": len(self.records), "pass": self.passed, "fail": self.failed, "by_check": names}

    def text(self) -> str:
        lines = [r.line() for r in self.records]
        s = self.summary()
        lines.append(f"SUMMARY total={s['total']} pass={s['pass']} fail={s['fail']}")
        for name, e in sorted(s["by_check"].items()):
            lines.append(f"SUMMARY {name} pass={e['pass']} fail={e['fail']}")
        return "\n".join(lines) + "\n"


def choose(items: list, count: int | None, rng: random.Random) -> list:
    """All items when few enough, otherwise a seeded subset in original order."""
    limit = EXHAUSTIVE_LIMIT if count is None else count
    if len(items) <= limit:
        return list(items)
    picked = sorted(rng.sample(range(len(items)), limit))
    return [items[i] for i in picked]


def jacobi_records(M: LatticeModule, vectors_ab, vectors_c, window: int, triples: int | None,
                   rng: random.Random) -> list[CheckRecord]:
    out = []
    combos = [(a, b, c) for a in vectors_ab for b in vectors_ab for c in vectors_c]
    if triples is not None:
        combos = choose(combos, triples, rng)
    modes = [(m, n) for m in range(-window, window + 1) for n in range(-window, window + 1)]
    for a, b, c in combos:
        for m, n in modes:
            out.append(check_commutator(M, a, b, c, m, n))
            out.append(check_iterate(M, a, b, c, m, n))
    return out


def cocycle_records(lat: Lattice, bound: int = 2) -> list[CheckRecord]:
    rep = verify_epsilon_axioms(lat, bound)
    out = [CheckRecord(f.axiom, str(f.inputs), str(f.lhs), str(f.rhs), False) for f in rep.failures]
    out.append(CheckRecord("cocycle-box", f"bound={bound} checked={rep.checked}", str(len(rep.failures)),
                           "0", rep.passed))
    return out


def run_suite(config: SuiteConfig, parts=("cocycle", "algebra", "module", "virasoro")) -> SuiteReport:
    """Deterministic batch of checks; records keep enumeration order."""
    rng = random.Random(config.seed)
    lat = config.lattice
    V = algebra(lat)
    records: list = []
    if config.samples == 0:
        return SuiteReport([])
    if "cocycle" in parts:
        records.extend(cocycle_records(lat))
    base = choose(sector_vectors(lat, config.max_weight, config.window), config.samples, rng)
    if "algebra" in parts:
        for a in base:
            records.append(check_vacuum_creation(lat, a))
        records.extend(jacobi_records(V, base, base, config.mode_window, config.samples, rng))
    if "module" in parts:
        for M in config.modules:
            cs = choose(sector_vectors(lat, config.max_weight, config.window, module=M), config.samples, rng)
            records.extend(jacobi_records(M, base, cs, config.mode_window, config.samples, rng))
            records.extend(hcommutator_records(M, cs, config.mode_window))
    if "virasoro" in parts:
        vs = choose(sector_vectors(lat, config.virasoro_weight, config.window), config.samples, rng)
        for m in range(-2, 3):
            for n in range(-2, 3):
                records.extend(check_virasoro(V, m, n, vs))
    return SuiteReport(records)


def hcommutator_records(M: LatticeModule, samples, window: int) -> list[CheckRecord]:
    lat = M.lat
    out = []
    dirs = [lat.space.basis_vector(i) for i in range(lat.space.dim)]
    gens = [tuple(int(i == j) for j in range(lat.rank)) for i in range(lat.rank)]
    for w in samples:
        for h in dirs:
            for alpha in gens:
                for m in range(-1, 2):
                    for n in range(-window, window + 1):
                        out.append(check_module_hcommutator(M, h, alpha, m, n, w))
    return out


@dataclass
class SweepResult:
    """Outcome of :func:`jacobi_sweep`; ``failures`` keeps the first few failing records."""

    total_triples: int
    done_triples: int = 0
    checks: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def complete(self) -> bool:
        return self.done_triples == self.total_triples

    @property
    def coverage(self) -> float:
        return self.done_triples / self.total_triples if self.total_triples else 1.0


def _permutation(size: int, rng: random.Random):
    """A seeded bijection of range(size) via i -> (a i + b) mod size with gcd(a, size) = 1."""
    import math

    if size <= 1:
        return lambda i: i
    while True:
        a = rng.randrange(1, size)
        if math.gcd(a, size) == 1:
            break
    b = rng.randrange(size)
    return lambda i: (a * i + b) % size


def jacobi_sweep(M: LatticeModule, vectors_ab, vectors_c, modes, seconds: float | None = None, seed: int = 0,
                 keep: int = 5) -> SweepResult:
    """Commutator and iterate checks on every triple, visited in a seeded order until done or out of time."""
    import time

    na, nc = len(vectors_ab), len(vectors_c)
    res = SweepResult(na * na * nc)
    perm = _permutation(res.total_triples, random.Random(seed))
    start = time.monotonic()
    for i in range(res.total_triples):
        if seconds is not None and time.monotonic() - start > seconds:
            break
        t = perm(i)
        a, rest = divmod(t, na * nc)
        b, c = divmod(rest, nc)
        a, b, c = vectors_ab[a], vectors_ab[b], vectors_c[c]
        for m, n in modes:
            for sides in (commutator_sides, iterate_sides):
                lhs, rhs = sides(M, a, b, c, m, n)
                res.checks += 1
                if lhs != rhs:
                    res.failed += 1
                    if len(res.failures) < keep:
                        name = "commutator" if sides is commutator_sides else "iterate"
                        res.failures.append(_rec(name, _inputs(M, a, b, c, m, n), lhs, rhs, M))
        res.done_triples += 1
    res.seconds = time.monotonic() - start
    return res
