"""Quadratic spaces, possibly degenerate even lattices, and their cocycle.

Lattice vectors are integer tuples of coefficients against the generators;
ambient vectors are Fraction tuples in the standard basis of h.  The cocycle
depends on the generator order: reordering gives a cohomologous cocycle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import RationalMatrix, is_integer, scalar, vector
from .errors import (
    DegenerateForm,
    DependentGenerators,
    DimensionMismatch,
    NotEven,
    NotIntegral,
)

Vec = tuple[Fraction, ...]
LatticeVector = tuple[int, ...]


class QuadraticSpace:
    """The space h = Q^d with a nondegenerate symmetric form given by ``gram``."""

    def __init__(self, gram):
        g = gram if isinstance(gram, RationalMatrix) else RationalMatrix(gram)
        if not g.is_square():
            raise DimensionMismatch("gram matrix must be square")
        if g != g.transpose():
            raise DegenerateForm("gram matrix is not symmetric")
        if g.rows and g.determinant() == 0:
            raise DegenerateForm("gram matrix is singular")
        self.gram = g
        self.dim = g.rows
        self._rows = tuple(g.row(i) for i in range(self.dim))

    def pair(self, u: Sequence, v: Sequence) -> Fraction:
        """The exact value uᵀ G v."""
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch(f"vectors must have length {self.dim}")
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = self._rows[i]
                total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj), Fraction(0))
        return total

    def lower(self, v: Sequence) -> Vec:
        """The covector G v, i.e. the pairings of v with each basis vector."""
        return tuple(sum((r[j] * v[j] for j in range(self.dim)), Fraction(0)) for r in self._rows)

    def basis_vector(self, i: int) -> Vec:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def dual_basis(self, basis: Sequence[Sequence]) -> list[Vec]:
        """Vectors b_j with <basis_i, b_j> = delta_ij."""
        b = RationalMatrix.from_columns(basis)
        dual = (b.transpose() @ self.gram).inverse()
        return [dual.column(j) for j in range(self.dim)]

    def __eq__(self, other):
        return isinstance(other, QuadraticSpace) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"QuadraticSpace({self.gram!r})"


def pair(space: QuadraticSpace, u, v) -> Fraction:
    return space.pair(vector(u), vector(v))


@dataclass(frozen=True)
class Cocycle:
    """The bimultiplicative cocycle fixed by a generator table.

    ``overrides`` replaces individual values (given on lattice vectors) and
    exists only to inject faults into the verification harness.
    """

    table: tuple[tuple[int, ...], ...]
    overrides: Mapping[tuple[LatticeVector, LatticeVector], int] = field(default_factory=dict)

    def __call__(self, a: LatticeVector, b: LatticeVector) -> int:
        if self.overrides:
            hit = self.overrides.get((tuple(a), tuple(b)))
            if hit is not None:
                return hit
        exponent = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.table[i]
                for j, bj in enumerate(b):
                    if bj and row[j] == -1:
                        exponent += ai * bj
        return -1 if exponent % 2 else 1


class Lattice:
    """A free even lattice of finite rank inside a quadratic space."""

    def __init__(self, space: QuadraticSpace, generators: Sequence[Sequence], cocycle_overrides=None):
        self.space = space
        gens = [vector(g) for g in generators]
        for g in gens:
            if len(g) != space.dim:
                raise DimensionMismatch(f"generator {g} not in a space of dimension {space.dim}")
        if gens and RationalMatrix(gens).rank() != len(gens):
            raise DependentGenerators("lattice generators are linearly dependent")
        self.generators = tuple(gens)
        self.rank = len(gens)
        gram = [[space.pair(a, b) for b in gens] for a in gens]
        for i, row in enumerate(gram):
            if not is_integer(row[i]) or row[i].numerator % 2:
                raise NotEven(f"generator {i + 1} has norm {row[i]}, not an even integer")
            for j, c in enumerate(row):
                if not is_integer(c):
                    raise NotIntegral(f"<alpha_{i + 1}, alpha_{j + 1}> = {c} is not an integer")
        self.gram = tuple(tuple(int(c) for c in row) for row in gram)
        table = tuple(
            tuple(((-1) ** self.gram[i][j]) if i < j else 1 for j in range(self.rank))
            for i in range(self.rank)
        )
        overrides = {}
        for (a, b), sign in (cocycle_overrides or {}).items():
            overrides[(tuple(int(x) for x in a), tuple(int(x) for x in b))] = int(sign)
        self.epsilon = Cocycle(table, overrides)

    # lattice-coordinate arithmetic

    def zero(self) -> LatticeVector:
        return (0,) * self.rank

    def ambient(self, a: LatticeVector) -> Vec:
        out = [Fraction(0)] * self.space.dim
        for ai, g in zip(a, self.generators):
            if ai:
                for k in range(self.space.dim):
                    out[k] += ai * g[k]
        return tuple(out)

    def pair_lattice(self, a: LatticeVector, b: LatticeVector) -> int:
        return sum(ai * self.gram[i][j] * bj for i, ai in enumerate(a) if ai for j, bj in enumerate(b) if bj)

    def norm(self, a: LatticeVector) -> int:
        return self.pair_lattice(a, a)

    def pair_with(self, a: LatticeVector, v: Sequence) -> Fraction:
        return self.space.pair(self.ambient(a), v)

    def generator_pairings(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.space.pair(g, v) for g in self.generators)

    def is_isotropic(self) -> bool:
        return all(c == 0 for row in self.gram for c in row)

    def is_positive_definite(self) -> bool:
        if self.rank == 0:
            return True
        m = RationalMatrix(self.gram)
        return all(RationalMatrix([r[:k] for r in m.tolist()[:k]]).determinant() > 0
                   for k in range(1, self.rank + 1))

    def coordinates(self, v: Sequence) -> LatticeVector | None:
        """Integer coefficients of v against the generators, if v lies in L."""
        v = vector(v)
        if self.rank == 0:
            return () if all(x == 0 for x in v) else None
        sol = RationalMatrix.from_columns(self.generators).solve(v)
        if sol is None or any(not is_integer(c) for c in sol):
            return None
        return tuple(int(c) for c in sol)

    def box(self, bound: int):
        """All lattice vectors with every coordinate in [-bound, bound]."""
        return itertools.product(range(-bound, bound + 1), repeat=self.rank)

    def with_cocycle_overrides(self, overrides) -> "Lattice":
        return Lattice(self.space, self.generators, overrides)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, gram={self.gram})"


def lattice_new(space: QuadraticSpace, generators) -> Lattice:
    return Lattice(space, generators)


def epsilon(lat: Lattice, a: LatticeVector, b: LatticeVector) -> int:
    return lat.epsilon(tuple(a), tuple(b))


def add(a: LatticeVector, b: LatticeVector) -> LatticeVector:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: LatticeVector) -> LatticeVector:
    return tuple(-x for x in a)


@dataclass
class AxiomFailure:
    axiom: str
    inputs: tuple
    lhs: int
    rhs: int


@dataclass
class EpsilonReport:
    checked: int
    failures: list[AxiomFailure]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_epsilon_axioms(lat: Lattice, bound: int) -> EpsilonReport:
    """Exhaustively test normalization, the cocycle identity and the
    commutator condition on the coordinate box of the given radius.

    The box is checked as a finite set; sums that leave it are still
    evaluated, since the cocycle is defined on all of L.
    """
    eps = lat.epsilon
    vectors = list(lat.box(bound))
    zero = lat.zero()
    failures = []
    checked = 0
    for a in vectors:
        checked += 2
        if eps(a, zero) != 1:
            failures.append(AxiomFailure("normalization", (a, zero), eps(a, zero), 1))
        if eps(zero, a) != 1:
            failures.append(AxiomFailure("normalization", (zero, a), eps(zero, a), 1))
        for b in vectors:
            checked += 1
            lhs = eps(a, b) * eps(b, a)  # eps(b, a) is +-1, its own inverse
            rhs = -1 if lat.pair_lattice(a, b) % 2 else 1
            if lhs != rhs:
                failures.append(AxiomFailure("commutator", (a, b), lhs, rhs))
            ab = add(a, b)
            for c in vectors:
                checked += 1
                lhs = eps(a, add(b, c)) * eps(b, c)
                rhs = eps(ab, c) * eps(a, b)
                if lhs != rhs:
                    failures.append(AxiomFailure("cocycle", (a, b, c), lhs, rhs))
    return EpsilonReport(checked, failures)


def in_dual(lat: Lattice, lam: Sequence) -> bool:
    """Whether lam pairs integrally with every generator."""
    return all(is_integer(c) for c in lat.generator_pairings(vector(lam)))


@dataclass(frozen=True)
class SplittingBases:
    alphas: tuple[Vec, ...]
    us: tuple[Vec, ...]
    betas: tuple[Vec, ...]
    vs: tuple[Vec, ...]

    @property
    def annihilation(self) -> tuple[Vec, ...]:
        return self.alphas + self.us

    @property
    def creation(self) -> tuple[Vec, ...]:
        return self.betas + self.vs


def splitting_bases(lat: Lattice) -> SplittingBases:
    """Extend the generators greedily by standard basis vectors, then dualize."""
    space = lat.space
    basis = list(lat.generators)
    for i in range(space.dim):
        if len(basis) == space.dim:
            break
        e = space.basis_vector(i)
        if RationalMatrix(basis + [e]).rank() == len(basis) + 1:
            basis.append(e)
    dual = space.dual_basis(basis) if basis else []
    r = lat.rank
    return SplittingBases(tuple(basis[:r]), tuple(basis[r:]), tuple(dual[:r]), tuple(dual[r:]))


def parse_lattice_vector(values) -> LatticeVector:
    out = []
    for v in values:
        c = scalar(v)
        if not is_integer(c):
            raise NotIntegral(f"lattice coordinate {v!r} is not an integer")
        out.append(int(c))
    return tuple(out)
