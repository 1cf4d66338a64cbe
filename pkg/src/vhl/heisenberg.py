"""The Heisenberg algebra H_I on a finite index set and its function-space modules.

Indices are 1-based in every public call.  A state is the monomial
e^{lam.x} prod x_i^{e_i}; the exponent tuple is stored as Fractions so one
state type covers integer and shifted exponents alike.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    RationalMatrix,
    format_scalar,
    is_integer,
    joint_kernel,
    scalar,
    simultaneous_generalized_eigenspaces,
    span_basis,
)
from .errors import ExoticIntegerExponent, IndexOutOfRange, NotInvariant, PreconditionError
from .records import CheckRecord, record

Exps = tuple[Fraction, ...]


def _weights(values, size=None) -> tuple[Fraction, ...]:
    out = tuple(scalar(v) for v in values)
    if size is not None and len(out) != size:
        raise PreconditionError(f"expected {size} weights, got {len(out)}")
    return out


@dataclass(frozen=True)
class Standard:
    """M(1, lam): p_i = d/dx_i, q_i = x_i.  ``tag`` separates equal-weight copies."""

    lam: tuple[Fraction, ...]
    tag: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", _weights(self.lam))
        if not self.lam:
            raise PreconditionError("index set must be nonempty")

    @property
    def size(self) -> int:
        return len(self.lam)

    def exp_weight(self, i: int) -> Fraction:
        return self.lam[i]

    def swapped(self, i: int) -> bool:
        return False

    def shifted(self, i: int) -> bool:
        return False

    def label(self) -> str:
        suffix = f", tag={self.tag}" if self.tag else ""
        return f"Standard(lam={_fmt(self.lam)}{suffix})"


@dataclass(frozen=True)
class Twisted:
    """M(1, I1, lam): outside I1 the roles swap, p_i = x_i and q_i = -d/dx_i."""

    lam: tuple[Fraction, ...]
    i1: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "lam", _weights(self.lam))
        object.__setattr__(self, "i1", frozenset(int(i) for i in self.i1))
        if not self.lam:
            raise PreconditionError("index set must be nonempty")
        for i in self.i1:
            if not 1 <= i <= len(self.lam):
                raise IndexOutOfRange(f"index {i} outside 1..{len(self.lam)}")

    @property
    def size(self) -> int:
        return len(self.lam)

    def exp_weight(self, i: int) -> Fraction:
        return self.lam[i]

    def swapped(self, i: int) -> bool:
        return (i + 1) not in self.i1

    def shifted(self, i: int) -> bool:
        return False

    def label(self) -> str:
        return f"Twisted(I1={sorted(self.i1)}, lam={_fmt(self.lam)})"


@dataclass(frozen=True)
class Exotic:
    """M_*[mu] on the indices I0 tensored with M(1, lam) on the rest.

    ``mu`` maps each index of I0 to its exponent class; ``lam`` has one entry
    per index (entries on I0 are ignored).  ``validate=False`` skips the
    non-integrality check so that counterexamples can be built on purpose.
    """

    mu: dict
    lam: tuple[Fraction, ...]
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        mu = {int(i): scalar(v) for i, v in dict(self.mu).items()}
        lam = _weights(self.lam)
        object.__setattr__(self, "lam", lam)
        if not lam:
            raise PreconditionError("index set must be nonempty")
        for i in mu:
            if not 1 <= i <= len(lam):
                raise IndexOutOfRange(f"index {i} outside 1..{len(lam)}")
        if self.validate:
            for i, m in mu.items():
                if is_integer(m):
                    raise ExoticIntegerExponent(f"mu_{i} = {format_scalar(m)} is an integer")
        object.__setattr__(self, "mu", tuple(sorted(mu.items())))

    def __hash__(self):
        return hash((self.mu, self.lam))

    @property
    def size(self) -> int:
        return len(self.lam)

    @property
    def i0(self) -> frozenset:
        return frozenset(i for i, _ in self.mu)

    def mu_at(self, i: int) -> Fraction:
        return dict(self.mu)[i + 1]

    def exp_weight(self, i: int) -> Fraction:
        return Fraction(0) if self.shifted(i) else self.lam[i]

    def swapped(self, i: int) -> bool:
        return False

    def shifted(self, i: int) -> bool:
        return (i + 1) in self.i0

    def label(self) -> str:
        mu = ", ".join(f"{i}:{format_scalar(m)}" for i, m in self.mu)
        return f"Exotic(mu={{{mu}}}, lam={_fmt(self.lam)})"


def _fmt(values) -> str:
    return "(" + ",".join(format_scalar(v) for v in values) + ")"


@dataclass(frozen=True)
class HState:
    real: object
    exps: Exps

    def __str__(self):
        return f"{self.real.label()}:x^{_fmt(self.exps)}"


class HElement:
    """A finite linear combination of states of one realization."""

    __slots__ = ("real", "terms")

    def __init__(self, real, terms=None):
        self.real = real
        self.terms: dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            c = scalar(c)
            if c:
                e = tuple(scalar(x) for x in e)
                self.terms[e] = self.terms.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def of(cls, state: HState, coef=1) -> "HElement":
        return cls(state.real, {state.exps: coef})

    def __eq__(self, other):
        if not isinstance(other, HElement):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.real == other.real and self.terms == other.terms

    def __add__(self, other: "HElement") -> "HElement":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return HElement(self.real if self.terms else other.real, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "HElement":
        c = scalar(c)
        return HElement(self.real, {e: c * v for e, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def states(self) -> list[HState]:
        return [HState(self.real, e) for e in sorted(self.terms)]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{format_scalar(c)}*x^{_fmt(e)}" for e, c in sorted(self.terms.items())]
        return f"[{self.real.label()}] " + " + ".join(parts)


@dataclass(frozen=True)
class HModule:
    real: object

    @property
    def size(self) -> int:
        return self.real.size

    @property
    def generator(self) -> HElement:
        return HElement(self.real, {self.ground_exps(): 1})

    def ground_exps(self) -> Exps:
        return tuple(self.real.mu_at(i) if self.real.shifted(i) else Fraction(0) for i in range(self.size))

    def state(self, exps: Sequence) -> HState:
        """A basis state; exponents are checked against the realization."""
        exps = tuple(scalar(e) for e in exps)
        if len(exps) != self.size:
            raise PreconditionError(f"expected {self.size} exponents")
        for i, e in enumerate(exps):
            if self.real.shifted(i):
                if not is_integer(e - self.real.mu_at(i)):
                    raise PreconditionError(f"exponent {format_scalar(e)} not in mu_{i + 1} + Z")
            elif not (is_integer(e) and e >= 0):
                raise PreconditionError(f"exponent {format_scalar(e)} at index {i + 1} must be in N")
        return HState(self.real, exps)

    def element(self, terms: dict) -> HElement:
        return HElement(self.real, {self.state(e).exps: c for e, c in terms.items()})


def h_module_new(real) -> HModule:
    return HModule(real)


def _check_index(real, i: int) -> int:
    if not 1 <= i <= real.size:
        raise IndexOutOfRange(f"index {i} outside 1..{real.size}")
    return i - 1


def _derivative(real, i: int, v: HElement) -> HElement:
    lam = real.exp_weight(i)
    out: dict[Exps, Fraction] = {}
    for e, c in v.terms.items():
        if lam:
            out[e] = out.get(e, Fraction(0)) + lam * c
        if e[i]:
            lowered = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[lowered] = out.get(lowered, Fraction(0)) + e[i] * c
    return HElement(real, out)


def _multiply(real, i: int, v: HElement) -> HElement:
    return HElement(real, {e[:i] + (e[i] + 1,) + e[i + 1:]: c for e, c in v.terms.items()})


def act_p(i: int, v: HElement) -> HElement:
    k = _check_index(v.real, i)
    if v.real.swapped(k):
        return _multiply(v.real, k, v)
    return _derivative(v.real, k, v)


def act_q(i: int, v: HElement) -> HElement:
    k = _check_index(v.real, i)
    if v.real.swapped(k):
        return _derivative(v.real, k, v).scale(-1)
    return _multiply(v.real, k, v)


def bracket_check(i: int, j: int, v: HElement) -> CheckRecord:
    lhs = act_p(i, act_q(j, v)) - act_q(j, act_p(i, v))
    rhs = v if i == j else HElement(v.real)
    return record("bracket[p,q]", f"i={i} j={j} v={v!r}", lhs, rhs)


@dataclass(frozen=True)
class DecompositionGroup:
    weight: tuple[Fraction, ...]
    multiplicity: int
    highest: tuple[HElement, ...]
    block_dim: int


def _assemble(vec, index):
    parts: dict = {}
    for (real, e), pos in index.items():
        if vec[pos]:
            parts.setdefault(real, {})[e] = vec[pos]
    elements = sorted((HElement(r, t) for r, t in parts.items()), key=lambda p: p.real.label())
    return elements[0] if len(elements) == 1 else DirectSumElement(tuple(elements))


@dataclass(frozen=True)
class DirectSumElement:
    """A vector of a direct sum with components in several realizations."""

    parts: tuple

    def __repr__(self):
        return " (+) ".join(repr(p) for p in self.parts)


def decompose(vectors: Sequence[HElement]) -> list[DecompositionGroup]:
    """Split the span of ``vectors`` into joint generalized eigenspaces of the p_i.

    Every input must live in a Standard realization; all share one index set.
    Highest vectors spanning several summands come back as DirectSumElement.
    """
    vectors = [v for v in vectors if not v.is_zero()]
    if not vectors:
        return []
    size = vectors[0].real.size
    for v in vectors:
        if not isinstance(v.real, Standard) or v.real.size != size:
            raise PreconditionError("decompose expects Standard realizations over one index set")
    states = sorted({(v.real, e) for v in vectors for e in v.terms}, key=lambda s: (s[0].label(), s[1]))
    images = {(i, s): act_p(i, HElement(s[0], {s[1]: 1})) for i in range(1, size + 1) for s in states}
    index: dict = {}
    for s in states:
        index.setdefault(s, len(index))
    for w in images.values():
        for e in w.terms:
            index.setdefault((w.real, e), len(index))

    def to_vec(v):
        out = [Fraction(0)] * len(index)
        for e, c in v.terms.items():
            out[index[(v.real, e)]] += c
        return out

    basis = span_basis([to_vec(v) for v in vectors])
    as_columns = RationalMatrix.from_columns(basis)
    mats = []
    for i in range(1, size + 1):
        cols = []
        for b in basis:
            image = [Fraction(0)] * len(index)
            for s in states:
                c = b[index[s]]
                if c:
                    for pos, x in enumerate(to_vec(images[(i, s)])):
                        if x:
                            image[pos] += c * x
            sol = as_columns.solve(image)
            if sol is None:
                raise NotInvariant(f"span is not invariant under p_{i}")
            cols.append(sol)
        mats.append(RationalMatrix.from_columns(cols))
    groups = []
    for block in simultaneous_generalized_eigenspaces(mats).blocks:
        kernel = joint_kernel(mats, block.eigenvalues)
        highest = tuple(_assemble(as_columns.apply(k), index) for k in kernel)
        groups.append(DecompositionGroup(block.eigenvalues, len(kernel), highest, block.dim))
    return groups


def check_condition_C(handle: HModule, sample: Sequence[HState]) -> list[CheckRecord]:
    """Per state and index of I0: q_i p_i acts by the exponent, p_i and q_i are nonzero."""
    real = handle.real
    if not isinstance(real, Exotic):
        raise PreconditionError("Condition C is checked on Exotic realizations")
    out = []
    for st in sample:
        v = HElement.of(st)
        for i in sorted(real.i0):
            qp = act_q(i, act_p(i, v))
            out.append(record("qp-semisimple", f"i={i} state={st}", qp, v.scale(st.exps[i - 1])))
            pv, qv = act_p(i, v), act_q(i, v)
            out.append(CheckRecord("p-nonzero", f"i={i} state={st}", repr(pv), "nonzero", not pv.is_zero()))
            out.append(CheckRecord("q-nonzero", f"i={i} state={st}", repr(qv), "nonzero", not qv.is_zero()))
    return out


def truncated_standard(real: Standard, degree: int) -> list[HElement]:
    """Basis of the p-invariant truncation of total x-degree at most ``degree``."""
    out = []
    for exps in itertools.product(range(degree + 1), repeat=real.size):
        if sum(exps) <= degree:
            out.append(HElement(real, {tuple(Fraction(e) for e in exps): 1}))
    return out
