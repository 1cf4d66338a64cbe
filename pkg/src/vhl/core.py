"""Exact rational scalars and a small linear-algebra toolkit over Q.

Scalars are :class:`fractions.Fraction` values; they are always stored in
lowest terms with a positive denominator, so equality and hashing are exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, IrrationalSpectrum, NonCommuting, ParseError

Scalar = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def scalar(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats and decimal strings are rejected: every quantity must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise ParseError(f"not a rational of the form p/q: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator: {value!r}")
        return Fraction(num, den)
    raise ParseError(f"not a rational: {value!r}")


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(scalar(v) for v in values)


def is_integer(c: Fraction) -> bool:
    return c.denominator == 1


class RationalMatrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, rows: Sequence[Sequence]):
        data = tuple(tuple(scalar(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionMismatch("ragged matrix rows")
        self._rows = data
        self.rows = len(data)
        self.cols = ncols

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        if not columns:
            return cls([])
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))])

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self._rows)
        return f"RationalMatrix([{body}])"

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        )

    def scale(self, c) -> "RationalMatrix":
        c = scalar(c)
        return RationalMatrix([[c * a for a in r] for r in self._rows])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.cols)]
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows]
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([self.column(j) for j in range(self.cols)])

    def power(self, k: int) -> "RationalMatrix":
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    # elimination-based routines

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in self._rows]
        pivots = []
        row = 0
        for col in range(self.cols):
            pivot = next((i for i in range(row, self.rows) if m[i][col] != 0), None)
            if pivot is None:
                continue
            m[row], m[pivot] = m[pivot], m[row]
            inv = 1 / m[row][col]
            m[row] = [x * inv for x in m[row]]
            for i in range(self.rows):
                if i != row and m[i][col] != 0:
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of {v : M v = 0}, one vector per free column."""
        m, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -m[r][f]
            basis.append(tuple(v))
        return basis

    def determinant(self) -> Fraction:
        if not self.is_square():
            raise DimensionMismatch("determinant of non-square matrix")
        m = [list(r) for r in self._rows]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for i in range(col + 1, n):
                if m[i][col] != 0:
                    f = m[i][col] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[col])]
        return det

    def inverse(self) -> "RationalMatrix":
        n = self.rows
        if not self.is_square():
            raise DimensionMismatch("inverse of non-square matrix")
        aug = RationalMatrix([list(r) + [1 if i == j else 0 for j in range(n)]
                              for i, r in enumerate(self._rows)])
        m, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise DimensionMismatch("matrix is singular")
        return RationalMatrix([r[n:] for r in m])

    def solve(self, b: Sequence) -> tuple[Fraction, ...] | None:
        """One solution of M x = b, or None when the system is inconsistent."""
        aug = RationalMatrix([list(r) + [scalar(bi)] for r, bi in zip(self._rows, b)])
        m, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for r, p in enumerate(pivots):
            x[p] = m[r][self.cols]
        return tuple(x)

    def charpoly_roots(self) -> dict[Fraction, int]:
        """Rational eigenvalues with algebraic multiplicity.

        Raises IrrationalSpectrum when the characteristic polynomial does not
        split over Q.
        """
        import sympy

        if self.rows == 0:
            return {}
        sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r]
                           for r in self._rows])
        lam = sympy.Symbol("t")
        poly = sympy.Poly(sm.charpoly(lam).as_expr(), lam, domain="QQ")
        roots = {}
        total = 0
        for factor, mult in poly.factor_list()[1]:
            if factor.degree() != 1:
                raise IrrationalSpectrum(f"characteristic factor {factor.as_expr()} has no rational root")
            a, b = factor.all_coeffs()
            root = -sympy.Rational(b) / sympy.Rational(a)
            roots[Fraction(int(root.p), int(root.q))] = roots.get(Fraction(int(root.p), int(root.q)), 0) + mult
            total += mult
        if total != self.rows:
            raise IrrationalSpectrum("characteristic polynomial does not split over Q")
        return roots


def span_basis(vectors: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """A row-reduced basis of the span of the given coordinate vectors."""
    if not vectors:
        return []
    m, pivots = RationalMatrix(vectors).rref()
    return [tuple(m[i]) for i in range(len(pivots))]


@dataclass(frozen=True)
class EigenBlock:
    eigenvalues: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class EigenDecomposition:
    blocks: tuple[EigenBlock, ...]
    dim: int

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)


def _check_family(mats: Sequence[RationalMatrix]) -> int:
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    n = mats[0].rows
    for m in mats:
        if m.shape != (n, n):
            raise DimensionMismatch("matrices must be square and of equal size")
    for i, a in enumerate(mats):
        for b in mats[i + 1:]:
            if a @ b != b @ a:
                raise NonCommuting("input matrices do not commute")
    return n


def _restrict(m: RationalMatrix, basis: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    """Matrix of m on the invariant subspace spanned by ``basis``."""
    b = RationalMatrix.from_columns(basis)
    cols = []
    for v in basis:
        coords = b.solve(m.apply(v))
        if coords is None:
            raise DimensionMismatch("subspace is not invariant")
        cols.append(coords)
    return RationalMatrix.from_columns(cols)


def simultaneous_generalized_eigenspaces(mats: Sequence[RationalMatrix]) -> EigenDecomposition:
    """Split Q^n into common generalized eigenspaces of commuting matrices.

    Each matrix is restricted in turn to every block found so far and the
    block is cut along the generalized eigenspaces ker (M - c)^dim of the
    restriction.  Blocks are returned sorted by eigenvalue tuple.
    """
    n = _check_family(mats)
    identity = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    blocks: list[tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]]] = [((), identity)] if n else []
    for m in mats:
        refined = []
        for values, basis in blocks:
            restricted = _restrict(m, basis)
            dim = len(basis)
            bmat = RationalMatrix.from_columns(basis)
            for c, _mult in sorted(restricted.charpoly_roots().items()):
                shifted = (restricted - RationalMatrix.identity(dim).scale(c)).power(dim)
                sub = [bmat.apply(v) for v in shifted.nullspace()]
                refined.append((values + (c,), sub))
        blocks = refined
    out = tuple(EigenBlock(v, tuple(b)) for v, b in sorted(blocks, key=lambda vb: vb[0]))
    return EigenDecomposition(out, n)


def joint_kernel(mats: Sequence[RationalMatrix], shifts: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Basis of the common kernel of M_i - c_i."""
    n = mats[0].cols
    rows = []
    for m, c in zip(mats, shifts):
        rows.extend((m - RationalMatrix.identity(n).scale(c)).tolist())
    return RationalMatrix(rows).nullspace()


def joint_eigenvector(mats: Sequence[RationalMatrix]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """A genuine simultaneous eigenvector of commuting matrices.

    Any vector in the common kernel of the shifted matrices lies in the
    matching generalized eigenblock, and that kernel is never zero.
    """
    decomposition = simultaneous_generalized_eigenspaces(mats)
    block = decomposition.blocks[0]
    kernel = joint_kernel(mats, block.eigenvalues)
    return block.eigenvalues, kernel[0]
