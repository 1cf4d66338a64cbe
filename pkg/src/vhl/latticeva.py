"""Lattice vertex algebras V_(h,L) = C[L] (x) M(1) and their modules C[L] (x) U.

Elements are dicts keyed by ``(sector, ukey)``: ``sector`` is an integer
tuple against the lattice generators and ``ukey`` a monomial key of the
hosting Fock module (see :mod:`vhl.fock`).  The algebra is the module with
lam = 0 and U = M(1) in the standard basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import fock
from .core import RationalMatrix, format_scalar, is_integer, scalar, vector
from .errors import (
    DualMembership,
    ExoticIntegerExponent,
    NonIntegerEigenvalue,
    PreconditionError,
    XDependence,
)
from .fock import FockModule, add_into, multiply, scale
from .lattice import Lattice, add, in_dual, splitting_bases

DEFAULT_BOUND = 8


@dataclass(frozen=True)
class ModuleSpec:
    """lam in L-dual plus optional exceptional L1 modes.

    ``exotic`` entries are ``((j, n), exponent)`` with j a 1-based index into
    the complement vectors u_j / v_j and n >= 1 the mode of v_j(-n).
    """

    lam: tuple
    exotic: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lam", vector(self.lam))
        ex = tuple(sorted(((int(j), int(n)), scalar(p)) for (j, n), p in dict(self.exotic).items()))
        object.__setattr__(self, "exotic", ex)


@dataclass(frozen=True)
class OperatorSeriesView:
    """Finitely many powers of x with their coefficient elements."""

    terms: dict
    low: int
    high: int

    def coefficient(self, power: int) -> dict:
        return self.terms.get(power, {})

    def powers(self) -> list[int]:
        return sorted(p for p, v in self.terms.items() if v)


class LatticeModule:
    """The V_(h,L)-module C[L] (x) U for U = M(1, lam, U1); lam = 0 gives the algebra."""

    def __init__(self, lat: Lattice, spec: ModuleSpec | None = None):
        spec = spec or ModuleSpec((0,) * lat.space.dim)
        if len(spec.lam) != lat.space.dim:
            raise PreconditionError("lambda has the wrong dimension")
        if not in_dual(lat, spec.lam):
            bad = [format_scalar(c) for c in lat.generator_pairings(spec.lam)]
            raise DualMembership(f"lambda pairs to ({', '.join(bad)}) with the generators, not in L-dual")
        self.lat = lat
        self.space = lat.space
        self.spec = spec
        self.lam = spec.lam
        self.lam_pairings = tuple(int(c) for c in lat.generator_pairings(spec.lam))
        self.is_algebra = not any(spec.lam) and not spec.exotic
        if spec.exotic:
            split = splitting_bases(lat)
            s = len(split.us)
            slots = {}
            for (j, n), p in spec.exotic:
                if not 1 <= j <= s:
                    raise PreconditionError(f"exceptional mode index j={j} must lie in 1..{s} (the L1 side)")
                if n < 1:
                    raise PreconditionError("exceptional modes must be positive")
                if is_integer(p):
                    raise ExoticIntegerExponent(f"exponent {format_scalar(p)} at {(j, n)} is an integer")
                slots[(lat.rank + j - 1, n)] = p
            self.U = FockModule(lat.space, spec.lam, split.creation, slots)
            self.split = split
        elif self.is_algebra:
            self.U = fock.fock_space(lat.space)
            self.split = None
        else:
            self.U = FockModule(lat.space, spec.lam)
            self.split = None
        self.M1 = fock.fock_space(lat.space)
        self._amb: dict = {}
        self._vcache: dict = {}
        self._wcache: dict = {}
        self._pair_cache: dict = {}

    # basics

    @property
    def vacuum(self) -> dict:
        return {(self.lat.zero(), self.U.vacuum_key): 1}

    def ambient(self, a) -> tuple:
        hit = self._amb.get(a)
        if hit is None:
            hit = self.lat.ambient(a)
            self._amb[a] = hit
        return hit

    def zero_mode_eigenvalue(self, alpha, sector) -> int:
        """alpha(0) on sector beta: <alpha, lam + beta>."""
        return self.lat.pair_lattice(alpha, sector) + sum(a * c for a, c in zip(alpha, self.lam_pairings))

    # the vertex operator

    def _deltabar_algebra(self, beta, ukey):
        """(k, (-1)^k F_k(-beta) u) pairs for Deltabar(beta, x) on M(1)."""
        memo = (beta, ukey)
        hit = self._vcache.get(memo)
        if hit is None:
            neg = tuple(-c for c in self.ambient(beta))
            coeffs = self.M1.eplus_coeffs(neg, {ukey: 1})
            hit = [(k, scale(v, -1) if k % 2 else v) for k, v in enumerate(coeffs) if v]
            self._vcache[memo] = hit
        return hit

    def _deltabar_module(self, alpha, wkey):
        """(j, F_j(-alpha) w) pairs; Deltabar(alpha, -x) minus its x^{alpha(0)} factor."""
        memo = (alpha, wkey)
        hit = self._wcache.get(memo)
        if hit is None:
            neg = tuple(-c for c in self.ambient(alpha))
            coeffs = self.U.eplus_coeffs(neg, {wkey: 1})
            hit = [(j, v) for j, v in enumerate(coeffs) if v]
            self._wcache[memo] = hit
        return hit

    def _shift(self, alpha, beta) -> int:
        return self.zero_mode_eigenvalue(alpha, beta)

    def pair_upper(self, alpha, ukey, beta, wkey) -> int:
        """(e^alpha u)_n (e^beta w) vanishes for every n at or above this value."""
        s = self._shift(alpha, beta)
        top = None
        for k, vk in self._deltabar_algebra(beta, ukey):
            for j, wj in self._deltabar_module(alpha, wkey):
                for vm in vk:
                    for wm in wj:
                        t = self.U.mode_bound(vm, wm) + k + j - s
                        if top is None or t > top:
                            top = t
        return top if top is not None else -(10 ** 9)

    def pair_mode(self, alpha, ukey, n: int, beta, wkey) -> dict:
        """(e^alpha (x) u)_n (e^beta (x) w), a single basis pair."""
        memo = (alpha, ukey, n, beta, wkey)
        hit = self._pair_cache.get(memo)
        if hit is not None:
            return hit
        s = self._shift(alpha, beta)
        vs = self._deltabar_algebra(beta, ukey)
        ws = self._deltabar_module(alpha, wkey)
        bound = self.U.mode_bound
        terms = [(k + j, vm, vc * wc, wm, bound(vm, wm))
                 for k, vk in vs for j, wj in ws for vm, vc in vk.items() for wm, wc in wj.items()]
        a_stop = max((b - n - s + kj for kj, _v, _c, _w, b in terms), default=0)
        neg = tuple(-c for c in self.ambient(alpha))
        total: dict = {}
        m1 = self.U.m1_mode
        for a in range(a_stop):
            inner: dict = {}
            shift = n + s + a
            for kj, vm, c, wm, b in terms:
                p = shift - kj
                if p < b:
                    r = m1(vm, p, wm)
                    if r:
                        add_into(inner, r, c)
            if inner:
                add_into(total, multiply(self.U.eminus_poly(neg, a), inner))
        target = add(alpha, beta)
        sign = self.lat.epsilon(alpha, beta)
        out = {(target, key): sign * c for key, c in total.items()}
        if len(self._pair_cache) > 1_000_000:
            self._pair_cache.clear()
        self._pair_cache[memo] = out
        return out

    def act(self, a: dict, n: int, w: dict) -> dict:
        """a_n w for an algebra element a and an element w of this module."""
        out: dict = {}
        for (alpha, ukey), ac in a.items():
            for (beta, wkey), wc in w.items():
                r = self.pair_mode(alpha, ukey, n, beta, wkey)
                if r:
                    add_into(out, r, ac * wc)
        return out

    def mode_upper(self, a: dict, w: dict) -> int:
        return max((self.pair_upper(al, uk, be, wk) for al, uk in a for be, wk in w), default=-(10 ** 9))

    # module-local operators

    def apply_u(self, fn, w: dict) -> dict:
        """Apply a map on U sector by sector."""
        out: dict = {}
        for (beta, key), c in w.items():
            for k2, c2 in fn(beta, {key: 1}).items():
                v = out.get((beta, k2), 0) + c * c2
                if v:
                    out[(beta, k2)] = v
                else:
                    out.pop((beta, k2), None)
        return out

    def h_mode(self, h, n: int, w: dict) -> dict:
        """h_W(n); the zero mode picks up <h, beta> on sector beta."""
        h = vector(h)
        if n != 0:
            return self.apply_u(lambda _b, x: self.U.h_mode(h, n, x), w)
        out: dict = {}
        base = self.U._direction(h)[2]
        for (beta, key), c in w.items():
            ev = base + self.lat.pair_with(beta, h)
            if ev:
                out[(beta, key)] = ev * c
        return out


def algebra(lat: Lattice) -> LatticeModule:
    hit = getattr(lat, "_algebra", None)
    if hit is None:
        hit = LatticeModule(lat)
        lat._algebra = hit
    return hit


def module_new(lat: Lattice, spec: ModuleSpec) -> LatticeModule:
    return LatticeModule(lat, spec)


def element(module: LatticeModule, sector, factors=(), coef=1, exotic_offsets=None) -> dict:
    """Basis vector e^sector (x) monomial, factors given as 1-based (k, n) pairs on U's basis.

    ``exotic_offsets`` shifts exceptional exponents by integers, keyed by (j, n).
    """
    key = fock.monomial(factors)
    ground = module.U.vacuum_key
    if exotic_offsets:
        r = module.lat.rank
        shifted = []
        for n, k, p in ground:
            shifted.append((n, k, p + exotic_offsets.get((k - r + 1, n), 0)))
        ground = tuple(shifted)
    key = fock.multiply_keys(ground, key) if ground else key
    return {(tuple(sector), key): scalar(coef)}


def y_mode(lat: Lattice, a: dict, n: int, b: dict) -> dict:
    return algebra(lat).act(a, n, b)


def y_mode_module(handle: LatticeModule, a: dict, n: int, w: dict) -> dict:
    return handle.act(a, n, w)


def vacuum(lat: Lattice) -> dict:
    return algebra(lat).vacuum


def d_op(lat: Lattice, v: dict) -> dict:
    return y_mode(lat, v, -2, vacuum(lat))


def eminus_coeff(handle: LatticeModule, alpha, k: int, w: dict) -> dict:
    """Coefficient of x^k in E^-(alpha, x) w."""
    poly = handle.U.eminus_poly(vector(alpha), k)
    return handle.apply_u(lambda _b, x: multiply(poly, x), w)


def eplus_apply(handle: LatticeModule, alpha, w: dict) -> OperatorSeriesView:
    """E^+(alpha, x) w as a finite expansion in nonpositive powers of x."""
    alpha = vector(alpha)
    terms: dict = {}
    for (beta, key), c in w.items():
        for a, coeff in enumerate(handle.U.eplus_coeffs(alpha, {key: 1})):
            bucket = terms.setdefault(-a, {})
            add_into(bucket, {(beta, k2): v for k2, v in coeff.items()}, c)
    terms = {p: v for p, v in terms.items() if v}
    low = min(terms, default=0)
    return OperatorSeriesView(terms, low, 0)


def deltabar_apply(handle: LatticeModule, alpha, sign: int, w: dict) -> OperatorSeriesView:
    """Deltabar(alpha, sign x) w with alpha(0) = <alpha, lam + beta> on sector beta."""
    alpha = tuple(int(a) for a in alpha)
    amb = handle.lat.ambient(alpha)
    neg = tuple(-c for c in amb)
    terms: dict = {}
    for (beta, key), c in w.items():
        nu = handle.lat.pair_with(alpha, vector(handle.lam)) + handle.lat.pair_lattice(alpha, beta)
        if not is_integer(Fraction(nu)):
            raise NonIntegerEigenvalue(f"alpha(0) = {nu} on sector {beta}")
        nu = int(nu)
        for a, coeff in enumerate(handle.U.eplus_coeffs(neg, {key: 1})):
            # (-x)^nu E^+(-alpha, -x) for sign +1, x^nu E^+(-alpha, x) for sign -1
            factor = (-1) ** (nu + a) if sign > 0 else 1
            bucket = terms.setdefault(nu - a, {})
            add_into(bucket, {(beta, k2): v for k2, v in coeff.items()}, c * factor)
    terms = {p: v for p, v in terms.items() if v}
    return OperatorSeriesView(terms, min(terms, default=0), max(terms, default=0))


def e_alpha_series(handle: LatticeModule, alpha, w: dict, bound: int = 6) -> dict:
    """Coefficients x^K, |K| <= bound, of E^-(alpha,x) Y_W(e^alpha,x) E^+(alpha,x) x^{-alpha(0)} w."""
    alpha = tuple(int(a) for a in alpha)
    amb = handle.ambient(alpha)
    ea = {(alpha, ()): 1}
    out = {K: {} for K in range(-bound, bound + 1)}
    for (beta, key), c in w.items():
        nu = handle.zero_mode_eigenvalue(alpha, beta)
        plus = handle.U.eplus_coeffs(amb, {key: 1})
        for a, ga in enumerate(plus):
            if not ga:
                continue
            gvec = {(beta, k2): v for k2, v in ga.items()}
            upper = handle.mode_upper(ea, gvec)
            for K in range(-bound, bound + 1):
                # the x^K coefficient needs m = b - a - nu - 1 - K with m below ``upper``
                b = 0
                while b - a - nu - 1 - K < upper:
                    m = b - a - nu - 1 - K
                    y = handle.act(ea, m, gvec)
                    if y:
                        add_into(out[K], eminus_coeff(handle, amb, b, y), c)
                    b += 1
    return out


def e_alpha_apply(handle: LatticeModule, alpha, w: dict, bound: int = 6) -> dict:
    series = e_alpha_series(handle, alpha, w, bound)
    for K, v in series.items():
        if K != 0 and v:
            raise XDependence(f"coefficient of x^{K} does not vanish")
    return series[0]


@dataclass(frozen=True)
class IsoVerdict:
    verdict: str  # "yes", "no" or "unknown"
    gamma: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.verdict == "yes"


def modules_isomorphic(lat: Lattice, spec1: ModuleSpec, spec2: ModuleSpec) -> IsoVerdict:
    """Compare two module specs; on "yes" theta(e^beta w) = eps(beta, gamma) e^{beta+gamma} w
    maps the second module onto the first."""
    for spec in (spec1, spec2):
        if not in_dual(lat, spec.lam):
            return IsoVerdict("no", None, "lambda outside L-dual")
    diff = tuple(b - a for a, b in zip(spec1.lam, spec2.lam))
    gamma = lat.coordinates(diff)
    if gamma is None:
        return IsoVerdict("no", None, "lambda_1 and lambda_2 lie in different cosets of L")
    if spec1.exotic != spec2.exotic:
        return IsoVerdict("unknown", gamma, "exceptional data differ; abstract isomorphism not decided")
    return IsoVerdict("yes", gamma, "same coset and equal exceptional data")


def iso_map(lat: Lattice, gamma, w: dict) -> dict:
    """theta: e^beta (x) w -> eps(beta, gamma) e^{beta+gamma} (x) w."""
    return {(add(beta, gamma), key): lat.epsilon(beta, gamma) * c for (beta, key), c in w.items()}


def sector_vectors(lat: Lattice, max_weight: int, window: int = 1, module: LatticeModule | None = None,
                   exotic_window: int = 1) -> list[dict]:
    """Basis vectors of bounded weight, in a deterministic order.

    Positive-definite lattices use the conformal weight <lam+beta, lam+beta>/2 + k
    relative to its minimum; otherwise sectors run over the coordinate box of
    radius ``window`` and only the mode weight k is bounded.
    """
    module = module or algebra(lat)
    d = lat.space.dim
    out = []
    if lat.is_positive_definite() and lat.rank == d and not module.spec.exotic:
        sectors = _short_sectors(lat, module, max_weight)
    else:
        sectors = [(beta, 0) for beta in lat.box(window)]
    offsets = [{}]
    if module.spec.exotic:
        slots = [jn for jn, _p in module.spec.exotic]
        offsets = [dict(zip(slots, combo))
                   for combo in itertools.product(range(-exotic_window, exotic_window + 1), repeat=len(slots))]
    for beta, base in sectors:
        for k in range(0, max_weight - base + 1):
            for key in fock.monomials_of_weight(d, k):
                for off in offsets:
                    factors = [(kk + 1, n) for n, kk, p in key for _ in range(p)]
                    out.append(element(module, beta, factors, 1, off))
    return out


def _short_sectors(lat: Lattice, module: LatticeModule, max_weight: int):
    """Sectors with (<lam+beta, lam+beta> - min)/2 <= max_weight, with that weight.

    Writing lam + beta = sum c_i alpha_i, c_i^2 <= N (G^-1)_ii whenever the
    norm is at most N, which bounds the search box exactly.
    """
    gram = RationalMatrix(lat.gram)
    inv = gram.inverse()
    shift = inv.apply(module.lam_pairings)

    def norm(beta):
        c = [b + s for b, s in zip(beta, shift)]
        return sum(c[i] * lat.gram[i][j] * c[j] for i in range(lat.rank) for j in range(lat.rank))

    centre = tuple(-round(s) for s in shift)
    top = 2 * max_weight + norm(centre)
    ranges = []
    for i in range(lat.rank):
        r = math.isqrt(math.floor(top * inv[i, i])) + 1
        ranges.append(range(math.floor(-shift[i]) - r, math.ceil(-shift[i]) + r + 1))
    norms = {beta: norm(beta) for beta in itertools.product(*ranges)}
    low = min(norms.values())
    out = []
    for beta in sorted(norms, key=lambda b: (norms[b], b)):
        w = (norms[beta] - low) / 2
        if w <= max_weight:
            out.append((beta, int(w)))
    return out


@dataclass(frozen=True)
class Character:
    """q^offset * sum_k coeffs[k] q^k, or per-sector mode-weight series when L is not positive definite."""

    offset: Fraction | None
    coeffs: list | None
    per_sector: dict | None = None


def character(lat: Lattice, N: int, module: LatticeModule | None = None, window: int = 1) -> Character:
    module = module or algebra(lat)
    if module.spec.exotic:
        raise PreconditionError("no L(0)-grading is defined on modules with exceptional modes")
    fock_counts = fock.colored_partitions(lat.space.dim, N)
    if lat.rank and not lat.is_positive_definite():
        series = {beta: list(fock_counts) for beta in lat.box(window)}
        return Character(None, None, series)
    if lat.rank == 0:
        return Character(Fraction(lat.space.pair(module.lam, module.lam)) / 2, list(fock_counts))
    coeffs = [0] * (N + 1)
    for _beta, w in _short_sectors(lat, module, N):
        for k in range(w, N + 1):
            coeffs[k] += fock_counts[k - w]
    beta = _short_sectors(lat, module, 0)[0][0]
    gamma = tuple(a + b for a, b in zip(module.lam, lat.ambient(beta)))
    low = lat.space.pair(gamma, gamma)
    return Character(Fraction(low) / 2, coeffs)
