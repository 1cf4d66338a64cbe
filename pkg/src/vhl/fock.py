"""Fock modules of the Heisenberg affine algebra and exact mode products.

A monomial key is a tuple of ``(n, k, p)`` triples meaning c_k(-n)^p, sorted
by descending mode n and then ascending basis index k.  ``c`` is the
creation basis of the hosting module; for M(1) itself it is the standard
basis of h.  An element is a plain ``dict`` from keys to exact coefficients
(ints or Fractions, never zero).

Exceptional slots (k, n) carry exponents in mu + Z and are present in every
key of an exotic module; they model the non-polynomial factor x^mu.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .core import RationalMatrix, vector
from .errors import NonNilpotent, NonRestrictedAmbient, PreconditionError
from .lattice import QuadraticSpace

Key = tuple


# element arithmetic on dicts


def add_into(out: dict, elem: dict, coef=1) -> dict:
    for k, c in elem.items():
        v = out.get(k, 0) + coef * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def scale(elem: dict, coef) -> dict:
    if not coef:
        return {}
    return {k: coef * c for k, c in elem.items()}


def combine(*pairs) -> dict:
    out: dict = {}
    for coef, elem in pairs:
        add_into(out, elem, coef)
    return out


def key_weight(key: Key) -> int:
    """Mode weight of the polynomial part; exceptional slots count by mode only once."""
    return sum(n * p for n, _k, p in key if isinstance(p, int))


def key_length(key: Key) -> int:
    return sum(p for _n, _k, p in key)


def key_depth(key: Key) -> int:
    return max((n for n, _k, _p in key), default=0)


def multiply_keys(a: Key, b: Key) -> Key:
    """Product of two monomials: exponents of shared slots add."""
    if not a:
        return b
    if not b:
        return a
    slots: dict = {}
    for n, k, p in a:
        slots[(n, k)] = p
    for n, k, p in b:
        slots[(n, k)] = slots.get((n, k), 0) + p
    return tuple(sorted(((n, k, p) for (n, k), p in slots.items() if p), key=lambda t: (-t[0], t[1])))


def _bump(key: Key, n: int, k: int) -> Key:
    for idx, (m, j, p) in enumerate(key):
        if m == n and j == k:
            return key[:idx] + ((m, j, p + 1),) + key[idx + 1:]
        if m < n or (m == n and j > k):
            return key[:idx] + ((n, k, 1),) + key[idx:]
    return key + ((n, k, 1),)


class FockModule:
    """A highest-weight module of the Heisenberg affine algebra at level 1.

    ``lam`` fixes the zero modes, h(0) = <lam, h>.  ``basis`` is the creation
    basis c; annihilation modes contract c_k(-n) with <h, c_k> n.  ``exotic``
    maps slots (k, n), k a 0-based basis index, to their ground exponent.
    """

    def __init__(self, space: QuadraticSpace, lam=None, basis=None, exotic=None):
        self.space = space
        self.dim = space.dim
        self.lam = vector(lam) if lam is not None else (Fraction(0),) * self.dim
        if len(self.lam) != self.dim:
            raise PreconditionError("lambda has the wrong dimension")
        self.standard = basis is None
        self.basis = tuple(vector(b) for b in basis) if basis is not None else tuple(
            space.basis_vector(i) for i in range(self.dim))
        self._to_basis = RationalMatrix.from_columns(self.basis).inverse()
        self.exotic = {(int(k), int(n)): _exponent(p) for (k, n), p in (exotic or {}).items()}
        for (k, n), p in self.exotic.items():
            if n < 1 or not 0 <= k < self.dim:
                raise PreconditionError(f"bad exceptional slot {(k, n)}")
        self.vacuum_key: Key = tuple(sorted(((n, k, p) for (k, n), p in self.exotic.items()),
                                            key=lambda t: (-t[0], t[1])))
        self._dir_cache: dict = {}
        self._mode_cache: dict = {}
        self._std = [self._direction(space.basis_vector(i)) for i in range(self.dim)]

    # directions

    def _direction(self, h) -> tuple:
        """(creation coordinates, contraction pairings, zero mode) for h."""
        h = tuple(h)
        hit = self._dir_cache.get(h)
        if hit is None:
            coords = self._to_basis.apply(h)
            create = tuple((k, _simplify(c)) for k, c in enumerate(coords) if c)
            pairings = tuple(_simplify(self.space.pair(h, b)) for b in self.basis)
            zero = _simplify(self.space.pair(h, self.lam))
            hit = (create, pairings, zero)
            self._dir_cache[h] = hit
        return hit

    def vacuum(self) -> dict:
        return {self.vacuum_key: 1}

    # single modes

    def create(self, h, n: int, elem: dict) -> dict:
        coords = self._direction(h)[0]
        out: dict = {}
        for key, c in elem.items():
            for k, a in coords:
                nk = _bump(key, n, k)
                v = out.get(nk, 0) + a * c
                if v:
                    out[nk] = v
                else:
                    del out[nk]
        return out

    def annihilate(self, h, n: int, elem: dict) -> dict:
        return self._annihilate(self._direction(h)[1], n, elem)

    def _annihilate(self, pairings, n: int, elem: dict) -> dict:
        out: dict = {}
        for key, c in elem.items():
            for idx, (m, k, p) in enumerate(key):
                if m < n:
                    break
                if m != n or not pairings[k]:
                    continue
                if p == 1 and isinstance(p, int):
                    nk = key[:idx] + key[idx + 1:]
                else:
                    nk = key[:idx] + ((m, k, p - 1),) + key[idx + 1:]
                v = out.get(nk, 0) + n * pairings[k] * p * c
                if v:
                    out[nk] = v
                else:
                    del out[nk]
        return out

    def h_mode(self, h, n: int, elem: dict) -> dict:
        if n < 0:
            return self.create(h, -n, elem)
        if n > 0:
            return self.annihilate(h, n, elem)
        return scale(elem, self._direction(h)[2])

    def std_mode(self, i: int, n: int, elem: dict) -> dict:
        """e_i(n) for a 0-based standard basis index."""
        create, pairings, zero = self._std[i]
        if n < 0:
            out: dict = {}
            for key, c in elem.items():
                for k, a in create:
                    nk = _bump(key, -n, k)
                    v = out.get(nk, 0) + a * c
                    if v:
                        out[nk] = v
                    else:
                        del out[nk]
            return out
        if n > 0:
            return self._annihilate(pairings, n, elem)
        return scale(elem, zero)

    # exponentials

    def eplus_coeffs(self, gamma, elem: dict) -> list[dict]:
        """Coefficients F_a, a = 0, 1, ..., of x^{-a} in E^+(gamma, x) elem."""
        _create, pairings, _zero = self._direction(gamma)
        bound = 0
        for key in elem:
            total = 0
            for n, k, p in key:
                if pairings[k]:
                    if (k, n) in self.exotic:
                        raise NonNilpotent(f"positive modes of {gamma} act on an exceptional slot")
                    total += n * p
            bound = max(bound, total)
        coeffs = [dict(elem)]
        for a in range(1, bound + 1):
            acc: dict = {}
            for n in range(1, a + 1):
                if coeffs[a - n]:
                    add_into(acc, self._annihilate(pairings, n, coeffs[a - n]))
            coeffs.append(scale(acc, mpq(1, a)))
        while len(coeffs) > 1 and not coeffs[-1]:
            coeffs.pop()
        return coeffs

    def eminus_poly(self, gamma, a: int) -> dict:
        """E^-(gamma, x) coefficient at x^a applied to the polynomial unit ()."""
        cache = self._dir_cache.setdefault(("eminus", tuple(gamma)), [{(): 1}])
        create = self._direction(gamma)[0]
        while len(cache) <= a:
            b = len(cache)
            acc: dict = {}
            for n in range(1, b + 1):
                prev = cache[b - n]
                for key, c in prev.items():
                    for k, x in create:
                        nk = _bump(key, n, k)
                        v = acc.get(nk, 0) + x * c
                        if v:
                            acc[nk] = v
                        else:
                            del acc[nk]
            cache.append(scale(acc, mpq(-1, b)))
        return cache[a]

    def eminus_apply(self, gamma, a: int, elem: dict) -> dict:
        poly = self.eminus_poly(gamma, a)
        return multiply(poly, elem)

    # mode products

    def mode_bound(self, ukey: Key, wkey: Key) -> int:
        """u_n w = 0 for every n at or above this value.

        Without exceptional slots the mode-weight grading also gives
        u_n w = 0 once n >= wt(u) + wt(w).
        """
        top = key_length(ukey) * key_depth(wkey) + key_weight(ukey)
        if not self.exotic:
            top = min(top, key_weight(ukey) + key_weight(wkey))
        return top

    def m1_mode(self, ukey: Key, n: int, wkey: Key) -> dict:
        """u_n w for a standard-basis monomial u of M(1) and a basis vector w."""
        if not ukey:
            return {wkey: 1} if n == -1 else {}
        if n >= self.mode_bound(ukey, wkey):
            return {}
        memo = (ukey, n, wkey)
        hit = self._mode_cache.get(memo)
        if hit is not None:
            return hit
        m, i, p = ukey[0]
        rest = ((m, i, p - 1),) + ukey[1:] if p > 1 else ukey[1:]
        out: dict = {}
        wvec = {wkey: 1}
        top = self.mode_bound(rest, wkey)
        for t in range(max(0, top - n)):
            inner = self.m1_mode(rest, n + t, wkey)
            if inner:
                add_into(out, self.std_mode(i, -(m + t), inner), comb(m + t - 1, t))
        sign = -1 if m % 2 == 0 else 1
        for t in range(key_depth(wkey) + 1):
            hw = self.std_mode(i, t, wvec)
            if not hw:
                continue
            coef = sign * comb(m + t - 1, t)
            for k2, c2 in hw.items():
                inner = self.m1_mode(rest, n - m - t, k2)
                if inner:
                    add_into(out, inner, coef * c2)
        if len(self._mode_cache) > 2_000_000:
            self._mode_cache.clear()
        self._mode_cache[memo] = out
        return out

    def mode(self, u: dict, n: int, w: dict) -> dict:
        out: dict = {}
        for uk, uc in u.items():
            for wk, wc in w.items():
                r = self.m1_mode(uk, n, wk)
                if r:
                    add_into(out, r, uc * wc)
        return out

    def mode_upper(self, u: dict, w: dict) -> int:
        return max((self.mode_bound(uk, wk) for uk in u for wk in w), default=0)


def multiply(poly: dict, elem: dict) -> dict:
    if poly == {(): 1}:
        return dict(elem)
    out: dict = {}
    for pk, pc in poly.items():
        for ek, ec in elem.items():
            nk = multiply_keys(pk, ek)
            v = out.get(nk, 0) + pc * ec
            if v:
                out[nk] = v
            else:
                del out[nk]
    return out


def _exponent(p):
    p = Fraction(p)
    return mpq(p.numerator, p.denominator)


def _simplify(c):
    """Hot-path coefficient: a plain int when integral, else a gmpy2 rational."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else mpq(c.numerator, c.denominator)


# M(1) on the standard basis


_M1_CACHE: dict = {}


def fock_space(space: QuadraticSpace) -> FockModule:
    """The vertex algebra M(1) in the standard basis, shared per space."""
    hit = _M1_CACHE.get(space)
    if hit is None:
        hit = FockModule(space)
        _M1_CACHE[space] = hit
    return hit


def monomial(factors: Sequence[tuple[int, int]]) -> Key:
    """Key for prod e_i(-n) from 1-based (i, n) pairs, n >= 1."""
    key: Key = ()
    for i, n in factors:
        if n < 1:
            raise PreconditionError("creation modes must be positive")
        key = _bump(key, n, i - 1)
    return key


def h_mode(space: QuadraticSpace, h, n: int, v: dict) -> dict:
    return fock_space(space).h_mode(vector(h), n, v)


def m1_mode(space: QuadraticSpace, u: dict, n: int, v: dict, module: FockModule | None = None) -> dict:
    """u_n v with u in M(1) and v in ``module`` (M(1) itself by default)."""
    host = module if module is not None else fock_space(space)
    return host.mode(u, n, v)


def conformal_vector(space: QuadraticSpace, basis=None) -> dict:
    """omega = 1/2 sum_k a_k(-1) b_k(-1) 1 for a basis a and its dual b."""
    m1 = fock_space(space)
    a = [vector(v) for v in basis] if basis is not None else [space.basis_vector(i) for i in range(space.dim)]
    b = space.dual_basis(a)
    out: dict = {}
    for ak, bk in zip(a, b):
        add_into(out, m1.create(ak, 1, m1.create(bk, 1, {(): 1})), mpq(1, 2))
    return out


def virasoro_mode(space: QuadraticSpace, n: int, v: dict, module: FockModule | None = None) -> dict:
    """L(n) = omega_{n+1}."""
    return m1_mode(space, conformal_vector(space), n + 1, v, module)


def graded_dim(space: QuadraticSpace, N: int) -> list[int]:
    return colored_partitions(space.dim, N)


def colored_partitions(colors: int, N: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^n)^{-colors} up to q^N."""
    coeffs = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(colors):
            for k in range(n, N + 1):
                coeffs[k] += coeffs[k - n]
    return coeffs


def monomials_of_weight(dim: int, weight: int) -> list[Key]:
    """All standard monomials of exact mode weight, in canonical order."""
    slots = [(n, k) for n in range(weight, 0, -1) for k in range(dim)]
    out: list[Key] = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for j in range(idx, len(slots)):
            n, k = slots[j]
            if n > remaining:
                continue
            for p in range(remaining // n, 0, -1):
                rec(j + 1, remaining - n * p, acc + [(n, k, p)])

    rec(0, weight, [])
    return sorted(out)
