"""The cross-product affine algebra p-hat for an isotropic lattice and its checks on V_(h,L).

Here every generator pairing vanishes, so the cocycle is identically 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fock
from .core import vector
from .errors import NotIsotropic, PreconditionError
from .fock import add_into, scale
from .lattice import Lattice, add
from .latticeva import algebra, d_op, sector_vectors
from .records import CheckRecord
from .textio import format_element


@dataclass(frozen=True)
class H:
    h: tuple
    m: int


@dataclass(frozen=True)
class E:
    alpha: tuple
    m: int


@dataclass(frozen=True)
class K:
    pass


def require_isotropic(lat: Lattice):
    if not lat.is_isotropic():
        raise NotIsotropic("the form restricted to L is not identically zero")


def normalize(gen) -> dict:
    """Linear combination over H(e_i, m), E(alpha, m) and K."""
    if isinstance(gen, H):
        h = vector(gen.h)
        out = {}
        for i, c in enumerate(h):
            if c:
                out[("H", i, gen.m)] = c
        return out
    if isinstance(gen, E):
        return {("E", tuple(int(a) for a in gen.alpha), gen.m): 1}
    if isinstance(gen, K):
        return {("K",): 1}
    raise PreconditionError(f"not a p-hat generator: {gen!r}")


def _basis_bracket(lat: Lattice, x, y) -> dict:
    space = lat.space
    if x[0] == "K" or y[0] == "K":
        return {}
    if x[0] == "H" and y[0] == "H":
        _, i, m = x
        _, j, n = y
        if m + n != 0 or m == 0:
            return {}
        c = m * space.gram[i, j]
        return {("K",): c} if c else {}
    if x[0] == "H" and y[0] == "E":
        _, i, m = x
        _, alpha, n = y
        c = lat.pair_with(alpha, space.basis_vector(i))
        return {("E", alpha, m + n): c} if c else {}
    if x[0] == "E" and y[0] == "H":
        return scale(_basis_bracket(lat, y, x), -1)
    return {}


def bracket_combo(lat: Lattice, a: dict, b: dict) -> dict:
    out: dict = {}
    for x, cx in a.items():
        for y, cy in b.items():
            add_into(out, _basis_bracket(lat, x, y), cx * cy)
    return out


def p_bracket(lat: Lattice, a, b) -> dict:
    """[a, b] in p-hat, as a combination of normalized generators."""
    require_isotropic(lat)
    return bracket_combo(lat, normalize(a), normalize(b))


def format_combo(combo: dict) -> str:
    if not combo:
        return "0"
    parts = []
    for key, c in sorted(combo.items(), key=lambda kv: repr(kv[0])):
        if key[0] == "H":
            parts.append(f"{c} * h{{{key[1] + 1}}}({key[2]})")
        elif key[0] == "E":
            parts.append(f"{c} * e[{','.join(map(str, key[1]))}]({key[2]})")
        else:
            parts.append(f"{c} * K")
    return " + ".join(parts)


def _e(alpha) -> dict:
    return {(tuple(alpha), ()): 1}


def _upper_e(V, alpha, w: dict) -> int:
    """e^alpha_m X = 0 for m at or above this, for X = w or any e^beta_n w.

    alpha(k) commutes with e^beta_n because <alpha, beta> = 0, so E^+(-alpha)
    has the same length on X as on w, and the x-shift <alpha, beta + gamma> is 0.
    """
    amb = V.ambient(tuple(alpha))
    neg = tuple(-c for c in amb)
    top = 0
    for (_beta, key) in w:
        top = max(top, len(V.U.eplus_coeffs(neg, {key: 1})))
    return top


def pmodule_records(lat: Lattice, N: int, samples, window: int = 1) -> list[CheckRecord]:
    require_isotropic(lat)
    V = algebra(lat)
    sectors = list(lat.box(window))
    out = []
    zero = lat.zero()
    for w in samples:
        wt = format_element(w)
        # (i) e^0(x) = 1
        for k in range(-N, N + 1):
            n = -k - 1
            got = V.act(_e(zero), n, w)
            want = w if n == -1 else {}
            out.append(_rec("pmodule-unit", f"k={k} w={wt}", got, want))
        for alpha in sectors:
            for beta in sectors:
                for k in range(-N, N + 1):
                    got = V.act(_e(add(alpha, beta)), -k - 1, w)
                    want: dict = {}
                    # sum over m + n = -k - 2 with e^beta_n w != 0 and e^alpha_m X != 0
                    top_b = V.mode_upper(_e(beta), w)
                    top_a = _upper_e(V, alpha, w)
                    for n in range(-k - 1 - top_a, top_b):
                        x = V.act(_e(beta), n, w)
                        if x:
                            add_into(want, V.act(_e(alpha), -k - 2 - n, x))
                    out.append(_rec("pmodule-product", f"alpha={list(alpha)} beta={list(beta)} k={k} w={wt}",
                                    got, want))
            amb = V.ambient(alpha)
            for k in range(-N, N + 1):
                lhs = scale(V.act(_e(alpha), -k - 2, w), k + 1)
                rhs: dict = {}
                top = V.mode_upper(_e(alpha), w)
                # alpha(x)^+ e^alpha(x): alpha(j), j <= -1, after e^alpha_n with n = -j-2-k
                for j in range(-1, -k - 3 - top, -1):
                    y = V.act(_e(alpha), -j - 2 - k, w)
                    if y:
                        add_into(rhs, V.h_mode(amb, j, y))
                # e^alpha(x) alpha(x)^-: alpha(j) w for 0 <= j <= depth
                depth = max((fock.key_depth(key) for (_b, key) in w), default=0)
                for j in range(0, depth + 1):
                    y = V.h_mode(amb, j, w)
                    if y:
                        add_into(rhs, V.act(_e(alpha), -j - 2 - k, y))
                out.append(_rec("pmodule-derivative", f"alpha={list(alpha)} k={k} w={wt}", lhs, rhs))
    return out


def verify_pmodule_conditions(lat: Lattice, N: int = 4, samples=None, max_weight: int = 3, window: int = 1):
    require_isotropic(lat)
    if samples is None:
        samples = sector_vectors(lat, max_weight, window)
    return pmodule_records(lat, N, samples, window)


def verify_quotient_relations(lat: Lattice, window: int = 1) -> list[CheckRecord]:
    require_isotropic(lat)
    V = algebra(lat)
    out = []
    zero = lat.zero()
    out.append(_rec("quotient-unit", "e^0", _e(zero), V.vacuum))
    sectors = list(lat.box(window))
    for alpha in sectors:
        for beta in sectors:
            got = V.act(_e(alpha), -1, _e(beta))
            out.append(_rec("quotient-product", f"alpha={list(alpha)} beta={list(beta)}", got, _e(add(alpha, beta))))
        amb = V.ambient(alpha)
        out.append(_rec("quotient-derivative", f"alpha={list(alpha)}", d_op(lat, _e(alpha)),
                        V.h_mode(amb, -1, _e(alpha))))
    return out


def _rec(name, inputs, lhs, rhs) -> CheckRecord:
    return CheckRecord(name, inputs, lambda: format_element(lhs), lambda: format_element(rhs), lhs == rhs)


@dataclass(frozen=True)
class InducedCounts:
    window: int
    sectors: int
    induced: list
    quotient: list

    def describe(self) -> str:
        return (f"window |alpha_i| <= {self.window} ({self.sectors} sectors); "
                f"induced PBW counts with wt a(-n) = n: {self.induced}; "
                f"V_(h,L) mode-weight counts over the window: {self.quotient}")


def induced_graded_dim(lat: Lattice, N: int, window: int = 1) -> InducedCounts:
    """PBW counts of the induced module vs. the lattice algebra under a sector window.

    The induced module is free on h(-n) (dim h colours) and e^alpha(-n) for
    every alpha in the window, n >= 1.  The lattice side counts
    e^alpha (x) M(1) with only the mode weight (isotropic sectors have weight 0).
    """
    require_isotropic(lat)
    sectors = (2 * window + 1) ** lat.rank
    d = lat.space.dim
    induced = fock.colored_partitions(d + sectors, N)
    quotient = [sectors * c for c in fock.colored_partitions(d, N)]
    return InducedCounts(window, sectors, induced, quotient)
