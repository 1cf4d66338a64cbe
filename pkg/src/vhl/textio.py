"""Canonical text form of lattice (module) elements.

A term reads ``coef * e[a1,...,ar] X[(j,n)->exp,...] h{i}(-n)^k ...``; terms
are joined by `` + `` and the zero element prints as ``0``.  ``h{i}`` names
the i-th vector of the hosting module's creation basis (the standard basis
for the algebra and ordinary modules, the dual split basis beta, v for
modules with exceptional modes).  ``X`` lists exceptional slots by their
1-based L1 index j and mode n.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import format_scalar, scalar
from .errors import ParseError
from .fock import _exponent

_TERM_SPLIT = re.compile(r"\s+\+\s+")
_TERM = re.compile(
    r"^\s*(?:(?P<coef>[+-]?\d+(?:/\d+)?)\s*\*\s*)?e\[(?P<sector>[^\]]*)\]"
    r"(?:\s*X\[(?P<exotic>[^\]]*)\])?(?P<mono>(?:\s*h\{\d+\}\(-\d+\)(?:\^\d+)?)*)\s*$"
)
_FACTOR = re.compile(r"h\{(\d+)\}\(-(\d+)\)(?:\^(\d+))?")
_EXOTIC = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*->\s*([+-]?\d+(?:/\d+)?)")


def _coef(c) -> str:
    return format_scalar(Fraction(c))


def format_vector(v) -> str:
    return "(" + ",".join(format_scalar(Fraction(x)) for x in v) + ")"


def _exotic_slots(module):
    if module is None:
        return {}, 0
    return module.U.exotic, module.lat.rank


def format_term(sector, key, coef, module=None) -> str:
    slots, rank = _exotic_slots(module)
    parts = [f"{_coef(coef)} * e[{','.join(str(a) for a in sector)}]"]
    ex, mono = [], []
    for n, k, p in key:
        if (k, n) in slots:
            ex.append(f"({k - rank + 1},{n})->{_coef(p)}")
        else:
            mono.append(f"h{{{k + 1}}}(-{n})" + (f"^{p}" if p != 1 else ""))
    if ex:
        parts.append("X[" + ",".join(ex) + "]")
    parts.extend(mono)
    return " ".join(parts)


def _order(item):
    (sector, key), _c = item
    return (sector, tuple((-n, k, Fraction(p)) for n, k, p in key))


def format_element(elem: dict, module=None) -> str:
    if not elem:
        return "0"
    return " + ".join(format_term(s, k, c, module) for (s, k), c in sorted(elem.items(), key=_order))


def parse_element(text: str, module=None) -> dict:
    """Inverse of :func:`format_element` for the same hosting module.

    A term may omit its ``coef *`` prefix, which then defaults to 1.
    """
    text = text.strip()
    if text == "0":
        return {}
    slots, rank = _exotic_slots(module)
    out: dict = {}
    for idx, chunk in enumerate(_TERM_SPLIT.split(text)):
        m = _TERM.match(chunk)
        if not m:
            raise ParseError(f"cannot parse term {chunk!r}", field=f"term {idx + 1}")
        coef = scalar(m.group("coef")) if m.group("coef") else 1
        raw = m.group("sector")
        if raw.strip() and not re.fullmatch(r"\s*[+-]?\d+(\s*,\s*[+-]?\d+)*\s*", raw):
            raise ParseError(f"sector [{raw}] needs integer coordinates", field=f"term {idx + 1}")
        sector = tuple(int(a) for a in raw.split(",")) if raw.strip() else ()
        factors: dict = {}
        if m.group("exotic"):
            for j, n, p in _EXOTIC.findall(m.group("exotic")):
                k = int(j) + rank - 1
                if (k, int(n)) not in slots:
                    raise ParseError(f"no exceptional slot ({j},{n}) in this module", field=f"term {idx + 1}")
                factors[(int(n), k)] = _exponent(p)
        for i, n, p in _FACTOR.findall(m.group("mono")):
            slot = (int(n), int(i) - 1)
            if slot[0] < 1 or slot[1] < 0:
                raise ParseError("creation factors need i >= 1 and n >= 1", field=f"term {idx + 1}")
            if module is not None and slot[1] >= module.space.dim:
                raise ParseError(f"h{{{i}}} exceeds dim h = {module.space.dim}", field=f"term {idx + 1}")
            if (slot[1], slot[0]) in slots:
                raise ParseError(f"slot h{{{i}}}(-{n}) is exceptional; write it inside X[...]",
                                 field=f"term {idx + 1}")
            factors[slot] = factors.get(slot, 0) + (int(p) if p else 1)
        for (k, n) in slots:
            if (n, k) not in factors:
                raise ParseError(f"missing exceptional slot ({k - rank + 1},{n})", field=f"term {idx + 1}")
        key = tuple(sorted(((n, k, p) for (n, k), p in factors.items()), key=lambda t: (-t[0], t[1])))
        if module is not None and len(sector) != module.lat.rank:
            raise ParseError(f"sector {list(sector)} has the wrong length", field=f"term {idx + 1}")
        v = out.get((sector, key), 0) + coef
        if v:
            out[(sector, key)] = v
        else:
            out.pop((sector, key), None)
    return out
