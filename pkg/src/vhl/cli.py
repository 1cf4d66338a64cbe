"""``workbench`` command-line front end.

Exit codes: 0 when every check passes, 1 on a failed check (or an
x-dependent E_alpha), 2 on configuration or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import affinep, heisenberg, latticeva, textio
from .axioms import SuiteConfig, SuiteReport, run_suite
from .core import format_scalar, scalar, vector
from .errors import (DualMembership, ExoticIntegerExponent, ParseError, PreconditionError, ValidationError,
                     VHLError, XDependence)
from .lattice import Lattice, QuadraticSpace, parse_lattice_vector
from .latticeva import LatticeModule, ModuleSpec
from .records import CheckRecord

SUITES = ("algebra", "module", "cocycle", "virasoro", "affine-p", "all")


@dataclass
class WorkbenchConfig:
    lattice: Lattice
    modules: dict = field(default_factory=dict)  # name -> LatticeModule
    max_weight: int = 3
    mode_window: int = 3
    samples: int | None = None
    seed: int = 0
    window: int = 1
    virasoro_weight: int = 4
    affine_degree: int = 4


def _line_of(text: str, key: str):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _rational(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError(where, f"{value!r} is not an exact rational (use an integer or a 'p/q' string)")
    try:
        return scalar(value)
    except (ValueError, TypeError, ZeroDivisionError, PreconditionError) as exc:
        raise ValidationError(where, f"{value!r} is not a rational: {exc}") from None


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(where, f"{value!r} is not an integer")
    return value


def _rows(value, where: str) -> list:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ValidationError(where, "expected a list of rows")
    return [[_rational(x, where) for x in r] for r in value]


def config_from_dict(data: dict, text: str = "") -> WorkbenchConfig:
    def fail(key, exc):
        line = _line_of(text, key.split(".")[-1]) if text else None
        raise ValidationError(key, str(exc) if line is None else f"{exc} (line {line})") from None

    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    space_d = data.get("space")
    if not isinstance(space_d, dict) or "gram" not in space_d:
        raise ValidationError("space.gram", "missing")
    gram = _rows(space_d["gram"], "gram")
    if "dim" in space_d and _int(space_d["dim"], "space.dim") != len(gram):
        raise ValidationError("space.dim", f"dim {space_d['dim']} but gram has {len(gram)} rows")
    try:
        space = QuadraticSpace(gram)
    except PreconditionError as exc:
        fail("gram", exc)
    lat_d = data.get("lattice", {})
    gens = _rows(lat_d.get("generators", []), "lattice.generators")
    overrides = {}
    for entry in data.get("test_hooks", {}).get("epsilon_override", []):
        try:
            a, b, sign = entry
            overrides[(parse_lattice_vector(a), parse_lattice_vector(b))] = _int(sign, "test_hooks.epsilon_override")
        except (TypeError, ValueError, PreconditionError) as exc:
            fail("test_hooks.epsilon_override", exc)
    try:
        lat = Lattice(space, gens, overrides or None)
    except PreconditionError as exc:
        fail("lattice.generators", exc)
    suite = data.get("suite", {})
    cfg = WorkbenchConfig(lat)
    for key in ("max_weight", "mode_window", "seed", "window", "virasoro_weight", "affine_degree"):
        if key in suite:
            setattr(cfg, key, _int(suite[key], f"suite.{key}"))
    if suite.get("samples") is not None:
        cfg.samples = _int(suite["samples"], "suite.samples")
    for idx, m in enumerate(data.get("modules", [])):
        name = m.get("name", f"module{idx + 1}")
        lam = [_rational(x, "module.lambda") for x in m.get("lambda", [0] * space.dim)]
        if len(lam) != space.dim:
            raise ValidationError("module.lambda", f"expected {space.dim} entries")
        exotic = {}
        for e in m.get("exotic", []):
            if not (isinstance(e, list) and len(e) == 3):
                raise ValidationError("module.exotic", f"entry {e!r} is not [j, n, exponent]")
            exotic[(_int(e[0], "module.exotic"), _int(e[1], "module.exotic"))] = _rational(e[2], "module.exotic")
        try:
            mod = latticeva.module_new(lat, ModuleSpec(tuple(lam), tuple(exotic.items()), name))
        except DualMembership:
            raise ValidationError("module.lambda", "not in L°") from None
        except ExoticIntegerExponent as exc:
            fail("module.exotic", exc)
        except PreconditionError as exc:
            fail("module", exc)
        if name in cfg.modules or name == "algebra":
            raise ValidationError("module.name", f"duplicate module name {name!r}")
        cfg.modules[name] = mod
    return cfg


def parse_config(path: str) -> WorkbenchConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc.strerror}", field=str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, field=f"column {exc.colno}") from None
    return config_from_dict(data, text)


# verify


@dataclass
class Report:
    command: str
    lines: list
    status: int
    data: dict = field(default_factory=dict)

    def text(self) -> str:
        return f"# {self.command}\n" + "".join(line + "\n" for line in self.lines) + f"# exit {self.status}\n"

    def json(self) -> str:
        payload = {"command": self.command, "status": self.status, **self.data}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _target(cfg: WorkbenchConfig, name: str | None) -> LatticeModule:
    if name in (None, "algebra"):
        return latticeva.algebra(cfg.lattice)
    if name not in cfg.modules:
        raise ValidationError("module", f"no module named {name!r}")
    return cfg.modules[name]


def run_verify(cfg: WorkbenchConfig, suite: str, seed: int | None = None, max_weight: int | None = None,
               module: str | None = None) -> SuiteReport:
    if suite not in SUITES:
        raise ValidationError("suite", f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    modules = list(cfg.modules.values()) if module is None else [_target(cfg, module)]
    sc = SuiteConfig(cfg.lattice, modules, max_weight if max_weight is not None else cfg.max_weight,
                     cfg.mode_window, cfg.samples, cfg.seed if seed is None else seed, cfg.window,
                     cfg.virasoro_weight)
    parts = ("cocycle", "algebra", "module", "virasoro") if suite in ("all", "affine-p") else (suite,)
    report = run_suite(sc, parts) if suite != "affine-p" else SuiteReport([])
    want_affine = suite == "affine-p" or (suite == "all" and cfg.lattice.is_isotropic() and cfg.lattice.rank)
    if want_affine:
        records: list[CheckRecord] = list(report.records)
        records.extend(affinep.verify_pmodule_conditions(cfg.lattice, cfg.affine_degree, None, sc.max_weight,
                                                         cfg.window))
        records.extend(affinep.verify_quotient_relations(cfg.lattice, cfg.window))
        report = SuiteReport(records)
    return report


def cmd_verify(cfg: WorkbenchConfig, suite: str, **kw) -> Report:
    rep = run_verify(cfg, suite, **kw)
    status = 0 if rep.ok else 1
    lines = rep.text().rstrip("\n").split("\n")
    data = {"summary": rep.summary(), "records": [r.as_dict() for r in rep.records]}
    return Report(f"verify {suite}", lines, status, data)


# compute


def split_args(text: str) -> list[str]:
    """Split on commas that are not nested inside brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


_CALL = re.compile(r"^\s*(mode|Emin|Dbar|D|Ealpha)\s*\((.*)\)\s*$", re.S)
_ARITY = {"mode": 3, "Emin": 3, "Dbar": 3, "D": 1, "Ealpha": 2}


def _parse_int(text: str, what: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(f"{what} must be an integer, got {text!r}")
    return int(text)


def _parse_alpha(lat: Lattice, text: str, want: str):
    """``[a1,...]`` gives lattice coordinates, ``(h1,...)`` a vector of h."""
    inner = text[1:-1]
    items = [s.strip() for s in inner.split(",")] if inner.strip() else []
    if text.startswith("[") and text.endswith("]"):
        coords = tuple(_parse_int(s, "lattice coordinate") for s in items)
        if len(coords) != lat.rank:
            raise ParseError(f"alpha {text} needs {lat.rank} coordinates")
        return coords if want == "lattice" else lat.ambient(coords)
    if text.startswith("(") and text.endswith(")"):
        try:
            amb = vector(scalar(s) for s in items)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad vector {text}: {exc}") from None
        if len(amb) != lat.space.dim:
            raise ParseError(f"alpha {text} needs {lat.space.dim} entries")
        if want == "ambient":
            return amb
        coords = lat.coordinates(amb)
        if coords is None:
            raise ParseError(f"{text} is not a lattice vector")
        return coords
    raise ParseError(f"cannot parse alpha {text!r}; use [coords] or (vector)")


def format_series(terms: dict, module) -> list[str]:
    if not terms:
        return ["0"]
    return [f"x^{p}: {textio.format_element(terms[p], module)}" for p in sorted(terms) if terms[p]] or ["0"]


def evaluate(cfg: WorkbenchConfig, expression: str, module: str | None = None) -> list[str]:
    lat = cfg.lattice
    V = latticeva.algebra(lat)
    W = _target(cfg, module)
    m = _CALL.match(expression)
    if not m:
        return [textio.format_element(textio.parse_element(expression, W), W)]
    op, args = m.group(1), split_args(m.group(2))
    if len(args) != _ARITY[op]:
        raise ParseError(f"{op} takes {_ARITY[op]} arguments, got {len(args)}")
    if op == "mode":
        a = textio.parse_element(args[0], V)
        n = _parse_int(args[1], "mode index")
        return [textio.format_element(W.act(a, n, textio.parse_element(args[2], W)), W)]
    if op == "D":
        if W is not V:
            raise PreconditionError("D acts on the algebra; drop --module")
        return [textio.format_element(latticeva.d_op(lat, textio.parse_element(args[0], V)), V)]
    if op == "Emin":
        alpha = _parse_alpha(lat, args[0], "ambient")
        k = _parse_int(args[1], "power")
        return [textio.format_element(latticeva.eminus_coeff(W, alpha, k, textio.parse_element(args[2], W)), W)]
    if op == "Dbar":
        alpha = _parse_alpha(lat, args[0], "lattice")
        sign = _parse_int(args[1], "sign")
        if sign not in (1, -1):
            raise ParseError("sign must be 1 or -1")
        view = latticeva.deltabar_apply(W, alpha, sign, textio.parse_element(args[2], W))
        return format_series(view.terms, W)
    alpha = _parse_alpha(lat, args[0], "lattice")
    return [textio.format_element(latticeva.e_alpha_apply(W, alpha, textio.parse_element(args[1], W)), W)]


def cmd_compute(cfg: WorkbenchConfig, expression: str, module: str | None = None) -> Report:
    out = evaluate(cfg, expression, module)
    return Report(f"compute {expression}", out, 0, {"result": out})


# character


def cmd_character(cfg: WorkbenchConfig, N: int, target: str = "algebra") -> Report:
    if N < 0:
        raise ValidationError("N", "degree must be nonnegative")
    ch = latticeva.character(cfg.lattice, N, _target(cfg, target), cfg.window)
    if ch.per_sector is not None:
        lines = [f"sector {list(beta)}: " + ", ".join(map(str, s)) for beta, s in ch.per_sector.items()]
        data = {"per_sector": {str(list(b)): s for b, s in ch.per_sector.items()}}
        return Report(f"character {target} N={N}", ["mode-weight series per sector"] + lines, 0, data)
    lines = [f"offset {format_scalar(ch.offset)}", ", ".join(map(str, ch.coeffs))]
    return Report(f"character {target} N={N}", lines, 0,
                  {"offset": format_scalar(ch.offset), "coefficients": ch.coeffs})


# decompose


def load_hvectors(path: str) -> list:
    """Vectors file: ``{"vectors": [{"lambda": [...], "terms": [[exps, coef], ...]}]}``
    or ``{"summands": [{"lambda": [...], "degree": k}]}`` for truncated M(1, lambda)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read vectors: {exc.strerror}", field=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, field=f"column {exc.colno}") from None
    out = []
    for s in data.get("summands", []):
        real = heisenberg.Standard(tuple(_rational(x, "summand.lambda") for x in s["lambda"]))
        out.extend(heisenberg.truncated_standard(real, _int(s.get("degree", 2), "summand.degree")))
    for v in data.get("vectors", []):
        real = heisenberg.Standard(tuple(_rational(x, "vector.lambda") for x in v["lambda"]))
        mod = heisenberg.h_module_new(real)
        terms = {tuple(_rational(e, "vector.terms") for e in exps): _rational(c, "vector.terms")
                 for exps, c in v["terms"]}
        out.append(mod.element(terms))
    if not out:
        raise ValidationError("vectors", "no vectors or summands given")
    return out


def cmd_decompose(vectors: list) -> Report:
    groups = heisenberg.decompose(vectors)
    lines, data = [], []
    for g in groups:
        lam = "(" + ",".join(format_scalar(x) for x in g.weight) + ")"
        lines.append(f"group lambda={lam} multiplicity={g.multiplicity} block_dim={g.block_dim}")
        lines.extend(f"  highest {h!r}" for h in g.highest)
        data.append({"lambda": [format_scalar(x) for x in g.weight], "multiplicity": g.multiplicity,
                     "block_dim": g.block_dim, "highest": [repr(h) for h in g.highest]})
    return Report("decompose", lines, 0, {"groups": data})


# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description="Exact computations on lattice vertex algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON workbench config")
    common.add_argument("--out", help="also write the report here")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-weight", type=int)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--module", help="module name from the config (default: the algebra)")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("suite", choices=SUITES)
    c = sub.add_parser("compute", parents=[common])
    c.add_argument("expression")
    ch = sub.add_parser("character", parents=[common])
    ch.add_argument("target", nargs="?", default="algebra")
    ch.add_argument("-N", "--degree", type=int, help="top degree (defaults to --max-weight, then 5)")
    d = sub.add_parser("decompose", parents=[common])
    d.add_argument("vectors", help="JSON file of Heisenberg vectors")
    return p


def run(args) -> Report:
    if args.command == "decompose":
        return cmd_decompose(load_hvectors(args.vectors))
    if not args.config:
        raise ValidationError("config", "--config is required")
    cfg = parse_config(args.config)
    if args.command == "verify":
        return cmd_verify(cfg, args.suite, seed=args.seed, max_weight=args.max_weight, module=args.module)
    if args.command == "compute":
        return cmd_compute(cfg, args.expression, args.module)
    N = args.degree if args.degree is not None else (args.max_weight if args.max_weight is not None else 5)
    target = args.module or args.target
    return cmd_character(cfg, N, target)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except XDependence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (VHLError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = report.json() if args.json else report.text()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
