import json
from pathlib import Path

import pytest

from vhl.cli import main, parse_config, split_args
from vhl.errors import ParseError, ValidationError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data, indent=2) if not isinstance(data, str) else data)
    return p


A1 = {"space": {"dim": 1, "gram": [["2"]]}, "lattice": {"generators": [["1"]]}}


def test_parse_config_examples(tmp_path):
    cfg = parse_config(CONFIGS / "a1.json")
    assert cfg.lattice.gram == ((2,),) and list(cfg.modules) == ["half"]
    with pytest.raises(ValidationError) as exc:
        parse_config(write(tmp_path, {"space": {"gram": [["2", "1"], ["0", "2"]]}}))
    assert exc.value.field == "gram"
    bad = dict(A1, modules=[{"name": "m", "lambda": ["1/3"]}])
    with pytest.raises(ValidationError) as exc:
        parse_config(write(tmp_path, bad))
    assert str(exc.value) == "module.lambda: not in L°"


def test_parse_config_diagnostics(tmp_path):
    with pytest.raises(ParseError) as exc:
        parse_config(write(tmp_path, '{\n  "space": {\n    "gram": [["2"]],\n  }\n}'))
    assert exc.value.line == 4
    with pytest.raises(ValidationError) as exc:
        parse_config(write(tmp_path, {"space": {"gram": [[0.5]]}}))
    assert exc.value.field == "gram"
    with pytest.raises(ValidationError) as exc:
        parse_config(write(tmp_path, {"space": {"gram": [["1"]]}, "lattice": {"generators": [["1"]]}}))
    assert exc.value.field == "lattice.generators" and "line" in str(exc.value)
    hyp = {"space": {"gram": [["0", "1"], ["1", "0"]]}, "lattice": {"generators": [["1", "0"]]},
           "modules": [{"name": "x", "lambda": ["0", "0"], "exotic": [[1, 1, "2"]]}]}
    with pytest.raises(ValidationError) as exc:
        parse_config(write(tmp_path, hyp))
    assert exc.value.field == "module.exotic"


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "all", "--config", CONFIGS / "a1.json")
    assert code == 0 and "fail=0" in out
    code, _, err = run(capsys, "verify", "affine-p", "--config", CONFIGS / "a1.json")
    assert code == 2 and "NotIsotropic" in err
    code, out, _ = run(capsys, "verify", "cocycle", "--config", CONFIGS / "bad_cocycle.json")
    assert code == 1 and "FAIL cocycle" in out


def test_verify_all_isotropic_runs_affine(capsys, tmp_path):
    out_path = tmp_path / "report.txt"
    code, out, _ = run(capsys, "verify", "all", "--config", CONFIGS / "hyperbolic.json", "--out", out_path)
    assert code == 0 and "pmodule-product" in out and out_path.read_text() == out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "virasoro", "--config", CONFIGS / "a2.json", "--json")
    data = json.loads(out)
    assert code == 0 and data["summary"]["fail"] == 0 and data["records"]


@pytest.mark.parametrize("expr,want", [
    ("mode(e[1], -3, e[1])", "1 * e[2]"),
    ("mode(e[1], 0, e[-1])", "1 * e[0] h{1}(-1)"),
    ("D(e[0])", "0"),
    ("D(e[1])", "1 * e[1] h{1}(-1)"),
    ("Emin((-1), 1, e[0])", "1 * e[0] h{1}(-1)"),
    ("Emin([1], 0, e[3])", "1 * e[3]"),
    ("Dbar([1], 1, e[0] h{1}(-1))", "x^-1: 2 * e[0]\nx^0: 1 * e[0] h{1}(-1)"),
    ("3/2 * e[1] + 1/2 * e[1]", "2 * e[1]"),
])
def test_compute(capsys, expr, want):
    code, out, _ = run(capsys, "compute", "--config", CONFIGS / "a1.json", expr)
    assert code == 0
    assert out.splitlines()[1:-1] == want.split("\n")


def test_compute_module(capsys):
    code, out, _ = run(capsys, "compute", "--config", CONFIGS / "a1.json", "--module", "half", "Ealpha([1], e[0])")
    assert code == 0 and out.splitlines()[1] == "1 * e[1]"
    code, out, _ = run(capsys, "compute", "--config", CONFIGS / "a1.json", "--module", "half", "mode(e[1], -2, e[0])")
    assert out.splitlines()[1] == "1 * e[1]"


@pytest.mark.parametrize("expr", ["mode(e[1], x, e[1])", "mode(e[1], 1)", "Ealpha((1/2), e[0])", "foo(e[1])",
                                  "Dbar([1], 2, e[0])"])
def test_compute_errors(capsys, expr):
    code, _, err = run(capsys, "compute", "--config", CONFIGS / "a1.json", expr)
    assert code == 2 and err.startswith("error:")


def test_split_args():
    assert split_args("e[1], -3, e[1,2] h{1}(-1)") == ["e[1]", "-3", "e[1,2] h{1}(-1)"]
    assert split_args("(1,2), 1, e[0]") == ["(1,2)", "1", "e[0]"]


def test_character(capsys):
    code, out, _ = run(capsys, "character", "--config", CONFIGS / "a1.json", "-N", "5")
    assert code == 0 and out.splitlines()[2] == "1, 3, 4, 7, 13, 19"
    code, out, _ = run(capsys, "character", "--config", CONFIGS / "heisenberg1.json", "-N", "6")
    assert out.splitlines()[2] == "1, 1, 2, 3, 5, 7, 11"
    code, out, _ = run(capsys, "character", "--config", CONFIGS / "a1.json", "-N", "0")
    assert out.splitlines()[2] == "1"
    code, out, _ = run(capsys, "character", "half", "--config", CONFIGS / "a1.json", "-N", "2")
    assert out.splitlines()[1:3] == ["offset 1/4", "2, 2, 6"]
    code, out, _ = run(capsys, "character", "--config", CONFIGS / "hyperbolic.json", "-N", "2")
    assert code == 0 and "sector [0]: 1, 2, 5" in out
    code, _, err = run(capsys, "character", "exotic", "--config", CONFIGS / "hyperbolic.json")
    assert code == 2


def test_decompose(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose", CONFIGS / "two_summands.json")
    assert code == 0 and out.count("group lambda=") == 2
    vac = write(tmp_path, {"vectors": [{"lambda": ["0"], "terms": [[["0"], "1"]]}]}, "vac.json")
    code, out, _ = run(capsys, "decompose", vac)
    assert code == 0 and "group lambda=(0) multiplicity=1" in out
    bad = write(tmp_path, {"vectors": [{"lambda": ["0"], "terms": [[["2"], "1"]]}]}, "bad.json")
    code, _, err = run(capsys, "decompose", bad)
    assert code == 2 and "NotInvariant" in err


def test_report_byte_identical(capsys):
    argv = ("verify", "all", "--config", CONFIGS / "a2.json", "--seed", "4")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
