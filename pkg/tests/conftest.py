import pytest
from hypothesis import HealthCheck, settings

from vhl.lattice import Lattice, QuadraticSpace
from vhl.latticeva import ModuleSpec, module_new

settings.register_profile("vhl", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("vhl")


def a1_lattice():
    return Lattice(QuadraticSpace([[2]]), [[1]])


def a2_lattice():
    return Lattice(QuadraticSpace([[2, -1], [-1, 2]]), [[1, 0], [0, 1]])


def hyperbolic_lattice():
    return Lattice(QuadraticSpace([[0, 1], [1, 0]]), [[1, 0]])


@pytest.fixture
def a1():
    return a1_lattice()


@pytest.fixture
def a2():
    return a2_lattice()


@pytest.fixture
def hyp():
    return hyperbolic_lattice()


@pytest.fixture
def a1_half(a1):
    return module_new(a1, ModuleSpec(("1/2",)))


@pytest.fixture
def exotic(hyp):
    return module_new(hyp, ModuleSpec((0, 0), (((1, 1), "1/2"),)))


# one summary line per acceptance criterion

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    entry = _CRITERIA.setdefault(props["criterion"], {"title": props.get("title", ""), "ok": True, "detail": ""})
    if report.failed:
        entry["ok"] = False
    if props.get("detail"):
        entry["detail"] = props["detail"]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        line = f"criterion {n:>2}: {'PASS' if e['ok'] else 'FAIL'}  {e['title']}"
        if e["detail"]:
            line += f"  [{e['detail']}]"
        terminalreporter.write_line(line)
