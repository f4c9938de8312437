import pytest

from pillowcase.catalog import builtins
from pillowcase.covers import GaloisCoverDatum
from pillowcase.perms import Perm, all_subgroups, subgroup_generated


def parent_of(name):
    e = builtins()[name]
    return GaloisCoverDatum.from_perms(e.group, e.default_triple)


@pytest.fixture(scope="session")
def gl23():
    return parent_of("gl23")


@pytest.fixture(scope="session")
def sl32():
    return parent_of("sl32")


@pytest.fixture(scope="session")
def a4xc3():
    return parent_of("a4xc3")


@pytest.fixture(scope="session")
def a4xc3_subgroups(a4xc3):
    """H1 = <a, c> and H2 = <a, b> in A4 x Z/3."""
    g = a4xc3.group
    a = Perm.from_cycles("(1 2 3)", 7)
    b = Perm.from_cycles("(1 2)(3 4)", 7)
    c = Perm.from_cycles("(5 6 7)", 7)
    h1 = subgroup_generated(g, [g.index[a], g.index[c]])
    h2 = subgroup_generated(g, [g.index[a], g.index[b]])
    return h1, h2


@pytest.fixture(scope="session")
def gl23_subgroups(gl23):
    return all_subgroups(gl23.group)


@pytest.fixture(scope="session")
def sl32_subgroups(sl32):
    return all_subgroups(sl32.group)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        ok, detail = results[name]
        terminalreporter.write_line(f"criterion {name}: {'PASS' if ok else 'FAIL'} ({detail})")
