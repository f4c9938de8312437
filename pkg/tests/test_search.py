import pytest

from pillowcase.catalog import lookup, parse_catalog
from pillowcase.documents import dumps, report_document, summary_lines
from pillowcase.perms import Perm, group_from_generators, tuples_conjugate
from pillowcase.search import (
    SearchSpec,
    canonical_pair,
    enumerate_triples,
    regular_genus,
    run_search,
)


def test_z2_has_no_higher_genus_triples():
    z2 = group_from_generators(2, [Perm.from_cycles("(1 2)", 2)])
    assert list(enumerate_triples(z2, 2, 10)) == []
    assert [t.genus() for t in enumerate_triples(z2, 0, 0)]


def test_gl23_genus2_contains_matrix_triple(gl23):
    triples = list(enumerate_triples(gl23.group, 2, 2))
    g = gl23.group
    assert all(t.genus() == 2 for t in triples)
    orders = {tuple(g.element_order(x) for x in t.entries) for t in triples}
    assert (8, 2, 3) in orders
    canon = canonical_pair(g, *gl23.entries[:2])
    assert canon in {t.entries[:2] for t in triples}


def test_a4xc3_genus4_contains_reference_triple(a4xc3):
    g = a4xc3.group
    triples = list(enumerate_triples(g, 4, 4))
    assert canonical_pair(g, *a4xc3.entries[:2]) in {t.entries[:2] for t in triples}


def test_triples_are_distinct_classes(gl23):
    triples = list(enumerate_triples(gl23.group, 2, 2))
    regs = [t.regular_cover().perms for t in triples]
    for i in range(len(regs)):
        for j in range(i):
            # distinct conjugacy classes inside G; still may be conjugate in S_|G|,
            # but never identical canonical pairs
            assert triples[i].entries != triples[j].entries
    assert len({canonical_pair(gl23.group, *t.entries[:2]) for t in triples}) == len(triples)
    del regs


def test_regular_genus_matches_rh(a4xc3):
    assert regular_genus(a4xc3.group, a4xc3.entries) == a4xc3.genus()


def test_spec_validation():
    with pytest.raises(ValueError):
        SearchSpec((), 3, 2)
    with pytest.raises(ValueError):
        SearchSpec((), 2, 2, min_n=0)


def test_search_a4xc3_contains_reference_pair(a4xc3, a4xc3_subgroups):
    out = run_search(SearchSpec((lookup("a4xc3"),), 4, 4, 2))
    canon = canonical_pair(a4xc3.group, *a4xc3.entries[:2])
    res = next(r for r in out.results if r.triple[:2] == canon)
    orders = [c.subgroup.order for c in res.report.certificates]
    assert 9 in orders and 12 in orders
    assert any(v.kind == "CertifiedNonIsomorphic" for v in res.verdicts)
    assert res.rechecked >= 1


def test_empty_genus_range_is_empty():
    out = run_search(SearchSpec((lookup("gl23"),), 7, 7, 2))
    assert out.results == [] and out.failures == []


def test_failure_isolation(monkeypatch):
    import pillowcase.search as search_mod

    bad = parse_catalog("name bad\ndegree 4\ngens (1 2 3); (1 2)(3 4)\n")["bad"]
    real = search_mod.all_subgroups

    def flaky(g, *args, **kwargs):
        if g is bad.group:
            raise RuntimeError("boom")
        return real(g, *args, **kwargs)

    monkeypatch.setattr(search_mod, "all_subgroups", flaky)
    out = run_search(SearchSpec((bad, lookup("a4xc3")), 0, 4, 2))
    assert [f.group for f in out.failures] == ["bad"]
    assert "boom" in out.failures[0].error
    assert any(r.group == "a4xc3" for r in out.results)


def test_determinism_across_thread_counts():
    entries = (lookup("gl23"), lookup("a4xc3"))
    texts = []
    for threads in (1, 8):
        spec = SearchSpec(entries, 2, 4, 2, threads)
        out = run_search(spec)
        texts.append(dumps(report_document(out, spec)) + "\n".join(summary_lines(out, spec)))
    assert texts[0] == texts[1]
