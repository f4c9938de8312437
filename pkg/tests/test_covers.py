import random

import pytest

from pillowcase.covers import (
    CoverDatum,
    CoverError,
    GaloisCoverDatum,
    NonIntegralGenus,
    OpenPath,
    compose_from_labels,
    face_solve,
    quotient_tower,
    ramification_profile,
    reduce_path,
    rh_genus,
    ribbon_graph,
    tiling_checks,
    tower_edge_gauge,
    tree_paths,
)
from pillowcase.perms import Perm, all_subgroups, parse_perm_list, tuples_conjugate


def test_rh_genus_small_covers():
    # degree 2 branched at two points: sphere
    t = parse_perm_list("(1 2); (1 2); ()", 2)
    assert rh_genus(CoverDatum(tuple(t))) == 0
    # torus as a degree-3 cover branched at three points of order 3
    t = parse_perm_list("(1 2 3); (1 2 3); (1 2 3)", 3)
    assert rh_genus(CoverDatum(tuple(t))) == 1


def test_cover_datum_validation():
    with pytest.raises(CoverError):
        CoverDatum(tuple(parse_perm_list("(1 2); (); ()", 2)))
    with pytest.raises(CoverError):
        CoverDatum(tuple(parse_perm_list("(1 2); (1 2); ()", 3)))


def test_parent_genera(gl23, sl32, a4xc3):
    assert gl23.genus() == 2
    assert sl32.genus() == 3
    assert a4xc3.genus() == 4
    for p in (gl23, sl32, a4xc3):
        assert rh_genus(p.regular_cover()) == p.genus()


def test_galois_datum_rejects_non_generating(a4xc3):
    g = a4xc3.group
    x = a4xc3.entries[0]
    with pytest.raises(CoverError):
        GaloisCoverDatum(g, (x, g.inv(x), g.identity))


def test_ramification_profile(gl23):
    cover = gl23.regular_cover()
    assert ramification_profile(cover, 0) == (8,) * 6
    assert ramification_profile(cover, 1) == (2,) * 24
    assert ramification_profile(cover, 2) == (3,) * 16


def test_ribbon_graph_euler_characteristic(a4xc3):
    s1, s2, _ = a4xc3.regular_cover().perms
    rg = ribbon_graph(s1, s2)
    assert rg.genus() == a4xc3.genus()
    for face in rg.faces:
        assert rg.is_closed(face)


def _random_loop(rg, rng, base, steps):
    out = {v: [] for v in range(rg.n_vertices)}
    for e, (a, b, _) in enumerate(rg.edges):
        out[a].append((e, 1))
        out[b].append((e, -1))
    paths = tree_paths(rg, base)
    v, walk = base, []
    for _ in range(steps):
        dart = rng.choice(out[v])
        walk.append(dart)
        v = rg.dst(dart)
    back = [(e, -s) for e, s in reversed(paths[v])]
    return walk + paths[base] + back


@pytest.fixture(scope="module")
def sphere_graph(a4xc3, a4xc3_subgroups):
    t = quotient_tower(a4xc3, a4xc3_subgroups[1])
    return t.graph


def test_face_solve_homomorphism(sphere_graph):
    rg = sphere_graph
    rng = random.Random(7)
    for _ in range(100):
        l1 = _random_loop(rg, rng, 0, rng.randint(0, 12))
        l2 = _random_loop(rg, rng, 0, rng.randint(0, 12))
        assert face_solve(rg, l1 + l2) == face_solve(rg, l1) ^ face_solve(rg, l2)


def test_face_solve_on_faces(sphere_graph):
    rg = sphere_graph
    for f, face in enumerate(rg.faces):
        assert face_solve(rg, face) == (f in rg.pole_faces)


def test_face_solve_open_path(sphere_graph):
    rg = sphere_graph
    e = next(i for i, (a, b, _) in enumerate(rg.edges) if a != b)
    with pytest.raises(OpenPath):
        face_solve(rg, [(e, 1)])


def test_reduce_path():
    assert reduce_path([(0, 1), (1, 1), (1, -1), (0, -1)]) == []


def test_quotient_tower_example_h1(a4xc3, a4xc3_subgroups):
    h1, _ = a4xc3_subgroups
    t = quotient_tower(a4xc3, h1)
    assert t.index == 4
    assert t.quotient_genus() == 0
    assert sorted(t.quotient_cover.perms[j].cycle_type() for j in range(3)) == [(2, 2), (3, 1), (3, 1)]
    assert sorted(p.ram_index for p in t.branch_points) == [3, 3, 3, 3]
    tiling_checks(t)


def test_quotient_tower_example_h2(a4xc3, a4xc3_subgroups):
    _, h2 = a4xc3_subgroups
    t = quotient_tower(a4xc3, h2)
    assert t.index == 3
    assert sorted(p.ram_index for p in t.branch_points) == [2, 3, 3, 3]
    tiling_checks(t)


def test_local_monodromy_lies_in_subgroup(gl23, gl23_subgroups):
    for h in gl23_subgroups:
        t = quotient_tower(gl23, h)
        mem = t.cosets.subgroup_members
        assert all(p.local_monodromy in mem for p in t.points)
        assert all(lab in mem for lab in t.edge_labels)


@pytest.mark.parametrize("which", [0, 1])
def test_composite_oracle_recovers_parent(a4xc3, a4xc3_subgroups, which):
    """Labels rebuilt from the tiling tuple compose back to the parent cover."""
    t = quotient_tower(a4xc3, a4xc3_subgroups[which])
    labels = tower_edge_gauge(t)
    triple = compose_from_labels(t, labels)
    assert tuples_conjugate(triple, list(a4xc3.regular_cover().perms)) is not None


def test_composite_oracle_with_schreier_labels(gl23, gl23_subgroups):
    for h in [h for h in gl23_subgroups if h.order == 6]:
        t = quotient_tower(gl23, h)
        triple = compose_from_labels(t, t.edge_labels)
        assert tuples_conjugate(triple, list(gl23.regular_cover().perms)) is not None


def test_walk_order_does_not_change_tower(a4xc3, a4xc3_subgroups):
    for h in a4xc3_subgroups:
        t1 = quotient_tower(a4xc3, h, (0, 1))
        t2 = quotient_tower(a4xc3, h, (1, 0))
        assert tuples_conjugate(list(t1.quotient_cover.perms), list(t2.quotient_cover.perms)) is not None


def test_all_towers_have_consistent_genus(a4xc3):
    for h in all_subgroups(a4xc3.group):
        t = quotient_tower(a4xc3, h)
        assert t.graph.genus() == t.quotient_genus()


def test_non_integral_genus():
    bad = CoverDatum.__new__(CoverDatum)
    object.__setattr__(bad, "perms", (Perm.from_cycles("(1 2)", 2), Perm.identity(2)))
    with pytest.raises(NonIntegralGenus):
        rh_genus(bad)
