import random

import pytest

from pillowcase.canonical import (
    Verdict,
    canonical_double_cover,
    differentials_nonisomorphic,
    double_cover_over_base,
    double_cover_over_pillowcase,
    forget_signs,
    sign_flip,
)
from pillowcase.certify import multifold_report
from pillowcase.covers import CoverDatum, quotient_tower, rh_genus
from pillowcase.perms import DegreeMismatch, Perm, conjugate_tuple, tuples_conjugate


@pytest.fixture(scope="module")
def a4_covers(a4xc3, a4xc3_subgroups):
    return [canonical_double_cover(a4xc3, h) for h in a4xc3_subgroups]


def test_a4xc3_double_covers(a4_covers):
    for d in a4_covers:
        assert d.over_base.degree == 72
        assert d.genus_sigma == 13 == 4 * 4 - 3
        assert rh_genus(d.over_base) == 13
        assert rh_genus(d.over_pillowcase) == 13


def test_pillowcase_double_cover_degrees(a4xc3, a4xc3_subgroups):
    for h in a4xc3_subgroups:
        t = quotient_tower(a4xc3, h)
        cover = double_cover_over_pillowcase(t)
        assert cover.degree == 2 * h.order
        assert len(cover.perms) == 4


def test_even_zero_cycle_structure(a4xc3, a4xc3_subgroups):
    """Index-3 points give one 6-cycle; index-2 points give two 2-cycles."""
    for h in a4xc3_subgroups:
        t = quotient_tower(a4xc3, h)
        cover = double_cover_over_pillowcase(t)
        g = a4xc3.group
        for x, p in zip(t.tiling_tuple, cover.perms):
            e = g.element_order(x)
            assert set(p.cycle_type()) == ({6} if e == 3 else {2})


def test_nonisomorphic_verdict(a4_covers):
    v = differentials_nonisomorphic(*a4_covers)
    assert v.kind == Verdict.CERTIFIED
    assert v.certified_nonisomorphic
    assert differentials_nonisomorphic(a4_covers[1], a4_covers[0]).kind == Verdict.CERTIFIED


def test_self_comparison_is_possible(a4_covers):
    v = differentials_nonisomorphic(a4_covers[0], a4_covers[0])
    assert v.kind == Verdict.POSSIBLE
    assert v.witness is not None


def test_relabelled_copy_is_recovered(a4_covers):
    d = a4_covers[0]
    rng = random.Random(3)
    images = list(range(d.over_base.degree))
    rng.shuffle(images)
    w = Perm(tuple(images))
    moved = conjugate_tuple(list(d.over_base.perms), w)
    clone = type(d)(d.over_pillowcase, CoverDatum(tuple(moved)), d.involution, d.genus_sigma)
    v = differentials_nonisomorphic(d, clone)
    assert v.kind == Verdict.POSSIBLE
    assert conjugate_tuple(list(d.over_base.perms), v.witness) == moved


def test_degree_mismatch(a4_covers, gl23, gl23_subgroups):
    h = next(h for h in gl23_subgroups if h.order == 6)
    other = canonical_double_cover(gl23, h)
    with pytest.raises(DegreeMismatch):
        differentials_nonisomorphic(a4_covers[0], other)


def _all_double_covers(parent, subgroups=None):
    rep = multifold_report(parent, subgroups)
    return [double_cover_over_base(parent, c.tower) for c in rep.certificates]


@pytest.mark.parametrize("name", ["gl23", "a4xc3", "sl32"])
def test_invariants_on_every_built_cover(name, request):
    parent = request.getfixturevalue(name)
    subs = request.getfixturevalue(f"{name}_subgroups") if name != "a4xc3" else None
    regular = list(parent.regular_cover().perms)
    covers = _all_double_covers(parent, subs)
    assert covers
    for d in covers:
        # genus three ways
        assert d.genus_sigma == 4 * parent.genus() - 3
        assert rh_genus(d.over_base) == d.genus_sigma
        assert rh_genus(d.over_pillowcase) == d.genus_sigma
        # the sign flip is central in the monodromy and forgetting signs is the parent
        assert d.involution == sign_flip(d.over_base.degree)
        assert all(d.involution * p == p * d.involution for p in d.over_base.perms)
        assert tuples_conjugate(forget_signs(d.over_base.perms), regular) is not None


def test_spanning_tree_root_is_gauge(a4xc3, a4xc3_subgroups):
    for h in a4xc3_subgroups:
        t = quotient_tower(a4xc3, h)
        base = double_cover_over_base(a4xc3, t, root=0)
        for root in range(1, t.index):
            other = double_cover_over_base(a4xc3, t, root=root)
            assert tuples_conjugate(list(base.over_base.perms), list(other.over_base.perms)) is not None
