"""Canonical double covers of pulled-back pillowcase differentials.

For a certified tower ``X -> A -> P^1`` the canonical cover ``Sigma -> X`` is
the fibre product of ``X -> A`` with the elliptic double cover ``E -> A``
branched at the four poles.  Sheets of ``Sigma -> P^1`` are pairs
``(g, s)`` with ``g`` in the parent group and ``s`` a sign; the sign part of
the monodromy is the square-root character of the pillowcase, evaluated on
Schreier loops of the quotient's ribbon graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .covers import (
    CoverDatum,
    CoverError,
    GaloisCoverDatum,
    QuotientTower,
    face_solve,
    invert_path,
    quotient_tower,
    reduce_path,
    rh_genus,
    tree_paths,
)
from .perms import DegreeMismatch, Perm, tuples_conjugate


class Disconnected(CoverError):
    pass


class InvariantBreach(CoverError):
    pass


@dataclass(frozen=True)
class DoubleCoverDatum:
    over_pillowcase: CoverDatum
    over_base: CoverDatum
    involution: Perm
    genus_sigma: int


def _subgroup_positions(tower: QuotientTower) -> tuple[list[int], dict[int, int]]:
    mem = sorted(tower.cosets.subgroup_members)
    return mem, {x: i for i, x in enumerate(mem)}


def double_cover_over_pillowcase(tower: QuotientTower) -> CoverDatum:
    """Four-point cover ``Sigma -> A`` acting on ``H x {+,-}`` (index ``2*h + s``)."""
    if tower.tiling_tuple is None:
        raise CoverError("tower has no tiling tuple")
    g = tower.parent.group
    mem, pos = _subgroup_positions(tower)
    perms = []
    for t in tower.tiling_tuple:
        images = [0] * (2 * len(mem))
        for i, h in enumerate(mem):
            k = pos[g.mul(t, h)]
            images[2 * i] = 2 * k + 1
            images[2 * i + 1] = 2 * k
        perms.append(Perm(tuple(images)))
    try:
        return CoverDatum(tuple(perms))
    except CoverError as exc:
        if "transitive" in str(exc):
            raise Disconnected("q is a global square") from exc
        raise


def sign_cochain(tower: QuotientTower, root: int = 0) -> list[int]:
    """Square-root character on the edges of the quotient's ribbon graph.

    Edges of a breadth-first spanning tree get 0; every other edge gets the
    character of its fundamental loop, computed by :func:`face_solve`.
    """
    rg = tower.graph
    paths = tree_paths(rg, root)
    signs = []
    for e, (src, dst, _) in enumerate(rg.edges):
        loop = reduce_path(paths[src] + [(e, 1)] + invert_path(paths[dst]))
        signs.append(face_solve(rg, loop) if loop else 0)
    return signs


def over_base_triple(tower: QuotientTower, signs: Sequence[int]) -> list[Perm]:
    parent = tower.parent
    g = parent.group
    coset_of = tower.cosets.coset_of
    n = tower.index
    perms = []
    for j in (0, 1):
        x = parent.entries[j]
        images = [0] * (2 * g.order)
        for y in range(g.order):
            flip = signs[j * n + coset_of[y]]
            z = g.mul(x, y)
            images[2 * y] = 2 * z + flip
            images[2 * y + 1] = 2 * z + (1 - flip)
        perms.append(Perm(tuple(images)))
    perms.append((perms[0] * perms[1]).inverse())
    return perms


def sign_flip(degree: int) -> Perm:
    return Perm(tuple(i ^ 1 for i in range(degree)))


def forget_signs(perms: Sequence[Perm]) -> list[Perm]:
    """Action on sign-flip orbits ``{2k, 2k+1}``."""
    return [Perm(tuple(p(2 * k) // 2 for k in range(p.degree // 2))) for p in perms]


def double_cover_over_base(parent: GaloisCoverDatum, tower: QuotientTower,
                           root: int = 0) -> DoubleCoverDatum:
    """Monodromy of ``Sigma -> P^1`` in degree ``2|G|``, with every oracle enforced."""
    if tower.parent is not parent and tower.parent != parent:
        raise CoverError("tower belongs to a different parent")
    over_a = double_cover_over_pillowcase(tower)
    perms = over_base_triple(tower, sign_cochain(tower, root))
    cover = CoverDatum(tuple(perms))
    flip = sign_flip(cover.degree)
    genus_x = parent.genus()
    g_sigma = rh_genus(cover)
    if g_sigma != 4 * genus_x - 3 or rh_genus(over_a) != g_sigma:
        raise InvariantBreach(
            f"genus mismatch: stratum {4 * genus_x - 3}, base {g_sigma}, pillowcase {rh_genus(over_a)}")
    if any(flip * p != p * flip for p in perms):
        raise InvariantBreach("sign flip does not commute with the monodromy")
    if tuples_conjugate(forget_signs(perms), list(parent.regular_cover().perms)) is None:
        raise InvariantBreach("sign-forgetting projection is not the parent regular cover")
    _check_cycle_structure(tower, perms, over_a)
    return DoubleCoverDatum(over_a, cover, flip, g_sigma)


def _check_cycle_structure(tower: QuotientTower, perms: Sequence[Perm], over_a: CoverDatum) -> None:
    """Cycles of ``Sigma -> P^1`` over each point of ``A`` match ``Sigma -> A`` there."""
    coset_of = tower.cosets.coset_of
    face_entry = dict(zip(tower.tiling_faces, range(4)))
    for f, p in enumerate(tower.points):
        if f in face_entry:
            lengths = set(over_a.perms[face_entry[f]].cycle_type())
        else:
            lengths = {1}
        want = {len(p.coset_cycle) * m for m in lengths}
        got = {len(c) for c in perms[p.base_index].cycles()
               if coset_of[c[0] // 2] in p.coset_cycle}
        if got != want:
            raise InvariantBreach(f"cycle lengths {got} over point {f}, expected {want}")


def canonical_double_cover(parent: GaloisCoverDatum, h) -> DoubleCoverDatum:
    return double_cover_over_base(parent, quotient_tower(parent, h))


@dataclass(frozen=True)
class Verdict:
    kind: str
    witness: Perm | None = None

    CERTIFIED = "CertifiedNonIsomorphic"
    POSSIBLE = "PossiblyIsomorphic"

    @property
    def certified_nonisomorphic(self) -> bool:
        return self.kind == self.CERTIFIED

    @property
    def note(self) -> str:
        if self.certified_nonisomorphic:
            return ("canonical covers are not conjugate in S_{2|G|}, so the "
                    "differentials are not isomorphic")
        return ("canonical covers are conjugate; isomorphism of the differentials "
                "themselves is not certified")


def differentials_nonisomorphic(d1: DoubleCoverDatum, d2: DoubleCoverDatum) -> Verdict:
    if d1.over_base.degree != d2.over_base.degree:
        raise DegreeMismatch("double covers of different degrees")
    w = tuples_conjugate(list(d1.over_base.perms), list(d2.over_base.perms))
    if w is None:
        return Verdict(Verdict.CERTIFIED)
    return Verdict(Verdict.POSSIBLE, w)
