"""Certification of uniform pillowcase covers with simple zeros only.

A subgroup ``H`` of the monodromy group of a regular cover ``X -> P^1``
certifies when ``X/H`` is rational and ``X -> X/H`` is branched over exactly
four points with indices 2 or 3, at least one of them 3.  The pillowcase
differential on ``X/H`` (simple poles at the four branch points) then pulls
back to a quadratic differential on ``X`` whose zeros sit over the index-3
points, all simple.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .covers import GaloisCoverDatum, QuotientTower, quotient_tower, tiling_checks
from .perms import FiniteGroup, all_subgroups, canonical_key

INTERPRETATION = (
    "(X, q) is a uniform pillowcase cover with simple zeros only; a visible "
    "Lagrangian over the line C*q exists in the SL(2,C) Hitchin system."
)
UNIFORMITY_NOTE = (
    "X -> X/H is Galois, so all points in a fibre share one ramification index; "
    "checked point by point."
)


class Reason(enum.Enum):
    NOT_RATIONAL = "NotRational"
    WRONG_BRANCH_COUNT = "WrongBranchCount"
    BAD_INDEX = "BadIndex"
    NO_ORDER_THREE_POINT = "NoOrderThreePoint"


@dataclass(frozen=True)
class Rejection:
    reason: Reason
    value: int | None = None

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        if self.value is None:
            return self.reason.value
        return f"{self.reason.value}({self.value})"


PointLabel = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class VanishingLocus:
    """Zeros of a pulled-back differential as points of ``X``.

    A point of ``X`` over base point ``j`` is a cycle of the regular action
    of ``g_j``; its label is ``(j, sorted element indices)``.
    """

    points: tuple[PointLabel, ...]

    def __len__(self) -> int:
        return len(self.points)

    def one_based(self) -> list[list]:
        return [[j + 1, [i + 1 for i in pts]] for j, pts in self.points]


@dataclass
class PillowcaseCertificate:
    tower: QuotientTower
    genus_X: int
    mu: tuple[int, ...]
    vanishing_locus: VanishingLocus
    uniform: bool = True
    uniformity_note: str = UNIFORMITY_NOTE
    interpretation: str = INTERPRETATION

    @property
    def subgroup(self) -> FiniteGroup:
        return self.tower.subgroup

    def subgroup_key(self) -> tuple:
        return canonical_key(self.tower.subgroup)


def x_points(parent: GaloisCoverDatum, j: int) -> list[tuple[int, ...]]:
    """Points of ``X`` over base point ``j``: orbits ``<g_j> x``, sorted."""
    g = parent.group
    x = parent.entries[j]
    seen = [False] * g.order
    out = []
    for start in range(g.order):
        if seen[start]:
            continue
        cyc = []
        y = start
        while not seen[y]:
            seen[y] = True
            cyc.append(y)
            y = g.mul(x, y)
        out.append(tuple(sorted(cyc)))
    return out


def point_indices(tower: QuotientTower) -> dict[PointLabel, int]:
    """Ramification index of ``X -> X/H`` at every point of ``X`` over the base points."""
    parent = tower.parent
    g = parent.group
    coset_of = tower.cosets.coset_of
    out = {}
    for j in range(3):
        lengths = {}
        for cyc in tower.quotient_cover.perms[j].cycles():
            for c in cyc:
                lengths[c] = len(cyc)
        ordx = g.element_order(parent.entries[j])
        for pts in x_points(parent, j):
            ell = lengths[coset_of[pts[0]]]
            if ordx % ell:
                raise AssertionError("coset cycle length does not divide element order")
            out[(j, pts)] = ordx // ell
    return out


def vanishing_locus(tower: QuotientTower) -> VanishingLocus:
    """Points of ``X`` ramified to order 3 over the quotient."""
    idx = point_indices(tower)
    return VanishingLocus(tuple(sorted(p for p, e in idx.items() if e == 3)))


def check_uniform(tower: QuotientTower) -> bool:
    """Every point of ``X`` over a point of ``X/H`` has that point's ramification index.

    The index at a point of ``X`` comes from cycle lengths; the index of the
    point below comes from the order of its local monodromy element.
    """
    idx = point_indices(tower)
    coset_of = tower.cosets.coset_of
    for p in tower.points:
        above = [e for (j, pts), e in idx.items()
                 if j == p.base_index and coset_of[pts[0]] in p.coset_cycle]
        if not above or any(e != p.ram_index for e in above):
            return False
    return True


def certify(parent: GaloisCoverDatum, h: FiniteGroup) -> PillowcaseCertificate | Rejection:
    """Certificate that ``X -> X/H`` is a uniform pillowcase cover with simple zeros only."""
    tower = quotient_tower(parent, h)
    return certify_tower(tower)


def certify_tower(tower: QuotientTower) -> PillowcaseCertificate | Rejection:
    if tower.quotient_genus() != 0:
        return Rejection(Reason.NOT_RATIONAL, tower.quotient_genus())
    branch = tower.branch_points
    if len(branch) != 4:
        return Rejection(Reason.WRONG_BRANCH_COUNT, len(branch))
    for p in branch:
        if p.ram_index not in (2, 3):
            return Rejection(Reason.BAD_INDEX, p.ram_index)
    if all(p.ram_index != 3 for p in branch):
        return Rejection(Reason.NO_ORDER_THREE_POINT)
    tiling_checks(tower)
    genus = tower.parent.genus()
    idx = point_indices(tower)
    # pullback of a simple pole through index e gives a zero of order e - 2
    zeros = sorted(e - 2 for e in idx.values() if e > 2)
    mu = tuple(zeros)
    if sum(mu) != 4 * genus - 4 or any(m != 1 for m in mu):
        raise AssertionError(f"zero orders {mu} inconsistent with genus {genus}")
    if not check_uniform(tower):
        raise AssertionError("Galois quotient with non-uniform fibre")
    locus = VanishingLocus(tuple(sorted(p for p, e in idx.items() if e == 3)))
    return PillowcaseCertificate(tower, genus, mu, locus)


@dataclass
class MultifoldReport:
    parent: GaloisCoverDatum
    certificates: list[PillowcaseCertificate]
    n: int
    pairwise_distinct: list[list[bool]]
    rejections: Counter = field(default_factory=Counter)

    @property
    def multifold(self) -> bool:
        return self.n >= 2

    def mu_multiset(self) -> list[tuple[int, ...]]:
        return sorted(c.mu for c in self.certificates)


def multifold_report(parent: GaloisCoverDatum, subgroups: Sequence[FiniteGroup] | None = None,
                     mapper: Callable[..., Iterable] = map) -> MultifoldReport:
    """Certify every subgroup and count distinct vanishing loci.

    ``mapper`` may be a parallel ``map``; results are re-sorted by subgroup key
    so the report does not depend on it.
    """
    if subgroups is None:
        subgroups = all_subgroups(parent.group)
    results = list(mapper(_certify_one, [(parent, h) for h in subgroups]))
    certs = []
    rejections: Counter = Counter()
    for r in results:
        if isinstance(r, Rejection):
            rejections[str(r.reason.value)] += 1
        else:
            certs.append(r)
    certs.sort(key=lambda c: c.subgroup_key())
    loci = [c.vanishing_locus for c in certs]
    distinct = [[a != b for b in loci] for a in loci]
    return MultifoldReport(parent, certs, len(set(loci)), distinct, rejections)


def _certify_one(args):
    parent, h = args
    return certify(parent, h)


def stabilizer_indices(parent: GaloisCoverDatum, members: frozenset[int] | set[int]) -> dict[PointLabel, int]:
    """Ramification indices of ``X -> X/H`` from deck-group stabilisers.

    The deck group acts on the right, so the point ``<g_j> x`` has stabiliser
    ``x^-1 <g_j> x`` and index ``|x^-1 <g_j> x  intersect  H|``.  This avoids
    cosets, transversals and ribbon graphs entirely.
    """
    g = parent.group
    out = {}
    for j in range(3):
        cyc = set(g.generated_by([parent.entries[j]]))
        for pts in x_points(parent, j):
            x = pts[0]
            xi = g.inv(x)
            stab = {g.mul(g.mul(xi, c), x) for c in cyc}
            out[(j, pts)] = len(stab & set(members))
    return out


def recheck_certificate(cert: PillowcaseCertificate) -> bool:
    """Re-derive zero orders and vanishing locus independently of the tower."""
    parent = cert.tower.parent
    idx = stabilizer_indices(parent, cert.tower.cosets.subgroup_members)
    mu = tuple(sorted(e - 2 for e in idx.values() if e > 2))
    locus = tuple(sorted(p for p, e in idx.items() if e == 3))
    return mu == cert.mu and locus == cert.vanishing_locus.points
