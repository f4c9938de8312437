"""Branched covers of the sphere over three points and their subgroup quotients.

The base sphere carries a fixed cell structure: one vertex, loops ``x1`` and
``x2``, and three faces bounded by ``x1``, ``x2`` and ``x1^-1 x2^-1``.  A
permutation triple ``(s1, s2, s3)`` with ``s1*s2*s3 == 1`` lifts it to a
ribbon graph on the covering surface: vertices are sheets, the ``x_j``-edge
at sheet ``c`` ends at ``s_j(c)``, and the faces over point ``j`` are the
cycles of ``s_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .perms import (
    CosetSpace,
    FiniteGroup,
    GroupError,
    Perm,
    coset_space,
    compose_all,
    is_transitive,
    regular_perm,
    subgroup_members,
)


class CoverError(GroupError):
    pass


class NonIntegralGenus(CoverError):
    pass


class OpenPath(CoverError):
    pass


class NoSolution(CoverError):
    pass


@dataclass(frozen=True)
class CoverDatum:
    """A connected branched cover of the sphere given by its monodromy."""

    perms: tuple[Perm, ...]

    def __post_init__(self):
        perms = tuple(self.perms)
        object.__setattr__(self, "perms", perms)
        if not perms:
            raise CoverError("a cover needs at least one branch permutation")
        d = perms[0].degree
        if any(p.degree != d for p in perms):
            raise CoverError("branch permutations of different degrees")
        if not compose_all(perms, d).is_identity():
            raise CoverError("product of branch permutations is not the identity")
        if not is_transitive(perms, d):
            raise CoverError("branch permutations are not transitive (disconnected cover)")

    @property
    def degree(self) -> int:
        return self.perms[0].degree

    def __len__(self) -> int:
        return len(self.perms)


def rh_genus(cover: CoverDatum) -> int:
    """Genus of the covering surface by Riemann-Hurwitz."""
    d = cover.degree
    ram = sum(d - p.num_cycles() for p in cover.perms)
    twice = 2 - 2 * d + ram
    if twice % 2 or twice < 0:
        raise NonIntegralGenus(f"2g = {twice} for degree {d}")
    return twice // 2


def ramification_profile(cover: CoverDatum, j: int) -> tuple[int, ...]:
    if not 0 <= j < len(cover.perms):
        raise IndexError(f"branch index {j} out of range")
    return cover.perms[j].cycle_type()


@dataclass(frozen=True)
class GaloisCoverDatum:
    """Regular cover of the sphere: three elements of ``group`` with product one."""

    group: FiniteGroup
    entries: tuple[int, int, int]

    def __post_init__(self):
        e = tuple(self.entries)
        object.__setattr__(self, "entries", e)
        g = self.group
        if len(e) != 3 or any(not 0 <= x < g.order for x in e):
            raise CoverError("need three valid element indices")
        if g.product(e) != g.identity:
            raise CoverError("monodromy entries do not multiply to the identity")
        if not g.generates(e):
            raise CoverError("monodromy entries do not generate the group")

    @classmethod
    def from_perms(cls, group: FiniteGroup, perms: Sequence[Perm]) -> GaloisCoverDatum:
        try:
            return cls(group, tuple(group.index[p] for p in perms))
        except KeyError:
            raise CoverError("monodromy entry is not a group element") from None

    def perms(self) -> list[Perm]:
        return [self.group.elements[x] for x in self.entries]

    def regular_cover(self) -> CoverDatum:
        return CoverDatum(tuple(regular_perm(self.group, x) for x in self.entries))

    def genus(self) -> int:
        # cycles of the regular action of x all have length ord(x)
        n = self.group.order
        ram = sum(n - n // self.group.element_order(x) for x in self.entries)
        twice = 2 - 2 * n + ram
        if twice % 2:
            raise NonIntegralGenus(f"2g = {twice}")
        return twice // 2

    def conjugated(self, x: int) -> GaloisCoverDatum:
        return GaloisCoverDatum(self.group, tuple(self.group.conj(e, x) for e in self.entries))


# --- ribbon graphs ----------------------------------------------------------

Dart = tuple[int, int]  # (edge id, +1 or -1)


@dataclass
class RibbonGraph:
    """Lift of the base cell structure to a cover of the sphere.

    ``edges[e] = (src, dst, j)`` is the lift of ``x_{j+1}`` at ``src``; faces
    are closed dart sequences, ``face_point[f] = (j, cycle)`` records which
    point over base point ``j`` the face surrounds.
    """

    n_vertices: int
    edges: list[tuple[int, int, int]]
    faces: list[list[Dart]]
    face_point: list[tuple[int, tuple[int, ...]]]
    pole_faces: frozenset[int] = frozenset()

    def src(self, dart: Dart) -> int:
        e, s = dart
        return self.edges[e][0] if s > 0 else self.edges[e][1]

    def dst(self, dart: Dart) -> int:
        e, s = dart
        return self.edges[e][1] if s > 0 else self.edges[e][0]

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + len(self.faces)

    def genus(self) -> int:
        return (2 - self.euler_characteristic()) // 2

    def face_of_point(self, j: int, cycle_start: int) -> int:
        for f, (jj, cyc) in enumerate(self.face_point):
            if jj == j and cycle_start in cyc:
                return f
        raise KeyError((j, cycle_start))

    def is_closed(self, loop: Sequence[Dart]) -> bool:
        if not loop:
            return True
        for a, b in zip(loop, list(loop[1:]) + [loop[0]]):
            if self.dst(a) != self.src(b):
                return False
        return True

    def edge_vector(self, darts: Sequence[Dart]) -> int:
        v = 0
        for e, _ in darts:
            v ^= 1 << e
        return v

    def with_poles(self, poles) -> RibbonGraph:
        return RibbonGraph(self.n_vertices, self.edges, self.faces, self.face_point, frozenset(poles))


def ribbon_graph(s1: Perm, s2: Perm) -> RibbonGraph:
    d = s1.degree
    edges = [(c, s1(c), 0) for c in range(d)] + [(c, s2(c), 1) for c in range(d)]
    s1inv, s2inv = s1.inverse(), s2.inverse()
    s3 = (s1 * s2).inverse()
    faces: list[list[Dart]] = []
    points = []
    for j, p in ((0, s1), (1, s2)):
        for cyc in p.cycles():
            faces.append([(j * d + c, 1) for c in cyc])
            points.append((j, cyc))
    for cyc in s3.cycles():
        darts = []
        for c in cyc:
            a = s1inv(c)
            darts.append((a, -1))  # x1 backwards: c -> s1^-1(c)
            darts.append((d + s2inv(a), -1))  # x2 backwards: -> s2^-1 s1^-1 (c)
        faces.append(darts)
        points.append((2, cyc))
    return RibbonGraph(d, edges, faces, points)


def face_solve(rg: RibbonGraph, loop: Sequence[Dart]) -> int:
    """Parity of pole faces in a 2-chain bounded by ``loop`` (mod 2).

    On a genus-0 ribbon graph every closed loop bounds a 2-chain; the chain is
    unique up to adding all faces, which changes nothing when the number of
    pole faces is even.
    """
    if not rg.is_closed(loop):
        raise OpenPath("loop is not closed")
    if len(rg.pole_faces) % 2:
        raise ValueError("odd number of pole faces")
    target = rg.edge_vector(loop)
    # Gaussian elimination over F2: columns are faces, rows are edges
    pivots: dict[int, tuple[int, int]] = {}  # leading edge bit -> (edge vector, face combination)
    for f, darts in enumerate(rg.faces):
        v, comb = rg.edge_vector(darts), 1 << f
        while v:
            lead = v.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (v, comb)
                break
            pv, pc = pivots[lead]
            v ^= pv
            comb ^= pc
    comb = 0
    v = target
    while v:
        lead = v.bit_length() - 1
        if lead not in pivots:
            raise NoSolution("loop does not bound; surface is not a sphere")
        pv, pc = pivots[lead]
        v ^= pv
        comb ^= pc
    return sum(1 for f in rg.pole_faces if comb >> f & 1) % 2


def invert_path(path: Sequence[Dart]) -> list[Dart]:
    return [(e, -s) for e, s in reversed(path)]


def reduce_path(path: Sequence[Dart]) -> list[Dart]:
    out: list[Dart] = []
    for e, s in path:
        if out and out[-1] == (e, -s):
            out.pop()
        else:
            out.append((e, s))
    return out


def tree_paths(rg: RibbonGraph, root: int = 0) -> list[list[Dart]]:
    """Breadth-first spanning tree paths from ``root`` (x1 edges before x2)."""
    paths: list[list[Dart] | None] = [None] * rg.n_vertices
    paths[root] = []
    out_darts: list[list[Dart]] = [[] for _ in range(rg.n_vertices)]
    for e, (a, b, _) in enumerate(rg.edges):
        out_darts[a].append((e, 1))
    for e, (a, b, _) in enumerate(rg.edges):
        out_darts[b].append((e, -1))
    queue = [root]
    for v in queue:
        for dart in out_darts[v]:
            w = rg.dst(dart)
            if paths[w] is None:
                paths[w] = paths[v] + [dart]
                queue.append(w)
    if any(p is None for p in paths):
        raise CoverError("ribbon graph is disconnected")
    return paths  # type: ignore[return-value]


# --- quotient towers --------------------------------------------------------

@dataclass(frozen=True)
class BranchPoint:
    base_index: int
    coset_cycle: tuple[int, ...]
    local_monodromy: int  # parent-group index of an element of the subgroup
    ram_index: int


@dataclass
class QuotientTower:
    """The tower ``X -> X/H -> P^1`` for a subgroup ``H`` of the parent group.

    ``points`` lists every point of ``X/H`` over the three base points with its
    local monodromy in ``H``; ``branch_points`` keeps those with nontrivial
    monodromy.  ``tiling_tuple`` (parent indices) is a product-one generating
    4-tuple of ``H`` describing ``X -> X/H`` when there are exactly four
    branch points; ``tiling_faces`` names the face of each entry.
    """

    parent: GaloisCoverDatum
    subgroup: FiniteGroup
    cosets: CosetSpace
    quotient_cover: CoverDatum
    points: list[BranchPoint]
    graph: RibbonGraph
    edge_labels: list[int]
    tiling_tuple: tuple[int, ...] | None = None
    tiling_faces: tuple[int, ...] | None = None
    polygon_order: list[int] | None = field(default=None, repr=False)
    polygon_loops: list[list[Dart]] | None = field(default=None, repr=False)
    glue_edges: list[int] | None = field(default=None, repr=False)

    @property
    def branch_points(self) -> list[BranchPoint]:
        return [p for p in self.points if p.ram_index > 1]

    @property
    def index(self) -> int:
        return self.quotient_cover.degree

    def quotient_genus(self) -> int:
        return rh_genus(self.quotient_cover)

    def loop_value(self, loop: Sequence[Dart]) -> int:
        """Monodromy in ``H`` of a loop (dart path) in the quotient's graph."""
        g = self.parent.group
        m = g.identity
        for e, s in loop:
            lab = self.edge_labels[e]
            m = g.mul(lab if s > 0 else g.inv(lab), m)
        return m


def _local_monodromy(g: FiniteGroup, space: CosetSpace, x: int, rep: int, length: int) -> int:
    t = space.transversal[rep]
    return g.mul(g.mul(g.inv(t), g.power(x, length)), t)


def quotient_tower(parent: GaloisCoverDatum, h: FiniteGroup, walk_order: Sequence[int] = (0, 1)) -> QuotientTower:
    """Intermediate cover ``X/H -> P^1`` with local monodromy of ``X -> X/H``.

    ``walk_order`` selects which of ``g1, g2`` the Schreier transversal tries
    first; any order describes the same tower.
    """
    g = parent.group
    subgroup_members(g, h)
    g1, g2, g3 = parent.entries
    walk = [(g1, g2)[i] for i in walk_order]
    space = coset_space(g, h, walk)
    perms = tuple(space.action(x) for x in (g1, g2, g3))
    quotient = CoverDatum(perms)
    rg = ribbon_graph(perms[0], perms[1])
    points = []
    for j, x in enumerate((g1, g2, g3)):
        for cyc in perms[j].cycles():
            k = _local_monodromy(g, space, x, cyc[0], len(cyc))
            points.append(BranchPoint(j, cyc, k, g.element_order(k)))
    labels = []
    for src, dst, j in rg.edges:
        x = (g1, g2)[j]
        # Schreier label: t_dst^-1 * g_j * t_src, an element of H
        labels.append(g.mul(g.mul(g.inv(space.transversal[dst]), x), space.transversal[src]))
    poles = [f for f, pt in enumerate(points) if pt.ram_index > 1]
    rg = rg.with_poles(poles)
    tower = QuotientTower(parent, h, space, quotient, points, rg, labels)
    if len(poles) == 4 and rg.genus() == 0:
        _attach_tiling(tower)
    return tower


def polygon_loops(rg: RibbonGraph) -> tuple[list[int], list[list[Dart]], list[int]]:
    """Glue the faces of a genus-0 ribbon graph into one polygon.

    Faces are attached one at a time along a breadth-first dual spanning
    tree.  Returns the face order and, for each face in that order, a loop
    around it based at the final polygon's first vertex, such that the
    concatenation of the loops in order is null-homotopic in the graph.
    The third list holds the edge along which each face after the first
    was glued.
    """
    if rg.genus() != 0:
        raise NoSolution("polygon traversal needs a genus-0 ribbon graph")
    owner: dict[Dart, int] = {}
    for f, darts in enumerate(rg.faces):
        for dart in darts:
            owner[dart] = f
    polygon = list(rg.faces[0])
    order = [0]
    loops: list[list[Dart]] = [list(polygon)]
    merged = {0}
    glue: list[int] = []
    while len(merged) < len(rg.faces):
        pos, dart, face = None, None, None
        for i, dt in enumerate(polygon):
            partner = (dt[0], -dt[1])
            f = owner[partner]
            if f not in merged:
                pos, dart, face = i, dt, f
                break
        if pos is None:
            raise NoSolution("faces do not form a connected surface")
        # rotate polygon so that ``dart`` is last; loops are conjugated accordingly
        u = polygon[: pos + 1]
        polygon = polygon[pos + 1:] + u
        uinv = invert_path(u)
        loops = [reduce_path(uinv + lp + u) for lp in loops]
        q = rg.faces[face]
        k = q.index((dart[0], -dart[1]))
        q = q[k:] + q[:k]
        loops.append(list(q))
        polygon = polygon[:-1] + q[1:]
        merged.add(face)
        order.append(face)
        glue.append(dart[0])
    rest = reduce_path(polygon)
    while len(rest) >= 2 and rest[0] == (rest[-1][0], -rest[-1][1]):
        rest = rest[1:-1]
    if rest:
        raise NoSolution("polygon boundary does not collapse; surface is not a sphere")
    return order, loops, glue


def _attach_tiling(tower: QuotientTower) -> None:
    g = tower.parent.group
    rg = tower.graph
    order, loops, glue = polygon_loops(rg)
    vals = [tower.loop_value(lp) for lp in loops]
    # loops concatenate to the trivial loop; lifting composes right to left,
    # so the values multiply to one in reverse order
    pairs = [(f, v) for f, v in zip(order, vals) if f in rg.pole_faces]
    pairs.reverse()
    if g.product(v for _, v in pairs) != g.identity:
        raise CoverError("polygon loops do not multiply to one")
    rotations = [pairs[i:] + pairs[:i] for i in range(len(pairs))]
    best = min(rotations, key=lambda r: [v for _, v in r])
    tower.tiling_tuple = tuple(v for _, v in best)
    tower.tiling_faces = tuple(f for f, _ in best)
    tower.polygon_order = order
    tower.polygon_loops = loops
    tower.glue_edges = glue


def tiling_checks(tower: QuotientTower) -> None:
    """Raise unless the tiling tuple satisfies its invariants."""
    t = tower.tiling_tuple
    if t is None:
        raise CoverError("tower has no tiling tuple")
    g = tower.parent.group
    mem = tower.cosets.subgroup_members
    if g.product(t) != g.identity:
        raise CoverError("tiling tuple product is not one")
    if set(t) - mem or len(g.generated_by(t)) != len(mem):
        raise CoverError("tiling tuple does not generate the subgroup")
    orders = sorted(g.element_order(x) for x in t)
    if orders != sorted(p.ram_index for p in tower.branch_points):
        raise CoverError("tiling tuple orders differ from ramification indices")


def _path_value(g: FiniteGroup, label: dict[int, int], path: Sequence[Dart]) -> int:
    m = g.identity
    for e, s in path:
        m = g.mul(label[e] if s > 0 else g.inv(label[e]), m)
    return m


def tower_edge_gauge(tower: QuotientTower, values: dict[int, int] | None = None) -> list[int]:
    """Edge labels reconstructed from face values alone.

    Given the value in ``H`` of every polygon loop (default: the tiling tuple
    on its faces, identity elsewhere), solve for edge labels that are trivial
    on the edges never used for gluing and reproduce those loop values.
    Faces are peeled in reverse gluing order: the loop of the k-th glued face
    crosses its own gluing edge once and otherwise only edges glued later.
    """
    g = tower.parent.group
    rg = tower.graph
    if tower.polygon_loops is None:
        raise CoverError("tower has no polygon traversal")
    order, loops, glue = tower.polygon_order, tower.polygon_loops, tower.glue_edges
    if values is None:
        values = dict(zip(tower.tiling_faces, tower.tiling_tuple))
    label = {e: g.identity for e in range(len(rg.edges)) if e not in set(glue)}
    for k in range(len(order) - 1, 0, -1):
        lp, e = loops[k], glue[k - 1]
        hits = [i for i, (ee, _) in enumerate(lp) if ee == e]
        if len(hits) != 1 or any(ee not in label for ee, _ in lp if ee != e):
            raise CoverError("peeling failed: loop has several unsolved edges")
        i = hits[0]
        before, after = _path_value(g, label, lp[:i]), _path_value(g, label, lp[i + 1:])
        # target = after * x * before, lifting composes right to left
        x = g.mul(g.mul(g.inv(after), values.get(order[k], g.identity)), g.inv(before))
        label[e] = x if lp[i][1] > 0 else g.inv(x)
    for f, lp in zip(order, loops):
        if _path_value(g, label, lp) != values.get(f, g.identity):
            raise CoverError("reconstructed labels do not reproduce the face values")
    return [label[e] for e in range(len(rg.edges))]


def compose_from_labels(tower: QuotientTower, labels: Sequence[int]) -> list[Perm]:
    """Triple of ``X -> P^1`` on sheets ``(coset, h)`` from edge labels in ``H``."""
    g = tower.parent.group
    mem = sorted(tower.cosets.subgroup_members)
    pos = {x: i for i, x in enumerate(mem)}
    n, m = tower.index, len(mem)
    perms = []
    for j in (0, 1):
        images = [0] * (n * m)
        for c in range(n):
            e = j * n + c
            dst = tower.graph.edges[e][1]
            for i, h in enumerate(mem):
                images[c * m + i] = dst * m + pos[g.mul(labels[e], h)]
        perms.append(Perm(tuple(images)))
    perms.append((perms[0] * perms[1]).inverse())
    return perms
