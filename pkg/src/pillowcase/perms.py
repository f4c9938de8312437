"""Permutations and small finite permutation groups.

Composition is right-to-left: ``(p * q)(x) == p(q(x))``.  Points are 0-based
internally; cycle notation read from or written to text is 1-based.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_ORDER_CAP = 10_000
SUBGROUP_ORDER_CAP = 500
_TABLE_LIMIT = 2048


class GroupError(ValueError):
    pass


class DegreeMismatch(GroupError):
    pass


class OrderCapExceeded(GroupError):
    pass


class SingularMatrix(GroupError):
    pass


class UnsupportedField(GroupError):
    pass


class NotASubgroup(GroupError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images!r}")

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None) -> Perm:
        """Parse 1-based cycle notation such as ``(1 2 3)(4,5)``.

        Fixed points may be omitted; ``()`` or an empty string is the identity.
        Without ``degree`` the largest point mentioned sets the degree.
        """
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            pts = [int(tok) - 1 for tok in re.split(r"[\s,]+", body.strip()) if tok]
            cycles.append(pts)
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        top = max((p for c in cycles for p in c), default=-1) + 1
        if degree is None:
            degree = top
        elif top > degree:
            raise DegreeMismatch(f"point {top} exceeds degree {degree}")
        images = list(range(degree))
        seen = set()
        for c in cycles:
            for i, p in enumerate(c):
                if p < 0 or p in seen:
                    raise ValueError(f"malformed cycle notation: {text!r}")
                seen.add(p)
                images[p] = c[(i + 1) % len(c)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Perm) -> Perm:
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        a = self.images
        return Perm(tuple(a[i] for i in other.images))

    def __pow__(self, n: int) -> Perm:
        if n < 0:
            return self.inverse() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, singletons: bool = True) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its least point, sorted by that point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if singletons or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def num_cycles(self) -> int:
        return len(self.cycles())

    @property
    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.degree else 1

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def to_cycles(self) -> str:
        """1-based cycle notation; the identity is ``()``."""
        cyc = self.cycles(singletons=False)
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.to_cycles()


def parse_perm_list(text: str, degree: int | None = None) -> list[Perm]:
    """Parse ``;``-separated cycle notations; all entries share one degree."""
    parts = [p.strip() for p in text.split(";")]
    if degree is None:
        degree = max(Perm.from_cycles(p).degree for p in parts)
    return [Perm.from_cycles(p, degree) for p in parts]


def compose_all(perms: Sequence[Perm], degree: int) -> Perm:
    result = Perm.identity(degree)
    for p in perms:
        result = result * p
    return result


def orbits(perms: Sequence[Perm], degree: int) -> list[list[int]]:
    """Orbits of the group generated by ``perms``, each sorted, ordered by least point."""
    seen = [False] * degree
    out = []
    for start in range(degree):
        if seen[start]:
            continue
        seen[start] = True
        orb = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for p in perms:
                y = p.images[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        out.append(sorted(orb))
    return out


def is_transitive(perms: Sequence[Perm], degree: int) -> bool:
    return degree <= 1 or len(orbits(perms, degree)) == 1


class FiniteGroup:
    """A permutation group with all of its elements enumerated.

    Elements are listed breadth-first by word length in the generators, each
    layer sorted by image array, so the identity is always index 0.  A group
    returned by :func:`all_subgroups` keeps a reference to its ``parent`` and
    the parent indices of its elements in ``members``.
    """

    def __init__(self, degree: int, generators: Sequence[Perm], elements: Sequence[Perm],
                 parent: FiniteGroup | None = None, members: Sequence[int] | None = None):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.parent = parent
        self.members = tuple(members) if members is not None else None

    def __repr__(self) -> str:
        return f"FiniteGroup(degree={self.degree}, order={self.order})"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return self.index[Perm.identity(self.degree)]

    @cached_property
    def _table(self) -> list[list[int]] | None:
        if self.order > _TABLE_LIMIT:
            return None
        idx = self.index
        els = self.elements
        return [[idx[a * b] for b in els] for a in els]

    def mul(self, i: int, j: int) -> int:
        table = self._table
        if table is not None:
            return table[i][j]
        return self.index[self.elements[i] * self.elements[j]]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        return tuple(self.index[p.inverse()] for p in self.elements)

    def inv(self, i: int) -> int:
        return self._inverses[i]

    def product(self, indices: Iterable[int]) -> int:
        result = self.identity
        for i in indices:
            result = self.mul(result, i)
        return result

    def power(self, i: int, n: int) -> int:
        if n < 0:
            i, n = self.inv(i), -n
        result = self.identity
        for _ in range(n):
            result = self.mul(result, i)
        return result

    def conj(self, i: int, x: int) -> int:
        """``x * i * x^-1``."""
        return self.mul(self.mul(x, i), self.inv(x))

    def element_order(self, i: int) -> int:
        return self.elements[i].order

    def generated_by(self, indices: Iterable[int]) -> frozenset[int]:
        """Element set of the subgroup generated by the given elements."""
        return _close(self, {self.identity}, list(indices))

    def generates(self, indices: Iterable[int]) -> bool:
        return len(self.generated_by(indices)) == self.order

    def parent_index(self, i: int) -> int:
        if self.members is None:
            return i
        return self.members[i]

    def __contains__(self, p: Perm) -> bool:
        return p in self.index


def _close(g: FiniteGroup, start: set[int], gens: list[int]) -> frozenset[int]:
    elems = set(start)
    elems.add(g.identity)
    queue = list(elems)
    for x in gens:
        if x not in elems:
            elems.add(x)
            queue.append(x)
    while queue:
        x = queue.pop()
        for s in gens:
            y = g.mul(x, s)
            if y not in elems:
                elems.add(y)
                queue.append(y)
    return frozenset(elems)


def group_from_generators(degree: int, generators: Sequence[Perm],
                          cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    gens = tuple(generators)
    for p in gens:
        if p.degree != degree:
            raise DegreeMismatch(f"generator of degree {p.degree}, expected {degree}")
    ident = Perm.identity(degree)
    seen = {ident}
    layer = [ident]
    elements = [ident]
    while layer:
        nxt = set()
        for x in layer:
            for s in gens:
                y = s * x
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
            if len(seen) > cap:
                raise OrderCapExceeded(f"group order exceeds cap {cap}")
        layer = sorted(nxt)
        elements.extend(layer)
    return FiniteGroup(degree, gens, elements)


SUPPORTED_PRIMES = (2, 3, 5, 7)


def _det_mod(m: list[list[int]], p: int) -> int:
    a = [[x % p for x in row] for row in m]
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


def vectors(prime: int, dim: int) -> list[tuple[int, ...]]:
    """Nonzero column vectors of F_p^dim in lexicographic order."""
    out = []
    for n in range(1, prime ** dim):
        v = []
        for _ in range(dim):
            v.append(n % prime)
            n //= prime
        out.append(tuple(reversed(v)))
    return sorted(out)


def matrix_to_perm(matrix: Sequence[Sequence[int]], prime: int) -> Perm:
    dim = len(matrix)
    vecs = vectors(prime, dim)
    where = {v: i for i, v in enumerate(vecs)}
    images = []
    for v in vecs:
        w = tuple(sum(matrix[r][c] * v[c] for c in range(dim)) % prime for r in range(dim))
        images.append(where[w])
    return Perm(tuple(images))


def group_from_matrices(prime: int, dim: int, generators: Sequence[Sequence[Sequence[int]]],
                        cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Matrix group over F_p acting on the ``p**dim - 1`` nonzero vectors."""
    if prime not in SUPPORTED_PRIMES:
        raise UnsupportedField(f"prime {prime} not in {SUPPORTED_PRIMES}")
    perms = []
    for m in generators:
        m = [list(row) for row in m]
        if len(m) != dim or any(len(row) != dim for row in m):
            raise DegreeMismatch(f"matrix is not {dim}x{dim}")
        if _det_mod(m, prime) == 0:
            raise SingularMatrix(f"matrix {m} is singular mod {prime}")
        perms.append(matrix_to_perm(m, prime))
    return group_from_generators(prime ** dim - 1, perms, cap=cap)


def direct_product(a: FiniteGroup, b: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Product acting on the disjoint union: ``a`` on the first ``a.degree`` points."""
    if a.order * b.order > cap:
        raise OrderCapExceeded(f"product order {a.order * b.order} exceeds cap {cap}")
    n = a.degree + b.degree
    gens = [Perm(p.images + tuple(range(a.degree, n))) for p in a.generators]
    gens += [Perm(tuple(range(a.degree)) + tuple(a.degree + i for i in p.images))
             for p in b.generators]
    return group_from_generators(n, gens, cap=cap)


def embed_left(a: FiniteGroup, b: FiniteGroup, p: Perm) -> Perm:
    return Perm(p.images + tuple(range(a.degree, a.degree + b.degree)))


def embed_right(a: FiniteGroup, b: FiniteGroup, p: Perm) -> Perm:
    return Perm(tuple(range(a.degree)) + tuple(a.degree + i for i in p.images))


def subgroup_from_members(g: FiniteGroup, members: Iterable[int]) -> FiniteGroup:
    """Wrap a closed set of element indices of ``g`` as a subgroup object."""
    mem = sorted(set(members))
    gens = _greedy_generators(g, mem)
    return FiniteGroup(g.degree, [g.elements[i] for i in gens],
                       [g.elements[i] for i in mem], parent=g, members=mem)


def subgroup_generated(g: FiniteGroup, indices: Iterable[int]) -> FiniteGroup:
    return subgroup_from_members(g, g.generated_by(indices))


def _greedy_generators(g: FiniteGroup, members: list[int]) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for i in members:
        if i not in span:
            gens.append(i)
            span = set(g.generated_by(gens))
    return gens


def canonical_key(h: FiniteGroup) -> tuple:
    """Sort key of a subgroup: order, then greedy generator indices in the parent."""
    gens = tuple(h.parent.index[p] for p in h.generators) if h.parent else ()
    return (h.order, gens, h.members or ())


def all_subgroups(g: FiniteGroup, cap: int = SUBGROUP_ORDER_CAP) -> list[FiniteGroup]:
    """Every subgroup exactly once: cyclic subgroups, then closure under joins."""
    if g.order > cap:
        raise OrderCapExceeded(f"group of order {g.order} exceeds subgroup cap {cap}")
    cyclic: dict[frozenset[int], int] = {}
    for i in range(g.order):
        s = g.generated_by([i])
        cyclic.setdefault(s, i)
    gens = {s: [c] for s, c in cyclic.items()}
    frontier = list(cyclic)
    cyc = sorted(cyclic.values())
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyc:
                if c in s:
                    continue
                j = _close(g, set(s), gens[s] + [c])
                if j not in gens:
                    gens[j] = gens[s] + [c]
                    nxt.append(j)
        frontier = nxt
    found = set(gens)
    subs = [subgroup_from_members(g, s) for s in found]
    subs.sort(key=canonical_key)
    return subs


def regular_representation(g: FiniteGroup) -> dict[int, Perm]:
    """Left regular action: ``rho(x)`` sends the index of ``h`` to the index of ``x*h``."""
    n = g.order
    return {x: Perm(tuple(g.mul(x, h) for h in range(n))) for x in range(n)}


def regular_perm(g: FiniteGroup, x: int) -> Perm:
    return Perm(tuple(g.mul(x, h) for h in range(g.order)))


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets ``xH`` of a subgroup, numbered in breadth-first order.

    ``transversal[c]`` is the representative of coset ``c`` (an index into the
    parent group) and ``coset_of[x]`` the coset containing element ``x``.
    """

    group: FiniteGroup
    subgroup_members: frozenset[int]
    transversal: tuple[int, ...]
    coset_of: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.transversal)

    def action(self, x: int) -> Perm:
        """Left multiplication by ``x`` on the cosets."""
        g = self.group
        return Perm(tuple(self.coset_of[g.mul(x, t)] for t in self.transversal))


def subgroup_members(g: FiniteGroup, h: FiniteGroup) -> frozenset[int]:
    """Parent indices of the elements of ``h``; raises if ``h`` is not a subgroup of ``g``."""
    if h.degree != g.degree:
        raise NotASubgroup("degree mismatch")
    try:
        mem = frozenset(g.index[p] for p in h.elements)
    except KeyError:
        raise NotASubgroup("element of h is not in g") from None
    if g.identity not in mem or any(g.mul(a, b) not in mem for a in mem for b in mem):
        raise NotASubgroup("element set is not closed")
    return mem


def coset_space(g: FiniteGroup, h: FiniteGroup, walk: Sequence[int] | None = None) -> CosetSpace:
    """Left cosets of ``h`` with a Schreier transversal.

    The transversal is found breadth-first from the coset ``h`` by left
    multiplication with the elements ``walk`` (default: the generators of
    ``g``), tried in the given order, so each representative is a shortest
    word in them.
    """
    mem = subgroup_members(g, h)
    if walk is None:
        walk = [g.index[p] for p in g.generators]
    key = [-1] * g.order
    label = {}
    for x in range(g.order):
        if key[x] >= 0:
            continue
        coset = [g.mul(x, m) for m in mem]
        k = min(coset)
        for y in coset:
            key[y] = k
    ident = g.identity
    transversal = [ident]
    label[key[ident]] = 0
    queue = deque([ident])
    while queue:
        t = queue.popleft()
        for s in walk:
            y = g.mul(s, t)
            if key[y] not in label:
                label[key[y]] = len(transversal)
                transversal.append(y)
                queue.append(y)
    if len(transversal) * len(mem) != g.order:
        raise NotASubgroup("walk elements do not act transitively on the cosets")
    coset_of = tuple(label[key[x]] for x in range(g.order))
    return CosetSpace(g, mem, tuple(transversal), coset_of)


def coset_action(g: FiniteGroup, h: FiniteGroup,
                 walk: Sequence[int] | None = None) -> tuple[dict[int, Perm], list[int]]:
    """Action of ``g`` on the left cosets of ``h`` and the transversal used."""
    space = coset_space(g, h, walk)
    return {x: space.action(x) for x in range(g.order)}, list(space.transversal)


# --- simultaneous conjugacy -------------------------------------------------

def _refine(tuples: Sequence[Sequence[Perm]], degree: int) -> list[list[int]]:
    """Joint colour refinement of several tuples over a shared colour palette."""
    k = len(tuples[0])
    colours = []
    for t in tuples:
        lens = []
        for p in t:
            cl = [0] * degree
            for c in p.cycles():
                for x in c:
                    cl[x] = len(c)
            lens.append(cl)
        colours.append([tuple(lens[i][x] for i in range(k)) for x in range(degree)])
    palette = {c: n for n, c in enumerate(sorted({c for col in colours for c in col}))}
    colours = [[palette[c] for c in col] for col in colours]
    n_classes = len(palette)
    inverses = [[p.inverse() for p in t] for t in tuples]
    while True:
        sigs = [[(col[x],) + tuple(col[p.images[x]] for p in t) + tuple(col[p.images[x]] for p in ti)
                 for x in range(degree)] for t, ti, col in zip(tuples, inverses, colours)]
        palette = {s: n for n, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        colours = [[palette[s] for s in sig] for sig in sigs]
        if len(palette) == n_classes:
            return colours
        n_classes = len(palette)


def _try_extend(t1, t2, x0, y0, w, used):
    """Propagate ``w(x0) = y0`` along the orbit; return assigned points or None."""
    trail = []
    w[x0] = y0
    used[y0] = True
    trail.append(x0)
    queue = deque([x0])
    ok = True
    while queue and ok:
        x = queue.popleft()
        y = w[x]
        for p, q in zip(t1, t2):
            xi, yi = p.images[x], q.images[y]
            if w[xi] < 0:
                if used[yi]:
                    ok = False
                    break
                w[xi] = yi
                used[yi] = True
                trail.append(xi)
                queue.append(xi)
            elif w[xi] != yi:
                ok = False
                break
    if ok:
        return trail
    for x in trail:
        used[w[x]] = False
        w[x] = -1
    return None


def tuples_conjugate(t1: Sequence[Perm], t2: Sequence[Perm]) -> Perm | None:
    """A permutation ``w`` with ``w * t1[i] * w^-1 == t2[i]`` for all ``i``, or None.

    Orbits of ``<t1>`` are matched one at a time; inside an orbit the image of
    its least point is searched among points of ``t2`` carrying the same
    refined colour, and the rest of the orbit is forced.  Matching orbit by
    orbit is complete because conjugacy of transitive pieces is an
    equivalence relation.
    """
    if len(t1) != len(t2):
        raise DegreeMismatch("tuples of different lengths")
    if not t1:
        return Perm.identity(0)
    d = t1[0].degree
    if any(p.degree != d for p in list(t1) + list(t2)):
        raise DegreeMismatch("permutations of different degrees")
    if any(p.cycle_type() != q.cycle_type() for p, q in zip(t1, t2)):
        return None
    c1, c2 = _refine([t1, t2], d)
    if sorted(c1) != sorted(c2):
        return None
    w = [-1] * d
    used = [False] * d
    for orb in orbits(t1, d):
        x0 = min(orb, key=lambda x: (sum(1 for y in orb if c1[y] == c1[x]), x))
        for y0 in range(d):
            if used[y0] or c2[y0] != c1[x0]:
                continue
            trail = _try_extend(t1, t2, x0, y0, w, used)
            if trail is not None:
                if len(trail) == len(orb):
                    break
                for x in trail:
                    used[w[x]] = False
                    w[x] = -1
        else:
            return None
    return Perm(tuple(w))


def conjugate_tuple(t: Sequence[Perm], w: Perm) -> list[Perm]:
    winv = w.inverse()
    return [w * p * winv for p in t]


def verify_conjugator(t1: Sequence[Perm], t2: Sequence[Perm], w: Perm) -> bool:
    return list(conjugate_tuple(t1, w)) == list(t2)
