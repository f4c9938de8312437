"""Pillowcase tilings ``(h1, h2, v)`` and flat pictures.

A degree-``d`` pillowcase cover is the same as ``d`` copies of the pillowcase
glued along their sides: ``h1`` and ``h2`` record the horizontal gluings of
the two halves and ``v`` the vertical one.  The four corners act as

    a: h2 v,   b: h1 v^-1,   c: h2^-1,   d: h1^-1

and the branch 4-tuple ``(t1, t2, t3, t4)`` of the tower is read as the
corners ``(c, a, d, b)``, so ``h2 = rho(t1)^-1``, ``h1 = rho(t3)^-1`` and
``v = rho(t1 t2)``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .covers import CoverError, QuotientTower, tiling_checks
from .perms import FiniteGroup, Perm, is_transitive

CORNERS = ("c", "a", "d", "b")
ORBIT_CAP = 500_000


class LabelingInconsistent(CoverError):
    pass


class IoFailure(OSError):
    pass


@dataclass(frozen=True)
class PillowTiling:
    h1: Perm
    h2: Perm
    v: Perm
    point_labels: dict[str, int] = field(default_factory=dict, compare=False)
    tower_id: str = field(default="", compare=False)

    def __post_init__(self):
        d = self.h1.degree
        if self.h2.degree != d or self.v.degree != d:
            raise LabelingInconsistent("h1, h2, v have different degrees")
        if not is_transitive(self.corners(), d):
            raise LabelingInconsistent("corner monodromies are not transitive")

    @property
    def degree(self) -> int:
        return self.h1.degree

    def corners(self) -> list[Perm]:
        """Corner monodromies in tuple order ``(c, a, d, b)``."""
        return [self.h2.inverse(), self.h2 * self.v, self.h1.inverse(), self.h1 * self.v.inverse()]


def tiling_from_tuple(perms: Sequence[Perm], labels: dict[str, int] | None = None,
                      tower_id: str = "") -> PillowTiling:
    """Tiling from a product-one 4-tuple read as corners ``(c, a, d, b)``."""
    if len(perms) != 4:
        raise LabelingInconsistent("need exactly four corner permutations")
    c, a, d, b = perms
    h2, h1 = c.inverse(), d.inverse()
    v = c * a
    if h2.inverse() * a != v or b.inverse() * h1 != v:
        raise LabelingInconsistent("the two expressions for v disagree")
    return PillowTiling(h1, h2, v, dict(labels or {}), tower_id)


def _regular(g: FiniteGroup, members: Sequence[int]):
    pos = {x: i for i, x in enumerate(members)}
    return lambda x: Perm(tuple(pos[g.mul(x, h)] for h in members))


def hurwitz_moves(g: FiniteGroup, t: tuple[int, ...]):
    """Braid moves on a product-one tuple, with the induced swap of positions."""
    for i in range(len(t) - 1):
        x, y = t[i], t[i + 1]
        yield t[:i] + (g.mul(g.mul(x, y), g.inv(x)), x) + t[i + 2:], i
        yield t[:i] + (y, g.mul(g.mul(g.inv(y), x), y)) + t[i + 2:], i


def _score(g: FiniteGroup, t: tuple[int, ...], size: int) -> tuple[int, int, int]:
    c, a, d, _ = t
    h2, h1, v = g.inv(c), g.inv(d), g.mul(c, a)
    coincide = (h1 == h2) + (h2 == v) + (h1 == v)
    # the regular image of x has |H| / ord(x) cycles
    order = g.element_order
    horizontal = size // order(c) + size // order(d)
    vertical = size // order(g.mul(g.inv(c), d))
    return coincide, horizontal, vertical


def normalise_tuple(g: FiniteGroup, t: Sequence[int], faces: Sequence[int],
                    cap: int = ORBIT_CAP) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Most symmetric representative of the Hurwitz orbit of ``t``.

    Maximises the number of coincidences among ``h1, h2, v``, then the number
    of horizontal cylinders of the two halves, then the number of cycles of
    ``h2 h1^-1``; ties go to the least tuple.  Faces follow the braid moves.
    """
    start = tuple(t)
    seen = {start: tuple(faces)}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        fc = seen[cur]
        for nxt, i in hurwitz_moves(g, cur):
            if nxt not in seen:
                if len(seen) >= cap:
                    raise CoverError(f"Hurwitz orbit exceeds {cap} tuples")
                f = list(fc)
                f[i], f[i + 1] = f[i + 1], f[i]
                seen[nxt] = tuple(f)
                queue.append(nxt)
    size = len(g.generated_by(start))
    best = min(seen, key=lambda u: (tuple(-s for s in _score(g, u, size)), u))
    return best, seen[best]


def pillow_tiling(tower: QuotientTower, mode: str = "normalised") -> PillowTiling:
    """``(h1, h2, v)`` for a certified tower.

    ``mode="normalised"`` searches the Hurwitz orbit of the tower's tuple for
    the most symmetric tiling (see :func:`normalise_tuple`); ``"direct"``
    reads the tower's tuple as is.
    """
    tiling_checks(tower)
    g = tower.parent.group
    t, faces = tuple(tower.tiling_tuple), tuple(tower.tiling_faces)
    if mode == "normalised":
        t, faces = normalise_tuple(g, t, faces)
    elif mode != "direct":
        raise ValueError(f"unknown tiling mode {mode!r}")
    rho = _regular(g, sorted(tower.cosets.subgroup_members))
    labels = dict(zip(CORNERS, faces))
    tid = f"H{tower.subgroup.order}:" + ",".join(str(x) for x in t)
    return tiling_from_tuple([rho(x) for x in t], labels, tid)


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(tiling: PillowTiling, modulus: complex | None = None, scale: float = 60.0) -> str:
    """SVG text: one sheared 2x1 pillowcase per copy, rows along cycles of ``h1``.

    Each tile ``i`` is drawn as its front square ``[0,1]x[0,1]`` and back
    square ``[1,2]x[0,1]``.  Labels give the copy reached across each side:
    right ``h1``, left ``h2``, top ``v``, bottom ``v^-1`` (1-based).
    """
    tau = complex(0, 1) if modulus is None else complex(modulus)
    if tau.imag <= 0:
        raise ValueError("modulus must lie in the upper half plane")
    d = tiling.degree
    rows = tiling.h1.cycles()
    gap = 0.6
    width = 2 + abs(tau.real)

    def xy(x: float, y: float, ox: float, oy: float) -> tuple[float, float]:
        z = complex(x, 0) + y * tau
        return ox + scale * z.real, oy - scale * z.imag

    cols = max(len(r) for r in rows)
    total_w = scale * (cols * (width + gap) + gap)
    total_h = scale * (len(rows) * (tau.imag + gap) + gap)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(total_w)}" '
        f'height="{_fmt(total_h)}" viewBox="0 0 {_fmt(total_w)} {_fmt(total_h)}">',
        f"<!-- tower: {tiling.tower_id} -->",
        "<!-- corners: " + " ".join(f"{k}={tiling.point_labels[k]}" for k in CORNERS
                                    if k in tiling.point_labels) + " -->",
        f"<!-- degree: {d}; modulus: {_fmt(tau.real)}+{_fmt(tau.imag)}i; area: {2 * d} squares -->",
        f"<!-- h1: {tiling.h1.to_cycles()} -->",
        f"<!-- h2: {tiling.h2.to_cycles()} -->",
        f"<!-- v: {tiling.v.to_cycles()} -->",
    ]
    inv_v = tiling.v.inverse()
    shift = scale * max(0.0, -tau.real)
    for r, row in enumerate(rows):
        for c, i in enumerate(row):
            ox = shift + scale * (gap + c * (width + gap))
            oy = scale * (gap + (r + 1) * tau.imag + r * gap)
            corners = [xy(0, 0, ox, oy), xy(2, 0, ox, oy), xy(2, 1, ox, oy), xy(0, 1, ox, oy)]
            poly = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in corners)
            out.append(f'<g id="tile{i + 1}">')
            out.append(f'<polygon points="{poly}" fill="#f4f1e8" stroke="#222" stroke-width="1"/>')
            a, b = xy(1, 0, ox, oy), xy(1, 1, ox, oy)
            out.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                       f'y2="{_fmt(b[1])}" stroke="#888" stroke-dasharray="4 3"/>')
            labels = [
                (xy(1, 0.5, ox, oy), str(i + 1), 14),
                (xy(1.9, 0.5, ox, oy), str(tiling.h1(i) + 1), 10),
                (xy(0.1, 0.5, ox, oy), str(tiling.h2(i) + 1), 10),
                (xy(1, 0.9, ox, oy), str(tiling.v(i) + 1), 10),
                (xy(1, 0.1, ox, oy), str(inv_v(i) + 1), 10),
            ]
            for (x, y), text, size in labels:
                out.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
                           f'text-anchor="middle" dominant-baseline="middle">{text}</text>')
            for name, (cx, cy) in (("c", (0, 0)), ("d", (1, 0)), ("c", (2, 0)),
                                   ("a", (0, 1)), ("b", (1, 1)), ("a", (2, 1))):
                x, y = xy(cx, cy, ox, oy)
                out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" class="corner-{name}"/>')
            out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_flat_picture(tiling: PillowTiling, modulus: complex | None, path: str | os.PathLike) -> str:
    text = render_svg(tiling, modulus)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return str(path)
