"""Named groups with default monodromy triples, and the text catalog format.

A catalog file holds records separated by ``name`` lines::

    name a4
    degree 4
    gens (1 2 3); (1 2)(3 4)

    name gl23
    matrix p=3 dim=2 gens=[[0,1],[1,2]]; [[2,0],[0,1]]; [[2,2],[1,0]]
    triple 1; 2; 3

    name a4xc3
    product a4 c3

``triple`` is optional: three ``;``-separated entries, each either a
generator number (1-based) or a word in generators such as ``2*3`` or
``1^2*3^2``.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .perms import (
    FiniteGroup,
    GroupError,
    Perm,
    direct_product,
    embed_left,
    embed_right,
    group_from_generators,
    group_from_matrices,
    parse_perm_list,
)


class CatalogError(GroupError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: FiniteGroup
    generator_perms: tuple[Perm, ...]
    default_triple: tuple[Perm, ...] | None = None

    @property
    def descriptor(self) -> str:
        return f"{self.name} (order {self.group.order}, degree {self.group.degree})"


BUILTIN_TEXT = """
name gl23
matrix p=3 dim=2 gens=[[0,1],[1,2]]; [[2,0],[0,1]]; [[2,2],[1,0]]
triple 1; 2; 3

name sl32
matrix p=2 dim=3 gens=[[1,0,0],[0,1,0],[1,0,1]]; [[0,1,0],[0,0,1],[1,0,0]]; [[1,0,1],[1,0,0],[0,1,0]]
triple 1; 2; 3

name a4
degree 4
gens (1 2 3); (1 2)(3 4)

name c3
degree 3
gens (1 2 3)

name a4xc3
product a4 c3
triple 2*3; 1^2*3^2; 1*2
"""


def _eval_word(word: str, gens: tuple[Perm, ...], degree: int) -> Perm:
    out = Perm.identity(degree)
    for factor in word.split("*"):
        factor = factor.strip()
        m = re.fullmatch(r"(\d+)(?:\^(-?\d+))?", factor)
        if not m:
            raise CatalogError(f"bad word factor {factor!r}")
        k = int(m.group(1))
        if not 1 <= k <= len(gens):
            raise CatalogError(f"generator {k} out of range")
        out = out * gens[k - 1] ** int(m.group(2) or 1)
    return out


def _parse_triple(text: str, gens: tuple[Perm, ...], degree: int) -> tuple[Perm, ...]:
    if "(" in text:
        perms = tuple(parse_perm_list(text, degree))
    else:
        perms = tuple(_eval_word(w, gens, degree) for w in text.split(";"))
    if len(perms) != 3:
        raise CatalogError("a triple needs exactly three entries")
    return perms


def _parse_matrix_line(rest: str) -> tuple[int, int, list]:
    m = re.fullmatch(r"p=(\d+)\s+dim=(\d+)\s+gens=(.*)", rest.strip())
    if not m:
        raise CatalogError(f"bad matrix record {rest!r}")
    try:
        mats = [json.loads(part) for part in m.group(3).split(";")]
    except json.JSONDecodeError as exc:
        raise CatalogError(f"bad matrix entries: {exc}") from exc
    return int(m.group(1)), int(m.group(2)), mats


def parse_catalog(text: str, known: dict[str, CatalogEntry] | None = None) -> dict[str, CatalogEntry]:
    """Entries of a catalog text; ``product`` may refer to ``known`` entries."""
    entries: dict[str, CatalogEntry] = dict(known or {})
    order: list[str] = []
    records: list[list[tuple[str, str]]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "name":
            records.append([])
        elif not records:
            raise CatalogError(f"record field before any name: {line!r}")
        records[-1].append((key, rest.strip()))
    for rec in records:
        fields = dict(rec)
        if len(fields) != len(rec):
            raise CatalogError(f"duplicate field in record {rec[0][1]!r}")
        name = fields.pop("name")
        triple_text = fields.pop("triple", None)
        if "matrix" in fields:
            p, dim, mats = _parse_matrix_line(fields.pop("matrix"))
            group = group_from_matrices(p, dim, mats)
            gens = tuple(group.generators)
        elif "product" in fields:
            parts = fields.pop("product").split()
            if len(parts) != 2 or any(x not in entries for x in parts):
                raise CatalogError(f"product needs two known names, got {parts}")
            a, b = (entries[x].group for x in parts)
            group = direct_product(a, b)
            gens = tuple([embed_left(a, b, p) for p in entries[parts[0]].generator_perms]
                         + [embed_right(a, b, p) for p in entries[parts[1]].generator_perms])
        elif "degree" in fields and "gens" in fields:
            degree = int(fields.pop("degree"))
            gens = tuple(parse_perm_list(fields.pop("gens"), degree))
            group = group_from_generators(degree, gens)
        else:
            raise CatalogError(f"record {name!r} has no group definition")
        if fields:
            raise CatalogError(f"unknown fields {sorted(fields)} in record {name!r}")
        triple = _parse_triple(triple_text, gens, group.degree) if triple_text else None
        if triple is not None and any(p not in group.index for p in triple):
            raise CatalogError(f"triple of {name!r} is not in the group")
        entries[name] = CatalogEntry(name, group, gens, triple)
        order.append(name)
    return {k: entries[k] for k in order}


_BUILTINS: dict[str, CatalogEntry] | None = None


def builtins() -> dict[str, CatalogEntry]:
    global _BUILTINS
    if _BUILTINS is None:
        _BUILTINS = parse_catalog(BUILTIN_TEXT)
    return _BUILTINS


def resolve(names: Iterable[str] | str) -> list[CatalogEntry]:
    """Catalog entries from built-in names, catalog file paths, or a comma list of both."""
    if isinstance(names, str):
        names = [n for n in names.split(",") if n.strip()]
    out = []
    for name in names:
        name = name.strip()
        table = builtins()
        if name in table:
            out.append(table[name])
            continue
        path = Path(name)
        if path.is_file():
            out.extend(parse_catalog(path.read_text(encoding="utf-8"), table).values())
            continue
        raise CatalogError(f"unknown group {name!r}; built-ins are {sorted(table)}")
    return out


def lookup(name: str) -> CatalogEntry:
    found = resolve([name])
    if len(found) != 1:
        raise CatalogError(f"{name!r} names {len(found)} groups, expected one")
    return found[0]
