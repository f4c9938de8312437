"""JSON certificate and report documents.

Documents carry a versioned schema, reject unknown fields on read, and hash
their semantic content.  Volatile data (tool version, optional timestamp)
lives in a ``provenance`` envelope that the hash ignores.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .canonical import canonical_double_cover
from .certify import PillowcaseCertificate, certify
from .covers import GaloisCoverDatum
from .flat import PillowTiling, pillow_tiling
from .perms import FiniteGroup, Perm, group_from_generators, subgroup_generated

SCHEMA_VERSION = "1"


class DocumentError(ValueError):
    pass


def perm_to_json(p: Perm) -> dict[str, Any]:
    return {"cycles": p.to_cycles(), "images": list(p.images)}


def perm_from_json(obj: Any, degree: int | None = None) -> Perm:
    _require_keys(obj, {"cycles", "images"}, "permutation")
    images = obj["images"]
    if not isinstance(images, list) or not all(isinstance(i, int) for i in images):
        raise DocumentError("permutation images must be a list of integers")
    p = Perm(tuple(images))
    deg = len(images) if degree is None else degree
    if Perm.from_cycles(obj["cycles"], deg) != p:
        raise DocumentError(f"cycle notation {obj['cycles']!r} disagrees with images")
    return p


def _require_keys(obj: Any, keys: set[str], what: str, optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise DocumentError(f"{what} must be an object")
    extra = set(obj) - keys - set(optional)
    missing = keys - set(obj)
    if extra:
        raise DocumentError(f"unknown fields in {what}: {sorted(extra)}")
    if missing:
        raise DocumentError(f"missing fields in {what}: {sorted(missing)}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(obj: dict[str, Any]) -> str:
    body = {k: v for k, v in obj.items() if k != "provenance"}
    return "sha256:" + hashlib.sha256(canonical_json(body).encode()).hexdigest()


def dumps(obj: dict[str, Any]) -> str:
    """Deterministic pretty JSON with a trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def provenance(obj: dict[str, Any], timestamp: str | None = None) -> dict[str, Any]:
    env = {"tool_version": __version__, "content_hash": content_hash(obj)}
    if timestamp is not None:
        env["created"] = timestamp
    return env


@dataclass(frozen=True)
class CertificateDocument:
    group: dict[str, Any]
    triple: list[dict[str, Any]]
    subgroup: dict[str, Any]
    tower: dict[str, Any]
    mu: list[int]
    vanishing_locus: list[list]
    double_cover: dict[str, Any]
    tiling: dict[str, Any]
    moduli: dict[str, Any] | None = None
    verdicts: list[dict[str, Any]] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    FIELDS = ("schema_version", "group", "triple", "subgroup", "tower", "mu",
              "vanishing_locus", "double_cover", "tiling", "moduli", "verdicts")

    def semantic(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in self.FIELDS}

    def to_json(self, timestamp: str | None = None) -> str:
        body = self.semantic()
        body["provenance"] = provenance(body, timestamp)
        return dumps(body)

    @property
    def hash(self) -> str:
        return content_hash(self.semantic())

    @classmethod
    def from_json(cls, text: str) -> CertificateDocument:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
        _require_keys(obj, set(cls.FIELDS), "certificate", {"provenance"})
        if obj["schema_version"] != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema version {obj['schema_version']!r}")
        if "provenance" in obj:
            _require_keys(obj["provenance"], {"tool_version", "content_hash"}, "provenance", {"created"})
            if obj["provenance"]["content_hash"] != content_hash(obj):
                raise DocumentError("content hash does not match document")
        _require_keys(obj["group"], {"name", "order", "degree", "generators"}, "group")
        _require_keys(obj["subgroup"], {"order", "generators"}, "subgroup")
        _require_keys(obj["tower"], {"index", "quotient_genus", "branch_indices", "tiling_tuple"}, "tower")
        _require_keys(obj["double_cover"], {"degree", "genus"}, "double_cover")
        _require_keys(obj["tiling"], {"h1", "h2", "v", "corners"}, "tiling")
        if obj["moduli"] is not None:
            _require_keys(obj["moduli"], {"x", "tau", "lambda_residual"}, "moduli")
        doc = cls(**{k: obj[k] for k in cls.FIELDS})
        doc.parent()  # validates every permutation field
        doc.tiling_perms()
        return doc

    # reconstruction

    def parent(self) -> tuple[FiniteGroup, GaloisCoverDatum]:
        deg = self.group["degree"]
        gens = [perm_from_json(p, deg) for p in self.group["generators"]]
        g = group_from_generators(deg, gens)
        if g.order != self.group["order"]:
            raise DocumentError("group order does not match generators")
        triple = [perm_from_json(p, deg) for p in self.triple]
        return g, GaloisCoverDatum.from_perms(g, triple)

    def subgroup_of(self, g: FiniteGroup) -> FiniteGroup:
        gens = [perm_from_json(p, g.degree) for p in self.subgroup["generators"]]
        if any(p not in g.index for p in gens):
            raise DocumentError("subgroup generator outside the group")
        h = subgroup_generated(g, [g.index[p] for p in gens])
        if h.order != self.subgroup["order"]:
            raise DocumentError("subgroup order does not match generators")
        return h

    def tiling_perms(self) -> PillowTiling:
        t = self.tiling
        return PillowTiling(perm_from_json(t["h1"]), perm_from_json(t["h2"]), perm_from_json(t["v"]),
                            dict(t["corners"]))

    def revalidate(self) -> bool:
        """Re-run certification from the document's own group data."""
        g, parent = self.parent()
        cert = certify(parent, self.subgroup_of(g))
        if not cert:
            return False
        fresh = certificate_document(cert, self.group["name"], with_double_cover=False)
        return fresh.mu == self.mu and fresh.vanishing_locus == self.vanishing_locus


def certificate_document(cert: PillowcaseCertificate, name: str, moduli: dict | None = None,
                         with_double_cover: bool = True, tiling_mode: str = "normalised") -> CertificateDocument:
    tower = cert.tower
    parent = tower.parent
    g = parent.group
    tiling = pillow_tiling(tower, tiling_mode)
    if with_double_cover:
        dc = canonical_double_cover(parent, tower.subgroup)
        dcover = {"degree": dc.over_base.degree, "genus": dc.genus_sigma}
    else:
        dcover = {"degree": 2 * g.order, "genus": 4 * cert.genus_X - 3}
    return CertificateDocument(
        group={"name": name, "order": g.order, "degree": g.degree,
               "generators": [perm_to_json(p) for p in g.generators]},
        triple=[perm_to_json(p) for p in parent.perms()],
        subgroup={"order": tower.subgroup.order,
                  "generators": [perm_to_json(p) for p in tower.subgroup.generators]},
        tower={"index": tower.index, "quotient_genus": tower.quotient_genus(),
               "branch_indices": sorted(p.ram_index for p in tower.branch_points),
               "tiling_tuple": [perm_to_json(g.elements[x]) for x in tower.tiling_tuple]},
        mu=list(cert.mu),
        vanishing_locus=cert.vanishing_locus.one_based(),
        double_cover=dcover,
        tiling={"h1": perm_to_json(tiling.h1), "h2": perm_to_json(tiling.h2),
                "v": perm_to_json(tiling.v), "corners": dict(sorted(tiling.point_labels.items()))},
        moduli=moduli,
    )


def report_document(outcome, spec, timestamp: str | None = None) -> dict[str, Any]:
    """JSON-ready search report with provenance envelope."""
    results = []
    for r in outcome.results:
        g = r.report.parent.group
        certs = []
        for c in r.report.certificates:
            certs.append({
                "subgroup_order": c.subgroup.order,
                "subgroup_generators": [p.to_cycles() for p in c.subgroup.generators],
                "mu": list(c.mu),
                "vanishing_locus": c.vanishing_locus.one_based(),
            })
        results.append({
            "group": r.group,
            "triple": [g.elements[x].to_cycles() for x in r.triple],
            "genus": r.genus,
            "n": r.report.n,
            "certificates": certs,
            "rejections": dict(sorted(r.report.rejections.items())),
            "double_cover_verdicts": [{"i": v.i + 1, "j": v.j + 1, "verdict": v.kind} for v in r.verdicts],
            "rechecked": r.rechecked,
        })
    body = {
        "schema_version": SCHEMA_VERSION,
        "search": {
            "groups": sorted(e.name for e in spec.groups),
            "genus": [spec.genus_min, spec.genus_max],
            "min_n": spec.min_n,
            "dedup": "simultaneous conjugation by the group; no outer automorphisms or braid moves",
        },
        "triples_enumerated": dict(sorted(outcome.triples_seen.items())),
        "results": results,
        "failures": [{"group": f.group, "error": f.error} for f in outcome.failures],
    }
    body["provenance"] = provenance(body, timestamp)
    return body


def summary_lines(outcome, spec) -> list[str]:
    lines = []
    for e in sorted(spec.groups, key=lambda e: e.name):
        rs = [r for r in outcome.results if r.group == e.name]
        failed = [f for f in outcome.failures if f.group == e.name]
        if failed:
            lines.append(f"{e.name}: error ({failed[0].error})")
        elif rs:
            best = max(r.report.n for r in rs)
            lines.append(f"{e.name}: n={best} ({len(rs)} triple classes, "
                         f"{outcome.triples_seen.get(e.name, 0)} enumerated)")
        else:
            lines.append(f"{e.name}: none ({outcome.triples_seen.get(e.name, 0)} triple classes enumerated)")
    return lines

