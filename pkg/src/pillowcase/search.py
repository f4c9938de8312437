"""Search over monodromy triples of catalog groups for multifold pillowcase covers."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .canonical import double_cover_over_base, differentials_nonisomorphic
from .catalog import CatalogEntry
from .certify import MultifoldReport, multifold_report, recheck_certificate
from .covers import GaloisCoverDatum
from .perms import FiniteGroup, all_subgroups

log = logging.getLogger(__name__)

THREADS_ENV = "PILLOWCASE_THREADS"


@dataclass(frozen=True)
class SearchSpec:
    groups: tuple[CatalogEntry, ...]
    genus_min: int
    genus_max: int
    min_n: int = 2
    threads: int = 1
    verdicts: bool = True
    recheck_every: int = 10

    def __post_init__(self):
        if self.genus_min > self.genus_max:
            raise ValueError("empty genus range")
        if self.min_n < 1:
            raise ValueError("minimum n must be at least 1")
        if self.threads < 1:
            raise ValueError("thread count must be positive")


@dataclass
class PairVerdict:
    i: int
    j: int
    kind: str


@dataclass
class SearchResult:
    group: str
    triple: tuple[int, int, int]
    genus: int
    report: MultifoldReport
    verdicts: list[PairVerdict] = field(default_factory=list)
    rechecked: int = 0


@dataclass
class GroupFailure:
    group: str
    error: str


@dataclass
class SearchOutcome:
    results: list[SearchResult]
    failures: list[GroupFailure]
    triples_seen: dict[str, int]

    def best_n(self, group: str) -> int | None:
        ns = [r.report.n for r in self.results if r.group == group]
        return max(ns) if ns else None


def regular_genus(g: FiniteGroup, triple: Sequence[int]) -> int:
    """Genus of the regular cover from element orders alone."""
    n = g.order
    twice = 2 - 2 * n + sum(n - n // g.element_order(x) for x in triple)
    return twice // 2


def canonical_pair(g: FiniteGroup, g1: int, g2: int) -> tuple[int, int]:
    return min((g.conj(g1, x), g.conj(g2, x)) for x in range(g.order))


def enumerate_triples(g: FiniteGroup, genus_min: int, genus_max: int) -> Iterator[GaloisCoverDatum]:
    """Generating triples with genus in range, one per simultaneous-conjugacy class.

    Each class is represented by its least pair ``(g1, g2)`` in element index
    order; classes come out in increasing order of that pair.
    """
    seen: set[tuple[int, int]] = set()
    found = []
    for g1 in range(g.order):
        for g2 in range(g.order):
            if (g1, g2) in seen:
                continue
            g3 = g.inv(g.mul(g1, g2))
            genus = regular_genus(g, (g1, g2, g3))
            if not genus_min <= genus <= genus_max:
                continue
            if not g.generates([g1, g2]):
                continue
            orbit = {(g.conj(g1, x), g.conj(g2, x)) for x in range(g.order)}
            seen |= orbit
            found.append(min(orbit))
    for g1, g2 in sorted(found):
        yield GaloisCoverDatum(g, (g1, g2, g.inv(g.mul(g1, g2))))


def pair_verdicts(report: MultifoldReport) -> list[PairVerdict]:
    """Double-cover verdicts between the first certificates of each distinct locus."""
    reps: dict = {}
    for i, c in enumerate(report.certificates):
        reps.setdefault(c.vanishing_locus, i)
    idx = sorted(reps.values())
    covers = {i: double_cover_over_base(report.parent, report.certificates[i].tower) for i in idx}
    out = []
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            out.append(PairVerdict(i, j, differentials_nonisomorphic(covers[i], covers[j]).kind))
    return out


def _process(args) -> SearchResult:
    entry, datum, subgroups, spec = args
    report = multifold_report(datum, subgroups)
    result = SearchResult(entry.name, datum.entries, datum.genus(), report)
    if report.n < spec.min_n:
        return result
    if spec.verdicts:
        result.verdicts = pair_verdicts(report)
    if spec.recheck_every:
        sample = report.certificates[:: spec.recheck_every]
        for cert in sample:
            if not recheck_certificate(cert):
                raise AssertionError(f"certificate for subgroup {cert.subgroup_key()[:2]} failed recheck")
        result.rechecked = len(sample)
    return result


def resolve_threads(requested: int | None) -> int:
    if requested:
        return requested
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def run_search(spec: SearchSpec) -> SearchOutcome:
    """Parallel map over triples, ordered reduce; one failing group never aborts the run."""
    results: list[SearchResult] = []
    failures: list[GroupFailure] = []
    seen: dict[str, int] = {}
    with ThreadPoolExecutor(max_workers=spec.threads) as pool:
        for entry in sorted(spec.groups, key=lambda e: e.name):
            try:
                triples = list(enumerate_triples(entry.group, spec.genus_min, spec.genus_max))
                seen[entry.name] = len(triples)
                if not triples:
                    continue
                subgroups = all_subgroups(entry.group)
                jobs = [(entry, t, subgroups, spec) for t in triples]
                for res in pool.map(_process, jobs):
                    if res.report.n >= spec.min_n:
                        results.append(res)
            except Exception as exc:  # isolate per-group failures
                log.debug("group %s failed", entry.name, exc_info=True)
                failures.append(GroupFailure(entry.name, f"{type(exc).__name__}: {exc}"))
                seen.setdefault(entry.name, 0)
    results.sort(key=lambda r: (r.group, r.triple))
    return SearchOutcome(results, failures, seen)
