"""Command line interface: search, certify, compare, flatpic, modulus."""
from __future__ import annotations

import logging
import re
import sys
from pathlib import Path

import click

from .canonical import canonical_double_cover, differentials_nonisomorphic
from .catalog import CatalogError, lookup, resolve
from .certify import certify
from .covers import CoverError, GaloisCoverDatum
from .documents import (
    CertificateDocument,
    DocumentError,
    certificate_document,
    dumps,
    report_document,
    summary_lines,
)
from .ellmod import (
    format_number,
    lambda_orbit,
    lambda_section_t,
    lambda_theta,
    parse_number,
)
from .flat import emit_flat_picture
from .perms import GroupError, parse_perm_list, subgroup_generated
from .search import SearchSpec, resolve_threads, run_search

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2


def _fail(msg: str, code: int = EXIT_USAGE):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise click.BadParameter(f"expected A..B, got {text!r}")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else a
    if a > b:
        raise click.BadParameter("empty genus range")
    return a, b


def _moduli(x_text: str | None) -> dict | None:
    if x_text is None:
        return None
    x = parse_number(x_text)
    tau = lambda_section_t(x)
    lam = lambda_theta(tau)
    residual = min(abs(lam - o) for o in lambda_orbit(x))
    return {"x": format_number(x), "tau": format_number(tau), "lambda_residual": f"{residual:.3e}"}


class _UsageGroup(click.Group):
    """Click usage errors exit with code 1 instead of 2 (2 means partial failure)."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            sys.exit(EXIT_USAGE)


@click.group(cls=_UsageGroup)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging to stderr.")
def main(verbose: bool) -> None:
    """Search and certify multifold uniform pillowcase covers."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--groups", required=True, help="Comma list of built-in names or catalog files.")
@click.option("--genus", "genus", default="2..4", show_default=True, help="Genus range A..B.")
@click.option("--min-n", type=int, default=2, show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (env PILLOWCASE_THREADS).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for report.json and summary.txt.")
@click.option("--no-verdicts", is_flag=True, help="Skip double-cover comparisons.")
@click.option("--timestamp", default=None, help="Timestamp recorded in the provenance envelope.")
def search(groups, genus, min_n, threads, out_dir, no_verdicts, timestamp):
    """Enumerate triples and report multifold pillowcase covers."""
    try:
        lo, hi = _parse_range(genus)
        entries = tuple(resolve(groups))
        spec = SearchSpec(entries, lo, hi, min_n, resolve_threads(threads), not no_verdicts)
    except (click.BadParameter, CatalogError, GroupError, ValueError, OSError) as exc:
        _fail(str(exc))
    outcome = run_search(spec)
    report = report_document(outcome, spec, timestamp)
    lines = summary_lines(outcome, spec)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(dumps(report), encoding="utf-8")
        (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for line in lines:
        click.echo(line)
    sys.exit(EXIT_PARTIAL if outcome.failures else EXIT_OK)


@main.command(name="certify")
@click.option("--group", "group_name", required=True)
@click.option("--triple", default=None, help="Three ';'-separated cycle notations (default: catalog triple).")
@click.option("--subgroup", "subgroup_gens", required=True, help="';'-separated generators in cycle notation.")
@click.option("--x", "x_text", default=None, help="Cross-ratio of the quotient's branch points.")
@click.option("--tiling", "tiling_mode", type=click.Choice(["normalised", "direct"]), default="normalised")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def certify_cmd(group_name, triple, subgroup_gens, x_text, tiling_mode, out):
    """Certify one subgroup and emit a certificate document."""
    try:
        entry = lookup(group_name)
        g = entry.group
        perms = parse_perm_list(triple, g.degree) if triple else entry.default_triple
        if perms is None:
            raise CatalogError(f"{group_name} has no default triple; pass --triple")
        parent = GaloisCoverDatum.from_perms(g, perms)
        gens = parse_perm_list(subgroup_gens, g.degree)
        if any(p not in g.index for p in gens):
            raise GroupError("subgroup generator is not in the group")
        h = subgroup_generated(g, [g.index[p] for p in gens])
        moduli = _moduli(x_text)
    except (CatalogError, GroupError, ValueError) as exc:
        _fail(str(exc))
    result = certify(parent, h)
    if not result:
        click.echo(f"rejected: {result}")
        sys.exit(EXIT_PARTIAL)
    try:
        doc = certificate_document(result, entry.name, moduli, tiling_mode=tiling_mode)
    except CoverError as exc:
        _fail(str(exc), EXIT_PARTIAL)
    text = doc.to_json()
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"certified: mu={tuple(doc.mu)} |H|={h.order} -> {out}")
    else:
        click.echo(text, nl=False)


def _load(path: str) -> CertificateDocument:
    try:
        return CertificateDocument.from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, DocumentError, GroupError) as exc:
        _fail(f"{path}: {exc}")


@main.command()
@click.option("--cert", "certs", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False))
def compare(certs):
    """Compare two certificates on the same curve."""
    if len(certs) != 2:
        _fail("compare needs exactly two --cert options")
    a, b = (_load(c) for c in certs)
    if a.group != b.group or a.triple != b.triple:
        _fail("certificates describe different curves")
    same = a.vanishing_locus == b.vanishing_locus
    click.echo(f"vanishing loci: {'equal' if same else 'different'}")
    try:
        g, parent = a.parent()
        d1 = canonical_double_cover(parent, a.subgroup_of(g))
        d2 = canonical_double_cover(parent, b.subgroup_of(g))
    except (CoverError, DocumentError) as exc:
        _fail(str(exc), EXIT_PARTIAL)
    verdict = differentials_nonisomorphic(d1, d2)
    click.echo(f"double covers: {verdict.kind} ({verdict.note})")


@main.command()
@click.option("--cert", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--modulus", default=None, help="tau for shearing the tiles, e.g. 1+2.143i.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def flatpic(cert, modulus, out):
    """Draw the pillowcase tiling of a certificate as SVG."""
    doc = _load(cert)
    try:
        tau = parse_number(modulus) if modulus else None
        if tau is not None and not complex(tau).imag > 0:
            raise ValueError("modulus must have positive imaginary part")
        tiling = doc.tiling_perms()
        emit_flat_picture(tiling, tau, out)
    except (ValueError, OSError) as exc:
        _fail(str(exc))
    click.echo(f"wrote {out} ({tiling.degree} tiles)")


@main.command()
@click.option("--x", "x_text", required=True, help="Cross-ratio, e.g. '15*sqrt(3)-26' or 'zeta6^5'.")
def modulus(x_text):
    """tau = i K(sqrt(1-x)) / K(sqrt(x)) and the lambda round-trip residual."""
    try:
        m = _moduli(x_text)
    except (ValueError, ArithmeticError) as exc:
        _fail(str(exc))
    click.echo(f"x = {m['x']}")
    click.echo(f"tau ≈ {m['tau']}")
    click.echo(f"lambda round-trip residual: {m['lambda_residual']}")


if __name__ == "__main__":
    main()
