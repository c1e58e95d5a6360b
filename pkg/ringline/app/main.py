"""
Ringline - Command Line
Batch front end over rings, projective lines, chain geometries, divisible
designs and their codes
"""

import logging
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv

from ..core.config import settings
from ..core.exceptions import CertificationError, EmbeddingError, InternalConsistencyError, RinglineError
from ..schemas.reports import (
    ChainReport,
    CodeReport,
    CountReport,
    DesignReport,
    IsoReport,
    LineReport,
    RingInfoReport,
    VerifyReport,
    ViolationReport,
)
from ..services.action import gl2_order
from ..services.chains import STRATEGIES, SubfieldEmbedding, build_chain_geometry, embed_subfield
from ..services.codes import code_from_design, write_code
from ..services.designs import (
    Design,
    dd_isomorphic,
    make_design,
    maximal_t,
    read_design,
    truncated_chain_design,
    verify_dd,
    write_design,
)
from ..services.projline import build_line, count_points, line_export, nondistant_is_equivalence
from ..services.rings import RingTable, build_ring, quotient_by_radical, wedderburn_signature
from ..utils.logger import setup_logging
from .grammar import parse_ring_spec, print_ring_spec, read_field_witness

# ========== Configuration ==========
load_dotenv()
logger = logging.getLogger(__name__)


# ========== Helper Functions ==========
def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _set(labels) -> str:
    return "{" + ",".join(labels) + "}"


def _ring(text: str) -> RingTable:
    return build_ring(parse_ring_spec(text))


def _semisimple_signature(ring: RingTable):
    quotient = ring if ring.radical == frozenset({ring.zero_index}) else quotient_by_radical(ring)[0]
    return wedderburn_signature(quotient)


def _embedding(ring: RingTable, field: str) -> SubfieldEmbedding:
    """A strategy name, a witness file, or a GF(q) spec to search for."""
    if field in STRATEGIES:
        return embed_subfield(ring, None, field)
    if Path(field).is_file():
        spec, generator = read_field_witness(field)
        try:
            image = ring.index(generator) if generator in ring.labels else ring.index(int(generator))
        except (KeyError, ValueError):
            raise EmbeddingError(f"{generator!r} is neither an element label nor an index of {ring.name}") from None
        return embed_subfield(ring, spec, image)
    return embed_subfield(ring, parse_ring_spec(field), "search")


def _design_report(design: Design) -> DesignReport:
    p, d = design.params, design.derived
    return DesignReport(
        t=p.t, s=p.s, k=p.k, lambda_t=p.lambda_t, v=design.v, b=d.b, r=d.r,
        lambdas=list(d.lambdas), transversal=design.transversal,
        metadata={key: str(value) for key, value in sorted(design.metadata.items())},
    )


def _echo_design(design: Design, suffix: str) -> None:
    d = design.derived
    click.echo(f"{design.params} {suffix}")
    click.echo(f"r={d.r} lambdas={','.join(str(x) for x in d.lambdas)}")


# ========== CLI Group ==========
class RinglineGroup(click.Group):
    """Maps workbench errors to a message on stderr and their exit status."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except RinglineError as exc:
            click.echo(f"error: {exc.message}", err=True)
            if exc.witness is not None:
                click.echo(f"witness: {exc.witness}", err=True)
            ctx.exit(exc.exit_code)


@click.group(cls=RinglineGroup)
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads for orbits and verification")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Log level on stderr")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None, help="Also log to this file")
def cli(threads: Optional[int], log_level: Optional[str], log_file: Optional[str]) -> None:
    """Ringline: projective lines over finite rings and divisible designs."""
    if threads is not None:
        settings.threads = threads
    if log_level is not None:
        settings.log_level = log_level.upper()
    if log_file is not None:
        settings.log_file = log_file
    setup_logging(settings.log_level, settings.log_file)


# ========== ring ==========
@cli.group(cls=RinglineGroup)
def ring() -> None:
    """Finite rings."""


@ring.command("info")
@click.argument("spec")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def ring_info(spec: str, as_json: bool) -> None:
    """Order, units, radical, Wedderburn signature and |GL2| of a ring."""
    parsed = parse_ring_spec(spec)
    r = build_ring(parsed)
    units = [r.labels[u] for u in r.unit_list]
    radical = [r.labels[x] for x in sorted(r.radical)]
    signature = _semisimple_signature(r)
    points = count_points(r)
    group = gl2_order(r)
    if as_json:
        report = RingInfoReport(
            spec=print_ring_spec(parsed), order=r.order, characteristic=r.char, units=units,
            radical=radical, local=r.is_local, commutative=r.is_commutative,
            wedderburn=signature, gl2_order=group, line_points=points,
        )
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"order={r.order} units={_set(units)} local={_yes(r.is_local)} |P(R)|={points}")
    click.echo(f"radical={_set(radical)} commutative={_yes(r.is_commutative)} char={r.char} "
               f"wedderburn={signature} |GL2|={group}")


# ========== line ==========
@cli.group(cls=RinglineGroup)
def line() -> None:
    """Projective lines."""


@line.command("build")
@click.argument("spec")
@click.option("--export", "export", type=click.Path(dir_okay=False), default=None, help="Write the full line as JSON")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def line_build(spec: str, export: Optional[str], as_json: bool) -> None:
    """Points, parallel classes and the distant relation of P(R)."""
    pl = build_line(_ring(spec))
    report = LineReport(
        ring=pl.ring.name,
        points=pl.size,
        class_size=len(pl.parallel_classes[0]),
        distant_degree=int(pl.distant_matrix[0].sum()),
        local=pl.ring.is_local,
        nondistant_is_equivalence=nondistant_is_equivalence(pl),
    )
    if export:
        Path(export).write_text(line_export(pl).model_dump_json(indent=2) + "\n")
    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"points={report.points} class_size={report.class_size} distant_degree={report.distant_degree} "
               f"local={_yes(report.local)} nondistant_equivalence={_yes(report.nondistant_is_equivalence)}")


# ========== chains ==========
@cli.group(cls=RinglineGroup)
def chains() -> None:
    """Chain geometries."""


@chains.command("build")
@click.option("--ring", "ring_spec", required=True, help="Ring spec")
@click.option("--field", "field", required=True, help="prime, constants, wedderburn, a GF(q) spec or a witness file")
@click.option("--export", "export", type=click.Path(dir_okay=False), default=None, help="Write the chains as a design file")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def chains_build(ring_spec: str, field: str, export: Optional[str], as_json: bool) -> None:
    """The GL2 orbit of the standard chain, with lambda3 by direct count and by normaliser index."""
    r = _ring(ring_spec)
    pl = build_line(r)
    embedding = _embedding(r, field)
    geometry = build_chain_geometry(pl, embedding)
    if export:
        design = make_design(pl.size, pl.parallel_classes, geometry.chains,
                             metadata={"K": embedding.description, "R": r.name})
        Path(export).write_text(write_design(design, 3))
    report = ChainReport(
        ring=r.name, field=embedding.description, strategy=embedding.strategy,
        subfield=embedding.labels(), points=pl.size, chains=len(geometry.chains),
        chain_size=len(geometry.standard_chain), lambda3=geometry.lambda3,
        normaliser_index=geometry.normaliser_index, gl2_order=geometry.action.group_order,
        stabiliser_order=geometry.stabiliser_order,
    )
    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"K={report.field} in {report.ring} ({report.strategy}): subfield={_set(report.subfield)}")
    click.echo(f"points={report.points} chains={report.chains} chain_size={report.chain_size} "
               f"lambda3={report.lambda3} normaliser_index={report.normaliser_index}")


# ========== dd ==========
@cli.group(cls=RinglineGroup)
def dd() -> None:
    """Divisible designs."""


@dd.command("spera")
@click.option("--ring", "ring_spec", required=True, help="Ring spec")
@click.option("--field", "field", required=True, help="prime, constants, wedderburn, a GF(q) spec or a witness file")
@click.option("--drop", type=click.IntRange(0, 3), default=0, show_default=True,
              help="Remove infinity, 0 and 1 (in that order) from the standard chain")
@click.option("--t", "t", type=click.IntRange(min=1), default=3, show_default=True, help="Target t")
@click.option("--export", "export", type=click.Path(dir_okay=False), default=None, help="Write the design file")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def dd_spera(ring_spec: str, field: str, drop: int, t: int, export: Optional[str], as_json: bool) -> None:
    """Spera construction on P(R) with a (truncated) standard chain as base block."""
    r = _ring(ring_spec)
    pl = build_line(r)
    geometry = build_chain_geometry(pl, _embedding(r, field))
    design = truncated_chain_design(geometry, drop, t)
    if export:
        Path(export).write_text(write_design(design, t))
    if as_json:
        click.echo(_design_report(design).model_dump_json(indent=2))
        return
    _echo_design(design, f"v={design.v} b={design.b} transversal={_yes(design.transversal)}")


@dd.command("verify")
@click.argument("design_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "t", type=click.IntRange(min=1), required=True, help="Level to certify at")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def dd_verify(design_file: str, t: int, as_json: bool) -> None:
    """Certify a design file at t, or report the first violated axiom."""
    result = verify_dd(read_design(design_file), t)
    if as_json:
        violation = None
        if result.violation is not None:
            v = result.violation
            violation = ViolationReport(axiom=v.axiom, message=v.message,
                                        witness={key: str(value) for key, value in v.witness.items()})
        report = VerifyReport(ok=result.ok, design=_design_report(result.design) if result.ok else None,
                              violation=violation)
        click.echo(report.model_dump_json(indent=2))
    if not result.ok:
        raise CertificationError(result.violation)
    if not as_json:
        _echo_design(result.design, "OK")


@dd.command("iso")
@click.argument("first", type=click.Path(exists=True, dir_okay=False))
@click.argument("second", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "t", type=click.IntRange(min=1), default=None, help="Compare parameters at this t")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def dd_iso(first: str, second: str, t: Optional[int], as_json: bool) -> None:
    """Search for a class- and block-preserving point bijection."""
    d1, d2 = read_design(first), read_design(second)
    mapping = dd_isomorphic(d1, d2, t)
    report = IsoReport(
        isomorphic=mapping is not None,
        mapping=sorted(mapping.items()) if mapping is not None else None,
        maximal_t=(maximal_t(d1), maximal_t(d2)),
    )
    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    if mapping is None:
        click.echo("not isomorphic")
    else:
        click.echo("isomorphic: " + " ".join(f"{x}->{y}" for x, y in report.mapping))
    click.echo(f"maximal t: {report.maximal_t[0]} {report.maximal_t[1]}")


# ========== code ==========
@cli.group(cls=RinglineGroup)
def code() -> None:
    """Constant-weight codes."""


@code.command("export")
@click.argument("design_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out", type=click.Path(dir_okay=False), required=True, help="Code file to write")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def code_export(design_file: str, out: str, as_json: bool) -> None:
    """The constant-weight code of a design file, certified at the file's t."""
    design = read_design(design_file)
    result = verify_dd(design, int(design.metadata["t"]))
    if not result.ok:
        raise CertificationError(result.violation)
    cw = code_from_design(result.design)
    Path(out).write_text(write_code(cw))
    report = CodeReport(n=cw.n, m=cw.m, k=cw.k, words=len(cw.words), path=out)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"n={cw.n} m={cw.m} k={cw.k} words={len(cw.words)} -> {out}")


# ========== count ==========
@cli.group(cls=RinglineGroup)
def count() -> None:
    """Counting."""


@count.command("points")
@click.argument("spec")
@click.option("--json", "as_json", is_flag=True, help="Print a JSON report")
def count_points_command(spec: str, as_json: bool) -> None:
    """|P(R)| by the closed form and by enumeration."""
    parsed = parse_ring_spec(spec)
    r = build_ring(parsed)
    closed = count_points(r)
    enumerated = build_line(r).size
    if closed != enumerated:
        raise InternalConsistencyError(f"|P({r.name})|: closed form {closed}, enumerated {enumerated}")
    report = CountReport(spec=print_ring_spec(parsed), radical_size=len(r.radical),
                         wedderburn=_semisimple_signature(r), closed_form=closed, enumerated=enumerated)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    click.echo(f"closed_form={closed} enumerated={enumerated} radical={len(r.radical)} wedderburn={report.wedderburn}")


def main() -> None:
    cli(prog_name="ringline")


# Export
__all__ = ["cli", "main"]
