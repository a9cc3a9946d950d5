"""lml CLI: Kostant data, micro-support and vanishing checks for L-modules."""

from __future__ import annotations

import logging
import sys
import time
from dataclasses import asdict, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.logging import RichHandler

from lmodule_engine import __version__
from lmodule_engine.ce_oracle import compare_with_kostant
from lmodule_engine.config import Caps
from lmodule_engine.errors import InvariantError, LmlError, ProblemSpecError
from lmodule_engine.kostant import kostant_cohomology
from lmodule_engine.lmodule_core import IC, IGSTAR, WC, Perversity, build, ses_of_pair, validate
from lmodule_engine.microsupport import (
    RealFormOracle,
    eqn_microtypes_check,
    micro_purity_check,
    micro_support,
    vanishing_bound,
    verify_basic_lemma,
)
from lmodule_engine.parabolics import parse_parabolic, whole_group
from lmodule_engine.problem import ProblemSpec, load_problem
from lmodule_engine.report import (
    build_result,
    document,
    kostant_result,
    lemma_result,
    microsupport_result,
    oracle_compare_result,
    purity_result,
    render_table,
    ses_result,
    to_json,
    validate_result,
    vanishing_result,
)
from lmodule_engine.root_data import as_weight, build_root_system
from lmodule_engine.serialize import SUFFIX, read_lmodule, write_lmodule

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

_err = Console(stderr=True)


def _setup_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=_err, show_path=False)],
        force=True,
    )


def _weight(spec: ProblemSpec, rank: int):
    if spec.weight is None:
        return as_weight([0] * rank)
    try:
        lam = as_weight(Fraction(x) for x in spec.weight)
    except (ValueError, ZeroDivisionError):
        raise ProblemSpecError(f"cannot read weight {','.join(spec.weight)!r}")
    if len(lam) != rank:
        raise ProblemSpecError(f"weight {','.join(spec.weight)} has {len(lam)} coordinates, {spec.cartan_type} needs {rank}")
    return lam


def _oracle(spec: ProblemSpec, rs) -> RealFormOracle:
    if spec.real_form == "table":
        return RealFormOracle.from_table(spec.table, rs)
    return RealFormOracle.split()


def _module(spec: ProblemSpec, rs, lam, oracle, lmod: Optional[Path]):
    if lmod is not None:
        return read_lmodule(lmod, strict=False)
    return build(rs, lam, spec.construction, spec.variant, oracle)


def run(spec: ProblemSpec, caps: Caps, lmod: Optional[Path] = None) -> tuple[dict, str]:
    """Dispatch a task; returns (result payload, status)."""
    rs = build_root_system(spec.cartan_type, scales=spec.scales)
    caps.check("rank", rs.rank, f"rank of {rs.descriptor}")
    lam = _weight(spec, rs.rank)
    oracle = _oracle(spec, rs)
    g = whole_group(rs)
    p = parse_parabolic(rs, spec.parabolic) if spec.parabolic is not None else None
    q = parse_parabolic(rs, spec.q) if spec.q is not None else g
    task = spec.task

    if task == "kostant":
        p = p if p is not None else parse_parabolic(rs, "[]")
        return kostant_result(kostant_cohomology(p, q, lam), p.label(), q.label()), "ok"

    if task == "oracle-compare":
        p = p if p is not None else parse_parabolic(rs, "[]")
        agree, expected, got = compare_with_kostant(p, q, lam, caps)
        return oracle_compare_result(agree, expected, got), "ok" if agree else "violation"

    if task == "verify-lemma":
        if spec.grid < 0:
            raise ProblemSpecError(f"grid must be non-negative, got {spec.grid}")
        violations = verify_basic_lemma(rs, spec.grid, oracle, caps)
        return lemma_result(violations, rs.descriptor, spec.grid), "violation" if violations else "ok"

    if task == "vanishing":
        bound = vanishing_bound(rs, lam, oracle)
        return vanishing_result(bound, bound.report), "ok" if bound.holds else "violation"

    if task == "ic-purity":
        if spec.construction not in (IC, WC):
            raise ProblemSpecError(f"ic-purity needs construction ic or wc, not {spec.construction}")
        construction = spec.construction
        result = micro_purity_check(rs, lam, construction, spec.variant, oracle)
        failed = result.hypotheses_ok and not result.pure
        return purity_result(result), "violation" if failed else "ok"

    if task == "microtypes":
        p = p if p is not None else parse_parabolic(rs, "[]")
        result = eqn_microtypes_check(rs, lam, p, Perversity(spec.variant or "upper"), oracle)
        rows = [[label, str(result.expected[label]), str(result.got[label])] for label in sorted(result.expected)]
        payload = {
            "title": f"Microtypes at {p.label()}",
            "columns": ["Q", "expected", "computed"],
            "rows": rows,
            "summary": {"matches": result.matches, "cut": result.cut},
        }
        return payload, "ok" if result.matches else "violation"

    m = _module(spec, rs, lam, oracle, lmod)

    if task == "microsupport":
        report = micro_support(m, oracle)
        return microsupport_result(report), "ok" if report.parity_ok else "violation"

    if task == "validate":
        report = validate(m)
        return validate_result(report, m), "ok" if report.ok else "violation"

    if task == "build":
        path = None
        if spec.output:
            path = str(write_lmodule(m, spec.output))
        return build_result(m, path), "ok"

    if task == "ses":
        p = p if p is not None else parse_parabolic(rs, "[]")
        try:
            report = ses_of_pair(m, p, q)
        except InvariantError as exc:
            return {"title": "Pair sequence", "columns": [], "rows": [], "summary": {"error": str(exc)}}, "violation"
        return ses_result(report), "ok"

    raise ProblemSpecError(f"unknown task {task!r}")


def _resolve(task: str, options: dict) -> tuple[ProblemSpec, Optional[Path]]:
    """Problem file (if any) overridden by command-line options."""
    source = options.get("input")
    lmod = None
    if source and Path(source).suffix == SUFFIX:
        lmod = Path(source)
        source = None
    if source:
        spec = replace(load_problem(source), task=task)
    else:
        if not options.get("cartan_type") and lmod is None:
            raise ProblemSpecError("give --type or --input")
        spec = ProblemSpec(cartan_type=options.get("cartan_type") or "A1", task=task)
    overrides = {}
    if options.get("cartan_type"):
        overrides["cartan_type"] = options["cartan_type"]
    if options.get("lam"):
        overrides["weight"] = tuple(x.strip() for x in options["lam"].split(","))
    for key in ("parabolic", "q", "construction", "grid"):
        if options.get(key) is not None:
            overrides[key] = options[key]
    variant = options.get("perversity") or options.get("profile")
    if variant:
        overrides["variant"] = variant
    if task == "build" and options.get("output"):
        overrides["output"] = options["output"]
    spec = replace(spec, **overrides)
    if lmod is not None:
        module = read_lmodule(lmod, strict=False)
        rs = module.root_system
        spec = replace(spec, cartan_type=rs.descriptor, scales=tuple(str(s) for s in rs.scales))
    return spec, lmod


def _emit(doc: dict, fmt: str, output: Optional[str], task: str) -> None:
    if fmt == "json":
        click.echo(to_json(doc), nl=False)
    else:
        render_table(doc, Console())
    if output and task != "build":
        Path(output).write_text(to_json(doc), encoding="utf-8")
        click.echo(f"Report written to {output}", err=True)


def _execute(task: str, options: dict) -> None:
    start = time.perf_counter()
    try:
        spec, lmod = _resolve(task, options)
        caps = spec.resolved_caps(Caps.from_env())
        result, status = run(spec, caps, lmod)
    except LmlError as exc:
        _err.print(f"[red]error:[/red] {exc}")
        sys.exit(EXIT_INPUT)
    elapsed = time.perf_counter() - start if options.get("timing") else None
    inputs = {k: v for k, v in asdict(spec).items() if k != "output"}
    doc = document(task, inputs, result, status, elapsed)
    _emit(doc, options.get("fmt") or "table", options.get("output"), task)
    if status != "ok":
        sys.exit(EXIT_VIOLATION)


def task_options(func):
    """Options shared by every task command."""
    decorators = [
        click.option("--input", "-i", "input", type=click.Path(exists=True, dir_okay=False),
                     help="Problem file, or a .lmod module file"),
        click.option("--type", "-t", "cartan_type", help="Cartan type, e.g. C2 or A1xA1"),
        click.option("--lambda", "-l", "lam", help="Highest weight, comma-separated (e.g. 1,1)"),
        click.option("--parabolic", "-p", help="Parabolic by Levi simple roots, e.g. 0 or [0,1]"),
        click.option("--q", "q", help="Upper parabolic (default: the whole group)"),
        click.option("--construction", "-c", type=click.Choice([IGSTAR, IC, WC])),
        click.option("--perversity", type=click.Choice(["upper", "lower"])),
        click.option("--profile", type=click.Choice(["upper", "lower"])),
        click.option("--grid", type=int, help="Largest weight coefficient in lemma scans"),
        click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table"),
        click.option("--output", "-o", type=click.Path(), help="Output file path"),
        click.option("--timing", is_flag=True, help="Add elapsed time to the report"),
    ]
    for deco in reversed(decorators):
        func = deco(func)
    return func


@click.group(invoke_without_command=True)
@click.version_option(version=__version__, prog_name="lml")
@click.option("--verbose", "-v", count=True, help="-v for progress, -vv for debug output")
@click.pass_context
def cli(ctx, verbose):
    """lml: micro-support and vanishing ranges for L-modules."""
    _setup_logging(verbose)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command(name="kostant")
@task_options
def kostant_cmd(**options):
    """Components of H(n_P^Q; V_lambda) by Kostant's theorem."""
    _execute("kostant", options)


@cli.command(name="oracle-compare")
@task_options
def oracle_compare_cmd(**options):
    """Compare Kostant's theorem with the explicit Chevalley-Eilenberg complex."""
    _execute("oracle-compare", options)


@cli.command(name="microsupport")
@task_options
def microsupport_cmd(**options):
    """Micro-support, Type_V and degree bounds of a built or loaded L-module."""
    _execute("microsupport", options)


@cli.command(name="vanishing")
@task_options
def vanishing_cmd(**options):
    """c(i_G*E) against half the dimension of X."""
    _execute("vanishing", options)


@cli.command(name="verify-lemma")
@task_options
def verify_lemma_cmd(**options):
    """Scan the length inequalities over all parabolics and a weight grid."""
    _execute("verify-lemma", options)


@cli.command(name="ic-purity")
@task_options
def ic_purity_cmd(**options):
    """Check that IC (or WC) is micro-pure."""
    _execute("ic-purity", options)


@cli.command(name="microtypes")
@task_options
def microtypes_cmd(**options):
    """Local cohomology of IC at a maximal parabolic against truncated H(n_P; E)."""
    _execute("microtypes", options)


@cli.command(name="validate")
@task_options
def validate_cmd(**options):
    """Check the L-module axiom; residual locations are reported."""
    _execute("validate", options)


@cli.command(name="build")
@task_options
def build_cmd(**options):
    """Build i_G*E, IC or WC and optionally write it as a .lmod file."""
    _execute("build", options)


@cli.command(name="ses")
@task_options
def ses_cmd(**options):
    """Exactness of the pair sequence for P <= Q."""
    _execute("ses", options)


def main():
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
