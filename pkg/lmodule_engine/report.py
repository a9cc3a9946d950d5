"""Report documents: a rich table for the terminal, sorted JSON for machines."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Optional

from lmodule_engine import __version__
from lmodule_engine.root_data import format_weight

if TYPE_CHECKING:
    from rich.console import Console

    from lmodule_engine.kostant import KostantComponent
    from lmodule_engine.lmodule_core import LModule, SESReport, ValidationReport
    from lmodule_engine.microsupport import LemmaViolation, MicroSupportReport, PurityResult, VanishingBound

SCHEMA_VERSION = 1


def _num(x) -> object:
    """Exact numbers: ints stay ints, other rationals become "p/q"."""
    if x is None:
        return None
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def input_hash(inputs: dict) -> str:
    canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def document(
    task: str,
    inputs: dict,
    result: dict,
    status: str = "ok",
    elapsed: Optional[float] = None,
) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "engine_version": __version__,
        "task": task,
        "inputs": inputs,
        "input_hash": input_hash(inputs),
        "status": status,
        "result": result,
    }
    if elapsed is not None:
        doc["elapsed_seconds"] = round(elapsed, 3)
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --- task results ------------------------------------------------------------


def kostant_result(components: Iterable["KostantComponent"], p_label: str, q_label: str) -> dict:
    rows = [[c.w.label(), format_weight(c.weight), c.degree] for c in components]
    return {
        "title": f"H(n) for {p_label} in {q_label}",
        "columns": ["w", "weight", "degree"],
        "rows": rows,
        "summary": {"components": len(rows), "degrees": sorted({r[2] for r in rows})},
    }


def microsupport_result(report: "MicroSupportReport") -> dict:
    rows = []
    for e in report.elements:
        span = "-" if e.type_interval is None else f"[{e.type_interval[0]}, {e.type_interval[1]}]"
        rows.append([
            e.p.label(),
            format_weight(e.weight),
            format_weight(e.xi),
            e.q_v.label(),
            e.q_v_prime.label(),
            span,
            _num(e.c_tilde),
            _num(e.d_tilde),
            e.kostant_word or "-",
        ])
    return {
        "title": "Micro-support",
        "columns": ["P", "V", "xi", "Q_V", "Q_V'", "Type", "c~", "d~", "w"],
        "rows": rows,
        "summary": {
            "c": _num(report.c),
            "d": _num(report.d),
            "essential": len(report.essential),
            "vanishes": report.vanishes,
            "flags": list(report.flags),
            "provenance": dict(report.provenance),
        },
    }


def vanishing_result(bound: "VanishingBound", report: Optional["MicroSupportReport"] = None) -> dict:
    out = microsupport_result(report) if report is not None else {"title": "Vanishing", "columns": [], "rows": []}
    out["title"] = "Vanishing bound"
    out["summary"] = dict(out.get("summary", {}))
    out["summary"].update({
        "dim_X": bound.dim_X,
        "half_dim_X": _num(bound.half_dim_X),
        "refined_bound": _num(bound.refined),
        "equal_rank": bound.equal_rank,
        "c": _num(bound.c),
        "d": _num(bound.d),
        "holds": bound.holds,
    })
    return out


def lemma_result(violations: Iterable["LemmaViolation"], descriptor: str, grid: int) -> dict:
    rows = [[v.p.label(), format_weight(v.lam), v.w, v.length, v.part, v.dim_n, v.dim_n_v] for v in violations]
    return {
        "title": f"Length inequalities on {descriptor}, grid 0..{grid}",
        "columns": ["P", "lambda", "w", "l(w)", "part", "dim n", "dim n(V)"],
        "rows": rows,
        "summary": {"violations": len(rows)},
    }


def oracle_compare_result(agree: bool, expected: Counter, got: Counter) -> dict:
    keys = sorted(set(expected) | set(got), key=lambda k: (k[1], k[0]))
    rows = [[format_weight(mu), d, expected.get((mu, d), 0), got.get((mu, d), 0)] for mu, d in keys]
    return {
        "title": "Kostant against Chevalley-Eilenberg",
        "columns": ["weight", "degree", "kostant", "oracle"],
        "rows": rows,
        "summary": {"agree": agree},
    }


def purity_result(result: "PurityResult") -> dict:
    out = microsupport_result(result.report)
    out["title"] = "Micro-purity"
    out["summary"].update({"pure": result.pure, "hypotheses_ok": result.hypotheses_ok, "notes": list(result.notes)})
    return out


def validate_result(report: "ValidationReport", m: "LModule") -> dict:
    rows = [[loc] for loc in report.locations()]
    return {
        "title": f"Axiom check on {len(m.strata)} strata",
        "columns": ["residual at"],
        "rows": rows,
        "summary": {"ok": report.ok, "construction": m.construction},
    }


def build_result(m: "LModule", path: Optional[str]) -> dict:
    rows = [[p.label(), str(e)] for p, e in m.E.items()]
    return {
        "title": f"{m.construction} on {m.root_system.descriptor}",
        "columns": ["P", "E_P"],
        "rows": rows,
        "summary": {"maps": len(m.f), "written_to": path},
    }


def ses_result(report: "SESReport") -> dict:
    rows = [
        [format_weight(r["weight"]), r["degree"], *r["dims"], *r["ranks"]]
        for r in report.rows
    ]
    return {
        "title": f"Pair sequence for {report.p.label()} <= {report.q.label()}",
        "columns": ["weight", "degree", "sub", "mid", "quot", "rank in", "rank out", "connecting"],
        "rows": rows,
        "summary": {"exact": report.exact},
    }


# --- rendering ---------------------------------------------------------------


def render_table(doc: dict, console: Optional["Console"] = None) -> None:
    """Print a report document as a rich table with a summary footer."""
    from rich.console import Console
    from rich.panel import Panel
    from rich.table import Table

    console = console or Console()
    result = doc["result"]
    color = "green" if doc["status"] == "ok" else "red"

    console.print(
        Panel(
            f"[bold]lml v{doc['engine_version']}[/bold]: {result.get('title', doc['task'])}"
            f"  [{color}]{doc['status']}[/{color}]",
            border_style="blue",
        )
    )
    if result.get("columns"):
        table = Table(show_header=True, header_style="bold", padding=(0, 1))
        for n, col in enumerate(result["columns"]):
            table.add_column(col, style="cyan" if n == 0 else None)
        for row in result["rows"]:
            table.add_row(*("-" if x is None else str(x) for x in row))
        console.print(table)
    for key, value in sorted(result.get("summary", {}).items()):
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in sorted(value.items()))
        elif isinstance(value, list):
            value = "; ".join(str(v) for v in value) or "-"
        console.print(f"  [bold]{key}[/bold]: {value}")
    if "elapsed_seconds" in doc:
        console.print(f"[dim]{doc['elapsed_seconds']}s[/dim]")
