"""Human-readable output for the command line, drawn with rich."""

from rich.console import Console
from rich.table import Table
from rich.text import Text

from src.application.analysis_types import BoundCertificate, ReductionResult, TraceStep
from src.application.catalog import DryRunReport, ExampleSpec, ExampleVerification
from src.application.local_action import LocalActionReport
from src.application.pairs import PairValidation, VTPair
from src.application.quotients import QuotientResult
from src.application.reports import PairAnalysis
from src.engine.bound_expr import BoundExpr, exact_value, format_bound, log2_bounds
from src.engine.graphs import graph_invariants

_MARK = {True: Text("ok", style="green"), False: Text("FAIL", style="bold red")}
_VERDICT_STYLE = {"within": "green", "exceeds": "bold red", "undecided": "yellow"}


def _yes_no(value: bool | None) -> str:
    if value is None:
        return "-"
    return "yes" if value else "no"


def _facts(title: str, rows: list[tuple[str, object]]) -> Table:
    table = Table(title=title, show_header=False, title_justify="left")
    table.add_column(style="bold")
    table.add_column()
    for key, value in rows:
        table.add_row(key, value if isinstance(value, Text) else str(value))
    return table


# ==================================================================================
# Traces
# ==================================================================================


def format_step(step: TraceStep) -> Text:
    line = Text.assemble(_MARK[step.passed], " ", (step.name, "bold"))
    if step.detail:
        line.append(f"  {step.detail}", style="dim")
    return line


def step_printer(console: Console):
    """Callback printing each trace step as it completes."""

    def on_step(step: TraceStep) -> None:
        console.print(format_step(step))

    return on_step


def render_trace(console: Console, steps: tuple[TraceStep, ...]) -> None:
    for step in steps:
        console.print(format_step(step))


# ==================================================================================
# Pairs
# ==================================================================================


def _pair_rows(pair: VTPair) -> list[tuple[str, object]]:
    low, high = pair.graph.valencies()
    valency = str(low) if low == high else f"{low}..{high}"
    return [
        ("vertices", pair.vertex_count),
        ("edges", pair.graph.edge_count),
        ("valency", valency),
        ("d", pair.d),
        ("|G|", pair.group_order()),
        ("|G_α|", pair.stabiliser_order()),
    ]


def render_validation(console: Console, validation: PairValidation) -> None:
    console.print(Text.assemble(_MARK[validation.ok], " ", validation.status))
    if validation.detail:
        console.print(validation.detail, style="dim")


def render_local(console: Console, report: LocalActionReport) -> None:
    flags = report.flags
    rows: list[tuple[str, object]] = [
        ("vertex", report.vertex),
        ("neighbourhood", " ".join(map(str, report.neighbourhood))),
        ("induced order", report.induced_group.order()),
        ("kernel order", report.kernel_order),
        ("faithful", _yes_no(report.faithful)),
        ("transitive", _yes_no(flags.transitive)),
        ("2-transitive", _yes_no(flags.two_transitive)),
        ("primitive", _yes_no(flags.primitive)),
        ("quasiprimitive", _yes_no(flags.quasiprimitive)),
        ("semiprimitive", _yes_no(flags.semiprimitive)),
    ]
    if flags.reason:
        rows.append(("note", flags.reason))
    console.print(_facts("local action", rows))


def render_analysis(console: Console, analysis: PairAnalysis) -> None:
    profile = analysis.profile
    invariants = graph_invariants(analysis.pair.graph)
    rows = _pair_rows(analysis.pair)
    rows.append(("diameter", "-" if invariants.diameter is None else invariants.diameter))
    if profile is None:
        rows.append(("quasiprimitive", _yes_no(analysis.coset_quasiprimitive)))
    else:
        rows += [
            ("quasiprimitive", _yes_no(profile.quasiprimitive)),
            ("biquasiprimitive", _yes_no(profile.biquasiprimitive)),
            ("semiprimitive", _yes_no(profile.semiprimitive)),
        ]
    rows.append(("route", Text(analysis.route, style="bold cyan")))
    console.print(_facts("pair", rows))
    render_local(console, analysis.local)


def render_quotient(console: Console, result: QuotientResult) -> None:
    low, high = result.valency_drop
    rows: list[tuple[str, object]] = [
        ("blocks", len(result.blocks)),
        ("block size", len(result.blocks[0])),
        ("valency", f"{low} -> {high}"),
        ("image order", result.image_group.order()),
        ("kernel order", result.kernel.order()),
        ("certified", _yes_no(result.pair is not None)),
    ]
    console.print(_facts("normal quotient", rows))
    adjacency = Table("block", "members", "neighbours", title="quotient graph", title_justify="left")
    for index, (block, row) in enumerate(zip(result.blocks, result.quotient_graph.adjacency)):
        adjacency.add_row(str(index), " ".join(map(str, block)), " ".join(map(str, row)))
    console.print(adjacency)


# ==================================================================================
# Bounds and reductions
# ==================================================================================


def render_bound(console: Console, expr: BoundExpr, exact_bits: int) -> None:
    low, high = log2_bounds(expr)
    exact = exact_value(expr, exact_bits)
    rows: list[tuple[str, object]] = [("bound", format_bound(expr))]
    rows.append(("exact", "too large" if exact is None else exact))
    rows.append(("log2", f"[{low}, {high}]"))
    console.print(_facts("bound", rows))


def render_certificate(console: Console, certificate: BoundCertificate) -> None:
    verdict = certificate.comparison.verdict
    console.print(
        Text.assemble(
            (certificate.label, "bold"),
            f": {certificate.value} <= {format_bound(certificate.bound)}  ",
            (verdict, _VERDICT_STYLE[verdict]),
        )
    )


def render_bound_table(console: Console, rows: list[tuple[str, str, BoundExpr]]) -> None:
    table = Table("name", "bound", "value", "log2", title="named bounds", title_justify="left")
    for name, display, expr in rows:
        low, high = log2_bounds(expr)
        exact = exact_value(expr)
        shown = str(exact) if exact is not None and len(str(exact)) <= 30 else "-"
        table.add_row(name, display, shown, f"[{low}, {high}]")
    console.print(table)


def render_reduction(console: Console, result: ReductionResult) -> None:
    style = "bold red" if result.outcome == "unclassified" else "bold green"
    console.print(Text.assemble("outcome ", (result.outcome, style), f"  route {result.route}"))
    if result.bound is not None:
        console.print(f"bound {result.bound_name or format_bound(result.bound)}")
    if result.certificate is not None:
        render_certificate(console, result.certificate)
    for index, reduced in enumerate(result.reduced):
        console.print(_facts(f"reduced pair {index}", _pair_rows(reduced)))
    if result.reason:
        console.print(f"reason: {result.reason}", style="yellow")
    for note in result.notes:
        console.print(f"note: {note}", style="dim")


# ==================================================================================
# Catalog
# ==================================================================================


def render_catalog(console: Console, specs: list[ExampleSpec]) -> None:
    table = Table("name", "parameters", "checks", "summary", title="examples", title_justify="left")
    for spec in specs:
        params = " ".join(f"{k}={v}" for k, v in spec.parameters.items()) or "-"
        checks = "dry run" if spec.dry_run_only else str(len(spec.expected))
        table.add_row(spec.name, params, checks, spec.summary)
    console.print(table)


def render_spec(console: Console, spec: ExampleSpec) -> None:
    console.print(Text(spec.name, style="bold"), spec.summary)
    table = Table("assertion", "provenance", "description")
    for expected in spec.expected:
        style = "yellow" if expected.provenance == "discrepancy" else ""
        table.add_row(expected.name, Text(expected.provenance, style=style), expected.description)
    console.print(table)


def render_dry_run(console: Console, report: DryRunReport) -> None:
    rows: list[tuple[str, object]] = [(f"|{k}|", v) for k, v in report.orders.items()]
    rows.append(("feasible", _yes_no(report.feasible)))
    if report.reason:
        rows.append(("reason", report.reason))
    console.print(_facts(f"{report.name} dry run", rows))


def render_verification(console: Console, verification: ExampleVerification) -> None:
    failures = verification.failures()
    if failures:
        console.print(
            Text(f"{verification.name}: {len(failures)} assertion(s) failed", style="bold red")
        )
    else:
        console.print(
            Text(f"{verification.name}: all {len(verification.steps)} checks passed", style="green")
        )
