"""
The `vtsa` command line.

Every command prints a rich report, or a JSON document under `--json`.
Exit codes: 0 success, 1 failed assertion or user error, 2 when a
reduction (or a bound comparison) ends unclassified.
"""

import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import click
from rich.console import Console
from rich.logging import RichHandler
from sympy.core import random as sympy_random

from src.adapters.files import (
    FormatError,
    parse_bound_text,
    read_bound,
    read_group,
    read_pair,
    write_pair,
)
from src.application.analysis_types import AnalysisConfig, AnalysisError
from src.application.boundedness import compare
from src.application.catalog import (
    CatalogError,
    build_example,
    dry_run,
    example_names,
    example_spec,
    verify_example,
)
from src.application.local_action import local_action
from src.application.pairs import InvalidPairError, VTPair
from src.application.quotients import normal_quotient
from src.application.reports import (
    analysis_json,
    analyze_pair,
    bound_json,
    certificate_json,
    dry_run_json,
    local_json,
    pair_json,
    quotient_json,
    reduce_pair,
    reduction_json,
    spec_json,
    trace_json,
    validation_json,
    verification_json,
)
from src.engine.bound_expr import BoundError, BoundExpr
from src.engine.bound_functions import (
    NAMED_BOUNDS,
    BoundFn,
    constant,
    f3,
    f_hat,
    f_tilde,
    g_star,
)
from src.engine.cosets import DEFAULT_MAX_POINTS
from src.engine.graphs import GraphError
from src.engine.groups import GroupError, PermGroup

from . import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNCLASSIFIED = 2

USER_ERRORS = (
    FormatError,
    CatalogError,
    InvalidPairError,
    GroupError,
    GraphError,
    BoundError,
    AnalysisError,
)


@dataclass(frozen=True)
class CliState:
    config: AnalysisConfig
    as_json: bool
    console: Console

    def emit(self, payload: Any, draw: Callable[[Console], None]) -> None:
        if self.as_json:
            click.echo(json.dumps(payload, indent=2))
        else:
            draw(self.console)

    def on_step(self):
        return None if self.as_json else render.step_printer(self.console)


class ReportGroup(click.Group):
    """
    Click group that returns exit codes instead of click's defaults.

    Usage errors and domain errors both exit with 1; a command's integer
    return value becomes the exit code.
    """

    def main(  # type: ignore[override]
        self,
        args: Sequence[str] | None = None,
        prog_name: str | None = None,
        complete_var: str | None = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> int:
        try:
            result = super().main(args, prog_name, complete_var, False, **extra)
            code = result if isinstance(result, int) else EXIT_OK
        except click.ClickException as error:
            error.show()
            code = EXIT_FAILURE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_FAILURE
        except USER_ERRORS as error:
            logger.debug("command failed", exc_info=True)
            click.echo(f"error: {error}", err=True)
            code = EXIT_FAILURE
        if standalone_mode:
            sys.exit(code)
        return code


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    handler = RichHandler(console=Console(stderr=True), show_path=False, show_time=False)
    logging.basicConfig(level=level, format="%(message)s", handlers=[handler], force=True)


def run_report(args: Sequence[str] | None = None) -> int:
    """Run one command line and return its exit code."""
    return cli.main(args=args, prog_name="vtsa", standalone_mode=False)


# ==================================================================================
# Input helpers
# ==================================================================================


@dataclass(frozen=True)
class _Loaded:
    pair: VTPair
    auxiliary: dict[str, PermGroup]


def _load(state: CliState, source: str) -> _Loaded:
    """Read a pair file, or build a catalog example with default parameters."""
    path = Path(source)
    if not path.exists() and source in example_names():
        built = build_example(source, config=state.config)
        return _Loaded(built.pair, built.auxiliary)
    if not path.is_file():
        raise click.BadParameter(f"no pair file or example named {source!r}", param_hint="PAIR")
    return _Loaded(read_pair(path), {})


def _key_values(pairs: Sequence[str]) -> dict[str, str]:
    result = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise click.BadParameter(f"expected KEY=VALUE, got {item!r}")
        result[key] = value
    return result


def _extra_params(args: Sequence[str]) -> dict[str, str]:
    """Read `--key value` and `--key=value` pairs left over by click."""
    params: dict[str, str] = {}
    tokens = list(args)
    while tokens:
        token = tokens.pop(0)
        if not token.startswith("--") or len(token) == 2:
            raise click.UsageError(f"unexpected argument {token!r}")
        key, sep, value = token[2:].partition("=")
        if not sep:
            if not tokens:
                raise click.UsageError(f"parameter --{key} needs a value")
            value = tokens.pop(0)
        params[key] = value
    return params


def _bound_fn(name: str) -> BoundFn:
    if name.isdigit():
        return constant(int(name))
    try:
        return NAMED_BOUNDS[name]
    except KeyError:
        choices = ", ".join(NAMED_BOUNDS)
        raise click.BadParameter(f"{name!r} is neither an integer nor one of {choices}") from None


def _set_json(ctx: click.Context, _param: click.Parameter, value: bool) -> None:
    if value and ctx.obj is not None:
        ctx.obj = replace(ctx.obj, as_json=True)


json_option = click.option(
    "--json",
    "as_json",
    is_flag=True,
    expose_value=False,
    callback=_set_json,
    help="Emit JSON on stdout.",
)


# ==================================================================================
# Commands
# ==================================================================================


@click.group(cls=ReportGroup)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON on stdout.")
@click.option(
    "--max-points",
    type=click.IntRange(1),
    default=DEFAULT_MAX_POINTS,
    show_default=True,
    help="Largest number of points built.",
)
@click.option(
    "--max-order",
    type=click.IntRange(1),
    default=AnalysisConfig.max_order,
    show_default=True,
    help="Largest group order constructed from catalog data.",
)
@click.option("--seed", type=int, help="Seed for randomized group algorithms.")
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug output.")
@click.pass_context
def cli(
    ctx: click.Context,
    as_json: bool,
    max_points: int,
    max_order: int,
    seed: int | None,
    verbose: int,
) -> None:
    """Analyse vertex-transitive graphs and the groups acting on them."""
    configure_logging(verbose)
    if seed is not None:
        sympy_random.seed(seed)
    config = AnalysisConfig(max_points=max_points, max_order=max_order, seed=seed)
    ctx.obj = CliState(config, as_json, Console(highlight=False))


@cli.command()
@click.argument("source", metavar="PAIR")
@json_option
@click.pass_obj
def analyze(state: CliState, source: str) -> int:
    """Validate a pair and report its structure and local action."""
    try:
        loaded = _load(state, source)
    except InvalidPairError as error:
        state.emit(
            {"validation": validation_json(error.validation)},
            lambda console: render.render_validation(console, error.validation),
        )
        return EXIT_FAILURE
    analysis = analyze_pair(loaded.pair, state.config)
    payload = {"validation": {"ok": True, "status": "valid", "detail": ""}}
    payload.update(analysis_json(analysis))
    state.emit(payload, lambda console: render.render_analysis(console, analysis))
    return EXIT_OK


@cli.command()
@click.argument("source", metavar="PAIR")
@click.option(
    "--normal",
    required=True,
    help="Group file of the normal subgroup, or an auxiliary group of an example.",
)
@json_option
@click.pass_obj
def quotient(state: CliState, source: str, normal: str) -> int:
    """Form the normal quotient by the orbits of a normal subgroup."""
    loaded = _load(state, source)
    if normal in loaded.auxiliary:
        subgroup = loaded.auxiliary[normal]
    elif Path(normal).is_file():
        subgroup = read_group(normal)
    else:
        names = ", ".join(loaded.auxiliary) or "none"
        raise click.BadParameter(
            f"{normal!r} is not a group file or auxiliary group ({names})", param_hint="--normal"
        )
    result = normal_quotient(loaded.pair, subgroup)
    state.emit(quotient_json(result), lambda console: render.render_quotient(console, result))
    return EXIT_OK


@cli.command()
@click.argument("source", metavar="PAIR")
@click.argument("vertex_arg", metavar="[VERTEX]", type=click.IntRange(0), required=False)
@click.option("--vertex", type=click.IntRange(0), help="Vertex to inspect, 0 by default.")
@json_option
@click.pass_obj
def local(state: CliState, source: str, vertex_arg: int | None, vertex: int | None) -> int:
    """Report the local action at a vertex, given as VERTEX or --vertex."""
    if vertex_arg is not None and vertex is not None and vertex_arg != vertex:
        raise click.UsageError(f"VERTEX {vertex_arg} and --vertex {vertex} disagree")
    chosen = next((v for v in (vertex_arg, vertex) if v is not None), 0)
    pair = _load(state, source).pair
    report = local_action(pair, chosen, state.config.element_budget)
    state.emit(local_json(report), lambda console: render.render_local(console, report))
    return EXIT_OK


@cli.command()
@click.argument("source", metavar="PAIR")
@json_option
@click.pass_obj
def reduce(state: CliState, source: str) -> int:
    """Run the quasiprimitive or biquasiprimitive reduction."""
    pair = _load(state, source).pair
    result = reduce_pair(pair, config=state.config, on_step=state.on_step())
    state.emit(reduction_json(result), lambda console: render.render_reduction(console, result))
    if result.outcome == "unclassified":
        return EXIT_UNCLASSIFIED
    return EXIT_OK if result.trace_passed else EXIT_FAILURE


# ==================================================================================
# Bounds
# ==================================================================================


@cli.group()
def bounds() -> None:
    """Evaluate and compare bound expressions."""


def _expression(
    text: str | None, path: Path | None, d: int | None, variables: Sequence[str]
) -> BoundExpr:
    env = {k: int(v) for k, v in _key_values(variables).items() if v.isdigit()}
    if len(env) != len(variables):
        raise click.BadParameter("variables take non-negative integer values", param_hint="--var")
    if d is not None:
        env["d"] = d
    if path is not None:
        return read_bound(path, env)
    if text is None:
        raise click.UsageError("give an expression, --file, --fhat, --ftilde, --gstar or --f3")
    return parse_bound_text(text, env)


def _f3_expression(items: Sequence[str]) -> BoundExpr:
    fields = _key_values(items)
    if set(fields) != {"d", "f1", "f2"}:
        raise click.BadParameter("expected d=D f1=F1 f2=F2", param_hint="--f3")
    if not fields["d"].isdigit() or int(fields["d"]) < 1:
        raise click.BadParameter("d must be a positive integer", param_hint="--f3")
    return f3(_bound_fn(fields["f1"]), _bound_fn(fields["f2"]), int(fields["d"]))


@bounds.command("eval")
@click.argument("expression", required=False)
@click.option("--d", "d", type=click.IntRange(1), help="Valency, bound to the variable d.")
@click.option("--var", "variables", multiple=True, metavar="NAME=VALUE")
@click.option("--file", "path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--fhat", metavar="G", help="Evaluate f_hat(G) at d.")
@click.option("--ftilde", metavar="F", help="Evaluate f_tilde(F) at d.")
@click.option("--gstar", nargs=2, metavar="G1 G2", help="Evaluate g_star(G1, G2) at d.")
@click.option(
    "--f3", "f3_fields", nargs=3, metavar="d=D f1=F1 f2=F2", help="Evaluate f3(F1, F2) at D."
)
@json_option
@click.pass_obj
def bounds_eval(
    state: CliState,
    expression: str | None,
    d: int | None,
    variables: tuple[str, ...],
    path: Path | None,
    fhat: str | None,
    ftilde: str | None,
    gstar: tuple[str, str] | None,
    f3_fields: tuple[str, str, str] | None,
) -> int:
    """
    Evaluate a bound expression.

    Bound functions G, F are integers or the named bounds listed by
    `vtsa bounds table`.
    """
    forms = [fhat is not None, ftilde is not None, bool(gstar), bool(f3_fields)]
    if sum(forms) > 1 or (any(forms) and (expression or path)):
        raise click.UsageError(
            "give exactly one of an expression, --file, --fhat, --ftilde, --gstar, --f3"
        )
    if f3_fields:
        if d is not None:
            raise click.UsageError("--f3 takes d as d=D, not --d")
        expr = _f3_expression(f3_fields)
    elif any(forms) and d is None:
        raise click.UsageError("--fhat, --ftilde and --gstar need --d")
    elif fhat is not None:
        expr = f_hat(_bound_fn(fhat), d)
    elif ftilde is not None:
        expr = f_tilde(_bound_fn(ftilde), d)
    elif gstar:
        expr = g_star(_bound_fn(gstar[0]), _bound_fn(gstar[1]), d)
    else:
        expr = _expression(expression, path, d, variables)
    state.emit(
        bound_json(expr, state.config),
        lambda console: render.render_bound(console, expr, state.config.exact_threshold_bits),
    )
    return EXIT_OK


@bounds.command("cmp")
@click.argument("source", metavar="EXPRFILE")
@click.argument("value", type=click.IntRange(0))
@click.option("--d", "d", type=click.IntRange(1))
@click.option("--var", "variables", multiple=True, metavar="NAME=VALUE")
@json_option
@click.pass_obj
def bounds_cmp(
    state: CliState, source: str, value: int, d: int | None, variables: tuple[str, ...]
) -> int:
    """
    Decide VALUE <= the bound in EXPRFILE; exits 1 when it fails, 2 when undecided.

    EXPRFILE may also be the expression text itself.
    """
    path = Path(source)
    if path.is_file():
        expr = _expression(None, path, d, variables)
    else:
        expr = _expression(source, None, d, variables)
    certificate = compare("value", expr, value, state.config)
    state.emit(
        certificate_json(certificate),
        lambda console: render.render_certificate(console, certificate),
    )
    verdict = certificate.comparison.verdict
    return {"within": EXIT_OK, "exceeds": EXIT_FAILURE}.get(verdict, EXIT_UNCLASSIFIED)


@bounds.command("table")
@click.option("--d", "d", type=click.IntRange(2), required=True)
@json_option
@click.pass_obj
def bounds_table(state: CliState, d: int) -> int:
    """List the named bounds at valency d."""
    rows = [(name, fn.name, fn(d)) for name, fn in NAMED_BOUNDS.items()]
    payload = {
        "d": d,
        "bounds": [
            {"name": name, "function": display, **bound_json(expr, state.config)}
            for name, display, expr in rows
        ],
    }
    state.emit(payload, lambda console: render.render_bound_table(console, rows))
    return EXIT_OK


# ==================================================================================
# Examples
# ==================================================================================

_EXTRA_ARGS = {"ignore_unknown_options": True, "allow_extra_args": True}


def _example_params(ctx: click.Context, params: Sequence[str]) -> dict[str, str]:
    merged = _key_values(params)
    merged.update(_extra_params(ctx.args))
    return merged


def _verify(state: CliState, name: str, params: dict[str, str]) -> int:
    verification = verify_example(name, params, config=state.config, on_step=state.on_step())
    state.emit(
        verification_json(verification),
        lambda console: render.render_verification(console, verification),
    )
    return EXIT_OK if verification.ok else EXIT_FAILURE


@cli.command(context_settings=_EXTRA_ARGS)
@click.argument("name", required=False)
@click.option("--list", "list_all", is_flag=True, help="List the catalog.")
@click.option("--verify", is_flag=True, help="Check the expected assertions.")
@click.option("--dry-run", "dry", is_flag=True, help="Report sizes without building.")
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE")
@click.option(
    "--save",
    type=click.Path(file_okay=False, path_type=Path),
    help="Write the pair, graph and group files into this directory.",
)
@json_option
@click.pass_context
def example(
    ctx: click.Context,
    name: str | None,
    list_all: bool,
    verify: bool,
    dry: bool,
    params: tuple[str, ...],
    save: Path | None,
) -> int:
    """
    Build a catalog example.

    Parameters are given as `--param n=8` or directly as `--n 8`.
    """
    state: CliState = ctx.obj
    if list_all:
        specs = [example_spec(n) for n in example_names()]
        state.emit([spec_json(s) for s in specs], lambda c: render.render_catalog(c, specs))
        return EXIT_OK
    if name is None:
        raise click.UsageError("give an example name or --list")

    resolved = _example_params(ctx, params)
    if dry:
        report = dry_run(name, resolved, state.config)
        state.emit(dry_run_json(report), lambda console: render.render_dry_run(console, report))
        return EXIT_OK
    if verify:
        return _verify(state, name, resolved)

    built = build_example(name, resolved, config=state.config, on_step=state.on_step())
    saved = write_pair(built.pair, save, name) if save is not None else None
    payload = {
        "spec": spec_json(built.spec),
        "params": built.params,
        "pair": pair_json(built.pair),
        "auxiliary": {k: g.order() for k, g in built.auxiliary.items()},
        "trace": trace_json(built.steps),
        "saved": str(saved) if saved is not None else None,
    }

    def draw(console: Console) -> None:
        render.render_spec(console, built.spec)
        if saved is not None:
            console.print(f"saved {saved}")

    state.emit(payload, draw)
    return EXIT_OK


@cli.command(context_settings=_EXTRA_ARGS)
@click.argument("name")
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE")
@json_option
@click.pass_context
def verify(ctx: click.Context, name: str, params: tuple[str, ...]) -> int:
    """Replay an example's expected assertions."""
    return _verify(ctx.obj, name, _example_params(ctx, params))
