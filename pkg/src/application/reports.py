"""
Report assembly for the command line.

`analyze_pair` and `reduce_pair` run the pipelines a command needs; the
`*_json` helpers turn result records into plain dictionaries with a fixed
key order, so JSON output is stable across runs.
"""

import logging
from dataclasses import dataclass
from typing import Any

from src.engine.bound_expr import BoundExpr, exact_value, format_bound, log2_bounds, render_bound
from src.engine.cosets import CosetAction
from src.engine.graphs import graph_invariants
from src.engine.groups import GroupError, IntransitiveError
from src.engine.normal_structure import QpProfile, qp_profile

from .analysis_types import (
    AnalysisConfig,
    BoundCertificate,
    NotBiquasiprimitiveError,
    NotQuasiprimitiveError,
    ReductionResult,
    StepCallback,
    TraceStep,
)
from .biqp_reduction import theorem_mainbiqp
from .boundedness import DEFAULT_CONFIG
from .catalog import DryRunReport, ExampleSpec, ExampleVerification
from .local_action import LocalActionReport, classify_pair_locally
from .pairs import PairValidation, VTPair
from .qp_reduction import find_regular_normal, theorem_mainqp
from .quotients import QuotientResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PairAnalysis:
    """
    Everything `vtsa analyze` reports about a certified pair.

    Attributes:
        pair (VTPair):
            The pair.

        profile (QpProfile | None):
            Normal-structure profile; `None` for coset actions, whose group
            is never materialised on the vertices.

        coset_quasiprimitive (bool | None):
            Quasiprimitivity decided in the coset action itself.

        local (LocalActionReport):
            Local action at vertex 0.

        route (str):
            Which reduction applies: "quasiprimitive", "biquasiprimitive",
            "regular_normal" or "none".
    """

    pair: VTPair
    profile: QpProfile | None
    coset_quasiprimitive: bool | None
    local: LocalActionReport
    route: str


def analyze_pair(pair: VTPair, config: AnalysisConfig = DEFAULT_CONFIG) -> PairAnalysis:
    budget = config.element_budget
    local = classify_pair_locally(pair, budget)
    if isinstance(pair.group, CosetAction):
        quasiprimitive = pair.group.is_quasiprimitive(budget)
        route = "quasiprimitive" if quasiprimitive else "none"
        return PairAnalysis(pair, None, quasiprimitive, local, route)

    profile = qp_profile(pair.perm_group(), budget)
    if profile.quasiprimitive:
        route = "quasiprimitive"
    elif profile.biquasiprimitive:
        route = "biquasiprimitive"
    elif find_regular_normal(pair, budget) is not None:
        route = "regular_normal"
    else:
        route = "none"
    logger.info("pair analysed, route %s", route)
    return PairAnalysis(pair, profile, None, local, route)


def _klein_on_four(pair: VTPair, budget: int) -> bool:
    if pair.vertex_count != 4 or isinstance(pair.group, CosetAction):
        return False
    group = pair.perm_group()
    return (
        group.order() == 4
        and all(g.order() <= 2 for g in group.generators)
        and qp_profile(group, budget).biquasiprimitive
    )


def reduce_pair(
    pair: VTPair,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> ReductionResult:
    """
    Run the quasiprimitive reduction, falling back to the biquasiprimitive
    one; a pair that is neither comes back unclassified. The Klein group on
    four vertices goes straight to the biquasiprimitive short circuit.
    """
    if _klein_on_four(pair, config.element_budget):
        logger.info("Klein group on four vertices, short-circuiting")
        return theorem_mainbiqp(pair, config=config, on_step=on_step)
    try:
        return theorem_mainqp(pair, config=config, on_step=on_step)
    except NotQuasiprimitiveError:
        logger.info("not quasiprimitive, trying the biquasiprimitive reduction")
    try:
        return theorem_mainbiqp(pair, config=config, on_step=on_step)
    except NotBiquasiprimitiveError:
        step = TraceStep("qp_or_biqp", False, "neither quasiprimitive nor biquasiprimitive")
        if on_step is not None:
            on_step(step)
        return ReductionResult(
            "unclassified", "none", (step,), reason="neither quasiprimitive nor biquasiprimitive"
        )
    except (IntransitiveError, GroupError) as error:
        return ReductionResult("unclassified", "none", (), reason=str(error))


# ==================================================================================
# JSON rendering
# ==================================================================================


def trace_json(steps: tuple[TraceStep, ...]) -> list[dict[str, Any]]:
    return [{"name": s.name, "passed": s.passed, "detail": s.detail} for s in steps]


def bound_json(expr: BoundExpr, config: AnalysisConfig = DEFAULT_CONFIG) -> dict[str, Any]:
    low, high = log2_bounds(expr)
    exact = exact_value(expr, config.exact_threshold_bits)
    return {
        "expression": render_bound(expr),
        "display": format_bound(expr),
        "exact": str(exact) if exact is not None else None,
        "log2": [low, high],
    }


def certificate_json(certificate: BoundCertificate | None) -> dict[str, Any] | None:
    if certificate is None:
        return None
    return {
        "label": certificate.label,
        "value": certificate.value,
        "bound": format_bound(certificate.bound),
        "verdict": certificate.comparison.verdict,
        "precision": certificate.comparison.precision,
    }


def pair_json(pair: VTPair) -> dict[str, Any]:
    low, high = pair.graph.valencies()
    return {
        "vertices": pair.vertex_count,
        "edges": pair.graph.edge_count,
        "valency": [low, high],
        "d": pair.d,
        "group_order": pair.group_order(),
        "stabiliser_order": pair.stabiliser_order(),
    }


def validation_json(validation: PairValidation) -> dict[str, Any]:
    return {"ok": validation.ok, "status": validation.status, "detail": validation.detail}


def local_json(report: LocalActionReport) -> dict[str, Any]:
    flags = report.flags
    return {
        "vertex": report.vertex,
        "neighbourhood": list(report.neighbourhood),
        "induced_order": report.induced_group.order(),
        "kernel_order": report.kernel_order,
        "stabiliser_order": report.stabiliser_order,
        "faithful": report.faithful,
        "transitive": flags.transitive,
        "two_transitive": flags.two_transitive,
        "primitive": flags.primitive,
        "quasiprimitive": flags.quasiprimitive,
        "semiprimitive": flags.semiprimitive,
        "reason": flags.reason,
    }


def analysis_json(analysis: PairAnalysis) -> dict[str, Any]:
    invariants = graph_invariants(analysis.pair.graph)
    profile = analysis.profile
    return {
        "pair": pair_json(analysis.pair),
        "diameter": invariants.diameter,
        "quasiprimitive": (
            profile.quasiprimitive if profile else analysis.coset_quasiprimitive
        ),
        "biquasiprimitive": profile.biquasiprimitive if profile else None,
        "semiprimitive": profile.semiprimitive if profile else None,
        "route": analysis.route,
        "local": local_json(analysis.local),
    }


def quotient_json(result: QuotientResult) -> dict[str, Any]:
    d, d_prime = result.valency_drop
    return {
        "blocks": [list(b) for b in result.blocks],
        "block_map": list(result.block_map),
        "quotient_vertices": result.quotient_graph.vertex_count,
        "quotient_adjacency": [list(r) for r in result.quotient_graph.adjacency],
        "image_order": result.image_group.order(),
        "image_generators": [list(g.array_form) for g in result.image_group.generators],
        "kernel_order": result.kernel.order(),
        "valency": [d, d_prime],
        "d": d,
        "d_prime": d_prime,
        "certified": result.pair is not None,
    }


def reduction_json(result: ReductionResult) -> dict[str, Any]:
    return {
        "outcome": result.outcome,
        "route": result.route,
        "bound": result.bound_name or None,
        "certificate": certificate_json(result.certificate),
        "reduced": [pair_json(p) for p in result.reduced],
        "reason": result.reason,
        "notes": list(result.notes),
        "trace": trace_json(result.trace),
    }


def spec_json(spec: ExampleSpec) -> dict[str, Any]:
    return {
        "name": spec.name,
        "summary": spec.summary,
        "parameters": dict(spec.parameters),
        "dry_run_only": spec.dry_run_only,
        "expected": [
            {"name": e.name, "provenance": e.provenance, "description": e.description}
            for e in spec.expected
        ],
    }


def dry_run_json(report: DryRunReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "params": report.params,
        "orders": {k: str(v) for k, v in report.orders.items()},
        "feasible": report.feasible,
        "reason": report.reason,
    }


def verification_json(verification: ExampleVerification) -> dict[str, Any]:
    return {
        "name": verification.name,
        "params": verification.params,
        "ok": verification.ok,
        "trace": trace_json(verification.steps),
    }
