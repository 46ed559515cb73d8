"""
Biquasiprimitive pairs.

The halves of a biquasiprimitive pair are the two orbits of any
intransitive normal subgroup. The index-2 subgroup G+ fixing them acts on
the first half, and the graph joining vertices of that half at distance at
most two carries the rest of the analysis: either the action there is
quasiprimitive and the quasiprimitive reduction applies, or its socle
splits as R x S and each side gives a pair with a simple transitive group.
"""

import logging
from collections.abc import Sequence
from itertools import permutations

from src.engine.bound_expr import BoundExpr, fact, mul, power
from src.engine.bound_functions import (
    NAMED_BOUNDS,
    constant,
    g_star,
    named_bound,
)
from src.engine.graphs import GraphError, delta_graph
from src.engine.groups import (
    GroupError,
    PartitionError,
    PermGroup,
    ResourceLimitError,
    canonical_partition,
    induced_action,
    one_closure,
)
from src.engine.normal_structure import (
    class_closures,
    is_simple,
    minimal_normal_subgroups,
    qp_profile,
)

from .analysis_types import (
    AnalysisConfig,
    AnalysisError,
    BipartiteSplit,
    BoundCertificate,
    NotBiquasiprimitiveError,
    ReductionResult,
    StepCallback,
    TraceRecorder,
)
from .boundedness import DEFAULT_CONFIG, check_bounded, compare
from .pairs import InvalidPairError, VTPair, certify_pair
from .qp_reduction import find_regular_normal, theorem_mainqp
from .quotients import normal_quotient

logger = logging.getLogger(__name__)


# ==================================================================================
# Splitting
# ==================================================================================


def biqp_split(pair: VTPair, config: AnalysisConfig = DEFAULT_CONFIG) -> BipartiteSplit:
    """
    Halves, G+, its action H on the first half, and the distance-2 pair.

    Every intransitive normal closure of a class must give the same halves;
    only the four-vertex Klein group, which is settled outright, may
    disagree.

    Raises:
        NotBiquasiprimitiveError: If the group is not biquasiprimitive.
        AnalysisError: If two intransitive normal subgroups give different
            halves.
    """
    group = pair.perm_group()
    budget = config.element_budget
    if not qp_profile(group, budget).biquasiprimitive:
        raise NotBiquasiprimitiveError("the group is not biquasiprimitive on vertices")

    short_circuit = (
        pair.vertex_count == 4
        and group.order() == 4
        and group.is_abelian()
        and all(g.order() <= 2 for g in group.generators)
    )
    splits = sorted(
        {
            canonical_partition(entry.closure.orbits())
            for entry in class_closures(group, budget)
            if len(entry.closure.orbits()) == 2
        }
    )
    if len(splits) > 1 and not short_circuit:
        raise AnalysisError(f"intransitive normal subgroups disagree on the halves: {splits}")
    first, second = splits[0]

    g_plus = group.block_stabiliser(splits[0], 0)
    if group.order() != 2 * g_plus.order():
        raise AnalysisError("the stabiliser of the halves does not have index 2")
    h_group = g_plus.restriction(first)

    cross = all((u in first) != (v in first) for u, v in pair.graph.edges())
    d = pair.d
    d0 = d * (d - 1) if cross else d * d
    graph = delta_graph(pair.graph, (first, second), cross)
    delta_pair = None
    diagnosis = ""
    try:
        delta_pair = certify_pair(graph, h_group, d0)
    except InvalidPairError as error:
        diagnosis = str(error)
        logger.warning("distance-2 pair rejected: %s", diagnosis)
    logger.debug(
        "halves of sizes %d and %d, |G+| = %d, distance-2 valency %d",
        len(first),
        len(second),
        g_plus.order(),
        graph.valencies()[1],
    )
    return BipartiteSplit(
        (first, second),
        g_plus,
        h_group,
        graph,
        delta_pair,
        d0,
        cross,
        short_circuit,
        diagnosis,
    )


def lemma_silly_check(
    pair: VTPair, split: BipartiteSplit, config: AnalysisConfig = DEFAULT_CONFIG
) -> BoundCertificate | None:
    """
    Bound |G_α| by d!(d-1)! when G_α is transitive on the far half.

    Returns the certificate, or `None` when G_α is intransitive there.
    """
    far = pair.perm_group().stabiliser(split.halves[0][0]).restriction(split.halves[1])
    if not far.is_transitive():
        return None
    return check_bounded(pair, named_bound("biqp_cross", pair.d), config)


def wreath_component(
    group: PermGroup, factor_partitions: Sequence[Sequence[Sequence[int]]], j: int
) -> PermGroup:
    """
    Group induced on coordinate j by the stabiliser of coordinate j.

    `factor_partitions[i]` is the partition of the points into level sets of
    coordinate i, so block c holds the points whose i-th coordinate is c.
    Elements of the group permute the partitions; the result acts on the
    blocks of partition j.

    Raises:
        PartitionError: If the group does not permute the partitions.
    """
    partitions = [canonical_partition(p) for p in factor_partitions]
    lookup = {p: i for i, p in enumerate(partitions)}
    if len(lookup) != len(partitions):
        raise PartitionError("coordinate partitions are not distinct")
    labels = []
    for g in group.generator_images():
        row = []
        for p in partitions:
            image = canonical_partition([[g[v] for v in block] for block in p])
            if image not in lookup:
                raise PartitionError("the group does not permute the coordinate partitions")
            row.append(lookup[image])
        labels.append(row)
    stabiliser = group.action_stabiliser(labels, j)
    component, _ = induced_action(stabiliser, factor_partitions[j])
    return component


# ==================================================================================
# Routing
# ==================================================================================


def theorem_mainbiqp(
    pair: VTPair,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> ReductionResult:
    """
    Route a biquasiprimitive pair to a stabiliser bound or reduced pairs.

    - four vertices with the Klein group: bounded
    - G_α transitive on the far half: bounded by d!(d-1)!
    - H quasiprimitive: the quasiprimitive reduction of the distance-2 pair,
      lifted back
    - otherwise: the socle R x S of H, see `_split_socle_route`

    Raises:
        NotBiquasiprimitiveError: If the group is not biquasiprimitive.
    """
    trace = TraceRecorder(on_step)
    try:
        split = biqp_split(pair, config)
    except NotBiquasiprimitiveError:
        raise
    except (AnalysisError, GroupError, GraphError) as error:
        trace.check("split", False, str(error))
        return ReductionResult("unclassified", "none", trace.freeze(), reason=str(error))
    trace.check("split", True, f"halves of size {len(split.halves[0])}")

    if split.short_circuit:
        return _bounded(pair, "short_circuit", "biqp_general", trace, config)

    if lemma_silly_check(pair, split, config) is not None:
        trace.check("cross_transitive", True, "G_α is transitive on the far half")
        return _bounded(pair, "cross_transitive", "biqp_cross", trace, config)

    if split.delta_pair is None:
        trace.check("delta_pair", False, split.delta_diagnosis)
        return ReductionResult(
            "unclassified", "none", trace.freeze(), reason=split.delta_diagnosis
        )
    trace.check(
        "g_plus_faithful",
        split.g_plus.order() == split.h_group.order(),
        f"|G+| = {split.g_plus.order()}, |H| = {split.h_group.order()}",
    )
    try:
        quasiprimitive = qp_profile(split.h_group, config.element_budget).quasiprimitive
        if quasiprimitive:
            logger.info("distance-2 action is quasiprimitive")
            return _delta_qp_route(pair, split, trace, config, on_step)
        logger.info("distance-2 action is not quasiprimitive")
        return _split_socle_route(pair, split, trace, config)
    except (ResourceLimitError, GroupError, AnalysisError) as error:
        trace.check("delta_analysis", False, str(error))
        return ReductionResult("unclassified", "none", trace.freeze(), reason=str(error))


def _bounded(
    pair: VTPair,
    route: str,
    name: str,
    trace: TraceRecorder,
    config: AnalysisConfig,
    bound: BoundExpr | None = None,
    bound_name: str = "",
) -> ReductionResult:
    bound = bound if bound is not None else named_bound(name, pair.d)
    bound_name = bound_name or NAMED_BOUNDS[name].name
    certificate = check_bounded(pair, bound, config)
    trace.check(
        "stabiliser_bounded", certificate.holds, f"|G_α| = {certificate.value} <= {bound_name}"
    )
    ok = trace.all_passed
    return ReductionResult(
        "bounded" if ok else "unclassified",
        route,
        trace.freeze(),
        bound=bound,
        bound_name=bound_name,
        certificate=certificate,
        reason="" if ok else "failed: " + ", ".join(s.name for s in trace.failures()),
    )


def _delta_bound(split: BipartiteSplit, d: int) -> tuple[BoundExpr, str]:
    if split.cross_edges_only:
        return named_bound("delta_factorial", d), NAMED_BOUNDS["delta_factorial"].name
    return fact(split.delta_valency), "(d^2)!"


def _delta_qp_route(
    pair: VTPair,
    split: BipartiteSplit,
    trace: TraceRecorder,
    config: AnalysisConfig,
    on_step: StepCallback | None,
) -> ReductionResult:
    assert split.delta_pair is not None
    sub = theorem_mainqp(split.delta_pair, config=config, on_step=on_step)
    steps = trace.freeze() + sub.trace
    notes = (f"distance-2 pair: {sub.route}",)
    if sub.outcome == "bounded" and sub.bound is not None:
        certificate = check_bounded(pair, sub.bound, config)
        lifted = certificate.holds and trace.all_passed
        return ReductionResult(
            "bounded" if lifted else "unclassified",
            "delta_qp",
            steps,
            bound=sub.bound,
            bound_name=f"{sub.bound_name} at d(d-1)",
            certificate=certificate,
            reason="" if lifted else "stabiliser bound does not lift",
            notes=notes,
        )
    if sub.outcome == "reduced_qp" and sub.reduced:
        reduced = sub.reduced[0]
        return ReductionResult(
            "reduced_biqp" if trace.all_passed else "unclassified",
            "delta_qp",
            steps,
            bound=sub.bound,
            bound_name=sub.bound_name,
            certificate=check_bounded(pair, sub.bound, config) if sub.bound else None,
            reduced=(reduced, reduced),
            reason=sub.reason,
            notes=notes,
        )
    return ReductionResult(
        "unclassified", "delta_qp", steps, reason=sub.reason or "distance-2 pair unclassified"
    )


def _split_socle_route(
    pair: VTPair,
    split: BipartiteSplit,
    trace: TraceRecorder,
    config: AnalysisConfig,
) -> ReductionResult:
    """
    H is not quasiprimitive.

    A regular normal subgroup of H, or an abelian R, bounds |G_α| by
    (d(d-1))!. Otherwise every candidate R x S is tried: a surjective
    stabiliser projection onto a simple factor bounds by
    (d^2((d(d-1))!)^2)!, and failing that the co-factors of the first
    factors of R and of S give the two reduced pairs.
    """
    assert split.delta_pair is not None
    delta = split.delta_pair
    h_group = split.h_group
    budget = config.element_budget

    if find_regular_normal(delta, budget) is not None:
        trace.check("delta_regular_normal", True)
        bound, name = _delta_bound(split, pair.d)
        return _bounded(pair, "delta_non_qp", "delta_factorial", trace, config, bound, name)

    minimal = [m for m in minimal_normal_subgroups(h_group, budget) if not m.is_transitive()]
    candidates = [
        (r, s)
        for r, s in permutations(minimal, 2)
        if r.join(s).order() == r.order() * s.order() and r.join(s).is_transitive()
    ]
    if not trace.check("socle_pair", bool(candidates), f"{len(candidates)} candidates"):
        return ReductionResult(
            "unclassified",
            "delta_non_qp",
            trace.freeze(),
            reason="no transitive product of two minimal normal subgroups",
        )

    results = [
        _socle_pair_result(pair, split, r, s, TraceRecorder(), config) for r, s in candidates
    ]
    chosen = results[0]
    notes = ()
    if len({(r.outcome, r.bound_name) for r in results}) > 1:
        notes = ("candidate pairings give different outcomes",)
        logger.warning("candidate socle pairings disagree")
    return ReductionResult(
        chosen.outcome,
        chosen.route,
        trace.freeze() + chosen.trace,
        bound=chosen.bound,
        bound_name=chosen.bound_name,
        certificate=chosen.certificate,
        reduced=chosen.reduced,
        reason=chosen.reason,
        notes=notes,
    )


def _simple_factors(group: PermGroup, budget: int) -> list[PermGroup]:
    if is_simple(group, budget):
        return [group]
    return minimal_normal_subgroups(group, budget)


def _product(factors: Sequence[PermGroup], degree: int) -> PermGroup:
    if not factors:
        return PermGroup.trivial(degree)
    return factors[0].join(*factors[1:])


def _socle_pair_result(
    pair: VTPair,
    split: BipartiteSplit,
    r: PermGroup,
    s: PermGroup,
    trace: TraceRecorder,
    config: AnalysisConfig,
) -> ReductionResult:
    assert split.delta_pair is not None
    budget = config.element_budget
    d = pair.d
    if r.is_abelian() or s.is_abelian():
        trace.check("abelian_factor", True)
        bound, name = _delta_bound(split, d)
        return _bounded(pair, "delta_non_qp", "delta_factorial", trace, config, bound, name)

    r_factors = _simple_factors(r, budget)
    s_factors = _simple_factors(s, budget)
    factors = r_factors + s_factors
    n = r.degree
    m = r.join(s)
    local = m.stabiliser(0).order()
    for i, factor in enumerate(factors):
        cofactor = _product(factors[:i] + factors[i + 1 :], n)
        projection = local // cofactor.stabiliser(0).order()
        if projection == factor.order():
            trace.check("surjective_projection", True, f"factor {i}, |T| = {projection}")
            return _bounded(pair, "delta_non_qp", "biqp_general", trace, config)
    m_pair = certify_pair(split.delta_pair.graph, m, split.delta_valency)
    sides = []
    for label, first in (("R", 0), ("S", len(r_factors))):
        cofactor = _product(factors[:first] + factors[first + 1 :], n)
        closed = one_closure(cofactor, m).order() == cofactor.order()
        trace.check(f"cofactor_{label}_one_closed", closed, f"|M_{label},1| = {cofactor.order()}")
        quotient = normal_quotient(m_pair, cofactor)
        image = quotient.image_group
        trace.check(f"image_{label}_simple", is_simple(image, budget), f"|T| = {image.order()}")
        trace.check(f"image_{label}_transitive", image.is_transitive())
        sides.append((quotient.pair, image.order() // image.degree))

    (lambda_r, t_r), (lambda_s, t_s) = sides
    d0 = split.delta_valency
    l = max(len(r_factors), len(s_factors))
    factor_bound = mul(power(d0, d0), power(min(t_r, t_s), 2 * d0))
    trace.check(
        "factor_count_bound",
        compare("l", factor_bound, l, config).holds,
        f"l = {l}, |T_λR| = {t_r}, |T_λS| = {t_s}",
    )
    if not trace.all_passed or lambda_r is None or lambda_s is None:
        failed = ", ".join(step.name for step in trace.failures()) or "quotient too small"
        return ReductionResult(
            "unclassified", "delta_non_qp", trace.freeze(), reason=f"failed: {failed}"
        )
    bound = g_star(constant(t_r), constant(t_s), d)
    return ReductionResult(
        "reduced_biqp",
        "delta_non_qp",
        trace.freeze(),
        bound=bound,
        bound_name=f"g_star({t_r}, {t_s})",
        certificate=check_bounded(pair, bound, config),
        reduced=(lambda_r, lambda_s),
    )
