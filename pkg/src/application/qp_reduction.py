"""
Quasiprimitive pairs: case analysis and the reduction to a simple group.

A quasiprimitive pair is bounded outright when some normal subgroup, or
some product of socle factors, is regular on vertices. Otherwise the socle
is either simple, and the pair reduces to itself with the socle acting, or
of product action type T^l, and the quotient by the co-factor of one
simple factor gives a pair with a simple transitive group.
"""

import logging
from collections.abc import Sequence
from itertools import combinations

from sympy.combinatorics import Permutation

from src.engine.bound_expr import mul, power
from src.engine.bound_functions import NAMED_BOUNDS, constant, f_hat, named_bound
from src.engine.groups import (
    DEFAULT_ELEMENT_BUDGET,
    GroupError,
    Partition,
    PartitionError,
    PermGroup,
    ResourceLimitError,
    canonical_partition,
    induced_action,
    one_closure,
)
from src.engine.normal_structure import (
    SocleError,
    distinct_closures,
    is_simple,
    minimal_normal_subgroups,
    qp_profile,
    socle,
)

from .analysis_types import (
    AnalysisConfig,
    AnalysisError,
    NotQuasiprimitiveError,
    NrOrbitsReport,
    ProjectionReport,
    QpCase,
    ReductionError,
    ReductionResult,
    StepCallback,
    TraceRecorder,
)
from .boundedness import DEFAULT_CONFIG, check_bounded, compare
from .pairs import VTPair, certify_pair
from .quotients import block_quotient, normal_quotient

logger = logging.getLogger(__name__)

# Products of at most this many minimal normal subgroups are searched.
MAX_PRODUCT_FACTORS = 10


def find_regular_normal(
    pair: VTPair, budget: int = DEFAULT_ELEMENT_BUDGET
) -> PermGroup | None:
    """
    A normal subgroup regular on vertices, searched smallest first among
    products of minimal normal subgroups and the normal closures of classes.

    `None` only means no such subgroup was found among those candidates.
    """
    group = pair.perm_group()
    n = pair.vertex_count
    if group.order() % n:
        return None
    minimal = minimal_normal_subgroups(group, budget)[:MAX_PRODUCT_FACTORS]
    candidates: list[PermGroup] = list(distinct_closures(group, budget))
    for size in range(2, len(minimal) + 1):
        for subset in combinations(minimal, size):
            candidates.append(subset[0].join(*subset[1:]))
    for candidate in sorted(candidates, key=lambda c: (c.order(), c.orbits())):
        if candidate.order() == n and candidate.is_transitive():
            logger.debug("regular normal subgroup of order %d", n)
            return candidate
    return None


def classify_qp_case(pair: VTPair, budget: int = DEFAULT_ELEMENT_BUDGET) -> QpCase:
    """
    Branch of the quasiprimitive reduction that applies to the pair.

    A regular normal subgroup settles the pair before quasiprimitivity is
    tested, since the resulting bound does not need it.

    Raises:
        NotQuasiprimitiveError: If no regular normal subgroup exists and the
            group is not quasiprimitive.
        ResourceLimitError: If an enumeration exceeds `budget`.
    """
    group = pair.perm_group()
    regular = find_regular_normal(pair, budget)
    if regular is not None:
        return QpCase("regular_normal", witness=regular)
    if not qp_profile(group, budget).quasiprimitive:
        raise NotQuasiprimitiveError("the group is not quasiprimitive on vertices")

    try:
        soc = socle(group, budget)
    except SocleError as error:
        return QpCase("unclassified", reason=str(error))
    if soc.abelian:
        return QpCase("unclassified", socle=soc, reason="abelian socle is not regular")

    n = pair.vertex_count
    factors = soc.factors
    for size in range(1, soc.factor_count):
        if soc.socle_factor_order**size != n:
            continue
        for subset in combinations(factors, size):
            product = subset[0].join(*subset[1:])
            if product.is_transitive():
                return QpCase("socle_cofactor_regular", witness=product, socle=soc)

    if soc.factor_count == 1:
        return QpCase("almost_simple", socle=soc)

    projections = _projection_orders(soc.socle, factors)
    if len(set(projections)) == 1 and projections[0] < soc.socle_factor_order:
        return QpCase("product_action", socle=soc, projection_orders=tuple(projections))
    return QpCase(
        "unclassified",
        socle=soc,
        projection_orders=tuple(projections),
        reason=f"stabiliser projections {projections} are not equal and proper",
    )


def _cofactor(factors: Sequence[PermGroup], index: int, degree: int) -> PermGroup:
    others = [f for i, f in enumerate(factors) if i != index]
    if not others:
        return PermGroup.trivial(degree)
    return others[0].join(*others[1:])


def _projection_orders(soc: PermGroup, factors: Sequence[PermGroup]) -> list[int]:
    """|N_α| / |(M_i)_α|, the order of the projection of N_α onto factor i."""
    local = soc.stabiliser(0).order()
    return [
        local // _cofactor(factors, i, soc.degree).stabiliser(0).order()
        for i in range(len(factors))
    ]


# ==================================================================================
# Product action reduction
# ==================================================================================


def pa_reduce(
    pair: VTPair,
    case: QpCase | None = None,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> ReductionResult:
    """
    Reduce a product action pair by the co-factor M_1 of the first factor.

    Checks that M_1 is 1-closed in the socle N, that N/M_1 acts simply and
    transitively on the quotient, that l <= d^d |T_δ|^(2d), that every
    co-factor gives the same quotient graph, and that
    |T_δ| <= |N_α| <= |T_δ|^l.

    Raises:
        ReductionError: If the pair is not in the product action case.
    """
    case = case or classify_qp_case(pair, config.element_budget)
    if case.kind != "product_action" or case.socle is None:
        raise ReductionError("not ProductAction")
    trace = TraceRecorder(on_step)
    soc = case.socle
    normal, factors, l = soc.socle, soc.factors, soc.factor_count
    d = pair.d

    cofactor = _cofactor(factors, 0, normal.degree)
    closed = one_closure(cofactor, normal).order() == cofactor.order()
    trace.check("cofactor_one_closed", closed, f"|M_1| = {cofactor.order()}")
    socle_pair = certify_pair(pair.graph, normal, d)
    quotient = normal_quotient(socle_pair, cofactor)
    image = quotient.image_group
    trace.check("image_simple", is_simple(image, config.element_budget), f"|T| = {image.order()}")
    trace.check("image_transitive", image.is_transitive())
    t_delta = image.order() // image.degree
    factor_bound = mul(power(d, d), power(t_delta, 2 * d))
    l_check = compare("l", factor_bound, l, config)
    trace.check("factor_count_bound", l_check.holds, f"l = {l}, |T_δ| = {t_delta}")

    adjacency = quotient.quotient_graph.adjacency
    same = all(
        normal_quotient(socle_pair, _cofactor(factors, i, normal.degree)).quotient_graph.adjacency
        == adjacency
        for i in range(1, l)
    )
    trace.check("cofactor_quotients_agree", same)
    local = normal.stabiliser(0).order()
    trace.check(
        "stabiliser_sandwich",
        t_delta <= local <= t_delta**l,
        f"{t_delta} <= |N_α| = {local} <= {t_delta}^{l}",
    )

    bound = f_hat(constant(t_delta), d)
    if not trace.all_passed or quotient.pair is None:
        failed = ", ".join(step.name for step in trace.failures()) or "quotient too small"
        return ReductionResult(
            "unclassified", "product_action", trace.freeze(), reason=f"failed: {failed}"
        )
    return ReductionResult(
        "reduced_qp",
        "product_action",
        trace.freeze(),
        bound=bound,
        bound_name=f"f_hat({t_delta})",
        certificate=check_bounded(pair, bound, config),
        reduced=(quotient.pair,),
    )


def verify_nrorbits(
    pair: VTPair,
    blocks: Sequence[Sequence[int]],
    normal: PermGroup,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> NrOrbitsReport:
    """
    Count the orbits of each block stabiliser N_σ on the neighbours of σ in
    the block quotient; each count should be at most d.
    """
    group = pair.perm_group()
    hypotheses = TraceRecorder()
    hypotheses.check("normal", normal.is_normal_in(group))
    partition = canonical_partition(blocks)
    try:
        quotient = block_quotient(pair, partition)
    except PartitionError as error:
        hypotheses.check("invariant_partition", False, str(error))
        return NrOrbitsReport((), pair.d, hypotheses.freeze(), False)

    counts = []
    for index, block in enumerate(partition):
        stabiliser = normal.block_stabiliser(partition, index)
        hypotheses.check(
            f"transitive_on_block_{index}", stabiliser.restriction(block).is_transitive()
        )
        on_blocks, _ = induced_action(stabiliser, partition)
        neighbours = quotient.quotient_graph.neighbours(index)
        counts.append(len({on_blocks.orbit(b) for b in neighbours}))
    holds = hypotheses.all_passed and all(c <= pair.d for c in counts)
    return NrOrbitsReport(tuple(counts), pair.d, hypotheses.freeze(), holds)


def verify_lemma_proj(
    pair: VTPair,
    case: QpCase,
    index: int = 0,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> ProjectionReport:
    """
    Compare the projections onto factor i of G_i ∩ G_α and G_i ∩ G_σ with
    the block stabiliser H_δ of the component H.

    G_i is the normaliser of factor i, found as the stabiliser of i in the
    conjugation action on the factors. H is the action of G_i on the orbits
    of the co-factor M_i, and σ is the block of vertex 0 in the common
    refinement of all co-factor orbit partitions.

    Raises:
        AnalysisError: If the socle factors are not permuted by conjugation.
    """
    if case.socle is None:
        raise AnalysisError("projection check needs socle data")
    group = pair.perm_group()
    factors = case.socle.factors
    n = pair.vertex_count
    labels = [_factor_images(g, factors) for g in group.generators]
    normaliser = group.action_stabiliser(labels, index)

    component_blocks = canonical_partition(_cofactor(factors, index, n).orbits())
    component, _ = induced_action(normaliser, component_blocks)
    delta = next(i for i, block in enumerate(component_blocks) if 0 in block)
    target = component.stabiliser(delta)

    refinement = _common_refinement([_cofactor(factors, j, n) for j in range(len(factors))])
    sigma = next(i for i, block in enumerate(refinement) if 0 in block)
    at_point, _ = induced_action(normaliser.stabiliser(0), component_blocks)
    at_block, _ = induced_action(normaliser.block_stabiliser(refinement, sigma), component_blocks)

    trace = TraceRecorder()
    trace.check("normaliser_index", group.order() == len(factors) * normaliser.order())
    trace.check("point_in_block", at_point.is_subgroup_of(at_block))
    trace.check("block_in_target", at_block.is_subgroup_of(target))
    trace.check(
        "orders_equal",
        at_point.order() == at_block.order() == target.order(),
        f"{at_point.order()}, {at_block.order()}, {target.order()}",
    )
    return ProjectionReport(
        index, at_point.order(), at_block.order(), target.order(), trace.freeze()
    )


def _factor_images(g: Permutation, factors: Sequence[PermGroup]) -> list[int]:
    images = []
    for factor in factors:
        conjugate = factor.conjugate(g)
        match = [k for k, other in enumerate(factors) if conjugate.is_subgroup_of(other)]
        if len(match) != 1:
            raise AnalysisError("socle factors are not permuted by conjugation")
        images.append(match[0])
    return images


def _common_refinement(groups: Sequence[PermGroup]) -> Partition:
    n = groups[0].degree
    signature: list[list[int]] = [[] for _ in range(n)]
    for group in groups:
        for i, orbit in enumerate(group.orbits()):
            for v in orbit:
                signature[v].append(i)
    cells: dict[tuple[int, ...], list[int]] = {}
    for v, key in enumerate(signature):
        cells.setdefault(tuple(key), []).append(v)
    return canonical_partition(cells.values())


# ==================================================================================
# Routing
# ==================================================================================


def theorem_mainqp(
    pair: VTPair,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> ReductionResult:
    """
    Route a quasiprimitive pair to a stabiliser bound or a reduced pair.

    - regular normal subgroup: bounded by d!
    - product of socle factors regular: bounded by (d d!)!
    - simple socle: the pair itself with the socle acting
    - product action: `pa_reduce`

    Raises:
        NotQuasiprimitiveError: If the pair has no regular normal subgroup and
            is not quasiprimitive.
    """
    trace = TraceRecorder(on_step)
    try:
        case = classify_qp_case(pair, config.element_budget)
    except NotQuasiprimitiveError:
        raise
    except (ResourceLimitError, AnalysisError, GroupError) as error:
        trace.check("classified", False, str(error))
        return ReductionResult("unclassified", "none", trace.freeze(), reason=str(error))
    trace.check("classified", case.kind != "unclassified", case.kind)
    logger.info("quasiprimitive case: %s", case.kind)

    if case.kind in ("regular_normal", "socle_cofactor_regular"):
        name = "factorial" if case.kind == "regular_normal" else "socle_cofactor"
        bound = named_bound(name, pair.d)
        assert case.witness is not None
        trace.check("witness_regular", case.witness.order() == pair.vertex_count)
        certificate = check_bounded(pair, bound, config)
        trace.check(
            "stabiliser_bounded",
            certificate.holds,
            f"|G_α| = {certificate.value} <= {NAMED_BOUNDS[name].name}",
        )
        outcome = "bounded" if certificate.holds else "unclassified"
        return ReductionResult(
            outcome,
            case.kind,
            trace.freeze(),
            bound=bound,
            bound_name=NAMED_BOUNDS[name].name,
            certificate=certificate,
            reason="" if certificate.holds else "stabiliser exceeds the bound",
        )

    if case.kind == "almost_simple":
        assert case.socle is not None
        soc = case.socle.socle
        trace.check("socle_simple", is_simple(soc, config.element_budget))
        trace.check("socle_transitive", soc.is_transitive())
        reduced = certify_pair(pair.graph, soc, pair.d)
        t_lambda = soc.order() // pair.vertex_count
        bound = f_hat(constant(t_lambda), pair.d)
        return ReductionResult(
            "reduced_qp" if trace.all_passed else "unclassified",
            "almost_simple",
            trace.freeze(),
            bound=bound,
            bound_name=f"f_hat({t_lambda})",
            certificate=check_bounded(pair, bound, config),
            reduced=(reduced,),
        )

    if case.kind == "product_action":
        result = pa_reduce(pair, case, config=config, on_step=on_step)
        return ReductionResult(
            result.outcome,
            result.route,
            trace.freeze() + result.trace,
            bound=result.bound,
            bound_name=result.bound_name,
            certificate=result.certificate,
            reduced=result.reduced,
            reason=result.reason,
        )

    return ReductionResult("unclassified", "unclassified", trace.freeze(), reason=case.reason)

