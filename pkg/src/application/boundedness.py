"""
Stabiliser bounds on concrete pairs.

`check_bounded` and `check_two_bounded` compare exact stabiliser orders
against symbolic bounds. `theorem1_construct` runs the connected
transversal construction that bounds |G_α| from the orbit count and
stabilisers of a normal subgroup. `lemma_aux_check` decides one instance
of the bound on the number of coordinates of T^l covered by a few
generators over R^l.
"""

import logging
from collections.abc import Sequence

from sympy.combinatorics import Permutation, PermutationGroup

from src.engine.bound_expr import BoundExpr, cmp_bound, fact, mul, power
from src.engine.bound_functions import BoundFn, constant, f3
from src.engine.cosets import CosetAction
from src.engine.graphs import Graph, GraphError, cayley_digraph, is_connected
from src.engine.groups import (
    NotNormalError,
    NotSubgroupError,
    PermGroup,
    ResourceLimitError,
    sort_key,
)
from src.engine.normal_structure import is_simple

from .analysis_types import (
    AnalysisConfig,
    AnalysisError,
    BoundCertificate,
    LemmaAuxReport,
    StepCallback,
    Theorem1Witness,
    TraceRecorder,
    TwoBoundCertificate,
)
from .pairs import VTPair, certify_pair

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = AnalysisConfig()


def compare(
    label: str, bound: BoundExpr, value: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> BoundCertificate:
    comparison = cmp_bound(
        bound,
        value,
        exact_bits=config.exact_threshold_bits,
        max_precision=config.max_precision,
    )
    return BoundCertificate(label, bound, value, comparison)


def check_bounded(
    pair: VTPair, bound: BoundExpr, config: AnalysisConfig = DEFAULT_CONFIG
) -> BoundCertificate:
    """
    Compare |G_α| against `bound`.

    One vertex suffices by vertex-transitivity. An undecided comparison is
    reported through the certificate's verdict, never as a pass.
    """
    return compare("|G_α|", bound, pair.stabiliser_order(), config)


def check_two_bounded(
    pair: VTPair,
    normal: PermGroup,
    f1: BoundFn,
    f2: BoundFn,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> TwoBoundCertificate:
    """
    (f1, f2)-boundedness with respect to `normal`: at most f1(d) orbits and
    |N_α| at most f2(d).

    Raises:
        NotNormalError: If `normal` is not normal in the pair's group.
    """
    group = pair.perm_group()
    if not normal.is_normal_in(group):
        raise NotNormalError("(f1, f2)-boundedness needs a normal subgroup")
    orbits = compare("N-orbits", f1(pair.d), len(normal.orbits()), config)
    stabiliser = compare("|N_α|", f2(pair.d), normal.stabiliser(0).order(), config)
    return TwoBoundCertificate(orbits, stabiliser)


# ==================================================================================
# Connected transversal construction
# ==================================================================================


def theorem1_construct(
    graph: Graph,
    normal: PermGroup,
    group: PermGroup,
    *,
    f1: int | None = None,
    f2: int | None = None,
    d: int | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> Theorem1Witness:
    """
    Build the objects bounding |G_α| from an (f1, f2)-bounded normal subgroup.

    A connected transversal β_1..β_t of the N-orbits is grown greedily from
    vertex 0, always adding the least vertex adjacent to the transversal in
    a new orbit. S is the set of n in N moving some β_i into the union of the
    neighbourhoods of the β_j, and H the pointwise stabiliser of the
    transversal in G. Every inequality of the argument is checked exactly.

    `f1` and `f2` default to t and the largest |N_β|. `d` defaults to the
    valency of the graph.

    Raises:
        NotNormalError: If `normal` is not normal in `group`.
        InvalidPairError: If (graph, group) is not a vertex-transitive pair.
        ResourceLimitError: If N has more elements than the element budget.
    """
    pair = certify_pair(graph, group, d)
    d = pair.d
    if not normal.is_normal_in(group):
        raise NotNormalError("the construction needs a normal subgroup")
    trace = TraceRecorder(on_step)

    representatives = _connected_transversal(graph, normal)
    t = len(representatives)
    trace.check(
        "transversal_connected",
        is_connected(graph.induced_subgraph(representatives)),
        f"β = {list(representatives)}",
    )
    trace.check("one_per_orbit", t == len(normal.orbits()), f"t = {t}")

    normal_stabilisers = [normal.stabiliser(b).order() for b in representatives]
    f1_value = t if f1 is None else f1
    f2_value = max(normal_stabilisers) if f2 is None else f2
    trace.check("orbits_within_f1", t <= f1_value, f"t = {t}, f1 = {f1_value}")
    trace.check(
        "normal_stabilisers_within_f2",
        max(normal_stabilisers) <= f2_value,
        f"|N_β| = {normal_stabilisers}, f2 = {f2_value}",
    )

    connection = _connection_set(graph, normal, representatives, config.element_budget)
    s_bound = compare("|S|", mul(d, t * t, f2_value), len(connection), config)
    trace.check("s_size", s_bound.holds, f"|S| = {len(connection)} <= d t^2 f2")

    h_group = group.pointwise_stabiliser(list(representatives))
    keys = {sort_key(s) for s in connection}
    trace.check(
        "h_normalises_s",
        all(sort_key(~h * s * h) in keys for h in h_group.generators for s in connection),
    )
    span = [s for s in connection if not s.is_Identity]
    with h_group._lock:
        centraliser = h_group.sympy_group.centralizer(
            PermutationGroup(span or [h_group.identity])
        )
    trace.check(
        "centraliser_trivial",
        int(centraliser.order()) == 1,
        f"|C_H(<S>)| = {centraliser.order()}",
    )
    h_bound = compare("|H|", fact(len(connection)), h_group.order(), config)
    trace.check("h_within_s_factorial", h_bound.holds, f"|H| = {h_group.order()}")

    stabiliser_orders = tuple(group.stabiliser(b).order() for b in representatives)
    chain_limit = d ** (t - 1) * h_group.order()
    trace.check(
        "stabiliser_chain",
        all(order <= chain_limit for order in stabiliser_orders),
        f"|G_β| = {list(stabiliser_orders)}, d^(t-1)|H| = {chain_limit}",
    )
    bound = f3(constant(f1_value), constant(f2_value), d)
    verdicts = [compare("|G_β|", bound, order, config) for order in stabiliser_orders]
    trace.check("stabiliser_within_f3", all(v.holds for v in verdicts))

    cayley = None
    if normal.order() * max(1, len(span)) <= config.max_points:
        cayley = _checked_cayley(normal, span, trace, config)
    else:
        logger.info("skipping Cay(N, S): %d elements exceed the point cap", normal.order())

    return Theorem1Witness(
        representatives,
        t,
        d,
        f1_value,
        f2_value,
        connection,
        h_group.order(),
        bound,
        stabiliser_orders,
        trace.freeze(),
        cayley,
    )


def _connected_transversal(graph: Graph, normal: PermGroup) -> tuple[int, ...]:
    orbit_of = [0] * graph.vertex_count
    for i, orbit in enumerate(normal.orbits()):
        for v in orbit:
            orbit_of[v] = i
    chosen = [0]
    covered = {orbit_of[0]}
    frontier = set(graph.neighbours(0))
    while True:
        candidates = sorted(v for v in frontier if orbit_of[v] not in covered)
        if not candidates:
            return tuple(chosen)
        v = candidates[0]
        chosen.append(v)
        covered.add(orbit_of[v])
        frontier.update(graph.neighbours(v))


def _connection_set(
    graph: Graph, normal: PermGroup, representatives: Sequence[int], budget: int
) -> tuple[Permutation, ...]:
    near = set()
    for b in representatives:
        near.update(graph.neighbours(b))
    connection = [
        n
        for n in normal.elements(budget)
        if any(n.array_form[b] in near for b in representatives)
    ]
    logger.debug("connection set of size %d", len(connection))
    return tuple(sorted(connection, key=sort_key))


def _checked_cayley(
    normal: PermGroup,
    span: list[Permutation],
    trace: TraceRecorder,
    config: AnalysisConfig,
) -> Graph | None:
    try:
        cayley, elements = cayley_digraph(normal, span, config.element_budget)
    except GraphError as error:
        trace.check("cayley_components", False, str(error))
        return None
    trace.check("cayley_components", True, f"{cayley.vertex_count} vertices")
    index = {sort_key(e): i for i, e in enumerate(elements)}
    preserved = True
    for g in normal.generators:
        moved = [index[sort_key(e * g)] for e in elements]
        for u, v in cayley.edges():
            if not cayley.has_edge(moved[u], moved[v]):
                preserved = False
                break
    trace.check("right_multiplication_preserves_arcs", preserved)
    return cayley


# ==================================================================================
# Generators over R^l
# ==================================================================================


def lemma_aux_check(
    simple: PermGroup,
    subgroup: PermGroup,
    m_vectors: Sequence[Sequence[Permutation]],
    y_vectors: Sequence[Sequence[Permutation]] | None = None,
    z_vectors: Sequence[Sequence[Permutation]] | None = None,
    *,
    entry_cap: int | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> LemmaAuxReport:
    """
    Decide whether T^l = <n^(1), ..., n^(d)> R^l for n^(i) = y^(i) m^(i) z^(i),
    and check that it forces l <= e^d |R|^(2d), where e caps the distinct
    entries of each m^(i). With `entry_cap` unset, e = d.

    The product set is all of T^l exactly when the generated subgroup is
    transitive on the l-tuples of right cosets of R, which is decided by an
    orbit computation on |T : R|^l points.

    Raises:
        AnalysisError: If T is not nonabelian simple, R is not a proper
            subgroup, or the vectors are malformed.
        ResourceLimitError: If |T : R|^l exceeds the point cap.
    """
    if simple.is_abelian() or not is_simple(simple, config.element_budget):
        raise AnalysisError("T must be nonabelian simple")
    if not subgroup.is_subgroup_of(simple):
        raise NotSubgroupError("R is not a subgroup of T")
    if subgroup.order() == simple.order():
        raise AnalysisError("R must be a proper subgroup of T")
    if not m_vectors:
        raise AnalysisError("at least one vector is required")

    count = len(m_vectors)
    l = len(m_vectors[0])
    cap = count if entry_cap is None else entry_cap
    identity_vector = [subgroup.identity] * l
    ys = y_vectors if y_vectors is not None else [identity_vector] * count
    zs = z_vectors if z_vectors is not None else [identity_vector] * count
    if len(ys) != count or len(zs) != count:
        raise AnalysisError("y and z need one vector per m")
    for m, y, z in zip(m_vectors, ys, zs):
        if not (len(m) == len(y) == len(z) == l) or l < 1:
            raise AnalysisError("every vector needs the same positive length l")
        if len({sort_key(x) for x in m}) > cap:
            raise AnalysisError(f"a vector has more than {cap} distinct entries")
        if not all(simple.contains(x) for x in m):
            raise AnalysisError("m entries must lie in T")
        if not all(subgroup.contains(x) for x in (*y, *z)):
            raise AnalysisError("y and z entries must lie in R")

    cosets = CosetAction(simple, subgroup, max_points=config.max_points)
    k = cosets.degree
    if k**l > config.max_points:
        raise ResourceLimitError(f"{k}^{l} coset tuples exceed the point cap")
    generators = [
        [
            [cosets.act(p, y[j] * m[j] * z[j]) for p in range(k)]
            for j in range(l)
        ]
        for m, y, z in zip(m_vectors, ys, zs)
    ]
    hypothesis = _tuple_orbit_size(generators, k, l) == k**l

    bound = mul(power(cap, count), power(subgroup.order(), 2 * count))
    comparison = cmp_bound(
        bound,
        l,
        exact_bits=config.exact_threshold_bits,
        max_precision=config.max_precision,
    )
    logger.debug(
        "T^l = <n>R^l is %s for l = %d, %d vectors", hypothesis, l, count
    )
    return LemmaAuxReport(
        l,
        count,
        cap,
        hypothesis,
        bound,
        comparison,
        (not hypothesis) or comparison.holds,
    )


def _tuple_orbit_size(generators: list[list[list[int]]], k: int, l: int) -> int:
    """Orbit of the all-zero tuple under coordinatewise actions on k^l tuples."""
    weights = [k ** (l - 1 - j) for j in range(l)]
    seen = {0}
    frontier = [0]
    while frontier:
        code = frontier.pop()
        digits = [code // w % k for w in weights]
        for coordinates in generators:
            image = sum(coordinates[j][digits[j]] * weights[j] for j in range(l))
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return len(seen)

