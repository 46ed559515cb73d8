"""
Catalog of worked examples.

Every example is a named recipe that builds a certified pair and replays a
fixed list of expected assertions against it. Parameters are validated and
the predicted sizes are compared with the configured caps before anything
is built, so `dry_run` answers without constructing the groups.
"""

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

from sympy import primefactors

from src.engine.constructions import (
    action_on_subsets,
    alternating,
    base_group,
    dihedral,
    hypercube_group,
    hypercube_translations,
    imprimitive_wreath,
    product_action,
    product_action_wreath,
    product_coordinates,
    symmetric,
)
from src.engine.cosets import CosetAction
from src.engine.graphs import (
    Graph,
    cartesian_product,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    hypercube_graph,
    is_connected,
    lexicographic_product,
    orbital_graph,
)
from src.engine.groups import PermGroup, from_cycles, perm
from src.engine.normal_structure import primitivity_profile, qp_profile, socle

from .analysis_types import AnalysisConfig, StepCallback, TraceRecorder, TraceStep
from .biqp_reduction import biqp_split, lemma_silly_check, theorem_mainbiqp, wreath_component
from .boundedness import DEFAULT_CONFIG, theorem1_construct
from .local_action import classify_pair_locally
from .pairs import VTPair, certify_pair
from .qp_reduction import (
    classify_qp_case,
    find_regular_normal,
    theorem_mainqp,
    verify_lemma_proj,
)
from .quotients import normal_quotient

logger = logging.getLogger(__name__)

ParamValue = int | str
Provenance = Literal["source", "derived", "trivial", "discrepancy"]


class CatalogError(Exception):
    pass


class UnknownExampleError(CatalogError):
    pass


class InfeasibleExampleError(CatalogError):
    pass


@dataclass(frozen=True)
class ExpectedAssertion:
    """
    Attributes:
        name (str):
            Name of the trace step that checks it.

        provenance (Provenance):
            - "source": stated in the research source
            - "derived": computed from the construction
            - "trivial": immediate from the definitions
            - "discrepancy": the construction disagrees with a remark in the
              source; the assertion records what actually holds
    """

    name: str
    provenance: Provenance
    description: str


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    summary: str
    parameters: Mapping[str, ParamValue]
    expected: tuple[ExpectedAssertion, ...]
    dry_run_only: bool = False


@dataclass(frozen=True, eq=False)
class BuiltExample:
    """
    A constructed example.

    Attributes:
        spec (ExampleSpec):
            The catalog entry.

        params (dict[str, ParamValue]):
            Parameters after defaults were applied.

        pair (VTPair):
            The certified pair.

        auxiliary (dict[str, PermGroup]):
            Named subgroups used by the assertions, e.g. "normal".

        steps (tuple[TraceStep, ...]):
            Construction steps.
    """

    spec: ExampleSpec
    params: dict[str, ParamValue]
    pair: VTPair
    auxiliary: dict[str, PermGroup] = field(default_factory=dict)
    steps: tuple[TraceStep, ...] = ()


@dataclass(frozen=True)
class DryRunReport:
    """
    Predicted sizes of an example, compared with the caps.

    Attributes:
        orders (dict[str, int]):
            Named orders and counts, always including "vertices" and "group".

        feasible (bool):
            Whether `build_example` would construct it under the caps.

        reason (str):
            Why it is infeasible.
    """

    name: str
    params: dict[str, ParamValue]
    orders: dict[str, int]
    feasible: bool
    reason: str = ""


@dataclass(frozen=True)
class ExampleVerification:
    name: str
    params: dict[str, ParamValue]
    steps: tuple[TraceStep, ...]

    @property
    def ok(self) -> bool:
        return all(step.passed for step in self.steps)

    def failures(self) -> list[TraceStep]:
        return [step for step in self.steps if not step.passed]


_Builder = Callable[
    [dict[str, ParamValue], AnalysisConfig], tuple[VTPair, dict[str, PermGroup]]
]


@dataclass(frozen=True)
class _Entry:
    spec: ExampleSpec
    validate: Callable[[dict[str, ParamValue]], None]
    orders: Callable[[dict[str, ParamValue]], dict[str, int]]
    build: _Builder | None
    verify: Callable[[BuiltExample, TraceRecorder, AnalysisConfig], None] | None


# ==================================================================================
# Public interface
# ==================================================================================


def example_names() -> list[str]:
    return list(_CATALOG)


def example_spec(name: str) -> ExampleSpec:
    return _entry(name).spec


def resolve_params(
    name: str, params: Mapping[str, ParamValue] | None = None
) -> dict[str, ParamValue]:
    """
    Apply defaults and validate.

    Raises:
        UnknownExampleError: If `name` is not in the catalog.
        CatalogError: If a parameter is unknown or has the wrong type.
        InfeasibleExampleError: If a parameter is out of range.
    """
    entry = _entry(name)
    resolved = dict(entry.spec.parameters)
    for key, value in (params or {}).items():
        if key not in resolved:
            raise CatalogError(f"{name} has no parameter {key!r}")
        default = resolved[key]
        if isinstance(default, int) and not isinstance(value, int):
            try:
                value = int(value)
            except ValueError:
                raise CatalogError(f"parameter {key} of {name} must be an integer") from None
        resolved[key] = value
    entry.validate(resolved)
    return resolved


def dry_run(
    name: str,
    params: Mapping[str, ParamValue] | None = None,
    config: AnalysisConfig = DEFAULT_CONFIG,
) -> DryRunReport:
    entry = _entry(name)
    resolved = resolve_params(name, params)
    orders = entry.orders(resolved)
    reason = ""
    if orders["vertices"] > config.max_points:
        reason = f"{orders['vertices']} vertices exceed the point cap {config.max_points}"
    elif orders["group"] > config.max_order:
        reason = f"group order {orders['group']} exceeds the order cap {config.max_order}"
    elif entry.build is None:
        reason = "available as a dry run only"
    return DryRunReport(name, resolved, orders, not reason, reason)


def build_example(
    name: str,
    params: Mapping[str, ParamValue] | None = None,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> BuiltExample:
    """
    Construct and certify an example.

    Raises:
        UnknownExampleError, CatalogError
        InfeasibleExampleError: If the parameters are out of range, the
            predicted sizes exceed the caps, or the example is dry-run only.
    """
    entry = _entry(name)
    report = dry_run(name, params, config)
    if not report.feasible or entry.build is None:
        raise InfeasibleExampleError(f"{name}: {report.reason}")
    trace = TraceRecorder(on_step)
    pair, auxiliary = entry.build(report.params, config)
    trace.check("pair_certified", True, f"{pair.vertex_count} vertices, valency {pair.valency}")
    trace.check(
        "group_order",
        pair.group_order() == report.orders["group"],
        f"|G| = {pair.group_order()}",
    )
    logger.info("built %s with %s", name, report.params)
    return BuiltExample(entry.spec, report.params, pair, auxiliary, trace.freeze())


def verify_example(
    name: str,
    params: Mapping[str, ParamValue] | None = None,
    *,
    config: AnalysisConfig = DEFAULT_CONFIG,
    on_step: StepCallback | None = None,
) -> ExampleVerification:
    """
    Build an example and check each of its expected assertions.

    Assertion failures are reported in the result, never raised.
    """
    entry = _entry(name)
    built = build_example(name, params, config=config)
    trace = TraceRecorder(on_step)
    trace.extend(built.steps)
    assert entry.verify is not None
    entry.verify(built, trace, config)
    checked = {step.name for step in trace.steps}
    for expected in entry.spec.expected:
        if expected.name not in checked:
            trace.check(expected.name, False, "assertion was not evaluated")
    return ExampleVerification(name, built.params, trace.freeze())


def _entry(name: str) -> _Entry:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownExampleError(f"unknown example {name!r}") from None


def _int(params: Mapping[str, ParamValue], key: str) -> int:
    value = params[key]
    assert isinstance(value, int)
    return value


def _at_least(key: str, low: int) -> Callable[[dict[str, ParamValue]], None]:
    def validate(params: dict[str, ParamValue]) -> None:
        if _int(params, key) < low:
            raise InfeasibleExampleError(f"parameter {key} must be at least {low}")

    return validate


def _no_params(params: dict[str, ParamValue]) -> None:
    return None


# ==================================================================================
# Lexicographic product C_n[K_2] with its base group
# ==================================================================================


def _ex1_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    n = _int(params, "n")
    return {"vertices": 2 * n, "group": 2**n * 2 * n}


def _ex1_build(params: dict[str, ParamValue], config: AnalysisConfig):
    n = _int(params, "n")
    graph = lexicographic_product(cycle_graph(n), complete_graph(2))
    group = imprimitive_wreath(symmetric(2), dihedral(n))
    return certify_pair(graph, group), {"normal": base_group(symmetric(2), n)}


def _ex1_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair, normal = built.pair, built.auxiliary["normal"]
    n = _int(built.params, "n")
    trace.check("vertex_count", pair.vertex_count == 2 * n, str(pair.vertex_count))
    trace.check("valency_five", pair.valency == 5, f"valency {pair.valency}")
    local = normal.stabiliser(0).order()
    trace.check("normal_stabiliser", local == 2 ** (n - 1), f"|N_(x,y)| = {local}")
    quotient = normal_quotient(pair, normal)
    trace.check(
        "quotient_is_cycle",
        quotient.quotient_graph.adjacency == cycle_graph(n).adjacency,
    )
    image = quotient.image_group
    block_stabiliser = image.stabiliser(0).order()
    trace.check(
        "quotient_two_bounded",
        image.order() == 2 * n and block_stabiliser == 2,
        f"|G/N| = {image.order()}, stabiliser {block_stabiliser}",
    )
    witness = theorem1_construct(pair.graph, normal, pair.perm_group(), config=config)
    trace.check("connected_transversal_bound", witness.ok, f"t = {witness.t}, |S| = {witness.s_size}")


# ==================================================================================
# Orbital graph of Sym(10) on the cosets of Sym(3)^2
# ==================================================================================

_EX4_ORDER = math.factorial(10)


def _ex4_subgroup() -> PermGroup:
    x = from_cycles(10, [(0, 1, 2), (3, 4, 5), (6, 7, 8)])
    y = from_cycles(10, [(0, 3, 6), (1, 4, 7), (2, 5, 8)])
    z = from_cycles(10, [(1, 2), (4, 5), (7, 8)])
    t = from_cycles(10, [(3, 6), (4, 7), (5, 8)])
    return PermGroup(10, [x, y, z, t])


def _ex4_build(params: dict[str, ParamValue], config: AnalysisConfig):
    parent = symmetric(10)
    subgroup = _ex4_subgroup()
    action = CosetAction(parent, subgroup, max_points=config.max_points)
    iota = from_cycles(10, [(0, 9)])
    orbital = orbital_graph(action, (0, action.coset_of(iota)))
    return certify_pair(orbital.graph, action), {"subgroup": subgroup}


def _ex4_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    subgroup = built.auxiliary["subgroup"]
    trace.check("subgroup_order", subgroup.order() == 36, f"|K| = {subgroup.order()}")
    trace.check("vertex_count", pair.vertex_count == 100800, str(pair.vertex_count))
    trace.check("valency_nine", pair.valency == 9, f"valency {pair.valency}")
    trace.check("connected", is_connected(pair.graph))
    local = classify_pair_locally(pair, config.element_budget)
    trace.check(
        "local_order",
        local.induced_group.order() == 36 and local.flags.transitive,
        f"local action of order {local.induced_group.order()}",
    )
    trace.check("local_faithful", local.faithful, f"kernel order {local.kernel_order}")
    trace.check("local_imprimitive", not local.flags.primitive)
    trace.check("local_not_quasiprimitive", not local.flags.quasiprimitive)
    trace.check("local_not_semiprimitive", not local.flags.semiprimitive)
    group = pair.group
    assert isinstance(group, CosetAction)
    trace.check("vertex_quasiprimitive", group.is_quasiprimitive(config.element_budget))


# ==================================================================================
# Hamming graphs with the product action wreath product
# ==================================================================================


def _hamming_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    m, k = _int(params, "m"), _int(params, "k")
    return {"vertices": m**k, "group": math.factorial(m) ** k * math.factorial(k)}


def _hamming_validate(params: dict[str, ParamValue]) -> None:
    _at_least("m", 5)(params)
    _at_least("k", 2)(params)


def _hamming_graph(m: int, k: int) -> Graph:
    graph = complete_graph(m)
    for _ in range(k - 1):
        graph = cartesian_product(graph, complete_graph(m))
    return graph


def _hamming_build(params: dict[str, ParamValue], config: AnalysisConfig):
    m, k = _int(params, "m"), _int(params, "k")
    graph = _hamming_graph(m, k)
    group = product_action_wreath(symmetric(m), symmetric(k))
    base = product_action([symmetric(m)] * k)
    first = product_action([symmetric(m)] * (k - 1) + [PermGroup.trivial(m)])
    return certify_pair(graph, group), {"base": base, "first_factors": first}


def _hamming_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    group = pair.perm_group()
    m, k = _int(built.params, "m"), _int(built.params, "k")
    budget = config.element_budget
    half = math.factorial(m) // 2

    trace.check("vertex_count", pair.vertex_count == m**k, str(pair.vertex_count))
    trace.check("valency", pair.valency == k * (m - 1), f"valency {pair.valency}")
    trace.check("quasiprimitive", qp_profile(group, budget).quasiprimitive)
    case = classify_qp_case(pair, budget)
    trace.check("product_action_case", case.kind == "product_action", case.kind)

    result = theorem_mainqp(pair, config=config)
    reduced = result.reduced[0] if result.reduced else None
    trace.check("reduced_qp", result.outcome == "reduced_qp", result.reason or result.route)
    trace.check(
        "quotient_complete",
        reduced is not None and reduced.graph.adjacency == complete_graph(m).adjacency,
    )
    trace.check(
        "image_alternating",
        reduced is not None and reduced.group_order() == half,
        f"|T| = {reduced.group_order() if reduced else 0}",
    )
    trace.check(
        "reduced_stabiliser",
        reduced is not None and reduced.stabiliser_order() == half // m,
        f"|T_δ| = {reduced.stabiliser_order() if reduced else 0}",
    )
    trace.check("reduction_trace_passed", result.trace_passed)

    projection = verify_lemma_proj(pair, case, 0, budget)
    trace.check(
        "projection_orders",
        projection.holds and projection.target_order == math.factorial(m - 1),
        f"{projection.point_projection_order}, {projection.block_projection_order}, "
        f"{projection.target_order}",
    )
    coordinates = product_coordinates([m] * k)
    component = wreath_component(group, coordinates, 0)
    trace.check(
        "wreath_component_symmetric",
        component.order() == math.factorial(m),
        f"order {component.order()}",
    )
    assert case.socle is not None
    socle_component = wreath_component(case.socle.socle, coordinates, 0)
    trace.check(
        "socle_component_alternating",
        socle_component.order() == half,
        f"order {socle_component.order()}",
    )
    base_pair = certify_pair(pair.graph, built.auxiliary["base"], pair.d)
    rows = normal_quotient(base_pair, built.auxiliary["first_factors"])
    trace.check(
        "rows_quotient_complete",
        rows.quotient_graph.adjacency == complete_graph(m).adjacency,
    )


# ==================================================================================
# Hypercubes
# ==================================================================================


def _hypercube_build(params: dict[str, ParamValue], config: AnalysisConfig):
    n = _int(params, "n")
    return certify_pair(hypercube_graph(n), hypercube_group(n)), {
        "translations": hypercube_translations(n)
    }


def _hypercube_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    n = _int(built.params, "n")
    budget = config.element_budget
    translations = built.auxiliary["translations"]
    trace.check("vertex_count", pair.vertex_count == 2**n, str(pair.vertex_count))
    regular = find_regular_normal(pair, budget)
    trace.check("regular_normal", regular is not None and regular.order() == 2**n)
    profile = qp_profile(pair.perm_group(), budget)
    trace.check("not_quasiprimitive", not profile.quasiprimitive)
    trace.check("not_biquasiprimitive", not profile.biquasiprimitive)
    result = theorem_mainqp(pair, config=config)
    certificate = result.certificate
    trace.check(
        "bounded_by_factorial",
        result.outcome == "bounded"
        and certificate is not None
        and certificate.value == math.factorial(n),
        f"|G_α| = {certificate.value if certificate else '?'}",
    )
    witness = theorem1_construct(pair.graph, translations, pair.perm_group(), config=config)
    trace.check("translation_transversal", witness.ok and witness.t == 1, f"t = {witness.t}")


# ==================================================================================
# Biquasiprimitive examples
# ==================================================================================


def _k33_build(params: dict[str, ParamValue], config: AnalysisConfig):
    group = imprimitive_wreath(symmetric(3), symmetric(2))
    return certify_pair(complete_bipartite(3, 3), group), {}


def _k33_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    trace.check("group_order_72", pair.group_order() == 72)
    trace.check(
        "biquasiprimitive", qp_profile(pair.perm_group(), config.element_budget).biquasiprimitive
    )
    split = biqp_split(pair, config)
    trace.check("g_plus_order", split.g_plus.order() == 36, f"|G+| = {split.g_plus.order()}")
    trace.check(
        "delta_complete",
        split.delta_graph is not None
        and split.delta_graph.adjacency == complete_graph(3).adjacency,
    )
    certificate = lemma_silly_check(pair, split, config)
    trace.check(
        "cross_bound_equality",
        certificate is not None and certificate.holds and certificate.value == 12,
        f"|G_α| = {certificate.value if certificate else '?'} <= 3!2!",
    )
    result = theorem_mainbiqp(pair, config=config)
    trace.check(
        "routed_cross_transitive",
        result.outcome == "bounded" and result.route == "cross_transitive",
        result.route,
    )


def _c4_build(params: dict[str, ParamValue], config: AnalysisConfig):
    group = PermGroup(4, [perm([1, 0, 3, 2]), perm([3, 2, 1, 0])])
    return certify_pair(cycle_graph(4), group), {}


def _c4_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    trace.check(
        "biquasiprimitive", qp_profile(pair.perm_group(), config.element_budget).biquasiprimitive
    )
    split = biqp_split(pair, config)
    trace.check("short_circuit", split.short_circuit)
    result = theorem_mainbiqp(pair, config=config)
    trace.check(
        "routed_short_circuit",
        result.outcome == "bounded" and result.route == "short_circuit",
        result.route,
    )


def _desargues_build(params: dict[str, ParamValue], config: AnalysisConfig):
    pairs = list(combinations(range(5), 2))
    triples = list(combinations(range(5), 3))
    index = {s: i for i, s in enumerate(pairs)}
    index.update({s: 10 + i for i, s in enumerate(triples)})
    subsets = pairs + triples

    def moved(images) -> list[int]:
        return [index[tuple(sorted(images[x] for x in s))] for s in subsets]

    swap = [1, 0, 2, 3, 4]
    twist = [
        index[tuple(sorted(set(range(5)) - {swap[x] for x in s}))] for s in subsets
    ]
    gens = [perm(moved(g)) for g in alternating(5).generator_images()]
    gens.append(perm(twist))
    edges = [
        (index[p], index[t]) for p in pairs for t in triples if set(p) <= set(t)
    ]
    return certify_pair(Graph.from_edges(20, edges), PermGroup(20, gens)), {}


def _desargues_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    trace.check("vertex_count", pair.vertex_count == 20)
    trace.check("group_order_120", pair.group_order() == 120)
    trace.check(
        "biquasiprimitive", qp_profile(pair.perm_group(), config.element_budget).biquasiprimitive
    )
    split = biqp_split(pair, config)
    trace.check("cross_intransitive", lemma_silly_check(pair, split, config) is None)
    trace.check(
        "delta_valency_six",
        split.delta_graph is not None and split.delta_graph.valencies() == (6, 6),
    )
    trace.check(
        "delta_quasiprimitive", qp_profile(split.h_group, config.element_budget).quasiprimitive
    )
    result = theorem_mainbiqp(pair, config=config)
    trace.check(
        "routed_delta_qp",
        result.outcome == "reduced_biqp" and result.route == "delta_qp",
        result.reason or result.route,
    )
    reduced = result.reduced[0] if result.reduced else None
    trace.check(
        "reduced_alternating",
        reduced is not None and reduced.vertex_count == 10 and reduced.group_order() == 60,
    )


def _rook_double_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    m = _int(params, "m")
    return {"vertices": 2 * m * m, "group": 2 * (math.factorial(m) // 2) ** 2}


def _rook_double_build(params: dict[str, ParamValue], config: AnalysisConfig):
    m = _int(params, "m")
    size = m * m

    def vertex(a: int, b: int, s: int) -> int:
        return s * size + a * m + b

    cells = [(a, b) for a in range(m) for b in range(m)]
    edges = [
        (vertex(a, b, 0), vertex(c, e, 1))
        for a, b in cells
        for c, e in cells
        if (a == e) != (b == c)
    ]
    gens = []
    for g in alternating(m).generator_images():
        left = [0] * (2 * size)
        right = [0] * (2 * size)
        for a, b in cells:
            left[vertex(a, b, 0)] = vertex(g[a], b, 0)
            left[vertex(a, b, 1)] = vertex(a, g[b], 1)
            right[vertex(a, b, 0)] = vertex(a, g[b], 0)
            right[vertex(a, b, 1)] = vertex(g[a], b, 1)
        gens += [perm(left), perm(right)]
    gens.append(perm([(v + size) % (2 * size) for v in range(2 * size)]))
    return certify_pair(Graph.from_edges(2 * size, edges), PermGroup(2 * size, gens)), {}


def _rook_double_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    m = _int(built.params, "m")
    half = math.factorial(m) // 2
    trace.check("valency", pair.valency == 2 * (m - 1), f"valency {pair.valency}")
    trace.check(
        "biquasiprimitive", qp_profile(pair.perm_group(), config.element_budget).biquasiprimitive
    )
    split = biqp_split(pair, config)
    trace.check("cross_edges_only", split.cross_edges_only)
    trace.check(
        "delta_complete",
        split.delta_graph is not None
        and split.delta_graph.adjacency == complete_graph(m * m).adjacency,
    )
    trace.check(
        "delta_not_quasiprimitive",
        not qp_profile(split.h_group, config.element_budget).quasiprimitive,
    )
    result = theorem_mainbiqp(pair, config=config)
    trace.check(
        "routed_delta_non_qp",
        result.outcome == "reduced_biqp" and result.route == "delta_non_qp",
        result.reason or result.route,
    )
    trace.check(
        "reduced_complete",
        len(result.reduced) == 2
        and all(
            r.graph.adjacency == complete_graph(m).adjacency and r.group_order() == half
            for r in result.reduced
        ),
    )


# ==================================================================================
# Petersen graph
# ==================================================================================


def _petersen_validate(params: dict[str, ParamValue]) -> None:
    if params["group"] not in ("sym", "alt"):
        raise InfeasibleExampleError("parameter group must be 'sym' or 'alt'")


def _petersen_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    return {"vertices": 10, "group": 120 if params["group"] == "sym" else 60}


def _petersen_build(params: dict[str, ParamValue], config: AnalysisConfig):
    base = symmetric(5) if params["group"] == "sym" else alternating(5)
    group, subsets = action_on_subsets(base, 2)
    orbital = orbital_graph(group, (0, subsets.index((2, 3))))
    return certify_pair(orbital.graph, group), {}


def _petersen_verify(built: BuiltExample, trace: TraceRecorder, config: AnalysisConfig) -> None:
    pair = built.pair
    group = pair.perm_group()
    trace.check("valency", pair.valency == 3)
    trace.check("primitive", primitivity_profile(group).primitive)
    trace.check("quasiprimitive", qp_profile(group, config.element_budget).quasiprimitive)
    trace.check("socle_alternating", socle(group, config.element_budget).socle.order() == 60)
    local = classify_pair_locally(pair, config.element_budget)
    trace.check("locally_two_transitive", local.flags.two_transitive)
    result = theorem_mainqp(pair, config=config)
    reduced = result.reduced[0] if result.reduced else None
    trace.check(
        "reduces_to_itself",
        result.outcome == "reduced_qp"
        and reduced is not None
        and reduced.graph.adjacency == pair.graph.adjacency
        and reduced.group_order() == 60,
        result.route,
    )


# ==================================================================================
# Linear-group examples, dry run only
# ==================================================================================


def sl_order(n: int, q: int) -> int:
    """|SL(n, q)| = q^(n(n-1)/2) · prod_{i=2..n} (q^i - 1)."""
    order = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        order *= q**i - 1
    return order


def _ex2_validate(params: dict[str, ParamValue]) -> None:
    n, q = _int(params, "n"), _int(params, "q")
    if n < 3:
        raise InfeasibleExampleError("parameter n must be at least 3")
    if q < 4 or len(primefactors(q)) != 1:
        raise InfeasibleExampleError("parameter q must be a prime power at least 4")
    if math.gcd(q * q - 1, n) != 1:
        raise InfeasibleExampleError("q^2 - 1 and n must be coprime")


def _ex2_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    n, q = _int(params, "n"), _int(params, "q")
    t = sl_order(n, q * q)
    h = 4 * t
    k = 4 * sl_order(n, q)
    delta = h // k
    return {"T": t, "H": h, "K": k, "delta": delta, "vertices": delta**2, "group": 8 * t * t}


def _ex3_orders(params: dict[str, ParamValue]) -> dict[str, int]:
    t = sl_order(3, 9)
    h = 4 * t
    k = 14 * 26
    delta = h // k
    return {"T": t, "H": h, "K": k, "delta": delta, "vertices": delta**2, "group": 4 * t * t}


# ==================================================================================
# Registry
# ==================================================================================


def _expect(*items: tuple[str, Provenance, str]) -> tuple[ExpectedAssertion, ...]:
    return tuple(ExpectedAssertion(*item) for item in items)


_CATALOG: dict[str, _Entry] = {
    "ex1": _Entry(
        ExampleSpec(
            "ex1",
            "C_n[K_2] with Sym(2) wr D_n and the base group as normal subgroup",
            {"n": 8},
            _expect(
                ("vertex_count", "trivial", "2n vertices"),
                ("valency_five", "discrepancy", "valency is 5, not the 4 its A(4) label implies"),
                ("normal_stabiliser", "source", "|N_(x,y)| = 2^(n-1)"),
                ("quotient_is_cycle", "source", "the normal quotient is the n-cycle"),
                ("quotient_two_bounded", "source", "G/N is dihedral of order 2n, stabiliser 2"),
                ("connected_transversal_bound", "derived", "the transversal construction bounds |G_α|"),
            ),
        ),
        _at_least("n", 3),
        _ex1_orders,
        _ex1_build,
        _ex1_verify,
    ),
    "ex4_lambda": _Entry(
        ExampleSpec(
            "ex4_lambda",
            "orbital graph of Sym(10) on the cosets of Sym(3)^2",
            {},
            _expect(
                ("subgroup_order", "source", "K = Sym(3) x Sym(3) has order 36"),
                ("vertex_count", "derived", "10!/36 = 100800 vertices"),
                ("valency_nine", "source", "valency 9"),
                ("connected", "source", "connected"),
                ("local_order", "source", "arc-transitive with local action of order 36"),
                ("local_faithful", "derived", "the local action is faithful"),
                ("local_imprimitive", "source", "the local action is imprimitive"),
                ("local_not_quasiprimitive", "source", "the local action is not quasiprimitive"),
                ("local_not_semiprimitive", "derived", "the local action is not semiprimitive"),
                ("vertex_quasiprimitive", "source", "Sym(10) is quasiprimitive on the cosets"),
            ),
        ),
        _no_params,
        lambda params: {"vertices": _EX4_ORDER // 36, "group": _EX4_ORDER},
        _ex4_build,
        _ex4_verify,
    ),
    "hamming": _Entry(
        ExampleSpec(
            "hamming",
            "Hamming graph H(k, m) with Sym(m) wr Sym(k) in product action",
            {"m": 5, "k": 2},
            _expect(
                ("vertex_count", "trivial", "m^k vertices"),
                ("valency", "trivial", "valency k(m-1)"),
                ("quasiprimitive", "derived", "the group is quasiprimitive"),
                ("product_action_case", "derived", "product action type"),
                ("reduced_qp", "derived", "the quasiprimitive reduction returns a reduced pair"),
                ("quotient_complete", "derived", "the reduced graph is K_m"),
                ("image_alternating", "derived", "the reduced group is Alt(m)"),
                ("reduced_stabiliser", "derived", "the reduced stabiliser has order (m-1)!/2"),
                ("reduction_trace_passed", "derived", "every reduction step holds"),
                ("projection_orders", "derived", "both projections have order (m-1)!"),
                ("wreath_component_symmetric", "derived", "component of the group is Sym(m)"),
                ("socle_component_alternating", "derived", "component of the socle is Alt(m)"),
                ("rows_quotient_complete", "derived", "the base group pair quotients to K_m"),
            ),
        ),
        _hamming_validate,
        _hamming_orders,
        _hamming_build,
        _hamming_verify,
    ),
    "hypercube": _Entry(
        ExampleSpec(
            "hypercube",
            "n-cube with its full automorphism group",
            {"n": 3},
            _expect(
                ("vertex_count", "trivial", "2^n vertices"),
                ("regular_normal", "derived", "the translations are a regular normal subgroup"),
                ("not_quasiprimitive", "derived", "the antipodal map has 2^(n-1) orbits"),
                ("not_biquasiprimitive", "derived", "nor biquasiprimitive"),
                ("bounded_by_factorial", "source", "|G_α| <= d! with equality"),
                ("translation_transversal", "derived", "one orbit of the translations"),
            ),
        ),
        _at_least("n", 2),
        lambda params: {
            "vertices": 2 ** _int(params, "n"),
            "group": 2 ** _int(params, "n") * math.factorial(_int(params, "n")),
        },
        _hypercube_build,
        _hypercube_verify,
    ),
    "k33": _Entry(
        ExampleSpec(
            "k33",
            "K_{3,3} with Sym(3) wr Sym(2)",
            {},
            _expect(
                ("group_order_72", "trivial", "|G| = 72"),
                ("biquasiprimitive", "derived", "the group is biquasiprimitive"),
                ("g_plus_order", "derived", "|G+| = 36"),
                ("delta_complete", "derived", "the distance-2 graph is K_3"),
                ("cross_bound_equality", "derived", "|G_α| = 12 = d!(d-1)!"),
                ("routed_cross_transitive", "derived", "bounded through the far-half route"),
            ),
        ),
        _no_params,
        lambda params: {"vertices": 6, "group": 72},
        _k33_build,
        _k33_verify,
    ),
    "petersen": _Entry(
        ExampleSpec(
            "petersen",
            "Petersen graph with Sym(5) or Alt(5) on 2-subsets",
            {"group": "sym"},
            _expect(
                ("valency", "trivial", "valency 3"),
                ("primitive", "derived", "the group is primitive"),
                ("quasiprimitive", "derived", "the group is quasiprimitive"),
                ("socle_alternating", "derived", "the socle is Alt(5)"),
                ("locally_two_transitive", "derived", "locally 2-transitive"),
                ("reduces_to_itself", "trivial", "reduces to the graph with the socle"),
            ),
        ),
        _petersen_validate,
        _petersen_orders,
        _petersen_build,
        _petersen_verify,
    ),
    "c4_klein": _Entry(
        ExampleSpec(
            "c4_klein",
            "4-cycle with the Klein four-group",
            {},
            _expect(
                ("biquasiprimitive", "source", "the group is biquasiprimitive"),
                ("short_circuit", "source", "the four-vertex case"),
                ("routed_short_circuit", "source", "bounded outright"),
            ),
        ),
        _no_params,
        lambda params: {"vertices": 4, "group": 4},
        _c4_build,
        _c4_verify,
    ),
    "desargues": _Entry(
        ExampleSpec(
            "desargues",
            "Desargues graph with Sym(5) twisted by complementation",
            {},
            _expect(
                ("vertex_count", "trivial", "20 vertices"),
                ("group_order_120", "derived", "|G| = 120"),
                ("biquasiprimitive", "derived", "the group is biquasiprimitive"),
                ("cross_intransitive", "derived", "G_α is intransitive on the far half"),
                ("delta_valency_six", "derived", "the distance-2 graph is T(5), valency 6"),
                ("delta_quasiprimitive", "derived", "Alt(5) on 2-subsets is quasiprimitive"),
                ("routed_delta_qp", "derived", "reduced through the quasiprimitive route"),
                ("reduced_alternating", "derived", "the reduced pair is T(5) with Alt(5)"),
            ),
        ),
        _no_params,
        lambda params: {"vertices": 20, "group": 120},
        _desargues_build,
        _desargues_verify,
    ),
    "rook_double": _Entry(
        ExampleSpec(
            "rook_double",
            "bipartite double of K_m x K_m with Alt(m) wr C_2 swapping the halves",
            {"m": 5},
            _expect(
                ("valency", "trivial", "valency 2(m-1)"),
                ("biquasiprimitive", "derived", "the group is biquasiprimitive"),
                ("cross_edges_only", "trivial", "every edge crosses the halves"),
                ("delta_complete", "derived", "the distance-2 graph is complete"),
                ("delta_not_quasiprimitive", "derived", "Alt(m)^2 on m^2 points is not quasiprimitive"),
                ("routed_delta_non_qp", "derived", "reduced through the split socle route"),
                ("reduced_complete", "derived", "both reduced pairs are K_m with Alt(m)"),
            ),
        ),
        _at_least("m", 5),
        _rook_double_orders,
        _rook_double_build,
        _rook_double_verify,
    ),
    "ex2": _Entry(
        ExampleSpec(
            "ex2",
            "product action of SL(n, q^2) extended by field and graph automorphisms",
            {"n": 3, "q": 9},
            (),
            dry_run_only=True,
        ),
        _ex2_validate,
        _ex2_orders,
        None,
        None,
    ),
    "ex3": _Entry(
        ExampleSpec(
            "ex3",
            "product action of SL(3, 9) on cosets of a dihedral product",
            {},
            (),
            dry_run_only=True,
        ),
        _no_params,
        _ex3_orders,
        None,
        None,
    ),
}
