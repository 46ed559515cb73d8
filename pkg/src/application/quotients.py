"""
Normal quotients, block quotients, and the per-instance check that a
locally-P pair passes its local property to a normal quotient.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from src.engine.graphs import Graph
from src.engine.groups import (
    DEFAULT_ELEMENT_BUDGET,
    NotNormalError,
    Partition,
    PermGroup,
    canonical_partition,
    check_partition,
    induced_action,
    one_closure,
)
from src.engine.normal_structure import qp_profile

from .analysis_types import (
    AnalysisError,
    LocalCheckReport,
    LocalProperty,
    TraceRecorder,
)
from .local_action import classify_pair_locally
from .pairs import VTPair, certify_pair

logger = logging.getLogger(__name__)


class QuotientError(AnalysisError):
    pass


@dataclass(frozen=True, eq=False)
class QuotientResult:
    """
    A quotient of a pair by an invariant partition.

    Attributes:
        quotient_graph (Graph):
            Graph on the blocks; distinct blocks are adjacent when some edge
            joins them.

        blocks (Partition):
            The blocks, sorted by least element; block i is vertex i.

        block_map (tuple[int, ...]):
            Block index of every vertex.

        image_group (PermGroup):
            Action of the group on the blocks.

        kernel (PermGroup):
            Kernel of that action.

        valency_drop (tuple[int, int]):
            Valency of the original graph and of the quotient.

        pair (VTPair | None):
            The certified quotient pair, when there are at least three blocks.
    """

    quotient_graph: Graph
    blocks: Partition
    block_map: tuple[int, ...]
    image_group: PermGroup
    kernel: PermGroup
    valency_drop: tuple[int, int]
    pair: VTPair | None


def normal_quotient(pair: VTPair, normal: PermGroup) -> QuotientResult:
    """
    Quotient by the orbits of a normal subgroup.

    The quotient pair is certified against the original d, since a normal
    quotient never has larger valency.

    Raises:
        NotNormalError: If `normal` is not a normal subgroup of the group.
        QuotientError: If `normal` is transitive, leaving a single vertex.
    """
    group = pair.perm_group()
    if not normal.is_normal_in(group):
        raise NotNormalError("quotient subgroup is not normal in the group")
    if normal.is_transitive():
        raise QuotientError("a transitive normal subgroup leaves a one-vertex quotient")
    return _quotient(pair, group, canonical_partition(normal.orbits()), pair.d)


def block_quotient(pair: VTPair, blocks: Sequence[Sequence[int]]) -> QuotientResult:
    """
    Quotient by an invariant partition.

    Block quotients may have larger valency than the graph, so the quotient
    pair is certified against its own valency.

    Raises:
        PartitionError: If `blocks` is not an invariant partition.
    """
    group = pair.perm_group()
    check_partition(blocks, pair.vertex_count)
    return _quotient(pair, group, canonical_partition(blocks), None)


def _quotient(
    pair: VTPair, group: PermGroup, blocks: Partition, d: int | None
) -> QuotientResult:
    image, kernel = induced_action(group, blocks)
    block_map = [0] * pair.vertex_count
    for i, block in enumerate(blocks):
        for v in block:
            block_map[v] = i
    edges = [
        (block_map[u], block_map[v])
        for u, v in pair.graph.edges()
        if block_map[u] != block_map[v]
    ]
    quotient = Graph.from_edges(len(blocks), edges)
    drop = (pair.graph.valencies()[1], quotient.valencies()[1])
    logger.debug("quotient on %d blocks, valency %d -> %d", len(blocks), *drop)

    certified = None
    if len(blocks) >= 3:
        certified = certify_pair(quotient, image, d)
    return QuotientResult(
        quotient, blocks, tuple(block_map), image, kernel, drop, certified
    )


def proposition_local_check(
    pair: VTPair,
    normal: PermGroup,
    prop: LocalProperty,
    overgroups: Sequence[PermGroup] | None = None,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> LocalCheckReport:
    """
    Check, on one instance, that a locally-P pair quotiented by a maximal
    1-closed normal subgroup with at least three orbits is again locally-P,
    has a quasiprimitive or biquasiprimitive image, and that the subgroup
    is semiregular.

    Maximality is only tested against `overgroups`: each must be normal,
    properly contain `normal`, and have at most two orbits. Without
    overgroups it is reported as unverified.

    Failures are diagnosed in the report, never raised.
    """
    group = pair.perm_group()
    hypotheses = TraceRecorder()
    diagnosis: list[str] = []

    local = classify_pair_locally(pair, budget)
    hypotheses.check(f"locally_{prop}", local.has(prop), local.flags.reason)
    normal_ok = hypotheses.check("normal", normal.is_normal_in(group))
    if normal_ok:
        closure = one_closure(normal, group)
        hypotheses.check(
            "one_closed",
            closure.order() == normal.order(),
            f"|1-closure| = {closure.order()}, |N| = {normal.order()}",
        )
    orbit_count = len(normal.orbits())
    hypotheses.check("three_orbits", orbit_count >= 3, f"{orbit_count} orbits")

    maximality = "unverified"
    if overgroups is not None:
        maximality = "verified"
        for i, over in enumerate(overgroups):
            proper = normal.is_subgroup_of(over) and over.order() > normal.order()
            hypotheses.check(
                f"overgroup_{i}",
                proper and over.is_normal_in(group) and len(over.orbits()) <= 2,
                f"{len(over.orbits())} orbits",
            )
    for step in hypotheses.failures():
        detail = f" ({step.detail})" if step.detail else ""
        diagnosis.append(f"hypothesis not met: {step.name}{detail}")

    assertions = TraceRecorder()
    if normal_ok and orbit_count >= 3:
        quotient = normal_quotient(pair, normal)
        assert quotient.pair is not None
        quotient_local = classify_pair_locally(quotient.pair, budget)
        if not assertions.check(f"quotient_locally_{prop}", quotient_local.has(prop)):
            diagnosis.append(f"quotient is not locally {prop}")
        profile = qp_profile(quotient.image_group, budget)
        if not assertions.check(
            "image_qp_or_biqp", profile.quasiprimitive or profile.biquasiprimitive
        ):
            diagnosis.append("image is neither quasiprimitive nor biquasiprimitive")
    stabiliser = normal.stabiliser(0).order()
    if not assertions.check("semiregular", stabiliser == 1, f"|N_α| = {stabiliser}"):
        diagnosis.append(f"N_α ≠ 1 (|N_α| = {stabiliser})")

    return LocalCheckReport(
        prop,
        hypotheses.freeze(),
        assertions.freeze(),
        maximality,  # type: ignore[arg-type]
        tuple(diagnosis),
    )
