import logging
from dataclasses import dataclass

from src.engine.groups import DEFAULT_ELEMENT_BUDGET, PermGroup
from src.engine.normal_structure import primitivity_profile, qp_profile

from .analysis_types import AnalysisError, LocalProperty
from .pairs import VTPair

logger = logging.getLogger(__name__)

INTRANSITIVE_REASON = "local action intransitive"


@dataclass(frozen=True)
class LocalFlags:
    """
    Classification of a local action.

    The properties other than transitivity presuppose a transitive group;
    on an intransitive local action they are all False and `reason` says why.
    """

    transitive: bool
    two_transitive: bool
    primitive: bool
    quasiprimitive: bool
    semiprimitive: bool
    reason: str = ""


@dataclass(frozen=True, eq=False)
class LocalActionReport:
    """
    Group induced by a vertex stabiliser on the neighbourhood of the vertex.

    Attributes:
        vertex (int):
            The vertex α.

        neighbourhood (tuple[int, ...]):
            Sorted neighbours; point i of `induced_group` is neighbourhood[i].

        induced_group (PermGroup):
            The local action.

        kernel_order (int):
            Order of the kernel of G_α on the neighbourhood.

        stabiliser_order (int):
            |G_α| = |induced_group| * kernel_order.

        flags (LocalFlags):
            Transitivity-hierarchy classification of `induced_group`.
    """

    vertex: int
    neighbourhood: tuple[int, ...]
    induced_group: PermGroup
    kernel_order: int
    stabiliser_order: int
    flags: LocalFlags

    @property
    def neighbourhood_size(self) -> int:
        return len(self.neighbourhood)

    @property
    def faithful(self) -> bool:
        return self.kernel_order == 1

    def has(self, prop: LocalProperty) -> bool:
        return bool(getattr(self.flags, prop))


def local_flags(induced: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET) -> LocalFlags:
    if not induced.is_transitive():
        return LocalFlags(False, False, False, False, False, INTRANSITIVE_REASON)
    prim = primitivity_profile(induced)
    qp = qp_profile(induced, budget)
    return LocalFlags(
        True, prim.two_transitive, prim.primitive, qp.quasiprimitive, qp.semiprimitive
    )


def local_action(
    pair: VTPair, vertex: int, budget: int = DEFAULT_ELEMENT_BUDGET
) -> LocalActionReport:
    """
    Group induced by G_v on the neighbours of `vertex`.

    Raises:
        AnalysisError: If `vertex` is not a vertex of the pair's graph.
    """
    if not 0 <= vertex < pair.graph.vertex_count:
        raise AnalysisError(
            f"vertex {vertex} outside 0..{pair.graph.vertex_count - 1}"
        )
    neighbourhood = pair.graph.neighbours(vertex)
    induced, stabiliser_order = pair.group.stabiliser_on(vertex, neighbourhood)
    kernel_order = stabiliser_order // induced.order()
    logger.debug(
        "local action at %d: induced order %d, kernel order %d",
        vertex,
        induced.order(),
        kernel_order,
    )
    return LocalActionReport(
        vertex,
        tuple(neighbourhood),
        induced,
        kernel_order,
        stabiliser_order,
        local_flags(induced, budget),
    )


def classify_pair_locally(
    pair: VTPair, budget: int = DEFAULT_ELEMENT_BUDGET
) -> LocalActionReport:
    """
    Local action at vertex 0, spot-checked against the last vertex.

    Raises:
        AnalysisError: If the two vertices disagree, which means the group is
            not vertex-transitive on the graph.
    """
    report = local_action(pair, 0, budget)
    last = pair.vertex_count - 1
    if last > 0:
        other = local_action(pair, last, budget)
        if (
            other.induced_group.order() != report.induced_group.order()
            or other.kernel_order != report.kernel_order
            or other.flags != report.flags
        ):
            raise AnalysisError(f"local actions at 0 and {last} differ")
    return report
