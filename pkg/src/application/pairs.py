"""
Validated graph/group pairs: a connected graph with a vertex-transitive
group of automorphisms and a valency bound d.
"""

import logging
from dataclasses import dataclass
from typing import Literal

from src.engine.cosets import CosetAction
from src.engine.graphs import Graph, is_connected
from src.engine.groups import PermGroup, PointAction

from .analysis_types import AnalysisError

logger = logging.getLogger(__name__)

PairStatus = Literal[
    "valid",
    "directed",
    "degree_mismatch",
    "disconnected",
    "not_invariant",
    "intransitive",
    "valency_exceeds",
]


@dataclass(frozen=True, eq=False)
class VTPair:
    """
    A certified pair (graph, group) of valency at most d.

    Build instances through `certify_pair` or `validate_pair`; the
    constructor does not check anything.

    Attributes:
        graph (Graph):
            Connected undirected graph on 0..n-1.

        group (PermGroup | CosetAction):
            Vertex-transitive group of automorphisms. Coset actions keep the
            acting group in its small faithful representation.

        d (int):
            Valency bound; the actual valency is at most d.
    """

    graph: Graph
    group: PermGroup | CosetAction
    d: int

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def valency(self) -> int:
        return self.graph.valency(0)

    def group_order(self) -> int:
        return self.group.order()

    def stabiliser_order(self) -> int:
        return self.group.order() // self.graph.vertex_count

    def perm_group(self) -> PermGroup:
        """
        The group as a permutation group on the vertices.

        Raises:
            AnalysisError: If the group is a coset action, which is never
                materialised on the vertices.
        """
        if isinstance(self.group, CosetAction):
            raise AnalysisError(
                f"coset action on {self.group.degree} points has no vertex-level group"
            )
        return self.group


@dataclass(frozen=True, eq=False)
class PairValidation:
    """
    Result of `validate_pair`.

    Attributes:
        ok (bool):
            Whether the pair was certified.

        status (PairStatus):
            The first failed check, or "valid".

        pair (VTPair | None):
            The certified pair when `ok`.

        detail (str):
            Human-readable description of the failure.
    """

    ok: bool
    status: PairStatus
    pair: VTPair | None = None
    detail: str = ""


class InvalidPairError(ValueError):
    """
    Raised by `certify_pair` for pairs that fail validation.

    Attributes:
        validation (PairValidation):
            The diagnosis.
    """

    def __init__(self, validation: PairValidation) -> None:
        super().__init__(f"invalid pair ({validation.status}): {validation.detail}")
        self.validation = validation


def validate_pair(graph: Graph, group: PointAction, d: int) -> PairValidation:
    """
    Check every condition of a vertex-transitive pair, in a fixed order, and
    report the first that fails.
    """
    if graph.directed:
        return PairValidation(False, "directed", detail="graph is directed")
    if group.degree != graph.vertex_count:
        return PairValidation(
            False,
            "degree_mismatch",
            detail=f"group degree {group.degree} on {graph.vertex_count} vertices",
        )
    if not is_connected(graph):
        return PairValidation(False, "disconnected", detail="graph is not connected")

    broken = _first_broken_generator(graph, group)
    if broken is not None:
        index, u, v = broken
        return PairValidation(
            False,
            "not_invariant",
            detail=f"generator {index} maps edge {u}-{v} to a non-edge",
        )
    if not group.is_transitive():
        return PairValidation(False, "intransitive", detail="group is not vertex-transitive")

    valency = graph.valencies()[1]
    if valency > d:
        return PairValidation(
            False, "valency_exceeds", detail=f"valency {valency} exceeds d = {d}"
        )
    logger.debug(
        "certified pair on %d vertices, valency %d, d = %d", graph.vertex_count, valency, d
    )
    return PairValidation(True, "valid", VTPair(graph, group, d))  # type: ignore[arg-type]


def certify_pair(graph: Graph, group: PointAction, d: int | None = None) -> VTPair:
    """
    Validate and return the pair; `d` defaults to the graph's valency.

    Raises:
        InvalidPairError: Carrying the diagnosis when a check fails.
    """
    bound = graph.valencies()[1] if d is None else d
    result = validate_pair(graph, group, bound)
    if not result.ok or result.pair is None:
        raise InvalidPairError(result)
    return result.pair


def _first_broken_generator(
    graph: Graph, group: PointAction
) -> tuple[int, int, int] | None:
    for index, images in enumerate(group.generator_images()):
        for u, v in graph.edges():
            if not graph.has_edge(images[u], images[v]):
                return index, u, v
    return None
