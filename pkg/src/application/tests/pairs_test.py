import pytest

from helpers import cube_pair, k33_pair, klein_four

from src.application.analysis_types import AnalysisError
from src.application.pairs import InvalidPairError, certify_pair, validate_pair
from src.engine.constructions import dihedral, symmetric
from src.engine.cosets import CosetAction
from src.engine.graphs import Graph, complete_graph, cycle_graph, hypercube_graph
from src.engine.groups import PermGroup, from_cycles

PATH_FLIP = PermGroup(3, [from_cycles(3, [(0, 2)])])


def test_k33_is_certified() -> None:
    pair = k33_pair()
    assert pair.vertex_count == 6
    assert pair.valency == 3
    assert pair.d == 3
    assert pair.group_order() == 72
    assert pair.stabiliser_order() == 12


@pytest.mark.parametrize(
    "graph, group, d, status",
    [
        (Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=True), symmetric(3), 2, "directed"),
        (cycle_graph(5), dihedral(6), 2, "degree_mismatch"),
        (Graph.from_edges(4, [(0, 1), (2, 3)]), klein_four(), 1, "disconnected"),
        (cycle_graph(5), symmetric(5), 2, "not_invariant"),
        (Graph.from_edges(3, [(0, 1), (1, 2)]), PATH_FLIP, 2, "intransitive"),
        (hypercube_graph(3), cube_pair().group, 2, "valency_exceeds"),
    ],
)
def test_first_failed_check_is_reported(graph, group, d: int, status: str) -> None:
    validation = validate_pair(graph, group, d)
    assert not validation.ok
    assert validation.status == status
    assert validation.pair is None
    assert validation.detail


def test_valid_pair_carries_the_pair() -> None:
    validation = validate_pair(cycle_graph(6), dihedral(6), 3)
    assert validation.ok
    assert validation.status == "valid"
    assert validation.pair is not None
    assert validation.pair.d == 3
    assert validation.pair.valency == 2


def test_certify_pair_raises_with_the_diagnosis() -> None:
    with pytest.raises(InvalidPairError) as info:
        certify_pair(cycle_graph(5), symmetric(5))
    assert info.value.validation.status == "not_invariant"
    assert "not_invariant" in str(info.value)


def test_d_defaults_to_the_valency() -> None:
    assert certify_pair(complete_graph(5), symmetric(5)).d == 4
    assert certify_pair(complete_graph(5), symmetric(5), 7).d == 7


def test_coset_actions_are_not_materialised() -> None:
    s4 = symmetric(4)
    action = CosetAction(s4, s4.stabiliser(3))
    pair = certify_pair(complete_graph(4), action)
    assert pair.group_order() == 24
    assert pair.stabiliser_order() == 6
    with pytest.raises(AnalysisError):
        pair.perm_group()
