import pytest

from helpers import cube_pair, k33_pair, klein_four, lexicographic_pair, petersen_pair

from src.application.analysis_types import AnalysisError
from src.application.local_action import (
    INTRANSITIVE_REASON,
    classify_pair_locally,
    local_action,
    local_flags,
)
from src.application.pairs import VTPair
from src.engine.constructions import dihedral, symmetric
from src.engine.graphs import Graph
from src.engine.groups import PermGroup, from_cycles


def test_petersen_is_locally_symmetric() -> None:
    report = classify_pair_locally(petersen_pair())
    assert report.neighbourhood_size == 3
    assert report.stabiliser_order == 12
    assert report.induced_group.order() == 6
    assert report.kernel_order == 2
    assert not report.faithful
    flags = report.flags
    assert flags.transitive and flags.two_transitive and flags.primitive
    assert flags.quasiprimitive and flags.semiprimitive
    assert flags.reason == ""


def test_cube_local_action_is_faithful() -> None:
    report = classify_pair_locally(cube_pair())
    assert report.faithful
    assert report.induced_group.order() == 6
    assert report.has("two_transitive")


def test_lexicographic_product_is_locally_intransitive() -> None:
    pair, _ = lexicographic_pair(8)
    report = classify_pair_locally(pair)
    assert not report.flags.transitive
    assert report.flags.reason == INTRANSITIVE_REASON
    assert not any(
        report.has(prop)
        for prop in ("transitive", "two_transitive", "primitive", "quasiprimitive", "semiprimitive")
    )


def test_k33_has_a_kernel_of_order_two() -> None:
    report = local_action(k33_pair(), 4)
    assert report.neighbourhood == (0, 1, 2)
    assert report.induced_group.order() == 6
    assert report.kernel_order == 2


@pytest.mark.parametrize("vertex", [-1, 10])
def test_local_action_rejects_vertices_outside_the_graph(vertex: int) -> None:
    with pytest.raises(AnalysisError, match="outside 0..9"):
        local_action(petersen_pair(), vertex)


def test_vertices_with_different_local_actions_are_detected() -> None:
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    leaves = PermGroup(4, [from_cycles(4, [(1, 2, 3)]), from_cycles(4, [(1, 2)])])
    with pytest.raises(AnalysisError):
        classify_pair_locally(VTPair(star, leaves, 3))


@pytest.mark.parametrize(
    "group, expected",
    [
        (symmetric(4), (True, True, True, True, True)),
        (dihedral(4), (True, False, False, False, False)),
        (klein_four(), (True, False, False, False, True)),
        (dihedral(5), (True, False, True, True, True)),
    ],
)
def test_local_flags(group: PermGroup, expected: tuple[bool, ...]) -> None:
    flags = local_flags(group)
    assert (
        flags.transitive,
        flags.two_transitive,
        flags.primitive,
        flags.quasiprimitive,
        flags.semiprimitive,
    ) == expected
