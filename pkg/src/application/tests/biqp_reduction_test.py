import math

import pytest

from helpers import cube_pair, k33_pair

from src.application.analysis_types import NotBiquasiprimitiveError
from src.application.biqp_reduction import (
    biqp_split,
    lemma_silly_check,
    theorem_mainbiqp,
    wreath_component,
)
from src.application.catalog import build_example
from src.engine.bound_functions import NAMED_BOUNDS
from src.engine.constructions import product_coordinates
from src.engine.graphs import complete_graph
from src.engine.groups import PartitionError


def _bit_partitions(n: int) -> list[list[list[int]]]:
    size = 2**n
    return [
        [[v for v in range(size) if not v >> i & 1], [v for v in range(size) if v >> i & 1]]
        for i in range(n)
    ]


def test_k33_split() -> None:
    split = biqp_split(k33_pair())
    assert split.halves == ((0, 1, 2), (3, 4, 5))
    assert split.g_plus.order() == 36
    assert split.h_group.degree == 3
    assert split.cross_edges_only
    assert split.delta_valency == 6
    assert split.delta_graph is not None
    assert split.delta_graph.adjacency == complete_graph(3).adjacency
    assert split.delta_pair is not None
    assert not split.short_circuit


def test_k33_is_bounded_through_the_far_half() -> None:
    pair = k33_pair()
    certificate = lemma_silly_check(pair, biqp_split(pair))
    assert certificate is not None
    assert certificate.value == 12
    assert certificate.holds
    result = theorem_mainbiqp(pair)
    assert result.outcome == "bounded"
    assert result.route == "cross_transitive"
    assert result.bound_name == NAMED_BOUNDS["biqp_cross"].name


def test_klein_four_cycle_short_circuits() -> None:
    pair = build_example("c4_klein").pair
    assert biqp_split(pair).short_circuit
    result = theorem_mainbiqp(pair)
    assert result.outcome == "bounded"
    assert result.route == "short_circuit"
    assert result.bound_name == NAMED_BOUNDS["biqp_general"].name


def test_desargues_reduces_through_the_distance_two_graph() -> None:
    pair = build_example("desargues").pair
    split = biqp_split(pair)
    assert lemma_silly_check(pair, split) is None
    assert split.delta_graph is not None
    assert split.delta_graph.valencies() == (6, 6)
    result = theorem_mainbiqp(pair)
    assert result.outcome == "reduced_biqp"
    assert result.route == "delta_qp"
    assert result.bound_name == "f_hat(6)"
    reduced = result.reduced
    assert len(reduced) == 2
    assert reduced[0] is reduced[1]
    assert reduced[0].vertex_count == 10
    assert reduced[0].group_order() == 60


def test_rook_double_splits_the_socle() -> None:
    pair = build_example("rook_double").pair
    split = biqp_split(pair)
    assert split.cross_edges_only
    assert split.delta_graph is not None
    assert split.delta_graph.adjacency == complete_graph(25).adjacency
    result = theorem_mainbiqp(pair)
    assert result.outcome == "reduced_biqp"
    assert result.route == "delta_non_qp"
    assert result.bound_name == "g_star(12, 12)"
    assert len(result.reduced) == 2
    for reduced in result.reduced:
        assert reduced.graph.adjacency == complete_graph(5).adjacency
        assert reduced.group_order() == 60


def test_cube_is_not_biquasiprimitive() -> None:
    with pytest.raises(NotBiquasiprimitiveError):
        biqp_split(cube_pair())
    with pytest.raises(NotBiquasiprimitiveError):
        theorem_mainbiqp(cube_pair())


# ==================================================================================
# Wreath components
# ==================================================================================


def test_wreath_components_of_the_hamming_graph() -> None:
    pair = build_example("hamming").pair
    coordinates = product_coordinates([5, 5])
    for j in (0, 1):
        assert wreath_component(pair.perm_group(), coordinates, j).order() == math.factorial(5)


def test_wreath_component_of_the_cube_group() -> None:
    group = cube_pair().perm_group()
    component = wreath_component(group, _bit_partitions(3), 0)
    assert component.degree == 2
    assert component.order() == 2


def test_wreath_component_needs_permuted_partitions() -> None:
    group = cube_pair().perm_group()
    with pytest.raises(PartitionError):
        wreath_component(group, _bit_partitions(3)[:2], 0)
    partitions = _bit_partitions(3)
    with pytest.raises(PartitionError):
        wreath_component(group, [partitions[0], partitions[0]], 0)
