import pytest

from helpers import antipodal, cube_pair, k33_pair, lexicographic_pair

from src.application.catalog import build_example
from src.application.quotients import (
    QuotientError,
    block_quotient,
    normal_quotient,
    proposition_local_check,
)
from src.engine.constructions import (
    alternating,
    base_group,
    hypercube_translations,
    product_action,
    symmetric,
)
from src.engine.graphs import complete_graph, cycle_graph
from src.engine.groups import NotNormalError, PartitionError, PermGroup


def test_lexicographic_product_quotients_to_a_cycle() -> None:
    pair, base = lexicographic_pair(8)
    result = normal_quotient(pair, base)
    assert result.quotient_graph.adjacency == cycle_graph(8).adjacency
    assert result.image_group.order() == 16
    assert result.kernel.order() == 256
    assert result.valency_drop == (5, 2)
    assert result.pair is not None
    assert result.pair.d == 5
    assert result.block_map[0] == result.block_map[1] == 0


def test_normal_quotient_needs_a_normal_subgroup() -> None:
    pair = build_example("hamming").pair
    columns = product_action([PermGroup.trivial(5), alternating(5)])
    with pytest.raises(NotNormalError):
        normal_quotient(pair, columns)


def test_transitive_normal_subgroups_are_rejected() -> None:
    with pytest.raises(QuotientError):
        normal_quotient(cube_pair(), hypercube_translations(3))


def test_antipodal_quotient_of_the_cube_is_k4() -> None:
    result = normal_quotient(cube_pair(), antipodal(3))
    assert result.quotient_graph.adjacency == complete_graph(4).adjacency
    assert result.image_group.order() == 24
    assert result.kernel.order() == 2


def test_block_quotient_certifies_its_own_valency() -> None:
    blocks = [(v, v ^ 7) for v in range(4)]
    result = block_quotient(cube_pair(), blocks)
    assert result.quotient_graph.adjacency == complete_graph(4).adjacency
    assert result.pair is not None
    assert result.pair.d == 3


def test_block_quotient_rejects_non_invariant_partitions() -> None:
    with pytest.raises(PartitionError):
        block_quotient(cube_pair(), [(0, 1), (2, 3), (4, 5), (6, 7)])
    with pytest.raises(PartitionError):
        block_quotient(cube_pair(), [(0, 1), (2, 3)])


def test_two_block_quotients_are_not_certified() -> None:
    result = block_quotient(k33_pair(), [(0, 1, 2), (3, 4, 5)])
    assert result.quotient_graph.vertex_count == 2
    assert result.valency_drop == (3, 1)
    assert result.pair is None
    assert normal_quotient(k33_pair(), base_group(symmetric(3), 2)).pair is None


# ==================================================================================
# Locally-P quotients
# ==================================================================================


def test_local_check_on_the_antipodal_cube_quotient() -> None:
    report = proposition_local_check(
        cube_pair(), antipodal(3), "two_transitive", [hypercube_translations(3)]
    )
    assert report.hypotheses_met
    assert report.holds
    assert report.maximality == "verified"
    assert report.diagnosis == ()
    assert [s.name for s in report.hypotheses] == [
        "locally_two_transitive",
        "normal",
        "one_closed",
        "three_orbits",
        "overgroup_0",
    ]
    assert [s.name for s in report.assertions] == [
        "quotient_locally_two_transitive",
        "image_qp_or_biqp",
        "semiregular",
    ]


def test_local_check_diagnoses_failed_hypotheses() -> None:
    report = proposition_local_check(cube_pair(), hypercube_translations(3), "primitive")
    assert not report.hypotheses_met
    assert report.maximality == "unverified"
    failed = {s.name for s in report.hypotheses if not s.passed}
    assert failed == {"one_closed", "three_orbits"}
    assert "hypothesis not met: three_orbits (1 orbits)" in report.diagnosis
    assert [s.name for s in report.assertions] == ["semiregular"]


def test_local_check_reports_non_semiregular_subgroups() -> None:
    pair, base = lexicographic_pair(8)
    report = proposition_local_check(pair, base, "transitive")
    assert not report.hypotheses_met
    assert not report.holds
    assert any(line.startswith("N_α ≠ 1") for line in report.diagnosis)
