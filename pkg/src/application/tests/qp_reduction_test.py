import math

import pytest

from helpers import antipodal, cube_pair, lexicographic_pair, petersen_pair, two_sided_pair

from src.application.analysis_types import NotQuasiprimitiveError, ReductionError
from src.application.catalog import build_example
from src.application.pairs import VTPair
from src.application.qp_reduction import (
    classify_qp_case,
    find_regular_normal,
    pa_reduce,
    theorem_mainqp,
    verify_lemma_proj,
    verify_nrorbits,
)
from src.engine.graphs import complete_graph


def hamming_pair() -> VTPair:
    return build_example("hamming").pair


def test_cube_has_a_regular_normal_subgroup() -> None:
    regular = find_regular_normal(cube_pair())
    assert regular is not None
    assert regular.order() == 8
    assert regular.is_transitive()
    assert classify_qp_case(cube_pair()).kind == "regular_normal"


def test_petersen_is_almost_simple() -> None:
    for alt in (False, True):
        case = classify_qp_case(petersen_pair(alt))
        assert case.kind == "almost_simple"
        assert case.socle is not None
        assert case.socle.socle.order() == 60


def test_hamming_is_product_action() -> None:
    case = classify_qp_case(hamming_pair())
    assert case.kind == "product_action"
    assert case.projection_orders == (12, 12)
    assert case.socle is not None
    assert case.socle.factor_count == 2


def test_lexicographic_product_is_not_quasiprimitive() -> None:
    pair, _ = lexicographic_pair(8)
    assert find_regular_normal(pair) is None
    with pytest.raises(NotQuasiprimitiveError):
        classify_qp_case(pair)
    with pytest.raises(NotQuasiprimitiveError):
        theorem_mainqp(pair)


# ==================================================================================
# Routing
# ==================================================================================


def test_regular_normal_route_bounds_by_factorial() -> None:
    result = theorem_mainqp(cube_pair())
    assert result.outcome == "bounded"
    assert result.route == "regular_normal"
    assert result.bound_name == "d!"
    assert result.certificate is not None
    assert result.certificate.value == 6
    assert result.ok
    assert result.trace_passed


def test_almost_simple_route_returns_the_socle_pair() -> None:
    pair = petersen_pair()
    result = theorem_mainqp(pair)
    assert result.outcome == "reduced_qp"
    assert result.route == "almost_simple"
    assert result.bound_name == "f_hat(6)"
    (reduced,) = result.reduced
    assert reduced.group_order() == 60
    assert reduced.graph.adjacency == pair.graph.adjacency
    assert result.certificate is not None and result.certificate.holds


def test_product_action_route_reduces_to_the_factor() -> None:
    steps = []
    result = theorem_mainqp(hamming_pair(), on_step=steps.append)
    assert result.outcome == "reduced_qp"
    assert result.route == "product_action"
    assert result.bound_name == "f_hat(12)"
    (reduced,) = result.reduced
    assert reduced.graph.adjacency == complete_graph(5).adjacency
    assert reduced.group_order() == 60
    assert result.trace_passed
    assert [s.name for s in steps][-6:] == [
        "cofactor_one_closed",
        "image_simple",
        "image_transitive",
        "factor_count_bound",
        "cofactor_quotients_agree",
        "stabiliser_sandwich",
    ]


def test_pa_reduce_rejects_other_cases() -> None:
    with pytest.raises(ReductionError):
        pa_reduce(cube_pair())


@pytest.mark.slow
def test_regular_socle_factor_route() -> None:
    pair = two_sided_pair()
    case = classify_qp_case(pair)
    assert case.kind == "socle_cofactor_regular"
    assert case.witness is not None and case.witness.order() == 60
    result = theorem_mainqp(pair)
    assert result.outcome == "bounded"
    assert result.bound_name == "(d·d!)!"
    assert result.certificate is not None
    assert result.certificate.value == 120
    assert result.certificate.comparison.exact_bound is None


# ==================================================================================
# Orbit counts and projections
# ==================================================================================


def test_orbit_counts_on_the_antipodal_blocks() -> None:
    blocks = [(v, v ^ 7) for v in range(4)]
    report = verify_nrorbits(cube_pair(), blocks, antipodal(3))
    assert report.holds
    assert report.orbit_counts == (3, 3, 3, 3)
    assert report.d == 3


def test_orbit_counts_on_singletons_of_the_hamming_graph() -> None:
    pair = hamming_pair()
    case = classify_qp_case(pair)
    assert case.socle is not None
    report = verify_nrorbits(pair, [(v,) for v in range(25)], case.socle.socle)
    assert report.holds
    assert set(report.orbit_counts) == {2}


def test_orbit_counts_need_an_invariant_partition() -> None:
    pair = hamming_pair()
    rows = [tuple(5 * a + b for b in range(5)) for a in range(5)]
    report = verify_nrorbits(pair, rows, pair.perm_group())
    assert not report.holds
    assert report.orbit_counts == ()
    assert not report.hypotheses[-1].passed


def test_projections_of_the_hamming_graph() -> None:
    pair = hamming_pair()
    case = classify_qp_case(pair)
    for index in (0, 1):
        report = verify_lemma_proj(pair, case, index)
        assert report.holds, report.steps
        assert report.target_order == math.factorial(4)
        assert report.point_projection_order == report.block_projection_order == 24
