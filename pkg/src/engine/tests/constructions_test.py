import math

import pytest

from src.engine.constructions import (
    action_on_subsets,
    alternating,
    base_group,
    cyclic,
    dihedral,
    direct_product,
    hypercube_group,
    hypercube_translations,
    imprimitive_wreath,
    product_action,
    product_action_wreath,
    product_coordinates,
    psl_2_7,
    regular_representation,
    symmetric,
)
from src.engine.groups import GroupError


@pytest.mark.parametrize(
    "group, degree, order",
    [
        (symmetric(5), 5, 120),
        (alternating(5), 5, 60),
        (alternating(2), 2, 1),
        (cyclic(6), 6, 6),
        (dihedral(5), 5, 10),
        (psl_2_7(), 7, 168),
        (hypercube_translations(4), 16, 16),
        (hypercube_group(3), 8, 48),
        (imprimitive_wreath(symmetric(2), dihedral(8)), 16, 2**8 * 16),
        (base_group(symmetric(3), 3), 9, 216),
        (product_action_wreath(symmetric(5), symmetric(2)), 25, 28800),
        (product_action([symmetric(3), cyclic(4)]), 12, 24),
    ],
)
def test_orders_and_degrees(group, degree: int, order: int) -> None:
    assert group.degree == degree
    assert group.order() == order


def test_dihedral_needs_a_polygon() -> None:
    with pytest.raises(GroupError):
        dihedral(2)


def test_direct_product_is_intransitive() -> None:
    group = direct_product([cyclic(3), symmetric(2)])
    assert group.orbits() == ((3, 4), (0, 1, 2))


def test_product_action_uses_mixed_radix() -> None:
    group = product_action([cyclic(2), cyclic(3)])
    # point 1 is (0, 1), point 3 is (1, 0)
    first, second = group.generator_images()
    assert first[1] == 4
    assert second[1] == 2
    assert second[2] == 0


def test_product_action_wreath_swaps_coordinates() -> None:
    group = product_action_wreath(cyclic(3), symmetric(2))
    swap = group.generator_images()[-1]
    # (0, 1) = point 1 moves to (1, 0) = point 3
    assert swap[1] == 3
    assert swap[4] == 4


def test_product_coordinates_are_level_sets() -> None:
    rows, columns = product_coordinates([2, 3])
    assert rows == ((0, 1, 2), (3, 4, 5))
    assert columns == ((0, 3), (1, 4), (2, 5))


def test_action_on_subsets_is_lexicographic() -> None:
    group, subsets = action_on_subsets(symmetric(5), 2)
    assert subsets[0] == (0, 1)
    assert subsets[-1] == (3, 4)
    assert group.degree == math.comb(5, 2)
    assert group.order() == 120
    assert group.is_transitive()


def test_regular_representation() -> None:
    group, elements = regular_representation(symmetric(3))
    assert group.degree == 6
    assert group.order() == 6
    assert group.stabiliser(0).is_trivial()
    assert elements[0].is_Identity


def test_hypercube_group_fixes_the_origin_with_sym_n() -> None:
    group = hypercube_group(4)
    assert group.order() == 16 * 24
    assert group.stabiliser(0).order() == 24
