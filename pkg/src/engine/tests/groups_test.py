import pytest
from group_builders import elements_of, orbits_of
from hypothesis import given, settings
from hypothesis import strategies as st

from src.engine.constructions import (
    base_group,
    cyclic,
    dihedral,
    imprimitive_wreath,
    symmetric,
)
from src.engine.groups import (
    GroupError,
    MembershipError,
    NotNormalError,
    NotSubgroupError,
    PartitionError,
    PermGroup,
    ResourceLimitError,
    canonical_partition,
    cycle_notation,
    from_cycles,
    identity,
    induced_action,
    normal_closure,
    one_closure,
    perm,
)


def random_group(degree: int) -> st.SearchStrategy[PermGroup]:
    return st.lists(st.permutations(range(degree)), min_size=1, max_size=3).map(
        lambda images: PermGroup.from_images(degree, images)
    )


# ==================================================================================
# Permutations
# ==================================================================================


def test_perm_rejects_non_bijections() -> None:
    with pytest.raises(GroupError):
        perm([0, 0, 1])
    with pytest.raises(GroupError):
        perm([])
    with pytest.raises(GroupError):
        perm([1, 2, 3])


def test_from_cycles_and_cycle_notation_agree() -> None:
    p = from_cycles(6, [(0, 1, 2), (3, 4)])
    assert p.array_form == [1, 2, 0, 4, 3, 5]
    assert cycle_notation(p) == "(0 1 2)(3 4)"
    assert cycle_notation(identity(4)) == "()"


def test_from_cycles_rejects_repeated_points() -> None:
    with pytest.raises(GroupError):
        from_cycles(4, [(0, 1), (1, 2)])
    with pytest.raises(GroupError):
        from_cycles(3, [(0, 3)])


def test_products_apply_left_factor_first() -> None:
    a = from_cycles(3, [(0, 1)])
    b = from_cycles(3, [(1, 2)])
    assert (a * b).array_form == [2, 0, 1]


def test_canonical_partition_sorts_blocks_and_points() -> None:
    assert canonical_partition([[5, 3], [4, 0], [2, 1]]) == ((0, 4), (1, 2), (3, 5))


# ==================================================================================
# Groups
# ==================================================================================


def test_group_rejects_mixed_degrees() -> None:
    with pytest.raises(GroupError):
        PermGroup(4, [from_cycles(3, [(0, 1)])])
    with pytest.raises(GroupError):
        PermGroup(0)


def test_identity_generators_are_dropped() -> None:
    group = PermGroup(3, [identity(3), from_cycles(3, [(0, 1)]), from_cycles(3, [(0, 1)])])
    assert len(group.generators) == 1
    assert PermGroup.trivial(5).is_trivial()
    assert PermGroup.trivial(5).order() == 1


def test_orbits_are_sorted_by_size_then_least_point() -> None:
    group = PermGroup(6, [from_cycles(6, [(2, 3, 4)]), from_cycles(6, [(0, 5)])])
    assert group.orbits() == ((1,), (0, 5), (2, 3, 4))
    assert group.orbit(3) == (2, 3, 4)
    assert not group.is_transitive()


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=6).flatmap(random_group))
def test_orbit_stabiliser_on_random_groups(group: PermGroup) -> None:
    elements = elements_of(group)
    assert group.order() == len(elements)
    assert {frozenset(o) for o in group.orbits()} == set(orbits_of(group.degree, elements))
    for point in range(group.degree):
        assert len(group.orbit(point)) * group.stabiliser(point).order() == group.order()


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=6).flatmap(random_group))
def test_membership_matches_enumeration(group: PermGroup) -> None:
    elements = elements_of(group)
    for images in sorted(elements)[:20]:
        assert perm(list(images)) in group
    outside = symmetric(group.degree)
    missing = [g for g in outside.elements() if tuple(g.array_form) not in elements]
    assert all(not group.contains(g) for g in missing[:20])


def test_elements_respect_the_budget() -> None:
    assert len(list(symmetric(4).elements())) == 24
    with pytest.raises(ResourceLimitError):
        symmetric(6).elements(budget=100)


def test_equality_ignores_generators() -> None:
    a = PermGroup(4, [from_cycles(4, [(0, 1, 2, 3)])])
    b = PermGroup(4, [from_cycles(4, [(0, 3, 2, 1)])])
    assert a == b
    assert a != dihedral(4)
    assert hash(a) == hash(b)


def test_subgroups_and_normality() -> None:
    klein = PermGroup(4, [from_cycles(4, [(0, 1), (2, 3)]), from_cycles(4, [(0, 2), (1, 3)])])
    s4 = symmetric(4)
    assert klein.is_subgroup_of(s4)
    assert klein.is_normal_in(s4)
    transposition = PermGroup(4, [from_cycles(4, [(0, 1)])])
    assert not transposition.is_normal_in(s4)


def test_normal_closure_of_a_transposition_is_the_whole_group() -> None:
    s4 = symmetric(4)
    assert normal_closure(s4, [from_cycles(4, [(0, 1)])]).order() == 24
    assert normal_closure(s4, [from_cycles(4, [(0, 1, 2)])]).order() == 12
    assert normal_closure(s4, [identity(4)]).is_trivial()


def test_normal_closure_rejects_outsiders() -> None:
    with pytest.raises(MembershipError):
        normal_closure(cyclic(4), [from_cycles(4, [(0, 1)])])


def test_restriction_relabels_by_position() -> None:
    group = PermGroup(5, [from_cycles(5, [(1, 3)]), from_cycles(5, [(0, 4)])])
    restricted = group.restriction([1, 3])
    assert restricted.degree == 2
    assert restricted.order() == 2
    with pytest.raises(PartitionError):
        group.restriction([0, 1])


def test_stabiliser_on_a_neighbourhood() -> None:
    induced, order = dihedral(6).stabiliser_on(0, [1, 5])
    assert order == 2
    assert induced.order() == 2
    assert induced.is_transitive()


# ==================================================================================
# Block actions
# ==================================================================================


def test_induced_action_of_a_wreath_product() -> None:
    wreath = imprimitive_wreath(symmetric(3), symmetric(2))
    blocks = [(0, 1, 2), (3, 4, 5)]
    image, kernel = induced_action(wreath, blocks)
    assert wreath.order() == 72
    assert image.order() == 2
    assert kernel.order() == 36
    assert kernel == base_group(symmetric(3), 2)


def test_induced_action_rejects_bad_partitions() -> None:
    wreath = imprimitive_wreath(symmetric(3), symmetric(2))
    with pytest.raises(PartitionError):
        induced_action(wreath, [(0, 1), (2, 3, 4, 5)])
    with pytest.raises(PartitionError):
        induced_action(wreath, [(0, 1, 2), (3, 4)])
    with pytest.raises(PartitionError):
        induced_action(wreath, [(0, 1, 2), (2, 3, 4, 5)])


def test_block_stabiliser_has_index_equal_to_the_orbit_of_the_block() -> None:
    wreath = imprimitive_wreath(symmetric(2), symmetric(3))
    blocks = [(0, 1), (2, 3), (4, 5)]
    assert wreath.order() == 48
    assert wreath.block_stabiliser(blocks, 1).order() == 16


def test_action_stabiliser_uses_label_permutations() -> None:
    # S3 acting on itself and on the labels {0, 1} by sign
    s3 = symmetric(3)
    labels = [[1, 0] if g.is_odd else [0, 1] for g in s3.generators]
    assert s3.action_stabiliser(labels, 0).order() == 3
    with pytest.raises(GroupError):
        s3.action_stabiliser([[0, 1]], 0)


def test_one_closure_is_the_kernel_on_the_orbits() -> None:
    wreath = imprimitive_wreath(cyclic(2), dihedral(4))
    base = base_group(cyclic(2), 4)
    generator = base.generators[0]
    small = PermGroup(8, [generator])
    assert one_closure(base, wreath) == base
    with pytest.raises(NotNormalError):
        one_closure(small, wreath)
    with pytest.raises(NotSubgroupError):
        one_closure(symmetric(8), wreath)
