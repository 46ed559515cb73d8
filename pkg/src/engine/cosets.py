"""
Action of a group on the right cosets of a subgroup.

The acting group stays small (its natural degree), while the coset space
may hold hundreds of thousands of points. Each coset Kg is represented by
its least image list among the elements kg, k in K; cosets are numbered
in increasing order of that representative, so the numbering does not
depend on the generators or on the enumeration order.
"""

import logging
from collections.abc import Sequence

from sympy.combinatorics import Permutation

from .groups import (
    DEFAULT_ELEMENT_BUDGET,
    NotSubgroupError,
    PartitionError,
    PermGroup,
    ResourceLimitError,
)
from .normal_structure import minimal_normal_subgroups

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 200_000

Images = tuple[int, ...]


class CosetAction:
    """
    A group acting by right multiplication on the cosets of a subgroup.

    Attributes:
        parent (PermGroup):
            The acting group, in a faithful action of small degree.

        subgroup (PermGroup):
            The point stabiliser K of coset 0, which is K itself.

        degree (int):
            Number of cosets |parent : subgroup|.
    """

    def __init__(
        self,
        parent: PermGroup,
        subgroup: PermGroup,
        *,
        max_points: int = DEFAULT_MAX_POINTS,
    ) -> None:
        if not subgroup.is_subgroup_of(parent):
            raise NotSubgroupError("coset action needs a subgroup of the parent")
        index = parent.order() // subgroup.order()
        if index > max_points:
            raise ResourceLimitError(
                f"{index} cosets exceed the point cap {max_points}"
            )
        self.parent = parent
        self.subgroup = subgroup
        self.degree = index
        self._subgroup_images: list[Images] = [
            tuple(k.array_form) for k in subgroup.elements()
        ]
        self._representatives, self._images = self._enumerate()
        self._index = {rep: i for i, rep in enumerate(self._representatives)}

    def __repr__(self) -> str:
        return (
            f"CosetAction(parent order {self.parent.order()}, "
            f"subgroup order {self.subgroup.order()}, {self.degree} cosets)"
        )

    def canonical(self, images: Sequence[int]) -> Images:
        """Least image list of k*g over k in K, where g has image list `images`."""
        return min(tuple(images[x] for x in k) for k in self._subgroup_images)

    def representative(self, point: int) -> Permutation:
        return Permutation(list(self._representatives[point]))

    def coset_of(self, g: Permutation) -> int:
        return self._index[self.canonical(g.array_form)]

    def act(self, point: int, g: Permutation) -> int:
        rep = self._representatives[point]
        images = g.array_form
        return self._index[self.canonical([images[x] for x in rep])]

    def order(self) -> int:
        return self.parent.order()

    def generator_images(self) -> tuple[tuple[int, ...], ...]:
        return self._images

    def is_transitive(self) -> bool:
        return True

    def point_stabiliser(self, point: int) -> PermGroup:
        """Stabiliser of the coset Kg in the parent, which is g^-1 K g."""
        return self.subgroup.conjugate(self.representative(point))

    def stabiliser_on(self, point: int, targets: Sequence[int]) -> tuple[PermGroup, int]:
        stab = self.point_stabiliser(point)
        index = {t: i for i, t in enumerate(targets)}
        images = []
        for g in stab.generators:
            try:
                images.append([index[self.act(t, g)] for t in targets])
            except KeyError:
                raise PartitionError("target set is not invariant under the stabiliser")
        return PermGroup.from_images(len(targets), images), stab.order()

    def is_faithful(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> bool:
        """The core of K is trivial exactly when K contains no minimal normal subgroup."""
        return not any(
            m.is_subgroup_of(self.subgroup)
            for m in minimal_normal_subgroups(self.parent, budget)
        )

    def is_quasiprimitive(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> bool:
        """A normal subgroup M is transitive on cosets exactly when |M||K| = |parent||M ∩ K|."""
        for m in minimal_normal_subgroups(self.parent, budget):
            shared = sum(1 for k in self.subgroup.elements() if m.contains(k))
            if m.order() * self.subgroup.order() != self.parent.order() * shared:
                return False
        return True

    def _enumerate(self) -> tuple[list[Images], tuple[tuple[int, ...], ...]]:
        gens = [tuple(g.array_form) for g in self.parent.generators]
        start = self.canonical(range(self.parent.degree))
        found: dict[Images, int] = {start: 0}
        order = [start]
        targets: list[list[int]] = [[] for _ in gens]
        cursor = 0
        while cursor < len(order):
            rep = order[cursor]
            for j, s in enumerate(gens):
                image = self.canonical([s[x] for x in rep])
                label = found.get(image)
                if label is None:
                    label = found[image] = len(order)
                    order.append(image)
                targets[j].append(label)
            cursor += 1
            if cursor % 20_000 == 0:
                logger.debug("enumerated %d of %d cosets", cursor, self.degree)

        if len(order) != self.degree:
            raise ResourceLimitError(
                f"found {len(order)} cosets, expected {self.degree}"
            )
        ranked = sorted(range(len(order)), key=order.__getitem__)
        relabel = [0] * len(order)
        for new, old in enumerate(ranked):
            relabel[old] = new
        images = tuple(
            tuple(relabel[t[old]] for old in ranked) for t in targets
        )
        return [order[old] for old in ranked], images
