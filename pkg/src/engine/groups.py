from __future__ import annotations

import logging
import threading
from collections.abc import Callable, Iterable, Iterator, Sequence
from typing import Protocol, TypeVar

from sympy.combinatorics import Permutation, PermutationGroup

logger = logging.getLogger(__name__)

DEFAULT_ELEMENT_BUDGET = 10**7

Partition = tuple[tuple[int, ...], ...]

_T = TypeVar("_T")


class GroupError(Exception):
    pass


class MembershipError(GroupError):
    pass


class NotSubgroupError(GroupError):
    pass


class NotNormalError(GroupError):
    pass


class IntransitiveError(GroupError):
    pass


class PartitionError(GroupError):
    pass


class ResourceLimitError(GroupError):
    pass


# ==================================================================================
# Permutations
# ==================================================================================


def perm(images: Sequence[int]) -> Permutation:
    """
    Build a permutation from its image list (point i maps to images[i]).

    Raises:
        GroupError: If `images` is not a bijection of 0..len(images)-1.
    """
    degree = len(images)
    if degree == 0:
        raise GroupError("permutation must act on at least one point")
    if sorted(images) != list(range(degree)):
        raise GroupError(f"images {list(images)} are not a bijection of 0..{degree - 1}")
    return Permutation(list(images))


def identity(degree: int) -> Permutation:
    return Permutation(list(range(degree)))


def from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    images = list(range(degree))
    seen: set[int] = set()
    for cycle in cycles:
        for point in cycle:
            if not 0 <= point < degree or point in seen:
                raise GroupError(f"bad cycle {tuple(cycle)} for degree {degree}")
            seen.add(point)
        for a, b in zip(cycle, [*cycle[1:], cycle[0]]):
            images[a] = b
    return Permutation(images)


def cycle_notation(p: Permutation) -> str:
    """Disjoint-cycle rendering, 0-indexed; the identity renders as `()`."""
    return "".join("(" + " ".join(map(str, c)) + ")" for c in p.cyclic_form) or "()"


def sort_key(p: Permutation) -> tuple[int, ...]:
    return tuple(p.array_form)


def canonical_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    """Sort points inside each block, then blocks by least element."""
    return tuple(sorted((tuple(sorted(block)) for block in blocks), key=lambda b: b[0]))


def check_partition(blocks: Sequence[Sequence[int]], degree: int) -> None:
    seen = [False] * degree
    for block in blocks:
        if not block:
            raise PartitionError("empty block")
        for point in block:
            if not 0 <= point < degree or seen[point]:
                raise PartitionError(f"point {point} is out of range or repeated")
            seen[point] = True
    if not all(seen):
        raise PartitionError("blocks do not cover every point")


def block_images(
    generator: Sequence[int],
    blocks: Sequence[Sequence[int]],
    block_of: Sequence[int],
) -> tuple[int, ...]:
    """
    Permutation induced on block indices by one generator (given as images).

    Raises:
        PartitionError: If the generator does not map blocks onto blocks.
    """
    images = []
    for block in blocks:
        target = block_of[generator[block[0]]]
        for point in block:
            if block_of[generator[point]] != target:
                raise PartitionError("partition is not invariant under the group")
        images.append(target)
    return tuple(images)


# ==================================================================================
# Groups
# ==================================================================================


class PermGroup:
    """
    A permutation group on the points 0..degree-1.

    The group wraps a sympy `PermutationGroup`. Its stabiliser chain is built
    lazily by sympy on first use. Every call into sympy goes through an instance
    lock, and derived data (order, orbits, normal structure) is memoised under
    the same lock, so one instance can be shared between threads.

    Attributes:
        degree (int):
            Number of points acted on.

        generators (tuple[Permutation, ...]):
            Distinct nonidentity generators in the order supplied.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = ()) -> None:
        if degree < 1:
            raise GroupError("degree must be positive")
        gens: list[Permutation] = []
        for g in generators:
            if g.size != degree:
                raise GroupError(
                    f"generator of degree {g.size} in a group of degree {degree}"
                )
            if not g.is_Identity and g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self._group = PermutationGroup(gens or [identity(degree)])
        self._lock = threading.RLock()
        self._memo: dict[object, object] = {}

    @classmethod
    def from_sympy(cls, group: PermutationGroup) -> PermGroup:
        return cls(group.degree, group.generators)

    @classmethod
    def from_images(cls, degree: int, images: Iterable[Sequence[int]]) -> PermGroup:
        return cls(degree, (perm(i) for i in images))

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls(degree)

    def __repr__(self) -> str:
        gens = ", ".join(cycle_notation(g) for g in self.generators)
        return f"PermGroup(degree={self.degree}, generators=[{gens}])"

    def __contains__(self, g: object) -> bool:
        return isinstance(g, Permutation) and self.contains(g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.order() == other.order()
            and other.is_subgroup_of(self)
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.order(), self.orbits()))

    def memo(self, key: object, compute: Callable[[], _T]) -> _T:
        """Return the value cached under `key`, computing it once if absent."""
        with self._lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]  # type: ignore[return-value]

    @property
    def sympy_group(self) -> PermutationGroup:
        return self._group

    @property
    def identity(self) -> Permutation:
        return identity(self.degree)

    def order(self) -> int:
        return self.memo("order", lambda: int(self._group.order()))

    def is_trivial(self) -> bool:
        return not self.generators

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.generators for b in self.generators)

    def contains(self, g: Permutation) -> bool:
        if g.size != self.degree:
            return False
        with self._lock:
            return bool(self._group.contains(g, strict=True))

    def orbits(self) -> Partition:
        """Orbits sorted by (size, least point)."""

        def compute() -> Partition:
            with self._lock:
                raw = self._group.orbits()
            return tuple(
                sorted((tuple(sorted(o)) for o in raw), key=lambda o: (len(o), o[0]))
            )

        return self.memo("orbits", compute)

    def orbit(self, point: int) -> tuple[int, ...]:
        for orbit in self.orbits():
            if point in orbit:
                return orbit
        raise GroupError(f"point {point} outside degree {self.degree}")

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def stabiliser(self, point: int) -> PermGroup:
        if not 0 <= point < self.degree:
            raise GroupError(f"point {point} outside degree {self.degree}")

        def compute() -> PermGroup:
            with self._lock:
                stab = self._group.stabilizer(point)
            return PermGroup(self.degree, _reduced(stab.generators))

        return self.memo(("stabiliser", point), compute)

    def pointwise_stabiliser(self, points: Sequence[int]) -> PermGroup:
        if not points:
            return self
        with self._lock:
            stab = self._group.pointwise_stabilizer(list(points), incremental=True)
        return PermGroup(self.degree, stab.generators)

    def elements(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> Iterator[Permutation]:
        """
        Iterate over every element.

        Raises:
            ResourceLimitError: If the order exceeds `budget`.
        """
        if self.order() > budget:
            raise ResourceLimitError(
                f"group of order {self.order()} exceeds the element budget {budget}"
            )
        with self._lock:
            self._group.schreier_sims()
            listing = self._group.generate(af=False)
        return iter(listing)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(
            other.contains(g) for g in self.generators
        )

    def is_normal_in(self, other: PermGroup) -> bool:
        if not self.is_subgroup_of(other):
            return False
        return all(
            self.contains(~g * h * g) for g in other.generators for h in self.generators
        )

    def join(self, *others: PermGroup) -> PermGroup:
        gens = list(self.generators)
        for other in others:
            gens.extend(other.generators)
        return PermGroup(self.degree, gens)

    def conjugate(self, g: Permutation) -> PermGroup:
        return PermGroup(self.degree, (~g * h * g for h in self.generators))

    def generator_images(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(g.array_form) for g in self.generators)

    def restriction(self, points: Sequence[int]) -> PermGroup:
        """
        Action on an invariant subset, relabelled by position in `points`.

        Raises:
            PartitionError: If `points` is not invariant.
        """
        index = {p: i for i, p in enumerate(points)}
        images = []
        for g in self.generator_images():
            try:
                images.append([index[g[p]] for p in points])
            except KeyError:
                raise PartitionError("point set is not invariant under the group")
        return PermGroup.from_images(len(points), images)

    def stabiliser_on(self, point: int, targets: Sequence[int]) -> tuple[PermGroup, int]:
        """
        Group induced by the stabiliser of `point` on `targets`, and the stabiliser order.
        """
        stab = self.stabiliser(point)
        return stab.restriction(targets), stab.order()

    def block_stabiliser(self, blocks: Sequence[Sequence[int]], index: int) -> PermGroup:
        """Setwise stabiliser of blocks[index] in an invariant partition."""
        return self._label_stabiliser(_extended(self, blocks), index)

    def action_stabiliser(self, labels: Sequence[Sequence[int]], index: int) -> PermGroup:
        """
        Stabiliser of one label under a second action of the same group.

        `labels[j]` lists the images of the labels under generator j, so the
        second action need not come from a partition of the points.

        Raises:
            GroupError: If `labels` does not give one permutation per generator.
        """
        if len(labels) != len(self.generators):
            raise GroupError("one label permutation per generator required")
        size = len(labels[0]) if labels else index + 1
        gens = []
        for g, tail in zip(self.generator_images(), labels):
            if sorted(tail) != list(range(size)):
                raise GroupError("label images do not form a permutation")
            gens.append(Permutation([*g, *(self.degree + t for t in tail)]))
        if not gens:
            gens.append(identity(self.degree + size))
        return self._label_stabiliser(PermutationGroup(gens), index)

    def _label_stabiliser(self, extended: PermutationGroup, index: int) -> PermGroup:
        with self._lock:
            stab = extended.stabilizer(self.degree + index)
        return PermGroup(self.degree, _truncate(stab.generators, self.degree))


class PointAction(Protocol):
    """
    A transitive-capable action on points 0..degree-1.

    Implemented by `PermGroup` and by `CosetAction`, which never materialises
    the acting group on its own point set.
    """

    degree: int

    def order(self) -> int: ...

    def generator_images(self) -> tuple[tuple[int, ...], ...]: ...

    def is_transitive(self) -> bool: ...

    def stabiliser_on(
        self, point: int, targets: Sequence[int]
    ) -> tuple[PermGroup, int]: ...


# ==================================================================================
# Closures and induced actions
# ==================================================================================


def normal_closure(group: PermGroup, seeds: Iterable[Permutation]) -> PermGroup:
    """
    Smallest normal subgroup of `group` containing `seeds`.

    Raises:
        MembershipError: If a seed is not an element of `group`.
    """
    seeds = list(seeds)
    for seed in seeds:
        if not group.contains(seed):
            raise MembershipError(f"{cycle_notation(seed)} is not in the group")
    seeds = [s for s in seeds if not s.is_Identity]
    if not seeds:
        return PermGroup.trivial(group.degree)
    with group._lock:
        closure = group.sympy_group.normal_closure(PermutationGroup(seeds))
    return PermGroup(group.degree, _reduced(closure.generators))


def induced_action(
    group: PermGroup, blocks: Sequence[Sequence[int]]
) -> tuple[PermGroup, PermGroup]:
    """
    Action of `group` on an invariant partition, with its kernel.

    Block i of the image is `blocks[i]`. The kernel is the pointwise
    stabiliser of the blocks, computed in the action on points plus blocks.

    Raises:
        PartitionError: If `blocks` is not a partition or is not invariant.
    """
    check_partition(blocks, group.degree)
    extended = _extended(group, blocks)
    n, k = group.degree, len(blocks)
    image = PermGroup(
        k, (Permutation([x - n for x in g.array_form[n:]]) for g in extended.generators)
    )
    with group._lock:
        kernel = extended.pointwise_stabilizer(list(range(n, n + k)), incremental=True)
    kernel_group = PermGroup(n, _truncate(kernel.generators, n))
    logger.debug(
        "induced action on %d blocks: image order %d, kernel order %d",
        k,
        image.order(),
        kernel_group.order(),
    )
    return image, kernel_group


def one_closure(subgroup: PermGroup, group: PermGroup) -> PermGroup:
    """
    Largest subgroup of `group` with the same orbits as the normal `subgroup`.

    This is the kernel of `group` on the orbits of `subgroup`.

    Raises:
        NotSubgroupError, NotNormalError
    """
    if not subgroup.is_subgroup_of(group):
        raise NotSubgroupError("not a subgroup")
    if not subgroup.is_normal_in(group):
        raise NotNormalError("not a normal subgroup")
    _, kernel = induced_action(group, subgroup.orbits())
    return kernel


# ==================================================================================
# Helpers
# ==================================================================================


def _reduced(generators: Iterable[Permutation]) -> list[Permutation]:
    """Drop generators already in the span of the ones kept."""
    kept: list[Permutation] = []
    current: PermutationGroup | None = None
    for g in generators:
        if g.is_Identity:
            continue
        if current is not None and current.contains(g, strict=True):
            continue
        kept.append(g)
        current = PermutationGroup(kept)
    return kept


def _extended(group: PermGroup, blocks: Sequence[Sequence[int]]) -> PermutationGroup:
    """Same group acting on points followed by block indices."""
    n = group.degree
    block_of = [0] * n
    for i, block in enumerate(blocks):
        for point in block:
            block_of[point] = i
    gens = []
    for g in group.generator_images():
        tail = block_images(g, blocks, block_of)
        gens.append(Permutation([*g, *(n + t for t in tail)]))
    if not gens:
        gens.append(identity(n + len(blocks)))
    return PermutationGroup(gens)


def _truncate(generators: Iterable[Permutation], n: int) -> list[Permutation]:
    return [Permutation(g.array_form[:n]) for g in generators]
