"""
Normal structure of permutation groups.

Every nontrivial normal subgroup contains the normal closure of one of its
conjugacy classes, so the transitivity hierarchy (quasiprimitive,
biquasiprimitive, semiprimitive) and the minimal normal subgroups are
decided from the closures of class representatives alone.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

from sympy import isprime
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import AlternatingGroup

from .groups import (
    DEFAULT_ELEMENT_BUDGET,
    GroupError,
    IntransitiveError,
    Partition,
    PermGroup,
    ResourceLimitError,
    canonical_partition,
    from_cycles,
    normal_closure,
    sort_key,
)

logger = logging.getLogger(__name__)

NaturalKind = Literal["symmetric", "alternating"]


class SocleError(GroupError):
    pass


@dataclass(frozen=True)
class ClassClosure:
    """
    Normal closure of one conjugacy class.

    Attributes:
        representative (Permutation):
            Least element of the class, ordered by image list.

        closure (PermGroup):
            Smallest normal subgroup containing the class.

        fixes_point (bool):
            Whether elements of the class fix at least one point.
    """

    representative: Permutation
    closure: PermGroup
    fixes_point: bool


@dataclass(frozen=True)
class SocleDecomposition:
    """
    Socle of a group with homogeneous socle, written as T^l.

    Attributes:
        socle (PermGroup):
            Product of the minimal normal subgroups.

        factors (tuple[PermGroup, ...]):
            The simple direct factors T_1..T_l, sorted by orbits.

        socle_factor_order (int):
            The common order |T|.

        factor_count (int):
            The number l of factors.

        abelian (bool):
            Whether T is abelian (then cyclic of prime order).
    """

    socle: PermGroup
    factors: tuple[PermGroup, ...]
    socle_factor_order: int
    factor_count: int
    abelian: bool


@dataclass(frozen=True)
class TransitivityProfile:
    transitive: bool
    regular: bool
    semiregular: bool


@dataclass(frozen=True)
class PrimitivityProfile:
    """
    Attributes:
        primitive (bool):
            No nontrivial proper invariant partition exists.

        two_transitive (bool):
            The stabiliser of point 0 is transitive on the remaining points.

        witness_blocks (Partition | None):
            A nontrivial block system when the group is imprimitive.
    """

    primitive: bool
    two_transitive: bool
    witness_blocks: Partition | None = None


@dataclass(frozen=True)
class QpProfile:
    quasiprimitive: bool
    biquasiprimitive: bool
    semiprimitive: bool


def natural_kind(group: PermGroup) -> NaturalKind | None:
    """Detect Sym(n) or Alt(n) in their natural action for n >= 5."""
    n = group.degree
    if n < 5:
        return None
    order = group.order()
    full = math.factorial(n)
    if order == full:
        return "symmetric"
    if 2 * order == full:
        return "alternating"
    return None


def class_closures(
    group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET
) -> tuple[ClassClosure, ...]:
    """
    Normal closures of the nonidentity conjugacy classes, by representative.

    Natural symmetric and alternating groups of degree at least 5 are
    answered directly; all other groups enumerate their classes.

    Raises:
        ResourceLimitError: If the group order exceeds `budget`.
    """

    def compute() -> tuple[ClassClosure, ...]:
        kind = natural_kind(group)
        if kind is not None:
            return _natural_closures(group, kind)
        if group.order() > budget:
            raise ResourceLimitError(
                f"group of order {group.order()} exceeds the element budget {budget}"
            )
        with group._lock:
            classes = group.sympy_group.conjugacy_classes()
        representatives = sorted((min(c, key=sort_key) for c in classes), key=sort_key)
        logger.debug("%d conjugacy classes in a group of order %d", len(classes), group.order())

        entries: list[ClassClosure] = []
        for rep in representatives:
            if rep.is_Identity:
                continue
            closure = normal_closure(group, [rep])
            for earlier in entries:
                if earlier.closure == closure:
                    closure = earlier.closure
                    break
            fixes = any(image == point for point, image in enumerate(rep.array_form))
            entries.append(ClassClosure(rep, closure, fixes))
        return tuple(entries)

    return group.memo(("class_closures", budget), compute)


def distinct_closures(
    group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET
) -> tuple[PermGroup, ...]:
    """Distinct class closures, sorted by (order, orbits, least representative)."""
    seen: list[tuple[tuple[object, ...], PermGroup]] = []
    for entry in class_closures(group, budget):
        if any(entry.closure is other for _, other in seen):
            continue
        key = (entry.closure.order(), entry.closure.orbits(), sort_key(entry.representative))
        seen.append((key, entry.closure))
    return tuple(closure for _, closure in sorted(seen, key=lambda item: item[0]))


def minimal_normal_subgroups(
    group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET
) -> list[PermGroup]:
    closures = distinct_closures(group, budget)
    return [
        c
        for c in closures
        if not any(o.order() < c.order() and o.is_subgroup_of(c) for o in closures)
    ]


def is_simple(group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET) -> bool:
    if group.is_trivial():
        return False
    return all(c == group for c in distinct_closures(group, budget))


def socle(group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET) -> SocleDecomposition:
    """
    Socle of `group` with its simple direct factors.

    Raises:
        SocleError: If the group is trivial or the factors have unequal orders.
        ResourceLimitError: If an enumeration exceeds `budget`.
    """

    def compute() -> SocleDecomposition:
        minimal = minimal_normal_subgroups(group, budget)
        if not minimal:
            raise SocleError("the trivial group has no socle factor")
        soc = minimal[0].join(*minimal[1:])
        abelian = soc.is_abelian()
        if abelian:
            factors = _elementary_abelian_basis(soc, budget)
        elif any(m.is_abelian() for m in minimal):
            raise SocleError("socle mixes abelian and nonabelian factors")
        else:
            factors = tuple(minimal_normal_subgroups(soc, budget))
        orders = {f.order() for f in factors}
        if len(orders) != 1:
            raise SocleError(f"socle is not homogeneous: factor orders {sorted(orders)}")
        factor_order = orders.pop()
        if factor_order ** len(factors) != soc.order():
            raise SocleError("socle factors do not form a direct product")
        return SocleDecomposition(soc, factors, factor_order, len(factors), abelian)

    return group.memo(("socle", budget), compute)


def transitivity_profile(group: PermGroup) -> TransitivityProfile:
    orbits = group.orbits()
    transitive = len(orbits) == 1
    semiregular = all(len(o) == group.order() for o in orbits)
    return TransitivityProfile(transitive, transitive and semiregular, semiregular)


def primitivity_profile(group: PermGroup) -> PrimitivityProfile:
    """
    Raises:
        IntransitiveError: If the group is not transitive.
    """
    if not group.is_transitive():
        raise IntransitiveError("primitivity needs a transitive group")
    n = group.degree
    if n <= 2:
        return PrimitivityProfile(True, n == 2)
    stab = group.stabiliser(0)
    if len(stab.orbit(1)) == n - 1:
        return PrimitivityProfile(True, True)

    # Minimal blocks containing 0 and i only depend on the stabiliser orbit of i.
    for orbit in sorted(stab.orbits(), key=lambda o: o[0]):
        if orbit[0] == 0:
            continue
        with group._lock:
            labels = group.sympy_group.minimal_block([0, orbit[0]])
        if len(set(labels)) > 1:
            blocks: dict[int, list[int]] = {}
            for point, label in enumerate(labels):
                blocks.setdefault(label, []).append(point)
            return PrimitivityProfile(False, False, canonical_partition(blocks.values()))
    return PrimitivityProfile(True, False)


def qp_profile(group: PermGroup, budget: int = DEFAULT_ELEMENT_BUDGET) -> QpProfile:
    """
    Raises:
        IntransitiveError: If the group is not transitive.
        ResourceLimitError: If class enumeration exceeds `budget`.
    """
    if not group.is_transitive():
        raise IntransitiveError("quasiprimitivity needs a transitive group")
    entries = class_closures(group, budget)
    counts = [len(e.closure.orbits()) for e in entries]
    quasiprimitive = all(c == 1 for c in counts)
    biquasiprimitive = not quasiprimitive and all(c <= 2 for c in counts) and 2 in counts
    semiprimitive = all(c == 1 for e, c in zip(entries, counts) if e.fixes_point)
    return QpProfile(quasiprimitive, biquasiprimitive, semiprimitive)


def _natural_closures(group: PermGroup, kind: NaturalKind) -> tuple[ClassClosure, ...]:
    n = group.degree
    alternating = group if kind == "alternating" else PermGroup.from_sympy(AlternatingGroup(n))
    entries = [ClassClosure(from_cycles(n, [(0, 1, 2)]), alternating, True)]
    if kind == "symmetric":
        entries.append(ClassClosure(from_cycles(n, [(0, 1)]), group, True))
    return tuple(entries)


def _elementary_abelian_basis(
    soc: PermGroup, budget: int
) -> tuple[PermGroup, ...]:
    """Cyclic factors of prime order generated by a greedy basis of `soc`."""
    factors: list[PermGroup] = []
    span = PermGroup.trivial(soc.degree)
    for element in sorted(soc.elements(budget), key=sort_key):
        if span.order() == soc.order():
            break
        order = element.order()
        if element.is_Identity or span.contains(element) or not isprime(order):
            continue
        factors.append(PermGroup(soc.degree, [element]))
        span = span.join(factors[-1])
    return tuple(factors)
