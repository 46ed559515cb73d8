"""
Named permutation groups and product constructions used by the catalog and tests.

Point numbering conventions:
    - product actions use mixed radix, first coordinate most significant;
    - imprimitive wreath products number point x of block b as b * m + x;
    - hypercube vertices are bitmasks.
"""

from collections.abc import Sequence
from itertools import combinations, product

from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import (
    AlternatingGroup,
    CyclicGroup,
    SymmetricGroup,
)

from .groups import GroupError, PermGroup, from_cycles, identity, perm


def symmetric(n: int) -> PermGroup:
    return PermGroup.from_sympy(SymmetricGroup(n))


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup.trivial(n)
    return PermGroup.from_sympy(AlternatingGroup(n))


def cyclic(n: int) -> PermGroup:
    return PermGroup.from_sympy(CyclicGroup(n))


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n on the vertices of an n-gon."""
    if n < 3:
        raise GroupError("dihedral group needs n >= 3")
    rotation = from_cycles(n, [tuple(range(n))])
    reflection = perm([(-i) % n for i in range(n)])
    return PermGroup(n, [rotation, reflection])


def psl_2_7() -> PermGroup:
    """PSL(2,7) acting on the seven points of the Fano plane, order 168."""
    return PermGroup(7, [from_cycles(7, [(0, 1, 2, 3, 4, 5, 6)]), from_cycles(7, [(2, 4), (5, 6)])])


def direct_product(groups: Sequence[PermGroup]) -> PermGroup:
    """Intransitive direct product, factor i acting on its own consecutive points."""
    degree = sum(g.degree for g in groups)
    gens = []
    offset = 0
    for group in groups:
        for images in group.generator_images():
            full = list(range(degree))
            for x, y in enumerate(images):
                full[offset + x] = offset + y
            gens.append(perm(full))
        offset += group.degree
    return PermGroup(degree, gens)


def product_action(groups: Sequence[PermGroup]) -> PermGroup:
    """Direct product acting coordinatewise on the cartesian product of the domains."""
    sizes = [g.degree for g in groups]
    points = list(product(*(range(m) for m in sizes)))
    index = {p: i for i, p in enumerate(points)}
    gens = []
    for j, group in enumerate(groups):
        for images in group.generator_images():
            gens.append(
                perm([index[p[:j] + (images[p[j]],) + p[j + 1 :]] for p in points])
            )
    return PermGroup(len(points), gens)


def product_action_wreath(base: PermGroup, top: PermGroup) -> PermGroup:
    """
    Wreath product base ≀ top in product action on m^l points.

    `top` permutes the l coordinates; coordinate j of the image of x is
    x[top^-1(j)], so coordinate j moves to position top(j).
    """
    m, l = base.degree, top.degree
    points = list(product(range(m), repeat=l))
    index = {p: i for i, p in enumerate(points)}
    gens = list(product_action([base] * l).generators)
    for images in top.generator_images():
        moved = []
        for p in points:
            q = [0] * l
            for j in range(l):
                q[images[j]] = p[j]
            moved.append(index[tuple(q)])
        gens.append(perm(moved))
    return PermGroup(len(points), gens)


def product_coordinates(sizes: Sequence[int]) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """
    For each coordinate j of a product action, the partition of the points
    into level sets of coordinate j; block c holds the points with x_j = c.
    """
    points = list(product(*(range(m) for m in sizes)))
    partitions = []
    for j, m in enumerate(sizes):
        levels: list[list[int]] = [[] for _ in range(m)]
        for i, p in enumerate(points):
            levels[p[j]].append(i)
        partitions.append(tuple(tuple(level) for level in levels))
    return tuple(partitions)


def imprimitive_wreath(inner: PermGroup, top: PermGroup) -> PermGroup:
    """Wreath product inner ≀ top on m * k points; `top` permutes the k blocks."""
    m, k = inner.degree, top.degree
    gens = list(base_group(inner, k).generators)
    for images in top.generator_images():
        gens.append(perm([images[b] * m + x for b in range(k) for x in range(m)]))
    return PermGroup(m * k, gens)


def base_group(inner: PermGroup, k: int) -> PermGroup:
    """Direct product of k copies of `inner`, copy b acting on block b."""
    return direct_product([inner] * k)


def hypercube_translations(n: int) -> PermGroup:
    size = 2**n
    return PermGroup(size, [perm([v ^ (1 << i) for v in range(size)]) for i in range(n)])


def hypercube_group(n: int) -> PermGroup:
    """Automorphism group C2^n ⋊ Sym(n) of the n-cube, order 2^n n!."""
    size = 2**n
    gens = list(hypercube_translations(n).generators)
    for images in symmetric(n).generator_images():
        gens.append(perm([_permute_bits(v, images) for v in range(size)]))
    return PermGroup(size, gens)


def action_on_subsets(
    group: PermGroup, k: int
) -> tuple[PermGroup, tuple[tuple[int, ...], ...]]:
    """Induced action on k-subsets, listed in lexicographic order."""
    subsets = tuple(combinations(range(group.degree), k))
    index = {s: i for i, s in enumerate(subsets)}
    gens = [
        perm([index[tuple(sorted(images[x] for x in s))] for s in subsets])
        for images in group.generator_images()
    ]
    return PermGroup(len(subsets), gens or [identity(len(subsets))]), subsets


def regular_representation(group: PermGroup) -> tuple[PermGroup, tuple[Permutation, ...]]:
    """Right regular action of `group` on its own elements, sorted by image list."""
    elements = tuple(sorted(group.elements(), key=lambda p: tuple(p.array_form)))
    index = {tuple(e.array_form): i for i, e in enumerate(elements)}
    gens = [
        perm([index[tuple((e * g).array_form)] for e in elements]) for g in group.generators
    ]
    return PermGroup(len(elements), gens), elements


def _permute_bits(v: int, images: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(images):
        if v >> i & 1:
            out |= 1 << j
    return out
