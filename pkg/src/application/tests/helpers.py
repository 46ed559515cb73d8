from collections.abc import Sequence

from sympy.combinatorics import Permutation

from src.application.pairs import VTPair, certify_pair
from src.engine.constructions import (
    action_on_subsets,
    alternating,
    base_group,
    dihedral,
    hypercube_group,
    imprimitive_wreath,
    symmetric,
)
from src.engine.graphs import (
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    hypercube_graph,
    lexicographic_product,
    orbital_graph,
)
from src.engine.groups import PermGroup, perm, sort_key


def k33_pair() -> VTPair:
    return certify_pair(complete_bipartite(3, 3), imprimitive_wreath(symmetric(3), symmetric(2)))


def k44_pair() -> VTPair:
    return certify_pair(complete_bipartite(4, 4), imprimitive_wreath(symmetric(4), symmetric(2)))


def cube_pair(n: int = 3) -> VTPair:
    return certify_pair(hypercube_graph(n), hypercube_group(n))


def cycle_pair(n: int) -> VTPair:
    return certify_pair(cycle_graph(n), dihedral(n))


def complete_pair(n: int) -> VTPair:
    return certify_pair(complete_graph(n), symmetric(n))


def petersen_pair(alt: bool = False) -> VTPair:
    """Petersen graph as the disjointness orbital on 2-subsets of five points."""
    group, subsets = action_on_subsets(alternating(5) if alt else symmetric(5), 2)
    return certify_pair(orbital_graph(group, (0, subsets.index((2, 3)))).graph, group)


def petersen_socle() -> PermGroup:
    group, _ = action_on_subsets(alternating(5), 2)
    return group


def lexicographic_pair(n: int = 8) -> tuple[VTPair, PermGroup]:
    """C_n[K_2] with Sym(2) wr D_n, and the base group."""
    graph = lexicographic_product(cycle_graph(n), complete_graph(2))
    pair = certify_pair(graph, imprimitive_wreath(symmetric(2), dihedral(n)))
    return pair, base_group(symmetric(2), n)


def antipodal(n: int) -> PermGroup:
    size = 2**n
    return PermGroup(size, [perm([v ^ (size - 1) for v in range(size)])])


def klein_four() -> PermGroup:
    return PermGroup(4, [perm([1, 0, 3, 2]), perm([2, 3, 0, 1])])


LISTING_LIMIT = 3600


def product_set_covers(
    simple: PermGroup, subgroup: PermGroup, vectors: Sequence[Sequence[Permutation]]
) -> bool:
    """
    Whether <vectors> R^l is all of T^l, that is whether |X : X ∩ R^l| equals
    |T : R|^l for the subgroup X of T^l generated by the vectors.

    When |T|^l is small X is listed element by element. Otherwise X is built
    on l disjoint copies of T's points and X ∩ R^l is the pointwise stabiliser
    of one point per copy, which needs R to be a point stabiliser of T.
    """
    l = len(vectors[0])
    index = simple.order() // subgroup.order()
    if simple.order() ** l <= LISTING_LIMIT:
        return _listed_index(simple, subgroup, vectors) == index**l
    return _stabiliser_index(simple, subgroup, vectors) == index**l


def _listed_index(
    simple: PermGroup, subgroup: PermGroup, vectors: Sequence[Sequence[Permutation]]
) -> int:
    l = len(vectors[0])
    start = tuple(simple.identity for _ in range(l))
    generators = [tuple(v) for v in vectors]
    seen = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = tuple(a * b for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    inside = sum(1 for x in seen if all(subgroup.contains(a) for a in x))
    return len(seen) // inside


def _stabiliser_index(
    simple: PermGroup, subgroup: PermGroup, vectors: Sequence[Sequence[Permutation]]
) -> int:
    n = simple.degree
    l = len(vectors[0])
    point = next((p for p in range(n) if simple.stabiliser(p) == subgroup), None)
    if point is None:
        raise ValueError("R is not a point stabiliser of T")
    copies = PermGroup.from_images(
        l * n,
        ([j * n + v[j].array_form[i] for j in range(l) for i in range(n)] for v in vectors),
    )
    fixed = copies.pointwise_stabiliser([j * n + point for j in range(l)])
    return copies.order() // fixed.order()


def two_sided_pair() -> VTPair:
    """
    Alt(5) acted on by left and right multiplication and inversion, on the
    Cayley graph of its 3-cycles: the socle Alt(5)^2 has a regular factor.
    """
    a5 = alternating(5)
    elements = sorted(a5.elements(), key=sort_key)
    index = {g: i for i, g in enumerate(elements)}
    gens = [perm([index[g * x] for x in elements]) for g in a5.generators]
    gens += [perm([index[x * g] for x in elements]) for g in a5.generators]
    gens.append(perm([index[~x] for x in elements]))
    threes = [c for c in elements if c.order() == 3]
    edges = [(index[x], index[x * c]) for x in elements for c in threes]
    return certify_pair(Graph.from_edges(60, edges), PermGroup(60, gens))
