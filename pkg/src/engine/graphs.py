from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
from sympy.combinatorics import Permutation

from .groups import DEFAULT_ELEMENT_BUDGET, PermGroup, PointAction, sort_key

logger = logging.getLogger(__name__)

DEFAULT_DIAMETER_LIMIT = 5000


class GraphError(Exception):
    pass


class InvalidGraphError(GraphError):
    pass


class ConnectionSetError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """
    Finite simple graph or digraph on the vertices 0..vertex_count-1.

    Attributes:
        vertex_count (int):
            Number of vertices.

        adjacency (tuple[tuple[int, ...], ...]):
            Strictly increasing out-neighbour lists, one per vertex. Undirected
            graphs list every edge at both ends.

        directed (bool):
            Whether arcs are oriented.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    directed: bool = False

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise InvalidGraphError("graph needs at least one vertex")
        if len(self.adjacency) != self.vertex_count:
            raise InvalidGraphError("one neighbour list per vertex required")
        for v, row in enumerate(self.adjacency):
            for a, b in zip(row, row[1:]):
                if a >= b:
                    raise InvalidGraphError(f"neighbours of {v} are not strictly increasing")
            if row and not (0 <= row[0] and row[-1] < self.vertex_count):
                raise InvalidGraphError(f"neighbour of {v} out of range")
            if v in row:
                raise InvalidGraphError(f"loop at {v}")
        if not self.directed:
            for u, row in enumerate(self.adjacency):
                for v in row:
                    if not self.has_edge(v, u):
                        raise InvalidGraphError(f"edge {u}-{v} is not symmetric")

    @classmethod
    def from_edges(
        cls, vertex_count: int, edges: Iterable[tuple[int, int]], directed: bool = False
    ) -> Graph:
        rows: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidGraphError(f"edge {u}-{v} out of range")
            rows[u].add(v)
            if not directed:
                rows[v].add(u)
        return cls(vertex_count, tuple(tuple(sorted(r)) for r in rows), directed)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def valency(self, v: int) -> int:
        return len(self.adjacency[v])

    def valencies(self) -> tuple[int, int]:
        sizes = [len(row) for row in self.adjacency]
        return min(sizes), max(sizes)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbour_sets[u]

    @property
    def edge_count(self) -> int:
        arcs = sum(len(row) for row in self.adjacency)
        return arcs if self.directed else arcs // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Arcs of a digraph, or edges u < v of an undirected graph."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if self.directed or u < v:
                    yield u, v

    def induced_subgraph(self, vertices: Sequence[int]) -> Graph:
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            tuple(
                tuple(sorted(index[w] for w in self.adjacency[v] if w in index))
                for v in vertices
            ),
            self.directed,
        )

    @cached_property
    def _neighbour_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(row) for row in self.adjacency)

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.DiGraph() if self.directed else nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges())
        return graph


@dataclass(frozen=True)
class GraphInvariants:
    connected: bool
    valency_min: int
    valency_max: int
    diameter: int | None


@dataclass(frozen=True)
class Orbital:
    """
    Attributes:
        graph (Graph):
            The orbital graph; undirected when self-paired or symmetrised.

        self_paired (bool):
            Whether the reversed arc lies in the same orbit.
    """

    graph: Graph
    self_paired: bool


def graph_invariants(
    graph: Graph, diameter_limit: int = DEFAULT_DIAMETER_LIMIT
) -> GraphInvariants:
    """
    Connectivity (weak for digraphs), valency range and diameter.

    The diameter is left as `None` for disconnected graphs, digraphs that are
    not strongly connected, and graphs above `diameter_limit` vertices.
    """
    g = graph.nx_graph
    low, high = graph.valencies()
    if graph.directed:
        connected = nx.is_weakly_connected(g)
        strong = nx.is_strongly_connected(g)
    else:
        connected = strong = nx.is_connected(g)
    diameter = None
    if strong and graph.vertex_count <= diameter_limit:
        diameter = nx.diameter(g)
    return GraphInvariants(connected, low, high, diameter)


def is_connected(graph: Graph) -> bool:
    if graph.directed:
        return nx.is_weakly_connected(graph.nx_graph)
    return nx.is_connected(graph.nx_graph)


# ==================================================================================
# Constructions
# ==================================================================================


def cayley_digraph(
    group: PermGroup,
    connection_set: Iterable[Permutation],
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> tuple[Graph, tuple[Permutation, ...]]:
    """
    Cayley digraph Cay(N, S) with an arc from n to n' whenever n n'^-1 lies in S.

    Products compose left to right, so n n'^-1 is `n * ~n'`. Vertices are the
    elements of the group sorted by image list; they are returned alongside
    the graph. The graph is undirected exactly when S is inverse-closed.

    Raises:
        ConnectionSetError: If S contains the identity or an element outside N.
    """
    connection = sorted(set(connection_set), key=sort_key)
    for s in connection:
        if s.is_Identity:
            raise ConnectionSetError("connection set contains the identity")
        if not group.contains(s):
            raise ConnectionSetError(f"connection element {s} is not in the group")

    elements = tuple(sorted(group.elements(budget), key=sort_key))
    index = {sort_key(e): i for i, e in enumerate(elements)}
    inverse_closed = {sort_key(~s) for s in connection} == {sort_key(s) for s in connection}
    rows = []
    for n in elements:
        rows.append(tuple(sorted(index[sort_key(~s * n)] for s in connection)))
    graph = Graph(len(elements), tuple(rows), directed=not inverse_closed)

    components = nx.number_weakly_connected_components(nx.DiGraph(graph.nx_graph))
    span = PermGroup(group.degree, connection)
    if components * span.order() != group.order():
        raise GraphError(
            f"{components} components, but |N : <S>| = {group.order() // span.order()}"
        )
    return graph, elements


def orbital_graph(
    group: PointAction, arc: tuple[int, int], symmetrize: bool = False
) -> Orbital:
    """
    Graph whose arcs form the orbit of `arc` under `group`.

    Raises:
        GraphError: If the arc is a loop.
    """
    alpha, beta = arc
    if alpha == beta:
        raise GraphError("orbital arc must join two distinct points")
    n = group.degree
    gens = group.generator_images()
    start = alpha * n + beta
    seen = {start}
    frontier = [start]
    while frontier:
        code = frontier.pop()
        u, v = divmod(code, n)
        for g in gens:
            image = g[u] * n + g[v]
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    logger.debug("orbital of (%d, %d) has %d arcs", alpha, beta, len(seen))

    self_paired = beta * n + alpha in seen
    undirected = self_paired or symmetrize
    rows: list[set[int]] = [set() for _ in range(n)]
    for code in seen:
        u, v = divmod(code, n)
        rows[u].add(v)
        if undirected:
            rows[v].add(u)
    graph = Graph(n, tuple(tuple(sorted(r)) for r in rows), directed=not undirected)
    return Orbital(graph, self_paired)


def lexicographic_product(x: Graph, y: Graph) -> Graph:
    """
    Lexicographic product X[Y]; vertex (a, b) is numbered a * |VY| + b.

    (a, b) ~ (a', b') when a ~ a' in X, or a = a' and b ~ b' in Y.
    """
    m = y.vertex_count
    rows = []
    for a in range(x.vertex_count):
        for b in range(m):
            row = [a2 * m + b2 for a2 in x.neighbours(a) for b2 in range(m)]
            row.extend(a * m + b2 for b2 in y.neighbours(b))
            rows.append(tuple(sorted(row)))
    product = Graph(x.vertex_count * m, tuple(rows), directed=x.directed or y.directed)

    (xl, xh), (yl, yh) = x.valencies(), y.valencies()
    if xl == xh and yl == yh and product.valencies() != (yl + xl * m,) * 2:
        raise GraphError("lexicographic product valency does not match d_Y + d_X |VY|")
    return product


def delta_graph(
    graph: Graph,
    halves: tuple[Sequence[int], Sequence[int]],
    cross_edges_only: bool = False,
) -> Graph:
    """
    Graph on the first half, joining distinct vertices at distance at most 2.

    Vertex i of the result is the i-th smallest vertex of the first half.
    With `cross_edges_only`, every edge of `graph` must join the two halves and
    the result has valency at most d(d-1); otherwise at most d(d-1) + d.

    Raises:
        GraphError: If the halves do not partition the vertices into two
            nonempty cells, or a stated bound fails.
    """
    first, second = sorted(halves[0]), sorted(halves[1])
    if not first or not second:
        raise GraphError("both halves must be nonempty")
    if sorted(first + second) != list(range(graph.vertex_count)):
        raise GraphError("halves do not partition the vertex set")

    side = [0] * graph.vertex_count
    for v in second:
        side[v] = 1
    if cross_edges_only and any(side[u] == side[v] for u, v in graph.edges()):
        raise GraphError("an edge lies inside a half")

    index = {v: i for i, v in enumerate(first)}
    rows = []
    for v in first:
        near = set()
        for w in graph.neighbours(v):
            if w in index:
                near.add(index[w])
            for u in graph.neighbours(w):
                if u in index:
                    near.add(index[u])
        near.discard(index[v])
        rows.append(tuple(sorted(near)))
    result = Graph(len(first), tuple(rows), graph.directed)

    d = graph.valencies()[1]
    limit = d * (d - 1) if cross_edges_only else d * (d - 1) + d
    if result.valencies()[1] > limit:
        raise GraphError(f"distance-2 graph valency exceeds {limit}")
    return result


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(tuple(w for w in range(n) if w != v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def cartesian_product(x: Graph, y: Graph) -> Graph:
    """Cartesian product X □ Y; vertex (a, b) is numbered a * |VY| + b."""
    m = y.vertex_count
    edges = [(a * m + b, a2 * m + b) for a, a2 in x.edges() for b in range(m)]
    edges += [(a * m + b, a * m + b2) for a in range(x.vertex_count) for b, b2 in y.edges()]
    return Graph.from_edges(x.vertex_count * m, edges, x.directed or y.directed)


def hypercube_graph(n: int) -> Graph:
    size = 2**n
    return Graph.from_edges(size, ((v, v ^ (1 << i)) for v in range(size) for i in range(n)))


def bipartite_double(graph: Graph) -> Graph:
    """Canonical double cover; vertex (v, s) is numbered s * n + v."""
    n = graph.vertex_count
    edges = [(u, n + v) for u, v in graph.edges()]
    if not graph.directed:
        edges += [(v, n + u) for u, v in graph.edges()]
    return Graph.from_edges(2 * n, edges)
