"""
Immutable simple graphs over dense integer vertices with bitmask adjacency rows.

A vertex set is a plain ``int`` whose bit ``v`` is set when vertex ``v`` is a
member. Every algorithm in the package works on these bitmasks; vertex labels
(permutation words, coordinates) ride along for display only.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx
from networkx.algorithms.connectivity import (
    build_auxiliary_node_connectivity,
    local_node_connectivity,
)
from networkx.algorithms.flow import build_residual_network

from topodiag.errors import DisconnectedGraphError, GraphError
from topodiag.parallel import deal, run_chunks

logger = logging.getLogger(__name__)

VertexSet = int


def bit(v: int) -> VertexSet:
    return 1 << v


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_members(mask: VertexSet) -> Iterator[int]:
    """Yield the members of a vertex set in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: VertexSet) -> List[int]:
    return list(iter_members(mask))


def set_size(mask: VertexSet) -> int:
    return mask.bit_count()


def above(v: int) -> int:
    """Mask selecting every vertex index strictly greater than ``v``."""
    return ~((1 << (v + 1)) - 1)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``rows[v]`` is the neighbor set of ``v``."""

    order: int
    rows: Tuple[int, ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.order < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.rows) != self.order:
            raise GraphError(f"expected {self.order} adjacency rows, got {len(self.rows)}")
        if self.labels is not None and len(self.labels) != self.order:
            raise GraphError(f"expected {self.order} labels, got {len(self.labels)}")
        limit = 1 << self.order
        for u, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise GraphError(f"row {u} references a vertex outside 0..{self.order - 1}")
            if row >> u & 1:
                raise GraphError(f"vertex {u} is adjacent to itself")
            for v in iter_members(row):
                if not self.rows[v] >> u & 1:
                    raise GraphError(f"adjacency is not symmetric on ({u}, {v})")

    @classmethod
    def from_edges(
        cls,
        order: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Iterable[str]] = None,
    ) -> "Graph":
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise GraphError(f"edge ({u}, {v}) is outside 0..{order - 1}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, tuple(rows), tuple(labels) if labels is not None else None)

    @cached_property
    def full(self) -> VertexSet:
        return (1 << self.order) - 1

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(row.bit_count() for row in self.rows)

    @cached_property
    def regularity(self) -> Optional[int]:
        """Common degree of a regular graph, ``None`` otherwise."""
        first = self.degrees[0]
        return first if all(d == first for d in self.degrees) else None

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def neighbors(self, v: int) -> VertexSet:
        return self.rows[v]

    def is_adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in ascending order."""
        for u, row in enumerate(self.rows):
            for v in iter_members(row & above(u)):
                yield u, v

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.order))
        G.add_edges_from(self.edges())
        return G

    def check_subset(self, mask: VertexSet) -> None:
        if mask < 0 or mask >> self.order:
            raise GraphError(f"vertex set references vertices outside 0..{self.order - 1}")


def neighborhood(g: Graph, u: VertexSet) -> VertexSet:
    """Open neighborhood N(U): vertices outside ``u`` adjacent to some member."""
    g.check_subset(u)
    acc = 0
    rows = g.rows
    for v in iter_members(u):
        acc |= rows[v]
    return acc & ~u


def components(g: Graph, removed: VertexSet = 0) -> List[VertexSet]:
    """Connected components of ``g - removed``, ordered by smallest vertex."""
    g.check_subset(removed)
    rows = g.rows
    remaining = g.full & ~removed
    found = []
    while remaining:
        seed = remaining & -remaining
        comp = frontier = seed
        while frontier:
            reach = 0
            for v in iter_members(frontier):
                reach |= rows[v]
            frontier = reach & remaining & ~comp
            comp |= frontier
        found.append(comp)
        remaining &= ~comp
    return found


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def induced_subgraph(g: Graph, u: VertexSet) -> Graph:
    """Subgraph induced by ``u``, relabelled 0..|u|-1 in ascending vertex order."""
    g.check_subset(u)
    keep = members(u)
    if not keep:
        raise GraphError("cannot induce a subgraph on an empty vertex set")
    index = {v: i for i, v in enumerate(keep)}
    rows = tuple(vertex_set(index[w] for w in iter_members(g.rows[v] & u)) for v in keep)
    labels = tuple(g.label(v) for v in keep) if g.labels is not None else None
    return Graph(len(keep), rows, labels)


def _local_connectivity_chunk(pairs: List[Tuple[int, int]], g: Graph, cutoff: int) -> int:
    G = g.to_networkx()
    H = build_auxiliary_node_connectivity(G)
    R = build_residual_network(H, "capacity")
    best = cutoff
    for s, t in pairs:
        best = min(best, local_node_connectivity(G, s, t, auxiliary=H, residual=R, cutoff=best))
    return best


def vertex_connectivity(g: Graph, threads: int = 1) -> int:
    """
    Exact vertex connectivity via internally disjoint paths.

    Follows the min-degree vertex scheme: local connectivity from a vertex v of
    minimum degree to each non-neighbor, and between each non-adjacent pair of
    v's neighbors. Complete graphs K_m give m - 1.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("vertex connectivity needs a connected graph")
    if g.edge_count == g.order * (g.order - 1) // 2:
        return g.order - 1

    delta = min(g.degrees)
    v = g.degrees.index(delta)
    pairs = [(v, w) for w in iter_members(g.full & ~g.rows[v] & ~bit(v))]
    pairs += [(x, y) for x, y in combinations(members(g.rows[v]), 2) if not g.is_adjacent(x, y)]
    logger.debug("vertex connectivity: %d flow pairs, cutoff %d", len(pairs), delta)
    results = run_chunks(_local_connectivity_chunk, deal(pairs, threads), threads, g, delta)
    return min([delta, *results])


def girth(g: Graph) -> Union[int, float]:
    """Length of a shortest cycle; ``math.inf`` for forests."""
    return nx.girth(g.to_networkx())


def common_neighbors(g: Graph, u: int, v: int) -> int:
    if u == v:
        raise GraphError("common neighbors need two distinct vertices")
    for w in (u, v):
        if not 0 <= w < g.order:
            raise GraphError(f"vertex {w} is outside 0..{g.order - 1}")
    return (g.rows[u] & g.rows[v]).bit_count()


def second_neighbors(g: Graph, u: int) -> VertexSet:
    """Vertices other than ``u`` sharing at least one neighbor with ``u``."""
    reach = 0
    for w in iter_members(g.rows[u]):
        reach |= g.rows[w]
    return reach & ~bit(u)


def common_neighbor_argmax(g: Graph) -> Tuple[int, int, int]:
    """First pair ``(u, v)`` in lexicographic order attaining cn(G), with the count."""
    if g.order < 2:
        raise GraphError("cn(G) needs at least two vertices")
    rows = g.rows
    best = (0, 1, 0)
    for u in range(g.order):
        for v in iter_members(second_neighbors(g, u) & above(u)):
            count = (rows[u] & rows[v]).bit_count()
            if count > best[2]:
                best = (u, v, count)
    return best


def cn_max(g: Graph) -> int:
    """cn(G): the largest common-neighbor count over all vertex pairs."""
    return common_neighbor_argmax(g)[2]


def l_max(g: Graph) -> int:
    """l(G): the largest common-neighbor count over adjacent pairs."""
    if g.edge_count == 0:
        raise GraphError("l(G) needs at least one edge")
    rows = g.rows
    return max((rows[u] & rows[v]).bit_count() for u, v in g.edges())
