"""Brute-force oracles used to cross-check the searches."""

from itertools import combinations

import networkx as nx

from topodiag.generators import build, spec_from_options
from topodiag.graph import Graph


def boundary_size(g: Graph, chosen) -> int:
    chosen = set(chosen)
    outside = set()
    for v in chosen:
        outside.update(w for w in range(g.order) if g.is_adjacent(v, w))
    return len(outside - chosen)


def brute_min_boundary(g: Graph, m: int) -> int:
    return min(boundary_size(g, u) for u in combinations(range(g.order), m))


def brute_floor_holds(g: Graph, bound: int, min_size: int, max_size: int) -> bool:
    for size in range(min_size, max_size + 1):
        for u in combinations(range(g.order), size):
            if boundary_size(g, u) < bound:
                return False
    return True


def brute_kappa_h(g: Graph, h: int):
    G = g.to_networkx()
    for size in range(g.order + 1):
        for f in combinations(range(g.order), size):
            H = G.copy()
            H.remove_nodes_from(f)
            parts = list(nx.connected_components(H))
            if len(parts) >= 2 and all(len(c) >= h + 1 for c in parts):
                return size
    return None


def cycle(m: int) -> Graph:
    return Graph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def complete(m: int) -> Graph:
    return Graph.from_edges(m, list(combinations(range(m), 2)))


def petersen() -> Graph:
    G = nx.petersen_graph()
    return Graph.from_edges(10, G.edges())


def family_graph(family: str, n: int, **options) -> Graph:
    return build(spec_from_options(family, n, **options))
