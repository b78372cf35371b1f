from itertools import combinations

import networkx as nx

from tests.helpers import boundary_size, cycle, petersen
from topodiag.graph import members, neighborhood, vertex_set
from topodiag.search import Step, first_pair_below, first_violation, walk_connected_sets


def _connected_subsets(g, max_size):
    G = g.to_networkx()
    found = set()
    for size in range(1, max_size + 1):
        for chosen in combinations(range(g.order), size):
            if nx.is_connected(G.subgraph(chosen)):
                found.add(vertex_set(chosen))
    return found


def test_walk_visits_each_connected_set_once():
    g = petersen()
    seen = []

    def visit(current, boundary, size):
        assert boundary == neighborhood(g, current)
        assert size == current.bit_count()
        seen.append(current)
        return Step.EXTEND

    for root in range(g.order):
        walk_connected_sets(g, root, 4, visit, budget=10**6)
    assert len(seen) == len(set(seen))
    assert set(seen) == _connected_subsets(g, 4)


def test_walk_reports_budget_exhaustion():
    g = cycle(10)
    walk = walk_connected_sets(g, 0, 10, lambda c, b, s: Step.EXTEND, budget=5)
    assert walk.exhausted
    assert walk.nodes == 6


def test_walk_stops_on_request():
    g = cycle(10)
    walk = walk_connected_sets(g, 0, 10, lambda c, b, s: Step.STOP if s == 3 else Step.EXTEND, budget=100)
    assert walk.stopped and not walk.exhausted


def test_first_pair_below_is_lexicographic():
    g = cycle(6)
    # non-adjacent pairs at distance two share a neighbor: |N| = 3
    assert first_pair_below(g, 4, include_adjacent=False) == (0, 2)
    assert first_pair_below(g, 3, include_adjacent=False) is None
    assert first_pair_below(g, 3, include_adjacent=True) == (0, 1)
    assert first_pair_below(g, 2, include_adjacent=True) is None
    assert first_pair_below(g, 4, include_adjacent=True) == (0, 1)


def test_first_pair_below_far_pairs():
    g = cycle(8)
    assert first_pair_below(g, 5, include_adjacent=False) == (0, 2)
    hit = first_pair_below(g, 5, include_adjacent=False)
    assert boundary_size(g, hit) < 5


def _small_boundary(g, bound):
    hits = []

    def visit(current, boundary, size):
        if size >= 2 and boundary.bit_count() < bound:
            hits.append(current)
            return Step.PRUNE
        return Step.EXTEND

    return visit, hits, []


def test_first_violation_is_thread_independent():
    g = petersen()
    for bound in (5, 3):
        single = first_violation(g, 5, _small_boundary, (bound,), budget=10**6, threads=1)
        double = first_violation(g, 5, _small_boundary, (bound,), budget=10**6, threads=2)
        assert single.witness == double.witness
        assert single.searched == double.searched
        assert single.hit_root == double.hit_root


def test_first_violation_witness_and_miss():
    g = petersen()
    hit = first_violation(g, 5, _small_boundary, (5,), budget=10**6)
    assert members(hit.witness) == [0, 1]
    miss = first_violation(g, 5, _small_boundary, (3,), budget=10**6)
    assert miss.witness is None and not miss.exhausted
    assert miss.searched == len(_connected_subsets(g, 5))
