"""
Connected vertex-set enumeration with a node budget.

Each connected set is produced exactly once, rooted at its smallest vertex,
in the ESU style: a set only grows by vertices larger than its root that are
adjacent to the most recently added members and not yet seen by the branch.
A visitor decides per set whether to extend it, prune it, or stop the walk.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from topodiag.graph import Graph, VertexSet, above, iter_members, members, second_neighbors
from topodiag.parallel import deal, run_chunks

logger = logging.getLogger(__name__)


class Step(Enum):
    EXTEND = 0
    PRUNE = 1
    STOP = 2


# visit(members, boundary, size) -> Step
Visitor = Callable[[VertexSet, VertexSet, int], Step]


@dataclass
class WalkResult:
    nodes: int = 0
    exhausted: bool = False
    stopped: bool = False

    def absorb(self, other: "WalkResult") -> None:
        self.nodes += other.nodes
        self.exhausted = self.exhausted or other.exhausted
        self.stopped = self.stopped or other.stopped


def walk_connected_sets(
    g: Graph,
    root: int,
    max_size: int,
    visit: Visitor,
    budget: int,
) -> WalkResult:
    """
    Visit every connected set whose smallest vertex is ``root`` and whose size
    is at most ``max_size``, depth first with children in ascending vertex order.
    Stops when more than ``budget`` sets have been visited.
    """
    rows = g.rows
    allowed = above(root)
    result = WalkResult()
    start = 1 << root
    stack: List[Tuple[int, int, int, int]] = [(start, rows[root], rows[root] & allowed, 1)]

    while stack:
        current, boundary, ext, size = stack.pop()
        result.nodes += 1
        if result.nodes > budget:
            result.exhausted = True
            return result

        step = visit(current, boundary, size)
        if step is Step.STOP:
            result.stopped = True
            return result
        if step is Step.PRUNE or size >= max_size:
            continue

        children = []
        rest = ext
        while rest:
            low = rest & -rest
            rest ^= low
            w = low.bit_length() - 1
            grown = current | low
            fresh = rows[w] & ~current & ~boundary & allowed
            children.append((grown, (boundary | rows[w]) & ~grown, rest | fresh, size + 1))
        stack.extend(reversed(children))

    return result


def walk_roots(
    g: Graph,
    roots: Iterable[int],
    max_size: int,
    visit: Visitor,
    budget: int,
) -> WalkResult:
    """Walk several roots in order, sharing one budget."""
    total = WalkResult()
    for root in roots:
        part = walk_connected_sets(g, root, max_size, visit, budget - total.nodes)
        total.absorb(part)
        if part.exhausted or part.stopped:
            break
    return total


def lex_key(mask: VertexSet) -> List[int]:
    """Sort key ordering vertex sets lexicographically by their ascending members."""
    return members(mask)


def smallest_set(masks: Sequence[VertexSet]) -> VertexSet:
    return min(masks, key=lex_key)


def all_roots(g: Graph) -> List[int]:
    return list(range(g.order))


def pair_boundary(g: Graph, u: int, v: int) -> int:
    """|N({u, v})| for two distinct vertices."""
    return ((g.rows[u] | g.rows[v]) & ~(1 << u) & ~(1 << v)).bit_count()


def _degree_classes(g: Graph) -> List[Tuple[int, VertexSet]]:
    classes: Dict[int, VertexSet] = {}
    for v, d in enumerate(g.degrees):
        classes[d] = classes.get(d, 0) | (1 << v)
    return sorted(classes.items())


def first_pair_below(g: Graph, bound: int, include_adjacent: bool) -> Optional[Tuple[int, int]]:
    """
    Lexicographically smallest pair u < v with |N({u, v})| < bound.

    Pairs at distance two are checked one by one; pairs further apart have
    disjoint neighborhoods, so only their degree sum matters and they are
    handled a whole degree class at a time.
    """
    rows, degrees = g.rows, g.degrees
    classes = _degree_classes(g)
    for u in range(g.order):
        later = above(u) & g.full
        ring = second_neighbors(g, u) & later
        near = ring & ~rows[u]
        if include_adjacent:
            near |= rows[u] & later
        hits = 0
        for v in iter_members(near):
            if pair_boundary(g, u, v) < bound:
                hits = 1 << v
                break
        far = later & ~rows[u] & ~ring
        for d, mask in classes:
            if degrees[u] + d >= bound:
                break
            hits |= mask & far
        if hits:
            return u, (hits & -hits).bit_length() - 1
    return None


@dataclass
class RootScan:
    """Merged outcome of a first-violation scan over every root."""

    hit_root: Optional[int] = None
    witness: Optional[VertexSet] = None
    exceptions: List[VertexSet] = field(default_factory=list)
    counts: Dict[int, int] = field(default_factory=dict)
    exhausted: bool = False

    @property
    def searched(self) -> int:
        return sum(self.counts.values())


# factory(g, *params) -> (visitor, hits, exceptions); hits and exceptions are
# lists the visitor appends to while walking one root.
VisitorFactory = Callable[..., Tuple[Visitor, List[VertexSet], List[VertexSet]]]


def _scan_chunk(
    roots: List[int],
    g: Graph,
    max_size: int,
    factory: VisitorFactory,
    params: tuple,
    budget: int,
) -> RootScan:
    scan = RootScan()
    used = 0
    for root in roots:
        visit, hits, exceptions = factory(g, *params)
        walk = walk_connected_sets(g, root, max_size, visit, budget - used)
        used += walk.nodes
        scan.counts[root] = walk.nodes
        scan.exceptions += exceptions
        if walk.exhausted:
            scan.exhausted = True
            break
        if hits:
            scan.hit_root = root
            scan.witness = smallest_set(hits)
            break
    return scan


def first_violation(
    g: Graph,
    max_size: int,
    factory: VisitorFactory,
    params: tuple,
    budget: int,
    threads: int = 1,
) -> RootScan:
    """
    Walk connected sets root by root until some root yields a hit.

    The witness is the lexicographically smallest hit of the smallest hit
    root, and the node count covers exactly the roots up to that one, so the
    outcome does not depend on how roots were dealt to workers.
    """
    parts = run_chunks(_scan_chunk, deal(all_roots(g), threads), threads, g, max_size, factory, params, budget)
    merged = RootScan()
    hits = [p for p in parts if p.hit_root is not None]
    if hits:
        winner = min(hits, key=lambda p: p.hit_root)
        merged.hit_root, merged.witness = winner.hit_root, winner.witness
        limit = winner.hit_root
    else:
        limit = g.order
        merged.exhausted = any(p.exhausted for p in parts)
    for p in parts:
        merged.counts.update((r, c) for r, c in p.counts.items() if r <= limit)
        merged.exceptions += [e for e in p.exceptions if (e & -e).bit_length() - 1 <= limit]
    merged.exceptions.sort(key=lex_key)
    if not hits and merged.searched > budget:
        merged.exhausted = True
    logger.debug("scan of %d roots: %d sets, hit root %s", g.order, merged.searched, merged.hit_root)
    return merged
