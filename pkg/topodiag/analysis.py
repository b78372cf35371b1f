"""
Boundary minima, extra connectivity, and the lemma verifiers built on them.

Searches walk connected vertex sets (see :mod:`topodiag.search`) and prune
with the growth bound: adding one vertex to U lowers |N(U)| by at most one.
"""

import logging
import math
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Tuple

from topodiag.errors import BudgetExceededError, GraphError
from topodiag.graph import (
    Graph,
    VertexSet,
    bit,
    cn_max,
    components,
    girth,
    is_connected,
    iter_members,
    l_max,
    members,
    neighborhood,
    vertex_connectivity,
    vertex_set,
)
from topodiag.diagnosability import t_p
from topodiag.parallel import deal, run_chunks
from topodiag.reports import AnalysisReport, LemmaVerdict, Status
from topodiag.search import (
    Step,
    first_pair_below,
    first_violation,
    lex_key,
    walk_roots,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9


@dataclass
class BoundaryResult:
    value: int
    witness: Optional[VertexSet]
    exact: bool
    searched: int


@dataclass
class ExtraCutBound:
    value: Optional[int]
    cut: Optional[VertexSet]
    component: Optional[VertexSet]
    searched: int
    exhausted: bool


@dataclass
class ExtraCutValue:
    value: Optional[int]
    exact: bool
    upper: Optional[int]
    cut: Optional[VertexSet]
    searched: int
    source: str
    upper_exhausted: bool = False


def _connectivity(g: Graph, kappa: Optional[int], threads: int) -> int:
    return kappa if kappa is not None else vertex_connectivity(g, threads)


# ---------------------------------------------------------------------------
# min_boundary


def _greedy_boundary(g: Graph, m: int) -> Tuple[int, Optional[VertexSet]]:
    """Grow a connected m-set from every vertex, always taking the cheapest neighbor."""
    rows = g.rows
    best, witness = g.order - m + 1, None
    for v in range(g.order):
        current, boundary = bit(v), rows[v]
        for _ in range(m - 1):
            if not boundary:
                break
            w = min(
                iter_members(boundary),
                key=lambda x: (((boundary | rows[x]) & ~current & ~bit(x)).bit_count(), x),
            )
            current |= bit(w)
            boundary = (boundary | rows[w]) & ~current
        if current.bit_count() == m and boundary.bit_count() < best:
            best, witness = boundary.bit_count(), current
    return best, witness


def _boundary_pieces(
    roots: List[int], g: Graph, m: int, best: int, witness: Optional[VertexSet], budget: int
):
    pieces: List[Tuple[VertexSet, VertexSet]] = []

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        nonlocal best, witness
        b = boundary.bit_count()
        if size == m:
            if b < best:
                best, witness = b, current
            return Step.PRUNE
        if b < best:
            pieces.append((current, boundary))
        if b - (m - size) >= best:
            return Step.PRUNE
        return Step.EXTEND

    walk = walk_roots(g, roots, m, visit, budget)
    return best, witness, pieces, walk.nodes, walk.exhausted


def _combine_pieces(
    g: Graph,
    m: int,
    pieces: List[Tuple[VertexSet, VertexSet]],
    best: int,
    witness: Optional[VertexSet],
    budget: int,
):
    """
    Disconnected m-sets: unions of pairwise non-adjacent connected pieces taken
    in increasing piece order. |N| only grows as pieces are added.
    """
    light = sorted({c: n for c, n in pieces if n.bit_count() < best}.items(), key=lambda p: lex_key(p[0]))
    if not light:
        return best, witness, 0, False
    sizes = [c.bit_count() for c, _ in light]
    smallest_boundary = min(n.bit_count() for _, n in light)
    by_vertex: Dict[int, List[int]] = {}
    for j, (c, _) in enumerate(light):
        for v in iter_members(c):
            by_vertex.setdefault(v, []).append(j)

    nodes = 0
    stack = [(0, 0, 0, 0)]
    while stack:
        union, boundary, size, start = stack.pop()
        nodes += 1
        if nodes > budget:
            return best, witness, nodes, True
        nb = boundary.bit_count()
        if nb >= best:
            continue
        remaining = m - size
        if nb + smallest_boundary >= best:
            # the next piece must share a boundary vertex with the union
            ring = neighborhood(g, boundary) & ~union
            candidates = sorted({j for v in iter_members(ring) for j in by_vertex.get(v, ()) if j >= start})
        else:
            candidates = range(start, len(light))
        closed = union | boundary
        children = []
        for j in candidates:
            c, n = light[j]
            if sizes[j] > remaining or c & closed:
                continue
            grown = boundary | n
            gb = grown.bit_count()
            if gb >= best:
                continue
            if sizes[j] == remaining:
                best, witness = gb, union | c
                continue
            children.append((union | c, grown, size + sizes[j], j + 1))
        stack.extend(reversed(children))
    return best, witness, nodes, False


def min_boundary(
    g: Graph,
    m: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    floor: Optional[int] = None,
) -> BoundaryResult:
    """
    Minimum |N(U)| over all m-subsets U, connected or not, by branch and bound.

    Connected candidates come from the set walk; disconnected ones are unions
    of non-adjacent connected pieces whose own boundary is already below the
    incumbent. ``exact`` is False when the budget ran out, in which case
    ``value`` is still an upper bound.

    With ``floor`` the search only decides whether some m-set has boundary
    below ``floor``: ``value`` is ``floor`` with no witness when none does,
    otherwise the boundary of the returned witness.
    """
    if not 1 <= m <= g.order - 1:
        raise GraphError(f"set size {m} is outside 1..{g.order - 1}")
    if m == 1:
        d = min(g.degrees)
        return BoundaryResult(d, bit(g.degrees.index(d)), True, g.order)

    best, witness = _greedy_boundary(g, m)
    if floor is not None:
        if best < floor:
            return BoundaryResult(best, witness, True, g.order)
        best, witness = floor, None

    chunks = deal(list(range(g.order)), threads)
    parts = run_chunks(_boundary_pieces, chunks, threads, g, m, best, witness, budget)
    searched = sum(p[3] for p in parts)
    exhausted = any(p[4] for p in parts) or searched > budget
    found = [(p[0], lex_key(p[1]), p[1]) for p in parts if p[1] is not None]
    if found:
        best, _, witness = min(found)

    if not exhausted:
        pieces = [piece for p in parts for piece in p[2]]
        best, witness, nodes, exhausted = _combine_pieces(g, m, pieces, best, witness, budget - searched)
        searched += nodes

    if witness is None and floor is None:
        best = g.order - m
    logger.info("min_boundary m=%d: %d (exact=%s, %d nodes)", m, best, not exhausted, searched)
    return BoundaryResult(best, witness, not exhausted, searched)


# ---------------------------------------------------------------------------
# pair bound and boundary floor


def pair_boundary_check(
    g: Graph, k: Optional[int] = None, l: Optional[int] = None, lemma_id: str = "lem-3.1"
) -> LemmaVerdict:
    """Every pair u != v has |N({u, v})| >= 2k - 2 - l, given cn(G) <= 2."""
    k = k if k is not None else g.regularity
    if k is None:
        raise GraphError("the pair bound needs a regular graph")
    l = l if l is not None else l_max(g)
    bound = 2 * k - 2 - l
    pairs = g.order * (g.order - 1) // 2
    cn = cn_max(g)
    if cn > 2:
        return LemmaVerdict(
            id=lemma_id, status=Status.INAPPLICABLE, bound=bound, detail=f"cn(G) = {cn} > 2"
        )
    pair = first_pair_below(g, bound, include_adjacent=True)
    if pair is not None:
        return LemmaVerdict(
            id=lemma_id,
            status=Status.VIOLATED,
            bound=bound,
            witness=list(pair),
            searched=pairs,
            detail=f"|N({{{pair[0]}, {pair[1]}}})| < {bound}",
        )
    return LemmaVerdict(
        id=lemma_id, status=Status.HOLDS, bound=bound, searched=pairs, detail=f"k={k}, l={l}"
    )


def _floor_visitor(g: Graph, bound: int, cap: int):
    hits: List[VertexSet] = []

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        b = boundary.bit_count()
        if size >= 2 and b < bound:
            hits.append(current)
            return Step.PRUNE
        if b - (cap - size) >= bound:
            return Step.PRUNE
        return Step.EXTEND

    return visit, hits, []


def boundary_floor_check(
    g: Graph,
    bound: int,
    max_size: int,
    min_size: int = 2,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    kappa: Optional[int] = None,
    lemma_id: str = "boundary-floor",
) -> LemmaVerdict:
    """
    Decide whether every U with ``min_size <= |U| <= max_size`` has |N(U)| >= ``bound``.

    A violating U always contains a violating connected component of size at
    least two or, when U is independent, a violating non-adjacent pair; so only
    pairs and connected sets are searched. A smallest violating connected set C
    leaves at most one isolated vertex outside C and N(C), or a component at
    least as large as C; unless ``max_size`` reaches ``order - bound`` this
    caps the connected search at (order - kappa) / 2.
    """
    if min_size not in (1, 2):
        raise GraphError("the floor check covers sets from size 1 or 2 upward")
    detail = f"every U with {min_size} <= |U| <= {max_size} has |N(U)| >= {bound}"
    if max_size < min_size:
        return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=bound, detail=detail + " (vacuous)")

    if min_size == 1:
        low = [v for v in range(g.order) if g.degrees[v] < bound]
        if low:
            return LemmaVerdict(
                id=lemma_id, status=Status.VIOLATED, bound=bound, witness=[low[0]], searched=g.order, detail=detail
            )
    if max_size < 2:
        return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=bound, searched=g.order, detail=detail)

    pairs = g.order * (g.order - 1) // 2
    pair = first_pair_below(g, bound, include_adjacent=False)
    if pair is not None:
        return LemmaVerdict(
            id=lemma_id, status=Status.VIOLATED, bound=bound, witness=list(pair), searched=pairs, detail=detail
        )

    if max_size >= g.order - bound:
        cap = max_size
    else:
        cap = min(max_size, (g.order - _connectivity(g, kappa, threads)) // 2)
    if cap < 2:
        return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=bound, searched=pairs, detail=detail)

    scan = first_violation(g, cap, _floor_visitor, (bound, cap), budget, threads)
    detail += f"; connected sets searched up to size {cap}"
    searched = pairs + scan.searched
    if scan.witness is not None:
        return LemmaVerdict(
            id=lemma_id, status=Status.VIOLATED, bound=bound, witness=members(scan.witness), searched=searched, detail=detail
        )
    if scan.exhausted:
        logger.warning("%s: budget of %d nodes exhausted", lemma_id, budget)
        return LemmaVerdict(id=lemma_id, status=Status.BUDGET_EXHAUSTED, bound=bound, searched=searched, detail=detail)
    return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=bound, searched=searched, detail=detail)


def _floor_visitor_sized(g: Graph, bound: int, min_size: int):
    hits: List[VertexSet] = []

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        if size >= min_size and boundary.bit_count() < bound:
            hits.append(current)
            return Step.PRUNE
        return Step.EXTEND

    return visit, hits, []


def boundary_connectivity_check(
    g: Graph,
    kappa: Optional[int] = None,
    samples: int = 200,
    exhaustive_max_size: int = 3,
    exhaustive_max_order: int = 60,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    lemma_id: str = "lem-3.3",
) -> LemmaVerdict:
    """Connected U with |V - U| >= kappa has at least kappa outside neighbors."""
    kappa = _connectivity(g, kappa, threads)
    detail = f"{samples} random connected sets"
    room = g.order - kappa
    searched = 0
    if room >= 1:
        rng = random.Random(seed)
        rows = g.rows
        for _ in range(samples):
            target = rng.randint(1, room)
            current = bit(rng.randrange(g.order))
            boundary = neighborhood(g, current)
            while current.bit_count() < target and boundary:
                w = rng.choice(members(boundary))
                current |= bit(w)
                boundary = (boundary | rows[w]) & ~current
            searched += 1
            if boundary.bit_count() < kappa:
                return LemmaVerdict(
                    id=lemma_id, status=Status.VIOLATED, bound=kappa, witness=members(current), searched=searched, detail=detail
                )

    if g.order <= exhaustive_max_order and room >= 1:
        cap = min(exhaustive_max_size, room)
        scan = first_violation(g, cap, _floor_visitor_sized, (kappa, 1), budget, threads)
        searched += scan.searched
        detail += f", every connected set up to size {cap}"
        if scan.witness is not None:
            return LemmaVerdict(
                id=lemma_id, status=Status.VIOLATED, bound=kappa, witness=members(scan.witness), searched=searched, detail=detail
            )
        if scan.exhausted:
            return LemmaVerdict(id=lemma_id, status=Status.BUDGET_EXHAUSTED, bound=kappa, searched=searched, detail=detail)
    return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=kappa, searched=searched, detail=detail)


# ---------------------------------------------------------------------------
# extra connectivity


def is_extra_cut(g: Graph, f: VertexSet, h: int) -> bool:
    """True iff G - f is disconnected and every component has at least h + 1 vertices."""
    parts = components(g, f)
    return len(parts) >= 2 and all(c.bit_count() >= h + 1 for c in parts)


def _extra_cut_chunk(roots: List[int], g: Graph, h: int, cap: int, budget: int):
    best, found = g.order + 1, None
    full = g.full

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        nonlocal best, found
        b = boundary.bit_count()
        if size >= h + 1 and b < best and full & ~current & ~boundary and is_extra_cut(g, boundary, h):
            best, found = b, current
        if b - (cap - size) >= best:
            return Step.PRUNE
        return Step.EXTEND

    walk = walk_roots(g, roots, cap, visit, budget)
    return best, found, walk.nodes, walk.exhausted


def kappa_h_upper(
    g: Graph,
    h: int,
    size_cap: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ExtraCutBound:
    """
    Smallest N(C) over connected C with h+1 <= |C| <= size_cap that is an
    h-extra cut. An upper bound on kappa_h; ``value`` is None when no set in
    range qualifies.
    """
    if h < 0:
        raise GraphError("h must be non-negative")
    cap = size_cap if size_cap is not None else 2 * h + 2
    if cap < h + 1:
        raise GraphError(f"size cap {cap} is below h + 1 = {h + 1}")

    parts = run_chunks(_extra_cut_chunk, deal(list(range(g.order)), threads), threads, g, h, cap, budget)
    searched = sum(p[2] for p in parts)
    exhausted = any(p[3] for p in parts) or searched > budget
    found = [(b, lex_key(c), c) for b, c, _, _ in parts if c is not None]
    if not found:
        logger.info("kappa_%d upper: no extra cut among connected sets up to size %d", h, cap)
        return ExtraCutBound(None, None, None, searched, exhausted)
    value, _, component = min(found)
    cut = neighborhood(g, component)
    logger.info("kappa_%d upper: %d (%d nodes)", h, value, searched)
    return ExtraCutBound(value, cut, component, searched, exhausted)


def kappa_h_exact(
    g: Graph,
    h: int,
    budget: int = DEFAULT_BUDGET,
    size_cap: Optional[int] = None,
    threads: int = 1,
    kappa: Optional[int] = None,
) -> ExtraCutValue:
    """
    Certify kappa_h by brute force below the constructive upper bound.

    Every set F with kappa <= |F| < upper is tried when the number of such
    sets fits in ``budget``; otherwise the upper bound is returned with
    ``exact`` False.
    """
    upper = kappa_h_upper(g, h, size_cap, budget, threads)
    kappa = _connectivity(g, kappa, threads)
    top = upper.value - 1 if upper.value is not None else g.order - 2 * (h + 1)
    sizes = range(kappa, top + 1)
    total = sum(comb(g.order, s) for s in sizes)
    if total > budget:
        logger.info("kappa_%d: %d subsets exceed the budget, keeping the upper bound", h, total)
        return ExtraCutValue(
            upper.value, False, upper.value, upper.cut, upper.searched, "upper-bound", upper.exhausted
        )

    searched = upper.searched
    for s in sizes:
        for f in combinations(range(g.order), s):
            searched += 1
            mask = vertex_set(f)
            if is_extra_cut(g, mask, h):
                return ExtraCutValue(s, True, upper.value, mask, searched, "brute-force", upper.exhausted)
    return ExtraCutValue(upper.value, True, upper.value, upper.cut, searched, "brute-force", upper.exhausted)


# ---------------------------------------------------------------------------
# cut structure


def is_four_cycle(g: Graph, c: VertexSet) -> bool:
    return c.bit_count() == 4 and all((g.rows[v] & c).bit_count() == 2 for v in iter_members(c)) and len(
        components(g, g.full & ~c)
    ) == 1


def _classify_cut(
    g: Graph, cut: VertexSet, parts: List[VertexSet], bound: int, allow_edge: bool, allow_four_cycles: bool
) -> str:
    """'ok', 'exception' or 'violation' for a disconnecting cut of size <= bound."""
    size = cut.bit_count()
    if len(parts) == 2:
        small = min(c.bit_count() for c in parts)
        if small == 1:
            return "ok"
        if allow_edge and small == 2 and size == bound:
            return "ok"
        if allow_four_cycles and size in (4, 5) and any(is_four_cycle(g, c) for c in parts):
            return "exception"
    return "violation"


def _cut_visitor(g: Graph, bound: int, cap: int, allow_edge: bool, allow_four_cycles: bool):
    hits: List[VertexSet] = []
    exceptions: List[VertexSet] = []
    full = g.full

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        b = boundary.bit_count()
        if size >= 2 and b <= bound and full & ~current & ~boundary:
            kind = _classify_cut(g, boundary, components(g, boundary), bound, allow_edge, allow_four_cycles)
            if kind == "violation":
                hits.append(current)
                return Step.PRUNE
            if kind == "exception":
                exceptions.append(current)
        if b - (cap - size) > bound:
            return Step.PRUNE
        return Step.EXTEND

    return visit, hits, exceptions


def cut_structure_scan(
    g: Graph,
    bound: int,
    small_side_cap: int = 8,
    allow_edge_at_bound: bool = False,
    allow_four_cycles: bool = False,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    kappa: Optional[int] = None,
    lemma_id: str = "cut-structure",
) -> LemmaVerdict:
    """
    Small-side consequence of a cut-structure lemma at ``bound``.

    For every connected C with 2 <= |C| <= cap, |N(C)| <= bound and vertices
    left over, C is a violation unless it is an edge at exactly ``bound``
    whose removal leaves two components (``allow_edge_at_bound``). Splits
    leaving an induced 4-cycle at |N(C)| in {4, 5} are recorded as exceptions
    when ``allow_four_cycles`` is set. cap = min((order - kappa) // 2,
    small_side_cap).
    """
    kappa = _connectivity(g, kappa, threads)
    cap = min((g.order - kappa) // 2, small_side_cap)
    detail = f"connected small sides up to size {cap} with |N(C)| <= {bound}"
    if cap < 2:
        return LemmaVerdict(id=lemma_id, status=Status.HOLDS, bound=bound, detail=detail + " (vacuous)")

    scan = first_violation(
        g, cap, _cut_visitor, (bound, cap, allow_edge_at_bound, allow_four_cycles), budget, threads
    )
    exceptions = [members(c) for c in scan.exceptions]
    if scan.witness is not None:
        return LemmaVerdict(
            id=lemma_id,
            status=Status.VIOLATED,
            bound=bound,
            witness=members(scan.witness),
            searched=scan.searched,
            detail=detail,
            exceptions=exceptions,
        )
    status = Status.BUDGET_EXHAUSTED if scan.exhausted else Status.HOLDS
    return LemmaVerdict(
        id=lemma_id, status=status, bound=bound, searched=scan.searched, detail=detail, exceptions=exceptions
    )


def cut_structure_exhaustive(
    g: Graph,
    bound: int,
    allow_edge_at_bound: bool = False,
    allow_four_cycles: bool = False,
    budget: int = DEFAULT_BUDGET,
    kappa: Optional[int] = None,
    lemma_id: str = "cut-structure/exhaustive",
) -> LemmaVerdict:
    """
    Every vertex cut F with kappa <= |F| <= bound leaves exactly two
    components, the smaller one trivial (or an edge at the bound, or an
    induced 4-cycle exception). The witness of a violation is F itself.
    """
    kappa = _connectivity(g, kappa, 1)
    sizes = range(kappa, min(bound, g.order - 2) + 1)
    total = sum(comb(g.order, s) for s in sizes)
    detail = f"every cut of size {kappa}..{bound}"
    if total > budget:
        return LemmaVerdict(id=lemma_id, status=Status.BUDGET_EXHAUSTED, bound=bound, detail=detail)

    exceptions: List[List[int]] = []
    searched = 0
    for s in sizes:
        for f in combinations(range(g.order), s):
            searched += 1
            cut = vertex_set(f)
            parts = components(g, cut)
            if len(parts) < 2:
                continue
            kind = _classify_cut(g, cut, parts, bound, allow_edge_at_bound, allow_four_cycles)
            if kind == "violation":
                return LemmaVerdict(
                    id=lemma_id,
                    status=Status.VIOLATED,
                    bound=bound,
                    witness=list(f),
                    searched=searched,
                    detail=detail,
                    exceptions=exceptions,
                )
            if kind == "exception":
                exceptions.append(list(f))
    return LemmaVerdict(
        id=lemma_id, status=Status.HOLDS, bound=bound, searched=searched, detail=detail, exceptions=exceptions
    )


# ---------------------------------------------------------------------------
# report


def analyze_graph(
    g: Graph,
    family: Optional[str] = None,
    n: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    kappa_h_size_cap: Optional[int] = None,
    compute_tp: bool = True,
) -> AnalysisReport:
    """Every parameter of one graph: order, k, kappa, girth, cn, l, kappa_1 and t_p."""
    if not is_connected(g):
        raise GraphError("analysis needs a connected graph")
    kappa = vertex_connectivity(g, threads)
    shortest = girth(g)
    notes: List[str] = []
    incomplete: List[str] = []

    kappa1 = kappa_h_exact(g, 1, budget, kappa_h_size_cap, threads, kappa)
    notes.append(f"kappa1 source: {kappa1.source}")
    if kappa1.upper_exhausted:
        incomplete.append("kappa1_upper")
    if kappa1.upper is None:
        notes.append("no 1-extra cut among small connected sets")

    tp_value = None
    if compute_tp:
        try:
            result = t_p(g, kappa=kappa, budget=budget, threads=threads)
            tp_value = result.value
            if result.flagged:
                notes.append("not 1/1-diagnosable; t_p reported as 0")
        except BudgetExceededError as exc:
            incomplete.append("tp")
            notes.append(str(exc))

    report = AnalysisReport(
        family=family,
        n=n,
        order=g.order,
        k=g.regularity,
        kappa=kappa,
        girth=None if shortest == math.inf else int(shortest),
        cn_max=cn_max(g) if g.order >= 2 else 0,
        l_max=l_max(g) if g.edge_count else 0,
        kappa1_upper=kappa1.upper,
        kappa1=kappa1.value if kappa1.exact else None,
        kappa1_exact=kappa1.exact,
        tp=tp_value,
        notes=notes,
        incomplete=incomplete,
    )
    return report
