"""
Exact t/t-diagnosability and pessimistic diagnosability t_p.

G fails to be t/t-diagnosable exactly when one of these holds:

* two non-adjacent vertices u, v have |N({u, v})| <= t - 1 (removing that
  neighborhood isolates both);
* some connected C with |C| >= 2 has |N(C)| <= t - 1 and
  |C| <= 2(t - |N(C)|) (removing N(C) leaves C as an undersized component);
* |V| <= 2t, where S = {} already leaves G itself undersized.

When |V| > 2t every such C also leaves vertices outside C and N(C), so
|N(C)| >= kappa and |C| <= 2(t - kappa), which keeps the search tiny near t_p.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Optional

from topodiag.errors import BudgetExceededError, DisconnectedGraphError, GraphError
from topodiag.graph import Graph, VertexSet, components, is_connected, members, neighborhood, vertex_connectivity, vertex_set
from topodiag.reports import DiagnosisVerdict, as_list
from topodiag.search import Step, first_pair_below, first_violation
from topodiag.settings import get_settings

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9


@dataclass
class TpResult:
    value: int
    failing: Optional[DiagnosisVerdict]
    flagged: bool


def _small_component_visitor(g: Graph, t: int, s_max: int):
    hits: List[VertexSet] = []

    def visit(current: VertexSet, boundary: VertexSet, size: int) -> Step:
        b = boundary.bit_count()
        if size >= 2 and b <= t - 1 and size <= 2 * (t - b):
            hits.append(current)
            return Step.PRUNE
        # fewest vertices still to add before a descendant could qualify
        need = max(0, b - t + 1, size - 2 * t + 2 * b)
        if need > s_max - size:
            return Step.PRUNE
        return Step.EXTEND

    return visit, hits, []


def is_tt_diagnosable(
    g: Graph,
    t: int,
    kappa: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> DiagnosisVerdict:
    """Decide t/t-diagnosability; a failing verdict carries the violating S and component."""
    if t < 1:
        raise GraphError(f"t must be at least 1, got {t}")
    if not is_connected(g):
        raise DisconnectedGraphError("t/t-diagnosability needs a connected graph")

    pair = first_pair_below(g, t, include_adjacent=False)
    if pair is not None:
        twins = vertex_set(pair)
        s = neighborhood(g, twins)
        return DiagnosisVerdict(
            t=t,
            diagnosable=False,
            violation_kind="twin_trivial",
            witness_S=members(s),
            witness_component=list(pair),
            p=s.bit_count(),
        )

    if 2 <= g.order <= 2 * t:
        return DiagnosisVerdict(
            t=t, diagnosable=False, violation_kind="small_component", witness_S=[], witness_component=members(g.full), p=0
        )

    kappa = kappa if kappa is not None else vertex_connectivity(g, threads)
    s_max = 2 * (t - kappa)
    if s_max < 2:
        return DiagnosisVerdict(t=t, diagnosable=True)

    scan = first_violation(g, s_max, _small_component_visitor, (t, s_max), budget, threads)
    if scan.witness is not None:
        s = neighborhood(g, scan.witness)
        return DiagnosisVerdict(
            t=t,
            diagnosable=False,
            violation_kind="small_component",
            witness_S=members(s),
            witness_component=as_list(scan.witness),
            p=s.bit_count(),
            searched=scan.searched,
        )
    if scan.exhausted:
        raise BudgetExceededError(budget, scan.searched, f"t/t-diagnosability search at t={t}")
    return DiagnosisVerdict(t=t, diagnosable=True, searched=scan.searched)


def t_p(
    g: Graph,
    kappa: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> TpResult:
    """
    Largest t with G t/t-diagnosable, scanning upward from kappa.

    Graphs that are not even 1/1-diagnosable get 0 and are flagged.
    """
    if g.order < 2:
        raise GraphError("t_p needs at least two vertices")
    if not is_connected(g):
        raise DisconnectedGraphError("t_p needs a connected graph")
    kappa = kappa if kappa is not None else vertex_connectivity(g, threads)

    def check(t: int) -> DiagnosisVerdict:
        return is_tt_diagnosable(g, t, kappa, budget, threads)

    t = max(1, kappa)
    if not check(t).diagnosable:
        logger.info("not %d/%d-diagnosable; restarting the scan at t=1", t, t)
        t = 1
        first = check(1)
        if not first.diagnosable:
            return TpResult(0, first, True)

    while True:
        verdict = check(t + 1)
        if not verdict.diagnosable:
            logger.info("t_p = %d", t)
            return TpResult(t, verdict, False)
        t += 1


def naive_tt_oracle(g: Graph, t: int, budget: Optional[int] = None) -> bool:
    """
    t/t-diagnosability straight from the definition, over every S with |S| <= t - 1.

    ``budget`` caps the number of subsets tried; it defaults to the configured
    oracle budget.
    """
    budget = budget if budget is not None else get_settings().oracle_budget
    total = sum(comb(g.order, p) for p in range(min(t, g.order + 1)))
    if total > budget:
        raise BudgetExceededError(budget, total, "naive t/t oracle")
    for p in range(min(t, g.order + 1)):
        need = 2 * (t - p) + 1
        for chosen in combinations(range(g.order), p):
            parts = components(g, vertex_set(chosen))
            trivial = sum(1 for c in parts if c.bit_count() == 1)
            if trivial > 1 or any(1 < c.bit_count() < need for c in parts):
                return False
    return True
