"""
Checks the four conditions under which t_p(G) = 2k - 2 - l = kappa_1(G) for a
k-regular k-connected graph with k >= 5, and evaluates the per-family
predictions that follow from it.

The check is a small LangGraph workflow: one node per hypothesis/condition,
each writing its verdict into the shared state, then a conclusion node that
assembles the :class:`~topodiag.reports.TheoremReport`.
"""

import logging
from typing import Annotated, Dict, Iterable, List, Mapping, Optional, Tuple

from langgraph.graph import END, StateGraph
from pydantic import BaseModel, ConfigDict
from typing_extensions import TypedDict

from topodiag.analysis import (
    DEFAULT_BUDGET,
    boundary_floor_check,
    cut_structure_exhaustive,
    cut_structure_scan,
    kappa_h_upper,
)
from topodiag.diagnosability import t_p
from topodiag.errors import BudgetExceededError, DisconnectedGraphError, GraphError
from topodiag.generators import TopologySpec, build, expected_degree, spec_from_options
from topodiag.graph import Graph, common_neighbor_argmax, is_connected, l_max, vertex_connectivity
from topodiag.reports import FamilyPrediction, LemmaVerdict, Status, TheoremReport
from topodiag.settings import _load_yaml

logger = logging.getLogger(__name__)

MIN_REGULARITY = 5


class TheoremState(TypedDict):
    graph: Annotated[Graph, "The graph under test"]
    instance: Annotated[str, "Display name of the graph"]
    expected_k: Annotated[Optional[int], "Regularity the caller expects, if known"]
    budget: Annotated[int, "Node budget per search"]
    threads: Annotated[int, "Worker processes per search"]
    small_side_cap: Annotated[int, "Largest small side scanned for condition (4)"]
    cut_exhaustive_max_order: Annotated[int, "Orders up to which condition (4) tries every cut"]
    compute_extras: Annotated[bool, "Whether to measure t_p and the kappa_1 upper bound"]
    k: Annotated[Optional[int], "Measured regularity"]
    l: Annotated[Optional[int], "Measured l(G)"]
    kappa: Annotated[Optional[int], "Measured vertex connectivity"]
    applicable: Annotated[bool, "Whether the hypotheses hold"]
    verdicts: Annotated[Dict[str, LemmaVerdict], "Verdict per condition name"]
    notes: Annotated[List[str], "Free-form remarks for the report"]
    report: Annotated[Optional[TheoremReport], "The finished report"]


def _targets(state: TheoremState) -> Tuple[int, int]:
    """(bound, max_size) of condition (3): 2k - 2 - l and 2(2k - 4 - l)."""
    k, l = state["k"], state["l"]
    return 2 * k - 2 - l, 2 * (2 * k - 4 - l)


def hypotheses(state: TheoremState) -> TheoremState:
    g = state["graph"]
    if not is_connected(g):
        raise DisconnectedGraphError("the theorem needs a connected graph")
    k = g.regularity
    if k is None:
        raise GraphError("the theorem needs a regular graph")
    expected = state["expected_k"]
    if expected is not None and expected != k:
        raise GraphError(f"{state['instance'] or 'graph'} is {k}-regular but {expected} was expected")

    l = l_max(g)
    kappa = vertex_connectivity(g, state["threads"])
    notes = list(state["notes"])
    applicable = True
    if k < MIN_REGULARITY:
        notes.append(f"k = {k} < {MIN_REGULARITY}: theorem does not apply")
        applicable = False
    elif kappa < k:
        notes.append(f"kappa = {kappa} < k = {k}: graph is not maximally connected")
        applicable = False

    update = {"k": k, "l": l, "kappa": kappa, "applicable": applicable, "notes": notes}
    if not applicable:
        update["report"] = TheoremReport(
            instance=state["instance"],
            applicable=False,
            k=k,
            l=l,
            N=g.order,
            predicted=2 * k - 2 - l,
            notes=notes,
        )
    return {**state, **update}


def route_after_hypotheses(state: TheoremState) -> str:
    return "continue" if state["applicable"] else "end"


def condition_1(state: TheoremState) -> TheoremState:
    g, k = state["graph"], state["k"]
    need = 4 * k - 2
    detail = f"N = {g.order}, 4k - 2 = {need}"
    if g.order >= need:
        verdict = LemmaVerdict(id="cond1", status=Status.HOLDS, bound=need, detail=detail)
    else:
        verdict = LemmaVerdict(id="cond1", status=Status.VIOLATED, bound=need, witness=[], detail=detail)
    return {**state, "verdicts": {**state["verdicts"], "cond1": verdict}}


def condition_2(state: TheoremState) -> TheoremState:
    u, v, cn = common_neighbor_argmax(state["graph"])
    detail = f"cn(G) = {cn}, attained at ({u}, {v})"
    if cn <= 2:
        verdict = LemmaVerdict(id="cond2", status=Status.HOLDS, bound=2, detail=detail)
    else:
        verdict = LemmaVerdict(id="cond2", status=Status.VIOLATED, bound=2, witness=[u, v], detail=detail)
    return {**state, "verdicts": {**state["verdicts"], "cond2": verdict}}


def condition_3(state: TheoremState) -> TheoremState:
    bound, max_size = _targets(state)
    verdict = boundary_floor_check(
        state["graph"],
        bound,
        max_size,
        budget=state["budget"],
        threads=state["threads"],
        kappa=state["kappa"],
        lemma_id="cond3",
    )
    notes = state["notes"]
    if verdict.status is Status.BUDGET_EXHAUSTED:
        notes = notes + [f"cond3 incomplete: budget exhausted for 2 <= |U| <= {max_size}"]
    return {**state, "verdicts": {**state["verdicts"], "cond3": verdict}, "notes": notes}


def condition_4(state: TheoremState) -> TheoremState:
    g = state["graph"]
    bound = 2 * state["k"] - 3 - state["l"]
    if g.order <= state["cut_exhaustive_max_order"]:
        verdict = cut_structure_exhaustive(g, bound, budget=state["budget"], kappa=state["kappa"], lemma_id="cond4")
    else:
        verdict = cut_structure_scan(
            g,
            bound,
            small_side_cap=state["small_side_cap"],
            budget=state["budget"],
            threads=state["threads"],
            kappa=state["kappa"],
            lemma_id="cond4",
        )
    notes = state["notes"]
    if verdict.status is Status.BUDGET_EXHAUSTED:
        notes = notes + [f"cond4 incomplete: budget exhausted at cut bound {bound}"]
    return {**state, "verdicts": {**state["verdicts"], "cond4": verdict}, "notes": notes}


def conclusion(state: TheoremState) -> TheoremState:
    g = state["graph"]
    verdicts = state["verdicts"]
    notes = list(state["notes"])
    predicted, _ = _targets(state)
    certified = all(verdicts[c].holds for c in ("cond1", "cond2", "cond3", "cond4"))

    tp_value: Optional[int] = None
    upper: Optional[int] = None
    if state["compute_extras"]:
        try:
            tp_value = t_p(g, kappa=state["kappa"], budget=state["budget"], threads=state["threads"]).value
        except BudgetExceededError as exc:
            notes.append(str(exc))
        bound = kappa_h_upper(g, 1, budget=state["budget"], threads=state["threads"])
        upper = bound.value
        if bound.exhausted:
            notes.append("kappa_1 upper bound search exhausted its budget")

    if certified and tp_value is not None and tp_value != predicted:
        logger.error("%s: conditions hold but measured t_p %d != %d", state["instance"], tp_value, predicted)
        notes.append(f"measured t_p = {tp_value} disagrees with the prediction {predicted}")
        certified = False

    if upper is None:
        source = "none"
    elif certified and upper == predicted:
        source = "theorem"
    else:
        source = "upper-bound"

    report = TheoremReport(
        instance=state["instance"],
        applicable=True,
        k=state["k"],
        l=state["l"],
        N=g.order,
        cond1=verdicts["cond1"],
        cond2=verdicts["cond2"],
        cond3=verdicts["cond3"],
        cond4=verdicts["cond4"],
        predicted=predicted,
        tp_computed=tp_value,
        kappa1_upper=upper,
        kappa1_source=source,
        certified=certified,
        notes=notes,
    )
    logger.info("%s: certified=%s predicted=%d", state["instance"], certified, predicted)
    return {**state, "notes": notes, "report": report}


def build_theorem_graph():
    """Compile the condition-checking workflow."""
    workflow = StateGraph(TheoremState)

    workflow.add_node("hypotheses", hypotheses)
    workflow.add_node("condition_1", condition_1)
    workflow.add_node("condition_2", condition_2)
    workflow.add_node("condition_3", condition_3)
    workflow.add_node("condition_4", condition_4)
    workflow.add_node("conclusion", conclusion)

    workflow.add_conditional_edges(
        "hypotheses",
        route_after_hypotheses,
        {"continue": "condition_1", "end": END},
    )
    workflow.add_edge("condition_1", "condition_2")
    workflow.add_edge("condition_2", "condition_3")
    workflow.add_edge("condition_3", "condition_4")
    workflow.add_edge("condition_4", "conclusion")
    workflow.add_edge("conclusion", END)

    workflow.set_entry_point("hypotheses")
    return workflow.compile()


def check_conditions(
    g: Graph,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    expected_k: Optional[int] = None,
    instance: str = "",
    small_side_cap: int = 8,
    cut_exhaustive_max_order: int = 24,
    compute_extras: bool = True,
) -> TheoremReport:
    """
    Verify conditions (1)-(4) on ``g`` and report the predicted t_p = kappa_1.

    Graphs with k < 5 or kappa < k come back inapplicable; a disconnected or
    non-regular graph, or one whose regularity differs from ``expected_k``,
    raises.
    """
    initial: TheoremState = {
        "graph": g,
        "instance": instance,
        "expected_k": expected_k,
        "budget": budget,
        "threads": threads,
        "small_side_cap": small_side_cap,
        "cut_exhaustive_max_order": cut_exhaustive_max_order,
        "compute_extras": compute_extras,
        "k": None,
        "l": None,
        "kappa": None,
        "applicable": False,
        "verdicts": {},
        "notes": [],
        "report": None,
    }
    final = build_theorem_graph().invoke(initial)
    return final["report"]


def check_spec(spec: TopologySpec, **options) -> TheoremReport:
    """:func:`check_conditions` on a family member, with its regularity checked against the family formula."""
    return check_conditions(build(spec), expected_k=expected_degree(spec), instance=spec.name, **options)


# ---------------------------------------------------------------------------
# family predictions


class Corollary(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    family: str
    k: Optional[int] = None
    tree: Optional[str] = None
    twotree: Optional[str] = None
    formula: Tuple[int, int]
    threshold: int
    table_n: int

    def value(self, n: int) -> int:
        a, b = self.formula
        return a * n + b

    @property
    def formula_text(self) -> str:
        a, b = self.formula
        sign = "+" if b >= 0 else "-"
        return f"{a}n {sign} {abs(b)}"

    def spec(self, n: int) -> TopologySpec:
        return spec_from_options(self.family, n, k=self.k, tree=self.tree, twotree=self.twotree)


def load_corollaries() -> List[Corollary]:
    return [Corollary(id=key, **row) for key, row in _load_yaml("corollaries.yaml").items()]


def family_table(ns: Optional[Mapping[str, Iterable[int]]] = None) -> List[FamilyPrediction]:
    """
    Formula values per corollary; ``ns`` maps corollary ids to the n values
    wanted (default: each row's ``table_n``). Rows below the corollary's
    threshold are kept with ``asserted`` False.
    """
    rows: List[FamilyPrediction] = []
    for corollary in load_corollaries():
        wanted = [corollary.table_n] if ns is None else list(ns.get(corollary.id, ()))
        for n in wanted:
            asserted = n >= corollary.threshold
            if not asserted:
                logger.info("%s at n=%d: formula not asserted below n=%d", corollary.id, n, corollary.threshold)
            rows.append(
                FamilyPrediction(
                    id=corollary.id,
                    family=corollary.family,
                    n=n,
                    k=corollary.k,
                    formula=corollary.formula_text,
                    value=corollary.value(n),
                    threshold=corollary.threshold,
                    asserted=asserted,
                )
            )
    return rows


def measure_prediction(
    prediction: FamilyPrediction, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> FamilyPrediction:
    """
    Fill in measured t_p and the kappa_1 upper bound for one table row.

    Raises BudgetExceededError when either search runs out of budget.
    """
    corollary = next(c for c in load_corollaries() if c.id == prediction.id)
    g = build(corollary.spec(prediction.n))
    measured = t_p(g, budget=budget, threads=threads).value
    bound = kappa_h_upper(g, 1, budget=budget, threads=threads)
    if bound.exhausted:
        raise BudgetExceededError(budget, bound.searched, f"kappa_1 upper bound search for {prediction.id}")
    upper = bound.value
    match = measured == prediction.value and upper == prediction.value
    return prediction.model_copy(update={"tp_measured": measured, "kappa1_upper": upper, "match": match})
