import pytest
from pydantic import ValidationError

from tests.helpers import (
    boundary_size,
    brute_floor_holds,
    brute_kappa_h,
    brute_min_boundary,
    complete,
    cycle,
    family_graph,
    petersen,
)
from topodiag.analysis import (
    analyze_graph,
    boundary_connectivity_check,
    boundary_floor_check,
    cut_structure_exhaustive,
    cut_structure_scan,
    is_extra_cut,
    is_four_cycle,
    kappa_h_exact,
    kappa_h_upper,
    min_boundary,
    pair_boundary_check,
)
from topodiag.errors import GraphError
from topodiag.graph import Graph, members, neighborhood, vertex_set
from topodiag.reports import AnalysisReport, Status


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_min_boundary_matches_brute_force(m, hypercube3, ag4):
    for g in (hypercube3, petersen(), ag4, cycle(9)):
        result = min_boundary(g, m)
        assert result.exact
        assert result.value == brute_min_boundary(g, m)
        if result.witness is not None:
            assert result.witness.bit_count() == m
            assert neighborhood(g, result.witness).bit_count() == result.value


def test_min_boundary_disconnected_optimum():
    # two leaves of a star share their only neighbor
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    result = min_boundary(g, 2)
    assert result.value == brute_min_boundary(g, 2) == 1
    assert members(result.witness) == [1, 2]


def test_min_boundary_floor_mode(hypercube3):
    above = min_boundary(hypercube3, 2, floor=4)
    assert above.value == 4 and above.witness is None
    below = min_boundary(hypercube3, 2, floor=5)
    assert below.value == 4 and below.witness is not None


def test_min_boundary_thread_count_does_not_change_answer(ag4):
    assert min_boundary(ag4, 4, threads=2).value == min_boundary(ag4, 4).value


def test_min_boundary_budget_is_reported(ag4):
    result = min_boundary(ag4, 5, budget=3)
    assert not result.exact
    assert result.value >= brute_min_boundary(ag4, 5)


def test_min_boundary_rejects_bad_size(hypercube3):
    with pytest.raises(GraphError):
        min_boundary(hypercube3, 8)


def test_pair_boundary_check(ag5):
    verdict = pair_boundary_check(ag5, lemma_id="lem-3.1")
    assert verdict.status is Status.HOLDS
    assert verdict.bound == 9


def test_pair_boundary_check_needs_small_cn():
    verdict = pair_boundary_check(complete(6))
    assert verdict.status is Status.INAPPLICABLE


@pytest.mark.parametrize(
    "bound, max_size",
    [(4, 3), (5, 3), (5, 5), (6, 4), (4, 6), (3, 7)],
)
def test_floor_check_matches_brute_force(bound, max_size, hypercube3, ag4):
    for g in (hypercube3, petersen(), ag4):
        verdict = boundary_floor_check(g, bound, max_size)
        assert verdict.holds == brute_floor_holds(g, bound, 2, min(max_size, g.order))
        if verdict.status is Status.VIOLATED:
            assert 2 <= len(verdict.witness) <= max_size
            assert boundary_size(g, verdict.witness) < bound


def test_floor_check_from_size_one(hypercube3):
    verdict = boundary_floor_check(hypercube3, 4, 2, min_size=1)
    assert verdict.status is Status.VIOLATED
    assert verdict.witness == [0]


def test_square_face_breaks_ag4_expansion(ag4):
    verdict = boundary_floor_check(ag4, 5, 7)
    assert verdict.status is Status.VIOLATED
    assert boundary_size(ag4, verdict.witness) < 5
    square = boundary_floor_check(ag4, 5, 4)
    assert len(square.witness) == 4
    assert boundary_size(ag4, square.witness) == 4


def test_floor_check_budget(an5):
    verdict = boundary_floor_check(an5, 5, 6, budget=10)
    assert verdict.status is Status.BUDGET_EXHAUSTED
    assert verdict.witness is None


def test_boundary_connectivity_holds(hypercube4, ag5):
    for g in (hypercube4, ag5, petersen()):
        assert boundary_connectivity_check(g, samples=50).holds


def test_is_extra_cut():
    g = cycle(8)
    assert is_extra_cut(g, vertex_set([0, 4]), 1)
    assert not is_extra_cut(g, vertex_set([0, 2]), 1)
    assert not is_extra_cut(g, vertex_set([0, 1]), 1)


def test_kappa_h_upper_on_cycle():
    bound = kappa_h_upper(cycle(8), 1)
    assert bound.value == 2
    assert is_extra_cut(cycle(8), bound.cut, 1)


def test_kappa_h_upper_without_candidates():
    bound = kappa_h_upper(complete(6), 1)
    assert bound.value is None and bound.cut is None


@pytest.mark.parametrize(
    "name, factory, expected",
    [
        ("cycle8", lambda: cycle(8), 2),
        ("hypercube3", lambda: family_graph("hypercube", 3), 4),
        ("petersen", petersen, None),
    ],
)
def test_kappa1_exact(name, factory, expected):
    g = factory()
    result = kappa_h_exact(g, 1)
    assert result.exact and result.source == "brute-force"
    truth = brute_kappa_h(g, 1)
    assert result.value == truth
    if expected is not None:
        assert truth == expected


@pytest.mark.parametrize("family, options", [("ag", {}), ("gamma", {"tree": "star"}), ("twotree", {})])
def test_kappa1_exact_on_four_symbol_families(family, options):
    g = family_graph(family, 4, **options)
    result = kappa_h_exact(g, 1)
    assert result.exact
    assert result.value == brute_kappa_h(g, 1)
    assert result.upper >= result.value


def test_kappa1_budget_falls_back_to_upper_bound(ag5):
    result = kappa_h_exact(ag5, 1, budget=1000)
    assert not result.exact
    assert result.source == "upper-bound"
    assert result.value == result.upper == 9


def test_is_four_cycle():
    square = cycle(4)
    assert is_four_cycle(square, square.full)
    assert not is_four_cycle(complete(4), complete(4).full)


def test_cut_scan_on_cycle():
    g = cycle(8)
    strict = cut_structure_scan(g, 2)
    assert strict.status is Status.VIOLATED
    assert strict.witness == [0, 1]
    assert cut_structure_scan(g, 1).holds


def test_cut_exhaustive_on_cycle():
    g = cycle(8)
    strict = cut_structure_exhaustive(g, 2)
    assert strict.witness == [0, 3]
    with_edges = cut_structure_exhaustive(g, 2, allow_edge_at_bound=True)
    assert with_edges.witness == [0, 4]


def test_hypercube_cuts_leave_one_trivial_component(hypercube4):
    assert cut_structure_scan(hypercube4, 5).holds
    assert cut_structure_exhaustive(hypercube4, 5).holds
    assert cut_structure_exhaustive(hypercube4, 6).status is Status.VIOLATED


def test_cuboctahedron_square_cuts_are_exceptions(twotree4):
    plain = cut_structure_exhaustive(twotree4, 5, allow_edge_at_bound=True)
    assert plain.status is Status.VIOLATED
    relaxed = cut_structure_exhaustive(twotree4, 5, allow_edge_at_bound=True, allow_four_cycles=True)
    assert relaxed.holds
    assert relaxed.exceptions
    for cut in relaxed.exceptions:
        assert len(cut) in (4, 5)


def test_analyze_graph_on_hypercube(hypercube3):
    report = analyze_graph(hypercube3, family="BC_HYPERCUBE", n=3)
    assert (report.order, report.k, report.kappa, report.girth) == (8, 3, 3, 4)
    assert (report.cn_max, report.l_max) == (2, 0)
    assert report.kappa1_exact
    assert report.kappa1 == 4
    assert report.tp == 3
    assert not report.exhausted


def test_kappa1_needs_the_exact_flag(hypercube3):
    fields = analyze_graph(hypercube3).model_dump()
    assert fields["kappa1"] == 4
    with pytest.raises(ValidationError):
        AnalysisReport.model_validate({**fields, "kappa1_exact": False})
    assert AnalysisReport.model_validate({**fields, "kappa1": None, "kappa1_exact": True}).kappa1 is None


def test_analyze_graph_on_a_tree_reports_no_girth():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    report = analyze_graph(g, compute_tp=False)
    assert report.girth is None
    assert report.kappa == 1


def test_analyze_graph_needs_connected_graph():
    with pytest.raises(GraphError):
        analyze_graph(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_splitstar_parameters(splitstar4):
    report = analyze_graph(splitstar4, compute_tp=False)
    assert (report.k, report.kappa, report.cn_max, report.l_max) == (5, 5, 2, 1)
