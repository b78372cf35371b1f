import pytest

from tests.helpers import complete, petersen
from topodiag.errors import BudgetExceededError, DisconnectedGraphError, GraphError
from topodiag.generators import spec_from_options
from topodiag.reports import Status
from topodiag.theorem import check_conditions, check_spec, family_table, load_corollaries, measure_prediction


def test_four_regular_graph_is_inapplicable(ag4):
    report = check_conditions(ag4, instance="AG_4")
    assert not report.applicable
    assert not report.certified
    assert report.k == 4
    assert report.predicted == 2 * 4 - 2 - report.l
    assert report.cond1 is None


def test_complete_graph_fails_the_conditions():
    report = check_conditions(complete(6))
    assert report.applicable
    assert not report.certified
    assert report.cond1.status is Status.VIOLATED and report.cond1.witness == []
    assert report.cond2.status is Status.VIOLATED and report.cond2.witness == [0, 1]
    assert report.cond3.status is Status.VIOLATED and report.cond3.witness == [0, 1, 2]
    assert report.cond4.holds
    assert report.predicted == 4
    assert report.tp_computed == 2
    assert report.kappa1_upper is None
    assert report.kappa1_source == "none"


def test_regularity_is_measured_not_trusted(ag4):
    with pytest.raises(GraphError):
        check_conditions(ag4, expected_k=5)


def test_hypotheses_need_connected_regular_graphs():
    from topodiag.graph import Graph

    with pytest.raises(GraphError):
        check_conditions(Graph.from_edges(3, [(0, 1), (1, 2)]))
    with pytest.raises(DisconnectedGraphError):
        check_conditions(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_petersen_is_below_the_degree_threshold():
    assert not check_conditions(petersen()).applicable


@pytest.mark.slow
def test_splitstar4_is_certified():
    report = check_spec(spec_from_options("splitstar", 4))
    assert report.certified
    assert (report.k, report.l) == (5, 1)
    assert report.predicted == 7
    assert report.tp_computed == 7
    assert report.kappa1_upper == 7
    assert report.kappa1_source == "theorem"


@pytest.mark.slow
@pytest.mark.parametrize(
    "family, n, options, predicted",
    [
        ("ag", 5, {}, 9),
        ("an", 6, {}, 7),
        ("hypercube", 5, {}, 8),
        ("qnk", 5, {"k": 2}, 8),
        ("qnk", 3, {"k": 3}, 9),
        ("qnk", 3, {"k": 4}, 10),
        ("gamma", 6, {"tree": "star"}, 8),
        ("gamma", 6, {"tree": "path"}, 8),
        ("twotree", 5, {}, 9),
        ("bp", 5, {}, 8),
    ],
)
def test_family_members_are_certified(family, n, options, predicted):
    report = check_spec(spec_from_options(family, n, **options), threads=4)
    assert report.certified, report.notes
    assert report.predicted == predicted
    assert report.tp_computed == predicted
    assert report.kappa1_upper == predicted


def test_family_table_defaults():
    rows = {row.id: row for row in family_table()}
    expected = {
        "ag": 9,
        "an": 7,
        "bc-hypercube": 8,
        "bc-mobius": 8,
        "qnk-2": 8,
        "qnk-3": 9,
        "qnk-4": 10,
        "splitstar": 7,
        "gamma-star": 8,
        "gamma-path": 8,
        "twotree-star": 9,
        "twotree-path": 9,
        "bp": 8,
    }
    assert {key: row.value for key, row in rows.items()} == expected
    assert all(row.asserted for row in rows.values())


def test_family_table_flags_rows_below_threshold():
    rows = family_table({"bp": [4, 5], "gamma-star": [6]})
    assert [(row.id, row.n, row.value, row.asserted) for row in rows] == [
        ("gamma-star", 6, 8, True),
        ("bp", 4, 6, False),
        ("bp", 5, 8, True),
    ]


def test_corollary_formula_text():
    ag = next(c for c in load_corollaries() if c.id == "ag")
    assert ag.formula_text == "4n - 11"
    assert ag.value(5) == 9


def test_measure_prediction_on_splitstar():
    row = next(r for r in family_table() if r.id == "splitstar")
    measured = measure_prediction(row)
    assert measured.tp_measured == 7
    assert measured.kappa1_upper == 7
    assert measured.match


def test_measure_prediction_refuses_an_exhausted_upper_bound():
    row = next(r for r in family_table() if r.id == "splitstar")
    with pytest.raises(BudgetExceededError):
        measure_prediction(row, budget=250)
