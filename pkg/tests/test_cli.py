import json
from typing import List

import pytest
from pydantic import TypeAdapter

from tests.helpers import complete
from topodiag import cli
from topodiag.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION, RunConfig, build_parser, main
from topodiag.edgelist import read_edgelist, write_edgelist
from topodiag.errors import SpecError
from topodiag.graph import Graph
from topodiag.reports import AnalysisReport, FamilyPrediction, LemmaVerdict, TheoremReport, TpReport
from topodiag.settings import get_settings
from topodiag.theorem import family_table


def _config(argv):
    return RunConfig.from_args(build_parser().parse_args(argv), get_settings())


def test_gen_writes_an_edge_list(tmp_path, capsys):
    out = tmp_path / "ag4.edgelist"
    assert main(["gen", "--family", "ag", "--n", "4", "--output", str(out)]) == EXIT_OK
    g = read_edgelist(out)
    assert (g.order, g.edge_count) == (12, 24)
    assert "AG_4" in capsys.readouterr().out


def test_gen_to_stdout(capsys):
    assert main(["gen", "--family", "qnk", "--n", "1", "--k", "5"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "5 5"
    assert "5 vertices" in captured.err


def test_invalid_family_exits_3(capsys):
    assert main(["gen", "--family", "petersen", "--n", "4"]) == EXIT_INVALID
    assert "error" in capsys.readouterr().err


def test_unknown_lemma_exits_3():
    assert main(["verify", "--lemma", "lem-0.0"]) == EXIT_INVALID


def test_verify_lemma_json(capsys):
    assert main(["verify", "--lemma", "exp-AN", "--n", "5", "--format", "json"]) == EXIT_OK
    [verdict] = json.loads(capsys.readouterr().out)
    assert verdict["id"] == "exp-AN"
    assert verdict["status"] == "holds"


def test_verify_lemma_violation_exits_1():
    assert main(["verify", "--lemma", "exp-AG", "--n", "4"]) == EXIT_VIOLATION


def test_verify_lemma_budget_exits_2():
    assert main(["verify", "--lemma", "exp-AN", "--n", "5", "--budget", "10"]) == EXIT_BUDGET


def test_verify_theorem_inapplicable_exits_0(capsys):
    assert main(["verify", "--theorem", "--family", "ag", "--n", "4"]) == EXIT_OK
    assert "inapplicable" in capsys.readouterr().out


def test_disconnected_input_exits_3(tmp_path):
    path = tmp_path / "split.edgelist"
    write_edgelist(Graph.from_edges(4, [(0, 1), (2, 3)]), path)
    assert main(["tp", "--input", str(path)]) == EXIT_INVALID


def test_tp_from_file(tmp_path, capsys, hypercube3):
    path = tmp_path / "q3.edgelist"
    write_edgelist(hypercube3, path)
    assert main(["tp", "--input", str(path), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["tp"] == 3


def test_analyze_text(capsys):
    assert main(["analyze", "--family", "hypercube", "--n", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "kappa:        3" in out
    assert "t_p:          3" in out


def test_json_output_does_not_depend_on_threads(tmp_path):
    outputs = []
    for threads in ("1", "2"):
        out = tmp_path / f"cut{threads}.json"
        code = main(
            ["verify", "--lemma", "cut-BC", "--n", "4", "--threads", threads, "--format", "json", "--output", str(out)]
        )
        assert code == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_environment_sets_default_budget(monkeypatch):
    monkeypatch.setenv("TOPODIAG_BUDGET", "77")
    get_settings.cache_clear()
    assert _config(["tp", "--family", "ag", "--n", "4"]).budget == 77
    assert _config(["tp", "--family", "ag", "--n", "4", "--budget", "5"]).budget == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--n", "4"],
        ["tp", "--family", "ag"],
        ["analyze"],
        ["tp", "--family", "ag", "--n", "4", "--input", "g.edgelist"],
        ["verify"],
        ["verify", "--lemma", "exp-AN", "--theorem"],
        ["verify", "--lemma", "exp-AN", "--family", "an"],
    ],
)
def test_run_config_rejects_inconsistent_options(argv):
    with pytest.raises(SpecError):
        _config(argv)


def test_run_config_builds_the_spec():
    assert _config(["gen", "--family", "gamma", "--n", "5", "--tree", "path"]).spec().name == "Gamma_5[1-2,2-3,3-4,4-5]"


def test_table_exits_2_when_a_bound_search_runs_out(monkeypatch, capsys):
    row = next(r for r in family_table() if r.id == "splitstar")
    monkeypatch.setattr(cli, "family_table", lambda: [row])
    assert main(["table", "--budget", "250"]) == EXIT_BUDGET
    assert "splitstar" in capsys.readouterr().out


def test_table_matches_on_a_single_row(monkeypatch, capsys):
    row = next(r for r in family_table() if r.id == "splitstar")
    monkeypatch.setattr(cli, "family_table", lambda: [row])
    assert main(["table", "--format", "json"]) == EXIT_OK
    [parsed] = TypeAdapter(List[FamilyPrediction]).validate_json(capsys.readouterr().out)
    assert (parsed.tp_measured, parsed.kappa1_upper, parsed.match) == (7, 7, True)


def _json_output(argv, capsys):
    assert main(argv + ["--format", "json"]) in (EXIT_OK, EXIT_VIOLATION)
    return capsys.readouterr().out


def test_analysis_report_round_trips(capsys):
    text = _json_output(["analyze", "--family", "hypercube", "--n", "3"], capsys)
    report = AnalysisReport.model_validate_json(text)
    assert report.kappa1_exact and report.kappa1 == 4
    assert report.model_dump_json(indent=2) == text.rstrip("\n")


def test_tp_report_round_trips(capsys):
    text = _json_output(["tp", "--family", "ag", "--n", "4"], capsys)
    report = TpReport.model_validate_json(text)
    assert report.failing is not None and not report.failing.diagnosable
    assert report.model_dump_json(indent=2) == text.rstrip("\n")


def test_theorem_report_round_trips(tmp_path, capsys):
    path = tmp_path / "k6.edgelist"
    write_edgelist(complete(6), path)
    text = _json_output(["verify", "--theorem", "--input", str(path)], capsys)
    report = TheoremReport.model_validate_json(text)
    assert report.applicable and not report.certified
    assert report.model_dump_json(indent=2) == text.rstrip("\n")


def test_lemma_verdicts_round_trip(capsys):
    text = _json_output(["verify", "--lemma", "cut-2TREE", "--n", "4"], capsys)
    verdicts = TypeAdapter(List[LemmaVerdict]).validate_json(text)
    assert verdicts[-1].exceptions
    assert TypeAdapter(List[LemmaVerdict]).dump_json(verdicts, indent=2).decode() == text.rstrip("\n")


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--family", "hypercube", "--n", "4"],
        ["tp", "--family", "twotree", "--n", "4"],
        ["verify", "--theorem", "--family", "ag", "--n", "4"],
    ],
)
def test_reports_do_not_depend_on_threads(argv, capsys):
    single = _json_output(argv + ["--threads", "1"], capsys)
    double = _json_output(argv + ["--threads", "2"], capsys)
    assert single == double


@pytest.mark.slow
def test_certified_theorem_report_does_not_depend_on_threads(capsys):
    argv = ["verify", "--theorem", "--family", "splitstar", "--n", "4"]
    assert _json_output(argv + ["--threads", "1"], capsys) == _json_output(argv + ["--threads", "3"], capsys)


def test_theorem_report_from_a_file_does_not_depend_on_threads(tmp_path, capsys):
    path = tmp_path / "k6.edgelist"
    write_edgelist(complete(6), path)
    argv = ["verify", "--theorem", "--input", str(path)]
    assert _json_output(argv + ["--threads", "1"], capsys) == _json_output(argv + ["--threads", "2"], capsys)
