"""
Command-line front end.

    python -m topodiag gen --family ag --n 4 --output ag4.edgelist
    python -m topodiag analyze --family splitstar --n 4
    python -m topodiag tp --family gamma --n 6 --tree star
    python -m topodiag verify --lemma exp-AN --n 5
    python -m topodiag verify --theorem --family splitstar --n 4
    python -m topodiag table

Exit codes: 0 everything holds, 1 a violation was found, 2 a search ran out
of budget, 3 the input was invalid.
"""

import argparse
import logging
import sys
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from topodiag.analysis import analyze_graph, pair_boundary_check
from topodiag.diagnosability import t_p
from topodiag.edgelist import format_edgelist, read_edgelist
from topodiag.errors import BudgetExceededError, SpecError, TopodiagError
from topodiag.generators import TopologySpec, build, expected_degree, spec_from_options
from topodiag.reports import AnalysisReport, FamilyPrediction, LemmaVerdict, Status, TheoremReport, TpReport
from topodiag.settings import Settings, get_settings
from topodiag.suites import lookup, run_lemma
from topodiag.theorem import check_conditions, family_table, measure_prediction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BUDGET = 2
EXIT_INVALID = 3


class RunConfig(BaseModel):
    """Validated command-line options."""

    command: Literal["gen", "analyze", "tp", "verify", "table"]
    family: Optional[str] = None
    n: Optional[int] = None
    k: Optional[int] = None
    tree: Optional[str] = None
    twotree: Optional[str] = None
    seed: Optional[int] = None
    input: Optional[str] = None
    output: Optional[str] = None
    format: Literal["text", "json"] = "text"
    budget: int = Field(ge=1)
    threads: int = Field(ge=1)
    lemma: Optional[str] = None
    theorem: bool = False
    verbose: bool = False

    @model_validator(mode="after")
    def _check_sources(self) -> "RunConfig":
        if self.input is not None and self.family is not None:
            raise SpecError("give either --input or --family, not both")
        if self.family is not None and self.n is None:
            raise SpecError("--family needs --n")
        if self.command == "gen" and self.family is None:
            raise SpecError("gen needs --family and --n")
        if self.command in ("analyze", "tp") and self.family is None and self.input is None:
            raise SpecError(f"{self.command} needs --family/--n or --input")
        if self.command == "verify" and (self.lemma is None) == (not self.theorem):
            raise SpecError("verify needs exactly one of --lemma or --theorem")
        if self.lemma is not None and (self.family is not None or self.input is not None):
            raise SpecError("--lemma fixes its own family; use --n/--k/--tree/--twotree to pick the instance")
        return self

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> "RunConfig":
        values = {key: value for key, value in vars(args).items() if value is not None}
        values.setdefault("budget", settings.budget)
        values.setdefault("threads", settings.threads)
        return cls(**values)

    def spec(self) -> TopologySpec:
        return spec_from_options(self.family, self.n, k=self.k, tree=self.tree, twotree=self.twotree, seed=self.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="ag, an, hypercube, bcrandom, mobius, qnk, splitstar, gamma, twotree, bp")
    common.add_argument("--n", type=int, help="Dimension of the family member")
    common.add_argument("--k", type=int, help="Radix for qnk")
    common.add_argument("--tree", help="Transposition tree for gamma: star, path or edges like 1-2,2-3")
    common.add_argument("--twotree", help="2-tree for twotree: star, path or attachments like 4:1-2,5:2-3")
    common.add_argument("--seed", type=int, help="Seed for bcrandom")
    common.add_argument("--input", help="Read the graph from an edge-list file")
    common.add_argument("--output", help="Write the result to this file")
    common.add_argument("--format", choices=["text", "json"], help="Output format (default: text)")
    common.add_argument("--budget", type=int, help="Node budget per search (env TOPODIAG_BUDGET)")
    common.add_argument("--threads", type=int, help="Worker processes (env TOPODIAG_THREADS)")
    common.add_argument("--verbose", action="store_true", default=None, help="Log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="topodiag", description="Connectivity and pessimistic diagnosability of interconnection networks"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("gen", parents=[common], help="Write a family member as an edge list")
    commands.add_parser("analyze", parents=[common], help="Order, degree, kappa, girth, cn, l, kappa_1 and t_p")
    commands.add_parser("tp", parents=[common], help="Pessimistic diagnosability t_p")
    verify = commands.add_parser("verify", parents=[common], help="Verify a registered lemma or the theorem conditions")
    verify.add_argument("--lemma", help="Lemma id, e.g. exp-AN or cut-2TREE")
    verify.add_argument("--theorem", action="store_true", default=None, help="Check the theorem conditions")
    commands.add_parser("table", parents=[common], help="Predicted against measured t_p per family")
    return parser


def _emit(config: RunConfig, text: str) -> None:
    if config.output is not None:
        with open(config.output, "w", encoding="utf-8") as file:
            file.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _load_graph(config: RunConfig):
    if config.input is not None:
        return read_edgelist(config.input), None
    spec = config.spec()
    return build(spec), spec


def verdicts_exit_code(verdicts: Sequence[LemmaVerdict]) -> int:
    if any(v.status is Status.VIOLATED for v in verdicts):
        return EXIT_VIOLATION
    if any(v.status is Status.BUDGET_EXHAUSTED for v in verdicts):
        return EXIT_BUDGET
    return EXIT_OK


def _verdict_lines(verdicts: Sequence[LemmaVerdict]) -> List[str]:
    lines = []
    for v in verdicts:
        line = f"{v.id:<24} {v.status.value:<17} bound={v.bound}  searched={v.searched}"
        if v.witness is not None:
            line += f"  witness={v.witness}"
        lines.append(line)
        if v.detail:
            lines.append(f"    {v.detail}")
        for exception in v.exceptions:
            lines.append(f"    exception: {exception}")
    return lines


def cmd_gen(config: RunConfig) -> int:
    spec = config.spec()
    g = build(spec)
    summary = f"{spec.name}: {g.order} vertices, {g.edge_count} edges, regularity {g.regularity}"
    if config.output is not None:
        _emit(config, format_edgelist(g))
        print(summary)
    else:
        sys.stdout.write(format_edgelist(g))
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_analyze(config: RunConfig, settings: Settings) -> int:
    g, spec = _load_graph(config)
    report = analyze_graph(
        g,
        family=spec.family.value if spec else None,
        n=spec.n if spec else None,
        budget=config.budget,
        threads=config.threads,
        kappa_h_size_cap=settings.kappa_h_size_cap,
    )
    if report.k is not None and g.order >= 2:
        report.verdicts.append(pair_boundary_check(g, report.k, report.l_max))
    if config.format == "json":
        _emit(config, report.model_dump_json(indent=2))
    else:
        _emit(config, format_analysis(report, spec.name if spec else config.input))
    return EXIT_BUDGET if report.exhausted else EXIT_OK


def format_analysis(report: AnalysisReport, name: Optional[str]) -> str:
    kappa1 = report.kappa1 if report.kappa1_exact else f"<= {report.kappa1_upper}"
    lines = [
        f"graph:        {name}",
        f"order:        {report.order}",
        f"regularity:   {report.k}",
        f"kappa:        {report.kappa}",
        f"girth:        {report.girth if report.girth is not None else 'inf'}",
        f"cn_max:       {report.cn_max}",
        f"l_max:        {report.l_max}",
        f"kappa_1:      {kappa1}",
        f"t_p:          {report.tp}",
    ]
    lines += _verdict_lines(report.verdicts)
    lines += [f"note: {note}" for note in report.notes]
    lines += [f"incomplete: {item}" for item in report.incomplete]
    return "\n".join(lines)


def cmd_tp(config: RunConfig) -> int:
    g, spec = _load_graph(config)
    result = t_p(g, budget=config.budget, threads=config.threads)
    report = TpReport(
        family=spec.family.value if spec else None,
        n=spec.n if spec else None,
        order=g.order,
        tp=result.value,
        flagged=result.flagged,
        failing=result.failing,
    )
    if config.format == "json":
        _emit(config, report.model_dump_json(indent=2))
    else:
        lines = [f"t_p = {report.tp}"]
        if report.flagged:
            lines.append("not 1/1-diagnosable; reported as 0")
        failing = report.failing
        if failing is not None:
            lines.append(
                f"fails at t = {failing.t}: {failing.violation_kind}, "
                f"S = {failing.witness_S}, component = {failing.witness_component}"
            )
        _emit(config, "\n".join(lines))
    return EXIT_OK


def _theorem_graph(config: RunConfig) -> tuple:
    if config.input is not None:
        return read_edgelist(config.input), None, config.input
    if config.family is None:
        entry = lookup("theorem")
        spec = spec_from_options(entry.family, config.n or entry.n)
    else:
        spec = config.spec()
    return build(spec), expected_degree(spec), spec.name


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    if config.theorem:
        g, expected_k, name = _theorem_graph(config)
        report = check_conditions(
            g,
            budget=config.budget,
            threads=config.threads,
            expected_k=expected_k,
            instance=name,
            small_side_cap=settings.small_side_cap,
            cut_exhaustive_max_order=settings.cut_exhaustive_max_order,
        )
        if config.format == "json":
            _emit(config, report.model_dump_json(indent=2))
        else:
            _emit(config, format_theorem(report))
        if not report.applicable:
            return EXIT_OK
        code = verdicts_exit_code(report.verdicts())
        if code == EXIT_OK and not report.certified:
            return EXIT_VIOLATION
        return code

    verdicts = run_lemma(
        config.lemma,
        n=config.n,
        k=config.k,
        tree=config.tree,
        twotree=config.twotree,
        budget=config.budget,
        threads=config.threads,
        settings=settings,
    )
    if config.format == "json":
        _emit(config, TypeAdapter(List[LemmaVerdict]).dump_json(verdicts, indent=2).decode())
    else:
        _emit(config, "\n".join(_verdict_lines(verdicts)))
    return verdicts_exit_code(verdicts)


def format_theorem(report: TheoremReport) -> str:
    lines = [f"instance:   {report.instance}", f"N = {report.N}, k = {report.k}, l = {report.l}"]
    if not report.applicable:
        lines.append("inapplicable")
    else:
        lines += _verdict_lines(report.verdicts())
        lines += [
            f"predicted:  t_p = kappa_1 = {report.predicted}",
            f"t_p:        {report.tp_computed}",
            f"kappa_1:    <= {report.kappa1_upper} ({report.kappa1_source})",
            f"certified:  {'yes' if report.certified else 'no'}",
        ]
    lines += [f"note: {note}" for note in report.notes]
    return "\n".join(lines)


def cmd_table(config: RunConfig) -> int:
    rows: List[FamilyPrediction] = []
    exhausted = False
    for row in family_table():
        try:
            rows.append(measure_prediction(row, budget=config.budget, threads=config.threads))
        except BudgetExceededError as exc:
            logger.warning("%s: %s", row.id, exc)
            exhausted = True
            rows.append(row)
    if config.format == "json":
        _emit(config, TypeAdapter(List[FamilyPrediction]).dump_json(rows, indent=2).decode())
    else:
        _emit(config, "\n".join(format_prediction(row) for row in rows))
    if exhausted:
        return EXIT_BUDGET
    return EXIT_OK if all(row.match for row in rows) else EXIT_VIOLATION


def format_prediction(row: FamilyPrediction) -> str:
    k = f", k={row.k}" if row.k is not None else ""
    text = f"{row.id:<14} n={row.n}{k}: predicted {row.value} ({row.formula})"
    if not row.asserted:
        text += f" [formula not asserted below n={row.threshold}]"
    if row.tp_measured is not None:
        text += f", t_p {row.tp_measured}, kappa_1 <= {row.kappa1_upper}, {'match' if row.match else 'MISMATCH'}"
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr)

    try:
        config = RunConfig.from_args(args, settings)
        if config.command == "gen":
            return cmd_gen(config)
        if config.command == "analyze":
            return cmd_analyze(config, settings)
        if config.command == "tp":
            return cmd_tp(config)
        if config.command == "verify":
            return cmd_verify(config, settings)
        return cmd_table(config)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TopodiagError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
