"""
Lemma registry: maps the ids in ``config/lemmas.yaml`` to the checks that
verify them on a concrete family member.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from topodiag.analysis import (
    DEFAULT_BUDGET,
    boundary_connectivity_check,
    boundary_floor_check,
    cut_structure_exhaustive,
    cut_structure_scan,
    pair_boundary_check,
)
from topodiag.errors import UnknownLemmaError
from topodiag.generators import TopologySpec, build, spec_from_options
from topodiag.graph import vertex_connectivity
from topodiag.reports import LemmaVerdict, Status
from topodiag.settings import Settings, _load_yaml, get_settings
from topodiag.theorem import check_spec

logger = logging.getLogger(__name__)


class LemmaKind(str, Enum):
    PAIR = "pair"
    BOUNDARY_CONNECTIVITY = "boundary_connectivity"
    EXPANSION = "expansion"
    CUT = "cut"
    THEOREM = "theorem"


class LemmaEntry(BaseModel):
    """One row of the lemma registry; linear bounds are ``a*n + b``."""

    model_config = ConfigDict(frozen=True)

    id: str
    kind: LemmaKind
    family: str
    n: int
    min_n: int = 1
    k: Optional[int] = None
    min_k: Optional[int] = None
    tree: Optional[str] = None
    twotree: Optional[str] = None
    bound: Optional[Tuple[int, int]] = None
    max_size: Optional[Tuple[int, int]] = None
    allow_edge_at_bound: bool = False
    four_cycle_exceptions_at_n: Optional[int] = None
    description: str = ""

    def bound_at(self, n: int) -> int:
        a, b = self.bound
        return a * n + b

    def max_size_at(self, n: int) -> int:
        a, b = self.max_size
        return a * n + b


@lru_cache(maxsize=1)
def load_registry() -> Dict[str, LemmaEntry]:
    """Registry keyed by lower-cased id."""
    return {key.lower(): LemmaEntry(id=key, **row) for key, row in _load_yaml("lemmas.yaml").items()}


def lookup(lemma_id: str) -> LemmaEntry:
    try:
        return load_registry()[lemma_id.lower()]
    except KeyError:
        known = ", ".join(entry.id for entry in load_registry().values())
        raise UnknownLemmaError(f"unknown lemma '{lemma_id}' (known: {known})") from None


def _inapplicable(entry: LemmaEntry, reason: str) -> List[LemmaVerdict]:
    logger.info("%s: %s", entry.id, reason)
    return [LemmaVerdict(id=entry.id, status=Status.INAPPLICABLE, detail=reason)]


def resolve_spec(
    entry: LemmaEntry,
    n: Optional[int] = None,
    k: Optional[int] = None,
    tree: Optional[str] = None,
    twotree: Optional[str] = None,
) -> TopologySpec:
    """The entry's default instance with any caller overrides applied."""
    return spec_from_options(
        entry.family,
        n if n is not None else entry.n,
        k=k if k is not None else entry.k,
        tree=tree if tree is not None else entry.tree,
        twotree=twotree if twotree is not None else entry.twotree,
    )


def run_lemma(
    lemma_id: str,
    n: Optional[int] = None,
    k: Optional[int] = None,
    tree: Optional[str] = None,
    twotree: Optional[str] = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    settings: Optional[Settings] = None,
) -> List[LemmaVerdict]:
    """Verify one registry entry; cut lemmas on small graphs also get a full-subset pass."""
    entry = lookup(lemma_id)
    settings = settings or get_settings()
    n = n if n is not None else entry.n
    if n < entry.min_n:
        return _inapplicable(entry, f"stated for n >= {entry.min_n}, got n = {n}")
    if entry.min_k is not None and (k if k is not None else entry.k) < entry.min_k:
        return _inapplicable(entry, f"stated for k >= {entry.min_k}")

    spec = resolve_spec(entry, n, k, tree, twotree)

    if entry.kind is LemmaKind.THEOREM:
        report = check_spec(
            spec,
            budget=budget,
            threads=threads,
            small_side_cap=settings.small_side_cap,
            cut_exhaustive_max_order=settings.cut_exhaustive_max_order,
            compute_extras=False,
        )
        if not report.applicable:
            return _inapplicable(entry, "; ".join(report.notes))
        return report.verdicts()

    g = build(spec)
    logger.info("%s on %s (%d vertices)", entry.id, spec.name, g.order)

    if entry.kind is LemmaKind.PAIR:
        return [pair_boundary_check(g, lemma_id=entry.id)]

    kappa = vertex_connectivity(g, threads)
    if entry.kind is LemmaKind.BOUNDARY_CONNECTIVITY:
        return [
            boundary_connectivity_check(
                g,
                kappa,
                samples=settings.lemma33_samples,
                exhaustive_max_size=settings.lemma33_exhaustive_max_size,
                exhaustive_max_order=settings.lemma33_exhaustive_max_order,
                seed=settings.lemma33_seed,
                budget=budget,
                threads=threads,
                lemma_id=entry.id,
            )
        ]

    bound = entry.bound_at(n)
    if entry.kind is LemmaKind.EXPANSION:
        return [
            boundary_floor_check(
                g, bound, entry.max_size_at(n), budget=budget, threads=threads, kappa=kappa, lemma_id=entry.id
            )
        ]

    four_cycles = entry.four_cycle_exceptions_at_n == n
    verdicts = [
        cut_structure_scan(
            g,
            bound,
            small_side_cap=settings.small_side_cap,
            allow_edge_at_bound=entry.allow_edge_at_bound,
            allow_four_cycles=four_cycles,
            budget=budget,
            threads=threads,
            kappa=kappa,
            lemma_id=entry.id,
        )
    ]
    if g.order <= settings.cut_exhaustive_max_order:
        verdicts.append(
            cut_structure_exhaustive(
                g,
                bound,
                allow_edge_at_bound=entry.allow_edge_at_bound,
                allow_four_cycles=four_cycles,
                budget=budget,
                kappa=kappa,
                lemma_id=f"{entry.id}/exhaustive",
            )
        )
    return verdicts
