"""
Plain-text edge lists.

The first line is ``<order> <edge count>``; ``# <vertex> <label>`` lines
carry vertex labels; every other non-blank line is one edge ``u v`` with
0-indexed endpoints. Written files list edges with ``u < v`` in ascending
order.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from topodiag.errors import GraphError
from topodiag.graph import Graph

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_edgelist(g: Graph) -> str:
    lines = [f"{g.order} {g.edge_count}"]
    if g.labels is not None:
        lines.extend(f"# {v} {label}" for v, label in enumerate(g.labels))
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edgelist(lines: Iterable[str]) -> Graph:
    header = None
    labels: Dict[int, str] = {}
    edges: List[Tuple[int, int]] = []
    seen = set()
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(maxsplit=1)
            if parts and parts[0].isdigit():
                labels[int(parts[0])] = parts[1] if len(parts) > 1 else ""
            continue
        try:
            u, v = (int(x) for x in line.split())
        except ValueError:
            raise GraphError(f"line {number}: expected two integers, got '{line}'") from None
        if header is None:
            header = (u, v)
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {number}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append((u, v))

    if header is None:
        raise GraphError("empty edge list: missing the '<order> <edge count>' header")
    order, count = header
    if order < 1:
        raise GraphError(f"order must be positive, got {order}")
    if count != len(edges):
        raise GraphError(f"header announces {count} edges but {len(edges)} were listed")
    if labels and sorted(labels) != list(range(order)):
        raise GraphError("labels must be given for every vertex or for none")
    ordered = [labels[v] for v in range(order)] if labels else None
    return Graph.from_edges(order, edges, ordered)


def read_edgelist(path: PathLike) -> Graph:
    with open(path, "r", encoding="utf-8") as file:
        g = parse_edgelist(file)
    logger.info("read %s: %d vertices, %d edges", path, g.order, g.edge_count)
    return g


def write_edgelist(g: Graph, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as file:
        file.write(format_edgelist(g))
    logger.info("wrote %s", path)
