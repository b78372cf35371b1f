"""
Deterministic constructions of the interconnection-network families.

Every family is described by a :class:`TopologySpec`; :func:`build` turns it
into a :class:`~topodiag.graph.Graph` whose vertex ``i`` is the ``i``-th entry
of :func:`vertex_words`. Permutation families are Cayley graphs whose
generators act on word positions.
"""

import logging
import random
from enum import Enum
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from topodiag.errors import SpecError
from topodiag.graph import Graph, VertexSet, iter_members, vertex_set
from topodiag.permutations import (
    Permutation,
    PositionMap,
    SignedPermutation,
    all_permutations,
    all_signed_permutations,
    alternating_index,
    compose,
    even_permutations,
    three_cycle,
    transposition,
)

logger = logging.getLogger(__name__)

VertexWord = Union[Permutation, SignedPermutation, Tuple[int, ...], int]


class Family(str, Enum):
    AG = "AG"
    AN = "AN"
    BC_HYPERCUBE = "BC_HYPERCUBE"
    BC_RANDOM = "BC_RANDOM"
    BC_MOBIUS = "BC_MOBIUS"
    QNK = "QNK"
    SPLIT_STAR = "SPLIT_STAR"
    TRANS_TREE = "TRANS_TREE"
    TWO_TREE = "TWO_TREE"
    BP = "BP"


FAMILY_ALIASES: Dict[str, Family] = {
    "ag": Family.AG,
    "an": Family.AN,
    "bc": Family.BC_HYPERCUBE,
    "hypercube": Family.BC_HYPERCUBE,
    "bcrandom": Family.BC_RANDOM,
    "mobius": Family.BC_MOBIUS,
    "qnk": Family.QNK,
    "splitstar": Family.SPLIT_STAR,
    "gamma": Family.TRANS_TREE,
    "twotree": Family.TWO_TREE,
    "bp": Family.BP,
}

BC_FAMILIES = (Family.BC_HYPERCUBE, Family.BC_RANDOM, Family.BC_MOBIUS)

MIN_DIMENSION: Dict[Family, int] = {
    Family.AG: 3,
    Family.AN: 3,
    Family.BC_HYPERCUBE: 1,
    Family.BC_RANDOM: 1,
    Family.BC_MOBIUS: 1,
    Family.QNK: 1,
    Family.SPLIT_STAR: 2,
    Family.TRANS_TREE: 3,
    Family.TWO_TREE: 3,
    Family.BP: 1,
}


def parse_family(name: str) -> Family:
    try:
        return FAMILY_ALIASES[name.lower()]
    except KeyError:
        try:
            return Family(name.upper())
        except ValueError:
            known = ", ".join(sorted(FAMILY_ALIASES))
            raise SpecError(f"unknown family '{name}' (expected one of: {known})") from None


def _parse_pair(text: str) -> Tuple[int, int]:
    try:
        a, b = (int(part) for part in text.strip().split("-"))
    except ValueError:
        raise SpecError(f"cannot read '{text}' as a symbol pair like 1-2") from None
    return a, b


class TranspositionTree(BaseModel):
    """Tree on the symbols 1..n; each edge is a transposition generator."""

    model_config = ConfigDict(frozen=True)

    n: int
    edges: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def _check_tree(self) -> "TranspositionTree":
        if self.n < 2:
            raise SpecError("a transposition tree needs at least two symbols")
        if len(self.edges) != self.n - 1:
            raise SpecError(f"a tree on {self.n} symbols has {self.n - 1} edges, got {len(self.edges)}")
        parent = list(range(self.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            if not (1 <= a <= self.n and 1 <= b <= self.n) or a == b:
                raise SpecError(f"tree edge {a}-{b} is not a pair of distinct symbols in 1..{self.n}")
            ra, rb = find(a), find(b)
            if ra == rb:
                raise SpecError(f"tree edge {a}-{b} closes a cycle")
            parent[ra] = rb
        return self

    @classmethod
    def star(cls, n: int) -> "TranspositionTree":
        return cls(n=n, edges=tuple((1, j) for j in range(2, n + 1)))

    @classmethod
    def path(cls, n: int) -> "TranspositionTree":
        return cls(n=n, edges=tuple((j, j + 1) for j in range(1, n)))

    @classmethod
    def parse(cls, text: str, n: int) -> "TranspositionTree":
        """Read "star", "path" or an edge list such as "1-2,2-3,2-4"."""
        text = text.strip().lower()
        if text == "star":
            return cls.star(n)
        if text == "path":
            return cls.path(n)
        return cls(n=n, edges=tuple(_parse_pair(item) for item in text.split(",") if item.strip()))

    def degree(self, symbol: int) -> int:
        return sum(1 for edge in self.edges if symbol in edge)

    def to_text(self) -> str:
        return ",".join(f"{a}-{b}" for a, b in self.edges)


class TwoTree(BaseModel):
    """
    2-tree grown from the triangle {1, 2, 3}: ``attachments[i]`` is the edge
    that symbol ``4 + i`` is joined to.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    attachments: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def _check_growth(self) -> "TwoTree":
        if self.n < 3:
            raise SpecError("a 2-tree needs at least three symbols")
        if len(self.attachments) != self.n - 3:
            raise SpecError(f"a 2-tree on {self.n} symbols needs {self.n - 3} attachments")
        edges = {frozenset(pair) for pair in ((1, 2), (1, 3), (2, 3))}
        for j, (a, b) in enumerate(self.attachments, start=4):
            if frozenset((a, b)) not in edges:
                raise SpecError(f"symbol {j} attaches to {a}-{b}, which is not an edge yet")
            edges.add(frozenset((j, a)))
            edges.add(frozenset((j, b)))
        return self

    @classmethod
    def star(cls, n: int) -> "TwoTree":
        return cls(n=n, attachments=tuple((1, 2) for _ in range(4, n + 1)))

    @classmethod
    def path(cls, n: int) -> "TwoTree":
        return cls(n=n, attachments=tuple((j - 2, j - 1) for j in range(4, n + 1)))

    @classmethod
    def parse(cls, text: str, n: int) -> "TwoTree":
        """Read "star", "path" or an attachment list such as "4:1-2,5:2-3"."""
        text = text.strip().lower()
        if text == "star":
            return cls.star(n)
        if text == "path":
            return cls.path(n)
        attachments: Dict[int, Tuple[int, int]] = {}
        for item in (part for part in text.split(",") if part.strip()):
            vertex, _, pair = item.partition(":")
            try:
                attachments[int(vertex)] = _parse_pair(pair)
            except ValueError:
                raise SpecError(f"cannot read '{item}' as an attachment like 4:1-2") from None
        if sorted(attachments) != list(range(4, n + 1)):
            raise SpecError(f"attachments must name every symbol 4..{n} exactly once")
        return cls(n=n, attachments=tuple(attachments[j] for j in range(4, n + 1)))

    def triangles(self) -> List[Tuple[int, int, int]]:
        return [(1, 2, 3)] + [(j, a, b) for j, (a, b) in enumerate(self.attachments, start=4)]

    def to_text(self) -> str:
        return ",".join(f"{j}:{a}-{b}" for j, (a, b) in enumerate(self.attachments, start=4))


class TopologySpec(BaseModel):
    """Which family member to build."""

    model_config = ConfigDict(frozen=True)

    family: Family
    n: int
    k: Optional[int] = None
    tree: Optional[TranspositionTree] = None
    twotree: Optional[TwoTree] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "TopologySpec":
        family = self.family
        if self.n < MIN_DIMENSION[family]:
            raise SpecError(f"{family.value} needs n >= {MIN_DIMENSION[family]}, got {self.n}")
        if (self.k is not None) != (family is Family.QNK):
            raise SpecError("k is required for QNK and only for QNK")
        if family is Family.QNK and self.k < 2:
            raise SpecError(f"QNK needs k >= 2, got {self.k}")
        if (self.tree is not None) != (family is Family.TRANS_TREE):
            raise SpecError("a transposition tree is required for TRANS_TREE and only for it")
        if self.tree is not None and self.tree.n != self.n:
            raise SpecError(f"tree is on {self.tree.n} symbols but n = {self.n}")
        if (self.twotree is not None) != (family is Family.TWO_TREE):
            raise SpecError("a 2-tree is required for TWO_TREE and only for it")
        if self.twotree is not None and self.twotree.n != self.n:
            raise SpecError(f"2-tree is on {self.twotree.n} symbols but n = {self.n}")
        if (self.seed is not None) != (family is Family.BC_RANDOM):
            raise SpecError("a seed is required for BC_RANDOM and only for it")
        return self

    @classmethod
    def create(cls, **fields) -> "TopologySpec":
        """Validate ``fields``, reporting every problem as a SpecError."""
        try:
            return cls(**fields)
        except ValidationError as exc:
            raise SpecError(f"invalid topology: {exc}") from None

    @property
    def name(self) -> str:
        family, n = self.family, self.n
        if family is Family.QNK:
            return f"Q_{n}^{self.k}"
        if family is Family.TRANS_TREE:
            return f"Gamma_{n}[{self.tree.to_text()}]"
        if family is Family.TWO_TREE:
            return f"Gamma_{n}(Delta)[{self.twotree.to_text()}]"
        if family is Family.BC_RANDOM:
            return f"X_{n}[seed={self.seed}]"
        short = {
            Family.BC_HYPERCUBE: "Q",
            Family.BC_MOBIUS: "M",
            Family.SPLIT_STAR: "S2",
        }
        return f"{short.get(family, family.value)}_{n}"


def expected_order(spec: TopologySpec) -> int:
    n, family = spec.n, spec.family
    if family in (Family.AG, Family.AN, Family.TWO_TREE):
        return factorial(n) // 2
    if family in (Family.SPLIT_STAR, Family.TRANS_TREE):
        return factorial(n)
    if family is Family.QNK:
        return spec.k**n
    if family is Family.BP:
        return factorial(n) << n
    return 1 << n


def expected_degree(spec: TopologySpec) -> int:
    n, family = spec.n, spec.family
    if family in (Family.AG, Family.TWO_TREE):
        return 2 * n - 4
    if family in (Family.AN, Family.TRANS_TREE):
        return n - 1
    if family is Family.SPLIT_STAR:
        return 2 * n - 3
    if family is Family.QNK:
        return 2 * n if spec.k >= 3 else n
    return n


def _qnk_label(digits: Tuple[int, ...], k: int) -> str:
    sep = "" if k <= 10 else ","
    return sep.join(str(d) for d in reversed(digits))


def vertex_words(spec: TopologySpec) -> List[VertexWord]:
    """Vertex identities in index order: words, signed words, digit tuples or bit strings."""
    family, n = spec.family, spec.n
    if family in (Family.AG, Family.AN, Family.TWO_TREE):
        return list(even_permutations(n))
    if family in (Family.SPLIT_STAR, Family.TRANS_TREE):
        return list(all_permutations(n))
    if family is Family.BP:
        return list(all_signed_permutations(n))
    if family is Family.QNK:
        k = spec.k
        # digits[j] is the coordinate of dimension j; index = sum digits[j] * k^j
        return [tuple(x // k**j % k for j in range(n)) for x in range(k**n)]
    return list(range(1 << n))


def vertex_label(spec: TopologySpec, word: VertexWord) -> str:
    if spec.family is Family.QNK:
        return _qnk_label(word, spec.k)
    if spec.family in BC_FAMILIES:
        return format(word, f"0{spec.n}b")
    return str(word)


def _generators(spec: TopologySpec) -> List[PositionMap]:
    family, n = spec.family, spec.n
    if family is Family.AG:
        gens = []
        for i in range(3, n + 1):
            gens += [three_cycle(n, 1, 2, i), three_cycle(n, 1, i, 2)]
        return gens
    if family is Family.AN:
        gens = [three_cycle(n, 1, 2, 3), three_cycle(n, 1, 3, 2)]
        swap12 = transposition(n, 1, 2)
        return gens + [compose(n, swap12, transposition(n, 3, i)) for i in range(4, n + 1)]
    if family is Family.SPLIT_STAR:
        gens = [transposition(n, 1, 2)]
        for i in range(3, n + 1):
            gens += [three_cycle(n, 1, 2, i), three_cycle(n, 1, i, 2)]
        return gens
    if family is Family.TRANS_TREE:
        return [transposition(n, a, b) for a, b in spec.tree.edges]
    if family is Family.TWO_TREE:
        gens = []
        for a, b, c in spec.twotree.triangles():
            gens += [three_cycle(n, a, b, c), three_cycle(n, a, c, b)]
        return gens
    raise SpecError(f"{family.value} is not a permutation Cayley family")


def _cayley_rows(vertices: Sequence[Permutation], gens: List[PositionMap], even: bool) -> List[int]:
    index_of: Callable[[Permutation], int] = alternating_index if even else (lambda p: p.rank)
    rows = []
    for p in vertices:
        row = 0
        for sigma in gens:
            row |= 1 << index_of(p.act(sigma))
        rows.append(row)
    return rows


def _bp_rows(vertices: Sequence[SignedPermutation]) -> List[int]:
    return [vertex_set(p.prefix_reversal(i).index for i in range(1, p.n + 1)) for p in vertices]


def _qnk_rows(n: int, k: int) -> List[int]:
    rows = []
    for x in range(k**n):
        row = 0
        for j in range(n):
            weight = k**j
            digit = x // weight % k
            for step in (1, -1):
                row |= 1 << (x + ((digit + step) % k - digit) * weight)
        rows.append(row)
    return rows


def _hypercube_rows(n: int) -> List[int]:
    return [vertex_set(x ^ (1 << b) for b in range(n)) for x in range(1 << n)]


def _mobius_rows(n: int) -> List[int]:
    """0-Möbius cube: along dimension b, flip bit b alone if bit b+1 is 0, else bits b..0."""
    rows = []
    for x in range(1 << n):
        row = 0
        for b in range(n):
            flip = 1 << b if not x >> (b + 1) & 1 else (1 << (b + 1)) - 1
            row |= 1 << (x ^ flip)
        rows.append(row)
    return rows


def _random_bc_edges(n: int, rng: random.Random) -> List[Tuple[int, int]]:
    """Two independent halves joined by a uniformly random perfect matching."""
    if n == 1:
        return [(0, 1)]
    half = 1 << (n - 1)
    left = _random_bc_edges(n - 1, rng)
    right = _random_bc_edges(n - 1, rng)
    matching = list(range(half))
    rng.shuffle(matching)
    return (
        left
        + [(u + half, v + half) for u, v in right]
        + [(i, half + matching[i]) for i in range(half)]
    )


def build(spec: TopologySpec) -> Graph:
    """Build the family member described by ``spec``."""
    family, n = spec.family, spec.n
    words = vertex_words(spec)
    labels = tuple(vertex_label(spec, w) for w in words)

    if family in (Family.AG, Family.AN, Family.TWO_TREE):
        rows = _cayley_rows(words, _generators(spec), even=True)
    elif family in (Family.SPLIT_STAR, Family.TRANS_TREE):
        rows = _cayley_rows(words, _generators(spec), even=False)
    elif family is Family.BP:
        rows = _bp_rows(words)
    elif family is Family.QNK:
        rows = _qnk_rows(n, spec.k)
    elif family is Family.BC_HYPERCUBE:
        rows = _hypercube_rows(n)
    elif family is Family.BC_MOBIUS:
        rows = _mobius_rows(n)
    else:
        edges = _random_bc_edges(n, random.Random(spec.seed))
        return Graph.from_edges(1 << n, edges, labels)

    g = Graph(len(rows), tuple(rows), labels)
    logger.info("built %s: %d vertices, %d edges", spec.name, g.order, g.edge_count)
    return g


def decomposition_labels(
    spec: TopologySpec, g: Optional[Graph] = None, scheme: str = "last_symbol"
) -> List[int]:
    """
    Part id per vertex for the family's recursive decomposition.

    ``last_symbol`` splits permutation families by the symbol in the last
    position (part ``symbol - 1``; for BP, ``+i`` maps to ``i - 1`` and ``-i``
    to ``n + i - 1``), QNK by the coordinate of dimension n-1 and BC networks
    by the top bit. ``parity`` splits the full symmetric-group families into
    even (0) and odd (1) words.
    """
    family, n = spec.family, spec.n
    words = vertex_words(spec)
    if g is not None and g.order != len(words):
        raise SpecError(f"graph has {g.order} vertices but {spec.name} has {len(words)}")

    if scheme == "parity":
        if family not in (Family.SPLIT_STAR, Family.TRANS_TREE):
            raise SpecError(f"parity decomposition needs all permutations, not {family.value}")
        return [p.parity for p in words]
    if scheme != "last_symbol":
        raise SpecError(f"unknown decomposition scheme '{scheme}'")

    if family is Family.TRANS_TREE and spec.tree.degree(n) != 1:
        raise SpecError(f"symbol {n} must be a leaf of the tree to split by last symbol")
    if family is Family.BP:
        return [p.last - 1 if p.last > 0 else n - p.last - 1 for p in words]
    if family is Family.QNK:
        return [digits[n - 1] for digits in words]
    if family in BC_FAMILIES:
        return [x >> (n - 1) for x in words]
    return [p.last - 1 for p in words]


def cross_edge_census(g: Graph, labels: Sequence[int]) -> List[List[int]]:
    """Symmetric matrix of edge counts between distinct parts; zero diagonal."""
    parts = max(labels) + 1
    matrix = [[0] * parts for _ in range(parts)]
    for u, v in g.edges():
        a, b = labels[u], labels[v]
        if a != b:
            matrix[a][b] += 1
            matrix[b][a] += 1
    return matrix


def extra_neighbors(g: Graph, labels: Sequence[int], v: int) -> VertexSet:
    return vertex_set(w for w in iter_members(g.rows[v]) if labels[w] != labels[v])


def extra_neighbor_counts(g: Graph, labels: Sequence[int]) -> List[int]:
    """Per vertex, how many neighbors lie outside its own part."""
    return [extra_neighbors(g, labels, v).bit_count() for v in range(g.order)]


def spec_from_options(
    family: Union[str, Family],
    n: int,
    k: Optional[int] = None,
    tree: Optional[str] = None,
    twotree: Optional[str] = None,
    seed: Optional[int] = None,
) -> TopologySpec:
    """
    Build a spec from loose option values as they come from the command line
    or the YAML registries; tree and 2-tree texts default to "star".
    """
    family = family if isinstance(family, Family) else parse_family(family)
    fields: Dict[str, object] = {"family": family, "n": n}
    if family is Family.QNK:
        fields["k"] = k
    elif k is not None:
        raise SpecError(f"--k only applies to QNK, not {family.value}")
    if family is Family.TRANS_TREE:
        fields["tree"] = TranspositionTree.parse(tree or "star", n)
    elif tree is not None:
        raise SpecError(f"a transposition tree only applies to TRANS_TREE, not {family.value}")
    if family is Family.TWO_TREE:
        fields["twotree"] = TwoTree.parse(twotree or "star", n)
    elif twotree is not None:
        raise SpecError(f"a 2-tree only applies to TWO_TREE, not {family.value}")
    if seed is not None or family is Family.BC_RANDOM:
        fields["seed"] = seed
    return TopologySpec.create(**fields)
