"""The block graph of a layer and its clique picture of tilings.

Vertices are the distinct blocks of the layer, edges join max-disjoint
pairs.  A tiling is then exactly a clique of size d = (n over m)_F, and
every such clique is maximal, so counting tilings is counting size-d
cliques.  Everything is deterministic: blocks carry a canonical order
and searches expand candidates in that order.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Optional

from .coefficients import fnomial
from .errors import SearchBudgetExceeded
from .fsequence import FSequence, term
from .geometry import (
    DEFAULT_BLOCK_CAP,
    Block,
    Layer,
    PlainShape,
    block_family,
)
from .tiling import Tiling, _sorted_blocks, verify_tiling


@dataclass(frozen=True)
class BlockCountReport:
    pair_count: int
    distinct_count: int


def block_count_formula(
    F: FSequence, k: int, n: int, *, block_cap: int = DEFAULT_BLOCK_CAP
) -> BlockCountReport:
    """Size of the block family of <k -> n>, in both counting semantics.

    The pair count sums, over all orientation permutations of the m
    block levels, the ways to choose the level subsets; when the
    sequence repeats terms, distinct orientations can describe the same
    vertex data, so the deduplicated count can be smaller.
    """
    from .geometry import build_layer

    layer = build_layer(F, k, n)
    m = layer.m
    pair = 0
    for sigma in itertools.permutations(range(1, m + 1)):
        product = 1
        for s in range(1, m + 1):
            product *= comb(term(F, k + s - 1), term(F, sigma[s - 1]))
        pair += product
    distinct = len(block_family(layer, PlainShape(m), block_cap=block_cap).blocks)
    return BlockCountReport(pair, distinct)


@dataclass(frozen=True)
class BlockGraph:
    """Simple undirected graph on the deduplicated block family.

    adjacency[i] is a bitmask over vertex indices; bit j is set exactly
    when blocks i and j are max-disjoint.  d is the clique size a tiling
    must have.
    """

    layer: Layer
    blocks: tuple[Block, ...]
    adjacency: tuple[int, ...]
    d: int

    def vertex_count(self) -> int:
        return len(self.blocks)

    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self.adjacency) // 2


def build_block_graph(layer: Layer, *, block_cap: int = DEFAULT_BLOCK_CAP) -> BlockGraph:
    blocks = block_family(layer, PlainShape(layer.m), block_cap=block_cap).blocks
    level_masks = [
        tuple(sum(1 << (v - 1) for v in level) for level in block.levels)
        for block in blocks
    ]
    count = len(blocks)
    adjacency = [0] * count
    for i in range(count):
        for j in range(i + 1, count):
            if any(la & lb == 0 for la, lb in zip(level_masks[i], level_masks[j])):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
    d = fnomial(layer.F, layer.n, layer.m)
    return BlockGraph(layer, blocks, tuple(adjacency), d)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def find_clique(
    graph: BlockGraph, d: Optional[int] = None, *, node_budget: int = 2_000_000
) -> Optional[tuple[int, ...]]:
    """First clique of size d in canonical order, or None if none exists.

    Runs a depth-first extension with a counting bound; if the budget is
    exhausted before the search is decided, SearchBudgetExceeded is
    raised so the caller never mistakes an interrupted search for a
    proof of absence.
    """
    want = graph.d if d is None else d
    if want == 0:
        return ()
    nodes = 0

    def extend(prefix: list[int], cand: int) -> Optional[tuple[int, ...]]:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"clique search exceeded {node_budget} nodes")
        if len(prefix) == want:
            return tuple(prefix)
        if len(prefix) + cand.bit_count() < want:
            return None
        for v in _bits(cand):
            prefix.append(v)
            hit = extend(prefix, cand & graph.adjacency[v] & ~((1 << (v + 1)) - 1))
            prefix.pop()
            if hit is not None:
                return hit
        return None

    return extend([], (1 << graph.vertex_count()) - 1)


@dataclass(frozen=True)
class CliqueSearchResult:
    cliques: tuple[tuple[int, ...], ...]
    complete: bool
    nodes: int


def enumerate_size_d_cliques(
    graph: BlockGraph, d: Optional[int] = None, *, node_budget: int = 5_000_000
) -> CliqueSearchResult:
    """All cliques of exactly size d, each reported once, sorted."""
    want = graph.d if d is None else d
    out: list[tuple[int, ...]] = []
    nodes = 0
    complete = True

    def extend(prefix: list[int], cand: int) -> None:
        nonlocal nodes, complete
        if not complete:
            return
        nodes += 1
        if nodes > node_budget:
            complete = False
            return
        if len(prefix) == want:
            out.append(tuple(prefix))
            return
        if len(prefix) + cand.bit_count() < want:
            return
        for v in _bits(cand):
            if not complete:
                return
            prefix.append(v)
            extend(prefix, cand & graph.adjacency[v] & ~((1 << (v + 1)) - 1))
            prefix.pop()

    if want > 0:
        extend([], (1 << graph.vertex_count()) - 1)
    elif want == 0:
        out.append(())
    return CliqueSearchResult(tuple(out), complete, nodes)


def enumerate_maximal_cliques(
    graph: BlockGraph, *, node_budget: int = 5_000_000
) -> CliqueSearchResult:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    out: list[tuple[int, ...]] = []
    nodes = 0
    complete = True

    def bk(r: list[int], p: int, x: int) -> None:
        nonlocal nodes, complete
        if not complete:
            return
        nodes += 1
        if nodes > node_budget:
            complete = False
            return
        if p == 0 and x == 0:
            out.append(tuple(r))
            return
        # pivot: candidate with the most neighbours inside p, lowest index wins
        pivot, best = -1, -1
        for u in _bits(p | x):
            size = (p & graph.adjacency[u]).bit_count()
            if size > best:
                pivot, best = u, size
        for v in _bits(p & ~graph.adjacency[pivot]):
            if not complete:
                return
            r.append(v)
            bk(r, p & graph.adjacency[v], x & graph.adjacency[v])
            r.pop()
            p &= ~(1 << v)
            x |= 1 << v

    bk([], (1 << graph.vertex_count()) - 1, 0)
    return CliqueSearchResult(tuple(sorted(out)), complete, nodes)


def clique_to_tiling(graph: BlockGraph, clique) -> Tiling:
    """Read a clique as a tiling; rejects vertex sets that are no clique."""
    clique = tuple(sorted(set(clique)))
    for i, a in enumerate(clique):
        for b in clique[i + 1:]:
            if not (graph.adjacency[a] >> b) & 1:
                raise ValueError(f"vertices {a} and {b} are not adjacent")
    blocks = _sorted_blocks(graph.blocks[v] for v in clique)
    return Tiling(graph.layer, blocks, PlainShape(graph.layer.m), "clique")


def tiling_to_clique(graph: BlockGraph, tiling: Tiling, *, check: bool = True) -> tuple[int, ...]:
    """Vertex indices of a valid tiling's blocks; the round trip with
    clique_to_tiling is the identity on both sides.

    check=False skips the tiling re-verification (for bulk round trips
    over cliques that were just enumerated from the graph itself).
    """
    if check:
        report = verify_tiling(tiling)
        if not report.valid:
            raise ValueError(f"not a valid tiling: {report.violations}")
    index_of = {block.levels: idx for idx, block in enumerate(graph.blocks)}
    try:
        return tuple(sorted(index_of[block.levels] for block in tiling.blocks))
    except KeyError as exc:
        raise ValueError(f"tiling block not in graph: {exc}") from exc


def block_label(block: Block) -> str:
    """Stable short hash of the block's canonical serialization."""
    payload = json.dumps(block.to_json_obj(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:10]


def to_dot(graph: BlockGraph) -> str:
    """DOT export with vertices labelled by block serialization hash."""
    lines = ["graph blockgraph {"]
    for idx, block in enumerate(graph.blocks):
        lines.append(f'  v{idx} [label="{block_label(block)}"];')
    for i in range(graph.vertex_count()):
        for j in _bits(graph.adjacency[i]):
            if j > i:
                lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
