"""Layer tilings: recursive construction, verification, counting, search.

The constructive tiler works on "virtual layers": lists of (physical
level, vertex set) pairs whose sizes follow the profile k'_F .. n'_F of
some span.  One recursion step splits the top level

    n'_F = lambda_K * (k'-1)_F + lambda_M * m_F        (m = n'-k'+1 levels)

into lambda_M batches of m_F vertices and lambda_K batches of (k'-1)_F
vertices.  Every m_F-batch becomes the top level of blocks finished in
the one-level-shorter sub-layer; every (k'-1)_F-batch is rotated below
the remaining levels, giving a virtual layer one span lower to tile with
full-height blocks.  Steps with a zero coefficient are skipped.  The
recursion bottoms out at single-level layers (split into groups of 1_F
vertices) and at spans starting at 1 (the whole layer is one block).

The multi-block tiler peels the top level of <1 -> n> the same way, one
batch group per composition part, recursing on the decremented part.

Which vertices go into which batch is the only free choice; it is
delegated to a ChoiceStrategy.  The exhaustive strategy enumerates every
ordered batch assignment, which reproduces the construction-count
recurrence exactly; distinct tilings can be fewer, because sequences
with repeated terms let different choices assemble the same block set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, Optional

from .errors import CapExceeded, LambdaRuleError
from .fsequence import (
    FSequence,
    composition,
    lambda_composition,
    lambda_split,
    parse_family_spec,
    term,
)
from .geometry import (
    DEFAULT_BLOCK_CAP,
    DEFAULT_VOLUME_CAP,
    Block,
    Layer,
    MultiShape,
    PlainShape,
    ShapeFamily,
    block_family,
    build_layer,
    canonical_sigma,
)


# ---------------------------------------------------------------------------
# Choice strategies
# ---------------------------------------------------------------------------

class ChoiceStrategy:
    """Decides how a level's vertices are dealt into ordered batches."""

    def assignments(self, verts: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[tuple]:
        raise NotImplementedError

    def fresh(self) -> "ChoiceStrategy":
        """Per-construction instance; stateful strategies reset here."""
        return self


class LowestLabels(ChoiceStrategy):
    """Deal batches in ascending label order; fully deterministic."""

    def assignments(self, verts, sizes):
        batches = []
        pos = 0
        for size in sizes:
            batches.append(verts[pos:pos + size])
            pos += size
        yield tuple(batches)


class Seeded(ChoiceStrategy):
    """Pseudo-random single assignment, reproducible from the seed."""

    def __init__(self, seed: int, _rng: Optional[random.Random] = None):
        self.seed = seed
        self._rng = _rng

    def fresh(self):
        return Seeded(self.seed, random.Random(self.seed))

    def assignments(self, verts, sizes):
        rng = self._rng if self._rng is not None else random.Random(self.seed)
        shuffled = list(verts)
        rng.shuffle(shuffled)
        batches = []
        pos = 0
        for size in sizes:
            batches.append(tuple(sorted(shuffled[pos:pos + size])))
            pos += size
        yield tuple(batches)


class Exhaustive(ChoiceStrategy):
    """Every ordered batch assignment, lexicographic."""

    def assignments(self, verts, sizes):
        def rec(pool: tuple[int, ...], remaining: tuple[int, ...]):
            if not remaining:
                yield ()
                return
            for batch in itertools.combinations(pool, remaining[0]):
                rest_pool = tuple(v for v in pool if v not in set(batch))
                for tail in rec(rest_pool, remaining[1:]):
                    yield (batch,) + tail

        yield from rec(tuple(verts), tuple(sizes))


def parse_strategy(text: str) -> ChoiceStrategy:
    text = text.strip().lower()
    if text == "lowest":
        return LowestLabels()
    if text == "all":
        return Exhaustive()
    if text.startswith("seed:"):
        return Seeded(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown strategy {text!r}")


# ---------------------------------------------------------------------------
# Tilings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tiling:
    layer: Layer
    blocks: tuple[Block, ...]
    kind: ShapeFamily
    provenance: str

    def key(self) -> tuple:
        """Block-set identity, independent of sigma and provenance."""
        return tuple(sorted(block.levels for block in self.blocks))

    def to_json_obj(self) -> dict:
        return {
            "family": self.layer.F.spec_string(),
            "span": [self.layer.k, self.layer.n],
            "blocks": [block.to_json_obj() for block in self.blocks],
            "provenance": self.provenance,
        }


def _sorted_blocks(blocks) -> tuple[Block, ...]:
    return tuple(sorted(blocks, key=lambda b: b.levels))


def _assemble_plain(layer: Layer, raw: list[dict[int, tuple[int, ...]]]) -> tuple[Block, ...]:
    values = tuple(term(layer.F, s) for s in range(1, layer.m + 1))
    blocks = []
    for mapping in raw:
        levels = tuple(mapping[s] for s in range(layer.k, layer.n + 1))
        sigma = canonical_sigma(values, tuple(len(lv) for lv in levels))
        blocks.append(Block((layer.k, layer.n), levels, sigma))
    return _sorted_blocks(blocks)


def _full_level(F: FSequence, s: int) -> tuple[int, ...]:
    return tuple(range(1, term(F, s) + 1))


def _plain_options(
    F: FSequence,
    levels: tuple[tuple[int, tuple[int, ...]], ...],
    lo: int,
    hi: int,
    chooser: ChoiceStrategy,
) -> Iterator[list[dict[int, tuple[int, ...]]]]:
    """All completions of a virtual layer into full-height block maps.

    `levels` pairs each virtual level, bottom to top, with its physical
    level; entry s must hold exactly (lo+s)_F vertices.  Each yielded
    option is one finished tiling of the virtual layer, a list of
    {physical level: vertex tuple} maps.  Options stream lazily; only
    sub-layer option lists are materialised (they are needed once per
    batch combination).
    """
    m = hi - lo + 1
    if m == 1:
        phys, verts = levels[0]
        unit = term(F, 1)
        yield [{phys: verts[i:i + unit]} for i in range(0, len(verts), unit)]
        return
    if lo == 1:
        yield [{phys: verts for phys, verts in levels}]
        return

    lam = lambda_split(F, lo - 1, m)
    phys_top, top = levels[-1]
    sizes = (term(F, m),) * lam.lambda_m + (term(F, lo - 1),) * lam.lambda_k
    for batches in chooser.assignments(top, sizes):
        m_batches = batches[:lam.lambda_m]
        k_batches = batches[lam.lambda_m:]
        per_batch: list[list[list[dict[int, tuple[int, ...]]]]] = []
        for batch in m_batches:
            subs = _plain_options(F, levels[:-1], lo, hi - 1, chooser)
            per_batch.append(
                [[{**blk, phys_top: batch} for blk in sub] for sub in subs]
            )
        for batch in k_batches:
            virtual = ((phys_top, batch),) + levels[:-1]
            per_batch.append(list(_plain_options(F, virtual, lo - 1, hi - 1, chooser)))
        for combo in itertools.product(*per_batch):
            yield [blk for sub in combo for blk in sub]


def construct_tiling(
    F: FSequence, k: int, n: int, strategy: Optional[ChoiceStrategy] = None
) -> Tiling:
    """Build one tiling of <k -> n> by the recursive construction.

    With the exhaustive strategy only the first choice sequence would be
    kept, and that coincides with lowest-labels; it is substituted here
    so a single construction never pays for the whole choice tree.
    """
    layer = build_layer(F, k, n)
    if isinstance(strategy, Exhaustive):
        strategy = LowestLabels()
    chooser = (strategy or LowestLabels()).fresh()
    levels = tuple((s, _full_level(F, s)) for s in range(k, n + 1))
    first = next(_plain_options(F, levels, k, n, chooser))
    blocks = _assemble_plain(layer, first)
    label = type(chooser).__name__.lower()
    return Tiling(layer, blocks, PlainShape(layer.m), f"construct:{label}")


def enumerate_construction_tilings(F: FSequence, k: int, n: int) -> Iterator[Tiling]:
    """One tiling per exhaustive choice sequence, repeats included."""
    layer = build_layer(F, k, n)
    levels = tuple((s, _full_level(F, s)) for s in range(k, n + 1))
    for option in _plain_options(F, levels, k, n, Exhaustive()):
        yield Tiling(layer, _assemble_plain(layer, option), PlainShape(layer.m), "construct:exhaustive")


@dataclass(frozen=True)
class ConstructionCensus:
    sequences: int
    distinct: int


def construction_census(F: FSequence, k: int, n: int, *, limit: int = 1_000_000) -> ConstructionCensus:
    """Exhaustive-strategy counts: choice sequences and distinct tilings."""
    expected = count_construction_tilings(F, k, n)
    if expected > limit:
        raise CapExceeded(f"{expected} choice sequences exceed limit {limit}")
    levels = tuple((s, _full_level(F, s)) for s in range(k, n + 1))
    span = range(k, n + 1)
    sequences = 0
    distinct = set()
    for option in _plain_options(F, levels, k, n, Exhaustive()):
        sequences += 1
        distinct.add(tuple(sorted(tuple(blk[s] for s in span) for blk in option)))
    return ConstructionCensus(sequences, len(distinct))


def _assemble_multi(layer: Layer, parts: tuple[int, ...], raw) -> tuple[Block, ...]:
    base_values = tuple(term(layer.F, v) for v in MultiShape(parts).base_vector())
    blocks = []
    for mapping in raw:
        levels = tuple(mapping[s] for s in range(1, layer.n + 1))
        sigma = canonical_sigma(base_values, tuple(len(lv) for lv in levels))
        blocks.append(Block((1, layer.n), levels, sigma))
    return _sorted_blocks(blocks)


def _multi_options(
    F: FSequence, parts: tuple[int, ...], n_cur: int, chooser: ChoiceStrategy
) -> Iterator[list[dict[int, tuple[int, ...]]]]:
    active = [(i, b) for i, b in enumerate(parts) if b > 0]
    if len(active) == 1:
        yield [{s: _full_level(F, s) for s in range(1, n_cur + 1)}]
        return

    lams = lambda_composition(F, tuple(b for _, b in active))
    top = _full_level(F, n_cur)
    sizes: list[int] = []
    slots: list[int] = []
    for (idx, b), lam in zip(active, lams):
        sizes.extend([term(F, b)] * lam)
        slots.extend([idx] * lam)
    for batches in chooser.assignments(top, tuple(sizes)):
        per_batch = []
        for batch, idx in zip(batches, slots):
            smaller = parts[:idx] + (parts[idx] - 1,) + parts[idx + 1:]
            per_batch.append([
                [{**blk, n_cur: batch} for blk in sub]
                for sub in _multi_options(F, smaller, n_cur - 1, chooser)
            ])
        for combo in itertools.product(*per_batch):
            yield [blk for sub in combo for blk in sub]


def construct_multi_tiling(
    F: FSequence, n: int, parts, strategy: Optional[ChoiceStrategy] = None
) -> Tiling:
    """Partition <1 -> n> into multi-blocks over the given composition."""
    parts = composition(parts)
    if sum(parts) != n:
        raise ValueError(f"composition {parts} does not sum to {n}")
    layer = build_layer(F, 1, n)
    if isinstance(strategy, Exhaustive):
        strategy = LowestLabels()
    chooser = (strategy or LowestLabels()).fresh()
    first = next(_multi_options(F, parts, n, chooser))
    blocks = _assemble_multi(layer, parts, first)
    label = type(chooser).__name__.lower()
    return Tiling(layer, blocks, MultiShape(parts), f"construct-multi:{label}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    violations: tuple[str, ...]


def _level_masks(block: Block) -> tuple[int, ...]:
    return tuple(
        sum(1 << (v - 1) for v in level) for level in block.levels
    )


def verify_tiling(tiling: Tiling, *, volume_cap: int = DEFAULT_VOLUME_CAP) -> VerificationReport:
    """Check shapes, pairwise disjointness, path-count total, and (when the
    volume is small enough) the explicit path cover."""
    layer = tiling.layer
    violations: list[str] = []

    if isinstance(tiling.kind, PlainShape):
        wanted = sorted(term(layer.F, s) for s in range(1, layer.m + 1))
    else:
        wanted = sorted(term(layer.F, v) for v in tiling.kind.base_vector())
        if layer.k != 1:
            violations.append("multi tiling on a layer not starting at level 1")
    for b_idx, block in enumerate(tiling.blocks):
        if block.span != (layer.k, layer.n):
            violations.append(f"block {b_idx}: span {block.span} mismatches layer")
            continue
        for i, level in enumerate(block.levels):
            s = layer.k + i
            if not level:
                violations.append(f"block {b_idx}: level {s} empty")
            elif level[0] < 1 or level[-1] > layer.level_size(s):
                violations.append(f"block {b_idx}: level {s} outside layer")
        if sorted(block.level_cardinalities()) != wanted:
            violations.append(
                f"block {b_idx}: cardinalities {block.level_cardinalities()} "
                f"do not realise the shape"
            )

    masks = [_level_masks(block) for block in tiling.blocks]
    for i in range(len(tiling.blocks)):
        for j in range(i + 1, len(tiling.blocks)):
            if all(ma & mb for ma, mb in zip(masks[i], masks[j])):
                violations.append(f"blocks {i} and {j} share a maximal path")

    total_paths = sum(block.path_count() for block in tiling.blocks)
    if total_paths != layer.volume():
        violations.append(
            f"blocks cover {total_paths} paths, layer has {layer.volume()}"
        )

    if layer.volume() <= volume_cap:
        sizes = layer.level_sizes()
        index_of = {}
        for idx, path in enumerate(itertools.product(*[range(1, s + 1) for s in sizes])):
            index_of[path] = idx
        covered = 0
        overlap = False
        for block in tiling.blocks:
            for path in block.iter_paths():
                bit = 1 << index_of[path]
                if covered & bit:
                    overlap = True
                covered |= bit
        if overlap:
            violations.append("explicit path sets overlap")
        if covered != (1 << layer.volume()) - 1:
            violations.append("explicit path sets do not cover the layer")

    return VerificationReport(not violations, tuple(sorted(set(violations))))


# ---------------------------------------------------------------------------
# Construction count
# ---------------------------------------------------------------------------

def count_construction_tilings(F: FSequence, k: int, n: int) -> int:
    """Number of choice sequences of the recursive construction.

    Follows the construction tree exactly: the top level of <k -> n> is
    dealt into lambda_M batches of m_F and lambda_K batches of (k-1)_F
    vertices, each batch finishing an independent sub-construction, so

        count(k, n) = n_F! / ((m_F!)^lambda_M ((k-1)_F!)^lambda_K)
                      * count(k, n-1)^lambda_M * count(k-1, n-1)^lambda_K

    where the factorials are ordinary factorials of the term values (the
    leading factor is the multinomial dealing n_F labelled vertices into
    the batches).  Note this counts constructions; for sequences with
    repeated terms distinct choices can assemble identical tilings, so
    the number of distinct tilings can be strictly smaller.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got ({k}, {n})")

    @lru_cache(maxsize=None)
    def count(lo: int, hi: int) -> int:
        if lo == hi or lo == 1:
            return 1
        m = hi - lo + 1
        lam = lambda_split(F, lo - 1, m)
        if lam.lambda_m * term(F, m) + lam.lambda_k * term(F, lo - 1) != term(F, hi):
            raise LambdaRuleError(
                f"{F.spec_string()}: batch sizes do not exhaust level {hi}"
            )
        ways, rem = divmod(
            factorial(term(F, hi)),
            factorial(term(F, m)) ** lam.lambda_m
            * factorial(term(F, lo - 1)) ** lam.lambda_k,
        )
        if rem:
            raise LambdaRuleError(f"{F.spec_string()}: multinomial not exact at {hi}")
        return ways * count(lo, hi - 1) ** lam.lambda_m * count(lo - 1, hi - 1) ** lam.lambda_k

    return count(k, n)


# ---------------------------------------------------------------------------
# Exhaustive tiling enumeration (exact cover oracle)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TilingSearchResult:
    """Outcome of the exact-cover search.

    `complete` means the whole search space was traversed: the total is
    exact, and total == 0 certifies that no tiling exists.
    """

    tilings: tuple[Tiling, ...]
    total: int
    complete: bool
    nodes: int


def enumerate_all_tilings(
    layer: Layer,
    family: ShapeFamily,
    *,
    limit: int = 10_000,
    node_budget: int = 2_000_000,
    volume_cap: int = DEFAULT_VOLUME_CAP,
    block_cap: int = DEFAULT_BLOCK_CAP,
) -> TilingSearchResult:
    """Every tiling of the layer by blocks of the family, by brute force.

    Backtracking exact cover over the deduplicated block family, always
    branching on the lexicographically least uncovered path.  Collects at
    most `limit` tilings but keeps counting; stops early (complete=False)
    only when the node budget runs out.
    """
    if layer.volume() > volume_cap:
        raise CapExceeded(f"volume {layer.volume()} exceeds cap {volume_cap}")
    blocks = block_family(layer, family, block_cap=block_cap).blocks

    sizes = layer.level_sizes()
    index_of = {
        path: idx
        for idx, path in enumerate(itertools.product(*[range(1, s + 1) for s in sizes]))
    }
    volume = len(index_of)
    full = (1 << volume) - 1

    masks = []
    for block in blocks:
        mask = 0
        for path in block.iter_paths():
            mask |= 1 << index_of[path]
        masks.append(mask)
    by_path: list[list[int]] = [[] for _ in range(volume)]
    for b_idx, mask in enumerate(masks):
        probe = mask
        while probe:
            low = probe & -probe
            by_path[low.bit_length() - 1].append(b_idx)
            probe ^= low

    found: list[tuple[int, ...]] = []
    total = 0
    nodes = 0
    complete = True

    def search(covered: int, chosen: list[int]) -> None:
        nonlocal total, nodes, complete
        if not complete:
            return
        nodes += 1
        if nodes > node_budget:
            complete = False
            return
        if covered == full:
            total += 1
            if len(found) < limit:
                found.append(tuple(chosen))
            return
        lowest = (~covered & full)
        lowest = (lowest & -lowest).bit_length() - 1
        for b_idx in by_path[lowest]:
            if not complete:
                return
            if masks[b_idx] & covered:
                continue
            chosen.append(b_idx)
            search(covered | masks[b_idx], chosen)
            chosen.pop()

    search(0, [])
    tilings = tuple(
        Tiling(layer, _sorted_blocks(blocks[i] for i in pick), family, "exhaustive")
        for pick in found
    )
    return TilingSearchResult(tilings, total, complete, nodes)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def tiling_from_json(obj: dict) -> Tiling:
    """Rebuild a tiling from its JSON object; the shape kind is inferred
    from the blocks' level cardinalities."""
    from .geometry import block_from_json

    F = parse_family_spec(obj["family"])
    k, n = obj["span"]
    layer = build_layer(F, k, n)
    blocks = _sorted_blocks(block_from_json(b) for b in obj["blocks"])

    kind: ShapeFamily = PlainShape(layer.m)
    if blocks:
        cards = sorted(blocks[0].level_cardinalities())
        plain = sorted(term(F, s) for s in range(1, layer.m + 1))
        if cards != plain and k == 1:
            kind = MultiShape(_parts_from_cardinalities(F, n, cards))
    return Tiling(layer, blocks, kind, obj.get("provenance", ""))


def _parts_from_cardinalities(F: FSequence, n: int, cards: list[int]) -> tuple[int, ...]:
    """Recover a composition whose base vector has these term values.

    The base vector of (b_1, ..., b_k) holds term(1..b_i) per part, so a
    matching composition is found by repeatedly peeling the longest
    prefix run term(1), ..., term(b) present.  Part order is not
    recoverable and not needed (validation is multiset-based).
    """
    from collections import Counter

    remaining = Counter(cards)
    parts = []
    while remaining:
        b = 0
        for probe in range(1, n + 1):
            need = Counter(term(F, i) for i in range(1, probe + 1))
            if all(remaining[v] >= c for v, c in need.items()):
                b = probe
            else:
                break
        if b == 0:
            raise ValueError(f"cardinalities {cards} match no composition")
        remaining -= Counter(term(F, i) for i in range(1, b + 1))
        parts.append(b)
    return composition(sorted(parts, reverse=True))
