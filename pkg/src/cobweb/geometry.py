"""Discrete boxes, cobweb layers, blocks, and block enumeration.

A layer <k -> n> over a sequence F is the graded graph whose level s
(k <= s <= n) holds the vertices {1, ..., s_F}, with complete bipartite
edges between consecutive levels.  Its maximal paths (one vertex per
level) correspond one-for-one to the points of the discrete box
[k_F] x ... x [n_F], so everything here is phrased level-wise.

Blocks store one vertex subset per level and never materialise their
path sets; the path set of a block is the product of its level subsets,
so two blocks are max-disjoint exactly when they are disjoint on some
level.  Oracles that do materialise paths are cap-guarded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterator, Optional

from .coefficients import falling_f_factorial
from .errors import CapExceeded
from .fsequence import FSequence, composition, term

DEFAULT_VOLUME_CAP = 5000
DEFAULT_BLOCK_CAP = 200_000


@dataclass(frozen=True)
class Layer:
    """Cobweb layer <k -> n>; level s holds vertices 1..s_F."""

    F: FSequence
    k: int
    n: int

    @property
    def m(self) -> int:
        return self.n - self.k + 1

    def level_size(self, s: int) -> int:
        if not self.k <= s <= self.n:
            raise ValueError(f"level {s} outside span {self.k}..{self.n}")
        return term(self.F, s)

    def level_sizes(self) -> tuple[int, ...]:
        return tuple(term(self.F, s) for s in range(self.k, self.n + 1))

    def volume(self) -> int:
        return falling_f_factorial(self.F, self.n, self.m)


def build_layer(F: FSequence, k: int, n: int) -> Layer:
    if not 1 <= k <= n:
        raise ValueError(f"layer needs 1 <= k <= n, got ({k}, {n})")
    return Layer(F, k, n)


def volume(layer: Layer) -> int:
    return layer.volume()


def iter_max_paths(layer: Layer, *, cap: int = DEFAULT_VOLUME_CAP) -> Iterator[tuple[int, ...]]:
    """All maximal paths (v_k, ..., v_n), lexicographic.  Cap-guarded."""
    if layer.volume() > cap:
        raise CapExceeded(f"volume {layer.volume()} exceeds streaming cap {cap}")
    ranges = [range(1, size + 1) for size in layer.level_sizes()]
    return itertools.product(*ranges)


def count_max_paths(layer: Layer, *, method: str = "formula", cap: int = DEFAULT_VOLUME_CAP) -> int:
    """Number of maximal paths; `stream` actually enumerates them."""
    if method == "formula":
        return layer.volume()
    if method == "stream":
        return sum(1 for _ in iter_max_paths(layer, cap=cap))
    raise ValueError(f"unknown method {method!r}")


def point_to_path(layer: Layer, point) -> tuple[int, ...]:
    """Box point (v_1..v_m) -> maximal path (v_k..v_n); identity on coordinates."""
    point = tuple(point)
    if len(point) != layer.m:
        raise ValueError(f"point needs {layer.m} coordinates")
    for i, v in enumerate(point):
        size = layer.level_size(layer.k + i)
        if not 1 <= v <= size:
            raise ValueError(f"coordinate {i + 1} = {v} outside 1..{size}")
    return point


def path_to_point(layer: Layer, path) -> tuple[int, ...]:
    """Inverse of point_to_path; the round trip is the identity."""
    return point_to_path(layer, path)


@dataclass(frozen=True)
class PlainShape:
    """Block shape with level sizes (sigma(1)_F, ..., sigma(m)_F).

    A concrete sigma picks one orientation; sigma=None denotes the whole
    family of orientations (used when enumerating).
    """

    m: int
    sigma: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class MultiShape:
    """Multi-block shape over a composition (b_1, ..., b_k) of n.

    The base cardinality vector is 1..b_1, 1..b_2, ..., 1..b_k; sigma
    permutes its n entries (None = the whole family).
    """

    parts: tuple[int, ...]
    sigma: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "parts", composition(self.parts))

    def base_vector(self) -> tuple[int, ...]:
        out: list[int] = []
        for b in self.parts:
            out.extend(range(1, b + 1))
        return tuple(out)


ShapeFamily = PlainShape | MultiShape


@dataclass(frozen=True)
class Block:
    """One (multi-)block: a vertex subset per level, bottom to top.

    Identity, ordering and hashing use only (span, levels); sigma is
    bookkeeping for how the shape arose, because sequences with repeated
    terms let distinct orientations produce identical vertex data.
    """

    span: tuple[int, int]
    levels: tuple[tuple[int, ...], ...]
    sigma: tuple[int, ...] = field(compare=False)

    def path_count(self) -> int:
        out = 1
        for level in self.levels:
            out *= len(level)
        return out

    def iter_paths(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*self.levels)

    def level_cardinalities(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    def to_json_obj(self) -> dict:
        return {
            "span": list(self.span),
            "levels": [list(level) for level in self.levels],
            "sigma": list(self.sigma),
        }


def block_from_json(obj: dict) -> Block:
    span = tuple(obj["span"])
    levels = tuple(tuple(sorted(level)) for level in obj["levels"])
    return Block(span, levels, tuple(obj["sigma"]))


def canonical_sigma(index_values: tuple[int, ...], cardinalities: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least permutation sigma with
    index_values[sigma[s] - 1] == cardinalities[s] for every position s."""
    remaining: dict[int, list[int]] = {}
    for idx, value in enumerate(index_values, start=1):
        remaining.setdefault(value, []).append(idx)
    for pool in remaining.values():
        pool.reverse()  # pop() then yields the smallest index first
    sigma = []
    for card in cardinalities:
        pool = remaining.get(card)
        if not pool:
            raise ValueError(
                f"cardinalities {cardinalities} do not arise from {index_values}"
            )
        sigma.append(pool.pop())
    return tuple(sigma)


def _shape_cardinalities(layer: Layer, shape: ShapeFamily) -> tuple[int, ...]:
    """Level cardinalities demanded by a concrete (sigma-carrying) shape."""
    if isinstance(shape, PlainShape):
        if shape.m != layer.m:
            raise ValueError(f"shape has {shape.m} levels, layer has {layer.m}")
        sigma = shape.sigma or tuple(range(1, shape.m + 1))
        if sorted(sigma) != list(range(1, shape.m + 1)):
            raise ValueError(f"sigma {sigma} is not a permutation of 1..{shape.m}")
        return tuple(term(layer.F, s) for s in sigma)
    if layer.k != 1 or sum(shape.parts) != layer.n:
        raise ValueError("multi blocks live on <1 -> n> with parts summing to n")
    base = shape.base_vector()
    sigma = shape.sigma or tuple(range(1, len(base) + 1))
    if sorted(sigma) != list(range(1, len(base) + 1)):
        raise ValueError(f"sigma {sigma} is not a permutation of 1..{len(base)}")
    return tuple(term(layer.F, base[s - 1]) for s in sigma)


def make_block(layer: Layer, shape: ShapeFamily, subsets) -> Block:
    """Validate subsets against the layer and the shape, and build the block."""
    subsets = tuple(tuple(sorted(set(level))) for level in subsets)
    if len(subsets) != layer.m:
        raise ValueError(f"need {layer.m} level subsets, got {len(subsets)}")
    wanted = _shape_cardinalities(layer, shape)
    for i, (subset, want) in enumerate(zip(subsets, wanted)):
        s = layer.k + i
        if not subset:
            raise ValueError(f"level {s} subset is empty")
        if subset[0] < 1 or subset[-1] > layer.level_size(s):
            raise ValueError(f"level {s} subset {subset} outside 1..{layer.level_size(s)}")
        if len(subset) != want:
            raise ValueError(
                f"level {s} subset has {len(subset)} vertices, shape wants {want}"
            )
    sigma = shape.sigma
    if sigma is None:
        if isinstance(shape, PlainShape):
            values = tuple(term(layer.F, s) for s in range(1, layer.m + 1))
        else:
            values = tuple(term(layer.F, v) for v in shape.base_vector())
        sigma = canonical_sigma(values, tuple(len(s) for s in subsets))
    return Block((layer.k, layer.n), subsets, sigma)


def blocks_disjoint(a: Block, b: Block) -> bool:
    """Max-disjointness: some level where the vertex subsets are disjoint.

    Path sets are level-wise products, so this is equivalent to the path
    sets being disjoint.
    """
    if a.span != b.span:
        raise ValueError(f"span mismatch: {a.span} vs {b.span}")
    for la, lb in zip(a.levels, b.levels):
        if not set(la) & set(lb):
            return True
    return False


def _cardinality_vectors(layer: Layer, family: ShapeFamily) -> list[tuple[tuple[int, ...], int]]:
    """Distinct level-cardinality vectors of a shape family, each with the
    number of permutations sigma that produce it."""
    if isinstance(family, PlainShape):
        if family.m != layer.m:
            raise ValueError(f"family has {family.m} levels, layer has {layer.m}")
        values = tuple(term(layer.F, s) for s in range(1, family.m + 1))
    else:
        if layer.k != 1 or sum(family.parts) != layer.n:
            raise ValueError("multi blocks live on <1 -> n> with parts summing to n")
        values = tuple(term(layer.F, v) for v in family.base_vector())
    weight = 1
    for value in set(values):
        weight *= factorial(values.count(value))
    vectors = sorted(set(itertools.permutations(values)))
    return [(vec, weight) for vec in vectors]


def pair_count(layer: Layer, family: ShapeFamily) -> int:
    """Number of (sigma, subsets) pairs, counting duplicate vertex data."""
    total = 0
    sizes = layer.level_sizes()
    for vector, weight in _cardinality_vectors(layer, family):
        product = 1
        for size, want in zip(sizes, vector):
            product *= comb(size, want)
        total += weight * product
    return total


@dataclass(frozen=True)
class BlockFamily:
    blocks: tuple[Block, ...]
    pair_count: int


def block_family(
    layer: Layer, family: ShapeFamily, *, block_cap: int = DEFAULT_BLOCK_CAP
) -> BlockFamily:
    """All distinct blocks of the family, canonically ordered.

    Distinctness is by level subsets; the pair count records how many
    (sigma, subsets) pairs collapsed onto them.
    """
    pairs = pair_count(layer, family)
    if pairs > block_cap:
        raise CapExceeded(f"{pairs} (sigma, subsets) pairs exceed cap {block_cap}")
    sizes = layer.level_sizes()
    if isinstance(family, PlainShape):
        index_values = tuple(term(layer.F, s) for s in range(1, family.m + 1))
    else:
        index_values = tuple(term(layer.F, v) for v in family.base_vector())
    seen: dict[tuple, Block] = {}
    for vector, _ in _cardinality_vectors(layer, family):
        if any(want > size for size, want in zip(sizes, vector)):
            continue
        sigma = canonical_sigma(index_values, vector)
        choices = [
            itertools.combinations(range(1, size + 1), want)
            for size, want in zip(sizes, vector)
        ]
        for subsets in itertools.product(*choices):
            key = subsets
            if key not in seen:
                seen[key] = Block((layer.k, layer.n), subsets, sigma)
    blocks = tuple(seen[key] for key in sorted(seen))
    return BlockFamily(blocks, pairs)


def enumerate_blocks(
    layer: Layer, family: ShapeFamily, *, block_cap: int = DEFAULT_BLOCK_CAP
) -> Iterator[Block]:
    """Deduplicated stream of the family's blocks, canonical order."""
    return iter(block_family(layer, family, block_cap=block_cap).blocks)
