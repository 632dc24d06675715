"""Layers, boxes, blocks, disjointness, and block enumeration."""

import itertools

import pytest

from cobweb import (
    CapExceeded,
    Fp,
    Gaussian,
    Natural,
    PlainShape,
    MultiShape,
    block_family,
    blocks_disjoint,
    build_layer,
    count_max_paths,
    enumerate_blocks,
    iter_max_paths,
    make_block,
    path_to_point,
    point_to_path,
    term,
    volume,
)
from conftest import lambda_families


class TestLayer:
    def test_level_sizes(self):
        layer = build_layer(Natural(), 2, 4)
        assert layer.level_sizes() == (2, 3, 4)
        assert layer.m == 3

    def test_single_level(self):
        layer = build_layer(Gaussian(2), 4, 4)
        assert layer.level_sizes() == (15,)
        assert volume(layer) == 15

    def test_fibonacci_levels(self):
        layer = build_layer(Fp(1), 1, 5)
        assert layer.level_sizes() == (1, 1, 2, 3, 5)

    def test_invalid_range(self):
        with pytest.raises(ValueError):
            build_layer(Natural(), 3, 2)
        with pytest.raises(ValueError):
            build_layer(Natural(), 0, 2)


class TestVolume:
    def test_box_volume(self):
        assert volume(build_layer(Natural(), 2, 4)) == 24

    def test_whole_box_is_factorial(self):
        # <1 -> 4> over the naturals holds 4! maximal paths
        assert volume(build_layer(Natural(), 1, 4)) == 24

    def test_stream_agrees_with_formula(self):
        for F in lambda_families():
            for k in range(1, 6):
                for n in range(k, 7):
                    layer = build_layer(F, k, n)
                    if layer.volume() > 5000:
                        continue
                    assert count_max_paths(layer, method="stream") == layer.volume()

    def test_stream_refuses_over_cap(self):
        layer = build_layer(Natural(), 1, 8)
        with pytest.raises(CapExceeded):
            count_max_paths(layer, method="stream", cap=100)


class TestPointPathBijection:
    def test_round_trip_exhaustive(self):
        layer = build_layer(Natural(), 2, 4)
        paths = set(iter_max_paths(layer))
        points = set(itertools.product(*[range(1, s + 1) for s in layer.level_sizes()]))
        assert {point_to_path(layer, p) for p in points} == paths
        for p in points:
            assert path_to_point(layer, point_to_path(layer, p)) == p

    def test_single_level(self):
        layer = build_layer(Natural(), 3, 3)
        assert point_to_path(layer, (2,)) == (2,)

    def test_out_of_range_rejected(self):
        layer = build_layer(Natural(), 2, 4)
        with pytest.raises(ValueError):
            point_to_path(layer, (3, 1, 1))
        with pytest.raises(ValueError):
            point_to_path(layer, (1, 1))


class TestMakeBlock:
    def test_identity_orientation(self):
        layer = build_layer(Natural(), 3, 4)
        block = make_block(layer, PlainShape(2, (1, 2)), [(1,), (2, 4)])
        assert block.level_cardinalities() == (1, 2)

    def test_swapped_orientation(self):
        layer = build_layer(Natural(), 3, 4)
        block = make_block(layer, PlainShape(2, (2, 1)), [(1, 3), (2,)])
        assert block.level_cardinalities() == (2, 1)
        assert block.sigma == (2, 1)

    def test_multi_block_level_vector(self):
        layer = build_layer(Natural(), 1, 4)
        block = make_block(layer, MultiShape((2, 2)), [(1,), (1, 2), (1,), (2, 4)])
        assert block.level_cardinalities() == (1, 2, 1, 2)

    def test_cardinality_mismatch_rejected(self):
        layer = build_layer(Natural(), 3, 4)
        with pytest.raises(ValueError):
            make_block(layer, PlainShape(2, (1, 2)), [(1, 2), (2, 4)])

    def test_subset_outside_level_rejected(self):
        layer = build_layer(Natural(), 3, 4)
        with pytest.raises(ValueError):
            make_block(layer, PlainShape(2, (1, 2)), [(4,), (2, 4)])


class TestDisjointness:
    def _block(self, layer, subsets):
        # disjointness is shape-agnostic, so build raw blocks directly
        from cobweb.geometry import Block
        subsets = tuple(tuple(sorted(s)) for s in subsets)
        return Block((layer.k, layer.n), subsets, tuple(range(1, layer.m + 1)))

    def test_identical_blocks_intersect(self):
        layer = build_layer(Natural(), 2, 3)
        a = self._block(layer, [(1,), (1, 2)])
        assert not blocks_disjoint(a, a)

    def test_disjoint_top_levels(self):
        layer = build_layer(Natural(), 2, 3)
        a = self._block(layer, [(1,), (1, 2)])
        b = self._block(layer, [(1,), (3,)])
        assert blocks_disjoint(a, b)

    def test_span_mismatch_rejected(self):
        a = self._block(build_layer(Natural(), 2, 3), [(1,), (1, 2)])
        b = self._block(build_layer(Natural(), 3, 4), [(1,), (1, 2)])
        with pytest.raises(ValueError):
            blocks_disjoint(a, b)

    def test_levelwise_equals_pathwise(self):
        layer = build_layer(Natural(), 2, 4)
        blocks = list(enumerate_blocks(layer, PlainShape(3)))
        for a, b in itertools.combinations(blocks[:40], 2):
            explicit = not (set(a.iter_paths()) & set(b.iter_paths()))
            assert blocks_disjoint(a, b) == explicit


class TestEnumerateBlocks:
    def test_pair_count_example(self):
        fam = block_family(build_layer(Natural(), 3, 4), PlainShape(2))
        assert fam.pair_count == 30
        assert len(fam.blocks) == 30

    def test_single_level_blocks(self):
        fam = block_family(build_layer(Natural(), 4, 4), PlainShape(1))
        assert len(fam.blocks) == 4

    def test_duplicate_shapes_collapse_for_fibonacci(self):
        # 1_F = 2_F means two orientations describe each block
        fam = block_family(build_layer(Fp(1), 1, 3), PlainShape(3))
        assert fam.pair_count == 2
        assert len(fam.blocks) == 1

    def test_pair_count_matches_literal_enumeration(self):
        for F in (Natural(), Fp(1), Gaussian(2)):
            for k in range(1, 4):
                for n in range(k, k + 3):
                    layer = build_layer(F, k, n)
                    if max(layer.level_sizes()) > 8:
                        continue
                    count = 0
                    for sigma in itertools.permutations(range(1, layer.m + 1)):
                        cards = [term(F, s) for s in sigma]
                        pools = [
                            list(itertools.combinations(range(1, size + 1), c))
                            for size, c in zip(layer.level_sizes(), cards)
                        ]
                        for _ in itertools.product(*pools):
                            count += 1
                    assert block_family(layer, PlainShape(layer.m)).pair_count == count

    def test_multi_family_example(self):
        layer = build_layer(Natural(), 1, 4)
        fam = block_family(layer, MultiShape((2, 2)))
        # every block realises a permutation of the vector (1, 2, 1, 2)
        for block in fam.blocks:
            assert sorted(block.level_cardinalities()) == [1, 1, 2, 2]

    def test_cap_refuses(self):
        with pytest.raises(CapExceeded):
            block_family(build_layer(Natural(), 2, 7), PlainShape(6), block_cap=100)

    def test_deterministic_order(self):
        layer = build_layer(Natural(), 3, 4)
        first = list(enumerate_blocks(layer, PlainShape(2)))
        second = list(enumerate_blocks(layer, PlainShape(2)))
        assert first == second
        assert first == sorted(first, key=lambda b: b.levels)


class TestBlockJson:
    def test_round_trip(self):
        from cobweb.geometry import block_from_json

        layer = build_layer(Natural(), 3, 4)
        block = make_block(layer, PlainShape(2, (2, 1)), [(1, 3), (2,)])
        again = block_from_json(block.to_json_obj())
        assert again == block
        assert again.sigma == block.sigma
