import itertools
import random

import pytest

from conftest import q
from pwlvo.cone import (
    build, in_int, in_k, in_k_minus_l, k_minus_l_pieces, project, quotient_check, sample_in_cone,
    translation_invariance_check,
)
from pwlvo.errors import WholeSpaceCone, ZeroRow
from pwlvo.exactmath import identity, matmul, matvec
from pwlvo.semiclosed import Region, difference, region_contains

ORTHANT = [(1, 0), (0, 1)]
GRID = list(itertools.product([q(k) / 2 for k in range(-6, 7)], repeat=2))


class TestBuild:
    def test_orthant(self):
        K = build(ORTHANT)
        assert K.y0.rank == 0
        assert K.pi == identity(2)
        assert K.k1_rows == ((1, 0), (0, 1))

    def test_single_row(self):
        K = build([(1, 0)])
        assert K.y0.rank == 1 and K.y0.contains((0, 1))
        assert K.y1.basis == ((1, 0),)
        assert K.k1_rows == ((1,),)

    def test_degenerate(self):
        K = build([(1, 0), (-1, 0)])
        assert K.y0.rank == 1 and K.y0.contains((0, 1))
        assert not K.has_interior
        assert len(k_minus_l_pieces(K)) == 0

    def test_rejects_zero_row_and_no_rows(self):
        with pytest.raises(ZeroRow):
            build([(1, 0), (0, 0)])
        with pytest.raises(WholeSpaceCone):
            build([])

    @pytest.mark.parametrize("rows", [ORTHANT, [(1, 0)], [(1, 1, 0), (0, 1, -1)], [(1, 0), (-1, 0)]])
    def test_projection_invariants(self, rows):
        K = build(rows)
        assert matmul(K.pi, K.pi) == K.pi
        for b in K.y0.basis:
            assert not any(matvec(K.pi, b))


class TestMembership:
    def test_interior(self):
        K = build(ORTHANT)
        assert in_int(K, (-1, -1))
        assert not in_int(K, (0, -1))
        assert in_int(K, (q("-1/2"), q("-1/2")))

    def test_minus_lineality(self):
        K = build(ORTHANT)
        assert in_k_minus_l(K, (0, -1))
        assert not in_k_minus_l(K, (0, 0))
        assert not in_k_minus_l(K, (1, -5))

    def test_pieces_of_orthant(self):
        R = k_minus_l_pieces(build(ORTHANT))
        assert len(R) == 2
        assert [len(p.strict) for p in R.pieces] == [1, 1]

    def test_single_row_piece(self):
        R = k_minus_l_pieces(build([(1, 0)]))
        assert len(R) == 1 and region_contains(R, (-1, 9)) and not region_contains(R, (0, 9))

    @pytest.mark.parametrize("rows", [ORTHANT, [(1, 0)], [(1, 2), (-1, 1)], [(1, 0), (-1, 0)]])
    def test_pieces_match_membership(self, rows):
        K = build(rows)
        R = k_minus_l_pieces(K)
        for y in GRID:
            assert region_contains(R, y) == in_k_minus_l(K, y)
            if in_int(K, y):
                assert in_k_minus_l(K, y)


class TestQuotient:
    def test_orthant(self):
        assert quotient_check(build(ORTHANT), (0, -1))

    def test_single_row(self):
        K = build([(1, 0)])
        assert quotient_check(K, (-1, 7)) == in_k_minus_l(K, (-1, 7)) is True

    def test_lineality_point(self):
        assert not quotient_check(build([(1, 0)]), (0, 5))

    @pytest.mark.parametrize("rows", [ORTHANT, [(1, 0)], [(1, 1), (1, -1)], [(1, 0), (-1, 0)], [(0, 1), (1, 1)]])
    def test_equivalent_to_membership(self, rows):
        K = build(rows)
        for y in GRID:
            assert quotient_check(K, y) == in_k_minus_l(K, y)

    def test_project_kills_lineality(self):
        K = build([(1, 0)])
        assert project(K, (0, 3)) == (0,)


class TestTranslation:
    def test_examples(self):
        K = build(ORTHANT)
        assert translation_invariance_check(K, [((0, -1), (-1, 0)), ((-1, -1), (0, 0))])

    def test_skips_pairs_outside_cone(self):
        K = build(ORTHANT)
        assert translation_invariance_check(K, [((0, -1), (1, 1))])

    def test_random_samples(self):
        rng = random.Random(7)
        K = build([(1, 0), (1, 1), (0, 1)])
        pairs = [(sample_in_cone(K, rng), sample_in_cone(K, rng)) for _ in range(100)]
        assert all(in_k(K, w) for w, _ in pairs)
        assert translation_invariance_check(K, pairs)


def test_cone_minus_strict_part_is_lineality():
    K = build([(1, 0)])
    rest = Region(2, (K.as_sc(),))
    for C in k_minus_l_pieces(K).pieces:
        rest = Region(2, tuple(p for piece in rest.pieces for p in difference(piece, C).pieces))
    for y in GRID:
        assert region_contains(rest, y) == K.y0.contains(y)
