import itertools

from hypothesis import given, settings, strategies as st

from conftest import q, region, row, sc
from pwlvo.exactmath import strict_feasible
from pwlvo.polyhedron import VPolyhedron, affine_image, minkowski_sum, to_generators, to_halfspaces
from pwlvo.semiclosed import (
    Region, SemiClosedPolyhedron, difference, fm_project, region_difference, region_is_closed,
    region_is_empty, sc_affine_image, sc_contains, sc_is_empty, sc_subset, sc_sum,
)


def _same(A: SemiClosedPolyhedron, B: SemiClosedPolyhedron) -> bool:
    return sc_subset(A, B) and sc_subset(B, A)


def _same_region(A: Region, B: Region) -> bool:
    return region_is_empty(region_difference(A, B)) and region_is_empty(region_difference(B, A))


GRID1 = [q(k) / 4 for k in range(-16, 17)]
GRID2 = list(itertools.product(GRID1[::2], GRID1[::2]))


class TestMembership:
    def test_contradiction_empty(self):
        assert sc_is_empty(sc(1, ((1,), "<=", 0), ((1,), ">", 0)))

    def test_strict_piece(self):
        S = sc(2, ((1, 0), "=", 0), ((0, 1), "<", -1))
        assert sc_contains(S, (0, -2))
        assert not sc_contains(S, (0, -1))

    def test_square_corner(self):
        S = sc(2, ((1, 0), "<=", 1), ((1, 0), ">=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0))
        assert sc_contains(S, (1, 1))


class TestDifference:
    def test_interval(self):
        R = difference(sc(1, ((1,), ">=", 0), ((1,), "<=", 2)), sc(1, ((1,), ">", 1), ((1,), "<=", 2)))
        assert _same_region(R, region(1, [((1,), ">=", 0), ((1,), "<=", 1)]))

    def test_cone_minus_strict_part_is_origin(self):
        K = sc(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0))
        C = sc(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0), ((1, 1), "<", 0))
        assert _same_region(difference(K, C), region(2, [((1, 0), "=", 0), ((0, 1), "=", 0)]))

    def test_self_difference(self):
        P = sc(2, ((1, 1), "<=", 1), ((1, 0), ">", -1))
        assert region_is_empty(difference(P, P))

    def test_pieces_disjoint(self):
        P = sc(2, ((1, 0), ">=", -2), ((1, 0), "<=", 2), ((0, 1), ">=", -2), ((0, 1), "<=", 2))
        cut = sc(2, ((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "=", 1))
        R = difference(P, cut)
        for a, b in itertools.combinations(R.pieces, 2):
            assert strict_feasible(list(a.rows + b.rows), 2) is None


class TestRegionDifference:
    def test_no_cuts(self):
        R = region(2, [((1, 0), "<=", 0)])
        assert region_difference(R, Region(2)) == R

    def test_square_minus_open_half(self):
        sq = [((1, 0), ">=", 0), ((1, 0), "<=", 1), ((0, 1), ">=", 0), ((0, 1), "<=", 1)]
        R = region_difference(region(2, sq), region(2, [((1, 0), ">", q("1/2"))]))
        assert _same_region(R, region(2, sq + [((1, 0), "<=", q("1/2"))]))


class TestProjection:
    def test_drop_closed(self):
        P = fm_project(sc(2, ((1, 1), "<=", 1), ((0, 1), ">=", 0)), [1])
        assert _same(P, sc(1, ((1,), "<=", 1)))

    def test_strictness_propagates(self):
        P = fm_project(sc(2, ((1, -1), "<", 0), ((0, 1), "<", 0)), [1])
        assert _same(P, sc(1, ((1,), "<", 0)))

    def test_graph_projection_matches_closed_image(self):
        dom = sc(2, ((1, 0), "<=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0))
        img = sc_affine_image(dom, [[1, -1], [0, 1]], [0, 0])
        ref = to_halfspaces(affine_image(to_generators(dom.to_h()), [[1, -1], [0, 1]], [0, 0]))
        assert _same(img, SemiClosedPolyhedron.from_h(ref))


class TestImages:
    def test_identity(self):
        S = sc(2, ((1, 2), "<", 3), ((1, 0), ">=", -1))
        assert _same(sc_affine_image(S, [[1, 0], [0, 1]], [0, 0]), S)

    def test_scaling_keeps_strict(self):
        assert _same(sc_affine_image(sc(1, ((1,), "<", 0)), [[2]], [0]), sc(1, ((1,), "<", 0)))

    def test_sum_of_coordinates(self):
        img = sc_affine_image(sc(2, ((1, 0), "<=", 0), ((0, 1), "<", 0)), [[1, 1]], [0])
        assert _same(img, sc(1, ((1,), "<", 0)))


class TestSum:
    def test_origin_plus_c(self):
        C = sc(2, ((1, 0), "<=", 0), ((0, 1), "<", 0))
        assert _same(sc_sum(VPolyhedron.point((0, 0)), C), C)

    def test_ray_plus_strict_cone_piece(self):
        M = VPolyhedron(2, ((0, 0),), ((-1, 0),))
        C1 = sc(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0), ((1, 0), "<", 0))
        assert _same(sc_sum(M, C1), sc(2, ((1, 0), "<", 0), ((0, 1), "<=", 0)))

    def test_closed_case_matches_minkowski(self):
        P = VPolyhedron(2, ((0, 0), (1, 1)))
        C = sc(2, ((1, 0), "<=", 0), ((1, -1), "<=", 0))
        ref = to_halfspaces(minkowski_sum(P, to_generators(C.to_h())))
        assert _same(sc_sum(P, C), SemiClosedPolyhedron.from_h(ref))


def test_region_closedness():
    assert region_is_closed(region(1, [((1,), "<", 0)], [((1,), ">=", 0)]))
    assert not region_is_closed(region(1, [((1,), "<", 0)]))


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@st.composite
def sc_system(draw, dim=2, max_rows=3):
    rows = []
    for _ in range(draw(st.integers(1, max_rows))):
        a = tuple(draw(st.integers(-2, 2)) for _ in range(dim))
        rows.append(row(a, draw(st.sampled_from(["<=", "<", "="])), draw(st.integers(-2, 2))))
    return SemiClosedPolyhedron.from_rows(dim, rows)


@settings(max_examples=50, deadline=None)
@given(sc_system(), sc_system())
def test_difference_pointwise(P, cut):
    R = difference(P, cut)
    for x in GRID2:
        assert R.contains(x) == (P.contains(x) and not cut.contains(x))


@settings(max_examples=40, deadline=None)
@given(sc_system(dim=3, max_rows=4))
def test_projection_points_have_fibres(S):
    P = fm_project(S, [2])
    for x in GRID2[::3]:
        fix = [row((1, 0, 0), "=", x[0]), row((0, 1, 0), "=", x[1])]
        assert P.contains(x) == (strict_feasible(list(S.rows) + fix, 3) is not None)


@settings(max_examples=40, deadline=None)
@given(sc_system())
def test_closure_matches_relaxed_projection(S):
    T = [[1, 1], [0, 1]]
    if sc_is_empty(S):
        return
    a = sc_affine_image(S, T, [0, 0]).closure()
    b = sc_affine_image(S.closure(), T, [0, 0])
    assert _same(a, b)
