import random

from hypothesis import given, settings, strategies as st

from conftest import hp, q, row
from pwlvo.exactmath import add, scale
from pwlvo.polyhedron import (
    HPolyhedron, VPolyhedron, affine_image, affine_preimage, consolidate_union, contains,
    inclusion_check, intersect, is_empty, minkowski_sum, to_generators, to_halfspaces,
)


def _same(P: HPolyhedron, Q: HPolyhedron) -> bool:
    return inclusion_check(P, Q) and inclusion_check(Q, P)


def _grid(dim, lo=-2, hi=2, step=q("1/2")):
    pts = [()]
    vals = []
    v = q(lo)
    while v <= hi:
        vals.append(v)
        v += step
    for _ in range(dim):
        pts = [p + (x,) for p in pts for x in vals]
    return pts


class TestToGenerators:
    def test_unit_square(self):
        V = to_generators(hp(2, ((1, 0), "<=", 1), ((1, 0), ">=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0)))
        assert set(V.points) == {(0, 0), (1, 0), (0, 1), (1, 1)}
        assert V.rays == () and V.lineality.rank == 0

    def test_orthant(self):
        V = to_generators(hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0)))
        assert V.points == ((0, 0),)
        assert set(V.rays) == {(-1, 0), (0, -1)}

    def test_line(self):
        V = to_generators(hp(2, ((1, 0), "=", 0)))
        assert V.points == ((0, 0),) and V.rays == ()
        assert V.lineality.rank == 1 and V.lineality.contains((0, 1))

    def test_empty(self):
        assert to_generators(hp(1, ((1,), "<=", 0), ((1,), ">=", 1))).points == ()


class TestToHalfspaces:
    def test_simplex(self):
        H = to_halfspaces(VPolyhedron(2, ((0, 0), (1, 0), (0, 1))))
        assert _same(H, hp(2, ((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "<=", 1)))

    def test_orthant(self):
        H = to_halfspaces(VPolyhedron(2, ((0, 0),), ((-1, 0), (0, -1))))
        assert _same(H, hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0)))

    def test_empty(self):
        assert is_empty(to_halfspaces(VPolyhedron.empty(2)))


class TestMinkowski:
    def test_fixture_feasible_set_absorbs_cone(self):
        D = hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 1))
        K = to_generators(hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 0)))
        assert _same(to_halfspaces(minkowski_sum(to_generators(D), K)), D)

    def test_origin_is_identity(self):
        P = VPolyhedron(2, ((0, 0), (1, 2), (3, -1)))
        assert _same(to_halfspaces(minkowski_sum(P, VPolyhedron.point((0, 0)))), to_halfspaces(P))

    def test_two_segments_make_square(self):
        S = minkowski_sum(VPolyhedron(2, ((0, 0), (1, 0))), VPolyhedron(2, ((0, 0), (0, 1))))
        square = hp(2, ((1, 0), "<=", 1), ((1, 0), ">=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0))
        assert _same(to_halfspaces(S), square)


class TestAffine:
    def test_preimage_identity(self):
        P = affine_preimage(hp(2, ((1, 0), "<=", 0)), [[1, 0], [0, 1]], [0, 0])
        assert _same(P, hp(2, ((1, 0), "<=", 0)))

    def test_preimage_shear(self):
        P = affine_preimage(hp(2, ((1, 0), "<=", 0)), [[1, -1], [0, 1]], [0, 0])
        assert _same(P, hp(2, ((1, -1), "<=", 0)))

    def test_preimage_of_empty(self):
        assert is_empty(affine_preimage(HPolyhedron.empty(2), [[1, 0], [0, 1]], [0, 0]))

    def test_image_fixture_piece(self):
        src = to_generators(hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0)))
        M = affine_image(src, [[1, -1], [0, 1]], [0, 0])
        want = VPolyhedron(2, ((0, 0), (-1, 1)), ((-1, 0),))
        assert _same(to_halfspaces(M), to_halfspaces(want))

    def test_image_to_point(self):
        M = affine_image(to_generators(hp(2, ((1, 0), "<=", 0))), [[0, 0], [0, 0]], [2, 3])
        assert M.points == ((2, 3),) and M.rays == () and M.lineality.rank == 0


class TestSetOps:
    def test_intersection_is_line(self):
        P = intersect(hp(2, ((1, 0), "<=", 0)), hp(2, ((1, 0), ">=", 0)))
        assert not is_empty(P)
        assert _same(P, hp(2, ((1, 0), "=", 0)))

    def test_contains_boundary(self):
        assert contains(hp(2, ((1, 0), "<=", 0), ((0, 1), "<=", 1)), (0, 1))

    def test_inclusion(self):
        square = hp(2, ((1, 0), "<=", 1), ((1, 0), ">=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0))
        assert inclusion_check(square, hp(2, ((1, 0), "<=", 2)))
        assert not inclusion_check(hp(2, ((1, 0), "<=", 2)), square)


class TestConsolidate:
    def test_touching_intervals(self):
        U = consolidate_union([hp(1, ((1,), ">=", 0), ((1,), "<=", 1)), hp(1, ((1,), ">=", 1), ((1,), "<=", 2))])
        assert _same(U, hp(1, ((1,), ">=", 0), ((1,), "<=", 2)))

    def test_gap_is_not_convex(self):
        assert consolidate_union([hp(1, ((1,), ">=", 0), ((1,), "<=", 1)), hp(1, ((1,), ">=", 2), ((1,), "<=", 3))]) is None


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@st.composite
def h_system(draw, max_dim=3, max_rows=6):
    n = draw(st.integers(1, max_dim))
    m = draw(st.integers(0, max_rows))
    rows = []
    for _ in range(m):
        a = tuple(draw(st.integers(-3, 3)) for _ in range(n))
        rel = draw(st.sampled_from(["<=", "<=", "<=", "="]))
        rows.append(row(a, rel, draw(st.integers(-2, 3))))
    return HPolyhedron.from_rows(n, rows)


@settings(max_examples=40, deadline=None)
@given(h_system())
def test_h_v_h_round_trip(P):
    H = to_halfspaces(to_generators(P))
    assert _same(P, H)
    for x in _grid(P.dim, step=1):
        assert P.contains(x) == H.contains(x)


def _sample(V: VPolyhedron, rng: random.Random):
    w = [rng.randint(0, 4) for _ in V.points]
    w[0] += 1
    p = tuple(sum(q(wi) * c for wi, c in zip(w, col)) / sum(w) for col in zip(*V.points))
    for r in V.rays:
        p = add(p, scale(q(rng.randint(0, 3)), r))
    for l in V.lineality.basis:
        p = add(p, scale(q(rng.randint(-3, 3)), l))
    return p


@settings(max_examples=30, deadline=None)
@given(h_system(max_dim=2, max_rows=4), h_system(max_dim=2, max_rows=4), st.randoms(use_true_random=False))
def test_minkowski_membership(P, Q, rng):
    if P.dim != Q.dim:
        return
    VP, VQ = to_generators(P), to_generators(Q)
    if not VP.points or not VQ.points:
        return
    S = to_halfspaces(minkowski_sum(VP, VQ))
    for _ in range(5):
        assert S.contains(add(_sample(VP, rng), _sample(VQ, rng)))


@settings(max_examples=30, deadline=None)
@given(h_system(max_dim=2, max_rows=4), st.randoms(use_true_random=False))
def test_preimage_of_image_contains_source(P, rng):
    V = to_generators(P)
    if not V.points:
        return
    T = [[rng.randint(-2, 2) for _ in range(P.dim)] for _ in range(2)]
    b = [rng.randint(-2, 2), rng.randint(-2, 2)]
    back = affine_preimage(to_halfspaces(affine_image(V, T, b)), T, b)
    for _ in range(5):
        assert back.contains(_sample(V, rng))
