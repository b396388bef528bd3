import pytest

from conftest import q, region
from pwlvo.cone import build
from pwlvo.errors import NotFeasible
from pwlvo.oracle import (
    GridSpec, dominating_point, grid_crosscheck, is_efficient, is_weakly_efficient, parse_grid,
)
from pwlvo.pwl import Problem, evaluate
from pwlvo.solver import solve


def test_fixture_a_point_on_efficient_segment(problem_a):
    assert is_efficient((0, q("1/2")), problem_a)


def test_fixture_a_dominated_point_has_witness_on_t1_zero(problem_a):
    u = (-1, q("1/2"))
    assert not is_efficient(u, problem_a)
    x = dominating_point(problem_a, u)
    d = tuple(a - b for a, b in zip(evaluate(problem_a.f, u), evaluate(problem_a.f, x)))
    assert all(v <= 0 for v in d) and any(v < 0 for v in d)


def test_fixture_b_point_between_seams_not_efficient(problem_b):
    assert not is_efficient((0, q("-1/2")), problem_b)


def test_fixture_a_weakly_but_not_efficient(problem_a):
    u = (q("-5/4"), 1)
    assert is_weakly_efficient(u, problem_a)
    assert not is_efficient(u, problem_a)


def test_fixture_a_weakly_dominated(problem_a):
    assert not is_weakly_efficient((-1, q("-1/2")), problem_a)


def test_infeasible_point_raises(problem_a):
    with pytest.raises(NotFeasible):
        is_efficient((1, 0), problem_a)
    with pytest.raises(NotFeasible):
        is_weakly_efficient((0, 2), problem_a)


@pytest.mark.parametrize("name", ["problem_a", "problem_b"])
def test_efficient_implies_weakly_efficient(name, request):
    P = request.getfixturevalue(name)
    for u in GridSpec(((-3, 0), (-3, 1)), (13, 9)).points():
        if is_efficient(u, P):
            assert is_weakly_efficient(u, P)


@pytest.mark.parametrize("name", ["problem_a", "problem_b"])
def test_rescaled_cone_rows_give_same_verdicts(name, request):
    P = request.getfixturevalue(name)
    scaled = Problem(P.f, P.feasible, build([(3, 0), (0, q("2/7"))]))
    for u in GridSpec(((-3, 0), (-3, 1)), (7, 9)).points():
        assert is_efficient(u, P) == is_efficient(u, scaled)
        assert is_weakly_efficient(u, P) == is_weakly_efficient(u, scaled)


def test_grid_axis_includes_endpoints():
    g = GridSpec(((-3, 3),), (25,))
    ax = g.axis(0)
    assert len(ax) == 25 and ax[0] == -3 and ax[-1] == 3 and q(-1) in ax and q("-5/4") in ax
    assert GridSpec(((2, 5),), (1,)).axis(0) == [2]


def test_parse_grid_accepts_decimals_exactly():
    g = parse_grid("-2.5,3;0,1/3", "3,2")
    assert g.box == ((q("-5/2"), 3), (0, q("1/3")))
    assert g.steps == (3, 2)


@pytest.mark.parametrize("name", ["problem_a", "problem_b"])
def test_crosscheck_fixture_grid(name, request):
    P = request.getfixturevalue(name)
    res = grid_crosscheck(P, solve(P), parse_grid("-3,3;-3,3", "25,25"))
    assert res.checked == 221 and res.skipped == 404
    assert res.mismatches == []


def test_crosscheck_detects_corruption(problem_b):
    class Fake:
        sol = region(2, [((1, 0), "=", 0), ((0, 1), "=", 1)])
        wsol = solve(problem_b).wsol

    res = grid_crosscheck(problem_b, Fake(), parse_grid("-3,3;-3,3", "25,25"))
    assert {tuple(m.point) for m in res.mismatches} == {(0, q(-3) + q(f"{k}/4")) for k in range(8)}
    assert all(m.oracle_sol and not m.decomp_sol for m in res.mismatches)
