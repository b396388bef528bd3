"""Pointwise efficiency decisions straight from the definitions.

Only raw constraint rows, the exact LP and pointwise evaluation of ``f`` are
used here, never the region algebra of the solver, so the two can check each other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotFeasible
from .exactmath import LinConstraint, Rel, Vector, dot, rat, strict_feasible, vec, vecmat
from .pwl import Problem, evaluate


@dataclass(frozen=True)
class GridSpec:
    box: tuple      # per coordinate (lo, hi)
    steps: tuple    # per coordinate number of grid points

    def __post_init__(self):
        object.__setattr__(self, "box", tuple((rat(lo), rat(hi)) for lo, hi in self.box))
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        if len(self.box) != len(self.steps):
            raise ValueError("box and steps differ in length")
        for (lo, hi), s in zip(self.box, self.steps):
            if s < 1:
                raise ValueError("steps must be positive")
            if lo > hi:
                raise ValueError("empty box interval")

    @property
    def dim(self) -> int:
        return len(self.box)

    def axis(self, i: int) -> list:
        """``steps`` equally spaced points from ``lo`` to ``hi`` inclusive; one step gives ``lo``."""
        (lo, hi), s = self.box[i], self.steps[i]
        if s == 1:
            return [lo]
        return [lo + (hi - lo) * t / (s - 1) for t in range(s)]

    def points(self):
        yield from itertools.product(*(self.axis(i) for i in range(self.dim)))


def _domination_rows(problem: Problem, k: int, fu: Vector, strict_rows: Sequence[int]) -> list[LinConstraint]:
    """Rows in ``x`` for ``x in D ∩ P_k`` and ``<y_i*, f(u) - T_k x - b_k> <= 0`` (``< 0`` on ``strict_rows``)."""
    p = problem.f.pieces[k]
    rows = list(problem.feasible.rows) + list(p.domain.rows)
    for i, y in enumerate(problem.cone.rows):
        # <y, f(u) - T x - b> <= 0  <=>  -(y T) x <= <y, b - f(u)>
        coeffs = tuple(-c for c in vecmat(y, p.map))
        rhs = dot(y, p.offset) - dot(y, fu)
        rows.append(LinConstraint(coeffs, rhs, Rel.LT if i in strict_rows else Rel.LE))
    return rows


def _image(problem: Problem, u) -> Vector:
    u = vec(u)
    if not problem.feasible.contains(u):
        raise NotFeasible(f"point {u} is not feasible")
    return evaluate(problem.f, u)


def dominating_point(problem: Problem, u) -> Optional[Vector]:
    """A feasible ``x`` with ``f(u) - f(x)`` in ``K ∖ l(K)``, or ``None``."""
    fu = _image(problem, u)
    n = problem.f.source_dim
    for k in range(len(problem.f.pieces)):
        for j in range(len(problem.cone.rows)):
            x = strict_feasible(_domination_rows(problem, k, fu, (j,)), n)
            if x is not None:
                return x
    return None


def weakly_dominating_point(problem: Problem, u) -> Optional[Vector]:
    """A feasible ``x`` with ``f(u) - f(x)`` in ``int K``, or ``None``."""
    fu = _image(problem, u)
    n = problem.f.source_dim
    every = range(len(problem.cone.rows))
    for k in range(len(problem.f.pieces)):
        x = strict_feasible(_domination_rows(problem, k, fu, every), n)
        if x is not None:
            return x
    return None


def is_efficient(u, problem: Problem) -> bool:
    return dominating_point(problem, u) is None


def is_weakly_efficient(u, problem: Problem) -> bool:
    return weakly_dominating_point(problem, u) is None


@dataclass(frozen=True)
class GridMismatch:
    point: Vector
    oracle_sol: bool
    decomp_sol: bool
    oracle_wsol: Optional[bool]
    decomp_wsol: Optional[bool]


@dataclass
class CrosscheckResult:
    checked: int = 0
    skipped: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def grid_crosscheck(problem: Problem, report, grid: GridSpec) -> CrosscheckResult:
    """Compare oracle verdicts with region membership at every feasible grid point.

    ``report`` needs ``sol`` and ``wsol`` attributes exposing ``contains``; a
    ``wsol`` of ``None`` skips the weak comparison.
    """
    if grid.dim != problem.f.source_dim:
        raise ValueError("grid dimension does not match the source space")
    out = CrosscheckResult()
    for u in grid.points():
        if not problem.feasible.contains(u):
            out.skipped += 1
            continue
        out.checked += 1
        o_sol, d_sol = is_efficient(u, problem), report.sol.contains(u)
        o_w = d_w = None
        if report.wsol is not None:
            o_w, d_w = is_weakly_efficient(u, problem), report.wsol.contains(u)
        if o_sol != d_sol or o_w != d_w:
            out.mismatches.append(GridMismatch(tuple(u), o_sol, d_sol, o_w, d_w))
    return out


def parse_grid(box: str, steps: str) -> GridSpec:
    """``"a,b;c,d"`` and ``"n,m"`` as given on the command line."""
    ivs = []
    for part in box.split(";"):
        lo, hi = part.split(",")
        ivs.append((_exact(lo), _exact(hi)))
    return GridSpec(tuple(ivs), tuple(int(s) for s in steps.split(",")))


def _exact(s: str):
    # decimals such as "-2.5" are exact on the command line
    return rat(Fraction(s.strip()))
