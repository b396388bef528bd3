"""Piecewise linear maps ``f(x) = T_k x + b_k`` on ``x in P_k`` and the problem data built on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from gmpy2 import mpq

from .cone import OrderingCone
from .errors import ConsolidationFailed, EmptyFeasible
from .exactmath import (
    LinConstraint, Matrix, Rel, Vector, add, dot, lp_optimize, mat, matvec, scale, strict_feasible,
    sub, vec, vecmat,
)
from .polyhedron import (
    HPolyhedron, VPolyhedron, affine_image, consolidate_union, intersect, minkowski_sum,
    to_generators, to_halfspaces,
)
from .semiclosed import Region, SemiClosedPolyhedron, region_difference


@dataclass(frozen=True)
class Piece:
    domain: HPolyhedron
    map: Matrix
    offset: Vector

    def __post_init__(self):
        object.__setattr__(self, "map", mat(self.map))
        object.__setattr__(self, "offset", vec(self.offset))
        if len(self.map) != len(self.offset):
            raise ValueError("map rows and offset length differ")
        if any(len(row) != self.domain.dim for row in self.map):
            raise ValueError("map columns do not match the domain dimension")

    def apply(self, x: Sequence) -> Vector:
        return add(matvec(self.map, x), self.offset)


@dataclass(frozen=True)
class PiecewiseLinearFn:
    source_dim: int
    image_dim: int
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("a piecewise linear function needs at least one piece")
        for p in self.pieces:
            if p.domain.dim != self.source_dim or len(p.offset) != self.image_dim:
                raise ValueError("piece dimensions do not match the function")

    def __call__(self, x: Sequence) -> Vector:
        return evaluate(self, x)


@dataclass(frozen=True)
class Problem:
    """Minimise ``f`` over ``feasible`` with respect to the order cone."""

    f: PiecewiseLinearFn
    feasible: HPolyhedron
    cone: OrderingCone

    def __post_init__(self):
        if self.feasible.dim != self.f.source_dim:
            raise ValueError("feasible set and function source dimension differ")
        if self.cone.dim != self.f.image_dim:
            raise ValueError("cone and function image dimension differ")


@dataclass(frozen=True)
class Gap:
    witness: Vector


@dataclass(frozen=True)
class Mismatch:
    k: int
    l: int
    witness: Vector


@dataclass(frozen=True)
class KViolation:
    """Row ``row`` of the cone is not concave along ``f``.

    At ``witness`` (in piece ``k``) the affine extension of piece ``l`` lies below
    ``f``; ``partner`` is a relative-interior point of piece ``l`` and for the
    combination ``(1-lam)*partner + lam*witness`` the defining K-convexity
    inclusion fails.
    """

    row: int
    k: int
    l: int
    witness: Vector
    partner: Vector
    lam: object


@dataclass(frozen=True)
class KVerdict:
    violation: Optional[KViolation] = None

    def __bool__(self) -> bool:
        return self.violation is None


def validate_cover(f: PiecewiseLinearFn) -> Optional[Gap]:
    """``None`` when the piece domains cover the whole source space, else a point outside all of them."""
    n = f.source_dim
    rest = region_difference(
        Region(n, (SemiClosedPolyhedron.universe(n),)),
        Region(n, tuple(SemiClosedPolyhedron.from_h(p.domain) for p in f.pieces)),
    )
    for piece in rest.pieces:
        w = strict_feasible(list(piece.rows), n)
        if w is not None:
            return Gap(w)
    return None


def validate_consistency(f: PiecewiseLinearFn) -> Optional[Mismatch]:
    """``None`` when overlapping pieces agree; checked on generators of each overlap."""
    for k, pk in enumerate(f.pieces):
        for l in range(k + 1, len(f.pieces)):
            pl = f.pieces[l]
            V = to_generators(intersect(pk.domain, pl.domain))
            if not V.points:
                continue
            for u in V.points:
                if pk.apply(u) != pl.apply(u):
                    return Mismatch(k, l, u)
            u0 = V.points[0]
            for d in V.rays + V.lineality.basis:
                if matvec(pk.map, d) != matvec(pl.map, d):
                    return Mismatch(k, l, add(u0, d))
    return None


def evaluate(f: PiecewiseLinearFn, x: Sequence) -> Vector:
    x = vec(x)
    for p in f.pieces:
        if p.domain.contains(x):
            return p.apply(x)
    raise ValueError(f"point {x} lies in no piece")


def _relint_point(V: VPolyhedron) -> Vector:
    n = len(V.points)
    p = tuple(sum(c) / n for c in zip(*V.points))
    for r in V.rays:
        p = add(p, r)
    return p


def is_k_function(f: PiecewiseLinearFn, D: HPolyhedron, K: OrderingCone) -> KVerdict:
    """Decide whether ``f`` is K-convex on ``D``.

    For each cone row ``y*`` the scalar map ``h(x) = <y*, f(x)>`` must be concave
    on ``D``.  A continuous piecewise affine ``h`` is concave on a convex polyhedron
    iff it never exceeds the affine extension of any piece whose overlap with
    ``D`` has full dimension in ``D``; each such comparison is one LP.
    """
    Dgen = to_generators(D)
    if not Dgen.points:
        raise EmptyFeasible("feasible set is empty")
    dim_d = Dgen.affine_dim()
    parts = [intersect(D, p.domain) for p in f.pieces]
    gens = [to_generators(P) for P in parts]
    full = [V.points and V.affine_dim() == dim_d for V in gens]
    n = f.source_dim
    for j, y in enumerate(K.rows):
        slopes = [vecmat(y, p.map) for p in f.pieces]
        consts = [dot(y, p.offset) for p in f.pieces]
        for k, P in enumerate(parts):
            if not gens[k].points:
                continue
            rows = list(P.rows)
            for l in range(len(f.pieces)):
                if l == k or not full[l]:
                    continue
                c = tuple(a - b for a, b in zip(slopes[l], slopes[k]))
                c0 = consts[l] - consts[k]
                res = lp_optimize(c, rows, sense="min", dim=n)
                if res.optimal and res.value + c0 >= 0:
                    continue
                if res.optimal:
                    x = res.point
                else:
                    x = strict_feasible(rows + [LinConstraint(c, -c0 - 1, Rel.LE)], n)
                z = _relint_point(gens[l])
                return KVerdict(KViolation(j, k, l, x, z, _segment_reach(f.pieces[l].domain, z, x)))
    return KVerdict()


def _segment_reach(P: HPolyhedron, z: Vector, x: Vector):
    """Largest ``lam`` in [0, 1] with ``z + lam (x - z)`` in ``P`` (``z`` in ``P``)."""
    d = sub(x, z)
    lam = mpq(1)
    for c in P.rows:
        slope = dot(c.coeffs, d)
        if slope > 0:
            lam = min(lam, c.slack(z) / slope)
    return lam


def k_convexity_defect(f: PiecewiseLinearFn, x1: Sequence, x2: Sequence, lam) -> Vector:
    """``(1-lam) f(x1) + lam f(x2) - f((1-lam) x1 + lam x2)``; lies in K for K-convex ``f``."""
    lam = mpq(lam)
    xl = add(scale(1 - lam, x1), scale(lam, x2))
    return sub(add(scale(1 - lam, evaluate(f, x1)), scale(lam, evaluate(f, x2))), evaluate(f, xl))


def image_pieces(problem: Problem) -> list[VPolyhedron]:
    """``M_k = T_k (D ∩ P_k) + b_k`` in generator form; empty overlaps give empty entries."""
    out = []
    for p in problem.f.pieces:
        V = to_generators(intersect(problem.feasible, p.domain))
        out.append(affine_image(V, p.map, p.offset))
    return out


@dataclass(frozen=True)
class ImagePlusCone:
    entries: tuple            # H-form of each M_k + K
    consolidated: Optional[HPolyhedron]


def image_plus_cone(problem: Problem, convex: Optional[bool] = None,
                    images: Optional[Sequence[VPolyhedron]] = None) -> ImagePlusCone:
    """Each ``M_k + K``, merged into one polyhedron when ``f`` is K-convex.

    ``convex`` may be passed to skip recomputing the K-convexity verdict.
    """
    Ms = list(images) if images is not None else image_pieces(problem)
    Kgen = problem.cone.generators
    entries = tuple(to_halfspaces(minkowski_sum(M, Kgen)) for M in Ms)
    if convex is None:
        convex = bool(is_k_function(problem.f, problem.feasible, problem.cone))
    consolidated = None
    if convex:
        nonempty = [E for E, M in zip(entries, Ms) if M.points]
        if nonempty:
            consolidated = consolidate_union(nonempty)
            if consolidated is None:
                raise ConsolidationFailed("f(D) + K is not convex although f is K-convex")
    return ImagePlusCone(entries, consolidated)
