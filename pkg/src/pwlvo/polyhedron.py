"""Closed convex polyhedra in half-space (H) and generator (V) form.

Conversion in both directions uses the double description method on the
homogenised cone, with the algebraic rank test for ray adjacency.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .exactmath import (
    ONE, ZERO, LinConstraint, Rel, Subspace, Vector, add, dot, lp_optimize, matvec,
    neg, primitive, rank, scale, simplify_system, strict_feasible, sub, unit, vecmat, zeros,
)


@dataclass(frozen=True)
class HPolyhedron:
    """``{x : A x = z, <a_i, x> <= alpha_i}``."""

    dim: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        for c in self.equalities:
            if c.rel is not Rel.EQ or c.dim != self.dim:
                raise ValueError(f"bad equality row {c}")
        for c in self.inequalities:
            if c.rel is not Rel.LE or c.dim != self.dim:
                raise ValueError(f"bad inequality row {c}")

    @classmethod
    def from_rows(cls, dim: int, rows: Iterable[LinConstraint]) -> "HPolyhedron":
        rows = list(rows)
        eqs = tuple(r for r in rows if r.rel is Rel.EQ)
        les = tuple(r for r in rows if r.rel is Rel.LE)
        if len(eqs) + len(les) != len(rows):
            raise ValueError("strict rows are not allowed in a closed polyhedron")
        return cls(dim, eqs, les)

    @classmethod
    def empty(cls, dim: int) -> "HPolyhedron":
        return cls(dim, (), (LinConstraint(zeros(dim), -ONE, Rel.LE),))

    @classmethod
    def universe(cls, dim: int) -> "HPolyhedron":
        return cls(dim)

    @property
    def rows(self) -> tuple:
        return self.equalities + self.inequalities

    def contains(self, x: Sequence) -> bool:
        return contains(self, x)

    def is_empty(self) -> bool:
        return is_empty(self)


@dataclass(frozen=True)
class VPolyhedron:
    """``conv(points) + cone(rays) + lineality``; empty iff ``points`` is empty."""

    dim: int
    points: tuple = ()
    rays: tuple = ()
    lineality: Subspace = field(default=None)

    def __post_init__(self):
        if self.lineality is None:
            object.__setattr__(self, "lineality", Subspace.zero(self.dim))
        for v in self.points + self.rays:
            if len(v) != self.dim:
                raise ValueError("generator has wrong length")
        if any(not any(r) for r in self.rays):
            raise ValueError("rays must be nonzero")

    @classmethod
    def empty(cls, dim: int) -> "VPolyhedron":
        return cls(dim)

    @classmethod
    def point(cls, p: Sequence) -> "VPolyhedron":
        return cls(len(p), (tuple(p),))

    def is_empty(self) -> bool:
        return not self.points

    def affine_dim(self) -> int:
        if not self.points:
            return -1
        p0 = self.points[0]
        vs = [sub(p, p0) for p in self.points[1:]] + list(self.rays) + list(self.lineality.basis)
        return rank(vs, self.dim)


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def cone_generators(rows: Sequence[Sequence], dim: int) -> tuple[list[Vector], list[Vector]]:
    """Lineality basis and extreme rays of ``{z : <g, z> <= 0 for every g in rows}``."""
    lin: list[Vector] = [unit(dim, i) for i in range(dim)]
    rays: list[Vector] = []
    processed: list[Vector] = []
    for g in rows:
        g = tuple(g)
        if not any(g):
            continue
        vals = [dot(g, l) for l in lin]
        idx = next((i for i, v in enumerate(vals) if v), None)
        if idx is not None:
            l0 = lin.pop(idx)
            v0 = vals.pop(idx)
            if v0 > 0:
                l0, v0 = neg(l0), -v0
            lin = [sub(l, scale(v / v0, l0)) if v else l for l, v in zip(lin, vals)]
            rays = [_canon(sub(r, scale(dot(g, r) / v0, l0))) for r in rays]
            rays.append(_canon(l0))
            processed.append(g)
            continue

        pos, keep, negs = [], [], []
        for r in rays:
            s = dot(g, r)
            if s > 0:
                pos.append((r, s))
            else:
                keep.append(r)
                if s < 0:
                    negs.append((r, s))
        if pos and negs:
            target = dim - len(lin) - 2
            zsets = {}
            for r, _ in pos + negs:
                zsets[r] = frozenset(i for i, h in enumerate(processed) if not dot(h, r))
            for p, sp in pos:
                zp = zsets[p]
                for q, sq in negs:
                    common = zp & zsets[q]
                    if len(common) < target:
                        continue
                    if rank([processed[i] for i in common], dim) != target:
                        continue
                    keep.append(_canon(sub(scale(sp, q), scale(sq, p))))
        rays = list(dict.fromkeys(keep))
        processed.append(g)
    return lin, rays


def _canon(v: Sequence) -> Vector:
    return primitive(v)


def _homogenized_rows(P: HPolyhedron) -> list[Vector]:
    rows: list[Vector] = [zeros(P.dim) + (-ONE,)]
    for c in P.inequalities:
        rows.append(c.coeffs + (-c.rhs,))
    for c in P.equalities:
        rows.append(c.coeffs + (-c.rhs,))
        rows.append(neg(c.coeffs) + (c.rhs,))
    return rows


def to_generators(P: HPolyhedron) -> VPolyhedron:
    """Points, rays and lineality space describing the same set as ``P``."""
    d = P.dim
    if any(c.is_contradiction() for c in P.rows):
        return VPolyhedron.empty(d)
    lin, rays = cone_generators(_homogenized_rows(P), d + 1)
    points = []
    dirs = []
    for r in rays:
        t = r[d]
        if t > 0:
            points.append(tuple(x / t for x in r[:d]))
        else:
            dirs.append(r[:d])
    if not points:
        return VPolyhedron.empty(d)
    return VPolyhedron(d, tuple(points), tuple(dirs), Subspace.span(d, [l[:d] for l in lin]))


def to_halfspaces(V: VPolyhedron) -> HPolyhedron:
    """Half-space description of ``V`` via the cone of its valid inequalities."""
    d = V.dim
    if not V.points:
        return HPolyhedron.empty(d)
    rows = [tuple(p) + (-ONE,) for p in V.points]
    rows += [tuple(r) + (ZERO,) for r in V.rays]
    for l in V.lineality.basis:
        rows.append(tuple(l) + (ZERO,))
        rows.append(neg(l) + (ZERO,))
    lin, rays = cone_generators(rows, d + 1)
    eqs = []
    for v in lin:
        if any(v[:d]):
            eqs.append(LinConstraint(v[:d], v[d], Rel.EQ).normalized())
    les = []
    for v in rays:
        if any(v[:d]):
            les.append(LinConstraint(v[:d], v[d], Rel.LE))
    return HPolyhedron(d, tuple(eqs), tuple(les))


# ---------------------------------------------------------------------------
# set operations
# ---------------------------------------------------------------------------

def minkowski_sum(P: VPolyhedron, Q: VPolyhedron) -> VPolyhedron:
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    if not P.points or not Q.points:
        return VPolyhedron.empty(P.dim)
    points = tuple(dict.fromkeys(add(p, q) for p in P.points for q in Q.points))
    rays = tuple(dict.fromkeys(_canon(r) for r in P.rays + Q.rays))
    lin = Subspace.span(P.dim, P.lineality.basis + Q.lineality.basis)
    return VPolyhedron(P.dim, points, rays, lin)


def affine_preimage(P: HPolyhedron, T: Sequence[Sequence], b: Sequence) -> HPolyhedron:
    """``{x : T x + b in P}``; ``T`` has ``P.dim`` rows."""
    if len(T) != P.dim:
        raise ValueError("map does not land in the polyhedron's space")
    n = len(T[0]) if T else 0
    return HPolyhedron(
        n,
        tuple(_pull_row(c, T, b, n) for c in P.equalities),
        tuple(_pull_row(c, T, b, n) for c in P.inequalities),
    )


def _pull_row(c: LinConstraint, T, b, n: int) -> LinConstraint:
    coeffs = vecmat(c.coeffs, T) if T else zeros(n)
    return LinConstraint(coeffs, c.rhs - dot(c.coeffs, b), c.rel)


def affine_image(P: VPolyhedron, T: Sequence[Sequence], b: Sequence) -> VPolyhedron:
    """``{T x + b : x in P}``; ``T`` maps ``P.dim`` to ``len(b)``."""
    m = len(b)
    if not P.points:
        return VPolyhedron.empty(m)
    points = tuple(dict.fromkeys(add(matvec(T, p), b) for p in P.points))
    rays = []
    for r in P.rays:
        img = matvec(T, r)
        if any(img):
            rays.append(_canon(img))
    lin = Subspace.span(m, [matvec(T, l) for l in P.lineality.basis])
    return VPolyhedron(m, points, tuple(dict.fromkeys(rays)), lin)


def intersect(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    return HPolyhedron(P.dim, P.equalities + Q.equalities, P.inequalities + Q.inequalities)


def is_empty(P: HPolyhedron) -> bool:
    return strict_feasible(list(P.rows), P.dim) is None


def contains(P: HPolyhedron, x: Sequence) -> bool:
    return all(c.holds(x) for c in P.rows)


def inclusion_check(P: HPolyhedron, Q: HPolyhedron) -> bool:
    """Decide ``P ⊆ Q`` by maximising every row of ``Q`` over ``P``."""
    if P.dim != Q.dim:
        raise ValueError("dimension mismatch")
    rows = list(P.rows)
    if strict_feasible(rows, P.dim) is None:
        return True
    for c in Q.rows:
        hi = lp_optimize(c.coeffs, rows, sense="max", dim=P.dim)
        if not hi.optimal or hi.value > c.rhs:
            return False
        if c.rel is Rel.EQ:
            lo = lp_optimize(c.coeffs, rows, sense="min", dim=P.dim)
            if not lo.optimal or lo.value < c.rhs:
                return False
    return True


def normalize(P: HPolyhedron) -> HPolyhedron:
    """Drop redundant rows and make implicit equalities explicit."""
    rows = simplify_system(list(P.rows), P.dim)
    if rows is None:
        return HPolyhedron.empty(P.dim)
    return HPolyhedron.from_rows(P.dim, rows)


def hull_of(parts: Sequence[VPolyhedron], dim: int) -> VPolyhedron:
    """Closed convex hull of finitely many V-polyhedra."""
    parts = [p for p in parts if p.points]
    if not parts:
        return VPolyhedron.empty(dim)
    points = tuple(dict.fromkeys(p for V in parts for p in V.points))
    rays = tuple(dict.fromkeys(_canon(r) for V in parts for r in V.rays))
    lin = Subspace.span(dim, [l for V in parts for l in V.lineality.basis])
    return VPolyhedron(dim, points, rays, lin)


def consolidate_union(parts: Sequence[HPolyhedron]) -> Optional[HPolyhedron]:
    """Single polyhedron equal to the union of ``parts``, or ``None`` when the union is not convex.

    The candidate is the closed convex hull of all generators; it is accepted
    only after checking every part lies in it and it lies in the union.
    """
    from .semiclosed import Region, SemiClosedPolyhedron, region_difference, region_is_empty

    if not parts:
        raise ValueError("need at least one part")
    dim = parts[0].dim
    gens = [to_generators(P) for P in parts]
    nonempty = [(P, V) for P, V in zip(parts, gens) if V.points]
    if not nonempty:
        return HPolyhedron.empty(dim)
    if len(nonempty) == 1:
        return nonempty[0][0]
    hull = to_halfspaces(hull_of([V for _, V in nonempty], dim))
    if not all(inclusion_check(P, hull) for P, _ in nonempty):
        return None
    rest = region_difference(
        Region(dim, (SemiClosedPolyhedron.from_h(hull),)),
        Region(dim, tuple(SemiClosedPolyhedron.from_h(P) for P, _ in nonempty)),
    )
    if not region_is_empty(rest):
        return None
    return hull
