"""Semi-closed polyhedra (systems mixing ``<=`` and ``<`` rows) and finite unions of them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exactmath import (
    LinConstraint, Rel, Vector, dot, neg, simplify_system, strict_feasible, vecmat, zeros,
)
from .polyhedron import HPolyhedron, VPolyhedron, to_halfspaces

# above this many rows an elimination step is followed by an LP redundancy pass
_FM_PRUNE_ROWS = 24


@dataclass(frozen=True)
class SemiClosedPolyhedron:
    dim: int
    equalities: tuple = ()
    closed: tuple = ()
    strict: tuple = ()

    def __post_init__(self):
        for rows, rel in ((self.equalities, Rel.EQ), (self.closed, Rel.LE), (self.strict, Rel.LT)):
            for c in rows:
                if c.rel is not rel or c.dim != self.dim:
                    raise ValueError(f"bad {rel.name} row {c}")

    @classmethod
    def from_rows(cls, dim: int, rows: Iterable[LinConstraint]) -> "SemiClosedPolyhedron":
        rows = list(rows)
        return cls(
            dim,
            tuple(r for r in rows if r.rel is Rel.EQ),
            tuple(r for r in rows if r.rel is Rel.LE),
            tuple(r for r in rows if r.rel is Rel.LT),
        )

    @classmethod
    def from_h(cls, P: HPolyhedron) -> "SemiClosedPolyhedron":
        return cls(P.dim, P.equalities, P.inequalities, ())

    @classmethod
    def universe(cls, dim: int) -> "SemiClosedPolyhedron":
        return cls(dim)

    @classmethod
    def empty(cls, dim: int) -> "SemiClosedPolyhedron":
        return cls(dim, (), (LinConstraint(zeros(dim), -1, Rel.LE),), ())

    @property
    def rows(self) -> tuple:
        return self.equalities + self.closed + self.strict

    @property
    def is_closed_form(self) -> bool:
        return not self.strict

    def closure(self) -> "SemiClosedPolyhedron":
        """Strict rows relaxed; the topological closure whenever the set is nonempty."""
        return SemiClosedPolyhedron(self.dim, self.equalities, self.closed + tuple(c.relaxed() for c in self.strict))

    def to_h(self) -> HPolyhedron:
        if self.strict:
            raise ValueError("set has strict rows")
        return HPolyhedron(self.dim, self.equalities, self.closed)

    def with_rows(self, rows: Iterable[LinConstraint]) -> "SemiClosedPolyhedron":
        return SemiClosedPolyhedron.from_rows(self.dim, self.rows + tuple(rows))

    def contains(self, x: Sequence) -> bool:
        return sc_contains(self, x)


@dataclass(frozen=True)
class Region:
    """Finite union of semi-closed polyhedra of a common dimension."""

    dim: int
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if any(p.dim != self.dim for p in self.pieces):
            raise ValueError("piece dimension mismatch")

    @classmethod
    def of(cls, *pieces: SemiClosedPolyhedron) -> "Region":
        return cls(pieces[0].dim, pieces)

    def contains(self, x: Sequence) -> bool:
        return region_contains(self, x)

    def __len__(self) -> int:
        return len(self.pieces)


# ---------------------------------------------------------------------------
# membership and emptiness
# ---------------------------------------------------------------------------

def sc_witness(S: SemiClosedPolyhedron) -> Optional[Vector]:
    return strict_feasible(list(S.rows), S.dim)


def sc_is_empty(S: SemiClosedPolyhedron) -> bool:
    return sc_witness(S) is None


def sc_contains(S: SemiClosedPolyhedron, x: Sequence) -> bool:
    return all(c.holds(x) for c in S.rows)


def sc_intersect(S: SemiClosedPolyhedron, T: SemiClosedPolyhedron) -> SemiClosedPolyhedron:
    if S.dim != T.dim:
        raise ValueError("dimension mismatch")
    return SemiClosedPolyhedron(S.dim, S.equalities + T.equalities, S.closed + T.closed, S.strict + T.strict)


def sc_subset(S: SemiClosedPolyhedron, T: SemiClosedPolyhedron) -> bool:
    """Exact ``S ⊆ T``: no point of ``S`` violates any row of ``T``."""
    if sc_is_empty(S):
        return True
    for r in T.rows:
        for nr in negate(r):
            if strict_feasible(list(S.rows) + [nr], S.dim) is not None:
                return False
    return True


def region_contains(R: Region, x: Sequence) -> bool:
    return any(sc_contains(p, x) for p in R.pieces)


def region_is_empty(R: Region) -> bool:
    return all(sc_is_empty(p) for p in R.pieces)


def prune(R: Region) -> Region:
    return Region(R.dim, tuple(p for p in R.pieces if not sc_is_empty(p)))


def region_intersect(A: Region, B: Region) -> Region:
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    out = []
    for p in A.pieces:
        for q in B.pieces:
            s = sc_intersect(p, q)
            if not sc_is_empty(s):
                out.append(s)
    return Region(A.dim, tuple(out))


def region_union(*regions: Region) -> Region:
    return Region(regions[0].dim, tuple(p for R in regions for p in R.pieces))


# ---------------------------------------------------------------------------
# differences
# ---------------------------------------------------------------------------

def negate(c: LinConstraint) -> list[LinConstraint]:
    """Rows whose union is the complement of ``c``."""
    if c.rel is Rel.LE:
        return [LinConstraint(neg(c.coeffs), -c.rhs, Rel.LT)]
    if c.rel is Rel.LT:
        return [LinConstraint(neg(c.coeffs), -c.rhs, Rel.LE)]
    return [LinConstraint(c.coeffs, c.rhs, Rel.LT), LinConstraint(neg(c.coeffs), -c.rhs, Rel.LT)]


def difference(P: SemiClosedPolyhedron, cut: SemiClosedPolyhedron) -> Region:
    """``P ∖ cut`` as a union of pairwise disjoint semi-closed pieces."""
    if P.dim != cut.dim:
        raise ValueError("dimension mismatch")
    if sc_is_empty(P):
        return Region(P.dim)
    if sc_is_empty(sc_intersect(P, cut)):
        return Region(P.dim, (P,))
    pieces = []
    prefix: list[LinConstraint] = []
    for r in cut.rows:
        if r.is_trivial():
            continue
        for nr in negate(r):
            piece = P.with_rows(prefix + [nr])
            if not sc_is_empty(piece):
                pieces.append(piece)
        prefix.append(r)
    return Region(P.dim, tuple(pieces))


def region_difference(R: Region, cuts: Region) -> Region:
    """``R`` minus the union of ``cuts``, folding :func:`difference` over the cut pieces."""
    if R.dim != cuts.dim:
        raise ValueError("dimension mismatch")
    current = [p for p in R.pieces if not sc_is_empty(p)]
    for cut in cuts.pieces:
        if sc_is_empty(cut):
            continue
        nxt = []
        for p in current:
            nxt.extend(difference(p, cut).pieces)
        current = nxt
        if not current:
            break
    return Region(R.dim, tuple(current))


# ---------------------------------------------------------------------------
# projection and images
# ---------------------------------------------------------------------------

def _clean(rows: list[LinConstraint], dim: int) -> Optional[list[LinConstraint]]:
    """Normalise, drop trivial and duplicate rows; ``None`` on a constant contradiction."""
    best: dict = {}
    out_eq: dict = {}
    for r in rows:
        if r.is_trivial():
            continue
        if r.is_contradiction():
            return None
        n = r.normalized()
        if n.rel is Rel.EQ:
            key = (n.coeffs, n.rhs)
            out_eq[key] = n
            continue
        prev = best.get(n.coeffs)
        if prev is None or n.rhs < prev.rhs or (n.rhs == prev.rhs and n.rel is Rel.LT):
            best[n.coeffs] = n
    return list(out_eq.values()) + list(best.values())


def _eliminate(rows: list[LinConstraint], v: int) -> list[LinConstraint]:
    pivot = next((r for r in rows if r.rel is Rel.EQ and r.coeffs[v]), None)
    if pivot is not None:
        pv = pivot.coeffs[v]
        out = []
        for r in rows:
            if r is pivot:
                continue
            f = r.coeffs[v]
            if f:
                k = f / pv
                r = LinConstraint(
                    tuple(a - k * b for a, b in zip(r.coeffs, pivot.coeffs)), r.rhs - k * pivot.rhs, r.rel
                )
            out.append(r)
        return out
    pos, negs, out = [], [], []
    for r in rows:
        f = r.coeffs[v]
        if f > 0:
            pos.append(r)
        elif f < 0:
            negs.append(r)
        else:
            out.append(r)
    for p in pos:
        for n in negs:
            a, b = -n.coeffs[v], p.coeffs[v]
            coeffs = tuple(a * x + b * y for x, y in zip(p.coeffs, n.coeffs))
            rel = Rel.LT if Rel.LT in (p.rel, n.rel) else Rel.LE
            out.append(LinConstraint(coeffs, a * p.rhs + b * n.rhs, rel))
    return out


def fm_project(S: SemiClosedPolyhedron, drop: Iterable[int]) -> SemiClosedPolyhedron:
    """Existential projection eliminating the coordinates in ``drop``.

    Equalities are used for substitution when available; otherwise Fourier-Motzkin
    pairs a lower and an upper bound, and the derived row is strict iff either
    parent is strict.
    """
    drop = sorted(set(drop))
    keep = [i for i in range(S.dim) if i not in drop]
    rows = _clean(list(S.rows), S.dim)
    for v in drop:
        if rows is None:
            break
        rows = _clean(_eliminate(rows, v), S.dim)
        if rows is not None and len(rows) > _FM_PRUNE_ROWS:
            rows = simplify_system(rows, S.dim)
    if rows is None:
        return SemiClosedPolyhedron.empty(len(keep))
    out = [LinConstraint(tuple(r.coeffs[i] for i in keep), r.rhs, r.rel) for r in rows]
    return SemiClosedPolyhedron.from_rows(len(keep), out)


def sc_affine_image(S: SemiClosedPolyhedron, T: Sequence[Sequence], b: Sequence) -> SemiClosedPolyhedron:
    """``{T x + b : x in S}`` by projecting the graph of the map."""
    n, m = S.dim, len(b)
    rows = [LinConstraint(r.coeffs + zeros(m), r.rhs, r.rel) for r in S.rows]
    for i in range(m):
        coeffs = tuple(-t for t in T[i]) + tuple(1 if k == i else 0 for k in range(m))
        rows.append(LinConstraint(coeffs, b[i], Rel.EQ))
    return fm_project(SemiClosedPolyhedron.from_rows(n + m, rows), range(n))


def sc_affine_preimage(S: SemiClosedPolyhedron, T: Sequence[Sequence], b: Sequence) -> SemiClosedPolyhedron:
    """``{x : T x + b in S}`` by substitution; strictness carries over row by row."""
    n = len(T[0]) if T else 0
    rows = []
    for r in S.rows:
        coeffs = vecmat(r.coeffs, T) if T else zeros(n)
        rows.append(LinConstraint(coeffs, r.rhs - dot(r.coeffs, b), r.rel))
    return SemiClosedPolyhedron.from_rows(n, rows)


def sc_sum(P: VPolyhedron, C: SemiClosedPolyhedron) -> SemiClosedPolyhedron:
    """``P + C`` for a closed ``P`` in generator form and a semi-closed ``C``.

    Builds ``{(p, y) : p in P, y - p in C}`` and projects out ``p``.
    """
    if P.dim != C.dim:
        raise ValueError("dimension mismatch")
    d = P.dim
    if not P.points or sc_is_empty(C):
        return SemiClosedPolyhedron.empty(d)
    H = to_halfspaces(P)
    rows = [LinConstraint(r.coeffs + zeros(d), r.rhs, r.rel) for r in H.rows]
    rows += [LinConstraint(neg(r.coeffs) + r.coeffs, r.rhs, r.rel) for r in C.rows]
    return fm_project(SemiClosedPolyhedron.from_rows(2 * d, rows), range(d))


# ---------------------------------------------------------------------------
# tidying
# ---------------------------------------------------------------------------

def sc_normalize(S: SemiClosedPolyhedron) -> SemiClosedPolyhedron:
    rows = simplify_system(list(S.rows), S.dim)
    if rows is None:
        return SemiClosedPolyhedron.empty(S.dim)
    return SemiClosedPolyhedron.from_rows(S.dim, rows)


def region_simplify(R: Region) -> Region:
    """Same set with empty pieces dropped, rows reduced and nested pieces removed."""
    pieces = [sc_normalize(p) for p in R.pieces if not sc_is_empty(p)]
    pieces = list(dict.fromkeys(pieces))
    kept: list[SemiClosedPolyhedron] = []
    for i, p in enumerate(pieces):
        others = kept + pieces[i + 1:]
        if not any(sc_subset(p, q) for q in others):
            kept.append(p)
    return Region(R.dim, tuple(kept))


def region_closure(R: Region) -> Region:
    return Region(R.dim, tuple(p.closure() for p in R.pieces if not sc_is_empty(p)))


def region_is_closed(R: Region) -> bool:
    """Exact test that the union is topologically closed (closure ∖ R is empty)."""
    return region_is_empty(region_difference(region_closure(R), R))
