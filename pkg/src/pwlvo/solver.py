"""Efficient and weakly efficient sets of a piecewise linear vector problem.

Image side: ``Q = f(D) + K`` is the union of ``M_k + K`` with ``M_k = f(D ∩ P_k)``.
Its frontiers are computed by exact set differences, then pulled back piece by
piece to the decision space.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import cone as conemod
from .cone import OrderingCone
from .errors import AllEmpty, EmptyFeasible, EmptyInterior, HasStrictRows
from .exactmath import (
    LinConstraint, Rel, count_lps, lp_optimize, matmul, matvec, neg,
)
from .polyhedron import HPolyhedron, VPolyhedron, intersect
from .pwl import Piece, PiecewiseLinearFn, Problem, image_pieces, image_plus_cone, is_k_function
from .semiclosed import (
    Region, SemiClosedPolyhedron, region_difference, region_intersect, region_is_closed,
    region_is_empty, sc_affine_preimage, sc_intersect, sc_is_empty, sc_normalize, sc_subset, sc_sum,
)


class FrontierKind(str, enum.Enum):
    EFFICIENT = "efficient"
    WEAKLY_EFFICIENT = "weakly_efficient"


@dataclass(frozen=True)
class FrontierDecomposition:
    image_pieces: Region
    kind: FrontierKind


# ---------------------------------------------------------------------------
# image-side frontiers
# ---------------------------------------------------------------------------

def _q_region(Ms: Sequence[VPolyhedron], K: OrderingCone, entries=None) -> Region:
    from .polyhedron import minkowski_sum, to_halfspaces

    if entries is None:
        entries = [to_halfspaces(minkowski_sum(M, K.generators)) for M in Ms]
    return Region(K.dim, tuple(SemiClosedPolyhedron.from_h(E) for E, M in zip(entries, Ms) if M.points))


def _check_nonempty(Ms: Sequence[VPolyhedron]) -> None:
    if not any(M.points for M in Ms):
        raise AllEmpty("every image piece is empty")


def efficient_frontier(Ms: Sequence[VPolyhedron], K: OrderingCone, q: Optional[Region] = None) -> FrontierDecomposition:
    """``E(Q|K) = Q ∖ ∪ (M_k + C_j)`` over the strict pieces ``C_j`` of ``K ∖ l(K)``.

    ``q`` may carry a precomputed (for instance consolidated) form of ``Q``.
    """
    _check_nonempty(Ms)
    Q = q if q is not None else _q_region(Ms, K)
    cuts = [sc_sum(M, C) for M in Ms if M.points for C in conemod.k_minus_l_pieces(K).pieces]
    E = region_difference(Q, Region(K.dim, tuple(cuts)))
    return FrontierDecomposition(tidy(E)[0], FrontierKind.EFFICIENT)


def weak_frontier_generic(Ms: Sequence[VPolyhedron], K: OrderingCone, q: Optional[Region] = None) -> FrontierDecomposition:
    """``E^w(Q|K) = Q ∖ ∪ (M_k + int K)``."""
    _check_nonempty(Ms)
    if not K.has_interior:
        raise EmptyInterior("the cone has empty interior")
    Q = q if q is not None else _q_region(Ms, K)
    cuts = [sc_sum(M, K.interior()) for M in Ms if M.points]
    E = region_difference(Q, Region(K.dim, tuple(cuts)))
    return FrontierDecomposition(tidy(E)[0], FrontierKind.WEAKLY_EFFICIENT)


class SumKind(str, enum.Enum):
    OPEN_HALFSPACE = "open_halfspace"
    WHOLE_SPACE = "whole_space"
    EMPTY = "empty"


@dataclass(frozen=True)
class HalfspaceSum:
    kind: SumKind
    row: Optional[LinConstraint] = None


def halfspace_plus_open(H: LinConstraint, yj: Sequence) -> HalfspaceSum:
    """``{a.y <= beta} + {yj.y < 0}``."""
    a, beta = H.coeffs, H.rhs
    if not any(yj):
        raise ValueError("cone row must be nonzero")
    if not any(a):
        return HalfspaceSum(SumKind.EMPTY) if beta < 0 else HalfspaceSum(SumKind.WHOLE_SPACE)
    i = next(i for i, v in enumerate(yj) if v)
    lam = a[i] / yj[i]
    if any(x != lam * y for x, y in zip(a, yj)):
        return HalfspaceSum(SumKind.WHOLE_SPACE)
    if lam > 0:
        return HalfspaceSum(SumKind.OPEN_HALFSPACE, LinConstraint(a, beta, Rel.LT))
    return HalfspaceSum(SumKind.WHOLE_SPACE)


def halfspace_plus_interior(H: LinConstraint, K: OrderingCone) -> HalfspaceSum:
    """``{a.y <= beta} + int K`` for a cone with nonempty interior.

    The sum is the open half-space when ``a`` is a nonnegative combination of the
    cone rows (so ``a.d < 0`` on ``int K``) and the whole space otherwise.
    """
    a, beta = H.coeffs, H.rhs
    if not any(a):
        return HalfspaceSum(SumKind.EMPTY) if beta < 0 else HalfspaceSum(SumKind.WHOLE_SPACE)
    # a = sum_j mu_j y_j with mu >= 0, as a feasibility problem in mu
    q = len(K.rows)
    rows = [LinConstraint(tuple(r[i] for r in K.rows), a[i], Rel.EQ) for i in range(K.dim)]
    rows += [LinConstraint(tuple(-1 if j == t else 0 for t in range(q)), 0, Rel.LE) for j in range(q)]
    if lp_optimize((0,) * q, rows, dim=q).optimal:
        return HalfspaceSum(SumKind.OPEN_HALFSPACE, LinConstraint(a, beta, Rel.LT))
    return HalfspaceSum(SumKind.WHOLE_SPACE)


def weak_frontier_paper(Ms: Sequence[VPolyhedron], K: OrderingCone, literal: bool = False,
                        entries: Optional[Sequence[HPolyhedron]] = None) -> FrontierDecomposition:
    """``E^w(Q|K) = ∩_k ∪_i (Q ∖ (H_{k,i} + int K))`` from the H-forms of ``M_k + K``.

    Each ``M_k + K`` is the intersection of half-spaces ``H_{k,i}``; since K lies in
    its recession cone, ``(M_k + K) + int K`` is the intersection of the sums
    ``H_{k,i} + int K``.  Removing it from ``Q`` keeps the closed pieces
    ``(M_{k1} + K) ∩ {a_{k,i}.y >= beta_{k,i}}``.

    With ``literal=True`` each ``H_{k,i} + int K`` is replaced by the intersection
    over cone rows ``j`` of ``H_{k,i} + int H_j`` (``H_j`` the half-space of row
    ``j``).  That intersection is the whole space when the facet normal is parallel
    to no cone row, even if the normal lies in the polar of K, so facets such as
    ``y1 + y2 <= 0`` under the orthant are lost along with their weakly efficient
    points.  The mode is kept to exhibit that gap.
    """
    from .polyhedron import minkowski_sum, to_halfspaces

    _check_nonempty(Ms)
    if not K.has_interior:
        raise EmptyInterior("the cone has empty interior")
    if entries is None:
        entries = [to_halfspaces(minkowski_sum(M, K.generators)) for M in Ms]
    live = [E for E, M in zip(entries, Ms) if M.points]
    Q = Region(K.dim, tuple(SemiClosedPolyhedron.from_h(E) for E in live))
    result = Q
    for E in live:
        rows = list(E.inequalities)
        for e in E.equalities:
            rows += [LinConstraint(e.coeffs, e.rhs, Rel.LE), LinConstraint(neg(e.coeffs), -e.rhs, Rel.LE)]
        keep = []
        for r in rows:
            if literal:
                sums = [halfspace_plus_open(r, y) for y in K.rows]
                kinds = {s.kind for s in sums}
                if SumKind.EMPTY in kinds:
                    kept = None
                elif SumKind.OPEN_HALFSPACE in kinds:
                    kept = r
                else:
                    kept = False
            else:
                s = halfspace_plus_interior(r, K)
                kept = None if s.kind is SumKind.EMPTY else (r if s.kind is SumKind.OPEN_HALFSPACE else False)
            if kept is None:
                # the piece itself is empty and removes nothing
                keep = None
                break
            if kept is not False:
                keep.append(kept)
        if keep is None:
            continue
        outside = Region(K.dim, tuple(
            SemiClosedPolyhedron.from_rows(K.dim, [LinConstraint(neg(r.coeffs), -r.rhs, Rel.LE)]) for r in keep
        ))
        result = region_intersect(result, outside)
        if not result.pieces:
            break
    return FrontierDecomposition(tidy(result)[0], FrontierKind.WEAKLY_EFFICIENT)


# ---------------------------------------------------------------------------
# decision space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PulledBack:
    region: Region
    provenance: tuple   # (k, j) per piece: function piece k, frontier piece j


def pull_back(frontier: FrontierDecomposition, problem: Problem) -> PulledBack:
    """``∪_{k,j} D ∩ P_k ∩ {x : T_k x + b_k in Q_j}``."""
    n = problem.f.source_dim
    pieces, prov = [], []
    for k, p in enumerate(problem.f.pieces):
        base = SemiClosedPolyhedron.from_h(intersect(problem.feasible, p.domain))
        if sc_is_empty(base):
            continue
        for j, Qj in enumerate(frontier.image_pieces.pieces):
            s = sc_intersect(base, sc_affine_preimage(Qj, p.map, p.offset))
            if not sc_is_empty(s):
                pieces.append(s)
                prov.append((k, j))
    region, kept = tidy(Region(n, tuple(pieces)))
    return PulledBack(region, tuple(prov[i] for i in kept))


def tidy(R: Region) -> tuple[Region, list[int]]:
    """Same set, fewer rows: empty and nested pieces dropped, and strict rows
    relaxed on every piece whose closure stays inside the union.

    Returns the region and the indices of the surviving input pieces.
    """
    idx = [i for i, p in enumerate(R.pieces) if not sc_is_empty(p)]
    pieces = [sc_normalize(R.pieces[i]) for i in idx]
    pieces, idx = _drop_nested(pieces, idx)
    whole = Region(R.dim, tuple(pieces))
    relaxed = False
    for t, p in enumerate(pieces):
        if p.strict:
            c = p.closure()
            if region_is_empty(region_difference(Region(R.dim, (c,)), whole)):
                pieces[t] = sc_normalize(c)
                relaxed = True
    if relaxed:
        pieces, idx = _drop_nested(pieces, idx)
    return Region(R.dim, tuple(pieces)), idx


def _drop_nested(pieces: list, idx: list) -> tuple[list, list]:
    kept_p, kept_i = [], []
    for t, p in enumerate(pieces):
        if p in kept_p:
            continue
        later = [q for q in pieces[t + 1:] if q != p]
        if any(sc_subset(p, q) for q in kept_p + later):
            continue
        kept_p.append(p)
        kept_i.append(idx[t])
    return kept_p, kept_i


def quotient_reduce(problem: Problem) -> Problem:
    """Replace ``(f, K)`` by ``(pi∘f, K1)`` in coordinates of the complement ``Y1``."""
    K = problem.cone
    C = K.coord_map
    if not C:
        raise ValueError("the cone is a linear subspace of full dimension")
    pieces = [Piece(p.domain, matmul(C, p.map), matvec(C, p.offset)) for p in problem.f.pieces]
    f1 = PiecewiseLinearFn(problem.f.source_dim, len(C), pieces)
    return Problem(f1, problem.feasible, conemod.build(K.k1_rows))


@dataclass(frozen=True)
class ConnectivityCertificate:
    connected: bool
    components: tuple       # tuples of piece indices
    certified: bool = True  # False: computed on closures of semi-closed pieces


def connectivity_certificate(R: Region, descriptive: bool = False) -> ConnectivityCertificate:
    """Components of the piece intersection graph.

    For closed convex pieces the union is connected by line segments iff this
    graph is connected.  Pieces with strict rows raise unless ``descriptive`` is
    set, in which case their closures are used and the result is not certified.
    """
    strict = any(p.strict for p in R.pieces)
    if strict and not descriptive:
        raise HasStrictRows("connectivity is certified only for closed pieces")
    pieces = [p.closure() for p in R.pieces]
    parent = list(range(len(pieces)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if find(i) != find(j) and not sc_is_empty(sc_intersect(pieces[i], pieces[j])):
                parent[find(j)] = find(i)
    groups: dict = {}
    for i in range(len(pieces)):
        groups.setdefault(find(i), []).append(i)
    comps = tuple(tuple(g) for g in sorted(groups.values()))
    return ConnectivityCertificate(len(comps) <= 1, comps, not strict)


def decomposition_equal(Ra: Region, Rb: Region) -> bool:
    if Ra.dim != Rb.dim:
        raise ValueError("dimension mismatch")
    return region_is_empty(region_difference(Ra, Rb)) and region_is_empty(region_difference(Rb, Ra))


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------

@dataclass
class SolveReport:
    sol: Region
    wsol: Optional[Region]
    convex: bool
    sol_closed: bool
    wsol_closed: Optional[bool]
    sol_connected: ConnectivityCertificate
    wsol_connected: Optional[ConnectivityCertificate]
    efficient: Optional[FrontierDecomposition] = None
    weak: Optional[FrontierDecomposition] = None
    sol_provenance: tuple = ()
    wsol_provenance: tuple = ()
    methods_agree: Optional[bool] = None
    method: str = "paper"
    stats: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


METHODS = ("paper", "generic", "both")


def _certify(R: Region) -> ConnectivityCertificate:
    return connectivity_certificate(R, descriptive=any(p.strict for p in R.pieces))


def solve(problem: Problem, method: str = "paper") -> SolveReport:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    n = problem.f.source_dim
    K = problem.cone
    with count_lps() as lps:
        notes = []
        try:
            convex = bool(is_k_function(problem.f, problem.feasible, K))
        except EmptyFeasible:
            empty = Region(n)
            cert = ConnectivityCertificate(True, ())
            return SolveReport(empty, empty, True, True, True, cert, cert, method=method,
                               notes=["feasible set is empty"], stats={"lps": lps[0]})
        Ms = image_pieces(problem)
        ipc = image_plus_cone(problem, convex=convex, images=Ms)
        if ipc.consolidated is not None:
            Q = Region(K.dim, (SemiClosedPolyhedron.from_h(ipc.consolidated),))
        else:
            Q = _q_region(Ms, K, ipc.entries)
        E = efficient_frontier(Ms, K, q=Q)
        sol = pull_back(E, problem)

        Ew = wsol = None
        agree = None
        if not K.has_interior:
            notes.append("cone has empty interior: weakly efficient set not computed")
        else:
            if method in ("paper", "both"):
                Ew = weak_frontier_paper(Ms, K, entries=ipc.entries)
            if method in ("generic", "both"):
                Eg = weak_frontier_generic(Ms, K, q=Q)
                if Ew is None:
                    Ew = Eg
                else:
                    agree = decomposition_equal(Ew.image_pieces, Eg.image_pieces)
                    if not agree:
                        notes.append("facet-expansion and difference weak frontiers differ")
            wsol = pull_back(Ew, problem)

        sol_closed = region_is_closed(sol.region)
        if convex and not sol_closed:
            notes.append("f is K-convex but the efficient set is not closed")
        report = SolveReport(
            sol=sol.region,
            wsol=wsol.region if wsol else None,
            convex=convex,
            sol_closed=sol_closed,
            wsol_closed=region_is_closed(wsol.region) if wsol else None,
            sol_connected=_certify(sol.region),
            wsol_connected=_certify(wsol.region) if wsol else None,
            efficient=E,
            weak=Ew,
            sol_provenance=sol.provenance,
            wsol_provenance=wsol.provenance if wsol else (),
            methods_agree=agree,
            method=method,
            notes=notes,
        )
    report.stats = {
        "lps": lps[0],
        "image_pieces": sum(1 for M in Ms if M.points),
        "frontier_pieces": len(E.image_pieces),
        "weak_frontier_pieces": len(Ew.image_pieces) if Ew else None,
        "sol_pieces": len(report.sol),
        "wsol_pieces": len(report.wsol) if report.wsol is not None else None,
    }
    return report
