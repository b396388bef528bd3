"""Polyhedral ordering cones ``K = {y : <y_j*, y> <= 0 for all j}``.

Alongside the rows, a built cone carries its lineality space ``Y0``, a fixed
complement ``Y1``, the pointed part ``K1`` in ``Y1``-coordinates and the
projection onto ``Y1`` along ``Y0``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import WholeSpaceCone, ZeroRow
from .exactmath import (
    LinConstraint, Matrix, Rel, Subspace, Vector, add, complement, dot, inverse, matmul,
    matvec, nullspace, scale, strict_feasible, transpose, vec, zeros,
)
from .polyhedron import HPolyhedron, VPolyhedron, to_generators
from .semiclosed import Region, SemiClosedPolyhedron, prune


@dataclass(frozen=True)
class OrderingCone:
    dim: int
    rows: tuple
    y0: Subspace
    y1: Subspace
    coord_map: Matrix   # y -> coordinates of its Y1-component
    pi: Matrix          # projection onto Y1 along Y0, ambient coordinates
    k1_rows: tuple      # rows of K1 in Y1-coordinates

    @cached_property
    def generators(self) -> VPolyhedron:
        return to_generators(self.as_h())

    @cached_property
    def has_interior(self) -> bool:
        return strict_feasible(list(self.interior().rows), self.dim) is not None

    def as_h(self) -> HPolyhedron:
        return HPolyhedron(self.dim, (), tuple(LinConstraint(r, 0, Rel.LE) for r in self.rows))

    def as_sc(self) -> SemiClosedPolyhedron:
        return SemiClosedPolyhedron.from_h(self.as_h())

    def interior(self) -> SemiClosedPolyhedron:
        return SemiClosedPolyhedron(self.dim, (), (), tuple(LinConstraint(r, 0, Rel.LT) for r in self.rows))

    def contains(self, y: Sequence) -> bool:
        return all(dot(r, y) <= 0 for r in self.rows)


def build(rows: Iterable[Sequence]) -> OrderingCone:
    rows = tuple(vec(r) for r in rows)
    if not rows:
        raise WholeSpaceCone("a cone without rows is the whole space")
    dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ValueError("cone rows have different lengths")
    for j, r in enumerate(rows):
        if not any(r):
            raise ZeroRow(f"cone row {j} is zero")
    y0 = Subspace.span(dim, nullspace(rows, dim))
    y1 = complement(y0)
    basis_cols = transpose(y0.basis + y1.basis)
    inv = inverse(basis_cols)
    coord_map = tuple(inv[y0.rank:])
    pi = matmul(transpose(y1.basis), coord_map)
    k1_rows = tuple(tuple(dot(r, b) for b in y1.basis) for r in rows)
    return OrderingCone(dim, rows, y0, y1, coord_map, pi, k1_rows)


def in_k(K: OrderingCone, y: Sequence) -> bool:
    return K.contains(y)


def in_int(K: OrderingCone, y: Sequence) -> bool:
    """Every row strictly negative at ``y``."""
    return all(dot(r, y) < 0 for r in K.rows)


def in_k_minus_l(K: OrderingCone, y: Sequence) -> bool:
    """``y`` in K but outside its lineality space: all rows <= 0, some row < 0."""
    vals = [dot(r, y) for r in K.rows]
    return all(v <= 0 for v in vals) and any(v < 0 for v in vals)


def k_minus_l_pieces(K: OrderingCone) -> Region:
    """One semi-closed cone per row, with that row made strict."""
    pieces = []
    for j in range(len(K.rows)):
        rows = [LinConstraint(r, 0, Rel.LT if i == j else Rel.LE) for i, r in enumerate(K.rows)]
        pieces.append(SemiClosedPolyhedron.from_rows(K.dim, rows))
    return prune(Region(K.dim, tuple(pieces)))


def project(K: OrderingCone, y: Sequence) -> Vector:
    """Coordinates of the ``Y1``-component of ``y``."""
    return matvec(K.coord_map, y)


def quotient_check(K: OrderingCone, y: Sequence) -> bool:
    """Whether the projection of ``y`` is a nonzero point of the pointed part ``K1``."""
    c = project(K, y)
    return any(c) and all(dot(r, c) <= 0 for r in K.k1_rows)


def translation_invariance_check(K: OrderingCone, samples: Iterable[tuple[Sequence, Sequence]]) -> bool:
    """Check ``(K∖l(K)) + K ⊆ K∖l(K)`` and ``int K + K ⊆ int K`` on sample pairs ``(w, k)``.

    Pairs whose ``k`` is outside K, or whose ``w`` is in neither set, are not tests
    of either inclusion and are skipped.
    """
    for w, k in samples:
        if not K.contains(k):
            continue
        s = add(w, k)
        if in_k_minus_l(K, w) and not in_k_minus_l(K, s):
            return False
        if in_int(K, w) and not in_int(K, s):
            return False
    return True


def sample_in_cone(K: OrderingCone, rng: random.Random, scale_max: int = 5) -> Vector:
    """Random rational point of K built from its generators."""
    V = K.generators
    y = zeros(K.dim)
    for r in V.rays:
        y = add(y, scale(mpq(rng.randint(0, 4 * scale_max), 4), r))
    for l in V.lineality.basis:
        y = add(y, scale(mpq(rng.randint(-4 * scale_max, 4 * scale_max), 4), l))
    return y
