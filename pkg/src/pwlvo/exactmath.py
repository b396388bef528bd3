"""Exact rational linear algebra and a simplex LP over the rationals.

Every scalar is a :class:`gmpy2.mpq`, which is always kept in lowest terms
with a positive denominator.  Vectors are plain tuples of ``mpq`` and
matrices are tuples of row tuples.
"""
from __future__ import annotations

import contextlib
import contextvars
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from gmpy2 import mpq

Rat = type(mpq(0))
Vector = tuple
Matrix = tuple

ZERO = mpq(0)
ONE = mpq(1)


def rat(value) -> Rat:
    """Convert ``value`` to an exact rational.

    Accepts ints, ``mpq``, :class:`fractions.Fraction` and strings of the form
    ``"p"`` or ``"p/q"``.  Floats are refused so that no rounding can leak in.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"floating-point value {value!r} is not accepted; use a string like '1/3'")
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return mpq(text)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def fmt(q) -> str:
    """Canonical ``"p/q"`` (or ``"p"``) string for a rational."""
    return str(mpq(q))


def vec(values: Iterable) -> Vector:
    return tuple(rat(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def dot(a: Sequence, b: Sequence) -> Rat:
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def is_zero(a: Sequence) -> bool:
    return not any(a)


def matvec(m: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in m)


def transpose(m: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def vecmat(x: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix, i.e. ``x^T M``."""
    if not m:
        return ()
    out = [ZERO] * len(m[0])
    for xi, row in zip(x, m):
        if xi:
            for j, v in enumerate(row):
                if v:
                    out[j] += xi * v
    return tuple(out)


def primitive(a: Sequence) -> Vector:
    """Positive rescaling of ``a`` to coprime integer entries (zero stays zero)."""
    nonzero = [x for x in a if x]
    if not nonzero:
        return tuple(a)
    den = 1
    for x in nonzero:
        d = int(x.denominator)
        den = den * d // _gcd(den, d)
    ints = [int(x * den) for x in a]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    return tuple(mpq(v // g) for v in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Gaussian elimination, subspaces
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    m = [[mpq(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(vectors: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not vectors:
        return 0
    return len(rref(vectors, ncols if ncols is not None else len(vectors[0]))[1])


def nullspace(a: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : A x = 0}``."""
    red, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [ZERO] * ncols
        x[fcol] = ONE
        for row, pc in zip(red, pivots):
            x[pc] = -row[fcol]
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of ``Q^dim`` given by linearly independent basis vectors."""

    dim: int
    basis: tuple = ()

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.dim:
                raise ValueError("basis vector length does not match ambient dimension")
        if rank(self.basis, self.dim) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Subspace spanned by arbitrary (possibly dependent) vectors."""
        vs = [tuple(v) for v in vectors if any(v)]
        if not vs:
            return cls(dim, ())
        red, _ = rref(vs, dim)
        return cls(dim, tuple(primitive(r) for r in red))

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(dim, ())

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(dim, identity(dim))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        if not any(v):
            return True
        return rank(list(self.basis) + [tuple(v)], self.dim) == len(self.basis)


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel: Subspace


def solve_linear(a: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> Optional[Solution]:
    """Solve ``A x = b`` exactly.  Returns ``None`` when the system is inconsistent."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    aug = [tuple(row) + (rhs,) for row, rhs in zip(a, vec(b))]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [ZERO] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return Solution(tuple(x), Subspace.span(n, nullspace(a, n)))


def complement(sub: Subspace) -> Subspace:
    """Complement spanned by the first standard basis vectors independent of ``sub``."""
    chosen: list[Vector] = list(sub.basis)
    extra = []
    for i in range(sub.dim):
        if len(chosen) == sub.dim:
            break
        e = unit(sub.dim, i)
        if rank(chosen + [e], sub.dim) > len(chosen):
            chosen.append(e)
            extra.append(e)
    return Subspace(sub.dim, tuple(extra))


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(row) + list(unit(n, i)) for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


# ---------------------------------------------------------------------------
# Linear constraints
# ---------------------------------------------------------------------------

class Rel(str, enum.Enum):
    EQ = "="
    LE = "<="
    LT = "<"


@dataclass(frozen=True)
class LinConstraint:
    """``<coeffs, x> rel rhs`` with ``rel`` one of =, <=, <."""

    coeffs: Vector
    rhs: Rat
    rel: Rel = Rel.LE

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(mpq(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", mpq(self.rhs))
        object.__setattr__(self, "rel", Rel(self.rel))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def slack(self, x: Sequence) -> Rat:
        return self.rhs - dot(self.coeffs, x)

    def holds(self, x: Sequence) -> bool:
        s = self.slack(x)
        if self.rel is Rel.EQ:
            return s == 0
        if self.rel is Rel.LE:
            return s >= 0
        return s > 0

    def relaxed(self) -> "LinConstraint":
        return LinConstraint(self.coeffs, self.rhs, Rel.LE) if self.rel is Rel.LT else self

    def with_rel(self, rel: Rel) -> "LinConstraint":
        return LinConstraint(self.coeffs, self.rhs, rel)

    def is_trivial(self) -> bool:
        """Row with zero coefficients that every point satisfies."""
        return not any(self.coeffs) and self.holds(zeros(self.dim))

    def is_contradiction(self) -> bool:
        return not any(self.coeffs) and not self.holds(zeros(self.dim))

    def normalized(self) -> "LinConstraint":
        """Positive rescaling making the coefficients coprime integers."""
        if not any(self.coeffs):
            if self.holds(()):
                return LinConstraint(self.coeffs, ONE if self.rel is not Rel.EQ else ZERO, self.rel)
            return LinConstraint(self.coeffs, -ONE if self.rel is not Rel.EQ else ONE, self.rel)
        p = primitive(self.coeffs)
        ratio = next(pi / ci for pi, ci in zip(p, self.coeffs) if ci)
        coeffs, rhs = p, self.rhs * ratio
        if self.rel is Rel.EQ and next(c for c in coeffs if c) < 0:
            coeffs, rhs = neg(coeffs), -rhs
        return LinConstraint(coeffs, rhs, self.rel)

    def __str__(self) -> str:
        return f"{' '.join(fmt(c) for c in self.coeffs)} {self.rel.value} {fmt(self.rhs)}"


def le(coeffs, rhs) -> LinConstraint:
    return LinConstraint(vec(coeffs), rat(rhs), Rel.LE)


def lt(coeffs, rhs) -> LinConstraint:
    return LinConstraint(vec(coeffs), rat(rhs), Rel.LT)


def eq(coeffs, rhs) -> LinConstraint:
    return LinConstraint(vec(coeffs), rat(rhs), Rel.EQ)


# ---------------------------------------------------------------------------
# Simplex
# ---------------------------------------------------------------------------

class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Rat] = None
    point: Optional[Vector] = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


_lp_counter: contextvars.ContextVar[Optional[list]] = contextvars.ContextVar("lp_counter", default=None)


@contextlib.contextmanager
def count_lps() -> Iterator[list]:
    """Count simplex solves made inside the block; the count is ``box[0]``."""
    box = [0]
    token = _lp_counter.set(box)
    try:
        yield box
    finally:
        _lp_counter.reset(token)


def _pivot(tab: list[list], obj: list, row: int, col: int) -> None:
    prow = tab[row]
    pv = prow[col]
    if pv != 1:
        prow = [x / pv for x in prow]
        tab[row] = prow
    nz = [j for j, x in enumerate(prow) if x]
    for i, r in enumerate(tab):
        if i != row:
            f = r[col]
            if f:
                for j in nz:
                    r[j] -= f * prow[j]
    f = obj[col]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]


def _run_simplex(tab: list[list], basis: list[int], obj: list, allowed: list[bool]) -> bool:
    """Minimise with Bland's rule.  ``obj`` holds reduced costs and, last, -value.

    Returns False if the problem is unbounded.
    """
    ncols = len(obj) - 1
    while True:
        col = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if col is None:
            return True
        best = None
        for i, r in enumerate(tab):
            a = r[col]
            if a > 0:
                ratio = r[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, obj, best[1], col)
        basis[best[1]] = col


def _reduced_costs(tab: list[list], basis: list[int], cost: list) -> list:
    obj = list(cost) + [ZERO]
    for i, r in enumerate(tab):
        cb = cost[basis[i]]
        if cb:
            for j, v in enumerate(r):
                if v:
                    obj[j] -= cb * v
    return obj


def lp_optimize(objective: Sequence, constraints: Sequence[LinConstraint], sense: str = "min",
                dim: Optional[int] = None) -> LPResult:
    """Optimise ``<objective, x>`` over free variables ``x`` subject to EQ/LE rows.

    Two-phase dense-tableau simplex in exact arithmetic with Bland's rule.
    """
    box = _lp_counter.get()
    if box is not None:
        box[0] += 1
    n = dim if dim is not None else len(objective)
    c = [mpq(v) for v in objective] if objective else [ZERO] * n
    if sense == "max":
        c = [-v for v in c]
    elif sense != "min":
        raise ValueError(f"unknown sense {sense!r}")

    rows = []
    for con in constraints:
        if con.rel is Rel.LT:
            raise ValueError("lp_optimize accepts only closed (EQ/LE) constraints")
        if not any(con.coeffs):
            if not con.holds(zeros(n)):
                return LPResult(LPStatus.INFEASIBLE)
            continue
        rows.append(con)

    n_le = sum(1 for r in rows if r.rel is Rel.LE)
    # columns: x+ (n), x- (n), slacks (n_le), artificials (added below), rhs
    tab: list[list] = []
    basis: list[int] = []
    needs_art: list[int] = []
    s = 0
    for con in rows:
        line = [ZERO] * (2 * n + n_le)
        for j, a in enumerate(con.coeffs):
            if a:
                line[j] = a
                line[n + j] = -a
        rhs = con.rhs
        slack_col = None
        if con.rel is Rel.LE:
            slack_col = 2 * n + s
            line[slack_col] = ONE
            s += 1
        if rhs < 0:
            line = [-v for v in line]
            rhs = -rhs
        tab.append(line + [rhs])
        if slack_col is not None and line[slack_col] == 1:
            basis.append(slack_col)
        else:
            basis.append(-1)
            needs_art.append(len(tab) - 1)

    nbase = 2 * n + n_le
    n_art = len(needs_art)
    ncols = nbase + n_art
    for i, r in enumerate(tab):
        rhs = r.pop()
        r.extend([ZERO] * n_art)
        r.append(rhs)
    for a, i in enumerate(needs_art):
        tab[i][nbase + a] = ONE
        basis[i] = nbase + a

    allowed = [True] * ncols
    if n_art:
        cost1 = [ZERO] * nbase + [ONE] * n_art
        obj = _reduced_costs(tab, basis, cost1)
        _run_simplex(tab, basis, obj, allowed)
        if obj[-1] != 0:
            return LPResult(LPStatus.INFEASIBLE)
        for i in range(len(tab) - 1, -1, -1):
            if basis[i] >= nbase:
                col = next((j for j in range(nbase) if tab[i][j]), None)
                if col is None:
                    del tab[i]
                    del basis[i]
                else:
                    _pivot(tab, [ZERO] * (ncols + 1), i, col)
                    basis[i] = col
        for j in range(nbase, ncols):
            allowed[j] = False

    cost2 = [c[j] if j < n else (-c[j - n] if j < 2 * n else ZERO) for j in range(nbase)] + [ZERO] * n_art
    obj = _reduced_costs(tab, basis, cost2)
    if not _run_simplex(tab, basis, obj, allowed):
        return LPResult(LPStatus.UNBOUNDED)
    z = [ZERO] * ncols
    for i, b in enumerate(basis):
        z[b] = tab[i][-1]
    x = tuple(z[j] - z[n + j] for j in range(n))
    value = dot(objective, x) if objective else ZERO
    return LPResult(LPStatus.OPTIMAL, mpq(value), x)


def strict_feasible(constraints: Sequence[LinConstraint], dim: Optional[int] = None) -> Optional[Vector]:
    """A point satisfying every row with its own relation, or ``None`` if none exists.

    Strict rows become ``<a, x> + eps <= b`` and ``eps`` is maximised (capped at 1);
    the system is strictly feasible iff the optimum is positive.
    """
    if dim is None:
        if not constraints:
            raise ValueError("dim is required for an empty constraint list")
        dim = constraints[0].dim
    strict = [c for c in constraints if c.rel is Rel.LT]
    if not strict:
        res = lp_optimize((), constraints, dim=dim)
        return res.point if res.optimal else None
    aux = []
    for con in constraints:
        if con.rel is Rel.LT:
            aux.append(LinConstraint(con.coeffs + (ONE,), con.rhs, Rel.LE))
        else:
            aux.append(LinConstraint(con.coeffs + (ZERO,), con.rhs, con.rel))
    aux.append(LinConstraint(zeros(dim) + (ONE,), ONE, Rel.LE))
    res = lp_optimize(zeros(dim) + (ONE,), aux, sense="max", dim=dim + 1)
    if res.optimal and res.value > 0:
        return res.point[:dim]
    return None


def satisfies(constraints: Iterable[LinConstraint], x: Sequence) -> bool:
    return all(c.holds(x) for c in constraints)


def simplify_system(constraints: Sequence[LinConstraint], dim: int) -> Optional[list[LinConstraint]]:
    """Equivalent, reduced form of a mixed system; ``None`` if it has no solution.

    Implicit equalities are made explicit and brought to reduced echelon form,
    their pivot variables are eliminated from the inequality rows, and rows
    implied by the others are dropped.  Every decision is an exact LP.
    """
    rows = [c for c in constraints if not c.is_trivial()]
    if any(c.is_contradiction() for c in rows):
        return None
    if strict_feasible(rows, dim) is None:
        return None

    eqs = [c for c in rows if c.rel is Rel.EQ]
    ineqs = [c for c in rows if c.rel is not Rel.EQ]
    still = []
    for i, c in enumerate(ineqs):
        if c.rel is Rel.LE:
            probe = eqs + still + ineqs[i + 1:] + [c.with_rel(Rel.LT)]
            if strict_feasible(probe, dim) is None:
                eqs.append(c.with_rel(Rel.EQ))
                continue
        still.append(c)

    red, pivots = rref([c.coeffs + (c.rhs,) for c in eqs], dim + 1)
    eq_rows = [LinConstraint(tuple(r[:dim]), r[dim], Rel.EQ) for r in red]

    def reduce(c: LinConstraint) -> LinConstraint:
        coeffs, rhs = list(c.coeffs), c.rhs
        for e, p in zip(eq_rows, pivots):
            f = coeffs[p]
            if f:
                coeffs = [a - f * b for a, b in zip(coeffs, e.coeffs)]
                rhs -= f * e.rhs
        return LinConstraint(tuple(coeffs), rhs, c.rel).normalized()

    seen: dict = {}
    for c in (reduce(c) for c in still):
        if c.is_trivial():
            continue
        key = c.coeffs
        prev = seen.get(key)
        if prev is None or c.rhs < prev.rhs or (c.rhs == prev.rhs and c.rel is Rel.LT):
            seen[key] = c
    ineqs = list(seen.values())

    kept = list(ineqs)
    for c in ineqs:
        rest = [r for r in kept if r is not c]
        if c.rel is Rel.LE:
            outside = LinConstraint(neg(c.coeffs), -c.rhs, Rel.LT)
        else:
            outside = LinConstraint(neg(c.coeffs), -c.rhs, Rel.LE)
        if strict_feasible(eq_rows + rest + [outside], dim) is None:
            kept = rest
    return [e.normalized() for e in eq_rows] + kept
