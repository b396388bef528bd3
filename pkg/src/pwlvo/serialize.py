"""JSON encoding of problems, regions and reports.

Rationals travel as strings (``"p/q"`` or ``"p"``); integers are accepted on
input, floats never are.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from . import cone as conemod
from .errors import ProblemFormatError
from .exactmath import LinConstraint, Rel, fmt, rat
from .polyhedron import HPolyhedron, VPolyhedron
from .pwl import Piece, PiecewiseLinearFn, Problem
from .semiclosed import Region, SemiClosedPolyhedron

DEFAULT_LIMITS = {"max_dim": 6, "max_pieces": 16}

_KEYS = (("eq", Rel.EQ), ("le", Rel.LE), ("lt", Rel.LT))


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def _rat(v, where: str):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ProblemFormatError(f"{where}: expected a rational string or integer, got {v!r}")
    try:
        return rat(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ProblemFormatError(f"{where}: {exc}") from None


def _vector(v, where: str, length: Optional[int] = None) -> tuple:
    if not isinstance(v, list):
        raise ProblemFormatError(f"{where}: expected a list")
    if length is not None and len(v) != length:
        raise ProblemFormatError(f"{where}: expected length {length}, got {len(v)}")
    return tuple(_rat(x, f"{where}[{i}]") for i, x in enumerate(v))


def _matrix(m, where: str, nrows: int, ncols: int) -> tuple:
    if not isinstance(m, list) or len(m) != nrows:
        raise ProblemFormatError(f"{where}: expected {nrows} rows")
    return tuple(_vector(r, f"{where}[{i}]", ncols) for i, r in enumerate(m))


def _require(d, key: str, where: str):
    if not isinstance(d, dict):
        raise ProblemFormatError(f"{where}: expected an object")
    if key not in d:
        raise ProblemFormatError(f"{where}: missing key {key!r}")
    return d[key]


def _rows(d: dict, dim: int, where: str, allow_strict: bool) -> list[LinConstraint]:
    if not isinstance(d, dict):
        raise ProblemFormatError(f"{where}: expected an object")
    rows = []
    for key, rel in _KEYS:
        if key not in d:
            continue
        if rel is Rel.LT and not allow_strict:
            raise ProblemFormatError(f"{where}: strict rows are not allowed here")
        if not isinstance(d[key], list):
            raise ProblemFormatError(f"{where}.{key}: expected a list")
        for i, r in enumerate(d[key]):
            w = f"{where}.{key}[{i}]"
            rows.append(LinConstraint(_vector(_require(r, "a", w), w + ".a", dim), _rat(_require(r, "b", w), w + ".b"), rel))
    return rows


def _dim(d, where: str, expected: Optional[int] = None) -> int:
    n = _require(d, "dim", where)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ProblemFormatError(f"{where}.dim: expected a positive integer")
    if expected is not None and n != expected:
        raise ProblemFormatError(f"{where}.dim: expected {expected}, got {n}")
    return n


def h_from_json(d: Any, where: str = "polyhedron", dim: Optional[int] = None) -> HPolyhedron:
    n = _dim(d, where, dim)
    return HPolyhedron.from_rows(n, _rows(d, n, where, allow_strict=False))


def sc_from_json(d: Any, where: str = "piece", dim: Optional[int] = None) -> SemiClosedPolyhedron:
    n = _dim(d, where, dim)
    return SemiClosedPolyhedron.from_rows(n, _rows(d, n, where, allow_strict=True))


def region_from_json(d: Any, where: str = "region") -> Region:
    n = _dim(d, where)
    pieces = _require(d, "pieces", where)
    if not isinstance(pieces, list):
        raise ProblemFormatError(f"{where}.pieces: expected a list")
    return Region(n, tuple(sc_from_json(p, f"{where}.pieces[{i}]", n) for i, p in enumerate(pieces)))


def v_from_json(d: Any, dim: int, where: str = "generators") -> VPolyhedron:
    from .exactmath import Subspace

    def vs(key):
        return tuple(_vector(v, f"{where}.{key}[{i}]", dim) for i, v in enumerate(d.get(key, [])))

    return VPolyhedron(dim, vs("points"), vs("rays"), Subspace.span(dim, vs("lineality")))


@dataclass(frozen=True)
class ProblemFile:
    """A parsed problem document; the cone is built separately because its
    failures (zero row, no rows) are structural rather than syntactic."""

    f: PiecewiseLinearFn
    feasible: HPolyhedron
    cone_rows: tuple
    grid: Optional[dict]
    limits: dict

    def build(self) -> Problem:
        return Problem(self.f, self.feasible, conemod.build(self.cone_rows))


def problem_from_json(d: Any) -> ProblemFile:
    """Parse a problem document; raises ProblemFormatError on any schema violation.

    Size limits are checked by the caller against ``limits``.
    """
    n = _require(d, "source_dim", "problem")
    m = _require(d, "image_dim", "problem")
    for name, v in (("source_dim", n), ("image_dim", m)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ProblemFormatError(f"problem.{name}: expected a positive integer")
    D = h_from_json(_require(d, "feasible", "problem"), "feasible", n)
    cone_rows = _require(_require(d, "cone", "problem"), "rows", "cone")
    if not isinstance(cone_rows, list):
        raise ProblemFormatError("cone.rows: expected a list")
    rows = [_vector(r, f"cone.rows[{i}]", m) for i, r in enumerate(cone_rows)]
    raw = _require(d, "pieces", "problem")
    if not isinstance(raw, list) or not raw:
        raise ProblemFormatError("problem.pieces: expected a nonempty list")
    pieces = []
    for i, p in enumerate(raw):
        w = f"pieces[{i}]"
        pieces.append(Piece(
            h_from_json(_require(p, "domain", w), w + ".domain", n),
            _matrix(_require(p, "map", w), w + ".map", m, n),
            _vector(_require(p, "offset", w), w + ".offset", m),
        ))
    limits = dict(DEFAULT_LIMITS)
    for k, v in (d.get("limits") or {}).items():
        if k not in limits or isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ProblemFormatError(f"limits.{k}: unknown key or not a positive integer")
        limits[k] = v
    grid = d.get("grid")
    if grid is not None:
        grid = grid_from_json(grid, n)
    return ProblemFile(PiecewiseLinearFn(n, m, pieces), D, tuple(rows), grid, limits)


def grid_from_json(g: Any, dim: int) -> dict:
    box = _require(g, "box", "grid")
    steps = _require(g, "steps", "grid")
    if not isinstance(box, list) or len(box) != dim:
        raise ProblemFormatError(f"grid.box: expected {dim} intervals")
    if not isinstance(steps, list) or len(steps) != dim:
        raise ProblemFormatError(f"grid.steps: expected {dim} counts")
    ivs = [_vector(b, f"grid.box[{i}]", 2) for i, b in enumerate(box)]
    for i, s in enumerate(steps):
        if isinstance(s, bool) or not isinstance(s, int) or s < 1:
            raise ProblemFormatError(f"grid.steps[{i}]: expected a positive integer")
    return {"box": ivs, "steps": list(steps)}


def load_problem(path: str) -> ProblemFile:
    """Read and parse a problem file; JSON syntax errors carry line and column."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFormatError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except ProblemFormatError as exc:
        raise ProblemFormatError(f"{path}: {exc}") from None
    return problem_from_json(doc)


def _reject_float(s: str):
    raise ProblemFormatError(f"floating-point literal {s} is not allowed; write rationals as strings")


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def vec_json(v) -> list:
    return [fmt(x) for x in v]


def _rows_json(rows) -> list:
    return [{"a": vec_json(r.coeffs), "b": fmt(r.rhs)} for r in rows]


def h_json(P: HPolyhedron) -> dict:
    return {"dim": P.dim, "eq": _rows_json(P.equalities), "le": _rows_json(P.inequalities)}


def sc_json(S: SemiClosedPolyhedron) -> dict:
    return {"dim": S.dim, "eq": _rows_json(S.equalities), "le": _rows_json(S.closed), "lt": _rows_json(S.strict)}


def region_json(R: Region) -> dict:
    return {"dim": R.dim, "pieces": [sc_json(p) for p in R.pieces]}


def v_json(V: VPolyhedron) -> dict:
    return {
        "points": [vec_json(p) for p in V.points],
        "rays": [vec_json(r) for r in V.rays],
        "lineality": [vec_json(l) for l in V.lineality.basis],
    }


def cone_json(K) -> dict:
    return {"rows": [vec_json(r) for r in K.rows]}


def problem_json(problem: Problem) -> dict:
    return {
        "source_dim": problem.f.source_dim,
        "image_dim": problem.f.image_dim,
        "feasible": h_json(problem.feasible),
        "cone": cone_json(problem.cone),
        "pieces": [
            {"domain": h_json(p.domain), "map": [vec_json(r) for r in p.map], "offset": vec_json(p.offset)}
            for p in problem.f.pieces
        ],
    }


def certificate_json(c) -> Optional[dict]:
    if c is None:
        return None
    return {"connected": c.connected, "components": [list(x) for x in c.components], "certified": c.certified}


def report_json(report) -> dict:
    return {
        "method": report.method,
        "convex": report.convex,
        "sol": region_json(report.sol),
        "wsol": region_json(report.wsol) if report.wsol is not None else None,
        "certificates": {
            "sol_closed": report.sol_closed,
            "wsol_closed": report.wsol_closed,
            "sol_connected": certificate_json(report.sol_connected),
            "wsol_connected": certificate_json(report.wsol_connected),
            "methods_agree": report.methods_agree,
        },
        "provenance": {
            "sol": [list(p) for p in report.sol_provenance],
            "wsol": [list(p) for p in report.wsol_provenance],
        },
        "stats": dict(report.stats),
        "notes": list(report.notes),
    }


def crosscheck_json(result) -> dict:
    return {
        "checked": result.checked,
        "skipped": result.skipped,
        "mismatches": [
            {
                "point": vec_json(m.point),
                "oracle_sol": m.oracle_sol,
                "decomp_sol": m.decomp_sol,
                "oracle_wsol": m.oracle_wsol,
                "decomp_wsol": m.decomp_wsol,
            }
            for m in result.mismatches
        ],
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
