from __future__ import annotations

from pathlib import Path

import pytest

from pwlvo.exactmath import LinConstraint, Rel, rat
from pwlvo.polyhedron import HPolyhedron
from pwlvo.semiclosed import Region, SemiClosedPolyhedron
from pwlvo.serialize import load_problem

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "pwlvo" / "fixtures"

_RELS = {"=": Rel.EQ, "<=": Rel.LE, "<": Rel.LT}


def row(coeffs, rel, rhs) -> LinConstraint:
    """``row((1, 0), "<=", 0)``; a ``>=``/``>`` spelling flips signs."""
    coeffs = tuple(rat(c) for c in coeffs)
    rhs = rat(rhs)
    if rel in (">=", ">"):
        coeffs, rhs, rel = tuple(-c for c in coeffs), -rhs, rel.replace(">", "<")
    return LinConstraint(coeffs, rhs, _RELS[rel])


def sc(dim, *rows) -> SemiClosedPolyhedron:
    return SemiClosedPolyhedron.from_rows(dim, [row(*r) for r in rows])


def hp(dim, *rows) -> HPolyhedron:
    return HPolyhedron.from_rows(dim, [row(*r) for r in rows])


def region(dim, *pieces) -> Region:
    return Region(dim, tuple(sc(dim, *p) for p in pieces))


def q(s):
    return rat(s)


@pytest.fixture(scope="session")
def problem_a():
    return load_problem(str(FIXTURES / "fixture_a.json")).build()


@pytest.fixture(scope="session")
def problem_b():
    return load_problem(str(FIXTURES / "fixture_b.json")).build()


# the solution sets stated for the two fixtures, in (t1, t2)
SOL_A = ([((1, 0), "=", 0), ((0, 1), "<=", 1), ((0, 1), ">=", 0)],)
WSOL_A = SOL_A + ([((1, 0), "<=", 0), ((0, 1), "=", 1)],)
SOL_B = (
    [((1, 0), "=", 0), ((0, 1), "=", 1)],
    [((1, 0), "=", 0), ((0, 1), "<", -1)],
)
WSOL_B = (
    [((1, 0), "<=", 0), ((0, 1), "=", 1)],
    [((1, 0), "=", 0), ((0, 1), "<=", -1)],
)
