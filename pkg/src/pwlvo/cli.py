"""``pwlvo`` command line: check, solve and verify problem files."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import EmptyFeasible, ProblemFormatError, WholeSpaceCone, ZeroRow
from .exactmath import fmt
from .oracle import GridSpec, grid_crosscheck, parse_grid
from .pwl import Problem, is_k_function, validate_consistency, validate_cover
from .serialize import ProblemFile, crosscheck_json, dumps, load_problem, region_from_json, report_json, vec_json
from .solver import METHODS, solve

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_STRUCTURE = 2
EXIT_DISAGREE = 3
EXIT_MISMATCH = 4


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


class _Out:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def __call__(self, *lines: str) -> None:
        if not self.quiet:
            for line in lines:
                print(line)


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def format_row(c, var: str = "x") -> str:
    terms = []
    for i, a in enumerate(c.coeffs):
        if not a:
            continue
        name = f"{var}{i + 1}"
        mag = abs(a)
        body = name if mag == 1 else f"{fmt(mag)}*{name}"
        if not terms:
            terms.append(body if a > 0 else f"-{body}")
        else:
            terms.append(f"+ {body}" if a > 0 else f"- {body}")
    lhs = " ".join(terms) if terms else "0"
    return f"{lhs} {c.rel.value} {fmt(c.rhs)}"


def format_region(label: str, R, var: str = "x") -> list[str]:
    lines = [f"{label}: {len(R.pieces)} piece(s)"]
    for i, p in enumerate(R.pieces):
        rows = ", ".join(format_row(c, var) for c in p.rows) or "everything"
        lines.append(f"  [{i}] {rows}")
    return lines


def _describe(closed: Optional[bool], cert) -> str:
    words = ["closed" if closed else "non-closed"]
    if cert is not None:
        words.append("connected" if cert.connected else f"disconnected, {len(cert.components)} components")
        if not cert.certified:
            words.append("connectivity not certified")
    return "; ".join(words)


def report_text(report, show_stats: bool) -> list[str]:
    lines = [f"method: {report.method}", f"K-function: {'yes' if report.convex else 'no'}"]
    lines += format_region("sol", report.sol)
    lines.append(f"  ({_describe(report.sol_closed, report.sol_connected)})")
    if report.wsol is not None:
        lines += format_region("wsol", report.wsol)
        lines.append(f"  ({_describe(report.wsol_closed, report.wsol_connected)})")
    else:
        lines.append("wsol: not computed")
    if report.methods_agree is not None:
        lines.append(f"weak frontier routes agree: {'yes' if report.methods_agree else 'no'}")
    lines += [f"note: {n}" for n in report.notes]
    if show_stats:
        lines += [f"stat {k}: {v}" for k, v in report.stats.items()]
    return lines


# ---------------------------------------------------------------------------
# shared steps
# ---------------------------------------------------------------------------

def _load(path: str) -> ProblemFile:
    try:
        return load_problem(path)
    except (ProblemFormatError, ValueError) as exc:
        raise _Exit(EXIT_PARSE, f"parse error: {exc}") from None


def _structure(pf: ProblemFile, out: _Out) -> Problem:
    """Build the problem and run the structural validations; exits 2 on failure."""
    lim = pf.limits
    dims = max(pf.f.source_dim, pf.f.image_dim)
    if dims > lim["max_dim"]:
        raise _Exit(EXIT_STRUCTURE, f"dimension {dims} exceeds max_dim {lim['max_dim']}")
    if len(pf.f.pieces) > lim["max_pieces"]:
        raise _Exit(EXIT_STRUCTURE, f"{len(pf.f.pieces)} pieces exceed max_pieces {lim['max_pieces']}")
    try:
        problem = pf.build()
    except (ZeroRow, WholeSpaceCone) as exc:
        raise _Exit(EXIT_STRUCTURE, f"cone: {exc}") from None
    out(f"cone: {len(problem.cone.rows)} row(s), lineality dimension {problem.cone.y0.rank}")
    gap = validate_cover(problem.f)
    if gap is not None:
        raise _Exit(EXIT_STRUCTURE, f"cover: gap at ({', '.join(vec_json(gap.witness))})")
    out("cover: ok")
    mm = validate_consistency(problem.f)
    if mm is not None:
        raise _Exit(
            EXIT_STRUCTURE,
            f"consistency: pieces {mm.k} and {mm.l} disagree at ({', '.join(vec_json(mm.witness))})",
        )
    out("consistency: ok")
    return problem


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    out = _Out(args.quiet)
    problem = _structure(_load(args.problem), out)
    try:
        verdict = is_k_function(problem.f, problem.feasible, problem.cone)
    except EmptyFeasible:
        out("feasible set: empty", "K-function: yes (vacuous)")
        return EXIT_OK
    if verdict:
        out("K-function: yes")
    else:
        v = verdict.violation
        out(
            "K-function: no",
            f"  cone row {v.row} is not concave along f: piece {v.l} extended to "
            f"({', '.join(vec_json(v.witness))}) in piece {v.k} lies below f",
            f"  defect at partner ({', '.join(vec_json(v.partner))}), lambda {fmt(v.lam)}",
        )
    return EXIT_OK


def cmd_solve(args) -> int:
    out = _Out(args.quiet)
    problem = _structure(_load(args.problem), _Out(True))
    report = solve(problem, method=args.method)
    if args.format == "json":
        doc = report_json(report)
        if not args.stats:
            doc.pop("stats")
        text = dumps(doc)
    else:
        text = "\n".join(report_text(report, args.stats)) + "\n"
    if args.out or not args.quiet:
        _emit(text, args.out)
    if report.methods_agree is False:
        raise _Exit(EXIT_DISAGREE, "weak frontier routes disagree (facet expansion vs difference)")
    if args.out:
        out(f"wrote {args.out}")
    return EXIT_OK


class _SavedReport:
    def __init__(self, doc: dict):
        self.sol = region_from_json(doc["sol"], "report.sol")
        w = doc.get("wsol")
        self.wsol = region_from_json(w, "report.wsol") if w is not None else None


def _grid(args, pf: ProblemFile, dim: int) -> GridSpec:
    try:
        if args.grid:
            steps = args.steps or (",".join(str(s) for s in pf.grid["steps"]) if pf.grid else ",".join(["25"] * dim))
            g = parse_grid(args.grid, steps)
        elif pf.grid:
            g = GridSpec(tuple(pf.grid["box"]), tuple(pf.grid["steps"]))
        else:
            raise _Exit(EXIT_PARSE, "no grid: pass --grid or add a \"grid\" record to the problem file")
    except (ValueError, ZeroDivisionError) as exc:
        raise _Exit(EXIT_PARSE, f"bad grid: {exc}") from None
    if g.dim != dim:
        raise _Exit(EXIT_PARSE, f"grid has {g.dim} coordinates, problem has {dim}")
    return g


def cmd_verify(args) -> int:
    out = _Out(args.quiet)
    pf = _load(args.problem)
    problem = _structure(pf, _Out(True))
    grid = _grid(args, pf, problem.f.source_dim)
    if args.report:
        try:
            with open(args.report, encoding="utf-8") as fh:
                report = _SavedReport(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise _Exit(EXIT_PARSE, f"report: {exc}") from None
    else:
        report = solve(problem, method=args.method)
    result = grid_crosscheck(problem, report, grid)
    if args.format == "json":
        if args.out or not args.quiet:
            _emit(dumps(crosscheck_json(result)), args.out)
    else:
        out(f"checked: {result.checked}", f"skipped (infeasible): {result.skipped}",
            f"mismatches: {len(result.mismatches)}")
    if result.mismatches:
        if args.format != "json":
            for m in result.mismatches:
                print(
                    f"mismatch at ({', '.join(vec_json(m.point))}): "
                    f"oracle sol={m.oracle_sol} decomposition sol={m.decomp_sol} "
                    f"oracle wsol={m.oracle_wsol} decomposition wsol={m.decomp_wsol}",
                    file=sys.stderr,
                )
        return EXIT_MISMATCH
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors count as parse errors; exit status 2 is reserved for structural failures
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwlvo", description="Exact solution sets of piecewise linear vector problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--quiet", action="store_true", help="print nothing on success")
        p.add_argument("--stats", action="store_true", help="include piece and LP counts")

    p = sub.add_parser("check", help="validate a problem and decide K-convexity")
    common(p)
    p.set_defaults(func=cmd_check)

    for name, func, help_ in (("solve", cmd_solve, "compute the efficient and weakly efficient sets"),
                              ("verify", cmd_verify, "cross-check a solution against the LP oracle on a grid")):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument("--method", choices=METHODS, default="paper",
                       help="weak frontier route: facet expansion, plain difference, or both compared")
        p.add_argument("--format", choices=("json", "text"), default="json" if name == "solve" else "text")
        p.add_argument("--out", metavar="FILE", help="write the output here instead of stdout")
        p.set_defaults(func=func)
    p.add_argument("--grid", help='box as "a,b;c,d"')
    p.add_argument("--steps", help='grid points per coordinate as "n,m"')
    p.add_argument("--report", metavar="FILE", help="check a saved solve report instead of solving")
    return parser


def _glue_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -3,3;-3,3`` into ``--grid=-3,3;-3,3`` so a leading minus is not read as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in ("--grid", "--steps") and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_values(argv))
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(f"pwlvo {args.command}: {exc.message}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
