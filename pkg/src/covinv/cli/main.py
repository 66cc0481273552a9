"""Command line: ``covinv solve <file>`` and ``covinv check-identities``.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 no solution,
5 internal invariant violation (including a failed identity check).
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from ..errors import CovinvError, InvariantViolation, NoSolution, ParseError
from ..forms import Form, GaugeElement, MatrixForm, conn_interior, conn_wedge
from ..homotopy import codiff, ext_d, residual_min_degree
from ..solvers import (
    HorizontalFrame,
    PipelineStage,
    SolveReport,
    StageKind,
    gauge_push,
    gauge_transform,
    horizontal_delta,
    solve_curvature,
    solve_dual,
    solve_general,
    solve_homogeneous,
    solve_inhom_exact,
    solve_pipeline,
)
from .parser import ProblemSpec, parse_problem
from .report import Report, emit

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_NOSOLUTION, EXIT_INTERNAL = 0, 2, 3, 4, 5


def _local(spec: ProblemSpec):
    x0 = spec.center
    A = spec.connection.map_entries(lambda e: e.shift(x0))
    return x0, A


def _global(f: Form, x0) -> Form:
    return f.shift(tuple(-c for c in x0)) if any(x0) else f


def _apply_cov(A: MatrixForm, phi: Form) -> Form:
    return ext_d(phi) + conn_wedge(A, phi)


def _apply_dual(A: MatrixForm, phi: Form) -> Form:
    return codiff(phi) + conn_interior(A, phi)


def independent_residual(spec: ProblemSpec, solution: Form) -> Form:
    """Residual of the stated equation, rebuilt from the problem data and the global solution."""
    x0, A = _local(spec)
    phi = solution.shift(x0)
    eq = spec.equation
    if eq == "pipeline":
        v = phi
        for kind, p in reversed(spec.stages):
            for _ in range(p):
                v = _apply_cov(A, v) if kind == "D" else _apply_dual(A, v)
    elif eq == "curvature":
        v = _apply_cov(A, _apply_cov(A, phi))
    elif eq == "dual":
        v = _apply_dual(A, phi)
    else:
        v = _apply_cov(A, phi)
    if eq != "homogeneous" and spec.J is not None:
        v = v - spec.J.shift(x0)
    return v


def _pipeline_stages(spec: ProblemSpec) -> List[PipelineStage]:
    stages, step = [], 1
    for kind, p in spec.stages:
        init = [spec.init.get(step + i) for i in range(p)]
        step += p
        sk = StageKind.COVARIANT if kind == "D" else StageKind.DUAL
        stages.append(PipelineStage(sk, spec.connection, p, init))
    return stages


def _solve(spec: ProblemSpec):
    """Dispatch on ``spec.equation``; composite equations are folded into one SolveReport."""
    A, x0, eq = spec.connection, spec.center, spec.equation
    if eq == "homogeneous":
        rep = solve_homogeneous(A, spec.c, x0)
    elif eq == "inhom-exact":
        rep = solve_inhom_exact(A, spec.c, spec.J, x0)
    elif eq == "general":
        rep = solve_general(A, spec.c, spec.J, x0)
    elif eq == "dual":
        rep = solve_dual(A, spec.c, spec.J, x0)
    elif eq == "curvature":
        res = solve_curvature(A, spec.J, spec.c, spec.c2, x0, degree=spec.degree)
        rep = SolveReport(
            solution=res.solution,
            residual=res.residual,
            iterations=max(r.iterations for r in (res.phi1, res.phi2, res.first_order) if r is not None),
            constraint_status=res.phi2.constraint_status,
            center=x0,
            parts={"phi_2": res.phi2.solution, "phi_1": res.phi1.solution,
                   **({"first_order": res.first_order.solution} if res.first_order else {})},
        )
    elif eq == "pipeline":
        res = solve_pipeline(_pipeline_stages(spec), spec.J, x0, degree=spec.degree)
        stage_reps = [r for _, _, r in res.reports]
        rep = SolveReport(
            solution=res.solution,
            residual=independent_residual(spec, res.solution),
            iterations=max((r.iterations for r in stage_reps), default=0),
            constraint_status=stage_reps[-1].constraint_status if stage_reps else "NotApplicable",
            center=x0,
            parts={f"stage{si + 1}_step{st + 1}": r.solution for si, st, r in res.reports},
        )
    else:  # pragma: no cover - the parser rejects other names
        raise InvariantViolation(f"unknown equation {eq}")
    return rep


def _status_str(s) -> str:
    return getattr(s, "value", s)


def _to_report(spec: ProblemSpec, rep: SolveReport, elapsed: float, message: str = "",
               whole_problem: bool = True) -> Report:
    x0 = spec.center
    residual = independent_residual(spec, rep.solution)
    diagnostics = dict(rep.diagnostics)
    verified = True
    if whole_problem:
        verified = residual == rep.residual
        if not verified:
            raise InvariantViolation("independent residual disagrees with the solver residual")
    else:
        diagnostics["verification"] = "partial result of an intermediate stage; not compared"
    if rep.kernel_basis:
        diagnostics["kernel_dimension"] = len(rep.kernel_basis)
    report = Report(
        problem=spec,
        solution=rep.solution,
        residual_min_degree=residual_min_degree(residual),
        residual_terms=residual.term_count(),
        iterations=rep.iterations,
        constraint_status=_status_str(rep.constraint_status),
        gauge_modes=[_global(g, x0) for g in rep.gauge_mode_basis],
        radius=rep.radius_estimate,
        parts=dict(rep.parts),
        diagnostics=diagnostics,
        verified=verified,
        message=message,
        timing=elapsed,
    )
    if report.constraint_status != "NoSolution":
        _extras(spec, report)
    return report


def _extras(spec: ProblemSpec, report: Report) -> None:
    x0 = spec.center
    N = spec.trunc
    if spec.gauge is not None:
        g = GaugeElement([[e.coefficient(()) for e in row] for row in spec.gauge])
        A2 = gauge_transform(spec.connection, g)
        phi2 = gauge_push(report.solution, g)
        res = _apply_cov(A2.map_entries(lambda e: e.shift(x0)), phi2.shift(x0))
        if spec.equation != "homogeneous" and spec.J is not None:
            res = res - gauge_push(spec.J, g).shift(x0)
        report.parts["gauge_solution"] = phi2
        report.diagnostics["gauge_covariance_min_degree"] = residual_min_degree(res)
        report.diagnostics["gauge_covariant"] = residual_min_degree(res) >= N
    frame = spec.frame()
    if frame is not None:
        hf = HorizontalFrame(frame[0], frame[1], connection=spec.connection)
        hr = horizontal_delta(hf, report.solution)
        report.parts["delta_phi"] = hr.delta_phi
        report.diagnostics["horizontal"] = hr.horizontal
        report.diagnostics["delta_commutes"] = hr.commutes
        report.diagnostics["delta_residual_min_degree"] = hr.residual_min_degree


def run(spec: ProblemSpec) -> Report:
    """Solve, verify independently, and package the outcome.

    NoSolution is not raised: the report carries constraint status NoSolution
    and the partial solution instead.
    """
    t0 = time.perf_counter()
    try:
        rep = _solve(spec)
    except NoSolution as exc:
        elapsed = time.perf_counter() - t0
        sub = exc.report
        whole = spec.equation not in ("curvature", "pipeline")
        if sub is None:
            sub = SolveReport(solution=exc.partial, residual=exc.obstruction)
        sub.constraint_status = "NoSolution"
        if exc.obstruction is not None:
            sub.parts.setdefault("obstruction", _global(exc.obstruction, spec.center))
        return _to_report(spec, sub, elapsed, message=str(exc), whole_problem=whole)
    return _to_report(spec, rep, time.perf_counter() - t0)


# command line -------------------------------------------------------------------

def _overrides(args) -> dict:
    out = {}
    if args.center is not None:
        out["center"] = args.center
    if args.trunc is not None:
        out["trunc"] = str(args.trunc)
    return out


def cmd_solve(args, out=sys.stdout, err=sys.stderr) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=err)
        return EXIT_VALIDATION
    try:
        spec = parse_problem(text, _overrides(args))
        if args.output:
            spec.output = args.output
        report = run(spec)
    except ParseError as exc:
        print(f"{args.file}: parse error: {exc}", file=err)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=err)
        return EXIT_INTERNAL
    except (CovinvError, ValueError) as exc:
        print(f"{args.file}: invalid problem: {exc}", file=err)
        return EXIT_VALIDATION
    code = EXIT_NOSOLUTION if report.constraint_status == "NoSolution" else EXIT_OK
    if args.verify_only:
        verdict = "ok" if code == EXIT_OK and report.verified else "FAILED"
        print(f"{verdict}: status={report.constraint_status} residual_min_degree="
              f"{report.residual_min_degree} N={spec.trunc} iterations={report.iterations}", file=out)
    else:
        out.write(emit(report, spec.output))
    if code == EXIT_NOSOLUTION:
        print(report.message, file=err)
    return code


def cmd_check(args, out=sys.stdout, err=sys.stderr) -> int:
    from ..identities import iteration_bound_suite, run_suite

    fibers = tuple(args.fiber) if args.fiber else (1, 2)
    t0 = time.perf_counter()
    results = run_suite(dims=(args.dim,), fibers=fibers, trunc=args.trunc,
                        samples=args.samples, seed=args.seed)
    failed = 0
    w = max(len(k) for k in results)
    for name, r in results.items():
        mark = "PASS" if r.ok else "FAIL"
        failed += not r.ok
        line = f"{mark}  {name.ljust(w)}  {r.passed}/{r.total}  {r.seconds:.2f}s"
        if r.failures:
            line += f"  first failure: {r.failures[0]}"
        print(line, file=out)
    counts = iteration_bound_suite(dims=(args.dim,), fibers=fibers, trunc=args.trunc,
                                   samples=max(1, args.samples // 4), seed=args.seed)
    bound_ok = max(counts) <= args.trunc + 1
    failed += not bound_ok
    print(f"{'PASS' if bound_ok else 'FAIL'}  {'iterations <= N+1'.ljust(w)}  max {max(counts)}"
          f" over {len(counts)} runs", file=out)
    print(f"total {time.perf_counter() - t0:.2f}s, {failed} failing", file=out)
    return EXIT_OK if failed == 0 else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covinv", description="Local inversion of d + A^ on polynomial data.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve a problem file")
    s.add_argument("file")
    s.add_argument("--output", choices=("text", "json", "latex"))
    s.add_argument("--verify-only", action="store_true", help="print only the verification verdict")
    s.add_argument("--center", help="comma-separated rationals, overrides the file")
    s.add_argument("--trunc", type=int, help="truncation order, overrides the file")
    s.set_defaults(func=cmd_solve)
    c = sub.add_parser("check-identities", help="run the operator identity suite")
    c.add_argument("--dim", type=int, default=2)
    c.add_argument("--trunc", type=int, default=8)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--fiber", type=int, action="append", help="fiber dimension (repeatable)")
    c.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
