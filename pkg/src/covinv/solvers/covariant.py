"""Series solutions of d phi + A ^ phi = J.

All solvers move the data to coordinates centred at x0 first, so the homotopy
operator is the plain monomial rule and the truncation grading (each
application of H(A ^ _) raises the lowest coefficient degree by one) is what
bounds the number of iterations.  Solutions are shifted back to the caller's
coordinates on return.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from ..coeff import Series, as_rational, series_eval, series_exp
from ..errors import (
    DegreeError,
    DimensionMismatch,
    FiberMismatch,
    InitialDataInKernel,
    InitialDataNotExact,
    InvariantViolation,
    NoSolution,
    RHSNotExact,
)
from ..forms import Connection, Form, MatrixForm, conn_wedge, wedge
from ..homotopy import as_center, ext_d, homotopy_H, is_closed, residual_min_degree
from .linear import gauge_mode_basis, kernel_basis, solve_wedge_constraint
from .report import ConstraintStatus, SolveReport


def shift_matrix(A: MatrixForm, offset) -> MatrixForm:
    if not any(offset):
        return A
    return A.map_entries(lambda f: f.shift(offset))


def _unshift(phi: Form, x0) -> Form:
    return phi.shift(tuple(-c for c in x0)) if any(x0) else phi


def _check_pair(A: MatrixForm, phi: Form) -> None:
    if A.dim != phi.dim or A.trunc != phi.trunc:
        raise DimensionMismatch(
            f"connection (dim {A.dim}, trunc {A.trunc}) and form (dim {phi.dim}, trunc {phi.trunc})"
        )
    if A.fiber != phi.fiber:
        raise FiberMismatch(f"connection acts on fiber {A.fiber}, form has fiber {phi.fiber}")


def cov_d(A: MatrixForm, phi: Form) -> Form:
    """d phi + A ^ phi."""
    _check_pair(A, phi)
    return ext_d(phi) + conn_wedge(A, phi)


def alternating_series(step: Callable[[Form], Form], seed: Form) -> Tuple[Form, List[Form]]:
    """sum_l (-1)^l step^l(seed); stops at the first vanishing term.

    Each ``step`` must raise the minimal coefficient degree, so at most N+1
    nonzero terms exist.
    """
    terms: List[Form] = []
    total = Form.zero(seed.dim, seed.degree, seed.trunc, seed.fiber)
    g = seed
    while g.coeffs:
        if len(terms) > seed.trunc + 1:
            raise InvariantViolation("series did not terminate within N+1 steps")
        terms.append(g)
        total = total + (g if len(terms) % 2 else -g)
        g = step(g)
    return total, terms


def _h_wedge(A: MatrixForm) -> Callable[[Form], Form]:
    return lambda g: homotopy_H(conn_wedge(A, g))


def radius_bound(A: MatrixForm, x: Sequence, center=None, k: int = 1, samples: int = 129) -> float:
    """k / sup ||A|| along the segment from the center to x (Frobenius norm of all coefficients).

    The step-by-step version of the algorithm quotes 1/||A|| instead of k/||A||;
    pass ``k=1`` to get that more conservative figure.
    """
    x0 = [float(c) for c in as_center(center, A.dim)]
    x = [float(v) for v in x]
    if len(x) != A.dim:
        raise DimensionMismatch("point dimension differs from the connection")
    slots = [s for row in A.entries for e in row for s in e.coeffs.values()]
    if not slots:
        return math.inf
    worst = 0.0
    for j in range(samples):
        t = j / (samples - 1)
        p = [a + t * (b - a) for a, b in zip(x0, x)]
        worst = max(worst, math.sqrt(sum(series_eval(s, p) ** 2 for s in slots)))
    return math.inf if worst == 0.0 else k / worst


def radius_estimate(A: MatrixForm, center=None, k: int = 1) -> float:
    """Smallest bound over unit segments along the coordinate axes."""
    x0 = [float(c) for c in as_center(center, A.dim)]
    k = max(k, 1)
    best = math.inf
    for i in range(A.dim):
        for sgn in (1.0, -1.0):
            x = list(x0)
            x[i] += sgn
            best = min(best, radius_bound(A, x, center, k))
    return best


def _in_kernel(A: MatrixForm, c: Form) -> bool:
    return bool(c.coeffs) and not A.is_zero() and conn_wedge(A, c).is_zero()


def _status(report: SolveReport, strict: bool, stage: str, satisfied) -> SolveReport:
    ok = report.residual_ok()
    report.diagnostics["integrable"] = ok
    if ok:
        report.constraint_status = satisfied
        return report
    report.constraint_status = ConstraintStatus.NO_SOLUTION
    if strict:
        raise NoSolution(
            f"series candidate leaves a residual of degree {report.residual_min_degree} < N="
            f"{report.truncation}; the equation is not integrable for this data",
            stage=stage,
            report=report,
            obstruction=report.residual,
            partial=report.solution,
        )
    return report


def solve_homogeneous(A: MatrixForm, c: Form, center=None, *, strict: bool = True,
                      modes: bool = True, allow_kernel: bool = False) -> SolveReport:
    """phi = sum_l (-1)^l (H(A ^ _))^l c for closed initial data c."""
    _check_pair(A, c)
    x0 = as_center(center, c.dim)
    A_l, c_l = shift_matrix(A, x0), c.shift(x0)
    if not is_closed(c_l):
        raise InitialDataNotExact("initial data c must satisfy dc = 0")
    if not allow_kernel and _in_kernel(A_l, c_l):
        raise InitialDataInKernel("initial data lies in ker(A ^ _); the series would return c itself")
    phi_l, terms = alternating_series(_h_wedge(A_l), c_l)
    report = SolveReport(
        solution=_unshift(phi_l, x0),
        residual=cov_d(A_l, phi_l),
        iterations=len(terms),
        center=x0,
        local_solution=phi_l,
        terms=terms,
    )
    report.diagnostics["term_exactness"] = all(
        ext_d(conn_wedge(A_l, g)).is_zero() for g in terms
    )
    if c.degree > 0:
        report.diagnostics["projection_recovers_c"] = ext_d(homotopy_H(phi_l)) == c_l
    if modes:
        report.gauge_mode_basis = gauge_mode_basis(A_l, c.degree)
    report.radius_estimate = radius_estimate(A, x0, c.degree)
    return _status(report, strict, "homogeneous", ConstraintStatus.NOT_APPLICABLE)


def solve_scalar_homogeneous(A: MatrixForm, c0, center=None) -> Form:
    """c0 * exp(-H A) for a scalar connection and a 0-form unknown."""
    if A.fiber != 1:
        raise FiberMismatch("the exponential formula is restricted to scalar connections")
    c0 = as_rational(c0)
    x0 = as_center(center, A.dim)
    a_l = A.entries[0][0].shift(x0)
    ha = homotopy_H(a_l).coefficient(())
    phi = Form.function(series_exp(-ha).scale(c0))
    return _unshift(phi, x0)


def _scalar_closed_form(a: Form, J: Form, c0: Fraction) -> Form:
    # exp(-HA) (c0 + H(J exp(HA))) at center 0
    ha = homotopy_H(a).coefficient(())
    inner = homotopy_H(J.scale(series_exp(ha))).coefficient(())
    return Form.function(series_exp(-ha) * (inner + c0))


def _inhom_local(A_l: MatrixForm, c_l: Form, Je_l: Form):
    step = _h_wedge(A_l)
    phi_h, terms_h = alternating_series(step, c_l)
    phi_i, terms_i = alternating_series(step, homotopy_H(Je_l))
    return phi_h, phi_i, terms_h, terms_i


def _default_c(c: Optional[Form], like: Form, degree: int, fiber: int) -> Form:
    if c is None:
        return Form.zero(like.dim, degree, like.trunc, fiber)
    if c.degree != degree:
        raise DegreeError(f"initial data has degree {c.degree}, unknown has degree {degree}")
    return c


def solve_inhom_exact(A: MatrixForm, c: Optional[Form], J_e: Form, center=None, *,
                      strict: bool = True, modes: bool = True,
                      allow_kernel: bool = False) -> SolveReport:
    """phi_H + sum_l (-1)^l (H(A ^ _))^l H J_e for closed J_e."""
    _check_pair(A, J_e)
    k = J_e.degree - 1
    if k < 0:
        raise DegreeError("right-hand side must have degree >= 1")
    c = _default_c(c, J_e, k, A.fiber)
    _check_pair(A, c)
    x0 = as_center(center, J_e.dim)
    A_l, c_l, Je_l = shift_matrix(A, x0), c.shift(x0), J_e.shift(x0)
    if not is_closed(Je_l):
        raise RHSNotExact("right-hand side must satisfy dJ = 0")
    if not is_closed(c_l):
        raise InitialDataNotExact("initial data c must satisfy dc = 0")
    if not allow_kernel and _in_kernel(A_l, c_l):
        raise InitialDataInKernel("initial data lies in ker(A ^ _)")
    phi_h, phi_i, terms_h, terms_i = _inhom_local(A_l, c_l, Je_l)
    phi_l = phi_h + phi_i
    report = SolveReport(
        solution=_unshift(phi_l, x0),
        residual=cov_d(A_l, phi_l) - Je_l,
        iterations=max(len(terms_h), len(terms_i)),
        center=x0,
        local_solution=phi_l,
        terms=terms_i,
        parts={"phi_H": _unshift(phi_h, x0), "phi_I": _unshift(phi_i, x0)},
    )
    if k == 0 and A.fiber == 1:
        closed = _scalar_closed_form(A_l.entries[0][0], Je_l, c_l.coefficient(()).constant_term())
        report.parts["closed_form"] = _unshift(closed, x0)
        report.diagnostics["closed_form_agrees"] = closed == phi_l
    if modes:
        report.gauge_mode_basis = gauge_mode_basis(A_l, k)
    report.radius_estimate = radius_estimate(A, x0, k)
    return _status(report, strict, "inhomogeneous", ConstraintStatus.NOT_APPLICABLE)


def solve_general(A: MatrixForm, c: Optional[Form], J: Form, center=None, *,
                  strict: bool = True, modes: bool = True,
                  phi3: Optional[Form] = None) -> SolveReport:
    """Split J into exact and antiexact parts, solve the algebraic constraint, then the exact problem."""
    _check_pair(A, J)
    k = J.degree - 1
    if k < 0:
        raise DegreeError("right-hand side must have degree >= 1")
    c = _default_c(c, J, k, A.fiber)
    _check_pair(A, c)
    x0 = as_center(center, J.dim)
    A_l, c_l, J_l = shift_matrix(A, x0), c.shift(x0), J.shift(x0)
    if not is_closed(c_l):
        raise InitialDataNotExact("initial data c must satisfy dc = 0")
    J_e = ext_d(homotopy_H(J_l))
    J_a = homotopy_H(ext_d(J_l))
    p3 = Form.zero(J.dim, k, J.trunc, A.fiber) if phi3 is None else phi3.shift(x0)
    if p3.coeffs and not conn_wedge(A_l, p3).is_zero():
        raise ValueError("phi3 must lie in ker(A ^ _)")
    parts = {"J_e": _unshift(J_e, x0), "J_a": _unshift(J_a, x0)}
    diagnostics = {}
    try:
        p2 = solve_wedge_constraint(A_l, J_a, check=False)
    except NoSolution as exc:
        partial = exc.partial
        report = SolveReport(
            solution=_unshift(partial, x0),
            residual=cov_d(A_l, partial) - J_l,
            center=x0,
            local_solution=partial,
            constraint_status=ConstraintStatus.NO_SOLUTION,
            parts={**parts, "phi_2_partial": _unshift(partial, x0),
                   "obstruction": _unshift(exc.obstruction, x0)},
            diagnostics={"constraint": "J_a is not in Im(A ^ _)",
                         "obstruction_min_degree": residual_min_degree(exc.obstruction)},
        )
        raise NoSolution(
            "no solution: the antiexact part J_a is not in the image of A ^ _",
            stage="constraint", report=report, obstruction=exc.obstruction, partial=partial,
        ) from None
    rhs = J_e - ext_d(p2 + p3)
    phi_h, phi_i, terms_h, terms_i = _inhom_local(A_l, c_l, rhs)
    p1 = phi_h + phi_i
    phi_l = p1 + p2 + p3
    parts.update({"phi_1": _unshift(p1, x0), "phi_2": _unshift(p2, x0), "phi_3": _unshift(p3, x0)})
    report = SolveReport(
        solution=_unshift(phi_l, x0),
        residual=cov_d(A_l, phi_l) - J_l,
        iterations=max(len(terms_h), len(terms_i)),
        center=x0,
        local_solution=phi_l,
        terms=terms_i,
        parts=parts,
        diagnostics=diagnostics,
    )
    if k >= 1:
        # kernel branch: phi = c + H J_e when both pieces are annihilated by A ^ _
        hje = homotopy_H(J_e)
        c_in = conn_wedge(A_l, c_l).is_zero()
        h_in = conn_wedge(A_l, hje).is_zero()
        diagnostics["kernel_branch"] = {
            "candidate": _unshift(c_l + hje, x0),
            "c_in_kernel": c_in,
            "HJe_in_kernel": h_in,
            "admissible": c_in and h_in and J_a.is_zero(),
        }
    if modes:
        report.gauge_mode_basis = gauge_mode_basis(A_l, k)
        report.kernel_basis = kernel_basis(A_l, k)
    report.radius_estimate = radius_estimate(A, x0, k)
    return _status(report, strict, "general", ConstraintStatus.SATISFIED)
