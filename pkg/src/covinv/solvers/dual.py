"""Hodge-dual equation delta phi + A# -| phi = J, solved with the cohomotopy operator h."""
from __future__ import annotations

from typing import Callable, Optional

from ..errors import DegreeError, InitialDataInKernel, InitialDataNotCoexact, NoSolution
from ..forms import Form, MatrixForm, conn_interior
from ..homotopy import as_center, codecompose, codiff, cohomotopy_h, residual_min_degree
from .covariant import _check_pair, _status, _unshift, alternating_series, radius_estimate, shift_matrix
from .linear import coexact_gauge_mode_basis, dual_kernel_basis, solve_interior_constraint
from .report import ConstraintStatus, SolveReport


def dual_cov(A: MatrixForm, phi: Form) -> Form:
    """delta phi + A# -| phi.

    For m > 1 the matrix acts from the left: (A# -| phi)^a = sum_b (A^a_b)# -| phi^b.
    """
    _check_pair(A, phi)
    return codiff(phi) + conn_interior(A, phi)


def _h_interior(A: MatrixForm) -> Callable[[Form], Form]:
    return lambda g: cohomotopy_h(conn_interior(A, g))


def solve_dual(A: MatrixForm, c: Optional[Form], J: Optional[Form] = None, center=None, *,
               strict: bool = True, modes: bool = True,
               allow_kernel: bool = False) -> SolveReport:
    """Dual of the general solver: J = J_c + J_y, constraint A# -| phi_2 = J_y."""
    if J is None and c is None:
        raise ValueError("need initial data or a right-hand side")
    ref = J if J is not None else c
    k = J.degree + 1 if J is not None else c.degree
    if k > ref.dim:
        raise DegreeError(f"unknown would have degree {k} > {ref.dim}")
    if c is None:
        c = Form.zero(ref.dim, k, ref.trunc, A.fiber)
    if J is None:
        J = Form.zero(ref.dim, max(k - 1, 0), ref.trunc, A.fiber)
    if c.degree != k:
        raise DegreeError(f"initial data has degree {c.degree}, unknown has degree {k}")
    _check_pair(A, c)
    _check_pair(A, J)
    x0 = as_center(center, ref.dim)
    A_l, c_l, J_l = shift_matrix(A, x0), c.shift(x0), J.shift(x0)
    if not codiff(c_l).is_zero():
        raise InitialDataNotCoexact("initial data c must satisfy delta c = 0")
    if (not allow_kernel and c_l.coeffs and not A_l.is_zero()
            and conn_interior(A_l, c_l).is_zero()):
        raise InitialDataInKernel("initial data lies in ker(A# -| _)")
    if k == 0:
        # delta vanishes on functions, so the equation is purely algebraic
        J_c = Form.zero(ref.dim, 0, ref.trunc, A.fiber)
        J_y = J_l
    else:
        parts = codecompose(J_l)
        J_c = parts.coexact_part + parts.point_part
        J_y = parts.anticoexact_part
    base_parts = {"J_c": _unshift(J_c, x0), "J_y": _unshift(J_y, x0)}
    try:
        p2 = solve_interior_constraint(A_l, J_y, check=False) if k > 0 else None
    except NoSolution as exc:
        partial = exc.partial
        report = SolveReport(
            solution=_unshift(partial, x0),
            residual=dual_cov(A_l, partial) - J_l,
            center=x0,
            local_solution=partial,
            constraint_status=ConstraintStatus.NO_SOLUTION,
            parts={**base_parts, "phi_2_partial": _unshift(partial, x0),
                   "obstruction": _unshift(exc.obstruction, x0)},
            diagnostics={"constraint": "J_y is not in Im(A# -| _)",
                         "obstruction_min_degree": residual_min_degree(exc.obstruction)},
        )
        raise NoSolution(
            "no solution: the anticoexact part J_y is not in the image of A# -| _",
            stage="constraint", report=report, obstruction=exc.obstruction, partial=partial,
        ) from None
    if p2 is None:
        p2 = Form.zero(ref.dim, k, ref.trunc, A.fiber)
    step = _h_interior(A_l)
    rhs = J_c - codiff(p2)
    phi_h, terms_h = alternating_series(step, c_l)
    phi_i, terms_i = alternating_series(step, cohomotopy_h(rhs))
    phi_l = phi_h + phi_i + p2
    report = SolveReport(
        solution=_unshift(phi_l, x0),
        residual=dual_cov(A_l, phi_l) - J_l,
        iterations=max(len(terms_h), len(terms_i)),
        center=x0,
        local_solution=phi_l,
        terms=terms_h,
        parts={**base_parts, "phi_1": _unshift(phi_h + phi_i, x0), "phi_2": _unshift(p2, x0)},
    )
    if modes:
        report.gauge_mode_basis = coexact_gauge_mode_basis(A_l, k)
        report.kernel_basis = dual_kernel_basis(A_l, k)
    report.radius_estimate = radius_estimate(A, x0, k)
    return _status(report, strict, "dual", ConstraintStatus.SATISFIED)
