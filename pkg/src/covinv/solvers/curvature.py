"""Curvature F = dA + A ^ A and the second-order equation (d + A^)^2 phi = J."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from ..errors import DegreeError, NoSolution
from ..forms import Form, MatrixForm, matrix_matrix_wedge
from ..homotopy import as_center, ext_d, residual_min_degree
from .covariant import cov_d, shift_matrix, solve_general, solve_homogeneous
from .report import SolveReport


def curvature(A: MatrixForm) -> MatrixForm:
    dA = MatrixForm([[ext_d(e) for e in row] for row in A.entries])
    if A.fiber == 1:
        return dA  # A ^ A vanishes for a scalar connection
    return dA + matrix_matrix_wedge(A, A)


@dataclass
class CurvatureResult:
    solution: Form
    phi1: SolveReport
    phi2: SolveReport
    first_order: Optional[SolveReport] = None
    residual: Optional[Form] = None
    diagnostics: Dict = field(default_factory=dict)

    @property
    def residual_min_degree(self) -> int:
        return residual_min_degree(self.residual)


def solve_curvature(A: MatrixForm, J: Optional[Form] = None, c1: Optional[Form] = None,
                    c2: Optional[Form] = None, center=None, *, degree: Optional[int] = None,
                    strict: bool = True) -> CurvatureResult:
    """Reduce (d + A^)^2 phi = J to two first-order problems.

    phi_2 solves (d + A^) phi_2 = J with dH phi_2 = c2, then phi_1 solves
    (d + A^) phi_1 = phi_2 with vanishing initial data.  A first-order solution
    with initial data c1 is added when c1 is given.
    """
    if degree is None:
        if c1 is not None:
            degree = c1.degree
        elif c2 is not None:
            degree = c2.degree - 1
        elif J is not None:
            degree = J.degree - 2
        else:
            raise ValueError("cannot infer the degree of the unknown")
    k = degree
    if k < 0:
        raise DegreeError("unknown degree must be non-negative")
    dim, trunc, m = A.dim, A.trunc, A.fiber
    if J is None:
        J = Form.zero(dim, k + 2, trunc, m)
    if c2 is None:
        c2 = Form.zero(dim, k + 1, trunc, m)
    if J.degree != k + 2 or c2.degree != k + 1:
        raise DegreeError("J must have degree k+2 and c2 degree k+1")
    try:
        r2 = solve_general(A, c2, J, center, strict=strict, modes=False)
    except NoSolution as exc:
        raise NoSolution(f"outer stage (phi_2): {exc}", stage="phi_2", report=exc.report,
                         obstruction=exc.obstruction, partial=exc.partial) from None
    try:
        r1 = solve_general(A, None, r2.solution, center, strict=strict, modes=False)
    except NoSolution as exc:
        raise NoSolution(f"inner stage (phi_1): {exc}", stage="phi_1", report=exc.report,
                         obstruction=exc.obstruction, partial=exc.partial) from None
    solution = r1.solution
    r0 = None
    if c1 is not None and c1.coeffs:
        r0 = solve_homogeneous(A, c1, center, strict=strict, modes=False, allow_kernel=True)
        solution = solution + r0.solution
    x0 = as_center(center, dim)
    A_l = shift_matrix(A, x0)
    phi_l = solution.shift(x0)
    residual = cov_d(A_l, cov_d(A_l, phi_l)) - J.shift(x0)
    return CurvatureResult(solution, r1, r2, r0, residual,
                           {"curvature": curvature(A)})
