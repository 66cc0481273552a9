"""Coefficient-space linear algebra: kernels of A ^ _ and A# -| _, wedge constraints."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Sequence, Tuple

from ..coeff import Series, monomials
from ..errors import Inconsistent, NoSolution, NotAntiexact
from ..forms import Form, MatrixForm, conn_interior, conn_wedge, index_sets
from ..homotopy import codiff, cohomotopy_h, ext_d, homotopy_H
from ..linsys import SparseSystem, solve_sparse

Coord = Tuple[tuple, int, tuple]
Operator = Callable[[Form], Form]


def basis_coords(dim: int, degree: int, trunc: int, fiber: int) -> List[Coord]:
    monos = list(monomials(dim, trunc))
    return [(I, a, m) for I in index_sets(dim, degree) for a in range(fiber) for m in monos]


def basis_form(dim: int, degree: int, trunc: int, fiber: int, coord: Coord) -> Form:
    I, a, m = coord
    return Form._raw(dim, degree, trunc, {(I, a): Series._raw(dim, trunc, {m: Fraction(1)})}, fiber)


def form_to_vector(phi: Form) -> Dict[Coord, Fraction]:
    return {(I, a, m): c for (I, a), s in phi.coeffs.items() for m, c in s.terms.items()}


def vector_to_form(vec: Dict[Hashable, Fraction], dim: int, degree: int, trunc: int,
                   fiber: int) -> Form:
    acc: Dict = {}
    for (I, a, m), c in vec.items():
        if c:
            acc.setdefault((I, a), {})[m] = Fraction(c)
    return Form._raw(dim, degree, trunc,
                     {k: Series._raw(dim, trunc, t) for k, t in acc.items()}, fiber)


def operator_system(ops: Sequence[Tuple[str, Operator]], dim: int, degree: int, trunc: int,
                    fiber: int, rhs: Dict[str, Form] | None = None) -> SparseSystem:
    """Stack the matrices of linear operators acting on degree-``degree`` forms."""
    cols = basis_coords(dim, degree, trunc, fiber)
    system = SparseSystem(cols)
    rows: Dict[tuple, Dict[Coord, Fraction]] = {}
    for col in cols:
        e = basis_form(dim, degree, trunc, fiber, col)
        for tag, op in ops:
            for key, v in form_to_vector(op(e)).items():
                rows.setdefault((tag, key), {})[col] = v
    targets: Dict[tuple, Fraction] = {}
    for tag, target in (rhs or {}).items():
        for key, v in form_to_vector(target).items():
            targets[(tag, key)] = v
    for key in set(rows) | set(targets):
        system.add_row(rows.get(key, {}), targets.get(key, 0))
    return system


def _kernel(ops, dim, degree, trunc, fiber) -> List[Form]:
    sol = solve_sparse(operator_system(ops, dim, degree, trunc, fiber))
    return [vector_to_form(v, dim, degree, trunc, fiber) for v in sol.kernel]


def kernel_basis(A: MatrixForm, degree: int) -> List[Form]:
    """Basis of ker(A ^ _) on degree-``degree`` forms with coefficients of degree <= N."""
    return _kernel([("w", lambda f: conn_wedge(A, f))], A.dim, degree, A.trunc, A.fiber)


def gauge_mode_basis(A: MatrixForm, degree: int) -> List[Form]:
    """Basis of ker(A ^ _) intersected with the closed forms (constants in degree 0)."""
    ops = [("w", lambda f: conn_wedge(A, f)), ("d", ext_d)]
    return _kernel(ops, A.dim, degree, A.trunc, A.fiber)


def dual_kernel_basis(A: MatrixForm, degree: int) -> List[Form]:
    return _kernel([("i", lambda f: conn_interior(A, f))], A.dim, degree, A.trunc, A.fiber)


def coexact_gauge_mode_basis(A: MatrixForm, degree: int) -> List[Form]:
    ops = [("i", lambda f: conn_interior(A, f)), ("delta", codiff)]
    return _kernel(ops, A.dim, degree, A.trunc, A.fiber)


def _solve_algebraic(op: Operator, target: Form, degree: int, fiber: int, what: str) -> Form:
    dim, trunc = target.dim, target.trunc
    if target.is_zero():
        return Form.zero(dim, degree, trunc, fiber)
    system = operator_system([("op", op)], dim, degree, trunc, fiber, {"op": target})
    try:
        sol = solve_sparse(system)
    except Inconsistent as exc:
        partial = vector_to_form(exc.partial, dim, degree, trunc, fiber)
        obstruction = target - op(partial)
        raise NoSolution(
            f"{what}: right-hand side is not in the image ({len(exc.conflicts)} conflicting equations)",
            stage="constraint",
            obstruction=obstruction,
            partial=partial,
        ) from None
    return vector_to_form(sol.particular, dim, degree, trunc, fiber)


def solve_wedge_constraint(A: MatrixForm, J_a: Form, center=None, check: bool = True) -> Form:
    """Particular solution of A ^ phi = J_a with free (kernel) coordinates set to zero."""
    if check and not ext_d(homotopy_H(J_a, center)).is_zero():
        raise NotAntiexact("J_a has a nonzero exact part dH(J_a)")
    if J_a.degree == 0:
        raise NotAntiexact("a 0-form cannot be in the image of A ^ _")
    return _solve_algebraic(lambda f: conn_wedge(A, f), J_a, J_a.degree - 1, A.fiber,
                            "A ^ phi = J_a")


def solve_interior_constraint(A: MatrixForm, J_y: Form, center=None, check: bool = True) -> Form:
    """Particular solution of A# -| phi = J_y (the dual constraint)."""
    if check and J_y.degree < J_y.dim and not codiff(cohomotopy_h(J_y, center)).is_zero():
        raise NotAntiexact("J_y has a nonzero coexact part")
    return _solve_algebraic(lambda f: conn_interior(A, f), J_y, J_y.degree + 1, A.fiber,
                            "A# -| phi = J_y")
