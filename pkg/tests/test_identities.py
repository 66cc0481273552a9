"""Operator identities as hypothesis properties (the acceptance suite runs the seeded sweep)."""
from hypothesis import given, strategies as st

from conftest import connections, forms
from covinv.forms import (
    Connection,
    Form,
    conn_interior,
    conn_wedge,
    hodge_star,
    interior,
    matrix_matrix_wedge,
    matrix_wedge,
    sharp,
    wedge,
)
from covinv.homotopy import codiff, cohomotopy_h, dual_point_part, ext_d, homotopy_H, point_part, residual_min_degree
from covinv.solvers import curvature

N = 6
dims = st.sampled_from([2, 3])
fibers = st.sampled_from([1, 2])


def any_k(lo=0, hi_offset=0):
    return st.tuples(dims, fibers).flatmap(
        lambda nm: st.integers(lo, nm[0] - hi_offset).flatmap(lambda k: forms(nm[0], k, N, nm[1])))


def dH(f):
    return ext_d(homotopy_H(f)) if f.degree else Form.zero(f.dim, 0, f.trunc, f.fiber)


@given(any_k())
def test_H_nilpotent(phi):
    assert homotopy_H(homotopy_H(phi)).is_zero()


@given(any_k(0, 1))
def test_dHd(phi):
    assert ext_d(homotopy_H(ext_d(phi))) == ext_d(phi)


@given(any_k(1))
def test_HdH(phi):
    assert homotopy_H(ext_d(homotopy_H(phi))) == homotopy_H(phi)


@given(any_k())
def test_homotopy_formula(phi):
    assert dH(phi) + homotopy_H(ext_d(phi)) + point_part(phi) == phi


@given(any_k(1))
def test_dH_projector(phi):
    assert dH(dH(phi)) == dH(phi)


@given(any_k(0, 1))
def test_h_nilpotent_and_hdh(phi):
    h = cohomotopy_h(phi)
    assert cohomotopy_h(h).is_zero()
    assert cohomotopy_h(codiff(h)) == h


@given(any_k(1))
def test_dhd(phi):
    assert codiff(cohomotopy_h(codiff(phi))) == codiff(phi)


@given(any_k())
def test_cohomotopy_formula(phi):
    n, k = phi.dim, phi.degree
    hd = cohomotopy_h(codiff(phi)) if k else Form.zero(n, k, N, phi.fiber)
    dh = codiff(cohomotopy_h(phi)) if k < n else Form.zero(n, k, N, phi.fiber)
    assert hd + dh + dual_point_part(phi) == phi


@given(st.integers(0, 2).flatmap(lambda k: forms(3, k, N)), forms(3, 1, N, max_degree=2))
def test_interior_of_star(phi, alpha):
    assert interior(sharp(alpha), hodge_star(phi)) == hodge_star(wedge(phi, alpha))


@given(st.integers(0, 2).flatmap(lambda k: forms(3, k, N)), forms(3, 1, N, max_degree=2))
def test_dual_operator_is_star_conjugate(phi, alpha):
    # (delta + A# -|) * phi = (-1)^(k+1) * (d - A ^ _) phi holds for every k
    A = Connection([[alpha]])
    k = phi.degree
    lhs = codiff(hodge_star(phi)) + conn_interior(A, hodge_star(phi))
    rhs = hodge_star(ext_d(phi) - wedge(alpha, phi)).scale((-1) ** (k + 1))
    assert lhs == rhs


@given(fibers.flatmap(lambda m: st.tuples(connections(2, N, m), forms(2, 1, N, m))))
def test_curvature_recursion(data):
    A, alpha = data
    AA = matrix_matrix_wedge(A, A)
    Aa = conn_wedge(A, alpha)
    lhs = homotopy_H(conn_wedge(A, ext_d(alpha)))
    rhs = dH(Aa) + homotopy_H(matrix_wedge(curvature(A), alpha)) - homotopy_H(matrix_wedge(AA, alpha)) - Aa
    assert residual_min_degree(lhs - rhs) >= N
