import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import forms
from covinv.coeff import Series, series_exp
from covinv.errors import (
    DegreeError,
    InitialDataInKernel,
    InitialDataNotCoexact,
    InitialDataNotExact,
    NoSolution,
    NotAntiexact,
    RHSNotExact,
)
from covinv.forms import Connection, Form, GaugeElement, PolyVectorField, conn_wedge, hodge_star, star_inverse
from covinv.homotopy import ext_d, homotopy_H, residual_min_degree
from covinv.randforms import random_connection, random_form
from covinv.solvers import (
    ConstraintStatus,
    HorizontalFrame,
    PipelineStage,
    StageKind,
    cov_d,
    curvature,
    dual_cov,
    gauge_mode_basis,
    gauge_push,
    gauge_transform,
    horizontal_delta,
    kernel_basis,
    neumann_integral_solve,
    radius_estimate,
    riemann_graves_solve,
    solve_curvature,
    solve_dual,
    solve_general,
    solve_homogeneous,
    solve_inhom_exact,
    solve_interior_constraint,
    solve_pipeline,
    solve_scalar_homogeneous,
    solve_wedge_constraint,
)
from oracles import dy_gamma, dy_solution, expdecay_solution, inhom_solution

N = 8


def dxi(i, n=2, trunc=N):
    return Form.basis(n, trunc, (i,))


def A_dy(n=2, trunc=N):
    return Connection.scalar(Form.basis(n, trunc, (1,)))


def test_dy_series():
    rep = solve_homogeneous(A_dy(), dxi(0))
    assert rep.solution == dy_solution(N)
    assert all(rep.terms[k] == dy_gamma(k, N) for k in range(len(rep.terms)))
    assert rep.diagnostics["projection_recovers_c"]
    assert rep.residual_min_degree >= N
    # the only exact gauge modes are f(y) dy
    assert all(set(I for I, *_ in g.terms()) == {(1,)} for g in rep.gauge_mode_basis)
    assert len(rep.gauge_mode_basis) == N + 1


def test_zero_connection_returns_initial_data():
    c = dxi(0) + dxi(1)
    rep = solve_homogeneous(Connection.zero(2, N), c)
    assert rep.solution == c


def test_expdecay_recovers_exponential():
    phi2 = expdecay_solution(N + 1)
    c = ext_d(homotopy_H(phi2)).truncate(N)
    rep = solve_homogeneous(A_dy(), c)
    assert rep.solution == expdecay_solution(N)
    # dH phi_2 is closed; the dy example solution is not, so they cannot coincide
    assert c != dy_solution(N)
    assert residual_min_degree(c - dy_solution(N)) == 1


def test_initial_data_checks():
    with pytest.raises(InitialDataNotExact):
        solve_homogeneous(A_dy(), Form(2, 1, N, {((1,), 0): Series.var(2, N, 0)}))
    with pytest.raises(InitialDataInKernel):
        solve_homogeneous(A_dy(), dxi(1))


def test_nonintegrable_data_raises_no_solution():
    # F = d(x dy) = dx ^ dy != 0 so generic closed data is obstructed
    A = Connection.scalar(Form(2, 1, N, {((1,), 0): Series.var(2, N, 0)}))
    with pytest.raises(NoSolution) as info:
        solve_homogeneous(A, Form.function(Series.one(2, N)))
    assert info.value.report.constraint_status is ConstraintStatus.NO_SOLUTION
    rep = solve_homogeneous(A, Form.function(Series.one(2, N)), strict=False)
    assert rep.diagnostics["integrable"] is False


@settings(max_examples=25)
@given(forms(2, 0, N, max_degree=3), st.integers(0, 1))
def test_flat_scalar_connection_always_integrable(lam, k):
    # A = d lambda has zero curvature, so every closed initial datum is integrable
    A = Connection.scalar(ext_d(lam))
    c = dxi(0) if k else Form.function(Series.one(2, N))
    rep = solve_homogeneous(A, c, strict=False, modes=False, allow_kernel=True)
    assert rep.residual_min_degree >= N


def test_scalar_exponential_formula():
    lam = Series(2, N, {(1, 1): 1, (0, 2): Fraction(1, 2)})
    A = Connection.scalar(ext_d(Form.function(lam)))
    phi = solve_scalar_homogeneous(A, 3)
    assert phi == Form.function(series_exp(-lam).scale(3))
    rep = solve_homogeneous(A, Form.function(Series.const(2, N, 3)))
    assert rep.solution == phi


def test_inhomogeneous_routes_agree():
    J = Form(2, 1, 12, {((0,), 0): Series.var(2, 12, 0)})
    rep = solve_inhom_exact(A_dy(trunc=12), None, J, strict=False)
    assert rep.diagnostics["closed_form_agrees"]
    assert rep.parts["phi_I"] == inhom_solution(12)
    for k, t in enumerate(rep.terms[:11]):
        assert t == Form.function(Series(2, 12, {(2, k): Fraction(1, math.factorial(k + 2))}))
    # x dx is closed but (d + dy^) phi = x dx has no solution: the candidate misses by degree 2
    assert not rep.diagnostics["integrable"]
    assert rep.residual_min_degree == 2


def test_rhs_must_be_closed():
    J = Form(2, 1, N, {((1,), 0): Series.var(2, N, 0)})
    with pytest.raises(RHSNotExact):
        solve_inhom_exact(A_dy(), None, J)
    with pytest.raises(RHSNotExact):
        neumann_integral_solve(A_dy(), J, None)


def test_negative_example():
    J = Form(2, 1, N, {((0,), 0): Series(2, N, {(0, 1): Fraction(-1, 2)}),
                       ((1,), 0): Series(2, N, {(1, 0): Fraction(1, 2)})})
    with pytest.raises(NoSolution) as info:
        solve_general(A_dy(), None, J)
    exc = info.value
    assert exc.stage == "constraint"
    assert exc.report.constraint_status is ConstraintStatus.NO_SOLUTION
    assert exc.report.parts["J_a"] == J


def test_3d_constraint_is_inconsistent():
    n = 3
    J = Form(n, 2, N, {((1, 2), 0): Series.var(n, N, 0),
                       ((0, 2), 0): -Series.var(n, N, 1),
                       ((0, 1), 0): Series.var(n, N, 2)})
    with pytest.raises(NoSolution) as info:
        solve_wedge_constraint(A_dy(n), J)
    partial = info.value.partial
    # least-squares-free partial solution: the dx^dz component cannot be produced by dy ^ _
    assert partial == Form(n, 1, N, {((0,), 0): -Series.var(n, N, 2), ((2,), 0): Series.var(n, N, 0)})
    assert info.value.obstruction == Form(n, 2, N, {((0, 2), 0): -Series.var(n, N, 1)})


def test_wedge_constraint_requires_antiexact():
    with pytest.raises(NotAntiexact):
        solve_wedge_constraint(A_dy(), Form.basis(2, N, (0, 1)))


def test_wedge_constraint_kernel_zeroed():
    n = 3
    target = Form(n, 1, N, {((0,), 0): -Series.var(n, N, 2), ((2,), 0): Series.var(n, N, 0)})
    rhs = conn_wedge(A_dy(n), target)
    p2 = solve_wedge_constraint(A_dy(n), rhs, check=False)
    assert p2 == target  # the free dy direction is set to zero


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_general_solver_status_is_consistent(seed, n):
    # J = D_A psi always has a solution; the decomposition either finds one
    # graded to order N or reports the obstruction it hit
    rng = random.Random(seed)
    A = Connection.scalar(ext_d(random_form(rng, n, 0, N, max_degree=2)))
    psi = random_form(rng, n, 1, N, max_degree=3)
    J = cov_d(A, psi)
    try:
        rep = solve_general(A, None, J, strict=False, modes=False)
    except NoSolution as exc:
        assert not exc.obstruction.is_zero()
        return
    assert rep.solution == rep.parts["phi_1"] + rep.parts["phi_2"] + rep.parts["phi_3"]
    if rep.constraint_status is ConstraintStatus.SATISFIED:
        assert rep.residual_min_degree >= N


def test_neumann_matches_series_on_dy_example():
    rep = solve_homogeneous(A_dy(), dxi(0))
    phi, its = neumann_integral_solve(A_dy(), None, dxi(0), return_iterations=True)
    assert phi == rep.solution
    assert its <= N + 1


def test_riemann_graves_scalar():
    G = Connection.scalar(Form.basis(2, N, (1,)))
    phi = riemann_graves_solve(G)
    assert phi[0][0] == series_exp(Series.var(2, N, 1))


def test_radius_estimate():
    assert radius_estimate(Connection.zero(2, N)) == math.inf
    assert radius_estimate(A_dy()) == pytest.approx(1.0)


def test_nonzero_center():
    x0 = (Fraction(1, 2), Fraction(-1))
    c = dxi(0)
    rep = solve_homogeneous(A_dy(), c, x0)
    assert rep.residual_min_degree >= N
    assert rep.center == x0
    assert rep.local_solution.shift(tuple(-v for v in x0)) == rep.solution


def test_dual_matches_star_of_primal():
    # dual solution with A and data c equals * of the primal solution with -A and data *^-1 c
    c = dxi(1)
    rep = solve_dual(A_dy(), c)
    primal = solve_homogeneous(Connection.scalar(-Form.basis(2, N, (1,))), star_inverse(c))
    assert rep.solution == hodge_star(primal.solution)
    assert rep.residual_min_degree >= N
    assert dual_cov(A_dy(), rep.solution) == rep.residual


def test_dual_initial_data_checks():
    with pytest.raises(InitialDataNotCoexact):
        solve_dual(A_dy(), Form(2, 1, N, {((0,), 0): Series.var(2, N, 0)}))
    with pytest.raises(DegreeError):
        solve_dual(A_dy(), None, Form.basis(2, N, (0, 1)))


def test_interior_constraint():
    J_y = Form.function(Series.var(2, N, 0))
    p = solve_interior_constraint(A_dy(), J_y, check=False)
    assert p == Form(2, 1, N, {((1,), 0): Series.var(2, N, 0)})


def test_curvature_of_scalar_and_matrix():
    A = A_dy()
    assert curvature(A).is_zero()
    B = Connection([[dxi(0), dxi(1)], [Form.zero(2, 1, N), Form.zero(2, 1, N)]])
    F = curvature(B)
    assert F.entries[0][1] == Form.basis(2, N, (0, 1))


def test_curvature_solver_first_order_data():
    res = solve_curvature(A_dy(), c1=dxi(0))
    assert res.solution == dy_solution(N)
    assert res.residual_min_degree >= N


def test_curvature_solver_inner_stage_obstructed():
    # phi_2 = dy example solution is not closed-plus-kernel, so the inner constraint fails
    with pytest.raises(NoSolution) as info:
        solve_curvature(A_dy(), c2=dxi(0))
    assert info.value.stage == "phi_1"


def test_gauge_covariance_dy_example():
    rep = solve_homogeneous(A_dy(), dxi(0))
    g = GaugeElement.scalar_exp(Series(2, N, {(1, 0): 1, (0, 2): Fraction(-1, 3)}))
    A2 = gauge_transform(A_dy(), g)
    assert residual_min_degree(cov_d(A2, gauge_push(rep.solution, g))) >= N


def test_horizontal_projection():
    frame = HorizontalFrame([Form.basis(2, N, (1,))], [PolyVectorField.coordinate(2, N, 1)],
                            connection=A_dy())
    rep = solve_homogeneous(A_dy(), dxi(0))
    hr = horizontal_delta(frame, rep.solution)
    assert hr.horizontal and hr.input_constant and not hr.commutes
    phi2 = expdecay_solution(N)
    hr2 = horizontal_delta(frame, phi2)
    assert hr2.delta_phi == phi2 and hr2.commutes


def test_pipeline_delta_d():
    zero = Connection.zero(2, N)
    c = Form.basis(2, N, (0, 1))
    e = dxi(0)
    stages = [PipelineStage(StageKind.DUAL, zero, 1, [c]), PipelineStage(StageKind.COVARIANT, zero, 1, [e])]
    res = solve_pipeline(stages, Form.zero(2, 1, N), degree=1)
    assert res.solution == e + homotopy_H(c)


def test_pipeline_degree_bookkeeping():
    zero = Connection.zero(2, N)
    with pytest.raises(DegreeError):
        solve_pipeline([PipelineStage(StageKind.COVARIANT, zero, 1, [])], Form.zero(2, 1, N), degree=2)


def test_gauge_modes_are_closed_kernel():
    A = A_dy()
    modes = gauge_mode_basis(A, 1)
    kern = kernel_basis(A, 1)
    assert len(kern) >= len(modes)
    for m in modes:
        assert ext_d(m).is_zero()
