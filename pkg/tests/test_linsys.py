from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from covinv.errors import Inconsistent
from covinv.linsys import SparseSystem, apply, solve_sparse

entries = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def systems(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    rows = [[draw(entries) if draw(st.booleans()) else Fraction(0) for _ in range(n)] for _ in range(m)]
    # consistent by construction: rhs = M x* for a hidden x*
    hidden = [draw(entries) for _ in range(n)]
    rhs = [sum(a * b for a, b in zip(r, hidden)) for r in rows]
    return rows, rhs


def build(rows, rhs):
    n = len(rows[0])
    sysm = SparseSystem([f"c{j}" for j in range(n)])
    for r, b in zip(rows, rhs):
        sysm.add_row({f"c{j}": v for j, v in enumerate(r)}, b)
    return sysm


def sym(rows):
    return sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in r] for r in rows])


@settings(max_examples=80)
@given(systems())
def test_matches_sympy_rank_and_nullspace(data):
    rows, rhs = data
    sysm = build(rows, rhs)
    sol = solve_sparse(sysm)
    M = sym(rows)
    assert sol.rank == M.rank()
    assert apply(sysm, sol.particular) == [b for r, b in zip(rows, rhs) if any(r) or b]
    assert len(sol.kernel) == len(rows[0]) - M.rank()
    for vec in sol.kernel:
        v = sp.Matrix([sp.Rational(str(vec.get(f"c{j}", 0))) for j in range(len(rows[0]))])
        assert M * v == sp.zeros(len(rows), 1)
    if sol.kernel:
        K = sp.Matrix.hstack(*[sp.Matrix([sp.Rational(str(v.get(f"c{j}", 0)))
                                          for j in range(len(rows[0]))]) for v in sol.kernel])
        assert K.rank() == len(sol.kernel)


def test_free_variables_are_zero():
    s = SparseSystem(["a", "b"])
    s.add_row({"a": 1, "b": 1}, 2)
    sol = solve_sparse(s)
    assert sum(1 for v in sol.particular.values() if v) == 1


def test_inconsistent_reports_conflict():
    s = SparseSystem(["a"])
    s.add_row({"a": 1}, 1)
    s.add_row({"a": 2}, 3)
    with pytest.raises(Inconsistent) as info:
        solve_sparse(s)
    assert info.value.conflicts
    assert info.value.partial is not None


def test_zero_rows_are_skipped():
    s = SparseSystem(["a"])
    s.add_row({"a": 0}, 0)
    assert s.shape == (0, 1)
    assert solve_sparse(s).kernel == [{"a": Fraction(1)}]


def test_unknown_column():
    s = SparseSystem(["a"])
    with pytest.raises(KeyError):
        s.add_row({"b": 1}, 0)
