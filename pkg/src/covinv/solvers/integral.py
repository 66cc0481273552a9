"""Integral-equation form of the solver: phi + H(A ^ phi) = H J_e + d alpha.

The fixed-point iteration reproduces the alternating series term by term, so
both routes agree exactly at any truncation.
"""
from __future__ import annotations

from typing import Optional, Tuple

from ..coeff import Series
from ..errors import DegreeError, InvariantViolation, RHSNotExact
from ..forms import Form, MatrixForm, conn_wedge, series_identity
from ..homotopy import as_center, homotopy_H, is_closed
from .covariant import _check_pair, _unshift, shift_matrix


def neumann_integral_solve(A: MatrixForm, J_e: Optional[Form], alpha_exact: Optional[Form],
                           center=None, *, return_iterations: bool = False):
    """Iterate phi <- (H J_e + d alpha) - H(A ^ phi) from phi = 0 until stationary.

    ``alpha_exact`` is the closed form d alpha (the initial datum c of the series solver).
    """
    if J_e is None and alpha_exact is None:
        raise ValueError("need J_e or d alpha")
    ref = alpha_exact if alpha_exact is not None else J_e
    k = alpha_exact.degree if alpha_exact is not None else J_e.degree - 1
    if J_e is None:
        J_e = Form.zero(ref.dim, k + 1, ref.trunc, ref.fiber)
    if alpha_exact is None:
        alpha_exact = Form.zero(ref.dim, k, ref.trunc, ref.fiber)
    if J_e.degree != k + 1:
        raise DegreeError("J_e must have degree one more than d alpha")
    _check_pair(A, J_e)
    _check_pair(A, alpha_exact)
    x0 = as_center(center, ref.dim)
    A_l, Je_l, da_l = shift_matrix(A, x0), J_e.shift(x0), alpha_exact.shift(x0)
    if not is_closed(Je_l):
        raise RHSNotExact("J_e must be closed")
    if not is_closed(da_l):
        raise RHSNotExact("d alpha must be closed")
    source = homotopy_H(Je_l) + da_l
    phi = Form.zero(ref.dim, k, ref.trunc, ref.fiber)
    for it in range(ref.trunc + 3):
        nxt = source - homotopy_H(conn_wedge(A_l, phi))
        if nxt == phi:
            out = _unshift(phi, x0)
            return (out, it) if return_iterations else out
        phi = nxt
    raise InvariantViolation("fixed-point iteration did not become stationary")


def riemann_graves_solve(Gamma: MatrixForm, center=None):
    """Solve phi = I + H(phi Gamma) for an m x m matrix of functions phi."""
    if Gamma.degree != 1:
        raise DegreeError("Gamma must be a matrix of one-forms")
    m, dim, trunc = Gamma.fiber, Gamma.dim, Gamma.trunc
    x0 = as_center(center, dim)
    G = shift_matrix(Gamma, x0)
    ident = series_identity(dim, trunc, m)
    phi = ident
    for _ in range(trunc + 3):
        nxt = []
        for a in range(m):
            row = []
            for b in range(m):
                acc = Form.zero(dim, 1, trunc)
                for c in range(m):
                    if phi[a][c] and G.entries[c][b].coeffs:
                        acc = acc + G.entries[c][b].scale(phi[a][c])
                row.append(ident[a][b] + homotopy_H(acc).coefficient(()))
            nxt.append(tuple(row))
        nxt = tuple(nxt)
        if nxt == phi:
            back = tuple(-c for c in x0)
            return tuple(tuple(s.shift(back) if any(x0) else s for s in r) for r in phi)
        phi = nxt
    raise InvariantViolation("Riemann-Graves iteration did not become stationary")
