"""Gauge transformations and horizontal projection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..coeff import Series
from ..errors import FiberMismatch, FrameInvalid
from ..forms import (
    Connection,
    Form,
    GaugeElement,
    MatrixForm,
    PolyVectorField,
    interior,
    series_matrix_times_form,
    wedge,
)
from ..homotopy import ext_d, residual_min_degree
from .covariant import cov_d


def gauge_transform(A: MatrixForm, g: GaugeElement) -> Connection:
    """A' = g^-1 A g + g^-1 dg."""
    if A.fiber != g.fiber:
        raise FiberMismatch("gauge element and connection have different sizes")
    m = A.fiber
    ginv, gm = g.inverse, g.entries
    rows = []
    for a in range(m):
        row = []
        for b in range(m):
            acc = Form.zero(A.dim, 1, A.trunc)
            for c in range(m):
                if not ginv[a][c]:
                    continue
                for d in range(m):
                    if gm[d][b] and A.entries[c][d].coeffs:
                        acc = acc + A.entries[c][d].scale(ginv[a][c] * gm[d][b])
                dg = ext_d(Form.function(gm[c][b]))
                if dg.coeffs:
                    acc = acc + dg.scale(ginv[a][c])
            row.append(acc)
        rows.append(row)
    return Connection(rows)


def gauge_push(phi: Form, g: GaugeElement) -> Form:
    """g^-1 phi."""
    return series_matrix_times_form(g.inverse, phi)


class HorizontalFrame:
    """One-forms omega_i with vector fields X_i such that X_j -| omega_i = delta_ij."""

    def __init__(self, omegas: Sequence[Form], fields: Sequence[PolyVectorField],
                 connection: Optional[MatrixForm] = None):
        omegas, fields = list(omegas), list(fields)
        if len(omegas) != len(fields) or not omegas:
            raise FrameInvalid("need the same positive number of one-forms and vector fields")
        for w in omegas:
            if w.degree != 1 or w.fiber != 1:
                raise FrameInvalid("frame one-forms must be scalar one-forms")
        dim, trunc = omegas[0].dim, omegas[0].trunc
        for i, w in enumerate(omegas):
            for j, X in enumerate(fields):
                val = interior(X, w).coefficient(())
                if val != Series.const(dim, trunc, 1 if i == j else 0):
                    raise FrameInvalid(f"X_{j + 1} -| omega_{i + 1} = {val.to_str()}, "
                                       f"expected {1 if i == j else 0}")
        total = omegas[0]
        for w in omegas[1:]:
            total = total + w
        if connection is not None:
            if connection.fiber != 1:
                raise FrameInvalid("horizontal frames are defined for scalar connections")
            if connection.entries[0][0] != total:
                raise FrameInvalid("the frame one-forms do not sum to the connection")
        self.omegas = omegas
        self.fields = fields
        self.connection = Connection([[total]])

    def projector(self, i: int, phi: Form) -> Form:
        """P_i = I - omega_i ^ (X_i -| _)."""
        if phi.degree == 0:
            return phi
        return phi - wedge(self.omegas[i], interior(self.fields[i], phi))

    def delta(self, phi: Form) -> Form:
        for i in reversed(range(len(self.omegas))):
            phi = self.projector(i, phi)
        return phi


@dataclass
class HorizontalResult:
    delta_phi: Form
    horizontal: bool
    input_constant: bool
    commutes: bool
    residual: Form

    @property
    def residual_min_degree(self) -> int:
        return residual_min_degree(self.residual)


def horizontal_delta(frame: HorizontalFrame, phi: Form,
                     A: Optional[MatrixForm] = None) -> HorizontalResult:
    """Apply Delta = P_1 ... P_k and test whether covariant constancy survives."""
    A = frame.connection if A is None else A
    dphi = frame.delta(phi)
    horizontal = all(interior(X, dphi).is_zero() for X in frame.fields) if dphi.degree else True
    N = phi.trunc
    before = cov_d(A, phi)
    after = cov_d(A, dphi)
    return HorizontalResult(
        delta_phi=dphi,
        horizontal=horizontal,
        input_constant=residual_min_degree(before) >= N,
        commutes=residual_min_degree(after) >= N,
        residual=after,
    )
