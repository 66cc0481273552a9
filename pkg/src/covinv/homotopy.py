"""Exterior derivative, linear-homotopy operator and the induced decompositions.

Every operator acts on :class:`~covinv.forms.Form` values at a fixed
truncation order N.  ``H`` raises coefficient degree by one, so its top
layer (degree N+1) is dropped on output; with a nonzero center the shift back
to global coordinates is done *before* that truncation so no lower-degree
information is lost.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .coeff import Series, as_rational
from .errors import DimensionMismatch
from .forms import Form, eta, hodge_star, merge_sign, star_inverse

Center = Tuple[Fraction, ...]


def as_center(center, dim: int) -> Center:
    if center is None:
        return (Fraction(0),) * dim
    center = tuple(as_rational(c) for c in center)
    if len(center) != dim:
        raise DimensionMismatch(f"center has {len(center)} coordinates, expected {dim}")
    return center


def to_local(phi: Form, center) -> Form:
    """Re-expand coefficients around ``center`` (x = x0 + u, returns a form in u)."""
    return phi.shift(as_center(center, phi.dim))


def to_global(phi: Form, center) -> Form:
    return phi.shift(tuple(-c for c in as_center(center, phi.dim)))


def ext_d(phi: Form) -> Form:
    n = phi.dim
    out: Dict = {}
    if phi.degree < n:
        for (index_set, a), s in phi.coeffs.items():
            for i in range(n):
                if i in index_set:
                    continue
                ds = s.deriv(i)
                if not ds:
                    continue
                sign, merged = merge_sign((i,), index_set)
                key = (merged, a)
                v = ds if sign > 0 else -ds
                if key in out:
                    v = out[key] + v
                    if not v:
                        del out[key]
                        continue
                out[key] = v
    return Form._raw(n, phi.degree + 1, phi.trunc, out, phi.fiber)


def _h_at_origin(phi: Form, out_trunc: int) -> Form:
    # monomial rule: H(u^alpha dx_I) = u^alpha (K -| dx_I) / (|alpha| + k), K = u^i d_i
    k = phi.degree
    n = phi.dim
    acc: Dict = {}
    for (index_set, a), s in phi.coeffs.items():
        for j, i in enumerate(index_set):
            key = (index_set[:j] + index_set[j + 1:], a)
            bucket = acc.setdefault(key, {})
            sign = -1 if j % 2 else 1
            for mono, c in s.terms.items():
                if sum(mono) + 1 > out_trunc:
                    continue
                m = mono[:i] + (mono[i] + 1,) + mono[i + 1:]
                v = bucket.get(m, 0) + sign * c / (sum(mono) + k)
                if v:
                    bucket[m] = v
                else:
                    bucket.pop(m, None)
    coeffs = {key: Series._raw(n, out_trunc, t) for key, t in acc.items() if t}
    return Form._raw(n, k - 1, out_trunc, coeffs, phi.fiber)


def homotopy_H(phi: Form, center=None) -> Form:
    """Homotopy operator of the linear contraction onto ``center``."""
    if phi.degree == 0:
        return Form.zero(phi.dim, 0, phi.trunc, phi.fiber)
    x0 = as_center(center, phi.dim)
    if not any(x0):
        return _h_at_origin(phi, phi.trunc)
    N = phi.trunc
    local = phi.shift(x0)
    local = Form._raw(phi.dim, phi.degree, N + 1,
                      {k: s.truncate(N + 1) for k, s in local.coeffs.items()}, phi.fiber)
    out = _h_at_origin(local, N + 1).shift(tuple(-c for c in x0))
    return out.truncate(N)


def point_part(phi: Form, center=None) -> Form:
    """s*_{x0}: the constant value at the center on 0-forms, zero otherwise."""
    if phi.degree != 0:
        return Form.zero(phi.dim, phi.degree, phi.trunc, phi.fiber)
    x0 = as_center(center, phi.dim)
    coeffs = {}
    for key, s in phi.coeffs.items():
        v = s.eval_exact(x0)
        if v:
            coeffs[key] = Series.const(phi.dim, phi.trunc, v)
    return Form._raw(phi.dim, 0, phi.trunc, coeffs, phi.fiber)


@dataclass(frozen=True)
class Decomposition:
    """exact + antiexact + point = input (or the coexact analogues when ``kind == "dual"``)."""

    exact_part: Form
    antiexact_part: Form
    point_part: Form
    kind: str = "primal"

    def total(self) -> Form:
        return self.exact_part + self.antiexact_part + self.point_part

    # dual naming
    @property
    def coexact_part(self) -> Form:
        return self.exact_part

    @property
    def anticoexact_part(self) -> Form:
        return self.antiexact_part


def decompose(phi: Form, center=None) -> Decomposition:
    if phi.degree == 0:
        exact = Form.zero(phi.dim, 0, phi.trunc, phi.fiber)
    else:
        exact = ext_d(homotopy_H(phi, center))
    anti = homotopy_H(ext_d(phi), center)
    return Decomposition(exact, anti, point_part(phi, center))


def codiff(phi: Form) -> Form:
    """delta = star^-1 d star eta."""
    if phi.degree == 0:
        return Form.zero(phi.dim, 0, phi.trunc, phi.fiber)
    if phi.degree > phi.dim:
        return Form.zero(phi.dim, phi.dim, phi.trunc, phi.fiber)
    return star_inverse(ext_d(hodge_star(eta(phi))))


def cohomotopy_h(phi: Form, center=None) -> Form:
    """h = eta star^-1 H star; raises form degree by one and vanishes on n-forms."""
    if phi.degree >= phi.dim:
        return Form.zero(phi.dim, phi.degree + 1, phi.trunc, phi.fiber)
    return eta(star_inverse(homotopy_H(hodge_star(phi), center)))


def dual_point_part(phi: Form, center=None) -> Form:
    """S_{x0} = star^-1 s* star, nonzero only on top-degree forms."""
    if phi.degree > phi.dim:
        return Form.zero(phi.dim, phi.degree, phi.trunc, phi.fiber)
    return star_inverse(point_part(hodge_star(phi), center))


def codecompose(phi: Form, center=None) -> Decomposition:
    if phi.degree >= phi.dim:
        coexact = Form.zero(phi.dim, phi.degree, phi.trunc, phi.fiber)
    else:
        coexact = codiff(cohomotopy_h(phi, center))
    anti = cohomotopy_h(codiff(phi), center) if phi.degree > 0 else Form.zero(
        phi.dim, phi.degree, phi.trunc, phi.fiber)
    return Decomposition(coexact, anti, dual_point_part(phi, center), kind="dual")


def is_closed(phi: Form) -> bool:
    return ext_d(phi).is_zero()


def is_coclosed(phi: Form) -> bool:
    return codiff(phi).is_zero()


def residual_min_degree(residual: Form) -> int:
    """Lowest coefficient degree of a residual; ``trunc + 1`` when it vanishes identically."""
    m = residual.min_degree()
    return residual.trunc + 1 if m is None else m
