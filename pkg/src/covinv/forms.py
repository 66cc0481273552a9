"""Differential forms on R^n with truncated power-series coefficients.

A :class:`Form` of degree k is stored as a dictionary keyed by
``(index_set, fiber)`` where ``index_set`` is a strictly increasing tuple of
0-based coordinate indices of length k and ``fiber`` a 0-based component of
the value space Q^m.  The metric is the Euclidean identity metric in the
standard coordinates, with orientation dx_1 ^ ... ^ dx_n.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

from .coeff import MultiIndex, Series, as_rational, default_names
from .errors import DegreeError, DimensionMismatch, FiberMismatch, SingularGauge

IndexSet = Tuple[int, ...]
Key = Tuple[IndexSet, int]


@lru_cache(maxsize=None)
def merge_sign(left: IndexSet, right: IndexSet) -> Tuple[int, IndexSet]:
    """Sign and sorted index set of dx_left ^ dx_right (sign 0 on a repeated index)."""
    if set(left) & set(right):
        return 0, ()
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


@lru_cache(maxsize=None)
def index_sets(dim: int, degree: int) -> Tuple[IndexSet, ...]:
    return tuple(combinations(range(dim), degree))


@lru_cache(maxsize=None)
def complement(dim: int, index_set: IndexSet) -> Tuple[int, IndexSet]:
    """Complement I^c and the sign eps with dx_I ^ dx_{I^c} = eps * volume."""
    rest = tuple(i for i in range(dim) if i not in index_set)
    sign, _ = merge_sign(index_set, rest)
    return sign, rest


class Form:
    """Degree-k differential form on R^n valued in Q^m."""

    __slots__ = ("dim", "fiber", "degree", "trunc", "coeffs", "_hash")

    def __init__(self, dim: int, degree: int, trunc: int, coeffs=None, fiber: int = 1):
        if degree < 0:
            raise DegreeError("form degree must be non-negative")
        clean: Dict[Key, Series] = {}
        for (index_set, a), series in (coeffs or {}).items():
            index_set = tuple(index_set)
            if len(index_set) != degree:
                raise DegreeError(f"index set {index_set} inconsistent with degree {degree}")
            if list(index_set) != sorted(set(index_set)):
                raise ValueError(f"index set {index_set} must be strictly increasing")
            if index_set and (index_set[0] < 0 or index_set[-1] >= dim):
                raise DimensionMismatch(f"index set {index_set} out of range for dim {dim}")
            if not 0 <= a < fiber:
                raise FiberMismatch(f"fiber index {a} out of range for fiber dimension {fiber}")
            if not isinstance(series, Series):
                series = Series.const(dim, trunc, series)
            if series.dim != dim or series.trunc != trunc:
                raise DimensionMismatch("coefficient series does not match the form's dim/trunc")
            key = (index_set, a)
            if key in clean:
                series = clean[key] + series
            if series:
                clean[key] = series
            else:
                clean.pop(key, None)
        self.dim = dim
        self.fiber = fiber
        self.degree = degree
        self.trunc = trunc
        self.coeffs = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim, degree, trunc, coeffs, fiber=1) -> "Form":
        obj = object.__new__(cls)
        obj.dim = dim
        obj.fiber = fiber
        obj.degree = degree
        obj.trunc = trunc
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int, trunc: int, fiber: int = 1) -> "Form":
        return cls._raw(dim, degree, trunc, {}, fiber)

    @classmethod
    def function(cls, f: Series, fiber: int = 1, component: int = 0) -> "Form":
        return cls(f.dim, 0, f.trunc, {((), component): f}, fiber)

    @classmethod
    def basis(cls, dim: int, trunc: int, index_set: Sequence[int], coeff=1, fiber: int = 1,
              component: int = 0) -> "Form":
        """coeff * dx_{index_set}; unsorted index sets are reordered with sign."""
        index_set = tuple(index_set)
        ordered = tuple(sorted(index_set))
        if len(set(index_set)) != len(index_set):
            return cls.zero(dim, len(index_set), trunc, fiber)
        sign = _perm_sign(index_set)
        if not isinstance(coeff, Series):
            coeff = Series.const(dim, trunc, coeff)
        return cls(dim, len(index_set), trunc, {(ordered, component): coeff.scale(sign)}, fiber)

    @classmethod
    def from_components(cls, components: Sequence["Form"]) -> "Form":
        """Stack scalar forms into a Q^m-valued form."""
        if not components:
            raise ValueError("need at least one component")
        first = components[0]
        out: Dict[Key, Series] = {}
        for a, comp in enumerate(components):
            _same_shape(first, comp, degree=True)
            if comp.fiber != 1:
                raise FiberMismatch("components must be scalar forms")
            for (index_set, _), s in comp.coeffs.items():
                out[(index_set, a)] = s
        return cls._raw(first.dim, first.degree, first.trunc, out, len(components))

    # queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def component(self, a: int) -> "Form":
        return Form._raw(
            self.dim, self.degree, self.trunc,
            {(i, 0): s for (i, b), s in self.coeffs.items() if b == a}, 1,
        )

    def components(self) -> List["Form"]:
        return [self.component(a) for a in range(self.fiber)]

    def coefficient(self, index_set: Sequence[int], component: int = 0) -> Series:
        return self.coeffs.get((tuple(index_set), component), Series.zero(self.dim, self.trunc))

    def min_degree(self) -> int | None:
        """Smallest total degree among all coefficient monomials (None for the zero form)."""
        return min((s.min_degree() for s in self.coeffs.values()), default=None)

    def max_degree(self) -> int | None:
        return max((s.max_degree() for s in self.coeffs.values()), default=None)

    def term_count(self) -> int:
        return sum(len(s) for s in self.coeffs.values())

    def terms(self):
        """Yield (index_set, fiber, monomial, value) in canonical order."""
        for key in sorted(self.coeffs):
            for mono, c in self.coeffs[key]:
                yield key[0], key[1], mono, c

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and self.trunc == other.trunc
            and self.fiber == other.fiber
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.dim, self.degree, self.trunc, self.fiber, frozenset(self.coeffs.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"Form(deg={self.degree}, dim={self.dim}, fiber={self.fiber}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.coeffs:
            return "0"
        names = names or default_names(self.dim)
        parts = []
        for (index_set, a), s in sorted(self.coeffs.items()):
            basis = "^".join("d" + names[i] for i in index_set)
            coeff = s.to_str(names)
            body = f"({coeff})" if len(s) > 1 else coeff
            if basis:
                body = basis if body == "1" else f"{body}*{basis}"
            if self.fiber > 1:
                body += f"[{a + 1}]"
            parts.append(body)
        return " + ".join(parts)

    # linear structure ---------------------------------------------------------

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        _same_shape(self, other, degree=True, fiber=True)
        if not other.coeffs:
            return self
        out = dict(self.coeffs)
        for k, s in other.coeffs.items():
            if k in out:
                v = out[k] + s
                if v:
                    out[k] = v
                else:
                    del out[k]
            else:
                out[k] = s
        return Form._raw(self.dim, self.degree, self.trunc, out, self.fiber)

    def __neg__(self) -> "Form":
        return Form._raw(
            self.dim, self.degree, self.trunc, {k: -s for k, s in self.coeffs.items()}, self.fiber
        )

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "Form":
        """Multiply by a rational number or by a function (Series)."""
        if isinstance(factor, Series):
            if factor.dim != self.dim or factor.trunc != self.trunc:
                raise DimensionMismatch("scaling series does not match the form")
            out = {}
            for k, s in self.coeffs.items():
                v = factor * s
                if v:
                    out[k] = v
            return Form._raw(self.dim, self.degree, self.trunc, out, self.fiber)
        factor = as_rational(factor)
        if not factor:
            return Form.zero(self.dim, self.degree, self.trunc, self.fiber)
        return Form._raw(
            self.dim, self.degree, self.trunc,
            {k: s.scale(factor) for k, s in self.coeffs.items()}, self.fiber,
        )

    def __mul__(self, factor) -> "Form":
        if isinstance(factor, (int, Fraction, Series)):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    def map_coeffs(self, fn) -> "Form":
        out = {}
        for k, s in self.coeffs.items():
            v = fn(s)
            if v:
                out[k] = v
        trunc = next(iter(out.values())).trunc if out else self.trunc
        return Form._raw(self.dim, self.degree, trunc, out, self.fiber)

    def truncate(self, new_trunc: int) -> "Form":
        out = {}
        for k, s in self.coeffs.items():
            v = s.truncate(new_trunc)
            if v:
                out[k] = v
        return Form._raw(self.dim, self.degree, new_trunc, out, self.fiber)

    def shift(self, offset: Sequence) -> "Form":
        """Substitute x -> x + offset in every coefficient."""
        if not any(offset):
            return self
        return self.map_coeffs(lambda s: s.shift(offset))

    def homogeneous_part(self, degree: int) -> "Form":
        return self.map_coeffs(lambda s: s.homogeneous_part(degree))

    def eval_exact(self, point) -> Dict[Key, Fraction]:
        return {k: s.eval_exact(point) for k, s in self.coeffs.items()}


def _same_shape(a: Form, b: Form, degree: bool = False, fiber: bool = False) -> None:
    if a.dim != b.dim or a.trunc != b.trunc:
        raise DimensionMismatch(f"form mismatch: dim {a.dim}/{b.dim}, trunc {a.trunc}/{b.trunc}")
    if degree and a.degree != b.degree:
        raise DegreeError(f"form degrees differ: {a.degree} vs {b.degree}")
    if fiber and a.fiber != b.fiber:
        raise FiberMismatch(f"fiber dimensions differ: {a.fiber} vs {b.fiber}")


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


# -- exterior algebra ----------------------------------------------------------


def wedge(alpha: Form, beta: Form) -> Form:
    """Exterior product; at least one factor has to be scalar valued."""
    _same_shape(alpha, beta)
    if alpha.fiber > 1 and beta.fiber > 1:
        raise FiberMismatch("wedge of two vector-valued forms is undefined")
    fiber = max(alpha.fiber, beta.fiber)
    degree = alpha.degree + beta.degree
    out: Dict[Key, Series] = {}
    if degree <= alpha.dim:
        for (ia, a), sa in alpha.coeffs.items():
            for (ib, b), sb in beta.coeffs.items():
                sign, merged = merge_sign(ia, ib)
                if not sign:
                    continue
                prod = sa * sb
                if not prod:
                    continue
                if sign < 0:
                    prod = -prod
                key = (merged, max(a, b))
                if key in out:
                    prod = out[key] + prod
                    if not prod:
                        del out[key]
                        continue
                out[key] = prod
    return Form._raw(alpha.dim, degree, alpha.trunc, out, fiber)


class PolyVectorField:
    """Vector field sum_i X^i d/dx_i with series components."""

    __slots__ = ("dim", "trunc", "components")

    def __init__(self, components: Sequence[Series]):
        components = tuple(components)
        if not components:
            raise DimensionMismatch("a vector field needs at least one component")
        dim, trunc = components[0].dim, components[0].trunc
        for c in components:
            if c.dim != dim or c.trunc != trunc:
                raise DimensionMismatch("vector field components disagree in dim/trunc")
        if len(components) != dim:
            raise DimensionMismatch(f"expected {dim} components, got {len(components)}")
        self.dim = dim
        self.trunc = trunc
        self.components = components

    @classmethod
    def zero(cls, dim: int, trunc: int) -> "PolyVectorField":
        return cls([Series.zero(dim, trunc)] * dim)

    @classmethod
    def euler(cls, dim: int, trunc: int, center: Sequence | None = None) -> "PolyVectorField":
        """The radial field (x - x0)^i d/dx_i."""
        center = center or [0] * dim
        return cls([Series.var(dim, trunc, i) - as_rational(center[i]) for i in range(dim)])

    @classmethod
    def coordinate(cls, dim: int, trunc: int, i: int) -> "PolyVectorField":
        return cls([Series.const(dim, trunc, 1 if j == i else 0) for j in range(dim)])

    def is_zero(self) -> bool:
        return not any(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __repr__(self) -> str:
        names = default_names(self.dim)
        parts = [f"({c.to_str(names)})*d/d{n}" for c, n in zip(self.components, names) if c]
        return "PolyVectorField(" + (" + ".join(parts) or "0") + ")"


def interior(X: PolyVectorField, phi: Form) -> Form:
    """Contraction X -| phi, an antiderivation of degree -1."""
    if X.dim != phi.dim or X.trunc != phi.trunc:
        raise DimensionMismatch("vector field and form disagree in dim/trunc")
    if phi.degree == 0:
        return Form.zero(phi.dim, 0, phi.trunc, phi.fiber)
    out: Dict[Key, Series] = {}
    for (index_set, a), s in phi.coeffs.items():
        for j, i in enumerate(index_set):
            comp = X.components[i]
            if not comp:
                continue
            v = comp * s
            if not v:
                continue
            if j % 2:
                v = -v
            key = (index_set[:j] + index_set[j + 1:], a)
            if key in out:
                v = out[key] + v
                if not v:
                    del out[key]
                    continue
            out[key] = v
    return Form._raw(phi.dim, phi.degree - 1, phi.trunc, out, phi.fiber)


def sharp(alpha: Form) -> PolyVectorField:
    """Raise the index of a scalar one-form with the identity metric."""
    if alpha.degree != 1:
        raise DegreeError("sharp is defined on one-forms only")
    if alpha.fiber != 1:
        raise FiberMismatch("sharp expects a scalar one-form")
    return PolyVectorField([alpha.coefficient((i,)) for i in range(alpha.dim)])


def flat(X: PolyVectorField) -> Form:
    return Form(X.dim, 1, X.trunc, {((i,), 0): c for i, c in enumerate(X.components)})


def hodge_star(phi: Form) -> Form:
    n = phi.dim
    out = {}
    for (index_set, a), s in phi.coeffs.items():
        sign, rest = complement(n, index_set)
        out[(rest, a)] = s if sign > 0 else -s
    return Form._raw(n, n - phi.degree, phi.trunc, out, phi.fiber)


def star_inverse(phi: Form) -> Form:
    """Inverse Hodge star: on a j-form it equals (-1)^(j(n-j)) times the star."""
    j, n = phi.degree, phi.dim
    starred = hodge_star(phi)
    return -starred if (j * (n - j)) % 2 else starred


def eta(phi: Form) -> Form:
    """Degree involution: multiply a k-form by (-1)^k."""
    return -phi if phi.degree % 2 else phi


# -- matrix valued forms --------------------------------------------------------


class MatrixForm:
    """m x m matrix of scalar forms of a common degree (End(Q^m)-valued form)."""

    __slots__ = ("dim", "fiber", "degree", "trunc", "entries")

    def __init__(self, entries: Sequence[Sequence[Form]]):
        rows = tuple(tuple(r) for r in entries)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise FiberMismatch("matrix form must be a non-empty square array")
        first = rows[0][0]
        for r in rows:
            for e in r:
                _same_shape(first, e, degree=True)
                if e.fiber != 1:
                    raise FiberMismatch("matrix entries must be scalar forms")
        self.dim = first.dim
        self.trunc = first.trunc
        self.degree = first.degree
        self.fiber = m
        self.entries = rows
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def zero(cls, dim: int, degree: int, trunc: int, fiber: int = 1):
        z = Form.zero(dim, degree, trunc)
        return cls([[z] * fiber for _ in range(fiber)])

    @classmethod
    def scalar(cls, form: Form, fiber: int = 1):
        """form * identity matrix."""
        z = Form.zero(form.dim, form.degree, form.trunc)
        return cls([[form if i == j else z for j in range(fiber)] for i in range(fiber)])

    def __getitem__(self, ij) -> Form:
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "MatrixForm"):
        return type(self)([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "MatrixForm"):
        return type(self)([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return type(self)([[-a for a in r] for r in self.entries])

    def map_entries(self, fn) -> "MatrixForm":
        rows = [[fn(e) for e in r] for r in self.entries]
        if rows[0][0].degree == 1:
            return Connection(rows)
        return MatrixForm(rows)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[[e.to_str() for e in r] for r in self.entries]})"


class Connection(MatrixForm):
    """Matrix of one-forms A, acting on vector-valued forms by A ^ _."""

    def _validate(self) -> None:
        if self.degree != 1:
            raise DegreeError("connection entries must be one-forms")

    @classmethod
    def zero(cls, dim: int, trunc: int, fiber: int = 1) -> "Connection":
        z = Form.zero(dim, 1, trunc)
        return cls([[z] * fiber for _ in range(fiber)])

    @classmethod
    def scalar(cls, form: Form, fiber: int = 1) -> "Connection":
        z = Form.zero(form.dim, 1, form.trunc)
        return cls([[form if i == j else z for j in range(fiber)] for i in range(fiber)])


def matrix_wedge(M: MatrixForm, phi: Form) -> Form:
    """(M ^ phi)^a = sum_b M^a_b ^ phi^b."""
    if M.fiber != phi.fiber:
        raise DimensionMismatch(f"matrix acts on fiber {M.fiber}, form has fiber {phi.fiber}")
    if M.dim != phi.dim or M.trunc != phi.trunc:
        raise DimensionMismatch("matrix form and form disagree in dim/trunc")
    m = M.fiber
    comps = phi.components() if m > 1 else [phi]
    rows = []
    for a in range(m):
        acc = Form.zero(phi.dim, M.degree + phi.degree, phi.trunc)
        for b in range(m):
            if M.entries[a][b].coeffs and comps[b].coeffs:
                acc = acc + wedge(M.entries[a][b], comps[b])
        rows.append(acc)
    return rows[0] if m == 1 else Form.from_components(rows)


def conn_wedge(A: MatrixForm, phi: Form) -> Form:
    """A ^ phi for a connection acting on a vector-valued form."""
    return matrix_wedge(A, phi)


def matrix_matrix_wedge(M: MatrixForm, N: MatrixForm) -> MatrixForm:
    """(M ^ N)^a_c = sum_b M^a_b ^ N^b_c."""
    if M.fiber != N.fiber:
        raise FiberMismatch("matrix sizes differ")
    m = M.fiber
    degree = M.degree + N.degree
    rows = []
    for a in range(m):
        row = []
        for c in range(m):
            acc = Form.zero(M.dim, degree, M.trunc)
            for b in range(m):
                if M.entries[a][b].coeffs and N.entries[b][c].coeffs:
                    acc = acc + wedge(M.entries[a][b], N.entries[b][c])
            row.append(acc)
        rows.append(row)
    return Connection(rows) if degree == 1 else MatrixForm(rows)


def conn_interior(A: MatrixForm, phi: Form) -> Form:
    """A^sharp -| phi: (A^sharp -| phi)^a = sum_b (A^a_b)^sharp -| phi^b."""
    if A.degree != 1:
        raise DegreeError("only one-form matrices can be raised to vector fields")
    if A.fiber != phi.fiber:
        raise DimensionMismatch(f"matrix acts on fiber {A.fiber}, form has fiber {phi.fiber}")
    m = A.fiber
    comps = phi.components() if m > 1 else [phi]
    out_degree = max(phi.degree - 1, 0)
    rows = []
    for a in range(m):
        acc = Form.zero(phi.dim, out_degree, phi.trunc)
        for b in range(m):
            if A.entries[a][b].coeffs and comps[b].coeffs:
                acc = acc + interior(sharp(A.entries[a][b]), comps[b])
        rows.append(acc)
    return rows[0] if m == 1 else Form.from_components(rows)


# -- matrices of series and gauge elements ----------------------------------------


SeriesMatrix = Tuple[Tuple[Series, ...], ...]


def series_identity(dim: int, trunc: int, m: int) -> SeriesMatrix:
    one, zero = Series.one(dim, trunc), Series.zero(dim, trunc)
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def series_matmul(P: Sequence[Sequence[Series]], Q: Sequence[Sequence[Series]]) -> SeriesMatrix:
    m = len(P)
    dim, trunc = P[0][0].dim, P[0][0].trunc
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = Series.zero(dim, trunc)
            for k in range(m):
                if P[i][k] and Q[k][j]:
                    acc = acc + P[i][k] * Q[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _rational_inverse(M: List[List[Fraction]]) -> List[List[Fraction]]:
    m = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(M)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col]), None)
        if pivot is None:
            raise SingularGauge("constant part of the gauge matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def series_matrix_inverse(P: Sequence[Sequence[Series]]) -> SeriesMatrix:
    """Inverse of a matrix of series with invertible constant part (Neumann expansion)."""
    m = len(P)
    dim, trunc = P[0][0].dim, P[0][0].trunc
    c0 = [[P[i][j].constant_term() for j in range(m)] for i in range(m)]
    inv0 = _rational_inverse(c0)
    inv0_s = tuple(tuple(Series.const(dim, trunc, v) for v in row) for row in inv0)
    # P = P0 (I + N) with N nilpotent in the truncated ring
    N = series_matmul(inv0_s, [[P[i][j] - c0[i][j] for j in range(m)] for i in range(m)])
    ident = series_identity(dim, trunc, m)
    total = ident
    power = ident
    for _ in range(trunc):
        power = series_matmul(power, N)
        power = tuple(tuple(-s for s in row) for row in power)
        if not any(s for row in power for s in row):
            break
        total = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(total, power))
    return series_matmul(total, inv0_s)


class GaugeElement:
    """Invertible m x m matrix of functions together with its inverse."""

    __slots__ = ("dim", "trunc", "fiber", "entries", "inverse")

    def __init__(self, entries: Sequence[Sequence[Series]], inverse: Sequence[Sequence[Series]] | None = None):
        entries = tuple(tuple(r) for r in entries)
        m = len(entries)
        if m == 0 or any(len(r) != m for r in entries):
            raise FiberMismatch("gauge element must be a square matrix")
        self.dim, self.trunc = entries[0][0].dim, entries[0][0].trunc
        self.fiber = m
        self.entries = entries
        if inverse is None:
            inverse = series_matrix_inverse(entries)
        self.inverse = tuple(tuple(r) for r in inverse)
        if series_matmul(self.entries, self.inverse) != series_identity(self.dim, self.trunc, m):
            raise SingularGauge("entries times inverse is not the identity at this truncation")

    @classmethod
    def scalar_exp(cls, lam: Series) -> "GaugeElement":
        from .coeff import series_exp

        return cls([[series_exp(lam)]], [[series_exp(-lam)]])

    def __repr__(self) -> str:
        return f"GaugeElement({[[s.to_str() for s in r] for r in self.entries]})"


def series_matrix_times_form(P: Sequence[Sequence[Series]], phi: Form) -> Form:
    m = len(P)
    if m != phi.fiber:
        raise DimensionMismatch("matrix size differs from fiber dimension")
    comps = phi.components() if m > 1 else [phi]
    rows = []
    for a in range(m):
        acc = Form.zero(phi.dim, phi.degree, phi.trunc)
        for b in range(m):
            if P[a][b] and comps[b].coeffs:
                acc = acc + comps[b].scale(P[a][b])
        rows.append(acc)
    return rows[0] if m == 1 else Form.from_components(rows)


def scalar_form_terms(form: Form) -> Iterable[Tuple[IndexSet, MultiIndex, Fraction]]:
    for (index_set, _), s in form.coeffs.items():
        for mono, c in s.terms.items():
            yield index_set, mono, c
