"""Exact truncated multivariate power series over the rationals.

A :class:`Series` stores the Taylor data of a function on R^n up to a fixed
total degree ``trunc``.  Monomials are exponent tuples; coefficients are
:class:`fractions.Fraction`.  Zero coefficients are never stored, so two
series are equal exactly when their term dictionaries are equal.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .errors import DimensionMismatch, NonNilpotentArgument

Rational = Fraction
MultiIndex = Tuple[int, ...]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not exact; pass a Fraction or int")
    return Fraction(value)


def total_degree(mono: MultiIndex) -> int:
    return sum(mono)


def monomials(dim: int, max_degree: int, min_degree: int = 0) -> Iterator[MultiIndex]:
    """All exponent tuples of length ``dim`` with total degree in [min_degree, max_degree]."""
    for deg in range(min_degree, max_degree + 1):
        for combo in combinations_with_replacement(range(dim), deg):
            mono = [0] * dim
            for i in combo:
                mono[i] += 1
            yield tuple(mono)


class Series:
    """Truncated power series in ``dim`` variables, exact up to total degree ``trunc``.

    Instances are immutable; every arithmetic operation returns a new object.
    """

    __slots__ = ("dim", "trunc", "terms", "_hash")

    def __init__(self, dim: int, trunc: int, terms: Mapping[Sequence[int], object] | None = None):
        if dim < 0 or trunc < 0:
            raise ValueError("dim and trunc must be non-negative")
        clean: Dict[MultiIndex, Fraction] = {}
        for mono, value in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != dim:
                raise DimensionMismatch(f"monomial {mono} has length {len(mono)}, expected {dim}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if sum(mono) > trunc:
                continue
            value = as_rational(value)
            if value:
                clean[mono] = clean.get(mono, Fraction(0)) + value
                if not clean[mono]:
                    del clean[mono]
        self.dim = dim
        self.trunc = trunc
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, trunc: int, terms: Dict[MultiIndex, Fraction]) -> "Series":
        # caller guarantees the invariants
        obj = object.__new__(cls)
        obj.dim = dim
        obj.trunc = trunc
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, trunc: int) -> "Series":
        return cls._raw(dim, trunc, {})

    @classmethod
    def const(cls, dim: int, trunc: int, value) -> "Series":
        value = as_rational(value)
        return cls._raw(dim, trunc, {(0,) * dim: value} if value else {})

    @classmethod
    def one(cls, dim: int, trunc: int) -> "Series":
        return cls.const(dim, trunc, 1)

    @classmethod
    def var(cls, dim: int, trunc: int, i: int) -> "Series":
        """The coordinate function x_i (0-based)."""
        if not 0 <= i < dim:
            raise DimensionMismatch(f"variable index {i} out of range for dim {dim}")
        mono = tuple(1 if j == i else 0 for j in range(dim))
        return cls(dim, trunc, {mono: 1})

    @classmethod
    def monomial(cls, dim: int, trunc: int, mono: Sequence[int], coeff=1) -> "Series":
        return cls(dim, trunc, {tuple(mono): coeff})

    # basic queries --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=_mono_order))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def min_degree(self) -> int | None:
        return min((sum(m) for m in self.terms), default=None)

    def max_degree(self) -> int | None:
        return max((sum(m) for m in self.terms), default=None)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self.dim == other.dim and self.trunc == other.trunc and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Series.const(self.dim, self.trunc, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, self.trunc, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Series(dim={self.dim}, trunc={self.trunc}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or default_names(self.dim)
        out = []
        for mono, c in self:
            mono_s = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e
            )
            if not mono_s:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono_s
            else:
                body = f"{abs(c)}*{mono_s}"
            out.append(("-" if c < 0 else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    # arithmetic ------------------------------------------------------------

    def _check(self, other: "Series") -> None:
        if self.dim != other.dim or self.trunc != other.trunc:
            raise DimensionMismatch(
                f"series mismatch: dim {self.dim}/{other.dim}, trunc {self.trunc}/{other.trunc}"
            )

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Series.const(self.dim, self.trunc, other)
        raise TypeError(f"cannot combine Series with {type(other).__name__}")

    def __add__(self, other) -> "Series":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Series._raw(self.dim, self.trunc, out)

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series._raw(self.dim, self.trunc, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Series":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Series":
        return (-self) + other

    def scale(self, factor) -> "Series":
        factor = as_rational(factor)
        if not factor:
            return Series.zero(self.dim, self.trunc)
        return Series._raw(self.dim, self.trunc, {m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other) -> "Series":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        out: Dict[MultiIndex, Fraction] = {}
        n = self.trunc
        b_items = sorted(other.terms.items(), key=lambda mc: sum(mc[0]))
        for ma, ca in self.terms.items():
            da = sum(ma)
            for mb, cb in b_items:
                if da + sum(mb) > n:
                    break
                m = tuple(p + q for p, q in zip(ma, mb))
                v = out.get(m, 0) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Series._raw(self.dim, self.trunc, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Series":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Series.one(self.dim, self.trunc)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # calculus ---------------------------------------------------------------

    def deriv(self, i: int) -> "Series":
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Series._raw(self.dim, self.trunc, out)

    def truncate(self, new_trunc: int) -> "Series":
        """Drop every term above ``new_trunc`` and relabel the truncation order."""
        return Series._raw(
            self.dim, new_trunc, {m: c for m, c in self.terms.items() if sum(m) <= new_trunc}
        )

    def with_trunc(self, new_trunc: int) -> "Series":
        return self.truncate(new_trunc)

    def homogeneous_part(self, degree: int) -> "Series":
        return Series._raw(
            self.dim, self.trunc, {m: c for m, c in self.terms.items() if sum(m) == degree}
        )

    def shift(self, offset: Sequence) -> "Series":
        """Substitute x -> x + offset.  Total degree never grows, so this is exact."""
        offset = [as_rational(o) for o in offset]
        if len(offset) != self.dim:
            raise DimensionMismatch("offset length differs from series dimension")
        if not any(offset):
            return self
        out: Dict[MultiIndex, Fraction] = {}
        for mono, c in self.terms.items():
            partial = {(): c}
            for e, a in zip(mono, offset):
                nxt = {}
                for head, v in partial.items():
                    if not a:
                        nxt[head + (e,)] = v
                        continue
                    for j in range(e + 1):
                        key = head + (j,)
                        nxt[key] = nxt.get(key, 0) + v * comb(e, j) * a ** (e - j)
                partial = nxt
            for m, v in partial.items():
                out[m] = out.get(m, 0) + v
        return Series(self.dim, self.trunc, out)

    def eval_exact(self, point: Sequence) -> Fraction:
        point = [as_rational(p) for p in point]
        if len(point) != self.dim:
            raise DimensionMismatch("point length differs from series dimension")
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for p, e in zip(point, m):
                if e:
                    v *= p ** e
            total += v
        return total


def _mono_order(item):
    mono = item[0]
    return (sum(mono), tuple(-e for e in mono))


def default_names(dim: int) -> list:
    if dim <= 3:
        return ["x", "y", "z"][:dim]
    return [f"x{i + 1}" for i in range(dim)]


def series_arith(a: Series, b, op: str) -> Series:
    """Ring operation by name: ``add``, ``mul``, ``scale`` (b a rational) or ``negate``."""
    if op == "add":
        return a + _same_shape(a, b)
    if op == "mul":
        return a * _same_shape(a, b)
    if op == "scale":
        return a.scale(b)
    if op == "negate":
        return -a
    raise ValueError(f"unknown series operation {op!r}")


def _same_shape(a: Series, b) -> Series:
    if not isinstance(b, Series):
        raise TypeError("second operand must be a Series")
    if a.dim != b.dim or a.trunc != b.trunc:
        raise DimensionMismatch(
            f"series mismatch: dim {a.dim}/{b.dim}, trunc {a.trunc}/{b.trunc}"
        )
    return b


def series_exp(a: Series) -> Series:
    """exp(a) for a series without constant term, truncated at ``a.trunc``."""
    if a.constant_term():
        raise NonNilpotentArgument("exp needs an argument with zero constant term")
    result = Series.one(a.dim, a.trunc)
    power = Series.one(a.dim, a.trunc)
    for j in range(1, a.trunc + 1):
        power = power * a
        if not power:
            break
        result = result + power.scale(Fraction(1, factorial(j)))
    return result


def series_eval(a: Series, point: Sequence[float]) -> float:
    """Floating point value of the stored polynomial (nested Horner scheme)."""
    if len(point) != a.dim:
        raise DimensionMismatch("point length differs from series dimension")
    if not a.terms:
        return 0.0
    return _horner(list(a.terms.items()), [float(p) for p in point], 0)


def _horner(items, point, var) -> float:
    if var == len(point):
        return float(sum(c for _, c in items))
    groups: Dict[int, list] = {}
    for m, c in items:
        groups.setdefault(m[var], []).append((m, c))
    top = max(groups)
    x = point[var]
    acc = 0.0
    for e in range(top, -1, -1):
        acc *= x
        if e in groups:
            acc += _horner(groups[e], point, var + 1)
    return acc


def polynomial(dim: int, trunc: int, terms: Iterable[Tuple[Sequence[int], object]]) -> Series:
    """Build a series from (monomial, coefficient) pairs, summing repeats."""
    acc: Dict[MultiIndex, Fraction] = {}
    for mono, c in terms:
        mono = tuple(mono)
        acc[mono] = acc.get(mono, Fraction(0)) + as_rational(c)
    return Series(dim, trunc, acc)
