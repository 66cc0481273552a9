"""Exact sparse linear systems over Q.

Rows are kept as integer dictionaries (scaled to clear denominators and divided
by their content), so the elimination never builds nested fractions.  Pivots
are chosen Markowitz style: the shortest remaining row, then its least
populated column.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Hashable, List, Mapping, Sequence

from .errors import Inconsistent


class SparseSystem:
    """Rows of ``sum_j a_ij x_j = b_i`` over an explicitly declared column set."""

    def __init__(self, columns: Sequence[Hashable]):
        self.columns: List[Hashable] = list(columns)
        self.col_index: Dict[Hashable, int] = {c: i for i, c in enumerate(self.columns)}
        if len(self.col_index) != len(self.columns):
            raise ValueError("duplicate column coordinates")
        self.rows: List[Dict[int, Fraction]] = []
        self.rhs: List[Fraction] = []

    def add_row(self, entries: Mapping[Hashable, object], rhs=0) -> None:
        row: Dict[int, Fraction] = {}
        for coord, v in entries.items():
            if coord not in self.col_index:
                raise KeyError(f"unknown column {coord!r}")
            v = Fraction(v)
            if v:
                j = self.col_index[coord]
                row[j] = row.get(j, Fraction(0)) + v
                if not row[j]:
                    del row[j]
        rhs = Fraction(rhs)
        if row or rhs:
            self.rows.append(row)
            self.rhs.append(rhs)

    @property
    def shape(self):
        return len(self.rows), len(self.columns)


@dataclass
class Solution:
    particular: Dict[Hashable, Fraction]
    kernel: List[Dict[Hashable, Fraction]] = field(default_factory=list)
    rank: int = 0


def _integer_row(row: Mapping[int, Fraction], rhs: Fraction):
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    den = lcm(den, rhs.denominator)
    irow = {j: int(v * den) for j, v in row.items()}
    return _reduce(irow, int(rhs * den))


def _reduce(irow: Dict[int, int], rhs: int):
    g = abs(rhs)
    for v in irow.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        irow = {j: v // g for j, v in irow.items()}
        rhs //= g
    return irow, rhs


def solve_sparse(system: SparseSystem) -> Solution:
    """Particular solution (free variables zero) plus a kernel basis.

    Raises :class:`Inconsistent` when the system has no solution; the
    exception carries the particular solution of the consistent pivot rows.
    """
    rows: Dict[int, Dict[int, int]] = {}
    rhs: Dict[int, int] = {}
    col_rows: Dict[int, set] = {}
    for r, (row, b) in enumerate(zip(system.rows, system.rhs)):
        irow, ib = _integer_row(row, b)
        rows[r], rhs[r] = irow, ib
        for j in irow:
            col_rows.setdefault(j, set()).add(r)

    pivots: Dict[int, int] = {}  # row -> pivot column
    conflicts: List[int] = []
    active = set(rows)
    while True:
        # drop empty rows, recording contradictions
        for r in [r for r in active if not rows[r]]:
            active.discard(r)
            if rhs[r]:
                conflicts.append(r)
        if not active:
            break
        pr = min(active, key=lambda r: (len(rows[r]), r))
        prow = rows[pr]
        pc = min(prow, key=lambda j: (len(col_rows[j]), j))
        active.discard(pr)
        pivots[pr] = pc
        a = prow[pc]
        for r in list(col_rows[pc]):
            if r == pr:
                continue
            row = rows[r]
            f = row[pc]
            # row <- a*row - f*prow, then strip content
            new = {j: a * v for j, v in row.items()}
            for j, v in prow.items():
                nv = new.get(j, 0) - f * v
                if nv:
                    new[j] = nv
                else:
                    new.pop(j, None)
            nb = a * rhs[r] - f * rhs[pr]
            new, nb = _reduce(new, nb)
            for j in row:
                if j not in new:
                    col_rows[j].discard(r)
            for j in new:
                if j not in row:
                    col_rows.setdefault(j, set()).add(r)
            rows[r], rhs[r] = new, nb

    cols = system.columns
    pivot_cols = set(pivots.values())
    particular: Dict[Hashable, Fraction] = {}
    for r, pc in pivots.items():
        v = Fraction(rhs[r], rows[r][pc])
        if v:
            particular[cols[pc]] = v
    if conflicts:
        raise Inconsistent(
            f"{len(conflicts)} equation(s) cannot be satisfied",
            partial=particular,
            conflicts=conflicts,
        )
    kernel = []
    for f in range(len(cols)):
        if f in pivot_cols:
            continue
        vec = {cols[f]: Fraction(1)}
        for r in col_rows.get(f, ()):
            if r in pivots:
                pc = pivots[r]
                vec[cols[pc]] = Fraction(-rows[r][f], rows[r][pc])
        kernel.append(vec)
    return Solution(particular, kernel, len(pivots))


def apply(system: SparseSystem, x: Mapping[Hashable, Fraction]) -> List[Fraction]:
    """Evaluate the left-hand sides of every row at ``x``."""
    out = []
    for row in system.rows:
        out.append(sum((v * x.get(system.columns[j], 0) for j, v in row.items()), Fraction(0)))
    return out
