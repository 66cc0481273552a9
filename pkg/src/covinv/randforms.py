"""Seeded pseudo-random polynomial forms and connections for property checks."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .coeff import Series, monomials
from .forms import Connection, Form, index_sets


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    num = rng.randint(-bound, bound)
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, 3))


def random_series(rng: random.Random, dim: int, trunc: int, max_degree: Optional[int] = None,
                  n_terms: int = 4, min_degree: int = 0) -> Series:
    max_degree = trunc if max_degree is None else min(max_degree, trunc)
    if max_degree < min_degree:
        return Series.zero(dim, trunc)
    pool = list(monomials(dim, max_degree, min_degree))
    picks = rng.sample(pool, min(n_terms, len(pool)))
    return Series(dim, trunc, {m: random_rational(rng) for m in picks})


def random_form(rng: random.Random, dim: int, degree: int, trunc: int, fiber: int = 1,
                max_degree: Optional[int] = None, density: float = 0.7, n_terms: int = 3,
                min_degree: int = 0) -> Form:
    """Random form; coefficients default to degree <= trunc - 1 so d commutes with truncation."""
    if max_degree is None:
        max_degree = trunc - 1
    coeffs = {}
    for index_set in index_sets(dim, degree):
        for a in range(fiber):
            if rng.random() < density:
                s = random_series(rng, dim, trunc, max_degree, n_terms, min_degree)
                if s:
                    coeffs[(index_set, a)] = s
    return Form(dim, degree, trunc, coeffs, fiber)


def random_connection(rng: random.Random, dim: int, trunc: int, fiber: int = 1,
                      max_degree: int = 2, density: float = 0.6) -> Connection:
    rows = []
    for _ in range(fiber):
        rows.append([random_form(rng, dim, 1, trunc, 1, max_degree, density, 2)
                     for _ in range(fiber)])
    return Connection(rows)
