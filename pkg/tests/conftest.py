import os
import sys
from fractions import Fraction

import hypothesis
from hypothesis import strategies as st

from covinv.coeff import Series, monomials
from covinv.forms import Connection, Form, index_sets

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

sys.path.insert(0, os.path.dirname(__file__))

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)
nonzero_rationals = rationals.filter(bool)


@st.composite
def series(draw, dim, trunc, max_degree=None, min_degree=0, max_terms=4):
    top = trunc if max_degree is None else min(max_degree, trunc)
    pool = list(monomials(dim, top, min_degree)) if top >= min_degree else []
    if not pool:
        return Series.zero(dim, trunc)
    picks = draw(st.lists(st.sampled_from(pool), max_size=max_terms, unique=True))
    return Series(dim, trunc, {m: draw(nonzero_rationals) for m in picks})


@st.composite
def forms(draw, dim, degree, trunc, fiber=1, max_degree=None, max_terms=3):
    # coefficient degree <= trunc - 1 keeps d and truncation compatible
    top = trunc - 1 if max_degree is None else max_degree
    coeffs = {}
    for I in index_sets(dim, degree):
        for a in range(fiber):
            if draw(st.booleans()):
                coeffs[(I, a)] = draw(series(dim, trunc, top, max_terms=max_terms))
    return Form(dim, degree, trunc, coeffs, fiber)


@st.composite
def any_form(draw, dims=(2, 3), trunc=5, fibers=(1,)):
    n = draw(st.sampled_from(dims))
    k = draw(st.integers(0, n))
    m = draw(st.sampled_from(fibers))
    return draw(forms(n, k, trunc, m))


@st.composite
def connections(draw, dim, trunc, fiber=1, max_degree=2):
    return Connection([[draw(forms(dim, 1, trunc, 1, max_degree, 2)) for _ in range(fiber)]
                       for _ in range(fiber)])


@st.composite
def centers(draw, dim):
    return tuple(draw(st.fractions(min_value=-2, max_value=2, max_denominator=3)) for _ in range(dim))


def F(x):
    return Fraction(x)
