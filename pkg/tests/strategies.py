"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from dlkit.catalog import yoneda_family
from dlkit.enumeration import random_set_functor
from dlkit.fincat import preorder_category

FAMILY = yoneda_family()


@st.composite
def preorders(draw, max_elements=6):
    n = draw(st.integers(1, max_elements))
    elems = [f"p{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(elems), st.sampled_from(elems)), max_size=2 * n))
    return preorder_category(elems, pairs)


def small_categories():
    return st.sampled_from(FAMILY)


@st.composite
def set_functors(draw, category=None, max_size=3):
    C = category if category is not None else draw(small_categories())
    seed = draw(st.integers(0, 2**32 - 1))
    return random_set_functor(C, random.Random(seed), max_size=max_size)
