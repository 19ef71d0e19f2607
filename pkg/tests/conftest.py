import os
import sys

from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def vectors(draw, dim):
    return tuple(draw(rationals) for _ in range(dim))


@st.composite
def piece_lists(draw, max_pieces=4, dims=(1, 2, 3)):
    d = draw(st.sampled_from(dims))
    m = draw(st.integers(0, max_pieces))
    return d, [draw(vectors(d)) for _ in range(m)]
