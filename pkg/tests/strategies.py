import math

from hypothesis import assume
from hypothesis import strategies as st

from cotsum import ReducedFraction


@st.composite
def unit_fractions(draw, q_max=2000, q_min=2):
    """Reduced a/q with 0 < a < q."""
    q = draw(st.integers(q_min, q_max))
    a = draw(st.integers(1, q - 1))
    assume(math.gcd(a, q) == 1)
    return ReducedFraction(a, q)
