import hypothesis
from hypothesis import strategies as st

from baileykit.series import Monomial, TSeries, rat

hypothesis.settings.register_profile(
    "fast", max_examples=30, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("fast")

# Coefficients for random parameter monomials: values that never collide
# with a power of q, so Pochhammer denominators stay invertible.
SAFE_COEFFS = (rat(2), rat(3), rat(5, 2), rat(-2))


def monomials(min_texp=0, max_texp=8):
    return st.builds(
        Monomial,
        st.sampled_from(SAFE_COEFFS),
        st.integers(min_value=min_texp, max_value=max_texp),
    )


def series(order=24, min_exp=-6):
    def make(me, coeffs):
        return TSeries(me, coeffs, order)

    coeff = st.builds(
        rat,
        st.integers(min_value=-9, max_value=9),
        st.integers(min_value=1, max_value=4),
    )
    return st.builds(
        make,
        st.integers(min_value=min_exp, max_value=4),
        st.lists(coeff, min_size=0, max_size=10),
    )
