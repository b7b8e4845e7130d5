from fractions import Fraction

from hypothesis import strategies as st

from curvlie.exact import QSqrt3

small_ints = st.integers(min_value=-20, max_value=20)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=12))
nonzero_rationals = rationals.filter(bool)
qsqrt3 = st.builds(QSqrt3, rationals, rationals)
nonzero_qsqrt3 = qsqrt3.filter(lambda x: not x.is_zero())
