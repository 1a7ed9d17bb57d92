import numpy as np
from hypothesis import given, settings, strategies as st

from koppelman.poly import Polynomial, divided_differences


def test_parse_and_evaluate():
    h = Polynomial.parse("z1^2 - z2^3", 2)
    w = np.array([[1.0 + 1j], [0.5]])
    assert np.allclose(h(w), (1 + 1j) ** 2 - 0.125)
    assert h.degree() == 3


def test_gradient():
    h = Polynomial.parse("z1^2 - z2^3", 2)
    g = h.gradient()
    w = np.array([[1.0], [1.0]])
    assert np.allclose([g[0](w), g[1](w)], [[2.0], [-3.0]])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
def test_divided_differences_telescoping(p):
    h = Polynomial.parse("z1^3*z2 + 2*z2^2 - z1", 2)
    dd = divided_differences(h)
    zeta = np.array([[p[0]], [p[1]]])
    z = np.array([[p[2]], [p[3]]])
    w = np.concatenate([zeta, z])
    lhs = sum(dd[j](w) * (zeta[j] - z[j]) for j in range(2))
    assert np.allclose(lhs, h(zeta) - h(z), atol=1e-9)
