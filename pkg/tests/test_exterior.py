import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koppelman.errors import DimensionError
from koppelman.exterior import (BAR, ETA, TWO_PI_I, ExtForm, FormField, MultiBlade, contract_eta, dbar_fd,
                                deta, dzbar, dzetabar, interior, one_form, wedge)


def test_repeated_generator_vanishes():
    assert wedge(deta(0, 2), deta(0, 2)).is_zero()


def test_anticommutativity_of_generators():
    blade = MultiBlade.from_masks(eta=(0,), bar=(0,))
    assert wedge(deta(0, 1), dzetabar(0, 1)).coefficient(blade) == 1
    assert wedge(dzetabar(0, 1), deta(0, 1)).coefficient(blade) == -1


def test_wedge_expands_linearly():
    a = 2 * deta(0, 2) + dzetabar(1, 2)
    out = wedge(a, deta(1, 2))
    assert out.coefficient(MultiBlade.from_masks(eta=(0, 1))) == 2
    assert out.coefficient(MultiBlade.from_masks(eta=(1,), bar=(1,))) == -1
    assert len(out) == 2


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        wedge(deta(0, 1), deta(0, 2))


def test_contract_eta_examples():
    eta = [0.3 + 0.1j, -0.2j]
    c = contract_eta(eta, deta(1, 2))
    assert np.isclose(c.scalar_part(), TWO_PI_I * eta[1])
    assert contract_eta(eta, ExtForm.scalar(3.0, 2)).is_zero()
    two = contract_eta(eta, wedge(deta(0, 2), deta(1, 2)))
    expect = TWO_PI_I * (eta[0] * deta(1, 2) - eta[1] * deta(0, 2))
    assert two.allclose(expect)


def test_contraction_skips_non_eta_generators():
    f = wedge(deta(0, 1), dzbar(0, 1))
    assert interior([2.0], f).allclose(2.0 * dzbar(0, 1))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=6, max_size=6))
def test_wedge_of_one_forms_is_antisymmetric(c):
    a = one_form(c[:3], ETA, 3)
    b = one_form(c[3:], BAR, 3)
    assert wedge(a, b).allclose(-wedge(b, a), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=6, max_size=6))
def test_contraction_is_an_antiderivation(c):
    eta = [1.0 + 0.5j, -0.3j]
    a = one_form(c[:2], ETA, 2)
    b = one_form(c[2:4], ETA, 2) + one_form(c[4:], BAR, 2)
    lhs = interior(eta, wedge(a, b))
    rhs = wedge(interior(eta, a), b) - wedge(a, interior(eta, b))
    assert lhs.allclose(rhs, atol=1e-9)


def _scalar_field(fn):
    return FormField(lambda zeta, z: ExtForm.scalar(fn(zeta), 1), 1)


def test_dbar_fd_examples():
    at = (np.array([0.4 - 0.2j]), np.array([0.0j]))
    d = dbar_fd(_scalar_field(lambda w: np.conj(w[0])), at)
    assert np.isclose(d.coefficient(MultiBlade.from_masks(bar=(0,))), 1.0, atol=1e-8)
    d = dbar_fd(_scalar_field(lambda w: w[0] ** 2), at)
    assert d.max_abs() < 1e-8
    d = dbar_fd(_scalar_field(lambda w: np.abs(w[0]) ** 2), (np.array([1 + 1j]), np.array([0j])))
    # d|w|^2 / d w-bar = w
    assert np.isclose(d.coefficient(MultiBlade.from_masks(bar=(0,))), 1 + 1j, atol=1e-8)


def test_batched_coefficients_broadcast():
    w = np.linspace(0, 1, 5)
    f = one_form([w, 2 * w], ETA, 2)
    g = wedge(f, dzetabar(0, 2))
    assert np.allclose(g.coefficient(MultiBlade.from_masks(eta=(1,), bar=(0,))), 2 * w)
