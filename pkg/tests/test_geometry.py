import numpy as np
import pytest

from koppelman.errors import SingularityError
from koppelman.exterior import TWO_PI_I
from koppelman.geometry import (DZ_DZBAR, Hypersurface, MonomialCurve, TestForm, ambient_omega, curve_pairing,
                                cusp_structure_form, gamma_hypersurface, hyperplane_structure_form,
                                lelong_curve, lelong_hyperplane, lelong_point, omega_blowup_exponent,
                                pullback_gamma_check)
from koppelman.kernels import Cutoff
from koppelman.laurent import LaurentPoly, parse_laurent
from koppelman.poly import Polynomial

BUMP = Cutoff(0.5, 0.9)


def bump_form(g, support=0.9):
    fn = lambda w: BUMP(np.atleast_2d(w)) * g(w)
    fn.breaks = BUMP.breaks
    return TestForm(fn, support)


def test_gamma_of_a_coordinate_hyperplane():
    X = Hypersurface(Polynomial.parse("z2", 2))
    p = np.array([[0.3 + 0.1j], [0.0]])
    g = gamma_hypersurface(X)(p)
    assert np.isclose(g[0], 0) and np.isclose(g[1], -TWO_PI_I)
    w = ambient_omega(X, p)
    assert np.isclose(w[0], -TWO_PI_I) and np.isclose(w[1], 0)
    assert hyperplane_structure_form()(0.4) == -TWO_PI_I


def test_gamma_of_cusp_at_one_one():
    X = Hypersurface(Polynomial.parse("z1^2 - z2^3", 2))
    g = gamma_hypersurface(X)(np.array([[1.0], [1.0]]))
    assert np.allclose([g[0][0], g[1][0]], [-TWO_PI_I * 2 / 13, -TWO_PI_I * -3 / 13])


def test_gamma_singular_at_origin():
    X = Hypersurface(Polynomial.parse("z1^2 - z2^3", 2))
    with pytest.raises(SingularityError):
        gamma_hypersurface(X)(np.zeros((2, 1)))


def test_singular_locus_of_cusp():
    X = MonomialCurve(2, 3).hypersurface()
    assert X.singular_locus() == [(0j, 0j)]
    assert Hypersurface(Polynomial.parse("z1 - z2^2", 2)).singular_locus() == []


@pytest.mark.parametrize("rs,c", [((2, 3), 2), ((2, 5), 4), ((3, 4), 6)])
def test_cusp_structure_form_pole(rs, c):
    om = cusp_structure_form(MonomialCurve(*rs))
    assert om.pole_order == c
    assert om.density == LaurentPoly.monomial(-c)
    assert np.isclose(om(0.5), TWO_PI_I * 0.5 ** -c)


@pytest.mark.parametrize("rs", [(2, 3), (3, 4), (2, 5), (3, 5)])
@pytest.mark.parametrize("radius", [0.25, 0.5, 0.9])
def test_pullback_gamma_agrees(rs, radius):
    rep = pullback_gamma_check(MonomialCurve(*rs), radius)
    assert rep.passed and rep.max_rel_deviation < 1e-8


@pytest.mark.parametrize("rs", [(2, 3), (3, 4)])
def test_blowup_rate_matches_conductor(rs):
    C = MonomialCurve(*rs)
    assert abs(omega_blowup_exponent(C) - C.conductor) < 1e-6


def test_tau_radius_inverts_norm():
    C = MonomialCurve(2, 3)
    t = C.tau_radius(0.5)
    assert np.isclose(np.linalg.norm(C.normalization(t)), 0.5)


@pytest.mark.parametrize("g,at0", [
    (lambda w: 1 + w + np.conj(w), 1.0),
    (lambda w: 2 + np.abs(w) ** 2, 2.0),
    (lambda w: np.conj(w) ** 2 * w + 3j, 3j),
])
def test_poincare_lelong_in_one_variable(g, at0):
    r = lelong_point(bump_form(g))
    assert abs(r.value - at0) < 1e-8


def test_lelong_needs_compact_support():
    with pytest.raises(ValueError):
        lelong_point(TestForm(lambda w: 1 + 0 * w, None))


def test_lelong_hyperplane_graph_case():
    # xi = bump(zeta) d zeta_1 ^ d zeta-bar_1 integrates to -2i * int bump dA
    def fn(w):
        b = BUMP(w)
        z = 0 * b
        return [[b, z], [z, z]]
    fn.breaks = BUMP.breaks
    val = lelong_hyperplane(TestForm(fn, 0.9, (1, 1)))
    # int chi(|w|) dA = 2 pi int_0^0.9 chi(r) r dr, computed radially
    r = np.linspace(0, 0.9, 200001)
    ref = 2 * np.pi * np.trapezoid(BUMP.profile(r) * r, r)
    assert abs(val - DZ_DZBAR * ref) < 1e-8


def test_lelong_curve_routes_agree():
    C = MonomialCurve(2, 3)

    def fn(w):
        b = BUMP(w)
        z = 0 * b
        return [[z, z], [z, b * (1 + np.abs(w[0]) ** 2)]]
    fn.breaks = BUMP.breaks
    xi = TestForm(fn, 0.9, (1, 1))
    a = lelong_curve(C, xi, "pullback")
    b = lelong_curve(C, xi, "cutoff")
    assert abs(a - b.value) < 1e-3


def test_curve_pairing_residue_route():
    C = MonomialCurve(2, 3)
    xi = bump_form(lambda w: 1 + 0 * w[0])
    r = curve_pairing(C, parse_laurent("tau"), xi, "contour")
    assert abs(r.value - 4 * np.pi ** 2) < 1e-9
    r = curve_pairing(C, parse_laurent("tau**2"), xi, "contour")
    assert abs(r.value) < 1e-12
