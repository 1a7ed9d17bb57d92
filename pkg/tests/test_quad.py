import numpy as np
import pytest

from koppelman.pv import PVSchedule
from koppelman.quad import (Annulus, Ball2, Circle, Disc, Puncture, Resolution, gauss_legendre, integrate,
                            partition_profile, pv_integrate, rule)


def test_gauss_legendre_exactness():
    x, w = gauss_legendre(6)
    assert np.isclose(np.sum(w * x ** 11), 1 / 12)


def test_partition_profile():
    t = np.linspace(0, 1, 11)
    p = partition_profile(t)
    assert p[0] == 1 and p[-1] == 0
    assert np.allclose(p + partition_profile(1 - t), 1)


def test_disc_area():
    assert abs(integrate(Disc(0j, 1.0), lambda w: np.ones_like(w.real)).value - np.pi) < 1e-10


def test_cauchy_circle():
    r = integrate(Circle(0j, 1.0), lambda t: 1 / t)
    assert abs(r.value - 2j * np.pi) < 1e-12


def test_weakly_singular_radial():
    dom = Disc(0j, 1.0, punctures=(Puncture(0j),))
    r = integrate(dom, lambda w: np.abs(w) ** -0.5)
    assert abs(r.value - 4 * np.pi / 3) < 1e-8


def test_off_centre_puncture():
    dom = Disc(0j, 1.0, punctures=(Puncture(0.4 + 0.2j),))
    r = integrate(dom, lambda w: np.abs(w - (0.4 + 0.2j)) ** -1)
    ref = integrate(Disc(0j, 1.0, punctures=(Puncture(0.4 + 0.2j),)), lambda w: np.abs(w - (0.4 + 0.2j)) ** -1,
                    res=Resolution(n_theta=128, n_r=16, levels=20))
    assert abs(r.value - ref.value) < 1e-7


def test_annulus_area():
    r = integrate(Annulus(0j, 0.5, 1.0), lambda w: np.ones_like(w.real))
    assert abs(r.value - 0.75 * np.pi) < 1e-10


def test_ball_volume():
    r = integrate(Ball2(np.zeros(2, dtype=complex), 1.0), lambda p: np.ones(p.shape[1]))
    assert abs(r.value - np.pi ** 2 / 2) < 1e-8


def test_rule_is_deterministic():
    dom = Disc(0j, 1.0, breaks=(0.5,), punctures=(Puncture(0.1j), Puncture(-0.3)))
    a = rule(dom, Resolution())
    b = rule(dom, Resolution())
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_pv_matches_direct_for_integrable_singularity():
    dom = Disc(0j, 1.0, punctures=(Puncture(0j),))
    f = lambda w: 1 / np.abs(w)
    cut = lambda w, d: 1 - np.clip(2 - np.abs(w) / d, 0, 1)
    q, sep = pv_integrate(dom, f, cut, PVSchedule.geometric(3, 12), cutoff_breaks=lambda d: (d, 2 * d))
    assert abs(q.value - 2 * np.pi) < 2e-6


def test_pv_of_smooth_integrand():
    dom = Disc(0j, 1.0, punctures=(Puncture(0j),))
    f = lambda w: 1 + np.abs(w) ** 2
    cut = lambda w, d: np.where(np.abs(w) < d, 0.0, 1.0)
    q, _ = pv_integrate(dom, f, cut, PVSchedule.geometric(3, 12), cutoff_breaks=lambda d: (d,))
    assert abs(q.value - 1.5 * np.pi) < 1e-8


def test_moment_integrand_radius_independent():
    vals = [integrate(Circle(0j, eps), lambda t: t * t ** -2).value for eps in (0.5, 0.1, 1e-3)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-10


def test_domain_validation():
    with pytest.raises(ValueError):
        Disc(0j, -1.0)
    with pytest.raises(ValueError):
        Annulus(0j, 1.0, 0.5)
    with pytest.raises(ValueError):
        Disc(0j, 1.0, punctures=(Puncture(2.0),))
