import numpy as np
import pytest

from koppelman.errors import SingularityError
from koppelman.exterior import TWO_PI_I, MultiBlade, contract_eta, one_form, BAR, ETA, wedge
from koppelman.kernels import (Cutoff, ball_weight, bm_admissible, bm_components, bm_identity_residual,
                               hefer_single, interchanged_ball_weight, singular_weight_ga, trivial_weight,
                               weight_contract_residual, weight_power, weight_product)
from koppelman.poly import Polynomial

RNG = np.random.default_rng(7)


def col(*v):
    return np.array(v, dtype=complex).reshape(-1, 1)


def rand_ball(radius, N=2):
    v = RNG.normal(size=N) + 1j * RNG.normal(size=N)
    return (v / np.linalg.norm(v) * radius).reshape(N, 1)


def test_cutoff_profile_and_dbar():
    chi = Cutoff(1.0, 2.0)
    assert chi(col(0.5)) == 1 and chi(col(2.5)) == 0
    w = col(1.3 + 0.4j)
    h = 1e-6
    fd = 0.5 * ((chi(w + h) - chi(w - h)) / (2 * h) + 1j * (chi(w + 1j * h) - chi(w - 1j * h)) / (2 * h))
    assert np.isclose(chi.dbar(w)[0], fd, atol=1e-8)
    with pytest.raises(ValueError):
        Cutoff(2.0, 1.0)


def test_bm_admissible_examples():
    s = bm_admissible(1)
    S = s.s(col(1.0), col(0.0))
    assert np.isclose(S.coefficient(MultiBlade.from_masks(eta=(0,))), 1.0)
    s2 = bm_admissible(2)
    zeta, z = col(1.0, 1j), col(0.0, 0.0)
    ds = contract_eta([1.0, 1j], s2.s(zeta, z)).scalar_part()
    assert np.isclose(ds, TWO_PI_I * 2)
    norm = np.sqrt(sum(abs(c) ** 2 for _, c in s2.s(zeta, z).items()))
    assert np.isclose(norm, np.sqrt(2))


def test_cauchy_kernel_value():
    B = bm_components(bm_admissible(1))
    b = B.component(1)(col(2.0), col(0.0))
    assert np.isclose(b.coefficient(MultiBlade.from_masks(eta=(0,))), 1 / (4j * np.pi))


def test_bm_top_component_by_hand():
    # at zeta = (1, 0), z = 0: d|eta|^2 = d eta_1, dbar d|eta|^2 = sum d zeta-bar_j ^ d eta_j (up to z-bar terms)
    B = bm_components(bm_admissible(2, include_zbar=False))
    b = B.component(2)(col(1.0, 0.0), col(0.0, 0.0))
    blade = MultiBlade.from_masks(eta=(0, 1), bar=(1,))
    # s ^ dbar s / (2 pi i)^2 |eta|^4 with s = d eta_1, dbar s = -d eta_2 ^ d zeta-bar_2 ... = d eta_1 ^ d eta_2 ^ d zeta-bar_2 * (-1)
    assert np.isclose(b.coefficient(blade), -1 / TWO_PI_I ** 2)
    assert len(b) == 1


@pytest.mark.parametrize("k", [1, 2])
def test_bm_homogeneity(k):
    B = bm_components(bm_admissible(2, include_zbar=False))
    zeta, z = col(0.3 + 0.1j, -0.2j), col(0.05, 0.1)
    lam = 2.5
    a = B.component(k)(zeta, z)
    b = B.component(k)(lam * zeta, lam * z)
    for blade, c in a.items():
        assert np.isclose(b.coefficient(blade), lam ** -(2 * k - 1) * c)


def test_bm_singular_on_diagonal():
    B = bm_components(bm_admissible(2))
    with pytest.raises(SingularityError):
        B(col(0.1, 0.2), col(0.1, 0.2))


def test_bm_is_a_nabla_inverse():
    B = bm_components(bm_admissible(2))
    assert bm_identity_residual(B, col(0.6, -0.3j), col(0.1, 0.2)) < 1e-6


def test_ball_weight_diagonal_and_flat_region():
    g = ball_weight(Cutoff(1.2, 1.8), 2)
    for _ in range(5):
        p = rand_ball(RNG.uniform(0, 1))
        val = g(p, p)
        assert np.isclose(val.scalar_part(), 1.0)
        assert len(val.part(eta_degree=1)) == 0 and len(val.part(eta_degree=2)) == 0
    with pytest.raises(ValueError):
        ball_weight(Cutoff(0.9, 1.5), 2)


@pytest.mark.parametrize("make", [
    lambda chi: ball_weight(chi, 2),
    lambda chi: weight_product(ball_weight(chi, 2), interchanged_ball_weight(chi, 2)),
    lambda chi: weight_power(ball_weight(chi, 2), 2),
])
def test_weight_contract(make):
    chi = Cutoff(1.2, 1.8)
    g = make(chi)
    for _ in range(6):
        assert weight_contract_residual(g, rand_ball(RNG.uniform(1.25, 1.75)), rand_ball(RNG.uniform(1.25, 1.75))) < 1e-5


def test_product_with_unit_weight():
    g = ball_weight(Cutoff(1.2, 1.8), 2)
    gp = weight_product(g, trivial_weight(2))
    zeta, z = rand_ball(1.5), rand_ball(0.3)
    assert gp(zeta, z).allclose(g(zeta, z))


def test_ga_examples():
    a = Polynomial.parse("z1", 1)
    g = singular_weight_ga([a])
    assert np.isclose(g(col(1.0), col(0.0)).scalar_part(), 0.0)
    assert np.isclose(g(col(0.4 + 0.3j), col(0.4 + 0.3j)).scalar_part(), 1.0)
    with pytest.raises(SingularityError):
        g(col(0.0), col(0.2))


def test_ga_contract_away_from_zero_set():
    g = singular_weight_ga([Polynomial.parse("z1", 2), Polynomial.parse("z1*z2 + z2^2", 2)])
    for _ in range(6):
        zeta = rand_ball(0.5)
        if abs(zeta[0, 0]) < 0.2:
            zeta[0, 0] += 0.3
        assert weight_contract_residual(g, zeta, rand_ball(0.4)) < 1e-5


def test_hefer_examples():
    H = hefer_single(Polynomial.parse("z1", 1))
    h = H(col(0.7), col(0.2))
    assert np.isclose(h.coefficient(MultiBlade.from_masks(eta=(0,))), 1 / TWO_PI_I)
    H = hefer_single(Polynomial.parse("z1^2", 1))
    h = H(col(0.7), col(0.2))
    assert np.isclose(h.coefficient(MultiBlade.from_masks(eta=(0,))), 0.9 / TWO_PI_I)


def test_hefer_delta_identity():
    h = Polynomial.parse("z1^2 - z2^3", 2)
    H = hefer_single(h)
    zeta = RNG.normal(size=(2, 50)) + 1j * RNG.normal(size=(2, 50))
    z = RNG.normal(size=(2, 50)) + 1j * RNG.normal(size=(2, 50))
    d = contract_eta(list(zeta - z), H(zeta, z)).scalar_part() - (h(zeta) - h(z))
    assert np.max(np.abs(d)) < 1e-12
