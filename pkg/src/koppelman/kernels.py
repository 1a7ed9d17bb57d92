"""Kernel ingredients: admissible forms, Bochner-Martinelli forms, weights, Hefer forms.

All forms live in the algebra of :mod:`koppelman.exterior` with ``eta = zeta - z``.
The contraction ``delta_eta`` carries the factor ``2*pi*i``; Hefer forms and
the ``sigma`` forms of the ball weight are stored pre-divided by ``2*pi*i`` so
that ``delta_eta H = h(zeta) - h(z)`` and ``delta_eta sigma = 1`` hold without
stray constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import SingularityError
from .exterior import (
    BAR, ETA, TWO_PI_I, ZBAR, ExtForm, FormField, MultiBlade, contract_eta,
    dbar_total_fd, interior, one_form, wedge,
)
from .poly import Polynomial, divided_differences


def _eta(zeta, z):
    return np.asarray(zeta, dtype=complex) - np.asarray(z, dtype=complex)


def _norm2(w) -> np.ndarray:
    return np.sum(np.abs(w) ** 2, axis=0)


# ---------------------------------------------------------------------------
# cutoff profiles

@dataclass(frozen=True)
class Cutoff:
    """Radial cutoff: 1 for ``t <= inner``, 0 for ``t >= outer``, C^2 in between.

    The transition is the quintic smoothstep, so value, first and second
    derivatives are continuous and all of them are available in closed form.
    """

    inner: float
    outer: float

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")

    def profile(self, t):
        t = np.asarray(t, dtype=float)
        u = np.clip((t - self.inner) / (self.outer - self.inner), 0.0, 1.0)
        return 1.0 - u ** 3 * (10.0 - 15.0 * u + 6.0 * u * u)

    def dprofile(self, t):
        t = np.asarray(t, dtype=float)
        w = self.outer - self.inner
        u = np.clip((t - self.inner) / w, 0.0, 1.0)
        return -30.0 * u * u * (1.0 - u) ** 2 / w

    @property
    def breaks(self) -> tuple[float, float]:
        return (self.inner, self.outer)

    def __call__(self, w):
        """``chi(|w|)`` for ``w`` of shape ``(N, ...)``."""
        return self.profile(np.sqrt(_norm2(w)))

    def dbar(self, w) -> list:
        """``d chi / d w-bar_j = chi'(rho) * w_j / (2 rho)``."""
        w = np.asarray(w, dtype=complex)
        rho = np.sqrt(_norm2(w))
        dp = self.dprofile(rho)
        safe = np.where(rho > 0, rho, 1.0)
        factor = np.where(rho > 0, dp / (2.0 * safe), 0.0)
        return [factor * w[j] for j in range(w.shape[0])]


# ---------------------------------------------------------------------------
# admissible forms and B

@dataclass(frozen=True)
class AdmissibleForm:
    """A (1,0)-form ``s`` in d eta with ``|s| <= C1 |eta|``, ``|delta s| >= C2 |eta|^2``.

    ``delta s`` in the bounds is taken without the ``2*pi*i`` factor.
    ``dbar_s`` is the dbar of ``s`` (both variables).
    """

    s: FormField
    dbar_s: FormField
    bounds: tuple[float, float]
    dim: int


def bm_admissible(N: int, include_zbar: bool = True) -> AdmissibleForm:
    """``s = d|eta|^2 = sum_j conj(zeta_j - z_j) d eta_j``."""
    if not 1 <= N <= 3:
        raise ValueError(f"dimension must be 1..3, got {N}")

    def s(zeta, z):
        return one_form([np.conj(e) for e in _eta(zeta, z)], ETA, N)

    dbs = {}
    for j in range(N):
        dbs[MultiBlade.from_masks(eta=(j,), bar=(j,))] = -1.0  # dzetabar_j ^ deta_j
        if include_zbar:
            dbs[MultiBlade.from_masks(eta=(j,), zbar=(j,))] = 1.0
    dbar_form = ExtForm(dbs, N)

    def dbar_s(zeta, z):
        return dbar_form

    return AdmissibleForm(FormField(s, N), FormField(dbar_s, N), (1.0, 1.0), N)


def fit_admissible_bounds(s: AdmissibleForm, zeta, z) -> tuple[float, float]:
    """Empirical ``(C1, C2)`` over a batch of point pairs (shape ``(N, M)``)."""
    eta = _eta(zeta, z)
    S = s.s(zeta, z)
    n1 = np.sqrt(sum(np.abs(c) ** 2 for _, c in S.items()))
    ds = interior(list(eta), S).scalar_part()
    r = np.sqrt(_norm2(eta))
    return float(np.max(n1 / r)), float(np.min(np.abs(ds) / r ** 2))


@dataclass(frozen=True)
class BForm:
    """Components ``B_{k,k-1}``, k = 1..N, of ``B = s / nabla_eta s``."""

    components: tuple[FormField, ...]
    source: AdmissibleForm

    @property
    def dim(self) -> int:
        return self.source.dim

    def component(self, k: int) -> FormField:
        return self.components[k - 1]

    def __call__(self, zeta, z) -> ExtForm:
        return _b_sum(self.source, np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))


def _b_parts(src: AdmissibleForm, zeta, z) -> list[ExtForm]:
    eta = _eta(zeta, z)
    if np.any(_norm2(eta) == 0):
        raise SingularityError("B evaluated on the diagonal zeta == z")
    S = src.s(zeta, z)
    dS = src.dbar_s(zeta, z)
    ds = contract_eta(list(eta), S).scalar_part()
    parts = []
    num = S
    for k in range(1, src.dim + 1):
        parts.append(num / ds ** k)
        num = wedge(num, dS)
    return parts


def _b_sum(src, zeta, z) -> ExtForm:
    parts = _b_parts(src, zeta, z)
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def bm_components(s: AdmissibleForm) -> BForm:
    """``B_{k,k-1} = s ^ (dbar s)^{k-1} / (delta_eta s)^k`` for k = 1..N."""

    def make(k):
        return FormField(lambda zeta, z: _b_parts(s, zeta, z)[k - 1], s.dim,
                         singular=lambda zeta, z: np.sqrt(_norm2(_eta(zeta, z))))

    return BForm(tuple(make(k) for k in range(1, s.dim + 1)), s)


def bm_identity_residual(B: BForm, zeta, z, step: float = 1e-4) -> float:
    """max |nabla_eta B - 1| at an off-diagonal point (both-variable dbar)."""
    field_ = FormField(lambda a, b: B(a, b), B.dim)
    eta = _eta(zeta, z)
    val = B(zeta, z)
    res = contract_eta(list(eta), val) - dbar_total_fd(field_, (zeta, z), step) - 1.0
    return res.max_abs()


# ---------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class WeightForm:
    """Graded weight ``g = g_00 + ... + g_NN``.

    ``eval`` returns the whole graded sum; ``component(k)`` picks ``g_kk``.
    ``zeta_support`` is a radius (None if not compactly supported in zeta) and
    ``z_radius`` bounds the z-ball on which the weight contract holds.
    ``top_shell`` is a radial shell in zeta containing the support of ``g_NN``
    (when known), so integrals against it need no node near ``z``.
    """

    eval: Callable[[np.ndarray, np.ndarray], ExtForm]
    dim: int
    holomorphic_in_z: bool = True
    zeta_support: float | None = None
    z_radius: float = np.inf
    name: str = "weight"
    breaks: tuple[float, ...] = field(default=())
    top_shell: tuple[float, float] | None = None

    def __call__(self, zeta, z) -> ExtForm:
        return self.eval(np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))

    def component(self, k: int) -> FormField:
        return FormField(lambda zeta, z: self(zeta, z).part(eta_degree=k), self.dim)


def trivial_weight(N: int) -> WeightForm:
    return WeightForm(lambda zeta, z: ExtForm.scalar(1.0, N), N, name="trivial")


def _sigma_series(sig: ExtForm, dsig: ExtForm, N: int) -> ExtForm:
    """``sigma + sigma^dbar sigma + ... + sigma^(dbar sigma)^{N-1}``."""
    term = sig
    out = sig
    for _ in range(N - 1):
        term = wedge(term, dsig)
        out = out + term
    return out


def _safe_denominator(D, active):
    bad = (D == 0) & active
    if np.any(bad):
        raise SingularityError("weight denominator vanishes inside supp(dbar chi)")
    return np.where(D == 0, 1.0, D)


def ball_weight(chi: Cutoff, N: int) -> WeightForm:
    """``g = chi - dbar chi ^ sigma / nabla_eta sigma`` with
    ``sigma = zeta-bar . d eta / (2 pi i zeta-bar . eta)``.

    Holomorphic in z for ``|z| < 1`` when ``chi == 1`` near the closed unit ball.
    """
    if chi.inner <= 1.0:
        raise ValueError("chi must be identically 1 on a neighbourhood of the closed unit ball")

    def g(zeta, z):
        eta = _eta(zeta, z)
        zb = np.conj(zeta)
        dchi = chi.dbar(zeta)
        active = np.any([np.abs(d) > 0 for d in dchi], axis=0)
        D = _safe_denominator(np.sum(zb * eta, axis=0), active)
        sig = one_form([zb[j] / (TWO_PI_I * D) for j in range(N)], ETA, N)
        # dbar sigma = (sum dzetabar_j ^ deta_j) / D - (sum eta_k dzetabar_k) ^ (zeta-bar . deta) / D^2
        first = ExtForm({MultiBlade.from_masks(eta=(j,), bar=(j,)): -1.0 / (TWO_PI_I * D)
                         for j in range(N)}, N)
        dD = one_form([eta[k] for k in range(N)], BAR, N)
        second = wedge(dD, one_form([zb[j] / (TWO_PI_I * D * D) for j in range(N)], ETA, N))
        dsig = first - second
        dchi_form = one_form(dchi, BAR, N)
        return ExtForm.scalar(chi(zeta), N) - wedge(dchi_form, _sigma_series(sig, dsig, N))

    return WeightForm(g, N, holomorphic_in_z=True, zeta_support=chi.outer, z_radius=1.0,
                      name="ball", breaks=chi.breaks, top_shell=chi.breaks)


def interchanged_ball_weight(chi: Cutoff, N: int) -> WeightForm:
    """The ball weight with the roles of zeta and z swapped.

    ``g = chi(z) - dbar chi(z) ^ sigma' / nabla_eta sigma'`` with
    ``sigma' = z-bar . d eta / (2 pi i z-bar . eta)``; holomorphic in zeta,
    compactly supported in z, not compactly supported in zeta.
    """

    def g(zeta, z):
        zeta = np.broadcast_to(zeta, np.broadcast_shapes(np.shape(zeta), np.shape(z)))
        eta = _eta(zeta, z)
        zb = np.conj(np.broadcast_to(z, eta.shape))
        dchi = chi.dbar(np.broadcast_to(z, eta.shape))
        active = np.any([np.abs(d) > 0 for d in dchi], axis=0)
        D = _safe_denominator(np.sum(zb * eta, axis=0), active)
        sig = one_form([zb[j] / (TWO_PI_I * D) for j in range(N)], ETA, N)
        first = ExtForm({MultiBlade.from_masks(eta=(j,), zbar=(j,)): -1.0 / (TWO_PI_I * D)
                         for j in range(N)}, N)
        dD = one_form([eta[k] for k in range(N)], ZBAR, N)
        second = wedge(dD, one_form([zb[j] / (TWO_PI_I * D * D) for j in range(N)], ETA, N))
        dsig = first - second
        dchi_form = one_form(dchi, ZBAR, N)
        chi_z = chi(np.broadcast_to(z, eta.shape))
        return ExtForm.scalar(chi_z, N) - wedge(dchi_form, _sigma_series(sig, dsig, N))

    return WeightForm(g, N, holomorphic_in_z=False, zeta_support=None, z_radius=np.inf,
                      name="ball-interchanged")


def weight_product(g: WeightForm, g2: WeightForm) -> WeightForm:
    """Graded product of two weights; again a weight where both contracts hold."""
    if g.dim != g2.dim:
        raise ValueError("weights of different dimension")
    supports = [x for x in (g.zeta_support, g2.zeta_support) if x is not None]
    return WeightForm(
        lambda zeta, z: wedge(g(zeta, z), g2(zeta, z)), g.dim,
        holomorphic_in_z=g.holomorphic_in_z and g2.holomorphic_in_z,
        zeta_support=min(supports) if supports else None,
        z_radius=min(g.z_radius, g2.z_radius),
        name=f"{g.name}*{g2.name}",
        breaks=tuple(sorted(set(g.breaks) | set(g2.breaks))),
    )


def weight_power(g: WeightForm, mu: int) -> WeightForm:
    if mu < 0:
        raise ValueError("power must be non-negative")
    out = trivial_weight(g.dim)
    for _ in range(mu):
        out = weight_product(out, g)
    return out


# ---------------------------------------------------------------------------
# Hefer forms

@dataclass(frozen=True)
class HeferForm:
    """(1,0)-form ``H = (1/2 pi i) sum_j H_j d eta_j`` with ``delta_eta H = h(zeta) - h(z)``."""

    H: FormField
    target: Polynomial
    coefficients: tuple[Polynomial, ...]

    def __call__(self, zeta, z) -> ExtForm:
        return self.H(zeta, z)

    def values(self, zeta, z) -> list:
        w = np.concatenate([np.broadcast_to(zeta, np.broadcast_shapes(np.shape(zeta), np.shape(z))),
                            np.broadcast_to(z, np.broadcast_shapes(np.shape(zeta), np.shape(z)))])
        return [p(w) for p in self.coefficients]


def hefer_single(h: Polynomial) -> HeferForm:
    """Hefer form of one polynomial by coordinate-wise divided differences."""
    coeffs = tuple(divided_differences(h))
    N = h.nvars

    def H(zeta, z):
        shape = np.broadcast_shapes(np.shape(zeta), np.shape(z))
        w = np.concatenate([np.broadcast_to(zeta, shape), np.broadcast_to(z, shape)])
        return one_form([p(w) / TWO_PI_I for p in coeffs], ETA, N)

    return HeferForm(FormField(H, N), h, coeffs)


def singular_weight_ga(a: Sequence[Polynomial], power: int = 1,
                       hefers: Sequence[HeferForm] | None = None) -> WeightForm:
    """``g_a = a(z) . abar/|a|^2 + dbar(abar/|a|^2) ^ H^a`` and its powers.

    Singular where ``a(zeta) = 0``.  The second term is written with the dbar
    factor first; with the anticommuting conventions of this package that is
    the ordering for which ``nabla_eta g_a = 0``.
    """
    if not a:
        raise ValueError("need at least one function")
    N = a[0].nvars
    if hefers is None:
        hefers = [hefer_single(aj) for aj in a]
    grads = [aj.gradient() for aj in a]

    def g(zeta, z):
        av = [aj(zeta) for aj in a]
        n2 = sum(np.abs(x) ** 2 for x in av)
        if np.any(n2 == 0):
            raise SingularityError("g_a evaluated on {a = 0}")
        az = [aj(np.broadcast_to(z, np.broadcast_shapes(np.shape(zeta), np.shape(z)))) for aj in a]
        g0 = sum(az[j] * np.conj(av[j]) for j in range(len(a))) / n2
        out = ExtForm.scalar(g0, N)
        dgrad = [[np.conj(p(zeta)) for p in gr] for gr in grads]  # conj(d a_j / d zeta_k)
        for j in range(len(a)):
            # d/dzetabar_k (abar_j / |a|^2)
            du = []
            for k in range(N):
                dn2 = sum(av[m] * dgrad[m][k] for m in range(len(a)))
                du.append(dgrad[j][k] / n2 - np.conj(av[j]) * dn2 / n2 ** 2)
            out = out + wedge(one_form(du, BAR, N), hefers[j](zeta, z))
        return out

    base = WeightForm(g, N, holomorphic_in_z=True, name="g_a")
    return base if power == 1 else weight_power(base, power)


def weight_contract_residual(g: WeightForm, zeta, z, step: float = 1e-4) -> float:
    """max |nabla_eta g| at one point pair, dbar taken in both variables by central differences."""
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    field_ = FormField(lambda a, b: g(a, b), g.dim)
    res = contract_eta(list(_eta(zeta, z)), g(zeta, z)) - dbar_total_fd(field_, (zeta, z), step)
    return res.max_abs()


def growth_exponent(field_: Callable[[np.ndarray, np.ndarray], ExtForm], z, direction,
                    ts: Sequence[float]) -> float:
    """Least-squares slope of ``log max|coef|`` against ``log |eta|`` along ``zeta = z + t*direction``."""
    z = np.asarray(z, dtype=complex)
    d = np.asarray(direction, dtype=complex)
    d = d / np.sqrt(_norm2(d))
    logs, vals = [], []
    for t in ts:
        zeta = z + t * d
        logs.append(np.log(t))
        vals.append(np.log(field_(zeta, z).max_abs()))
    return float(np.polyfit(logs, vals, 1)[0])
