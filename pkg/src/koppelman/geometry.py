"""Hypersurfaces, monomial curves, structure forms and Lelong pairings.

Orientation convention: the structure form of ``X = {h = 0}`` in C^2 is
``omega = -(gamma _| d zeta_1 ^ d zeta_2)``, the sign for which
``dh/(2 pi i) ^ omega = d zeta_1 ^ d zeta_2`` on X.  With it the hyperplane
``{zeta_2 = 0}`` gets ``omega = -2 pi i d zeta_1`` and the monomial curve
pulls back to ``+2 pi i d tau / tau^c``, ``c = (r-1)(s-1)``.

Area integrals of (1,1)-forms use ``d w ^ d w-bar = -2i dA``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import SingularityError
from .exterior import TWO_PI_I
from .kernels import Cutoff
from .laurent import LaurentPoly, Semigroup
from .poly import Polynomial
from .pv import PVSchedule, SepResult, sep_regularize
from .quad import Circle, Disc, Puncture, Resolution, integrate

__all__ = [
    "Hypersurface", "MonomialCurve", "StructureForm", "PVSchedule", "SepResult", "TestForm",
    "PullbackReport", "gamma_hypersurface", "ambient_omega", "cusp_structure_form",
    "hyperplane_structure_form", "pullback_gamma_check", "omega_blowup_exponent",
    "lelong_point", "lelong_hyperplane", "lelong_curve", "curve_pairing", "sep_regularize",
    "DZ_DZBAR",
]

DZ_DZBAR = -2j  # d w ^ d w-bar = -2i dA


@dataclass(frozen=True)
class Hypersurface:
    """``X = {h = 0}`` in C^2."""

    h: Polynomial

    def __post_init__(self):
        if self.h.nvars != 2:
            raise ValueError("hypersurfaces are modelled in C^2")
        if not self.h.coeffs:
            raise ValueError("h must not vanish identically")

    @property
    def grad(self) -> list[Polynomial]:
        return self.h.gradient()

    def singular_locus(self, radius: float = 1.0) -> list[tuple[complex, complex]]:
        """Common zeros of ``h`` and its gradient with norm below ``radius``."""
        import sympy

        z1, z2 = sympy.symbols("z1 z2")
        expr = sum(c * z1 ** a[0] * z2 ** a[1] for a, c in self.h.coeffs.items())
        sols = sympy.solve([expr, sympy.diff(expr, z1), sympy.diff(expr, z2)], [z1, z2], dict=True)
        out = []
        for sol in sols:
            if z1 not in sol or z2 not in sol:
                raise ValueError("singular locus is not a finite set of points")
            p = (complex(sol[z1]), complex(sol[z2]))
            if np.hypot(abs(p[0]), abs(p[1])) < radius:
                out.append(p)
        return sorted(out, key=lambda p: (p[0].real, p[0].imag, p[1].real, p[1].imag))


@dataclass(frozen=True)
class MonomialCurve:
    """``{zeta_1^r = zeta_2^s}`` with normalisation ``tau -> (tau^s, tau^r)``."""

    r: int
    s: int

    def __post_init__(self):
        Semigroup(self.r, self.s)  # validates 2 <= r < s, coprime

    @property
    def semigroup(self) -> Semigroup:
        return Semigroup(self.r, self.s)

    @property
    def conductor(self) -> int:
        return (self.r - 1) * (self.s - 1)

    @property
    def h(self) -> Polynomial:
        return Polynomial({(self.r, 0): 1, (0, self.s): -1}, 2)

    def hypersurface(self) -> Hypersurface:
        return Hypersurface(self.h)

    def normalization(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=complex)
        return np.stack([tau ** self.s, tau ** self.r])

    def derivative(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=complex)
        return np.stack([self.s * tau ** (self.s - 1), self.r * tau ** (self.r - 1)])

    def tau_radius(self, rho: float) -> float:
        """The ``t > 0`` with ``|zeta(t)| = rho``."""
        from scipy.optimize import brentq

        return float(brentq(lambda t: np.hypot(t ** self.s, t ** self.r) - rho, 0.0, max(1.0, rho) + 1))


@dataclass(frozen=True)
class StructureForm:
    """Structure form as a density against ``d tau`` (curves) or ``d zeta_1`` (hyperplane).

    The value is ``factor * density(tau)``; ``density`` is an exact Laurent polynomial.
    """

    variant: str
    pole_order: int
    density: LaurentPoly
    factor: complex = TWO_PI_I

    def __post_init__(self):
        if self.variant not in ("smooth_hyperplane", "hypersurface_gamma", "cusp_symbolic"):
            raise ValueError(f"unknown structure form variant {self.variant!r}")

    def __call__(self, tau) -> np.ndarray:
        return self.factor * self.density(tau)


def gamma_hypersurface(X: Hypersurface) -> Callable[[np.ndarray], list]:
    """``gamma = -2 pi i sum_j conj(dh/d zeta_j) / |dh|^2 d/d zeta_j`` as a coefficient list."""
    grad = X.grad

    def gamma(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        g = [p(zeta) for p in grad]
        n2 = sum(np.abs(x) ** 2 for x in g)
        if np.any(n2 == 0):
            raise SingularityError("gamma evaluated where dh = 0")
        return [-TWO_PI_I * np.conj(x) / n2 for x in g]

    return gamma


def ambient_omega(X: Hypersurface, zeta) -> list:
    """Coefficients ``(w1, w2)`` of ``omega = w1 d zeta_1 + w2 d zeta_2``."""
    g1, g2 = gamma_hypersurface(X)(zeta)
    # gamma _| (d zeta_1 ^ d zeta_2) = g1 d zeta_2 - g2 d zeta_1
    return [g2, -g1]


def cusp_structure_form(C: MonomialCurve) -> StructureForm:
    c = C.conductor
    return StructureForm("cusp_symbolic", c, LaurentPoly.monomial(-c))


def hyperplane_structure_form() -> StructureForm:
    """``{zeta_2 = 0}``: ``omega = -2 pi i d zeta_1`` (constant, no pole)."""
    return StructureForm("smooth_hyperplane", 0, LaurentPoly.monomial(0), factor=-TWO_PI_I)


def pullback_density(C: MonomialCurve, tau) -> np.ndarray:
    """Ambient ``omega`` pulled back along the normalisation, as a density against ``d tau``."""
    w = ambient_omega(C.hypersurface(), C.normalization(tau))
    d = C.derivative(tau)
    return w[0] * d[0] + w[1] * d[1]


@dataclass(frozen=True)
class PullbackReport:
    radius: float
    max_rel_deviation: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_rel_deviation < self.tol


def pullback_gamma_check(C: MonomialCurve, radius: float, tol: float = 1e-8,
                         samples: int = 64) -> PullbackReport:
    """Compare the ambient formula with the symbolic cusp density on ``|tau| = radius``."""
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    tau = radius * np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
    amb = pullback_density(C, tau)
    sym = cusp_structure_form(C)(tau)
    dev = float(np.max(np.abs(amb - sym) / np.abs(sym)))
    return PullbackReport(radius, dev, tol, samples)


def omega_blowup_exponent(C: MonomialCurve, eps: Sequence[float] = (0.4, 0.2, 0.1, 0.05, 0.025),
                          samples: int = 32) -> float:
    """Fitted ``p`` in ``max_{|tau|=eps} |omega| ~ eps^{-p}`` using the ambient formula."""
    logs, vals = [], []
    for e in eps:
        tau = e * np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
        logs.append(np.log(e))
        vals.append(np.log(np.max(np.abs(pullback_density(C, tau)))))
    return float(-np.polyfit(logs, vals, 1)[0])


# ---------------------------------------------------------------------------
# Lelong pairings

@dataclass(frozen=True)
class TestForm:
    """Smooth compactly supported test form.

    ``fn`` takes points of shape ``(N, M)`` (or ``(M,)`` in one variable) and
    returns the coefficient; for (1,1)-forms in C^2 it returns a 2x2 nested
    list ``c[j][k]`` of coefficients of ``d zeta_j ^ d zeta-bar_k``.
    ``support`` is a radius outside of which ``fn`` vanishes.
    """

    __test__ = False  # not a pytest class

    fn: Callable
    support: float | None
    degree: tuple[int, int] = (0, 0)

    def __call__(self, w):
        return self.fn(w)


def _require_support(xi: TestForm):
    if xi.support is None or not np.isfinite(xi.support):
        raise ValueError("test form must have compact support")


def lelong_point(xi: TestForm, schedule: PVSchedule | None = None,
                 samples: int = 64) -> SepResult:
    """``<dbar(1/zeta) ^ d zeta / 2 pi i, xi>`` in C by shrinking circles.

    The family ``oint_{|zeta|=eps} xi d zeta / (2 pi i zeta)`` is sampled on the
    schedule and extrapolated to ``eps -> 0``.
    """
    _require_support(xi)
    schedule = schedule or PVSchedule()
    vals = []
    for eps in schedule.deltas:
        r = integrate(Circle(0j, eps), lambda w: xi(w) / (TWO_PI_I * w), tol=1e-13)
        vals.append(r.value)
    return sep_regularize(vals, schedule)


def lelong_hyperplane(xi: TestForm, res: Resolution | None = None) -> complex:
    """``int_{zeta_2 = 0} xi`` for a (1,1)-form; only the ``d zeta_1 ^ d zeta-bar_1`` part survives."""
    _require_support(xi)

    def f(w):
        pts = np.stack([w, np.zeros_like(w)])
        return xi(pts)[0][0]

    r = integrate(Disc(0j, xi.support, breaks=getattr(xi.fn, "breaks", ())), f, res=res)
    return DZ_DZBAR * r.value


def _curve_pullback(C: MonomialCurve, xi: TestForm, tau):
    """Pull a (1,1)-form back to a density against ``dA`` on the tau-plane."""
    z = C.normalization(tau)
    d = C.derivative(tau)
    c = xi(z)
    val = sum(c[j][k] * d[j] * np.conj(d[k]) for j in range(2) for k in range(2))
    return DZ_DZBAR * val


def lelong_curve(C: MonomialCurve, xi: TestForm, route: str = "pullback",
                 schedule: PVSchedule | None = None, cutoff: Cutoff | None = None,
                 res: Resolution | None = None, tol: float | None = None) -> complex | SepResult:
    """``int_X xi`` for the monomial curve.

    ``route="pullback"`` integrates the pulled back form on the tau-disc.
    ``route="cutoff"`` integrates ``(1 - chi(|zeta|/delta)) xi`` instead and
    extrapolates ``delta -> 0``; agreement of the two is the extension property.
    """
    _require_support(xi)
    T = C.tau_radius(xi.support)
    brk = tuple(C.tau_radius(b) for b in getattr(xi.fn, "breaks", ()) if b < xi.support)
    if route == "pullback":
        dom = Disc(0j, T, breaks=brk, punctures=(Puncture(0j),))
        return integrate(dom, lambda t: _curve_pullback(C, xi, t), tol=tol, res=res).value
    if route != "cutoff":
        raise ValueError(f"unknown route {route!r}")
    schedule = schedule or PVSchedule.geometric(3, 10)
    cutoff = cutoff or Cutoff(1.0, 2.0)
    vals = []
    for delta in schedule.deltas:
        cut = tuple(C.tau_radius(delta * b) for b in cutoff.breaks)
        dom = Disc(0j, T, breaks=tuple(sorted(set(brk) | set(cut))), punctures=(Puncture(0j),))

        def f(t, d=delta):
            w = C.normalization(t)
            return (1.0 - cutoff(w / d)) * _curve_pullback(C, xi, t)

        vals.append(integrate(dom, f, tol=tol, res=res).value)
    scale = max(1.0, float(np.max(np.abs(vals))))
    return sep_regularize(vals, schedule, noise=max(tol or 1e-8, 1e-8) * scale)


# ---------------------------------------------------------------------------
# residue-type pairings on the curve

def _xi_dbar_tau(C: MonomialCurve, xi: TestForm, tau, step: float = 1e-5):
    """``d(xi o zeta)/d tau-bar`` by central differences."""
    from .exterior import dbar_partials

    return dbar_partials(lambda t: xi(C.normalization(t[0])), np.asarray(tau)[None, :], step)[0]


def curve_pairing(C: MonomialCurve, phi: Callable, xi: TestForm, route: str = "contour",
                  schedule: PVSchedule | None = None, cutoff: Cutoff | None = None,
                  res: Resolution | None = None, tol: float | None = None,
                  samples: int = 128) -> SepResult:
    """``lim int_X chi_delta phi dbar xi ^ omega`` for a function ``phi`` holomorphic on X_reg.

    ``route="contour"``: the limit of ``-oint_{|tau|=eps} phi xi omega`` (Stokes).
    ``route="cutoff"``: area integrals with ``1 - chi(|zeta|/delta)`` inserted.
    ``phi`` is a callable of tau (e.g. a LaurentPoly); ``xi`` a scalar test function.
    ``tol`` and ``res`` are passed to the area quadrature of the cutoff route.
    """
    _require_support(xi)
    om = cusp_structure_form(C)
    if route == "contour":
        schedule = schedule or PVSchedule()
        vals = []
        for eps in schedule.deltas:
            r = integrate(Circle(0j, eps), lambda t: -phi(t) * xi(C.normalization(t)) * om(t),
                          res=Resolution(n_theta=samples), adaptive=False)
            vals.append(r.value)
        return sep_regularize(vals, schedule)
    if route != "cutoff":
        raise ValueError(f"unknown route {route!r}")
    schedule = schedule or PVSchedule.geometric(3, 10)
    cutoff = cutoff or Cutoff(1.0, 2.0)
    T = C.tau_radius(xi.support)
    brk = tuple(C.tau_radius(b) for b in getattr(xi.fn, "breaks", ()) if b < xi.support)
    vals = []
    for delta in schedule.deltas:
        cut = tuple(C.tau_radius(delta * b) for b in cutoff.breaks)
        dom = Disc(0j, T, breaks=tuple(sorted(set(brk) | set(cut))), punctures=(Puncture(0j),))

        def f(t, d=delta):
            w = C.normalization(t)
            # dtau-bar ^ dtau = -(dtau ^ dtau-bar)
            return -DZ_DZBAR * (1.0 - cutoff(w / d)) * phi(t) * _xi_dbar_tau(C, xi, t) * om(t)

        vals.append(integrate(dom, f, tol=tol, res=res).value)
    scale = max(1.0, float(np.max(np.abs(vals))))
    return sep_regularize(vals, schedule, noise=max(tol or 1e-8, 1e-8) * scale)
