"""Koppelman operators K and P, the identity check, compact-support solves,
Hartogs extension and the moment-condition classification on monomial curves.

Fibre integration convention: ``int_zeta`` acts on the zeta-differentials
standing on the left, so ``int (c d eta_1..d eta_N ^ d zeta-bar_1..N ^ d z-bar_S)
= (int c d zeta ^ d zeta-bar) d z-bar_S``, and
``d zeta_1..N ^ d zeta-bar_1..N = (-1)^{N(N-1)/2} (-2i)^N dV``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvariantViolation, SingularityError
from .exterior import (
    BAR, ETA, TWO_PI_I, ZBAR, ExtForm, MultiBlade, dbar_partials, one_form, wedge,
)
from .geometry import DZ_DZBAR, MonomialCurve, StructureForm, cusp_structure_form
from .kernels import (
    BForm, Cutoff, HeferForm, WeightForm, ball_weight, bm_admissible, bm_components,
    hefer_single, interchanged_ball_weight, trivial_weight,
)
from .laurent import LaurentPoly, member, residue, semigroup_representation
from .poly import Polynomial
from .pv import PVSchedule, sep_regularize
from .quad import Ball2, Disc, Puncture, Resolution, node_count, rule

FD_STEP = 1e-4


# ---------------------------------------------------------------------------
# input forms

@dataclass(frozen=True)
class SmoothForm:
    """Smooth ambient (0,q)-form.

    ``eval(zeta)`` takes points of shape ``(N, M)`` and returns an ExtForm in
    the d zeta-bar generators.  ``dbar`` is optional; without it dbar is taken
    by central differences.  ``support`` is a radius outside which the form
    vanishes (None if not compactly supported), ``breaks`` radii where it is
    only finitely smooth.
    """

    eval: Callable[[np.ndarray], ExtForm]
    dim: int
    degree: int
    dbar: Callable[[np.ndarray], ExtForm] | None = None
    support: float | None = None
    breaks: tuple[float, ...] = ()
    name: str = "phi"

    def __call__(self, zeta) -> ExtForm:
        return self.eval(np.asarray(zeta, dtype=complex))

    def dbar_form(self, zeta, step: float = FD_STEP) -> ExtForm:
        zeta = np.asarray(zeta, dtype=complex)
        if self.dbar is not None:
            return self.dbar(zeta)
        parts = dbar_partials(self.eval, zeta, step)
        out = ExtForm.zero(self.dim)
        for k, dk in enumerate(parts):
            out = out + wedge(ExtForm({MultiBlade.from_masks(bar=(k,)): 1}, self.dim), dk)
        return out


def function_form(fn: Callable, dim: int, dbar: Sequence[Callable] | None = None,
                  support: float | None = None, breaks: tuple = (), name: str = "phi") -> SmoothForm:
    """(0,0)-form from a scalar function; ``dbar`` lists ``d fn / d zeta-bar_k`` if known."""
    ev = lambda z: ExtForm.scalar(fn(z), dim)
    db = None
    if dbar is not None:
        db = lambda z: one_form([d(z) for d in dbar], BAR, dim)
    return SmoothForm(ev, dim, 0, db, support, tuple(breaks), name)


def to_z(form: ExtForm) -> ExtForm:
    """Rename d zeta-bar generators to d z-bar (evaluate a zeta-form at z)."""
    out = {}
    for blade, c in form.items():
        if blade.eta or blade.zbar:
            raise ValueError("to_z expects a pure (0,q)-form in d zeta-bar")
        out[MultiBlade.from_masks(zbar=blade.bar)] = c
    return ExtForm(out, form.dim)


# ---------------------------------------------------------------------------
# assemblies

@dataclass(frozen=True)
class AmbientAssembly:
    """Kernels for X = Omega (open set in C^N, N = 1, 2): ``k = (g ^ B)_N``, ``p = g_NN``."""

    weight: WeightForm
    B: BForm
    radius: float
    res: Resolution = Resolution(n_theta=64, n_r=12, levels=14, n_sub=2)
    breaks: tuple[float, ...] = ()

    @property
    def dim(self) -> int:
        return self.weight.dim

    def k_kernel(self, zeta, z) -> ExtForm:
        return wedge(self.weight(zeta, z), self.B(zeta, z)).part(eta_degree=self.dim)

    def p_kernel(self, zeta, z) -> ExtForm:
        return self.weight(zeta, z).part(eta_degree=self.dim)


def disc_assembly(weight: str = "ball", chi: Cutoff | None = None, radius: float | None = None,
                  res: Resolution | None = None, N: int = 1) -> AmbientAssembly:
    """Standard assembly on the unit disc (N=1) or unit ball (N=2)."""
    chi = chi or Cutoff(1.2, 1.8)
    if weight == "ball":
        g = ball_weight(chi, N)
        radius = radius or chi.outer
    elif weight == "trivial":
        g = trivial_weight(N)
        radius = radius or 1.0
    else:
        raise ValueError(f"unknown weight {weight!r}")
    B = bm_components(bm_admissible(N))
    kw = {"res": res} if res is not None else {}
    if N == 2 and res is None:
        kw["res"] = Resolution(n_theta=16, n_r=8, levels=6, n_alpha=8, n_sub=1)
    return AmbientAssembly(g, B, radius, breaks=tuple(g.breaks), **kw)


@dataclass(frozen=True)
class CurveAssembly:
    """Kernels on the monomial curve, integrated over the tau-disc.

    ``k = omega ^ Rest_K`` where ``H ^ (g ^ B)_{1} = d eta_1 ^ d eta_2 ^ Rest_K``
    and likewise ``p = omega ^ Rest_P`` from ``H ^ g_{11}``.
    """

    curve: MonomialCurve
    weight: WeightForm
    B: BForm
    hefer: HeferForm
    omega: StructureForm
    radius: float
    res: Resolution = Resolution(n_theta=256, n_r=14, levels=18, n_sub=6)
    breaks: tuple[float, ...] = ()

    @property
    def tau_radius(self) -> float:
        return self.curve.tau_radius(self.radius)

    def _rest(self, F: ExtForm) -> ExtForm:
        out = {}
        for blade, c in F.items():
            if blade.eta == (0, 1):
                out[MultiBlade.from_masks(bar=blade.bar, zbar=blade.zbar)] = c
        return ExtForm(out, 2)

    def k_rest(self, zeta, z) -> ExtForm:
        gb = wedge(self.weight(zeta, z), self.B(zeta, z)).part(eta_degree=1)
        return self._rest(wedge(self.hefer(zeta, z), gb))

    def p_rest(self, zeta, z) -> ExtForm:
        return self._rest(wedge(self.hefer(zeta, z), self.weight(zeta, z).part(eta_degree=1)))


def curve_assembly(r: int = 2, s: int = 3, chi: Cutoff | None = None,
                   res: Resolution | None = None) -> CurveAssembly:
    C = MonomialCurve(r, s)
    chi = chi or Cutoff(1.2, 1.8)
    g = ball_weight(chi, 2)
    kw = {"res": res} if res is not None else {}
    return CurveAssembly(C, g, bm_components(bm_admissible(2)), hefer_single(C.h),
                         cusp_structure_form(C), chi.outer, breaks=tuple(g.breaks), **kw)


# ---------------------------------------------------------------------------
# fibre integration

def _integrate_nodes(domain, res: Resolution, fn: Callable[[np.ndarray], dict]) -> dict:
    """Sum ``weights * fn(points)`` for every key of the dict returned by ``fn``."""
    pts, wts, patches = rule(domain, res)
    acc: dict = {}
    for p, w in [(pts, wts)] + list(patches):
        for key, val in fn(p).items():
            s = np.sum(w * val)
            acc[key] = acc[key] + s if key in acc else s
    return acc


def _ambient_top(G: ExtForm, N: int) -> dict:
    full = tuple(range(N))
    vol = (-1) ** (N * (N - 1) // 2) * DZ_DZBAR ** N
    out: dict = {}
    for blade, c in G.items():
        if blade.eta == full and blade.bar == full:
            out[blade.zbar] = out.get(blade.zbar, 0) + vol * c
    return out


def _as_points(p, N):
    return p[None, :] if N == 1 else p


def _ambient_domain(asm: AmbientAssembly, phi: SmoothForm | None, z: np.ndarray, pole: bool):
    R = asm.radius
    if phi is not None and phi.support is not None:
        R = min(R, phi.support)
    if float(np.linalg.norm(z)) >= R:
        raise ValueError("evaluation point outside the integration domain")
    brk = set(asm.breaks) | set(phi.breaks if phi is not None else ())
    brk = tuple(sorted(b for b in brk if 0 < b < R))
    punct = (Puncture(complex(z[0]) if asm.dim == 1 else tuple(z)),) if pole else ()
    if asm.dim == 1:
        return Disc(0j, R, breaks=brk, punctures=punct)
    return Ball2((0j, 0j), R, breaks=brk, punctures=punct)


def _ambient_apply(asm: AmbientAssembly, kernel: Callable, form_at: Callable, z,
                   pole: bool, phi: SmoothForm | None) -> ExtForm:
    N = asm.dim
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    dom = _ambient_domain(asm, phi, z, pole)

    def fn(p):
        zeta = _as_points(p, N)
        G = wedge(kernel(zeta, z[:, None]), form_at(zeta))
        return _ambient_top(G, N)

    acc = _integrate_nodes(dom, asm.res, fn)
    return ExtForm({MultiBlade.from_masks(zbar=k): v for k, v in acc.items()}, N)


def _p_needs_pole(weight: WeightForm, z) -> bool:
    shell = weight.top_shell
    return not (shell is not None and float(np.linalg.norm(z)) < shell[0])


# ---------------------------------------------------------------------------
# curve fibre integration

def _curve_phi(curve: MonomialCurve, phi: SmoothForm, tau, d=None):
    """Pull an ambient (0,q)-form (q <= 1) back to the tau-line; returns the
    scalar (q=0) or the d tau-bar coefficient (q=1)."""
    zeta = curve.normalization(tau)
    val = phi(zeta)
    if phi.degree == 0:
        return val.scalar_part() * np.ones(np.shape(tau))
    d = curve.derivative(tau) if d is None else d
    return sum(val[MultiBlade.from_masks(bar=(j,))] * np.conj(d[j]) for j in range(2)) * np.ones(np.shape(tau))


def _curve_dbar_phi(curve: MonomialCurve, phi: SmoothForm, tau):
    """``d(phi o zeta)/d tau-bar`` for a function ``phi``."""
    zeta = curve.normalization(tau)
    d = curve.derivative(tau)
    df = phi.dbar_form(zeta)
    return sum(df[MultiBlade.from_masks(bar=(j,))] * np.conj(d[j]) for j in range(2)) * np.ones(np.shape(tau))


def _curve_density(asm: CurveAssembly, rest: ExtForm, phi_val, q: int, tau) -> dict:
    """``omega ^ Rest ^ phi`` as densities against dA, keyed by the d z-bar set."""
    w = asm.omega(tau)
    d = asm.curve.derivative(tau)
    out: dict = {}
    for blade, c in rest.items():
        b = len(blade.bar)
        if b + q != 1:
            continue
        pull = np.conj(d[blade.bar[0]]) if b == 1 else 1.0
        sign = (-1) ** len(blade.zbar) if b == 0 else 1
        val = sign * DZ_DZBAR * w * c * pull * phi_val
        out[blade.zbar] = out.get(blade.zbar, 0) + val
    return out


def _curve_domain(asm: CurveAssembly, t: complex, pole: bool, extra_breaks=()):
    T = asm.tau_radius
    if abs(t) >= T:
        raise ValueError("evaluation point outside the integration domain")
    brk = {asm.curve.tau_radius(b) for b in asm.breaks if b < asm.radius}
    brk |= set(extra_breaks)
    brk = tuple(sorted(b for b in brk if 0 < b < T))
    punct = [Puncture(0j)]
    if pole:
        if t == 0:
            raise SingularityError("z on the singular locus")
        punct = [Puncture(complex(t)), Puncture(0j)]
    return Disc(0j, T, breaks=brk, punctures=tuple(punct))


def _curve_output(acc: dict, curve: MonomialCurve, t: complex, degree: int) -> complex:
    """Pull the d z-bar output back to the curve at ``z = zeta(t)``: the scalar
    part for ``degree=0``, the d t-bar coefficient for ``degree=1``."""
    if degree == 0:
        return complex(acc.get((), 0j))
    d = curve.derivative(np.asarray(t))
    return complex(sum(v * np.conj(d[zb[0]]) for zb, v in acc.items() if len(zb) == 1))


def _curve_apply(asm: CurveAssembly, which: str, phi_tau: Callable, q: int, t: complex,
                 pole: bool, cutoff_delta: float | None = None, extra_breaks=()) -> complex:
    z = asm.curve.normalization(np.asarray(t))[:, None]
    rest_fn = asm.k_rest if which == "K" else asm.p_rest
    pv = Cutoff(1.0, 2.0)
    brk = tuple(extra_breaks)
    if cutoff_delta is not None:
        brk += tuple(asm.curve.tau_radius(cutoff_delta * b) for b in pv.breaks)
    dom = _curve_domain(asm, t, pole, brk)

    def fn(tau):
        zeta = asm.curve.normalization(tau)
        dens = _curve_density(asm, rest_fn(zeta, z), phi_tau(tau), q, tau)
        if cutoff_delta is not None:
            cut = 1.0 - pv(zeta / cutoff_delta)
            dens = {k: v * cut for k, v in dens.items()}
        return dens

    acc = _integrate_nodes(dom, asm.res, fn)
    return _curve_output(acc, asm.curve, t, q - 1 if which == "K" else 0)


def _phi_breaks(asm: CurveAssembly, phi: SmoothForm) -> tuple:
    return tuple(asm.curve.tau_radius(b) for b in phi.breaks if b < asm.radius)


# ---------------------------------------------------------------------------
# operators

def koppelman_K(asm, phi: SmoothForm, z, schedule: PVSchedule | None = None):
    """``K phi (z)``.

    Ambient assemblies return an ExtForm in d z-bar; curve assemblies take the
    normalisation parameter ``t`` (``z = zeta(t)``) and return the scalar or
    d t-bar coefficient.  With a ``schedule`` the curve integral is cut off
    near the singular point and extrapolated.
    """
    if isinstance(asm, AmbientAssembly):
        if phi.degree == 0:
            return ExtForm.zero(asm.dim)  # no (0,-1) part
        return _ambient_apply(asm, asm.k_kernel, phi, z, True, phi)
    if phi.degree != 1:
        return 0j if phi.degree == 0 else None
    t = complex(z)
    ptau = lambda tau: _curve_phi(asm.curve, phi, tau)
    brk = _phi_breaks(asm, phi)
    if schedule is None:
        return _curve_apply(asm, "K", ptau, 1, t, True, extra_breaks=brk)
    vals = [_curve_apply(asm, "K", ptau, 1, t, True, d, brk) for d in schedule.deltas]
    return sep_regularize(vals, schedule).value


def koppelman_K_dbar(asm, phi: SmoothForm, z):
    """``K(dbar phi)(z)`` for a function ``phi``."""
    if phi.degree != 0:
        raise ValueError("only (0,0)-forms are differentiated here")
    if isinstance(asm, AmbientAssembly):
        return _ambient_apply(asm, asm.k_kernel, phi.dbar_form, z, True, phi)
    t = complex(z)
    ptau = lambda tau: _curve_dbar_phi(asm.curve, phi, tau)
    return _curve_apply(asm, "K", ptau, 1, t, True, extra_breaks=_phi_breaks(asm, phi))


def projection_P(asm, phi: SmoothForm, z):
    """``P phi (z)`` for a function ``phi`` (higher degrees give 0)."""
    if isinstance(asm, AmbientAssembly):
        if phi.degree != 0:
            return ExtForm.zero(asm.dim)
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        pole = _p_needs_pole(asm.weight, zz)
        return _ambient_apply(asm, asm.p_kernel, phi, zz, pole, phi)
    if phi.degree != 0:
        return 0j
    t = complex(z)
    pole = _p_needs_pole(asm.weight, asm.curve.normalization(np.asarray(t)))
    ptau = lambda tau: _curve_phi(asm.curve, phi, tau)
    return _curve_apply(asm, "P", ptau, 0, t, pole, extra_breaks=_phi_breaks(asm, phi))


def dbar_z(fn: Callable, z, dim: int, step: float = FD_STEP) -> ExtForm:
    """Finite-difference dbar in z of an ExtForm-valued (or scalar) function of z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))

    def lift(v):
        return v if isinstance(v, ExtForm) else ExtForm.scalar(v, dim)

    parts = dbar_partials(lambda p: lift(fn(p)), z, step)
    out = ExtForm.zero(dim)
    for k, dk in enumerate(parts):
        out = out + wedge(ExtForm({MultiBlade.from_masks(zbar=(k,)): 1}, dim), dk)
    return out


def p_holomorphy_residual(asm, phi: SmoothForm, z, step: float = FD_STEP) -> float:
    if isinstance(asm, AmbientAssembly):
        return dbar_z(lambda p: projection_P(asm, phi, p), z, asm.dim, step).max_abs()
    return abs(_dbar_t(lambda t: projection_P(asm, phi, t), complex(z), step))


def _dbar_t(fn: Callable[[complex], complex], t: complex, step: float) -> complex:
    fx = (fn(t + step) - fn(t - step)) / (2 * step)
    fy = (fn(t + 1j * step) - fn(t - 1j * step)) / (2 * step)
    return 0.5 * (fx + 1j * fy)


# ---------------------------------------------------------------------------
# reports

@dataclass
class SolveReport:
    points: list
    values: list
    residuals: list
    pv_orders: list = field(default_factory=list)
    runtime: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return float(max(self.residuals)) if self.residuals else 0.0


def verify_koppelman(asm, phi: SmoothForm, grid: Sequence, schedule: PVSchedule | None = None,
                     step: float = FD_STEP) -> SolveReport:
    """Pointwise residual of ``phi = dbar K phi + K dbar phi + P phi`` on ``grid``.

    For curve assemblies the grid holds normalisation parameters ``t``.
    """
    t0 = time.perf_counter()
    pts, vals, res = [], [], []
    for z in grid:
        if isinstance(asm, AmbientAssembly):
            zz = np.atleast_1d(np.asarray(z, dtype=complex))
            lhs = to_z(phi(zz[:, None])).map_coefficients(lambda c: np.asarray(c).reshape(-1)[0])
            dK = dbar_z(lambda p: koppelman_K(asm, phi, p), zz, asm.dim, step)
            rhs = dK + projection_P(asm, phi, zz)
            if phi.degree == 0:
                rhs = rhs + koppelman_K_dbar(asm, phi, zz)
            elif phi.degree < asm.dim:
                raise NotImplementedError("K(dbar phi) for 0 < q < N is not needed in scope")
            r = (lhs - rhs).max_abs()
            val = rhs
        else:
            t = complex(z)
            if phi.degree == 1:
                lhs = complex(_curve_phi(asm.curve, phi, np.asarray(t)))
                val = _dbar_t(lambda s: koppelman_K(asm, phi, s, schedule), t, step)
            else:
                lhs = complex(phi(asm.curve.normalization(np.asarray(t))[:, None]).scalar_part()[0])
                val = koppelman_K_dbar(asm, phi, t) + projection_P(asm, phi, t)
            r = abs(lhs - val)
        pts.append(z)
        vals.append(val)
        res.append(float(r))
    return SolveReport(pts, vals, res, runtime=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# moment condition on monomial curves

@dataclass(frozen=True)
class MomentReport:
    k: int | None
    residues: dict
    extends: bool


def moment_check(C: MonomialCurve, phi: LaurentPoly, xi_family: Sequence[int] | None = None) -> MomentReport:
    """Residues of ``phi * tau^m / tau^c`` for ``m`` in the semigroup up to ``2c``."""
    S = C.semigroup
    c = C.conductor
    if xi_family is None:
        xi_family = S.elements(2 * c)
    for m in xi_family:
        if m < 0 or not member(S, m):
            raise ValueError(f"test exponent {m} is not in the semigroup <{C.r},{C.s}>")
    residues = {int(m): residue(phi.shift(m - c)) for m in xi_family}
    exps = phi.exponents()
    k = exps[0] if len(exps) == 1 else None
    return MomentReport(k, residues, all(v == 0 for v in residues.values()))


@dataclass(frozen=True)
class ClassRow:
    k: int
    extends: bool
    member: bool
    offending: tuple[int, ...]


def classify_monomials(C: MonomialCurve, k_max: int) -> list[ClassRow]:
    """Moment verdict for ``tau^k``, ``0 <= k <= k_max``, cross-checked with the semigroup."""
    c = C.conductor
    if k_max < 2 * c:
        raise ValueError(f"k_max must be at least 2*conductor = {2 * c}")
    rows = []
    family = C.semigroup.elements(2 * c)
    for k in range(k_max + 1):
        rep = moment_check(C, LaurentPoly.monomial(k), family)
        mem = member(C.semigroup, k)
        if rep.extends != mem:
            raise InvariantViolation(
                f"(r,s)=({C.r},{C.s}), k={k}: moment verdict {rep.extends} but membership {mem}")
        bad = tuple(m for m, v in rep.residues.items() if v != 0)
        rows.append(ClassRow(k, rep.extends, mem, bad))
    return rows


def polynomial_extension(C: MonomialCurve, phi: LaurentPoly) -> Polynomial | None:
    """Ambient polynomial whose pullback is ``phi`` (None if some exponent is a gap)."""
    coeffs = {}
    for k, c in phi.coeffs.items():
        if k < 0:
            return None
        rep = semigroup_representation(C.semigroup, k)
        if rep is None:
            return None
        coeffs[rep] = coeffs.get(rep, 0) + c
    return Polynomial(coeffs, 2)


def obstruction_integrals(C: MonomialCurve, phi: LaurentPoly, chi: Cutoff,
                          family: Sequence[int] | None = None,
                          res: Resolution | None = None) -> dict:
    """``int_X dbar chi * phi * tau^m * omega`` by area quadrature on the tau-plane."""
    family = C.semigroup.elements(2 * C.conductor) if family is None else family
    om = cusp_structure_form(C)
    T = C.tau_radius(chi.outer)
    dom = Disc(0j, T, breaks=(C.tau_radius(chi.inner),))
    res = res or Resolution(n_theta=64, n_r=16, levels=0, n_sub=2)

    def dchi_dtaubar(tau):
        zeta = C.normalization(tau)
        d = C.derivative(tau)
        parts = chi.dbar(zeta)
        return parts[0] * np.conj(d[0]) + parts[1] * np.conj(d[1])

    out = {}
    for m in family:
        # dtau-bar ^ dtau = -(dtau ^ dtau-bar)
        vals = _integrate_nodes(dom, res, lambda tau: {
            0: -DZ_DZBAR * dchi_dtaubar(tau) * phi(tau) * tau ** m * om(tau)})
        out[int(m)] = complex(vals[0])
    return out


# ---------------------------------------------------------------------------
# compact support solves and Hartogs extension

@dataclass
class ExtensionReport:
    verdict: str
    points: list = field(default_factory=list)
    values: list = field(default_factory=list)
    reference: list = field(default_factory=list)
    obstruction: dict = field(default_factory=dict)
    residues: dict = field(default_factory=dict)
    extension: Polynomial | None = None
    dbar_residual: float | None = None
    runtime: float = 0.0

    @property
    def max_rel_error(self) -> float:
        errs = [abs(v - r) / max(abs(r), 1e-300) for v, r in zip(self.values, self.reference)]
        return float(max(errs)) if errs else 0.0


def compact_support_solve_ball(phi: Callable, dphi: Callable | None = None,
                               K_cut: Cutoff | None = None, z_cut: Cutoff | None = None,
                               res: Resolution | None = None):
    """Solver for ``dbar v = f = dbar chi * phi`` on C^2 with compact support.

    ``v(z) = int (g' ^ B)_2 ^ f`` with ``g'`` the ball weight with zeta and z
    interchanged.  The obstruction vanishes for degree reasons (q = 1 < N - 1
    is false only for N = 1), so it is returned as an exact empty dict.
    Returns ``(v, f, obstruction)``.
    """
    K_cut = K_cut or Cutoff(0.5, 0.9)
    z_cut = z_cut or Cutoff(1.2, 1.8)
    g = interchanged_ball_weight(z_cut, 2)
    B = bm_components(bm_admissible(2))
    res = res or Resolution(n_theta=16, n_r=8, levels=6, n_alpha=8, n_sub=1)
    asm = AmbientAssembly(g, B, K_cut.outer, res, K_cut.breaks)

    def f_eval(zeta):
        return one_form([d * phi(zeta) for d in K_cut.dbar(zeta)], BAR, 2)

    f = SmoothForm(f_eval, 2, 1, support=K_cut.outer, breaks=K_cut.breaks, name="dbar chi * phi")

    def v(z):
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        pole = float(np.linalg.norm(zz)) > K_cut.inner
        out = _ambient_apply(asm, asm.k_kernel, f, zz, pole, f)
        return complex(out.scalar_part())

    return v, f, {}


def hartogs_extend_ball(phi: Callable, points: Sequence, reference: Callable | None = None,
                        K_cut: Cutoff | None = None, res: Resolution | None = None,
                        dbar_step: float | None = None) -> ExtensionReport:
    """``Phi = (1 - chi) phi + v`` on C^2 with ``dbar v = dbar chi * phi``."""
    t0 = time.perf_counter()
    K_cut = K_cut or Cutoff(0.5, 0.9)
    v, f, obstruction = compact_support_solve_ball(phi, K_cut=K_cut, res=res)
    vals, refs = [], []
    pts = [np.asarray(p, dtype=complex) for p in points]
    for p in pts:
        chi = float(K_cut(p[:, None])[0])
        outside = (1.0 - chi) * complex(np.asarray(phi(p[:, None])).reshape(-1)[0]) if chi < 1 else 0j
        vals.append(outside + v(p))
        if reference is not None:
            refs.append(complex(reference(p)))
    dres = None
    if dbar_step is not None:
        errs = []
        for p in pts:
            if float(np.linalg.norm(p)) < K_cut.outer:
                dv = dbar_z(v, p, 2, dbar_step)
                errs.append((dv - to_z(f(p[:, None])).map_coefficients(lambda c: c[0])).max_abs())
        dres = float(max(errs)) if errs else 0.0
    return ExtensionReport("extends", [tuple(p) for p in pts], vals, refs, obstruction,
                           dbar_residual=dres, runtime=time.perf_counter() - t0)


def hartogs_extend_curve(C: MonomialCurve, phi: LaurentPoly, chi: Cutoff | None = None,
                         numeric: bool = True) -> ExtensionReport:
    """Moment condition first; if it holds the extension is the ambient polynomial."""
    t0 = time.perf_counter()
    rep = moment_check(C, phi)
    obstruction = {}
    if numeric:
        obstruction = obstruction_integrals(C, phi, chi or Cutoff(0.5, 0.9))
    bad = {m: v for m, v in rep.residues.items() if v != 0}
    if not rep.extends:
        return ExtensionReport("no-extension", obstruction=obstruction, residues=bad,
                               runtime=time.perf_counter() - t0)
    ext = polynomial_extension(C, phi)
    if ext is None:
        raise InvariantViolation("moment condition holds but phi has a gap exponent")
    return ExtensionReport("extends", obstruction=obstruction, residues={}, extension=ext,
                           runtime=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# asymptotics

@dataclass
class ProbeReport:
    distances: list
    magnitudes: list
    slope: float
    local_slopes: list
    tail_spread: float
    stable: bool
    finite: bool


def asymptotic_probe(asm, phi: SmoothForm, path: Sequence, distances: Sequence[float] | None = None,
                     tail: int = 3, stability: float = 0.3,
                     schedule: PVSchedule | None = None) -> ProbeReport:
    """Least-squares slope of ``log|K phi(z_j)|`` against ``-log delta(z_j)``.

    ``delta`` defaults to the distance of ``z_j`` from the origin (the
    singular point of the curve, or the point approached in the plane).
    """
    mags, ds = [], []
    for j, z in enumerate(path):
        val = koppelman_K(asm, phi, z, schedule) if isinstance(asm, CurveAssembly) else koppelman_K(asm, phi, z)
        mag = val.max_abs() if isinstance(val, ExtForm) else abs(val)
        if distances is not None:
            d = distances[j]
        elif isinstance(asm, CurveAssembly):
            d = float(np.linalg.norm(asm.curve.normalization(np.asarray(complex(z)))))
        else:
            d = float(np.linalg.norm(np.atleast_1d(z)))
        mags.append(float(mag))
        ds.append(d)
    x = -np.log(ds)
    y = np.log(np.maximum(mags, 1e-300))
    finite = bool(np.all(np.isfinite(y)) and np.all(np.asarray(mags) > 0))
    slope = float(np.polyfit(x, y, 1)[0]) if finite else float("nan")
    local = [float((y[i + 1] - y[i]) / (x[i + 1] - x[i])) for i in range(len(x) - 1)]
    tail_vals = local[-tail:] if local else []
    spread = float(max(tail_vals) - min(tail_vals)) if tail_vals else 0.0
    return ProbeReport(ds, mags, slope, local, spread, spread <= stability and finite, finite)
