"""Deterministic quadrature on circles, discs, annuli and balls in C^2.

Area rules are polar (hyperspherical in C^2) about a pole.  Radial panels end
where each ray from the pole crosses a break circle concentric with the
domain (once if the circle contains the pole, twice or never otherwise), so integrands that are smooth between breaks stay smooth on every
panel and the angular sums converge spectrally.  The panel next to the pole
is graded geometrically.  Further punctures get their own polar patch through
a C-infinity partition of unity.

Node sets depend only on the domain and the :class:`Resolution`, never on the
integrand, so results are bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError
from .pv import PVSchedule, SepResult, sep_regularize


@dataclass(frozen=True)
class Puncture:
    """Point where the integrand may be (integrably) singular.

    With ``radius > 0`` the open disc/ball of that radius is cut out of the domain.
    """

    point: complex | tuple
    radius: float = 0.0


@dataclass(frozen=True)
class Circle:
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Disc:
    center: complex = 0j
    radius: float = 1.0
    breaks: tuple[float, ...] = ()
    punctures: tuple[Puncture, ...] = ()

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        for p in self.punctures:
            if abs(complex(p.point) - self.center) >= self.radius:
                raise ValueError(f"puncture {p.point} not strictly inside the disc")


@dataclass(frozen=True)
class Annulus:
    center: complex = 0j
    r_in: float = 0.5
    r_out: float = 1.0
    breaks: tuple[float, ...] = ()
    punctures: tuple[Puncture, ...] = ()

    def __post_init__(self):
        if not 0 < self.r_in < self.r_out:
            raise ValueError("need 0 < r_in < r_out")
        for p in self.punctures:
            d = abs(complex(p.point) - self.center)
            if not self.r_in < d < self.r_out:
                raise ValueError(f"puncture {p.point} not strictly inside the annulus")


@dataclass(frozen=True)
class Ball2:
    center: tuple = (0j, 0j)
    radius: float = 1.0
    breaks: tuple[float, ...] = ()
    punctures: tuple[Puncture, ...] = ()

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        c = np.asarray(self.center, dtype=complex)
        for p in self.punctures:
            if np.linalg.norm(np.asarray(p.point, dtype=complex) - c) >= self.radius:
                raise ValueError(f"puncture {p.point} not strictly inside the ball")


@dataclass(frozen=True)
class Resolution:
    """Node counts: trapezoid nodes per angle, Gauss nodes per radial panel,
    graded panels toward a pole."""

    n_theta: int = 32
    n_r: int = 8
    levels: int = 6
    n_alpha: int = 8
    n_sub: int = 1

    def refine(self) -> "Resolution":
        return Resolution(2 * self.n_theta, self.n_r + 1, self.levels + 4, self.n_alpha + 4,
                          2 * self.n_sub)


@dataclass
class QuadResult:
    value: complex
    err_estimate: float
    nodes_used: int


DEFAULT_TOL = {"circle": 1e-12, "planar": 1e-8, "ball2": 1e-4}


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def partition_profile(t):
    """C-infinity profile: 1 at 0, 0 on [1, inf), flat to all orders at both ends."""
    t = np.asarray(t, dtype=float)

    def f(x):
        return np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)

    a = f(1.0 - t)
    b = f(t)
    return a / (a + b)


# ---------------------------------------------------------------------------
# radial panels along rays

def _ray_crossings(b: np.ndarray, d2: float, radii: Sequence[float], outer: float) -> list[np.ndarray]:
    """Sorted distances along each ray to the circles/spheres about the domain centre.

    ``b`` is the projection of (pole - centre) on the ray direction and ``d2``
    its squared distance.  Circles containing the pole are crossed once;
    others are crossed twice or not at all, in which case both entries are
    parked on the outer crossing (zero-length panels).  The last column is
    the crossing of the ``outer`` boundary.
    """
    last = -b + np.sqrt(b * b + outer * outer - d2)
    cols = []
    for R in radii:
        disc = b * b + R * R - d2
        if R * R > d2:
            cols.append(-b + np.sqrt(disc))
            continue
        ok = (disc >= 0) & (b < 0)
        root = np.sqrt(np.where(ok, disc, 0.0))
        cols.append(np.where(ok, -b - root, last))
        cols.append(np.where(ok, -b + root, last))
    if not cols:
        return [last]
    table = np.sort(np.stack(cols, axis=1), axis=1)
    return [table[:, i] for i in range(table.shape[1])] + [last]


def _radial_nodes(starts: np.ndarray, crossings: list[np.ndarray], res: Resolution,
                  graded: bool, eps: float = 0.0):
    """Radial nodes/weights per ray, shape (n_rays, n_nodes)."""
    x, w = gauss_legendre(res.n_r)
    edges = []
    graded_edges = []
    first = crossings[0]
    lo = starts
    if graded and res.levels > 0:
        # graded toward the pole up to a quarter of the first crossing; the
        # rest of the first panel is refined like any other panel
        top = 0.25 * first
        if eps > 0:
            if np.any(top <= eps):
                raise ValueError("excluded radius too large for the graded panel")
            grid = [eps * (top / eps) ** (i / res.levels) for i in range(res.levels + 1)]
        else:
            grid = [np.zeros_like(first)] + [top * 2.0 ** (i - res.levels) for i in range(res.levels + 1)]
        graded_edges.extend(zip(grid[:-1], grid[1:]))
        edges.append((top, first))
        lo = first
        rest = crossings[1:]
    else:
        rest = crossings
    for hi in rest:
        edges.append((lo, hi))
        lo = hi
    r_all, w_all = [], []
    sub = list(graded_edges)
    for a, b in edges:
        for i in range(res.n_sub):
            sub.append((a + (b - a) * (i / res.n_sub), a + (b - a) * ((i + 1) / res.n_sub)))
    for a, b in sub:
        length = b - a
        r_all.append(a[:, None] + length[:, None] * x[None, :])
        w_all.append(length[:, None] * w[None, :])
    return np.concatenate(r_all, axis=1), np.concatenate(w_all, axis=1)


def _planar_polar(pole: complex, center: complex, outer: float, breaks: Sequence[float],
                  res: Resolution, inner: float | None = None, graded: bool = True,
                  eps: float = 0.0):
    """Polar rule about ``pole`` for the disc/annulus about ``center``."""
    n = res.n_theta
    theta = 2 * np.pi * (np.arange(n) + 0.5) / n
    u = np.exp(1j * theta)
    off = pole - center
    b = np.real(np.conj(u) * off)
    d2 = abs(off) ** 2
    radii = sorted({r for r in breaks if (inner or 0) < r < outer})
    crossings = _ray_crossings(b, d2, radii, outer)
    if inner is not None:
        starts = _ray_crossings(b, d2, [], inner)[0]
        graded = False
    else:
        starts = np.full(n, eps)
    r, wr = _radial_nodes(starts, crossings, res, graded, eps)
    pts = pole + r * u[:, None]
    wts = wr * r * (2 * np.pi / n)
    return pts.ravel(), wts.ravel()


def _sphere_directions(res: Resolution):
    n = res.n_theta
    th = 2 * np.pi * (np.arange(n) + 0.5) / n
    xa, wa = gauss_legendre(res.n_alpha)
    alpha = 0.5 * np.pi * xa
    wal = 0.5 * np.pi * wa * np.cos(alpha) * np.sin(alpha)
    A, T1, T2 = np.meshgrid(alpha, th, th, indexing="ij")
    W = np.broadcast_to(wal[:, None, None], A.shape) * (2 * np.pi / n) ** 2
    u = np.stack([np.cos(A) * np.exp(1j * T1), np.sin(A) * np.exp(1j * T2)]).reshape(2, -1)
    return u, W.ravel()


def _ball_polar(pole: np.ndarray, center: np.ndarray, outer: float, breaks: Sequence[float],
                res: Resolution, graded: bool = True, eps: float = 0.0):
    u, wu = _sphere_directions(res)
    off = pole - center
    b = np.real(np.sum(np.conj(u) * off[:, None], axis=0))
    d2 = float(np.sum(np.abs(off) ** 2))
    radii = sorted({r for r in breaks if 0 < r < outer})
    crossings = _ray_crossings(b, d2, radii, outer)
    r, wr = _radial_nodes(np.full(b.shape, eps), crossings, res, graded, eps)
    pts = pole[:, None, None] + r[None, :, :] * u[:, :, None]
    wts = wr * r ** 3 * wu[:, None]
    return pts.reshape(2, -1), wts.ravel()


# ---------------------------------------------------------------------------
# rules

def _patch_radius(q, others, boundary_dist: float, break_dist: float) -> float:
    base = boundary_dist
    for o in others:
        base = min(base, float(np.linalg.norm(np.atleast_1d(np.asarray(q) - np.asarray(o)))))
    if break_dist >= 0.25 * base:
        base = min(base, break_dist)
    return 0.45 * base


def _primary_ok(domain, p) -> bool:
    return not isinstance(domain, Annulus)


def rule(domain, res: Resolution | None = None):
    """Fixed nodes and weights for ``domain``.

    Returns ``(points, weights, patches)``; ``patches`` is a list of
    ``(points, weights, partition_values)`` for the secondary punctures, and
    the main node weights are already multiplied by ``1 - sum(partitions)``
    where needed (see :func:`apply_rule`).
    """
    res = res or Resolution()
    if isinstance(domain, Circle):
        n = res.n_theta
        theta = 2 * np.pi * np.arange(n) / n
        u = np.exp(1j * theta)
        pts = domain.center + domain.radius * u
        wts = 1j * domain.radius * u * (2 * np.pi / n)
        return pts, wts, []
    punct = list(domain.punctures)
    primary = punct[0] if punct and _primary_ok(domain, punct[0]) else None
    secondary = punct[1:] if primary is not None else punct
    is_ball = isinstance(domain, Ball2)
    c = np.asarray(domain.center, dtype=complex)
    if is_ball:
        pole = np.asarray(primary.point, dtype=complex) if primary else c
        pts, wts = _ball_polar(pole, c, domain.radius, domain.breaks, res,
                               graded=primary is not None, eps=primary.radius if primary else 0.0)
    elif isinstance(domain, Annulus):
        pts, wts = _planar_polar(complex(c), complex(c), domain.r_out, domain.breaks, res,
                                 inner=domain.r_in)
    else:
        pole = complex(primary.point) if primary else complex(c)
        pts, wts = _planar_polar(pole, complex(c), domain.radius, domain.breaks, res,
                                 graded=primary is not None, eps=primary.radius if primary else 0.0)
    patches = []
    others_all = [p.point for p in punct]
    for q in secondary:
        qp = np.asarray(q.point, dtype=complex)
        dq = float(np.linalg.norm(np.atleast_1d(qp - c)))
        bdist = domain.radius - dq if not isinstance(domain, Annulus) else min(domain.r_out - dq, dq - domain.r_in)
        brk = min((abs(dq - r) for r in domain.breaks), default=np.inf)
        others = [o for o in others_all if o is not q.point]
        rho = _patch_radius(qp, others, bdist, brk)
        if q.radius >= 0.5 * rho:
            raise ValueError("puncture exclusion radius too large for its patch")
        if is_ball:
            lp, lw = _ball_polar(qp, qp, rho, (0.5 * rho,), res, graded=True, eps=q.radius)
            dist = np.sqrt(np.sum(np.abs(lp - qp[:, None]) ** 2, axis=0))
            dist_main = np.sqrt(np.sum(np.abs(pts - qp[:, None]) ** 2, axis=0))
        else:
            lp, lw = _planar_polar(complex(qp), complex(qp), rho, (0.5 * rho,), res, graded=True,
                                   eps=q.radius)
            dist = np.abs(lp - complex(qp))
            dist_main = np.abs(pts - complex(qp))
        patches.append((lp, lw * partition_profile(dist / rho)))
        wts = wts * (1.0 - partition_profile(dist_main / rho))
    return pts, wts, patches


def apply_rule(f: Callable, nodes) -> complex:
    pts, wts, patches = nodes
    total = np.sum(wts * f(pts))
    for lp, lw in patches:
        total = total + np.sum(lw * f(lp))
    return complex(total)


def node_count(nodes) -> int:
    pts, wts, patches = nodes
    return int(np.size(wts) + sum(np.size(lw) for _, lw in patches))


def default_resolution(domain) -> Resolution:
    if isinstance(domain, Circle):
        return Resolution(n_theta=32)
    if isinstance(domain, Ball2):
        return Resolution(n_theta=12, n_r=6, levels=4, n_alpha=6)
    return Resolution()


def _kind(domain) -> str:
    if isinstance(domain, Circle):
        return "circle"
    if isinstance(domain, Ball2):
        return "ball2"
    return "planar"


def integrate(domain, f: Callable, tol: float | None = None, res: Resolution | None = None,
              adaptive: bool = True, max_nodes: int = 4_000_000) -> QuadResult:
    """Integrate ``f`` over ``domain``.

    Area domains use Lebesgue measure; a :class:`Circle` gives the contour
    integral ``oint f(w) dw`` (counter-clockwise).  ``f`` is vectorised:
    complex points of shape ``(M,)`` (planar) or ``(2, M)`` (ball) in, values out.

    With ``adaptive=True`` the resolution is refined until two successive
    values differ by less than ``tol``; that difference is the error estimate.
    """
    tol = DEFAULT_TOL[_kind(domain)] if tol is None else tol
    res = res or default_resolution(domain)
    nodes = rule(domain, res)
    value = apply_rule(f, nodes)
    used = node_count(nodes)
    if not adaptive:
        return QuadResult(value, float("nan"), used)
    while True:
        res = res.refine()
        nodes = rule(domain, res)
        n = node_count(nodes)
        if n > max_nodes:
            raise AccuracyError(
                f"node budget {max_nodes} exhausted before reaching tol={tol:g}",
                partial=QuadResult(value, err, used) if used else None,
            )
        new = apply_rule(f, nodes)
        err = abs(new - value)
        value, used = new, n
        if err <= tol:
            return QuadResult(value, err, used)


def with_breaks(domain, extra: Sequence[float]):
    return replace(domain, breaks=tuple(sorted(set(domain.breaks) | set(extra))))


def pv_integrate(domain, f: Callable, cutoff: Callable, schedule: PVSchedule,
                 cutoff_breaks: Callable[[float], Sequence[float]] | None = None,
                 tol: float | None = None, res: Resolution | None = None,
                 adaptive: bool = True) -> tuple[QuadResult, SepResult]:
    """Principal value ``lim_delta integrate(cutoff(., delta) * f)``.

    ``cutoff(points, delta)`` is the regularising factor (0 near the singular
    set, 1 away from it); ``cutoff_breaks(delta)`` lists the radii where it
    changes smoothness so they can be made panel boundaries.
    """
    values = []
    used = 0
    errs = []
    for delta in schedule.deltas:
        dom = with_breaks(domain, cutoff_breaks(delta)) if cutoff_breaks else domain
        r = integrate(dom, lambda p, d=delta: cutoff(p, d) * f(p), tol=tol, res=res,
                      adaptive=adaptive)
        values.append(r.value)
        used += r.nodes_used
        errs.append(0.0 if np.isnan(r.err_estimate) else r.err_estimate)
    sep = sep_regularize(values, schedule)
    return QuadResult(sep.value, float(sep.error + max(errs)), used), sep
