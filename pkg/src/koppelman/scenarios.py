"""Named experiments, their configuration and machine-readable reports.

A scenario is driven by a :class:`ScenarioConfig` (built from flags or a TOML
file) and returns a :class:`RunReport`.  Reports are deterministic: the JSON
document holds only configuration, numbers and verdicts; wall-clock timings
live in a separate metadata document.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .errors import AccuracyError, ConfigError, DivergenceError
from .exterior import BAR, contract_eta, one_form
from .geometry import (MonomialCurve, TestForm, curve_pairing, lelong_point, omega_blowup_exponent,
                       pullback_gamma_check)
from .kernels import (Cutoff, ball_weight, hefer_single, interchanged_ball_weight, singular_weight_ga,
                      weight_contract_residual, weight_product)
from .laurent import parse_laurent
from .poly import Polynomial
from .pv import PVSchedule
from .quad import Resolution
from .solver import (CurveAssembly, SmoothForm, asymptotic_probe, classify_monomials, curve_assembly,
                     disc_assembly, function_form, hartogs_extend_ball, hartogs_extend_curve,
                     p_holomorphy_residual, projection_P, verify_koppelman)

SCENARIOS = (
    "verify-koppelman", "cusp-classify", "moment-check", "hartogs",
    "structure-form", "pv-convergence", "asymptotic-probe", "weight-audit",
)

# section -> key -> default; None means "scenario decides"
SCHEMA: dict[str, dict[str, Any]] = {
    "geometry": {"preset": None, "r": 2, "s": 3, "kmax": None, "phi": None,
                 "curves": None, "radii": None},
    "quadrature": {"tol": None, "n_theta": None, "n_r": None, "levels": None,
                   "n_alpha": None, "n_sub": None},
    "pv": {"j0": 3, "j1": 12, "extrapolation": "richardson", "order": 2},
    "grid": {"name": None, "extent": None, "seed": 0},
    "checks": {},
    "output": {"path": None, "csv": None},
}

CONFIG_HELP = """\
configuration (TOML; every key optional, flags override the file):

  scenario = "<name>"
  [geometry]   preset, r = 2, s = 3, kmax (default 2(r-1)(s-1)), phi (Laurent
               polynomial in tau, e.g. "1 + tau**2"), curves (list of [r, s];
               default [[r, s]]), radii (structure-form; default [0.25, 0.5, 0.9])
  [quadrature] tol (adaptive tolerance), n_theta, n_r, levels, n_alpha, n_sub
               (override the scenario's default resolution)
  [pv]         j0 = 3, j1 = 12 (cutoffs 2^-j0 .. 2^-j1; the cutoff route of
               pv-convergence stops at 2^-10), extrapolation = "richardson" |
               "none", order = 2
  [grid]       name ("NxM" square, "randomN" disc sample, "pathN" geometric
               path), extent (half-width or radius), seed = 0
  [checks]     <check name> = tolerance (override a stored tolerance)
  [output]     path (JSON report), csv (plot data)
"""


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    geometry: dict = field(default_factory=dict)
    quadrature: dict = field(default_factory=dict)
    pv: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}",
                              field="scenario")
        for section, defaults in SCHEMA.items():
            given = getattr(self, section)
            if not isinstance(given, dict):
                raise ConfigError(f"[{section}] must be a table", field=section)
            if section == "checks":
                continue
            for key in given:
                if key not in defaults:
                    raise ConfigError(f"unknown key {key!r} in [{section}]", field=f"{section}.{key}")
            object.__setattr__(self, section, {**defaults, **{k: v for k, v in given.items() if v is not None}})
        _validate(self)

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        for key in data:
            if key != "scenario" and key not in SCHEMA:
                raise ConfigError(f"unknown top-level key {key!r}", field=key)
        if "scenario" not in data:
            raise ConfigError("missing scenario name", field="scenario")
        return cls(**data)

    @classmethod
    def from_toml(cls, path: str | Path, overrides: dict | None = None) -> "ScenarioConfig":
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}", field="config") from None
        for section, values in (overrides or {}).items():
            if section == "scenario":
                data["scenario"] = values
                continue
            data.setdefault(section, {}).update(values)
        return cls.from_mapping(data)

    def echo(self) -> dict:
        out = {"scenario": self.scenario}
        for section in SCHEMA:
            out[section] = {k: getattr(self, section)[k] for k in sorted(getattr(self, section))}
        return out

    def schedule(self, cap: int | None = None) -> PVSchedule:
        j1 = self.pv["j1"] if cap is None else min(self.pv["j1"], cap)
        return PVSchedule.geometric(self.pv["j0"], j1, extrapolation=self.pv["extrapolation"],
                                    order=min(self.pv["order"], j1 - self.pv["j0"]))

    def resolution(self, base: Resolution) -> Resolution:
        q = {k: v for k, v in self.quadrature.items() if k != "tol" and v is not None}
        return replace(base, **q)


def _validate(cfg: ScenarioConfig):
    g, pv, grid = cfg.geometry, cfg.pv, cfg.grid
    for key in ("r", "s"):
        if not isinstance(g[key], int) or isinstance(g[key], bool):
            raise ConfigError(f"geometry.{key} must be an integer", field=f"geometry.{key}")
    if not (2 <= g["r"] < g["s"]) or math.gcd(g["r"], g["s"]) != 1:
        raise ConfigError("need coprime 2 <= r < s", field="geometry.r")
    if g["kmax"] is not None and (not isinstance(g["kmax"], int) or g["kmax"] < 0):
        raise ConfigError("geometry.kmax must be a non-negative integer", field="geometry.kmax")
    if g["curves"] is not None:
        try:
            curves = [tuple(int(x) for x in c) for c in g["curves"]]
            for r, s in curves:
                MonomialCurve(r, s)
        except (TypeError, ValueError):
            raise ConfigError("geometry.curves must be a list of coprime [r, s] pairs",
                              field="geometry.curves") from None
    if g["phi"] is not None:
        try:
            parse_laurent(str(g["phi"]))
        except ValueError as exc:
            raise ConfigError(f"geometry.phi: {exc}", field="geometry.phi") from None
    if g["radii"] is not None and not all(0 < float(x) < 1 for x in g["radii"]):
        raise ConfigError("geometry.radii must lie in (0, 1)", field="geometry.radii")
    presets = PRESETS.get(cfg.scenario, ())
    if g["preset"] is not None and g["preset"] not in presets:
        raise ConfigError(f"unknown preset {g['preset']!r} for {cfg.scenario}; choose from {', '.join(presets)}",
                          field="geometry.preset")
    for key in ("n_theta", "n_r", "levels", "n_alpha", "n_sub"):
        v = cfg.quadrature[key]
        if v is not None and (not isinstance(v, int) or v < 1):
            raise ConfigError(f"quadrature.{key} must be a positive integer", field=f"quadrature.{key}")
    if cfg.quadrature["tol"] is not None and not float(cfg.quadrature["tol"]) > 0:
        raise ConfigError("quadrature.tol must be positive", field="quadrature.tol")
    if not (isinstance(pv["j0"], int) and isinstance(pv["j1"], int) and 0 <= pv["j0"] < pv["j1"] - 1):
        raise ConfigError("need integers 0 <= pv.j0 < pv.j1 - 1", field="pv.j0")
    if pv["extrapolation"] not in ("richardson", "none"):
        raise ConfigError("pv.extrapolation must be 'richardson' or 'none'", field="pv.extrapolation")
    if not isinstance(pv["order"], int) or pv["order"] < 1:
        raise ConfigError("pv.order must be a positive integer", field="pv.order")
    if not isinstance(grid["seed"], int) or isinstance(grid["seed"], bool):
        raise ConfigError("grid.seed must be an integer", field="grid.seed")
    if grid["name"] is not None:
        try:
            _parse_grid(grid["name"], 0.4, 0)
        except ValueError as exc:
            raise ConfigError(str(exc), field="grid.name") from None
    known = CHECKS.get(cfg.scenario, {})
    for key, tol in cfg.checks.items():
        if key not in known:
            raise ConfigError(f"unknown check {key!r} for {cfg.scenario}; known: {', '.join(sorted(known))}",
                              field=f"checks.{key}")
        if isinstance(tol, bool) or not isinstance(tol, (int, float)):
            raise ConfigError(f"checks.{key} must be a number", field=f"checks.{key}")


def _parse_grid(name: str, extent: float, seed: int) -> list[complex]:
    name = str(name)
    if "x" in name:
        a, b = name.split("x", 1)
        if not (a.isdigit() and b.isdigit()) or int(a) < 1 or int(b) < 1:
            raise ValueError(f"bad grid name {name!r}")
        xs = np.linspace(-extent, extent, int(a)) if int(a) > 1 else np.zeros(1)
        ys = np.linspace(-extent, extent, int(b)) if int(b) > 1 else np.zeros(1)
        return [complex(x, y) for x in xs for y in ys]
    if name.startswith("random") and name[6:].isdigit():
        rng = np.random.default_rng(seed)
        n = int(name[6:])
        rad = extent * np.sqrt(rng.random(n))
        ang = 2 * np.pi * rng.random(n)
        return [complex(z) for z in rad * np.exp(1j * ang)]
    if name.startswith("path") and name[4:].isdigit():
        return [complex(extent * 2 ** (-j / 2) * np.exp(0.7j)) for j in range(int(name[4:]))]
    if name == "empty0":
        return []
    raise ValueError(f"bad grid name {name!r}; use NxM, randomN or pathN")


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Check:
    """One verdict; ``op`` compares ``value`` with the stored ``tolerance``."""

    name: str
    value: float
    tolerance: float
    op: str = "<"

    @property
    def passed(self) -> bool:
        v, t = self.value, self.tolerance
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        return {"<": v < t, "<=": v <= t, "==": v == t}[self.op]


@dataclass
class RunReport:
    scenario: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    rows: list[tuple] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    error: str | None = None
    version: str = __version__

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def document(self) -> dict:
        return {
            "scenario": self.scenario,
            "version": self.version,
            "config": self.config,
            "checks": [{"name": c.name, "value": c.value, "tolerance": c.tolerance, "op": c.op,
                        "passed": c.passed} for c in self.checks],
            "results": self.results,
            "rows": [list(r) for r in self.rows],
            "error": self.error,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(_plain(self.document()), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def meta_json(self) -> str:
        meta = {"scenario": self.scenario, "version": self.version,
                "timings": {k: round(v, 6) for k, v in self.timings.items()}}
        return json.dumps(meta, indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {_fmt(c.value)} {c.op} {_fmt(c.tolerance)}"
                 for c in self.checks]
        if self.error:
            lines.append(f"ERROR {self.error}")
        return "\n".join(lines)


def _fmt(x) -> str:
    return f"{x:.3e}" if isinstance(x, float) else str(x)


def _plain(obj):
    """JSON-safe copy: complex -> [re, im], numpy scalars -> python, NaN/inf -> strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(float(obj.real)), _plain(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


CSV_HEADER = ("re_z", "im_z", "re_val", "im_val", "residual")


def plotdata_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for z, val, res in report.rows:
        z, val = complex(z), complex(val)
        w.writerow([repr(z.real), repr(z.imag), repr(val.real), repr(val.imag), repr(float(res))])
    return buf.getvalue()


def emit_plotdata(report: RunReport, path: str | Path) -> Path:
    """Write the report rows as CSV ``(re z, im z, re val, im val, residual)``."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(plotdata_csv(report))
    return path


# ---------------------------------------------------------------------------
# scenario implementations

PRESETS = {
    "verify-koppelman": ("disc-bump", "disc-projection", "cusp-bump"),
    "hartogs": ("ball", "curve"),
    "pv-convergence": ("all", "lelong-point", "cusp-routes"),
    "asymptotic-probe": ("all", "disc", "cusp"),
}

CHECKS: dict[str, dict[str, tuple[float, str]]] = {
    "cusp-classify": {"disagreements": (0, "==")},
    "structure-form": {"max_rel_deviation": (1e-8, "<")},
    "verify-koppelman": {"max_residual": (1e-4, "<"), "p_holomorphy": (1e-5, "<"),
                         "p_reproduces_holomorphic": (1e-6, "<"), "cusp_max_residual": (1e-3, "<")},
    "moment-check": {"obstruction_vs_residue": (1e-6, "<"), "verdict_consistent": (1, "==")},
    "hartogs": {"max_rel_error": (1e-2, "<"), "obstruction_vs_residue": (1e-6, "<")},
    "pv-convergence": {"lelong_point_error": (1e-8, "<"), "route_disagreement": (1e-3, "<")},
    "asymptotic-probe": {"disc_exponent": (0.2, "<"), "cusp_finite": (1, "=="),
                         "cusp_tail_spread": (0.3, "<=")},
    "weight-audit": {"weight_residual": (1e-5, "<"), "hefer_residual": (1e-12, "<")},
}


class _Run:
    """Collects checks, results and timings while a scenario executes."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.report = RunReport(cfg.scenario, cfg.echo())

    def check(self, kind: str, value, name: str | None = None):
        tol, op = CHECKS[self.cfg.scenario][kind]
        tol = self.cfg.checks.get(kind, tol)
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        elif not isinstance(value, int):
            value = float(value)
        self.report.checks.append(Check(name or kind, value, tol, op))

    def timed(self, label: str, fn: Callable, *args, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*args, **kw)
        finally:
            self.report.timings[label] = self.report.timings.get(label, 0.0) + time.perf_counter() - t0


def _curves(cfg: ScenarioConfig) -> list[MonomialCurve]:
    g = cfg.geometry
    pairs = g["curves"] if g["curves"] is not None else [[g["r"], g["s"]]]
    return [MonomialCurve(int(r), int(s)) for r, s in pairs]


def _semigroup_oracle(r: int, s: int, k_max: int) -> set[int]:
    """All ``a*r + b*s <= k_max`` by enumeration of generator combinations."""
    return {a * r + b * s for a in range(k_max // r + 1) for b in range(k_max // s + 1)
            if a * r + b * s <= k_max}


def _cusp_classify(run: _Run):
    table = {}
    for C in _curves(run.cfg):
        c = C.conductor
        k_max = run.cfg.geometry["kmax"] if run.cfg.geometry["kmax"] is not None else 2 * c
        rows = run.timed("classify", classify_monomials, C, k_max)
        oracle = _semigroup_oracle(C.r, C.s, k_max)
        bad = [row.k for row in rows if row.extends != (row.k in oracle)]
        key = f"{C.r},{C.s}"
        table[key] = {"kmax": k_max, "conductor": c,
                      "non_extending": [row.k for row in rows if not row.extends],
                      "rows": [[row.k, row.extends, row.member] for row in rows]}
        run.check("disagreements", len(bad), f"disagreements[{key}]")
    run.report.results["classification"] = table


def _structure_form(run: _Run):
    radii = run.cfg.geometry["radii"] or [0.25, 0.5, 0.9]
    out = {}
    for C in _curves(run.cfg):
        key = f"{C.r},{C.s}"
        devs = {}
        for rho in radii:
            rep = run.timed("pullback", pullback_gamma_check, C, float(rho))
            devs[repr(float(rho))] = rep.max_rel_deviation
            run.check("max_rel_deviation", rep.max_rel_deviation, f"max_rel_deviation[{key}@{float(rho)}]")
        out[key] = {"conductor": C.conductor, "deviations": devs,
                    "blowup_exponent": run.timed("blowup", omega_blowup_exponent, C)}
    run.report.results["structure_form"] = out


def _disc_bump_form() -> SmoothForm:
    bump = Cutoff(0.9, 1.6)
    return function_form(lambda z: np.conj(z[0]) * bump(z), 1,
                         dbar=[lambda z: bump(z) + np.conj(z[0]) * bump.dbar(z)[0]],
                         support=bump.outer, breaks=bump.breaks, name="conj(zeta) * bump")


def _cusp_bump_form() -> SmoothForm:
    from .quad import partition_profile

    def ev(z):
        w = 1 - partition_profile(np.sqrt(np.abs(z[0]) ** 2 + np.abs(z[1]) ** 2) / 0.06)
        return one_form([0 * w, w * (1 + np.conj(z[0]))], BAR, 2)

    return SmoothForm(ev, 2, 1, name="(1 + conj(zeta_1)) d zeta-bar_2 off the origin")


def _grid(cfg: ScenarioConfig, name: str, extent: float) -> list[complex]:
    g = cfg.grid
    return _parse_grid(g["name"] or name, float(g["extent"] if g["extent"] is not None else extent), g["seed"])


def _verify_koppelman(run: _Run):
    cfg = run.cfg
    preset = cfg.geometry["preset"] or "disc-bump"
    if preset == "disc-bump":
        asm = disc_assembly("ball")
        asm = replace(asm, res=cfg.resolution(asm.res))
        grid = _grid(cfg, "5x5", 0.4)
        rep = run.timed("koppelman", verify_koppelman, asm, _disc_bump_form(), grid)
        run.report.rows = [(z, complex(v.scalar_part()), r) for z, v, r in zip(rep.points, rep.values, rep.residuals)]
        run.check("max_residual", rep.residual)
    elif preset == "disc-projection":
        asm = disc_assembly("ball")
        asm = replace(asm, res=cfg.resolution(asm.res))
        grid = _grid(cfg, "random20", 0.5)
        forms = {
            "conj(zeta)": function_form(lambda z: np.conj(z[0]), 1, dbar=[lambda z: np.ones_like(z[0])]),
            "|zeta|^2": function_form(lambda z: np.abs(z[0]) ** 2, 1, dbar=[lambda z: z[0]]),
            "zeta^2": function_form(lambda z: z[0] ** 2, 1, dbar=[lambda z: 0 * z[0]]),
        }
        per = {}
        for name, phi in forms.items():
            res = [run.timed("holomorphy", p_holomorphy_residual, asm, phi, z) for z in grid]
            per[name] = max(res)
            run.check("p_holomorphy", max(res), f"p_holomorphy[{name}]")
        rows = []
        for z in grid:
            val = complex(run.timed("projection", projection_P, asm, forms["zeta^2"], z).scalar_part())
            rows.append((z, val, abs(val - z ** 2)))
        run.report.rows = rows
        run.report.results["p_holomorphy"] = per
        run.check("p_reproduces_holomorphic", max((r[2] for r in rows), default=0.0),
                  "p_reproduces_holomorphic[zeta^2]")
    else:  # cusp-bump
        g = cfg.geometry
        asm = curve_assembly(g["r"], g["s"])
        asm = replace(asm, res=cfg.resolution(asm.res))
        grid = _grid(cfg, "path5", 0.6)
        rep = run.timed("koppelman", verify_koppelman, asm, _cusp_bump_form(), grid)
        run.report.rows = [(z, complex(v), r) for z, v, r in zip(rep.points, rep.values, rep.residuals)]
        run.check("cusp_max_residual", rep.residual)
    run.report.results["preset"] = preset


def _moment(run: _Run, C: MonomialCurve, phi_text: str):
    phi = parse_laurent(phi_text)
    if phi.min_order() is not None and phi.min_order() < 0:
        raise ConfigError("geometry.phi must be holomorphic in tau (no negative powers)", field="geometry.phi")
    rep = run.timed("moment", hartogs_extend_curve, C, phi, numeric=True)
    from .solver import moment_check, polynomial_extension

    mom = moment_check(C, phi)
    four_pi2 = 4 * np.pi ** 2
    dev = max((abs(complex(rep.obstruction[m]) - four_pi2 * complex(mom.residues[m])) / max(1.0, four_pi2 * abs(complex(mom.residues[m])))
               for m in rep.obstruction), default=0.0)
    consistent = mom.extends == (polynomial_extension(C, phi) is not None)
    run.report.results["moment"] = {
        "curve": [C.r, C.s], "phi": phi_text, "extends": mom.extends, "k": mom.k,
        "residues": {str(m): complex(v) for m, v in sorted(mom.residues.items())},
        "obstruction": {str(m): complex(v) for m, v in sorted(rep.obstruction.items())},
        "extension": repr(rep.extension) if rep.extension is not None else None,
    }
    return dev, consistent


def _moment_check(run: _Run):
    g = run.cfg.geometry
    C = MonomialCurve(g["r"], g["s"])
    dev, consistent = _moment(run, C, g["phi"] or "tau")
    run.check("obstruction_vs_residue", dev)
    run.check("verdict_consistent", consistent)


def _hartogs(run: _Run):
    cfg = run.cfg
    preset = cfg.geometry["preset"] or "ball"
    run.report.results["preset"] = preset
    if preset == "curve":
        C = MonomialCurve(cfg.geometry["r"], cfg.geometry["s"])
        dev, _ = _moment(run, C, cfg.geometry["phi"] or "tau")
        run.check("obstruction_vs_residue", dev)
        return
    phi = lambda w: 1.0 / (w[0] - 2.0)
    points = [(0, 0), (0.3, 0), (0, 0.3j), (0.2 + 0.1j, -0.2), (0.6, 0.1)]
    res = cfg.resolution(Resolution(n_theta=16, n_r=8, levels=6, n_alpha=8, n_sub=1))
    rep = run.timed("hartogs", hartogs_extend_ball, phi, points, reference=lambda p: 1.0 / (p[0] - 2.0), res=res)
    run.report.rows = [(complex(p[0]), v, abs(v - r) / abs(r)) for p, v, r in zip(rep.points, rep.values, rep.reference)]
    run.report.results["points"] = [[complex(p[0]), complex(p[1])] for p in rep.points]
    run.report.results["obstruction"] = rep.obstruction
    run.check("max_rel_error", rep.max_rel_error)


def _lelong_forms():
    bump = Cutoff(0.5, 0.9)

    def mk(poly, at0):
        fn = lambda w: bump(w) * poly(w)
        fn.breaks = bump.breaks
        return TestForm(fn, 0.9), at0

    return {
        "bump*(1+zeta+conj(zeta))": mk(lambda w: 1 + w + np.conj(w), 1.0),
        "bump*(2+|zeta|^2)": mk(lambda w: 2 + np.abs(w) ** 2, 2.0),
        "bump*(conj(zeta)^2*zeta+3i)": mk(lambda w: np.conj(w) ** 2 * w + 3j, 3j),
    }


def _pairing_cases():
    bump = Cutoff(0.5, 0.9)

    def xi(g):
        fn = lambda w: bump(w) * g(w)
        fn.breaks = bump.breaks
        return TestForm(fn, 0.9)

    return [
        ("(2,3) tau | bump", (2, 3), "tau", xi(lambda w: 1 + 0 * w[0])),
        ("(2,3) tau^3 | bump", (2, 3), "tau**3", xi(lambda w: 1 + 0 * w[0])),
        ("(2,3) tau | bump*(1+|zeta_2|^2)", (2, 3), "tau", xi(lambda w: 1 + np.abs(w[1]) ** 2)),
        ("(2,3) 1+tau | bump*(2+zeta_1+|zeta|^2)", (2, 3), "1 + tau",
         xi(lambda w: 2 + w[0] + np.abs(w[0]) ** 2 + np.abs(w[1]) ** 2)),
        ("(3,4) tau^2 | bump*zeta_2*(1+|zeta_2|^2)", (3, 4), "tau**2",
         xi(lambda w: w[1] * (1 + np.abs(w[1]) ** 2))),
    ]


def _pv_convergence(run: _Run):
    cfg = run.cfg
    preset = cfg.geometry["preset"] or "all"
    run.report.results["preset"] = preset
    if preset in ("all", "lelong-point"):
        out = {}
        for name, (xi, at0) in _lelong_forms().items():
            sep = run.timed("lelong", lelong_point, xi, cfg.schedule())
            err = abs(sep.value - at0)
            out[name] = {"value": sep.value, "expected": complex(at0), "order": sep.order, "error": err}
            run.check("lelong_point_error", err, f"lelong_point_error[{name}]")
        run.report.results["lelong_point"] = out
    if preset in ("all", "cusp-routes"):
        out = {}
        tol = cfg.quadrature["tol"]
        res = None
        if any(cfg.quadrature[k] is not None for k in ("n_theta", "n_r", "levels", "n_alpha", "n_sub")):
            res = cfg.resolution(Resolution())
        for name, rs, phi_text, xi in _pairing_cases():
            C = MonomialCurve(*rs)
            phi = parse_laurent(phi_text)
            a = run.timed("contour", curve_pairing, C, phi, xi, "contour", cfg.schedule())
            b = run.timed("cutoff", curve_pairing, C, phi, xi, "cutoff", cfg.schedule(cap=10), res=res, tol=tol)
            gap = abs(a.value - b.value)
            out[name] = {"contour": a.value, "cutoff": b.value, "cutoff_order": b.order, "difference": gap}
            run.check("route_disagreement", gap, f"route_disagreement[{name}]")
        run.report.results["cusp_routes"] = out


def _asymptotic_probe(run: _Run):
    cfg = run.cfg
    preset = cfg.geometry["preset"] or "all"
    run.report.results["preset"] = preset
    rows = []
    if preset in ("all", "disc"):
        asm = disc_assembly("ball")
        phi = SmoothForm(lambda z: one_form([np.conj(z[0])], BAR, 1), 1, 1, name="conj(zeta) d zeta-bar")
        # approach an interior point where K phi does not vanish
        z0 = 0.3
        dist = [0.02 * 2 ** (-j / 2) for j in range(9)]
        path = [z0 + d * np.exp(0.3j) for d in dist]
        rep = run.timed("disc", asymptotic_probe, asm, phi, path, distances=dist)
        run.report.results["disc"] = {"slope": rep.slope, "local_slopes": rep.local_slopes,
                                      "magnitudes": rep.magnitudes, "distances": rep.distances}
        run.check("disc_exponent", rep.slope)
    if preset in ("all", "cusp"):
        g = cfg.geometry
        asm = curve_assembly(g["r"], g["s"])
        asm = replace(asm, res=cfg.resolution(asm.res))
        phi = SmoothForm(lambda z: one_form([0 * z[0], 1 + z[0]], BAR, 2), 2, 1, name="(1 + zeta_1) d zeta-bar_2")
        path = _grid(cfg, "path9", 0.3)
        # the curve integral converges absolutely on the normalisation; no cutoff needed
        rep = run.timed("cusp", asymptotic_probe, asm, phi, path)
        run.report.results["cusp"] = {"slope": rep.slope, "local_slopes": rep.local_slopes,
                                      "magnitudes": rep.magnitudes, "distances": rep.distances,
                                      "tail_spread": rep.tail_spread}
        # no residual is attached to a probe value
        rows = [(t, m, float("nan")) for t, m in zip(path, rep.magnitudes)]
        run.check("cusp_finite", rep.finite)
        run.check("cusp_tail_spread", rep.tail_spread)
    run.report.rows = rows


def _weight_audit(run: _Run):
    rng = np.random.default_rng(run.cfg.grid["seed"])
    chi = Cutoff(1.2, 1.8)

    def unit():
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return v / np.linalg.norm(v)

    def shell():
        return (unit() * rng.uniform(1.25, 1.75)).reshape(2, 1)

    def inner():
        return (unit() * rng.uniform(0.0, 0.6)).reshape(2, 1)

    def off_a():  # keep |zeta_1| >= 0.2, away from {a = 0}
        while True:
            p = inner()
            if abs(p[0, 0]) >= 0.2:
                return p

    weights = [
        ("ball", ball_weight(chi, 2), shell, inner),
        ("product", weight_product(ball_weight(chi, 2), interchanged_ball_weight(chi, 2)), shell, shell),
        ("g_a(zeta_1)", singular_weight_ga([Polynomial.parse("z1", 2)]), off_a, inner),
    ]
    out = {}
    for name, g, zeta_s, z_s in weights:
        worst = 0.0
        for _ in range(20):
            zeta, z = zeta_s(), z_s()
            worst = max(worst, run.timed("weights", weight_contract_residual, g, zeta, z))
        out[name] = worst
        run.check("weight_residual", worst, f"weight_residual[{name}]")
    h = Polynomial.parse("z1^2 - z2^3", 2)
    H = hefer_single(h)
    worst = 0.0
    for _ in range(50):
        zeta, z = (unit() * rng.uniform(0, 1)).reshape(2, 1), (unit() * rng.uniform(0, 1)).reshape(2, 1)
        v = contract_eta(list(zeta - z), H(zeta, z)).scalar_part() - (h(zeta) - h(z))
        worst = max(worst, float(np.max(np.abs(v))))
    out["hefer[z1^2 - z2^3]"] = worst
    run.check("hefer_residual", worst, "hefer_residual[z1^2 - z2^3]")
    run.report.results["residuals"] = out


RUNNERS = {
    "verify-koppelman": _verify_koppelman,
    "cusp-classify": _cusp_classify,
    "moment-check": _moment_check,
    "hartogs": _hartogs,
    "structure-form": _structure_form,
    "pv-convergence": _pv_convergence,
    "asymptotic-probe": _asymptotic_probe,
    "weight-audit": _weight_audit,
}


def run(scenario: str, config: ScenarioConfig | None = None) -> RunReport:
    """Execute a named scenario.

    Numerical divergence is recorded in ``report.error`` (the report then
    fails); configuration problems raise :class:`ConfigError`.
    """
    config = config or ScenarioConfig(scenario)
    if config.scenario != scenario:
        raise ConfigError(f"config is for {config.scenario!r}, not {scenario!r}", field="scenario")
    r = _Run(config)
    t0 = time.perf_counter()
    try:
        RUNNERS[scenario](r)
    except (DivergenceError, AccuracyError) as exc:
        r.report.error = f"{type(exc).__name__}: {exc}"
    r.report.timings["total"] = time.perf_counter() - t0
    return r.report
