"""Cutoff schedules and extrapolation of regularised families to delta -> 0."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DivergenceError


def _default_deltas() -> tuple[float, ...]:
    return tuple(2.0 ** -j for j in range(3, 13))


@dataclass(frozen=True)
class PVSchedule:
    """Decreasing cutoff parameters and the extrapolation applied to the family.

    ``extrapolation`` is ``"none"`` or ``"richardson"``; ``order`` is the number
    of leading error terms eliminated by Richardson.
    """

    deltas: tuple[float, ...] = field(default_factory=_default_deltas)
    extrapolation: str = "richardson"
    order: int = 2

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        if d.size < 2:
            raise ValueError("a schedule needs at least two deltas")
        if np.any(d <= 0) or np.any(np.diff(d) >= 0):
            raise ValueError("deltas must be positive and strictly decreasing")
        if self.extrapolation not in ("none", "richardson"):
            raise ValueError(f"unknown extrapolation {self.extrapolation!r}")
        if self.extrapolation == "richardson" and not 1 <= self.order < d.size:
            raise ValueError("richardson order must be between 1 and len(deltas) - 1")

    @classmethod
    def geometric(cls, j0: int = 3, j1: int = 12, **kw) -> "PVSchedule":
        return cls(tuple(2.0 ** -j for j in range(j0, j1 + 1)), **kw)


@dataclass(frozen=True)
class SepResult:
    value: complex
    error: float
    order: float | None
    values: tuple[complex, ...]


def _neville_at_zero(x: np.ndarray, y: np.ndarray) -> complex:
    p = list(y.astype(complex))
    n = len(x)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i])
    return p[0]


def estimate_order(deltas: Sequence[float], values: Sequence[complex]) -> float | None:
    """Exponent p in ``value(delta) ~ c + a*delta**p`` from the last three levels."""
    d = np.asarray(deltas, dtype=float)
    v = np.asarray(values, dtype=complex)
    if v.size < 3:
        return None
    d1 = abs(v[-2] - v[-3])
    d2 = abs(v[-1] - v[-2])
    scale = max(1.0, float(np.max(np.abs(v))))
    if d2 <= 1e-14 * scale or d1 <= 1e-14 * scale:
        return None
    # differences scale like delta**p times a factor fixed by the ratios
    q1 = d[-3] / d[-2]
    q2 = d[-2] / d[-1]
    if not np.isclose(q1, q2):
        return float(np.log(d1 / d2) / np.log(q2))
    return float(np.log(d1 / d2) / np.log(q1))


def snap_order(p: float, max_denominator: int = 6, window: float = 0.01) -> float:
    """Round ``p`` to a nearby fraction with small denominator.

    Exponents of cutoff families come from Lojasiewicz-type estimates and are
    rational; the three-level estimate is biased by the next error term.
    """
    q = Fraction(p).limit_denominator(max_denominator)
    return float(q) if abs(float(q) - p) <= window else p


def sep_regularize(values: Sequence[complex], schedule: PVSchedule,
                   slack: float = 1.05, noise: float = 0.0) -> SepResult:
    """Limit of a cutoff family evaluated along ``schedule.deltas``.

    Raises :class:`DivergenceError` when successive differences grow or stop
    shrinking.  With
    Richardson extrapolation the family is fitted as a polynomial in
    ``delta**p`` with the exponent ``p`` estimated from the data; ``error`` is
    the change against the extrapolation from one level fewer.  ``noise`` is
    an absolute floor below which differences are treated as round-off, e.g.
    the tolerance of the quadrature producing the family.
    """
    v = np.asarray(values, dtype=complex)
    d = np.asarray(schedule.deltas, dtype=float)
    if v.shape != d.shape:
        raise ValueError("need exactly one value per schedule delta")
    if not np.all(np.isfinite(v)):
        raise DivergenceError("cutoff family contains non-finite values")
    scale = max(1.0, float(np.max(np.abs(v))))
    floor = max(1e-13 * scale, noise)
    diffs = np.abs(np.diff(v))
    for j in range(1, diffs.size):
        if diffs[j] > slack * diffs[j - 1] + floor:
            raise DivergenceError(
                f"successive differences increase at delta={d[j + 1]:g}: "
                f"{diffs[j - 1]:.3e} -> {diffs[j]:.3e}"
            )
    if diffs.size >= 3 and diffs[-1] > floor and np.all(diffs[-2:] >= diffs[-3:-1] / slack):
        raise DivergenceError(f"successive differences do not shrink: {diffs[-3]:.3e}, "
                              f"{diffs[-2]:.3e}, {diffs[-1]:.3e}")
    p = estimate_order(d, v)
    if p is not None:
        p = snap_order(p)
    if diffs[-1] <= floor or p is None:
        return SepResult(complex(v[-1]), float(diffs[-1]), p, tuple(v))
    if schedule.extrapolation == "none" or p <= 0:
        return SepResult(complex(v[-1]), float(diffs[-1]), p, tuple(v))
    k = schedule.order
    x = d ** p
    best = _neville_at_zero(x[-(k + 1):], v[-(k + 1):])
    prev = _neville_at_zero(x[-k:], v[-k:])
    return SepResult(complex(best), float(abs(best - prev)), p, tuple(v))
