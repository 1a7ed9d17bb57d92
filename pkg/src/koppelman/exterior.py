"""Sparse exterior algebra over the generators d eta_j, d zeta-bar_j and d z-bar_j.

Forms are finite sums ``coefficient * blade``.  A blade is a wedge of distinct
generators stored in canonical order: all ``d eta`` (ascending), then all
``d zeta-bar`` (ascending), then all ``d z-bar`` (ascending).  Indices are
0-based, so ``d eta_1`` in the usual notation is ``deta(0, dim)`` here.

Coefficients are complex scalars or numpy arrays that broadcast against each
other, which lets a single :class:`ExtForm` carry the values of a form at a
whole batch of quadrature nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DimensionError, SingularityError

MAX_DIM = 3
TWO_PI_I = 2j * np.pi

ETA, BAR, ZBAR = 0, 1, 2
_KIND_OFFSET = (0, MAX_DIM, 2 * MAX_DIM)


def _gen_id(kind: int, j: int) -> int:
    return _KIND_OFFSET[kind] + j


@dataclass(frozen=True, order=True)
class MultiBlade:
    """Wedge of distinct generators, kept as a sorted tuple of generator ids."""

    gens: tuple[int, ...] = ()

    @classmethod
    def from_masks(cls, eta=(), bar=(), zbar=()) -> "MultiBlade":
        ids = [_gen_id(ETA, j) for j in eta]
        ids += [_gen_id(BAR, j) for j in bar]
        ids += [_gen_id(ZBAR, j) for j in zbar]
        for kind, mask in ((ETA, eta), (BAR, bar), (ZBAR, zbar)):
            if list(mask) != sorted(set(mask)):
                raise ValueError(f"index set {mask} must be strictly increasing")
            if any(j < 0 or j >= MAX_DIM for j in mask):
                raise DimensionError(f"generator index out of range in {mask}")
        return cls(tuple(ids))

    def _mask(self, kind: int) -> tuple[int, ...]:
        lo = _KIND_OFFSET[kind]
        return tuple(g - lo for g in self.gens if lo <= g < lo + MAX_DIM)

    @property
    def eta(self) -> tuple[int, ...]:
        return self._mask(ETA)

    @property
    def bar(self) -> tuple[int, ...]:
        return self._mask(BAR)

    @property
    def zbar(self) -> tuple[int, ...]:
        return self._mask(ZBAR)

    @property
    def degree(self) -> int:
        return len(self.gens)

    def __repr__(self) -> str:
        names = []
        for g in self.gens:
            kind, j = divmod(g, MAX_DIM)
            names.append(("deta", "dzetabar", "dzbar")[kind] + str(j + 1))
        return "^".join(names) if names else "1"


@lru_cache(maxsize=4096)
def _blade_product(a: tuple[int, ...], b: tuple[int, ...]):
    """Return (sign, merged gens) for a ^ b, or (0, None) on a repeated generator."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def _is_zero(c) -> bool:
    if isinstance(c, np.ndarray):
        return not np.any(c)
    return c == 0


class ExtForm:
    """Immutable sparse exterior form in ``dim`` complex variables."""

    __slots__ = ("_terms", "dim")

    def __init__(self, terms: Mapping[MultiBlade, object] | None = None, dim: int = 1):
        if not 1 <= dim <= MAX_DIM:
            raise DimensionError(f"dim must be in 1..{MAX_DIM}, got {dim}")
        clean = {}
        for blade, c in (terms or {}).items():
            if any(j >= dim for j in blade.eta + blade.bar + blade.zbar):
                raise DimensionError(f"blade {blade!r} exceeds dim={dim}")
            if not _is_zero(c):
                clean[blade] = c
        self._terms = clean
        self.dim = dim

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c, dim: int) -> "ExtForm":
        return cls({MultiBlade(): c}, dim)

    @classmethod
    def zero(cls, dim: int) -> "ExtForm":
        return cls({}, dim)

    # -- access -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, blade: MultiBlade, default=0):
        return self._terms.get(blade, default)

    def __getitem__(self, blade: MultiBlade):
        return self._terms.get(blade, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def part(self, eta_degree: int | None = None, bar_degree: int | None = None,
             zbar_degree: int | None = None) -> "ExtForm":
        """Keep only the terms with the requested generator counts."""
        out = {}
        for blade, c in self._terms.items():
            if eta_degree is not None and len(blade.eta) != eta_degree:
                continue
            if bar_degree is not None and len(blade.bar) != bar_degree:
                continue
            if zbar_degree is not None and len(blade.zbar) != zbar_degree:
                continue
            out[blade] = c
        return ExtForm(out, self.dim)

    def scalar_part(self):
        return self._terms.get(MultiBlade(), 0)

    def degrees(self) -> set[int]:
        return {b.degree for b in self._terms}

    def max_abs(self) -> float:
        """Largest coefficient modulus over all terms (and all batch entries)."""
        if not self._terms:
            return 0.0
        return float(max(np.max(np.abs(c)) for c in self._terms.values()))

    # -- linear structure -------------------------------------------------
    def _check(self, other: "ExtForm"):
        if not isinstance(other, ExtForm):
            raise TypeError(f"expected ExtForm, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, ExtForm):
            return self + ExtForm.scalar(other, self.dim)
        self._check(other)
        out = dict(self._terms)
        for blade, c in other._terms.items():
            out[blade] = out[blade] + c if blade in out else c
        return ExtForm(out, self.dim)

    __radd__ = __add__

    def __neg__(self):
        return ExtForm({b: -c for b, c in self._terms.items()}, self.dim)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, ExtForm):
            return wedge(self, c)
        return ExtForm({b: v * c for b, v in self._terms.items()}, self.dim)

    def __rmul__(self, c):
        return ExtForm({b: c * v for b, v in self._terms.items()}, self.dim)

    def __truediv__(self, c):
        return ExtForm({b: v / c for b, v in self._terms.items()}, self.dim)

    def __xor__(self, other):
        return wedge(self, other)

    def map_coefficients(self, fn: Callable) -> "ExtForm":
        return ExtForm({b: fn(c) for b, c in self._terms.items()}, self.dim)

    def allclose(self, other: "ExtForm", atol: float = 1e-12) -> bool:
        diff = self - other
        return diff.max_abs() <= atol

    def __repr__(self) -> str:
        if not self._terms:
            return f"ExtForm(0, dim={self.dim})"
        parts = []
        for blade in sorted(self._terms):
            c = self._terms[blade]
            cs = f"{c:.6g}" if np.isscalar(c) else f"<array{np.shape(c)}>"
            parts.append(f"({cs})*{blade!r}")
        return f"ExtForm({' + '.join(parts)}, dim={self.dim})"


def deta(j: int, dim: int) -> ExtForm:
    return ExtForm({MultiBlade.from_masks(eta=(j,)): 1}, dim)


def dzetabar(j: int, dim: int) -> ExtForm:
    return ExtForm({MultiBlade.from_masks(bar=(j,)): 1}, dim)


def dzbar(j: int, dim: int) -> ExtForm:
    return ExtForm({MultiBlade.from_masks(zbar=(j,)): 1}, dim)


def one_form(coeffs: Iterable, kind: int, dim: int) -> ExtForm:
    """``sum_j coeffs[j] * d(kind)_j``."""
    terms = {}
    for j, c in enumerate(coeffs):
        terms[MultiBlade((_gen_id(kind, j),))] = c
    return ExtForm(terms, dim)


def wedge(a: ExtForm, b: ExtForm) -> ExtForm:
    """Exterior product with signs from the canonical generator order."""
    if not isinstance(a, ExtForm) or not isinstance(b, ExtForm):
        raise TypeError("wedge expects two ExtForm operands")
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    out: dict = {}
    for ba, ca in a.items():
        for bb, cb in b.items():
            sign, gens = _blade_product(ba.gens, bb.gens)
            if not sign:
                continue
            key = MultiBlade(gens)
            v = ca * cb if sign > 0 else -(ca * cb)
            out[key] = out[key] + v if key in out else v
    return ExtForm(out, a.dim)


def wedge_all(forms: Iterable[ExtForm], dim: int) -> ExtForm:
    acc = ExtForm.scalar(1, dim)
    for f in forms:
        acc = wedge(acc, f)
    return acc


def interior(v, a: ExtForm) -> ExtForm:
    """Contraction of the vector ``sum_j v_j d/d eta_j`` into ``a`` (no 2*pi*i)."""
    if len(v) != a.dim:
        raise DimensionError(f"vector of length {len(v)} for dim={a.dim}")
    out: dict = {}
    for blade, c in a.items():
        for pos, g in enumerate(blade.gens):
            if g >= MAX_DIM:
                break  # eta generators come first
            rest = MultiBlade(blade.gens[:pos] + blade.gens[pos + 1:])
            val = c * v[g]
            if pos % 2:
                val = -val
            out[rest] = out[rest] + val if rest in out else val
    return ExtForm(out, a.dim)


def contract_eta(eta, a: ExtForm) -> ExtForm:
    """Interior multiplication with ``2*pi*i * sum_j eta_j d/d eta_j``."""
    return interior([TWO_PI_I * e for e in eta], a)


@dataclass(frozen=True)
class FormField:
    """A form-valued function of ``(zeta, z)``.

    ``zeta`` and ``z`` are arrays of shape ``(dim, ...)``; the returned
    :class:`ExtForm` carries coefficients broadcast over the trailing axes.
    ``singular`` optionally returns the distance from ``(zeta, z)`` to the
    declared singular set.
    """

    eval: Callable[[np.ndarray, np.ndarray], ExtForm]
    dim: int
    singular: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __call__(self, zeta, z) -> ExtForm:
        return self.eval(np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))


DEFAULT_STEP = 1e-4


def _shift(p: np.ndarray, k: int, h: complex) -> np.ndarray:
    q = np.array(p, dtype=complex, copy=True)
    q[k] = q[k] + h
    return q


def dbar_partials(fn: Callable[[np.ndarray], object], w, step: float = DEFAULT_STEP) -> list:
    """Central-difference d/d(w-bar_k) of ``fn`` at ``w`` for each coordinate k.

    ``fn`` may return scalars, arrays or ExtForms; they only need to support
    subtraction and scaling.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    w = np.asarray(w, dtype=complex)
    out = []
    for k in range(w.shape[0]):
        fx = (fn(_shift(w, k, step)) - fn(_shift(w, k, -step))) * (1 / (2 * step))
        fy = (fn(_shift(w, k, 1j * step)) - fn(_shift(w, k, -1j * step))) * (1 / (2 * step))
        out.append((fx + fy * 1j) * 0.5)
    return out


def dbar_fd(f: FormField, at, side: str = "zeta", step: float = DEFAULT_STEP) -> ExtForm:
    """Second-order finite-difference dbar of a form field.

    ``side="zeta"`` differentiates in zeta and prepends ``d zeta-bar_k``;
    ``side="z"`` differentiates in z and prepends ``d z-bar_k``.
    """
    zeta, z = (np.asarray(p, dtype=complex) for p in at)
    if side not in ("zeta", "z"):
        raise ValueError(f"side must be 'zeta' or 'z', got {side!r}")
    if step <= 0:
        raise ValueError("step must be positive")
    if f.singular is not None and np.any(np.asarray(f.singular(zeta, z)) <= 2 * step):
        raise SingularityError("dbar_fd evaluated within 2*step of the singular set")
    if side == "zeta":
        parts = dbar_partials(lambda p: f(p, z), zeta, step)
        kind = BAR
    else:
        parts = dbar_partials(lambda p: f(zeta, p), z, step)
        kind = ZBAR
    out = ExtForm.zero(f.dim)
    for k, dk in enumerate(parts):
        out = out + wedge(ExtForm({MultiBlade((_gen_id(kind, k),)): 1}, f.dim), dk)
    return out


def dbar_total_fd(f: FormField, at, step: float = DEFAULT_STEP) -> ExtForm:
    """dbar acting on both zeta and z."""
    return dbar_fd(f, at, "zeta", step) + dbar_fd(f, at, "z", step)
