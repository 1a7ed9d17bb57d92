"""Finite Laurent polynomials in one variable and the numerical semigroup <r, s>."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np


class LaurentPoly:
    """Finite Laurent polynomial ``sum_k c_k tau**k`` with exact integer exponents.

    Coefficients are kept as given (int, Fraction, complex ...); no rounding
    or truncation is ever applied.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            if int(k) != k:
                raise ValueError(f"non-integer exponent {k!r}")
            if c != 0:
                clean[int(k)] = c
        self._coeffs = clean

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @property
    def coeffs(self) -> dict[int, object]:
        return dict(self._coeffs)

    def exponents(self) -> list[int]:
        return sorted(self._coeffs)

    def __getitem__(self, k: int):
        return self._coeffs.get(k, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(sorted(self._coeffs.items())))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: c * other for k, c in self._coeffs.items()})
        out: dict[int, object] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by ``tau**m``."""
        return LaurentPoly({k + m: c for k, c in self._coeffs.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * c for k, c in self._coeffs.items() if k})

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=complex)
        out = np.zeros_like(tau)
        for k, c in self._coeffs.items():
            out = out + complex(c) * tau ** k
        return out

    def min_order(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def __repr__(self) -> str:
        if not self._coeffs:
            return "LaurentPoly(0)"
        return "LaurentPoly(" + " + ".join(f"({c})*tau^{k}" for k, c in sorted(self._coeffs.items())) + ")"


def residue(p: LaurentPoly):
    """Coefficient of ``tau**-1``, i.e. the contour integral of ``p dtau / (2 pi i)``."""
    return p[-1]


def parse_laurent(text: str) -> LaurentPoly:
    """Parse expressions like ``"tau"`` or ``"3*tau**2 - tau**-1 + 2*I"``."""
    import sympy

    tau = sympy.Symbol("tau")
    try:
        expr = sympy.expand(sympy.sympify(text.replace("^", "**"), locals={"tau": tau}))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse Laurent polynomial {text!r}") from exc
    out: dict[int, object] = {}
    for term in sympy.Add.make_args(expr):
        c, e = term.as_coeff_exponent(tau)
        if c.has(tau) or not e.is_integer or c.free_symbols:
            raise ValueError(f"term {term} of {text!r} is not c*tau**k")
        if c.is_Integer:
            val = int(c)
        elif c.is_Rational:
            val = Fraction(int(c.p), int(c.q))
        else:
            val = complex(c)
        out[int(e)] = out.get(int(e), 0) + val
    return LaurentPoly(out)


@dataclass(frozen=True)
class Semigroup:
    """Numerical semigroup generated by coprime ``2 <= r < s``."""

    r: int
    s: int

    def __post_init__(self):
        if not (2 <= self.r < self.s):
            raise ValueError(f"need 2 <= r < s, got r={self.r}, s={self.s}")
        if math.gcd(self.r, self.s) != 1:
            raise ValueError(f"r={self.r} and s={self.s} are not coprime")

    @property
    def conductor(self) -> int:
        return (self.r - 1) * (self.s - 1)

    def gaps(self) -> list[int]:
        return [k for k in range(self.conductor) if not member(self, k)]

    def elements(self, upto: int) -> list[int]:
        return [k for k in range(upto + 1) if member(self, k)]


def member(S: Semigroup, k: int) -> bool:
    """Brute force: is ``k = a*r + b*s`` with ``a, b >= 0``?"""
    if k < 0:
        raise ValueError(f"membership is defined for k >= 0, got {k}")
    for a in range(k // S.r + 1):
        if (k - a * S.r) % S.s == 0:
            return True
    return False


def pullback_monomial(curve: tuple[int, int], i: int, j: int) -> LaurentPoly:
    """Pull ``zeta_1**i * zeta_2**j`` back along ``tau -> (tau**s, tau**r)``."""
    r, s = curve
    if i < 0 or j < 0:
        raise ValueError("monomial exponents must be non-negative")
    return LaurentPoly.monomial(s * i + r * j)


def semigroup_representation(S: Semigroup, k: int) -> tuple[int, int] | None:
    """Some ``(i, j)`` with ``s*i + r*j == k``, i.e. ``tau**k = zeta_1**i zeta_2**j``."""
    for i in range(k // S.s + 1):
        rest = k - i * S.s
        if rest % S.r == 0:
            return i, rest // S.r
    return None
