"""Holomorphic polynomials in a few complex variables."""
from __future__ import annotations

from typing import Mapping

import numpy as np


class Polynomial:
    """``sum_alpha c_alpha w**alpha`` in ``nvars`` complex variables.

    Evaluation takes an array of shape ``(nvars, ...)``.
    """

    __slots__ = ("_coeffs", "nvars")

    def __init__(self, coeffs: Mapping[tuple[int, ...], object], nvars: int):
        clean = {}
        for alpha, c in coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != nvars or min(alpha, default=0) < 0:
                raise ValueError(f"bad multi-index {alpha} for {nvars} variables")
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        self._coeffs = clean
        self.nvars = nvars

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Polynomial":
        """Parse e.g. ``"z1**2 - z2**3"`` (variables ``z1 .. zN``)."""
        import sympy

        syms = sympy.symbols(" ".join(f"z{j + 1}" for j in range(nvars)))
        syms = syms if isinstance(syms, tuple) else (syms,)
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals={str(s): s for s in syms})
            poly = sympy.Poly(expr, *syms)
        except (sympy.SympifyError, sympy.PolynomialError, SyntaxError) as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        coeffs = {}
        for alpha, c in poly.terms():
            coeffs[alpha] = int(c) if c.is_Integer else complex(c)
        return cls(coeffs, nvars)

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def degree(self) -> int:
        return max((sum(a) for a in self._coeffs), default=0)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape[1:], dtype=complex)
        for alpha, c in self._coeffs.items():
            term = complex(c)
            for j, a in enumerate(alpha):
                if a:
                    term = term * w[j] ** a
            out = out + term
        return out

    def partial(self, j: int) -> "Polynomial":
        out = {}
        for alpha, c in self._coeffs.items():
            if alpha[j]:
                beta = list(alpha)
                beta[j] -= 1
                out[tuple(beta)] = out.get(tuple(beta), 0) + c * alpha[j]
        return Polynomial(out, self.nvars)

    def gradient(self) -> list["Polynomial"]:
        return [self.partial(j) for j in range(self.nvars)]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self._coeffs)
        for a, c in other._coeffs.items():
            out[a] = out.get(a, 0) + c
        return Polynomial(out, self.nvars)

    def __neg__(self):
        return Polynomial({a: -c for a, c in self._coeffs.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self) -> str:
        return f"Polynomial({self._coeffs}, nvars={self.nvars})"


def divided_differences(h: Polynomial) -> list[Polynomial]:
    """Hefer coefficients ``H_j(zeta, z)`` with ``sum_j H_j (zeta_j - z_j) = h(zeta) - h(z)``.

    Variables of the result are ordered ``(zeta_1..zeta_N, z_1..z_N)``.  The
    difference is telescoped coordinate by coordinate in the order 1..N, so
    ``H_j`` involves ``z_1..z_j`` and ``zeta_j..zeta_N``.
    """
    n = h.nvars
    out = []
    for j in range(n):
        terms: dict[tuple[int, ...], object] = {}
        for alpha, c in h.coeffs.items():
            a = alpha[j]
            if a == 0:
                continue
            for m in range(a):
                beta = [0] * (2 * n)
                for i in range(n):
                    if i < j:
                        beta[n + i] = alpha[i]
                    elif i > j:
                        beta[i] = alpha[i]
                beta[j] = m
                beta[n + j] = a - 1 - m
                key = tuple(beta)
                terms[key] = terms.get(key, 0) + c
        out.append(Polynomial(terms, 2 * n))
    return out
