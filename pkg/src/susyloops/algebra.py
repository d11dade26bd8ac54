"""Polynomial Heisenberg algebra of H_k realized on its eigenbasis.

L_k^+ L_k^- = q(H_k) with q(E) = (E - 1/2) prod_i (E - eps_i - 1)(E - eps_i),
and [L_k^-, L_k^+] = p(H_k), p(E) = q(E + 1) - q(E).  Matrix elements of L^-
are taken real and non-negative: L^- |n> = sqrt(q(E_n)) |n - 1>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal

import numpy as np

from .basis import SpectrumDescriptor, StateVector

HALF = Fraction(1, 2)


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _horner(coeffs: list, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _taylor_shift(coeffs: list, s) -> list:
    """Coefficients of f(E + s) given those of f(E), ascending powers."""
    n = len(coeffs)
    out = [0] * n
    for m, c in enumerate(coeffs):
        for j in range(m + 1):
            out[j] += c * math.comb(m, j) * s ** (m - j)
    return out


@dataclass(frozen=True)
class LadderPolynomials:
    """``q`` and ``p`` as ascending coefficient lists (Fractions when exact)."""

    q: tuple
    p: tuple
    roots: tuple

    @property
    def degree_q(self) -> int:
        return len(self.q) - 1

    @property
    def degree_p(self) -> int:
        return len(self.p) - 1

    def q_value(self, energy):
        """q evaluated in product form, which is better conditioned than Horner.

        Exact when ``energy`` and the roots are Fractions, float otherwise.
        """
        exact = isinstance(energy, (int, Fraction)) and all(isinstance(r, Fraction) for r in self.roots)
        out = Fraction(1) if exact else 1.0
        for r in self.roots:
            out *= energy - (r if exact else float(r))
        return out

    def p_value(self, energy):
        return _horner(list(self.p), energy)

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, Fraction):
                return [c.numerator, c.denominator]
            return float(c)

        return {
            "q": [enc(c) for c in self.q],
            "p": [enc(c) for c in self.p],
            "roots": [enc(r) for r in self.roots],
            "order": "ascending",
        }


def build_polynomials(spectrum: SpectrumDescriptor) -> LadderPolynomials:
    """Expand q from its roots {1/2} u {eps_i + 1} u {eps_i} and take p = q(E+1) - q(E)."""
    half = HALF if spectrum.exact else 0.5
    roots: List = [half]
    for e in spectrum.epsilons:
        roots += [e + 1, e]
    q = [1]
    for r in roots:
        q = _poly_mul(q, [-r, 1])
    shifted = _taylor_shift(q, 1)
    p = [a - b for a, b in zip(shifted, q)]
    # leading coefficients cancel exactly; drop them
    p = p[:-1]
    return LadderPolynomials(tuple(q), tuple(p), tuple(roots))


def _sqrt_weights(polys: LadderPolynomials, energies) -> np.ndarray:
    q = np.array([polys.q_value(e) for e in energies], dtype=float)
    if np.any(q < 0):
        raise ValueError("q(E) is negative on the ladder; the spectrum is not a valid SUSY partner spectrum")
    return np.sqrt(q)


def ladder_action(spectrum: SpectrumDescriptor, direction: Literal["up", "down"], state: StateVector,
                  polys: LadderPolynomials = None) -> StateVector:
    """Apply L_k^+ (``up``) or L_k^- (``down``) to a state in the H_k eigenbasis.

    Isolated levels are one-step ladders and are annihilated in both
    directions.  ``down`` keeps the ladder length (top entry becomes 0); ``up``
    grows it by one so no amplitude is truncated.
    """
    if polys is None:
        polys = build_polynomials(spectrum)
    c = state.c
    n = np.arange(c.size)
    b = np.zeros(spectrum.k, dtype=complex)
    if direction == "down":
        w = _sqrt_weights(polys, n[1:] + 0.5)
        out = np.zeros(c.size, dtype=complex)
        out[:-1] = w * c[1:]
    elif direction == "up":
        w = _sqrt_weights(polys, n + 1.5)
        out = np.zeros(c.size + 1, dtype=complex)
        out[1:] = w * c
    else:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    return StateVector(b, out)
