"""Seed solutions of the oscillator Schrodinger equation -u''/2 + x^2 u/2 = eps u.

The general solution used here is

    u(x) = exp(-x^2/2) [ 1F1((1-2eps)/4, 1/2; x^2)
                         + 2 nu x G 1F1((3-2eps)/4, 3/2; x^2) ],
    G = Gamma((3-2eps)/4) / Gamma((1-2eps)/4),

normalized so that u(0) = 1 and u'(0) = 2 nu G.  The first derivative is taken
in closed form; higher ones come from u'' = (x^2 - 2 eps) u via Leibniz' rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .errors import NodeError, PoleError
from .specfun import gamma_ratio, kummer_1f1_array, kummer_1f1_dy_array

MAX_DERIV = 12
NODE_THRESHOLD = 1e-280

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SeedSpec:
    """Factorization energy ``epsilon`` and asymmetry parameter ``nu``."""

    epsilon: float
    nu: float = 0.0

    @property
    def odd_coefficient(self) -> float:
        """2 nu Gamma((3-2eps)/4) / Gamma((1-2eps)/4), the value of u'(0)."""
        if self.nu == 0:
            return 0.0
        a1 = (1 - 2 * self.epsilon) / 4
        a2 = (3 - 2 * self.epsilon) / 4
        try:
            return 2 * self.nu * gamma_ratio(a2, a1)
        except PoleError as exc:
            raise PoleError(
                f"seed (epsilon={self.epsilon:g}, nu={self.nu:g}): Gamma({a2:g}) is a pole "
                "and the odd term does not vanish"
            ) from exc


@dataclass
class SeedEval:
    x: ArrayLike
    u: ArrayLike
    derivatives: List[ArrayLike]

    def order(self, m: int) -> ArrayLike:
        """Derivative of order ``m`` (0 returns u itself)."""
        return self.u if m == 0 else self.derivatives[m - 1]


def eval_seed(spec: SeedSpec, x: ArrayLike, max_deriv: int = 1, dtype=np.float64) -> SeedEval:
    """Evaluate u and its derivatives up to ``max_deriv`` at ``x`` (scalar or array).

    ``dtype=np.longdouble`` carries the whole evaluation in extended precision;
    the Wronskian code needs it because seed columns become nearly parallel at
    large |x|.
    """
    if not 1 <= max_deriv <= MAX_DERIV:
        raise ValueError(f"max_deriv must lie in [1, {MAX_DERIV}]")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=dtype))
    eps = dtype(spec.epsilon)
    y = xs * xs
    a1 = (1 - 2 * eps) / 4
    a2 = (3 - 2 * eps) / 4
    coef = dtype(spec.odd_coefficient)
    gauss = np.exp(-y / 2)
    # truncate the series at the working precision, not at the default tolerance
    tol = 4 * float(np.finfo(dtype).eps)

    f1 = kummer_1f1_array(a1, 0.5, y, tol)
    df1 = kummer_1f1_dy_array(a1, 0.5, y, tol)
    bracket = f1.copy()
    dbracket = 2 * xs * df1
    if coef != 0.0:
        f2 = kummer_1f1_array(a2, 1.5, y, tol)
        df2 = kummer_1f1_dy_array(a2, 1.5, y, tol)
        bracket += coef * xs * f2
        dbracket += coef * (f2 + 2 * y * df2)

    orders = [gauss * bracket, gauss * (dbracket - xs * bracket)]
    g = [y - 2 * eps, 2 * xs, np.full_like(xs, 2)]
    for m in range(0, max_deriv - 1):
        # u^(m+2) = sum_j C(m, j) g^(j) u^(m-j), g = x^2 - 2 eps
        acc = np.zeros_like(xs)
        for j in range(0, min(m, 2) + 1):
            acc += math.comb(m, j) * g[j] * orders[m - j]
        orders.append(acc)

    if scalar:
        orders = [float(o[0]) for o in orders]
        return SeedEval(float(xs[0]), orders[0], orders[1:])
    return SeedEval(xs, orders[0], orders[1:])


def alpha1(spec: SeedSpec, x: ArrayLike) -> ArrayLike:
    """Logarithmic derivative u'/u, a solution of the initial Riccati equation."""
    ev = eval_seed(spec, x, 1)
    u = np.asarray(ev.u)
    if np.any(np.abs(u) < NODE_THRESHOLD):
        where = np.atleast_1d(ev.x)[np.abs(np.atleast_1d(u)) < NODE_THRESHOLD]
        raise NodeError(f"seed epsilon={spec.epsilon:g} has a node near x={where[0]:g}", float(where[0]))
    out = np.asarray(ev.derivatives[0]) / u
    return float(out) if np.ndim(x) == 0 else out
