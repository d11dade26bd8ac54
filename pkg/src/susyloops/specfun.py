"""Special-function kernel: log-Gamma, Kummer 1F1 and 0Fq by direct summation.

The hypergeometric series are summed term by term with the term-ratio
recurrence and Neumaier compensated accumulation.  No asymptotic branch is
used; the arguments met in this package stay within |y| <= 400.  Negative
arguments of 1F1 go through Kummer's transformation so that every summed
term is of one sign when a, b > 0.

Array versions (``*_array``) share the same core and are what the grid code
calls; they keep the precision of their input, so ``np.longdouble`` grids are
summed in extended precision.  The scalar functions return a
:class:`SeriesResult`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, PoleError

TOL = 1e-14
MAX_TERMS = 10000
Y_RANGE = 400.0


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool


class LogGamma(NamedTuple):
    value: float
    sign: int


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> LogGamma:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises :class:`PoleError` at non-positive integers.
    """
    x = float(x)
    if _is_nonpositive_int(x):
        raise PoleError(f"Gamma({x:g}) is a pole")
    if x > 0:
        sign = 1
    else:
        # Gamma alternates sign between consecutive negative integers
        sign = -1 if math.ceil(-x) % 2 else 1
    return LogGamma(math.lgamma(x), sign)


def gamma_ratio(num: float, den: float) -> float:
    """Gamma(num) / Gamma(den) through log-Gamma; 0 when ``den`` is a pole."""
    if _is_nonpositive_int(den):
        if _is_nonpositive_int(num):
            raise PoleError(f"Gamma({num:g}) / Gamma({den:g}) is indeterminate")
        return 0.0
    if _is_nonpositive_int(num):
        raise PoleError(f"Gamma({num:g}) is a pole")
    ln, sn = log_gamma(num)
    ld, sd = log_gamma(den)
    return sn * sd * math.exp(ln - ld)


def _as_real(y) -> np.ndarray:
    """Array view of ``y`` keeping float64 or extended precision."""
    y = np.asarray(y)
    if y.dtype not in (np.float64, np.longdouble):
        y = y.astype(np.float64)
    return y


def _sum_series(coef, y: np.ndarray, tol: float, max_terms: int, check_every: int = 4):
    """Sum ``sum_n t_n`` with ``t_0 = 1`` and ``t_{n+1} = t_n * coef(n) * y``.

    ``coef(n)`` is a scalar, so every term costs one array multiply.  Returns
    ``(values, terms_used, converged)`` arrays.  An entry converges once its
    last added term is below ``tol * |partial sum|`` and the next ratio is at
    most 1/2, so a small term ahead of the series peak does not stop the
    summation early.  Converged entries keep accumulating (ever smaller)
    terms until the whole array is done; that only adds accuracy.
    """
    y = _as_real(y)
    shape = y.shape
    y = y.ravel()
    ay = np.abs(y)
    s = np.zeros_like(y)
    comp = np.zeros_like(y)
    t = np.ones_like(y)
    used = np.zeros(y.shape, dtype=int)
    active = np.ones(y.shape, dtype=bool)
    for n in range(max_terms):
        new = s + t
        # Neumaier compensation
        comp += np.where(np.abs(s) >= np.abs(t), (s - new) + t, (t - new) + s)
        s = new
        c = coef(n)
        last = t
        t = t * (c * y)
        if n % check_every == check_every - 1 or n == max_terms - 1:
            done = active & ((last == 0) | ((np.abs(last) <= tol * np.abs(s + comp)) & (abs(c) * ay <= 0.5)))
            used[done] = n + 1
            active &= ~done
            if not active.any():
                break
    used[active] = max_terms
    values = s + comp
    return values.reshape(shape), used.reshape(shape), (~active).reshape(shape)


def _kummer_values(a: float, b: float, y, tol: float, max_terms: int):
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 lower parameter b={b:g} is a non-positive integer")
    y = _as_real(y)
    if np.any(np.abs(y) > Y_RANGE):
        raise ValueError(f"|y| exceeds the configured range {Y_RANGE:g}")
    neg = y < 0

    # parameters in the working precision so extended grids stay extended
    a = y.dtype.type(a)
    b = y.dtype.type(b)

    def pos_coef(n):
        return (a + n) / ((b + n) * (n + 1))

    def neg_coef(n):
        return (b - a + n) / ((b + n) * (n + 1))

    values = np.empty_like(y)
    used = np.zeros(y.shape, dtype=int)
    conv = np.ones(y.shape, dtype=bool)
    if np.any(~neg):
        v, u, c = _sum_unique(pos_coef, y[~neg], tol, max_terms)
        values[~neg], used[~neg], conv[~neg] = v, u, c
    if np.any(neg):
        # Kummer transformation: 1F1(a,b;y) = e^y 1F1(b-a,b;-y)
        v, u, c = _sum_unique(neg_coef, -y[neg], tol, max_terms)
        values[neg], used[neg], conv[neg] = np.exp(y[neg]) * v, u, c
    return values, used, conv


def _sum_unique(coef, y: np.ndarray, tol: float, max_terms: int):
    """_sum_series over the distinct values of ``y`` (grids symmetric in x repeat every y = x^2)."""
    uniq, inverse = np.unique(y, return_inverse=True)
    if uniq.size == y.size:
        return _sum_series(coef, y, tol, max_terms)
    v, u, c = _sum_series(coef, uniq, tol, max_terms)
    return v[inverse].reshape(y.shape), u[inverse].reshape(y.shape), c[inverse].reshape(y.shape)


def _checked(values, used, conv, what):
    if not np.all(conv):
        raise ConvergenceError(f"{what} did not converge within {int(np.max(used))} terms")
    return values


def kummer_1f1_array(a: float, b: float, y, tol: float = TOL, max_terms: int = MAX_TERMS) -> np.ndarray:
    """Vectorized 1F1(a, b; y) over an array of ``y``."""
    return _checked(*_kummer_values(a, b, y, tol, max_terms), f"1F1({a:g},{b:g};y)")


def kummer_1f1_dy_array(a: float, b: float, y, tol: float = TOL, max_terms: int = MAX_TERMS) -> np.ndarray:
    """Vectorized d/dy 1F1(a, b; y) = (a/b) 1F1(a+1, b+1; y)."""
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 lower parameter b={b:g} is a non-positive integer")
    if a == 0:
        return np.zeros_like(_as_real(y))
    return (a / b) * kummer_1f1_array(a + 1, b + 1, y, tol, max_terms)


def kummer_1f1(a: float, b: float, y: float, tol: float = TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Confluent hypergeometric function 1F1(a, b; y) for real arguments."""
    v, u, c = _kummer_values(a, b, np.array([y], dtype=float), tol, max_terms)
    _checked(v, u, c, f"1F1({a:g},{b:g};{y:g})")
    return SeriesResult(float(v[0]), int(u[0]), bool(c[0]))


def kummer_1f1_dy(a: float, b: float, y: float, tol: float = TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    if _is_nonpositive_int(b):
        raise PoleError(f"1F1 lower parameter b={b:g} is a non-positive integer")
    if a == 0:
        return SeriesResult(0.0, 1, True)
    res = kummer_1f1(a + 1, b + 1, y, tol, max_terms)
    return SeriesResult((a / b) * res.value, res.terms_used, res.converged)


def _hyper_values(denoms: Sequence[float], y, tol: float, max_terms: int):
    y = _as_real(y)
    denoms = [y.dtype.type(d) for d in denoms]
    for d in denoms:
        if _is_nonpositive_int(d):
            raise PoleError(f"0Fq denominator {float(d):g} is a non-positive integer")
    if np.any(y < 0):
        raise ValueError("0Fq is only evaluated for y >= 0")

    def coef(n):
        den = y.dtype.type(n + 1)
        for d in denoms:
            den *= d + n
        return 1 / den

    return _sum_series(coef, y, tol, max_terms)


def hyper_0fq_array(denoms: Sequence[float], y, tol: float = TOL, max_terms: int = MAX_TERMS) -> np.ndarray:
    return _checked(*_hyper_values(denoms, y, tol, max_terms), "0Fq")


def hyper_0fq(denoms: Sequence[float], y: float, tol: float = TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    """Generalized hypergeometric 0Fq(;denoms; y) for y >= 0."""
    v, u, c = _hyper_values(denoms, np.array([y], dtype=float), tol, max_terms)
    _checked(v, u, c, f"0F{len(denoms)}(y={y:g})")
    return SeriesResult(float(v[0]), int(u[0]), bool(c[0]))
