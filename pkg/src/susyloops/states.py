"""Nonlinear coherent states of H_k and expectation values over its eigenbasis.

|z> = N(r) sum_n z^n / sqrt(n! prod_i Gamma(n+1/2-eps_i) Gamma(n+3/2-eps_i)) |n>,

the eigenstates of L_k^-.  Weights are built in log space; the normalization
is computed both by direct summation and from the closed 0F_{2k} form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import build_polynomials, ladder_action
from .basis import SpectrumDescriptor, StateVector
from .errors import ConsistencyError, TruncationError
from .specfun import hyper_0fq, log_gamma

__all__ = [
    "StateVector",
    "CoherentState",
    "coherent_state",
    "coherent_denominators",
    "eigenvalue_residual",
    "energy_expectation",
]

N_MAX = 512
N_CAP = 4096
TAIL_TOL = 1e-12
R_MAX = 20.0
NORM_RTOL = 1e-10


@dataclass
class CoherentState:
    z: complex
    r: float
    state: StateVector
    normalization: float
    normalization_direct: float
    tail: float

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "r": self.r,
            "normalization": self.normalization,
            "normalization_direct": self.normalization_direct,
            "tail": self.tail,
            "n_max": self.state.n_levels - 1,
            "state": self.state.to_json(),
        }


def coherent_denominators(spectrum: SpectrumDescriptor, shift: int = 0) -> list:
    """0F_{2k} lower parameters (1/2 - eps_i, ..., 3/2 - eps_i, ...) raised by ``shift``."""
    eps = spectrum.epsilons
    half = Fraction(1, 2) if spectrum.exact else 0.5
    return [half + shift - e for e in eps] + [half + 1 + shift - e for e in eps]


def _log_weights(spectrum: SpectrumDescriptor, r: float, n_levels: int) -> np.ndarray:
    """log of r^{2n} / (n! prod_i Gamma(n+1/2-eps_i) Gamma(n+3/2-eps_i))."""
    n = np.arange(n_levels, dtype=float)
    out = 2 * n * math.log(r) - np.array([log_gamma(m + 1).value for m in n])
    for e in spectrum.float_epsilons:
        out -= np.array([log_gamma(m + 0.5 - e).value + log_gamma(m + 1.5 - e).value for m in n])
    return out


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    return m + math.log(math.fsum(np.exp(a - m)))


def _log_closed_norm(spectrum: SpectrumDescriptor, r: float) -> float:
    """log N(r) = (sum_i ln Gamma(1/2-eps_i) Gamma(3/2-eps_i) - ln 0F_{2k}) / 2."""
    lg = sum(log_gamma(0.5 - e).value + log_gamma(1.5 - e).value for e in spectrum.float_epsilons)
    f = hyper_0fq([float(d) for d in coherent_denominators(spectrum)], r * r).value
    return 0.5 * (lg - math.log(f))


def coherent_state(spectrum: SpectrumDescriptor, z: complex, n_max: int = N_MAX, n_cap: int = N_CAP,
                   tail_tol: float = TAIL_TOL, r_max: float = R_MAX) -> CoherentState:
    """Eigenstate of L_k^- with eigenvalue ``z``.

    The ladder is truncated at ``n_max``, doubled until the bounded tail mass
    drops below ``tail_tol``; exceeding ``n_cap`` raises TruncationError.
    """
    z = complex(z)
    r = abs(z)
    if r > r_max:
        raise ValueError(f"|z| = {r:g} exceeds r_max = {r_max:g}")
    k = spectrum.k
    if r == 0:
        lg = sum(log_gamma(0.5 - e).value + log_gamma(1.5 - e).value for e in spectrum.float_epsilons)
        norm = math.exp(0.5 * lg)
        return CoherentState(z, 0.0, StateVector.ladder_level(k, 0, 1), norm, norm, 0.0)

    while True:
        logw = _log_weights(spectrum, r, n_max + 2)
        total = _logsumexp(logw[: n_max + 1])
        # weight ratios decrease monotonically past the peak, so the tail is
        # bounded by a geometric series started at n_max + 1
        ratio = math.exp(logw[n_max + 1] - logw[n_max])
        if ratio < 1:
            tail = math.exp(logw[n_max + 1] - total) / (1 - ratio)
            if tail < tail_tol:
                break
        if n_max >= n_cap:
            raise TruncationError(f"coherent state at r={r:g} needs more than {n_cap} ladder levels")
        n_max = min(2 * n_max, n_cap)

    logw = logw[: n_max + 1]
    log_norm_direct = -0.5 * total
    log_norm_closed = _log_closed_norm(spectrum, r)
    norm_direct = math.exp(log_norm_direct)
    norm_closed = math.exp(log_norm_closed)
    if abs(log_norm_closed - log_norm_direct) > NORM_RTOL:
        raise ConsistencyError(
            f"normalization mismatch at r={r:g}: closed {norm_closed!r} vs direct {norm_direct!r}"
        )
    theta = cmath.phase(z)
    n = np.arange(n_max + 1)
    c = np.exp(0.5 * (logw - total)) * np.exp(1j * n * theta)
    return CoherentState(z, r, StateVector(np.zeros(k), c), norm_closed, norm_direct, tail)


def eigenvalue_residual(spectrum: SpectrumDescriptor, cs: CoherentState) -> float:
    """|| L_k^- |z> - z |z> ||."""
    lowered = ladder_action(spectrum, "down", cs.state, build_polynomials(spectrum))
    return lowered.distance(cs.state.scaled(cs.z))


def energy_expectation(spectrum: SpectrumDescriptor, state: StateVector) -> float:
    """<H_k> = sum_j eps_j |b_j|^2 + sum_n (n + 1/2) |c_n|^2."""
    terms = list(spectrum.float_epsilons * np.abs(state.b) ** 2)
    terms += list((np.arange(state.n_levels) + 0.5) * np.abs(state.c) ** 2)
    return math.fsum(terms)


def mean_ladder_index(state: StateVector) -> float:
    """sum_n n |c_n|^2."""
    return math.fsum(np.arange(state.n_levels) * np.abs(state.c) ** 2)
