"""Evolution loops of H_k and the geometric phases of cyclic states.

Every H_k has a partial loop of period 2 pi on the ladder subspace with
overall phase -pi.  When each eps_j = 1/2 - l_j/m_j is declared as an exact
rational, U(2 M pi) = exp(-i M pi) I with M = lcm(m_j): a global loop.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from .basis import SpectrumDescriptor, StateVector, as_fractions
from .errors import ConsistencyError, NonCyclicError, RationalMismatchError
from .specfun import hyper_0fq
from .states import coherent_denominators, coherent_state, energy_expectation, mean_ladder_index

RATIONAL_TOL = 1e-12
PHASE_ATOL = 1e-12
TWO_PATH_RTOL = 1e-9


def wrap_phase(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.remainder(angle, 2 * math.pi)
    return math.pi if w == -math.pi else w + 0.0


@dataclass
class LoopReport:
    """``phi`` is the raw overall phase -M pi; ``phi_mod`` reduces it into (-pi, pi]."""

    kind: Literal["none", "partial", "global"]
    tau: float
    phi: float
    rationals: Optional[List[Tuple[int, int]]] = None
    M: Optional[int] = None

    @property
    def tau_over_pi(self) -> int:
        return 2 * (self.M or 1)

    @property
    def phi_over_pi(self) -> int:
        return -(self.M or 1)

    @property
    def phi_mod(self) -> float:
        return wrap_phase(self.phi)

    @property
    def phase_factor(self) -> complex:
        """exp(i phi), exactly +-1."""
        return complex(-1 if self.phi_over_pi % 2 else 1)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "tau": self.tau,
            "tau_over_pi": self.tau_over_pi,
            "phi": self.phi,
            "phi_over_pi": self.phi_over_pi,
            "phi_mod": self.phi_mod,
            "rationals": None if self.rationals is None else [list(p) for p in self.rationals],
            "M": self.M,
        }


@dataclass
class PhaseResult:
    """Geometric phase ``beta`` plus the quantities entering beta = phi + tau <H>.

    ``beta_check`` holds the value from the independent route.
    """

    beta: float
    phi: float
    dynamical: float
    beta_check: float
    energy: float = field(default=float("nan"))

    @property
    def beta_mod(self) -> float:
        return wrap_phase(self.beta)

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "beta_mod": self.beta_mod,
            "beta_check": self.beta_check,
            "phi": self.phi,
            "dynamical": self.dynamical,
            "energy": self.energy,
        }


def _loop_pairs(spectrum: SpectrumDescriptor, rational_eps) -> Optional[List[Fraction]]:
    if rational_eps is None:
        if spectrum.k and spectrum.exact:
            rational_eps = spectrum.epsilons
        else:
            return None
    eps = as_fractions(rational_eps)
    if len(eps) != spectrum.k:
        raise RationalMismatchError(f"expected {spectrum.k} exact energies, got {len(eps)}")
    for exact, stored in zip(eps, spectrum.float_epsilons):
        if abs(float(exact) - stored) > RATIONAL_TOL:
            raise RationalMismatchError(f"exact energy {exact} disagrees with stored {stored!r}")
    return list(eps)


def detect_loops(spectrum: SpectrumDescriptor, rational_eps: Optional[Sequence] = None) -> LoopReport:
    """Classify the evolution loops of H_k.

    Rationality is never inferred from floats: the global loop is reported
    only when exact energies are supplied (or stored as Fractions).  The bare
    oscillator (k = 0) always has the global loop with M = 1.
    """
    eps = _loop_pairs(spectrum, rational_eps)
    if eps is None and spectrum.k:
        return LoopReport("partial", 2 * math.pi, -math.pi)
    pairs = []
    for e in eps or []:
        gap = Fraction(1, 2) - e
        # Fraction keeps numerator/denominator coprime
        pairs.append((gap.numerator, gap.denominator))
    M = math.lcm(*(m for _, m in pairs)) if pairs else 1
    return LoopReport("global", 2 * M * math.pi, -M * math.pi, pairs, M)


def evolve(spectrum: SpectrumDescriptor, state: StateVector, t: float) -> StateVector:
    """exp(-i H_k t) applied in the eigenbasis."""
    n = np.arange(state.n_levels)
    b = state.b * np.exp(-1j * spectrum.float_epsilons * t)
    c = state.c * np.exp(-1j * (n + 0.5) * t)
    return StateVector(b, c)


def geometric_phase_state(spectrum: SpectrumDescriptor, state: StateVector, loop: LoopReport) -> PhaseResult:
    """Geometric phase of a state that is cyclic under ``loop``.

    Partial loop:  beta = 2 pi sum_n n |c_n|^2.
    Global loop:   beta = 2 M pi (sum_n n |c_n|^2 - sum_j (l_j/m_j) |b_j|^2).
    Both are checked against phi + tau <H>.
    """
    energy = energy_expectation(spectrum, state)
    nbar = mean_ladder_index(state)
    if loop.kind == "partial":
        if np.any(np.abs(state.b) > 0):
            raise NonCyclicError("a state with isolated-level components is not cyclic under the partial loop")
        beta = 2 * math.pi * nbar
    elif loop.kind == "global":
        iso = math.fsum(l / m * abs(b) ** 2 for (l, m), b in zip(loop.rationals, state.b))
        beta = 2 * loop.M * math.pi * (nbar - iso)
    else:
        raise NonCyclicError("no evolution loop available")
    check = loop.phi + loop.tau * energy
    if abs(beta - check) > PHASE_ATOL * max(1.0, abs(beta)):
        raise ConsistencyError(f"phase formula {beta!r} disagrees with phi + tau<H> = {check!r}")
    return PhaseResult(beta, loop.phi, -loop.tau * energy, check, energy)


def coherent_phase_prefactor(spectrum: SpectrumDescriptor):
    """2 / prod_i (1/2 - eps_i)(3/2 - eps_i): beta ~ prefactor * pi * r^2 as r -> 0.

    Exact (a Fraction) when the spectrum holds Fractions.
    """
    half = Fraction(1, 2) if spectrum.exact else 0.5
    den = 1
    for e in spectrum.epsilons:
        den *= (half - e) * (half + 1 - e)
    return 2 / den if not spectrum.exact else Fraction(2) / den


def geometric_phase_closed(spectrum: SpectrumDescriptor, r: float) -> float:
    """Closed-form coherent-state phase 2 pi r^2 / prod(...) * 0F_{2k}(shifted; r^2) / 0F_{2k}(base; r^2)."""
    y = r * r
    base = [float(d) for d in coherent_denominators(spectrum)]
    shifted = [float(d) for d in coherent_denominators(spectrum, 1)]
    pref = float(coherent_phase_prefactor(spectrum))
    if spectrum.k == 0:
        return math.pi * pref * y
    return math.pi * pref * y * hyper_0fq(shifted, y).value / hyper_0fq(base, y).value


def geometric_phase_coherent(spectrum: SpectrumDescriptor, r: float) -> PhaseResult:
    """Phase of the coherent state |z = r> under the partial loop, by two routes.

    ``beta`` is the closed form; ``beta_check`` sums 2 pi n |c_n|^2 over the
    recurrence coefficients.  They must agree to 1e-9 relative.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    beta = geometric_phase_closed(spectrum, r)
    cs = coherent_state(spectrum, r)
    loop = LoopReport("partial", 2 * math.pi, -math.pi)
    summed = geometric_phase_state(spectrum, cs.state, loop)
    # floor at the smallest normal float: subnormal phases carry no relative precision
    if abs(beta - summed.beta) > TWO_PATH_RTOL * max(abs(beta), abs(summed.beta), sys.float_info.min):
        raise ConsistencyError(f"closed-form phase {beta!r} vs coefficient sum {summed.beta!r} at r={r:g}")
    return PhaseResult(beta, loop.phi, summed.dynamical, summed.beta, summed.energy)
