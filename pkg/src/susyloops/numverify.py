"""Finite-difference oracle for the spectrum of H_k.

H_k is discretized with the 3-point stencil and Dirichlet ends; its lowest
eigenvalues are bracketed by Sturm-sequence bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .basis import SpectrumDescriptor
from .susychain import Grid, PotentialTable, SusyChain, potential_wronskian

MAX_COUNT = 32
BISECT_WIDTH = 1e-10
MATCH_TOL = 1e-3
SPURIOUS_CEILING = 4.0


@dataclass(frozen=True)
class DiscretizedHamiltonian:
    """Symmetric tridiagonal matrix on the interior grid points."""

    grid: Grid
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def size(self) -> int:
        return self.diagonal.size


def discretize(pot: PotentialTable) -> DiscretizedHamiltonian:
    h = pot.grid.h
    v = np.asarray(pot.v, dtype=float)[1:-1]
    if not np.all(np.isfinite(v)):
        raise ValueError("potential is not finite on the grid")
    diag = 1.0 / (h * h) + v
    off = np.full(v.size - 1, -0.5 / (h * h))
    return DiscretizedHamiltonian(pot.grid, diag, off)


def sturm_count(H: DiscretizedHamiltonian, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift (LDL^T inertia count)."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    a = H.diagonal
    b2 = H.off_diagonal ** 2
    tiny = np.finfo(float).tiny ** 0.5
    d = a[0] - shifts
    count = (d < 0).astype(int)
    for i in range(1, a.size):
        # a zero pivot is perturbed as if the shift were slightly smaller
        d = np.where(d == 0, tiny, d)
        d = a[i] - shifts - b2[i - 1] / d
        count += d < 0
    return count


def low_eigenvalues(H: DiscretizedHamiltonian, count: int, width: float = BISECT_WIDTH) -> list:
    """The ``count`` smallest eigenvalues, each bisected to an interval narrower than ``width``."""
    if not 1 <= count <= MAX_COUNT:
        raise ValueError(f"count must lie in [1, {MAX_COUNT}]")
    count = min(count, H.size)
    a, off = H.diagonal, np.abs(H.off_diagonal)
    radius = np.zeros_like(a)
    radius[:-1] += off
    radius[1:] += off
    lo = np.full(count, float(np.min(a - radius)))
    hi = np.full(count, float(np.max(a + radius)))
    target = np.arange(1, count + 1)
    # eigenvalue i (0-based) is the smallest x with sturm_count(x) >= i + 1
    while np.any(hi - lo > width):
        mid = 0.5 * (lo + hi)
        below = sturm_count(H, mid) >= target
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    return list(0.5 * (lo + hi))


def loop_residual(eigs: Sequence[float], tau: float, phi: float) -> float:
    """max_E |exp(-i E tau) - exp(i phi)|."""
    target = complex(math.cos(phi), math.sin(phi))
    return max(abs(complex(math.cos(E * tau), -math.sin(E * tau)) - target) for E in eigs)


@dataclass
class SpectrumReport:
    analytic: list
    numeric: list
    max_abs_err: float
    spurious: list

    @property
    def ok(self) -> bool:
        return self.max_abs_err <= MATCH_TOL and not self.spurious

    def to_json(self) -> dict:
        return {
            "analytic": self.analytic,
            "numeric": self.numeric,
            "max_abs_err": self.max_abs_err,
            "spurious": self.spurious,
            "ok": self.ok,
        }


def spectrum_report(chain: SusyChain, n_ladder: int = 4, pot: Optional[PotentialTable] = None,
                    ceiling: float = SPURIOUS_CEILING) -> SpectrumReport:
    """Compare the analytic levels {eps_j} u {n + 1/2, n < n_ladder} with the discretized spectrum.

    Numeric eigenvalues below ``ceiling`` that are farther than the match
    tolerance from every analytic level are reported as spurious.
    """
    if pot is None:
        pot = potential_wronskian(chain)
    spec = SpectrumDescriptor.from_chain(chain)
    analytic = spec.lowest_levels(chain.order + n_ladder)
    H = discretize(pot)
    extra = sum(1 for n in range(n_ladder, 64) if n + 0.5 < ceiling)
    numeric = low_eigenvalues(H, min(len(analytic) + extra + 1, MAX_COUNT))
    head = numeric[: len(analytic)]
    err = max(abs(x - y) for x, y in zip(analytic, head))
    full = spec.lowest_levels(len(numeric))
    spurious = [x for x in numeric if x < ceiling and min(abs(x - y) for y in full) > MATCH_TOL]
    return SpectrumReport(analytic, head, float(err), spurious)
