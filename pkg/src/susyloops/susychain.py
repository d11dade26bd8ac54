"""k-th order SUSY partners of the oscillator, built two independent ways.

``potential_wronskian`` uses V_k = x^2/2 - (ln W)'' with the Wronskian of the
seed solutions; ``riccati_chain`` iterates the algebraic finite-difference
formula for the Riccati solutions.  Neither path differentiates numerically,
so each is an oracle for the other.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ChainError, NodeError
from .seed import SeedSpec, eval_seed

W_THRESHOLD = 1e-250
# x87 extended precision; LAPACK has no such type, hence the local determinant
EXT = np.longdouble
_LOG_W_THRESHOLD = math.log(W_THRESHOLD)


@dataclass(frozen=True)
class Grid:
    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 2401

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("a grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "Grid":
        """Same interval with the spacing halved."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)


def nu_window_ok(index: int, nu: float) -> bool:
    """|nu| < 1 for odd chain positions (1-based), |nu| > 1 for even ones."""
    return abs(nu) < 1 if index % 2 == 1 else abs(nu) > 1


@dataclass(frozen=True)
class SusyChain:
    """Ordered seeds (eps_1 > eps_2 > ... > eps_k, all below 1/2) plus a grid.

    A seed outside its nu window only triggers a warning; the Wronskian node
    scan decides whether the transformation is actually singular.
    """

    seeds: Tuple[SeedSpec, ...] = ()
    grid: Grid = field(default_factory=Grid)
    validate: bool = True

    def __post_init__(self):
        seeds = tuple(s if isinstance(s, SeedSpec) else SeedSpec(*s) for s in self.seeds)
        object.__setattr__(self, "seeds", seeds)
        if not self.validate:
            return
        eps = [s.epsilon for s in seeds]
        for e in eps:
            if not e < 0.5:
                raise ChainError(f"factorization energy {e:g} is not below 1/2")
        for a, b in zip(eps, eps[1:]):
            if not a > b:
                raise ChainError(f"factorization energies must strictly decrease, got {a:g} then {b:g}")
        bad = [i for i, s in enumerate(seeds, 1) if not nu_window_ok(i, s.nu)]
        if bad:
            warnings.warn(
                f"seeds {bad} lie outside the nonsingular nu windows; relying on the Wronskian node scan",
                stacklevel=3,
            )

    @property
    def order(self) -> int:
        return len(self.seeds)

    @property
    def epsilons(self) -> Tuple[float, ...]:
        return tuple(s.epsilon for s in self.seeds)


@dataclass
class PotentialTable:
    grid: Grid
    v: np.ndarray
    order: int

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def to_csv(self, path) -> None:
        lines = ["x,v"]
        lines += [f"{x:.17g},{v:.17g}" for x, v in zip(self.x, self.v)]
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


@dataclass
class WronskianTable:
    """W, W', W'' on the grid, all divided by the same positive factor exp(log_scale)."""

    w: np.ndarray
    dw: np.ndarray
    d2w: np.ndarray
    log_scale: np.ndarray

    @property
    def log_abs_w(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.w)) + self.log_scale


@dataclass
class RiccatiChain:
    """alphas[i] is alpha_{i+1}(x, eps_{i+1}); potentials[i] is V_i (potentials[0] = x^2/2)."""

    grid: Grid
    alphas: List[np.ndarray]
    potentials: List[np.ndarray]

    @property
    def order(self) -> int:
        return len(self.alphas)

    def potential(self) -> PotentialTable:
        return PotentialTable(self.grid, self.potentials[-1], self.order)


@functools.lru_cache(maxsize=64)
def _seed_on_grid(seed: SeedSpec, grid: Grid, max_deriv: int) -> Tuple[np.ndarray, ...]:
    """Extended-precision u^(m), m = 0..max_deriv, shared by both construction paths."""
    ev = eval_seed(seed, grid.x.astype(EXT), max_deriv, dtype=EXT)
    out = tuple(ev.order(m) for m in range(max_deriv + 1))
    for a in out:
        a.flags.writeable = False
    return out


def _seed_derivatives(chain: SusyChain, max_order: int) -> np.ndarray:
    """Array (k, max_order + 1, n_points) of u_j^(m)."""
    return np.asarray([_seed_on_grid(s, chain.grid, max(1, max_order))[: max_order + 1] for s in chain.seeds])


def batched_det(mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack (N, k, k) by Gaussian elimination with partial pivoting.

    Works in the dtype of ``mats`` (including ``np.longdouble``).
    """
    a = np.array(mats, copy=True)
    n, k, _ = a.shape
    det = np.ones(n, dtype=a.dtype)
    rows = np.arange(n)
    for c in range(k):
        piv = c + np.argmax(np.abs(a[:, c:, c]), axis=1)
        swap = piv != c
        if np.any(swap):
            r = rows[swap]
            tmp = a[r, c, :].copy()
            a[r, c, :] = a[r, piv[swap], :]
            a[r, piv[swap], :] = tmp
            det[swap] = -det[swap]
        p = a[:, c, c]
        det *= p
        if c + 1 < k:
            with np.errstate(divide="ignore", invalid="ignore"):
                f = np.where(p[:, None] != 0, a[:, c + 1:, c] / p[:, None], 0)
            a[:, c + 1:, c:] -= f[:, :, None] * a[:, None, c, c:]
    return det


def wronskian_table(chain: SusyChain, check_nodes: bool = True) -> WronskianTable:
    """Wronskian of the seeds and its first two derivatives, all in closed form.

    W' replaces the highest derivative row by the next one; W'' is the sum of
    the two determinants obtained by differentiating W' once more.
    """
    k = chain.order
    n = chain.grid.n_points
    if k == 0:
        one = np.ones(n, dtype=EXT)
        zero = np.zeros(n, dtype=EXT)
        return WronskianTable(one, zero, zero.copy(), zero.copy())
    d = _seed_derivatives(chain, k + 1)
    # scale each seed's derivative set by its largest magnitude at every x
    scale = np.max(np.abs(d), axis=1)
    d = d / scale[:, None, :]
    log_scale = np.sum(np.log(scale), axis=0)

    def det(orders: Sequence[int]) -> np.ndarray:
        mats = np.transpose(d[:, list(orders), :], (2, 0, 1))
        return batched_det(mats)

    base = list(range(k - 1))
    w = det(base + [k - 1])
    dw = det(base + [k])
    d2w = det(base + [k + 1])
    if k >= 2:
        d2w = d2w + det(list(range(k - 2)) + [k - 1, k])

    table = WronskianTable(w, dw, d2w, log_scale)
    if check_nodes:
        _scan_nodes(chain.grid.x, table)
    return table


def _scan_nodes(x: np.ndarray, table: WronskianTable) -> None:
    sign = np.sign(table.w)
    small = table.log_abs_w < _LOG_W_THRESHOLD
    if np.any(small):
        i = int(np.argmax(small))
        raise NodeError(f"Wronskian vanishes near x={x[i]:.6g}", float(x[i]))
    flips = np.nonzero(sign[1:] != sign[:-1])[0]
    if flips.size:
        i = int(flips[0])
        xn = 0.5 * (x[i] + x[i + 1])
        raise NodeError(f"Wronskian changes sign near x={xn:.6g}", float(xn))


def potential_wronskian(chain: SusyChain) -> PotentialTable:
    """V_k = x^2/2 - (W'' W - W'^2) / W^2."""
    t = wronskian_table(chain)
    x = chain.grid.x.astype(EXT)
    r1 = t.dw / t.w
    v = x * x / 2 - (t.d2w / t.w - r1 * r1)
    return PotentialTable(chain.grid, v.astype(np.float64), chain.order)


def riccati_chain(chain: SusyChain) -> RiccatiChain:
    """Iterate alpha_i(eps_j) = -alpha_{i-1}(eps_{i-1}) - 2(eps_{i-1} - eps_j)/(alpha_{i-1}(eps_{i-1}) - alpha_{i-1}(eps_j)).

    V_i = V_{i-1} - alpha_i', with alpha_i' taken from the Riccati equation
    itself: alpha_i' = 2(V_{i-1} - eps_i) - alpha_i^2.
    """
    x = chain.grid.x.astype(EXT)
    eps = [EXT(e) for e in chain.epsilons]
    k = chain.order
    # level[j] holds alpha_i(x, eps_j) for the current i and all j >= i
    level = []
    for s in chain.seeds:
        # reuse the Wronskian's cached seed table when it exists
        u = _seed_on_grid(s, chain.grid, k + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            level.append(u[1] / u[0])
    v = x * x / 2
    alphas = []
    potentials = [v]
    for i in range(k):
        a = level[i]
        if not np.all(np.isfinite(a)):
            j = int(np.argmax(~np.isfinite(a)))
            raise NodeError(f"alpha_{i + 1} is singular near x={x[j]:.6g}", float(x[j]))
        alphas.append(a)
        v = v - (2 * (v - eps[i]) - a * a)
        potentials.append(v)
        nxt = [None] * k
        for j in range(i + 1, k):
            den = a - level[j]
            hit = den == 0
            if np.any(hit):
                p = int(np.argmax(hit))
                raise ChainError(
                    f"finite-difference formula divides by zero at x={x[p]:.6g} (levels {i + 1}, {j + 1})"
                )
            with np.errstate(over="ignore"):
                nxt[j] = -a - 2 * (eps[i] - eps[j]) / den
        level = nxt
    return RiccatiChain(chain.grid, [a.astype(np.float64) for a in alphas],
                        [p.astype(np.float64) for p in potentials])


def derivative4(f: np.ndarray, h: float) -> np.ndarray:
    """First derivative with 4th-order central differences, one-sided near the ends."""
    f = np.asarray(f)
    if f.size < 5:
        raise ValueError("need at least 5 samples for the 4th-order stencil")
    d = np.empty_like(f)
    d[2:-2] = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


def apply_intertwiner(chain: SusyChain, f: np.ndarray, riccati: Optional[RiccatiChain] = None) -> np.ndarray:
    """B_k^+ f = A_k^+ ... A_1^+ f with A_i^+ = (-d/dx + alpha_i) / sqrt(2)."""
    if riccati is None:
        riccati = riccati_chain(chain)
    h = chain.grid.h
    g = np.asarray(f, dtype=float).copy()
    for a in riccati.alphas:
        g = (-derivative4(g, h) + a * g) / math.sqrt(2)
    return g


def oscillator_eigenfunction(n: int, x: np.ndarray) -> np.ndarray:
    """Normalized eigenfunction psi_n of H_0 = -d^2/dx^2 / 2 + x^2 / 2."""
    x = np.asarray(x, dtype=float)
    # normalized Hermite-function recurrence, stable for large n
    p0 = np.pi ** -0.25 * np.exp(-x * x / 2)
    if n == 0:
        return p0
    p1 = math.sqrt(2) * x * p0
    for m in range(1, n):
        p0, p1 = p1, math.sqrt(2 / (m + 1)) * x * p1 - math.sqrt(m / (m + 1)) * p0
    return p1


def apply_hamiltonian(pot: PotentialTable, g: np.ndarray) -> np.ndarray:
    """-g''/2 + V g with the 5-point 4th-order stencil; the two end points on each side are zero."""
    h = pot.grid.h
    out = np.zeros_like(g)
    d2 = (-g[4:] + 16 * g[3:-1] - 30 * g[2:-2] + 16 * g[1:-3] - g[:-4]) / (12 * h * h)
    out[2:-2] = -0.5 * d2 + pot.v[2:-2] * g[2:-2]
    return out


def intertwining_residual(chain: SusyChain, n: int, pot: Optional[PotentialTable] = None,
                          margin: float = 1.0) -> float:
    """||H_k g - E_n g|| / ||g|| for g = B_k^+ psi_n, over points at least ``margin`` from the ends."""
    if pot is None:
        pot = potential_wronskian(chain)
    x = chain.grid.x
    g = apply_intertwiner(chain, oscillator_eigenfunction(n, x))
    r = apply_hamiltonian(pot, g) - (n + 0.5) * g
    inner = (x >= chain.grid.x_min + margin) & (x <= chain.grid.x_max - margin)
    return float(np.linalg.norm(r[inner]) / np.linalg.norm(g[inner]))
