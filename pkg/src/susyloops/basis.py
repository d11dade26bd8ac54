"""Eigenbasis of H_k: the spectrum descriptor and state vectors over it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Tuple, Union

import numpy as np

Number = Union[float, Fraction]


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Sp(H_k) = {eps_k, ..., eps_1} plus the ladder E_n = n + 1/2.

    ``epsilons`` is kept in chain order (eps_1 > eps_2 > ...); isolated-level
    coefficients of a :class:`StateVector` follow the same order.  Entries may
    be :class:`~fractions.Fraction` when the energies are known exactly.
    """

    epsilons: Tuple[Number, ...] = ()

    def __post_init__(self):
        eps = tuple(e if isinstance(e, Rational) else float(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        for e in eps:
            if not e < Fraction(1, 2):
                raise ValueError(f"isolated level {e} is not below the ladder base 1/2")
        if len(set(eps)) != len(eps):
            raise ValueError("isolated levels must be distinct")

    @classmethod
    def from_chain(cls, chain) -> "SpectrumDescriptor":
        return cls(chain.epsilons)

    @property
    def k(self) -> int:
        return len(self.epsilons)

    @property
    def float_epsilons(self) -> np.ndarray:
        return np.array([float(e) for e in self.epsilons], dtype=float)

    @property
    def isolated(self) -> Tuple[float, ...]:
        """Isolated levels in increasing order (eps_k, ..., eps_1)."""
        return tuple(sorted(float(e) for e in self.epsilons))

    @property
    def exact(self) -> bool:
        return all(isinstance(e, Rational) for e in self.epsilons)

    ladder_base = 0.5

    @property
    def ladder_count(self) -> int:
        return self.k + 1

    @staticmethod
    def level(n: int) -> float:
        return n + 0.5

    def lowest_levels(self, count: int) -> list:
        """The ``count`` smallest eigenvalues of H_k in increasing order."""
        iso = list(self.isolated)
        out = iso[:count]
        n = 0
        while len(out) < count:
            out.append(n + 0.5)
            n += 1
        return out


@dataclass
class StateVector:
    """Coefficients ``b`` over isolated levels and ``c`` over ladder levels n = 0..len(c)-1."""

    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=complex).ravel()
        self.c = np.asarray(self.c, dtype=complex).ravel()
        if self.c.size == 0:
            self.c = np.zeros(1, dtype=complex)

    @classmethod
    def zeros(cls, k: int, n_levels: int) -> "StateVector":
        return cls(np.zeros(k, dtype=complex), np.zeros(n_levels, dtype=complex))

    @classmethod
    def ladder_level(cls, k: int, n: int, n_levels: int = 0) -> "StateVector":
        st = cls.zeros(k, max(n_levels, n + 1))
        st.c[n] = 1.0
        return st

    @classmethod
    def isolated_level(cls, k: int, j: int, n_levels: int = 1) -> "StateVector":
        """Pure isolated level; ``j`` is 0-based in chain order."""
        st = cls.zeros(k, n_levels)
        st.b[j] = 1.0
        return st

    @property
    def n_levels(self) -> int:
        return self.c.size

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.b) ** 2) + np.sum(np.abs(self.c) ** 2)))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.b / nrm, self.c / nrm)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def padded(self, n_levels: int) -> "StateVector":
        if n_levels < self.n_levels:
            raise ValueError("padding cannot shrink a state")
        c = np.zeros(n_levels, dtype=complex)
        c[: self.n_levels] = self.c
        return StateVector(self.b.copy(), c)

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.b * factor, self.c * factor)

    def distance(self, other: "StateVector") -> float:
        """Euclidean distance, padding the shorter ladder with zeros."""
        n = max(self.n_levels, other.n_levels)
        a, b = self.padded(n), other.padded(n)
        return float(np.sqrt(np.sum(np.abs(a.b - b.b) ** 2) + np.sum(np.abs(a.c - b.c) ** 2)))

    def max_coefficient_error(self, other: "StateVector") -> float:
        n = max(self.n_levels, other.n_levels)
        a, b = self.padded(n), other.padded(n)
        diffs = np.concatenate([np.abs(a.b - b.b), np.abs(a.c - b.c)])
        return float(diffs.max()) if diffs.size else 0.0

    def to_json(self) -> dict:
        return {
            "isolated": [[float(v.real), float(v.imag)] for v in self.b],
            "ladder": [[float(v.real), float(v.imag)] for v in self.c],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StateVector":
        b = [complex(re, im) for re, im in data.get("isolated", [])]
        c = [complex(re, im) for re, im in data.get("ladder", [])]
        return cls(np.array(b, dtype=complex), np.array(c, dtype=complex))


def random_state(k: int, n_levels: int, rng: np.random.Generator, isolated: bool = True) -> StateVector:
    """Normalized state with Gaussian random complex coefficients."""
    b = rng.normal(size=k) + 1j * rng.normal(size=k) if isolated else np.zeros(k, dtype=complex)
    c = rng.normal(size=n_levels) + 1j * rng.normal(size=n_levels)
    return StateVector(b, c).normalized()


def as_fractions(values: Sequence) -> Tuple[Fraction, ...]:
    """Accept Fractions, ints or two-integer (numerator, denominator) pairs."""
    out = []
    for v in values:
        if isinstance(v, (tuple, list)):
            num, den = v
            if not (isinstance(num, int) and isinstance(den, int)):
                raise TypeError(f"exact rational pair must hold integers, got {v!r}")
            out.append(Fraction(num, den))
        elif isinstance(v, Rational):
            out.append(Fraction(v))
        else:
            raise TypeError(f"{v!r} is not an exact rational")
    return tuple(out)
