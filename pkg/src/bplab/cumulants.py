"""Moment-cumulant transforms on the partition lattices, plus the
classical-to-free relabeling that realizes the Bercovici-Pata map at the
cumulant level.

Production transforms use the triangular recursions (cheap up to order ~30);
the lattice sums over Part(k) / NC(k) are retained in the test suite as
oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "MomentSequence",
    "CumulantSequence",
    "moments_from_cumulants",
    "cumulants_from_moments",
    "bp_transport",
]


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_1..m_kmax, indexed from 1."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("need at least one moment")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def kmax(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        """m_k, 1-indexed; m_0 = 1."""
        if k == 0:
            return 1.0
        return self.values[k - 1]


@dataclass(frozen=True)
class CumulantSequence:
    """Cumulants c_1..c_kmax of the given kind ('classical' or 'free')."""

    kind: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in ("classical", "free"):
            raise ValueError(f"unknown cumulant kind {self.kind!r}")
        if len(self.values) < 1:
            raise ValueError("need at least one cumulant")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def kmax(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        return self.values[k - 1]

    def __add__(self, other: "CumulantSequence") -> "CumulantSequence":
        if self.kind != other.kind or self.kmax != other.kmax:
            raise ValueError("can only add cumulant sequences of the same shape")
        return CumulantSequence(
            self.kind, tuple(a + b for a, b in zip(self.values, other.values))
        )


def _classical_moments(c: list[float]) -> list[float]:
    # m_n = sum_j C(n-1, j-1) c_j m_{n-j}, m_0 = 1
    kmax = len(c)
    m = [1.0] + [0.0] * kmax
    for n in range(1, kmax + 1):
        m[n] = sum(math.comb(n - 1, j - 1) * c[j - 1] * m[n - j] for j in range(1, n + 1))
    return m[1:]


def _free_moments(c: list[float]) -> list[float]:
    # m_n = sum_s c_s * sum over s-tuples of moment indices summing to n-s;
    # the inner sums h[s][m] are built by convolution of the moment sequence.
    kmax = len(c)
    m = [1.0] + [0.0] * kmax
    for n in range(1, kmax + 1):
        conv = m[:n]  # h[s=1][t] = m_t for t = 0..n-1
        total = c[0] * conv[n - 1]
        for s in range(2, n + 1):
            conv = [sum(conv[j] * m[t - j] for j in range(t + 1)) for t in range(n)]
            total += c[s - 1] * conv[n - s]
        m[n] = total
    return m[1:]


def moments_from_cumulants(c: CumulantSequence) -> MomentSequence:
    """Moments from cumulants: sum over Part(k) (classical) or NC(k) (free)
    of the product of c_{|V|} over blocks, evaluated by triangular recursion."""
    vals = list(c.values)
    if c.kind == "classical":
        return MomentSequence(tuple(_classical_moments(vals)))
    return MomentSequence(tuple(_free_moments(vals)))


def cumulants_from_moments(m: MomentSequence, kind: str) -> CumulantSequence:
    """Exact inverse of moments_from_cumulants for the given kind."""
    if kind not in ("classical", "free"):
        raise ValueError(f"unknown cumulant kind {kind!r}")
    kmax = m.kmax
    c: list[float] = []
    for n in range(1, kmax + 1):
        # the order-n transform depends linearly on c_n with unit coefficient
        trial = c + [0.0]
        partial = moments_from_cumulants(CumulantSequence(kind, tuple(trial)))
        c.append(m[n] - partial[n])
    return CumulantSequence(kind, tuple(c))


def bp_transport(c: CumulantSequence) -> CumulantSequence:
    """Relabel classical cumulants as free ones: the bijection between
    classical and free infinitely divisible laws preserves the cumulant
    sequence, so the numbers carry over unchanged."""
    if c.kind != "classical":
        raise ValueError("bp_transport expects classical cumulants")
    return CumulantSequence("free", c.values)
