"""Empirical spectral distributions, closed-form reference laws, moments and
the upper-half-plane transform metric used to compare them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cumulants import CumulantSequence, MomentSequence, bp_transport, moments_from_cumulants
from .levy import LevyTriple, cumulants_from_triple

__all__ = [
    "EmpiricalDistribution",
    "ReferenceLaw",
    "semicircle",
    "cauchy_law",
    "marchenko_pastur",
    "dirac_law",
    "GridSpec",
    "esd",
    "empirical_moments",
    "cauchy_transform",
    "cauchy_sup_distance",
    "reference_density",
    "reference_moments",
    "psi_image_moments",
    "histogram",
]


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Weighted sample set: sorted support points with positive weights
    summing to one."""

    support_points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.support_points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if x.shape != w.shape or x.ndim != 1 or x.size == 0:
            raise ValueError("support and weights must be matching 1-d arrays")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
        order = np.argsort(x)
        object.__setattr__(self, "support_points", x[order])
        object.__setattr__(self, "weights", w[order])

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        x = np.asarray(samples, dtype=float).ravel()
        n = x.size
        return cls(x, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, a: float) -> "EmpiricalDistribution":
        return cls(np.array([a]), np.array([1.0]))


@dataclass(frozen=True)
class ReferenceLaw:
    """Closed-form target law; see the factory helpers below."""

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in ("semicircle", "cauchy", "marchenko_pastur", "dirac"):
            raise ValueError(f"unknown reference law {self.kind!r}")


def semicircle(mean: float = 0.0, radius_half: float = 1.0) -> ReferenceLaw:
    """Semicircle with the given mean and variance radius_half**2 (support
    half-width is twice radius_half)."""
    if radius_half <= 0:
        raise ValueError("radius parameter must be positive")
    return ReferenceLaw("semicircle", (mean, radius_half))


def cauchy_law(a: float) -> ReferenceLaw:
    if a <= 0:
        raise ValueError("a must be positive")
    return ReferenceLaw("cauchy", (a,))


def marchenko_pastur(lam: float) -> ReferenceLaw:
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    return ReferenceLaw("marchenko_pastur", (lam,))


def dirac_law(a: float) -> ReferenceLaw:
    return ReferenceLaw("dirac", (a,))


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid in the closed upper half plane with imaginary parts
    at least one, where the transform metric lives."""

    real_range: tuple[float, float] = (-8.0, 8.0)
    real_step: float = 0.05
    imaginary_levels: tuple[float, ...] = (1.0, 2.0, 4.0)

    def __post_init__(self):
        lo, hi = self.real_range
        if hi <= lo or self.real_step <= 0:
            raise ValueError("invalid real grid")
        if any(y < 1.0 for y in self.imaginary_levels) or not self.imaginary_levels:
            raise ValueError("imaginary levels must be >= 1")

    def points(self) -> np.ndarray:
        lo, hi = self.real_range
        xs = np.arange(lo, hi + self.real_step / 2, self.real_step)
        return np.concatenate([xs + 1j * y for y in self.imaginary_levels])


def esd(M) -> EmpiricalDistribution:
    """Empirical spectral distribution: eigenvalues with weight 1/d each."""
    m = M.entries if hasattr(M, "entries") else np.asarray(M)
    if np.max(np.abs(m - m.conj().T)) > 1e-8 * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError("matrix is not Hermitian")
    return EmpiricalDistribution.from_samples(np.linalg.eigvalsh(m))


def empirical_moments(nu: EmpiricalDistribution, kmax: int) -> MomentSequence:
    """Weighted power sums of the support."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    x = nu.support_points
    w = nu.weights
    return MomentSequence(tuple(float(np.sum(w * x**k)) for k in range(1, kmax + 1)))


def _mp_edges(lam: float) -> tuple[float, float]:
    return (1.0 - math.sqrt(lam)) ** 2, (1.0 + math.sqrt(lam)) ** 2


def _mp_density(lam: float, x: np.ndarray) -> np.ndarray:
    a, b = _mp_edges(lam)
    out = np.zeros_like(x, dtype=float)
    inside = (x > a) & (x < b) & (x > 0)
    xi = x[inside]
    out[inside] = np.sqrt((b - xi) * (xi - a)) / (2.0 * np.pi * xi)
    return out


def cauchy_transform(nu, z: complex) -> complex:
    """f_nu(z) = integral of 1/(u - z) dnu(u), for Im z > 0."""
    if z.imag <= 0:
        raise ValueError("z must lie in the open upper half plane")
    if isinstance(nu, EmpiricalDistribution):
        return complex(np.sum(nu.weights / (nu.support_points - z)))
    if nu.kind == "dirac":
        (a,) = nu.params
        return 1.0 / (a - z)
    if nu.kind == "cauchy":
        (a,) = nu.params
        return -1.0 / (z + 1j * a)
    if nu.kind == "semicircle":
        mean, r = nu.params
        zz = z - mean
        # branch cut split so that the root behaves like +zz at infinity and
        # the transform maps the upper half plane to itself
        w = np.sqrt(zz - 2 * r) * np.sqrt(zz + 2 * r)
        return (-zz + w) / (2.0 * r * r)
    if nu.kind == "marchenko_pastur":
        (lam,) = nu.params
        a, b = _mp_edges(lam)
        atom = max(1.0 - lam, 0.0)
        if lam == 0:
            return 1.0 / (0.0 - z)

        def re_part(x):
            return float(np.real(_mp_density(lam, np.array([x]))[0] / (x - z)))

        def im_part(x):
            return float(np.imag(_mp_density(lam, np.array([x]))[0] / (x - z)))

        re, _ = integrate.quad(re_part, a, b, limit=200)
        im, _ = integrate.quad(im_part, a, b, limit=200)
        return complex(re, im) + atom / (0.0 - z)
    raise ValueError(f"unknown law {nu!r}")


def cauchy_sup_distance(nu1, nu2, grid: GridSpec | None = None) -> float:
    """Max over the grid of |f_nu1 - f_nu2|: a lower bound of the sup metric
    over the half plane Im z >= 1."""
    if grid is None:
        grid = GridSpec()
    zs = grid.points()
    diffs = [abs(cauchy_transform(nu1, z) - cauchy_transform(nu2, z)) for z in zs]
    return float(max(diffs))


def reference_density(law: ReferenceLaw, x: float) -> float:
    """Pointwise density of the absolutely continuous part."""
    if law.kind == "dirac":
        raise ValueError("a point mass has no density")
    if law.kind == "cauchy":
        (a,) = law.params
        return a / (math.pi * (a * a + x * x))
    if law.kind == "semicircle":
        mean, r = law.params
        if abs(x - mean) > 2 * r:
            return 0.0
        return math.sqrt(4 * r * r - (x - mean) ** 2) / (2.0 * math.pi * r * r)
    if law.kind == "marchenko_pastur":
        (lam,) = law.params
        return float(_mp_density(lam, np.array([float(x)]))[0])
    raise ValueError(f"unknown law {law!r}")


def mp_atom(law: ReferenceLaw) -> float:
    """Mass of the atom at zero of a Marchenko-Pastur law ((1 - lam)+)."""
    if law.kind != "marchenko_pastur":
        raise ValueError("only Marchenko-Pastur laws carry the zero atom")
    (lam,) = law.params
    return max(1.0 - lam, 0.0)


def reference_moments(law: ReferenceLaw, kmax: int) -> MomentSequence:
    """Exact moments via free cumulants (semicircle: (0, r^2, 0, ...);
    Marchenko-Pastur(lam): all cumulants lam; dirac: (a, 0, 0, ...))."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if law.kind == "cauchy":
        raise ValueError("the Cauchy law has no moments")
    if law.kind == "semicircle":
        mean, r = law.params
        c = [mean, r * r] + [0.0] * (kmax - 2)
        return moments_from_cumulants(CumulantSequence("free", tuple(c[:kmax])))
    if law.kind == "marchenko_pastur":
        (lam,) = law.params
        return moments_from_cumulants(CumulantSequence("free", (lam,) * kmax))
    if law.kind == "dirac":
        (a,) = law.params
        return MomentSequence(tuple(a**k for k in range(1, kmax + 1)))
    raise ValueError(f"unknown law {law!r}")


def psi_image_moments(t: LevyTriple, kmax: int) -> MomentSequence:
    """Moments of the free image of the law with the given triple: classical
    cumulants carried over as free cumulants, then summed over noncrossing
    partitions."""
    return moments_from_cumulants(bp_transport(cumulants_from_triple(t, kmax)))


def histogram(nu: EmpiricalDistribution, bins: int, range_=None):
    """Mass-preserving binning: list of (bin_center, mass) pairs."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    x = nu.support_points
    if range_ is None:
        lo, hi = float(x.min()), float(x.max())
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
    else:
        lo, hi = range_
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, bins - 1)
    mass = np.zeros(bins)
    np.add.at(mass, idx, nu.weights)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return [(float(c), float(m)) for c, m in zip(centers, mass)]
