"""Uniform unit vectors on the complex d-sphere and the exact moment and
Fourier formulas for the squared-modulus vector Z, which is uniform on the
standard simplex.  The Monte Carlo Fourier evaluator for the Hermitian
matrix family lives here too, since only the spectrum of the test matrix
matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .levy import LevyTriple, levy_exponent
from .rng import RngStream, as_generator, standard_complex_normal

__all__ = [
    "SphereVector",
    "sample_sphere_vector",
    "sample_simplex_points",
    "sphere_moment",
    "simplex_fourier",
    "pd_fourier",
    "FourierEstimate",
]

# entries of a closer than this are rejected by simplex_fourier; silent
# jitter would corrupt oracle comparisons
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class SphereVector:
    coords: np.ndarray

    def __post_init__(self):
        norm = float(np.sum(np.abs(self.coords) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("coordinates must have unit norm")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def simplex_point(self) -> np.ndarray:
        """Z = (|u_1|^2, ..., |u_d|^2)."""
        return np.abs(self.coords) ** 2


def sample_sphere_vector(d: int, rng: RngStream | np.random.Generator) -> SphereVector:
    """Renormalized standard complex Gaussian vector: uniform on the sphere."""
    if d < 1:
        raise ValueError("d must be positive")
    gen = as_generator(rng)
    z = standard_complex_normal(gen, d)
    return SphereVector(z / np.linalg.norm(z))


def sample_sphere_vectors(
    d: int, n: int, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """n uniform sphere vectors as the rows of an (n, d) complex array."""
    if d < 1:
        raise ValueError("d must be positive")
    gen = as_generator(rng)
    z = standard_complex_normal(gen, (n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_simplex_points(
    d: int, n: int, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """n draws of Z, uniform on the standard d-simplex, as an (n, d) array."""
    u = sample_sphere_vectors(d, n, rng)
    return np.abs(u) ** 2


def sphere_moment(d: int, alpha) -> float:
    """Exact mixed moment E prod |u_i|^{2 alpha_i} = (d-1)! prod(alpha_i!) / (s+d-1)!
    with s the total degree."""
    if d < 1:
        raise ValueError("d must be positive")
    alpha = list(alpha)
    if len(alpha) != d or any(a < 0 for a in alpha):
        raise ValueError("alpha must be d nonnegative integers")
    s = sum(alpha)
    num = math.factorial(d - 1)
    for a in alpha:
        num *= math.factorial(a)
    return num / math.factorial(s + d - 1)


def simplex_fourier(a) -> complex:
    """E exp(i <a, Z>) in closed form, valid for pairwise distinct entries:
    (d-1)! * sum_j e^{i a_j} / prod_{k != j} i (a_j - a_k)."""
    a = np.asarray(a, dtype=float)
    d = a.size
    if d < 2:
        raise ValueError("need d >= 2")
    diffs = a[:, None] - a[None, :]
    off = np.abs(diffs[~np.eye(d, dtype=bool)])
    if off.min() < DEGENERACY_TOL:
        raise ValueError("entries of a are too close; closed form is degenerate")
    total = 0.0 + 0.0j
    for j in range(d):
        denom = np.prod(1j * (a[j] - np.delete(a, j)))
        total += np.exp(1j * a[j]) / denom
    return math.factorial(d - 1) * total


@dataclass(frozen=True)
class FourierEstimate:
    """Monte Carlo estimate of a matrix-law Fourier transform, together with
    the mean exponent it was exponentiated from."""

    value: complex
    exponent_mean: complex
    exponent_stderr: float
    n_mc: int


def pd_fourier(
    t: LevyTriple,
    eigs_A,
    d: int,
    n_mc: int,
    rng: RngStream | np.random.Generator,
) -> FourierEstimate:
    """Monte Carlo Fourier transform of the Hermitian matrix law at a test
    matrix with spectrum eigs_A: exp(mean over sphere draws of d * psi(<Z, a>)).

    Unitary invariance collapses the matrix integral to the simplex, so only
    the eigenvalues of the test matrix enter.
    """
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    a = np.asarray(eigs_A, dtype=float)
    if a.size != d:
        raise ValueError("eigs_A must have length d")
    Z = sample_simplex_points(d, n_mc, rng)
    args = Z @ a
    psi = np.array([levy_exponent(t, x) for x in args])
    exponent = d * psi
    mean = complex(np.mean(exponent))
    if n_mc > 1:
        stderr = float(np.std(exponent) / np.sqrt(n_mc))
    else:
        stderr = float("nan")
    return FourierEstimate(np.exp(mean), mean, stderr, n_mc)
