"""Real spherical harmonics for d in {2, 3} and classical polynomials on the ball.

Harmonics are orthonormal for the normalized surface measure,
``(1/omega_d) int Y Y' dsigma = delta``.  Solid harmonics ``|x|^k Y(x/|x|)``
are evaluated as polynomials, so they are finite at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IndexRangeError, ParameterDomainError
from .scalar import beta_mass, jacobi_homogeneous, jacobi_norm, jacobi_roots, zonal_eval

SUPPORTED_D = (2, 3)


def dim_harmonic(k: int, d: int) -> int:
    """Dimension of the space of spherical harmonics of degree k on S^{d-1}."""
    if k < 0 or d < 2:
        raise ParameterDomainError(f"need k >= 0 and d >= 2, got k={k}, d={d}")
    second = math.comb(k + d - 3, k - 2) if k >= 2 else 0
    return math.comb(k + d - 1, k) - second


def surface_area(d: int) -> float:
    """Surface area omega_d of the unit sphere S^{d-1}."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class HarmonicIndex:
    d: int
    k: int
    ell: int

    def __post_init__(self) -> None:
        if self.d not in SUPPORTED_D:
            raise ParameterDomainError(f"harmonics implemented for d in {SUPPORTED_D}, got {self.d}")
        if not 1 <= self.ell <= dim_harmonic(self.k, self.d):
            raise IndexRangeError(f"label {self.ell} out of range for degree {self.k}, d={self.d}")


def _as_points(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :] if x.shape[0] == d else x[:, None]
    if x.shape[-1] != d:
        raise DomainError(f"expected points in R^{d}, got shape {x.shape}")
    return x


def _solid_d2(k: int, ell: int, x: np.ndarray) -> np.ndarray:
    if k == 0:
        return np.ones(x.shape[0])
    z = (x[:, 0] + 1j * x[:, 1]) ** k
    return math.sqrt(2) * (z.real if ell == 1 else z.imag)


def _gegenbauer_homogeneous(n: int, lam: float, z: np.ndarray, r2: np.ndarray) -> np.ndarray:
    # r^n C_n^lam(z / r), a polynomial in (z, r^2)
    p0 = np.ones_like(z)
    if n == 0:
        return p0
    p1 = 2 * lam * z
    for k in range(1, n):
        p0, p1 = p1, (2 * (k + lam) * z * p1 - (k + 2 * lam - 1) * r2 * p0) / (k + 1)
    return p1


def _solid_d3(k: int, ell: int, x: np.ndarray) -> np.ndarray:
    m = ell // 2
    r2 = np.einsum("ij,ij->i", x, x)
    z = x[:, 2]
    norm = math.sqrt((2 * k + 1) * math.factorial(k - m) / math.factorial(k + m))
    if m == 0:
        return norm * _gegenbauer_homogeneous(k, 0.5, z, r2)
    dfact = math.prod(range(2 * m - 1, 0, -2))
    radial = _gegenbauer_homogeneous(k - m, m + 0.5, z, r2)
    w = (x[:, 0] + 1j * x[:, 1]) ** m
    angular = w.real if ell % 2 == 0 else w.imag
    return math.sqrt(2) * norm * dfact * angular * radial


def solid_sph_eval(h: HarmonicIndex, x) -> np.ndarray:
    """Solid harmonic ``|x|^k Y_ell^k(x/|x|)`` as a polynomial in x."""
    x = _as_points(x, h.d)
    if h.d == 2:
        return _solid_d2(h.k, h.ell, x)
    return _solid_d3(h.k, h.ell, x)


def sph_eval(h: HarmonicIndex, xi) -> np.ndarray:
    """Real orthonormal spherical harmonic at unit vectors ``xi``."""
    xi = _as_points(xi, h.d)
    if np.any(np.abs(np.linalg.norm(xi, axis=1) - 1) > 1e-10):
        raise DomainError("spherical harmonics need unit vectors")
    return solid_sph_eval(h, xi)


def harmonic_labels(k: int, d: int) -> range:
    return range(1, dim_harmonic(k, d) + 1)


def sph_addition(d: int, n: int, xi, eta, check: float = 1e-10) -> np.ndarray:
    """Reproducing kernel of degree-n harmonics: the basis sum and the zonal
    form ``Z_n^{(d-2)/2}(<xi, eta>)`` are both computed and must agree."""
    xi = _as_points(xi, d)
    eta = _as_points(eta, d)
    for p in (xi, eta):
        if np.any(np.abs(np.linalg.norm(p, axis=1) - 1) > 1e-10):
            raise DomainError("sph_addition needs unit vectors")
    basis_sum = sum(
        solid_sph_eval(HarmonicIndex(d, n, ell), xi) * solid_sph_eval(HarmonicIndex(d, n, ell), eta)
        for ell in harmonic_labels(n, d)
    )
    zonal = zonal_eval(n, (d - 2) / 2, np.einsum("ij,ij->i", xi, eta))
    gap = np.max(np.abs(basis_sum - zonal) / np.maximum(1.0, np.abs(zonal)))
    if gap > check:
        raise ArithmeticError(f"addition formula mismatch {gap:.3e}")
    return zonal


# ---------------------------------------------------------------- ball


@dataclass(frozen=True)
class BallIndex:
    d: int
    mu: float
    n: int
    m: int
    ell: int

    def __post_init__(self) -> None:
        if self.mu <= -0.5:
            raise ParameterDomainError(f"ball weight needs mu > -1/2, got {self.mu}")
        if not 0 <= 2 * self.m <= self.n:
            raise IndexRangeError(f"need 0 <= m <= n/2, got m={self.m}, n={self.n}")
        HarmonicIndex(self.d, self.n - 2 * self.m, self.ell)


def ball_op_eval(b: BallIndex, x) -> np.ndarray:
    """``P_m^{(mu-1/2, n-2m+(d-2)/2)}(2|x|^2-1) Y_ell^{n-2m}(x)`` for the weight
    ``(1-|x|^2)^(mu-1/2)``."""
    x = _as_points(x, b.d)
    k = b.n - 2 * b.m
    r2 = np.einsum("ij,ij->i", x, x)
    radial = jacobi_homogeneous(b.m, b.mu - 0.5, k + (b.d - 2) / 2, 2 * r2 - 1)
    return radial * solid_sph_eval(HarmonicIndex(b.d, k, b.ell), x)


def ball_norm(b: BallIndex) -> float:
    """Normalized squared norm of :func:`ball_op_eval`."""
    k = b.n - 2 * b.m
    a = b.mu - 0.5
    rad = k + (b.d - 2) / 2
    return jacobi_norm(b.m, (a, rad)) * beta_mass(rad, a) / beta_mass((b.d - 2) / 2, a)


def ball_indices(d: int, mu: float, n: int) -> list[BallIndex]:
    return [
        BallIndex(d, mu, n, m, ell)
        for m in range(n // 2 + 1)
        for ell in harmonic_labels(n - 2 * m, d)
    ]


def ball_kernel(d: int, mu: float, n: int, x, y, nodes: int | None = None) -> np.ndarray:
    """Reproducing kernel of degree-n ball polynomials by its one-dimensional
    integral representation; ``mu = 0`` uses the two-point limit rule."""
    if mu < 0:
        raise ParameterDomainError(f"ball kernel needs mu >= 0, got {mu}")
    x = _as_points(x, d)
    y = _as_points(y, d)
    inner = np.einsum("ij,ij->i", x, y)
    cx = np.sqrt(np.clip(1 - np.einsum("ij,ij->i", x, x), 0, None))
    cy = np.sqrt(np.clip(1 - np.einsum("ij,ij->i", y, y), 0, None))
    if mu == 0:
        t, w = np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    else:
        t, w = jacobi_roots(nodes or n // 2 + 2, mu - 1, mu - 1)
        w = w / w.sum()
    arg = inner[:, None] + t[None, :] * (cx * cy)[:, None]
    return zonal_eval(n, mu + (d - 1) / 2, arg) @ w
