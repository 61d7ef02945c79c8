"""Jacobi, Gegenbauer and generalized Gegenbauer polynomials.

Every inner product is normalized so that the weight has unit mass; the
squared norms returned here are therefore ratios ``<p, p> / <1, 1>``.
Polynomials are evaluated by forward three-term recurrence and accept
NumPy arrays (real or complex) as arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .errors import ParameterDomainError

_CLAMP = 1e-12


@dataclass(frozen=True)
class JacobiPair:
    """Exponents of the Jacobi weight ``(1-t)^alpha (1+t)^beta``."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > -1 and self.beta > -1):
            raise ParameterDomainError(
                f"Jacobi exponents must exceed -1, got ({self.alpha}, {self.beta})"
            )


@dataclass(frozen=True)
class GenGegenPair:
    """Exponents of the weight ``|t|^(2 mu) (1-t^2)^(lambda - 1/2)``."""

    lam: float
    mu: float

    def __post_init__(self) -> None:
        if not (self.lam > -0.5 and self.mu > -0.5):
            raise ParameterDomainError(
                f"generalized Gegenbauer needs lambda, mu > -1/2, got ({self.lam}, {self.mu})"
            )


def _jacobi_pair(p) -> JacobiPair:
    return p if isinstance(p, JacobiPair) else JacobiPair(*p)


def _gegen_pair(g) -> GenGegenPair:
    return g if isinstance(g, GenGegenPair) else GenGegenPair(*g)


def _check_degree(n: int) -> int:
    if int(n) != n or n < 0:
        raise ParameterDomainError(f"degree must be a non-negative integer, got {n}")
    return int(n)


# ---------------------------------------------------------------- log-space helpers


def log_poch(a: float, n: int) -> tuple[float, float]:
    """Return ``(sign, log|(a)_n|)`` for the rising factorial ``(a)_n``."""
    n = _check_degree(n)
    sign, logabs = 1.0, 0.0
    i = 0
    # factors a, a+1, ... that are not positive are multiplied in directly
    while i < n and a + i <= 0:
        f = a + i
        if f == 0:
            return 0.0, -math.inf
        sign *= -1.0
        logabs += math.log(-f)
        i += 1
    if i < n:
        logabs += float(gammaln(a + n) - gammaln(a + i))
    return sign, logabs


def poch(a: float, n: int) -> float:
    """Rising factorial ``(a)_n`` evaluated through log-gamma."""
    sign, logabs = log_poch(a, n)
    return sign * math.exp(logabs) if sign else 0.0


def poch_ratio(num: list[tuple[float, int]], den: list[tuple[float, int]]) -> float:
    """Return ``prod (a)_n / prod (b)_m`` without intermediate overflow."""
    sign, logabs = 1.0, 0.0
    for a, n in num:
        s, la = log_poch(a, n)
        if s == 0:
            return 0.0
        sign *= s
        logabs += la
    for b, m in den:
        s, lb = log_poch(b, m)
        if s == 0:
            raise ZeroDivisionError(f"({b})_{m} vanishes")
        sign *= s
        logabs -= lb
    return sign * math.exp(logabs)


def beta_mass(a: float, b: float) -> float:
    """``B(a+1, b+1) = int_0^1 y^a (1-y)^b dy``."""
    return math.exp(betaln(a + 1, b + 1))


def log_beta_mass(a: float, b: float) -> float:
    return float(betaln(a + 1, b + 1))


def jacobi_roots(m: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi nodes and weights for ``(1-t)^a (1+t)^b`` on [-1, 1].

    Golub-Welsch with the ``a + b + 1`` factor of the first off-diagonal
    cancelled by hand; ``scipy.special.roots_jacobi`` loses up to 1e-5 of
    moment accuracy as ``a + b`` approaches -1.
    """
    if m < 1:
        raise ParameterDomainError(f"need at least one node, got {m}")
    _jacobi_pair((a, b))
    k = np.arange(m, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    k = k[1:]
    s = s[1:]
    off2 = np.empty(m - 1)
    if m > 1:
        off2[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
        off2[1:] = 4 * k[1:] * (k[1:] + a) * (k[1:] + b) * (k[1:] + a + b) / (s[1:] ** 2 * (s[1:] + 1) * (s[1:] - 1))
    nodes, vecs = eigh_tridiagonal(diag, np.sqrt(off2))
    mass = 2 ** (a + b + 1) * beta_mass(a, b)
    return nodes, mass * vecs[0] ** 2


# ---------------------------------------------------------------- Jacobi


def jacobi_homogeneous(n: int, a: float, b: float, x, w=1.0):
    """Evaluate ``w^n P_n^{(a,b)}(x / w)`` without dividing by ``w``.

    The three-term recurrence is run in homogeneous form, so the result is a
    polynomial in ``(x, w)`` and stays finite where ``w`` vanishes.
    """
    x = np.asarray(x)
    w = np.asarray(w)
    shape = np.broadcast_shapes(x.shape, w.shape)
    dtype = np.result_type(x, w, float)
    p0 = np.ones(shape, dtype=dtype)
    if n == 0:
        return p0
    p1 = (a + 1) * w + 0.5 * (a + b + 2) * (x - w) + np.zeros(shape, dtype=dtype)
    w2 = w * w
    ab2 = a * a - b * b
    for k in range(1, n):
        c = 2 * k + a + b
        a1 = 2 * (k + 1) * (k + a + b + 1) * c
        a2 = (c + 1) * ab2
        a3 = c * (c + 1) * (c + 2)
        a4 = 2 * (k + a) * (k + b) * (c + 2)
        p0, p1 = p1, ((a2 * w + a3 * x) * p1 - a4 * w2 * p0) / a1
    return p1


def _clamp(t):
    t = np.asarray(t)
    if np.iscomplexobj(t):
        return t
    out = np.where(np.abs(t) <= 1 + _CLAMP, np.clip(t, -1.0, 1.0), t)
    return out.astype(float)


def jacobi_eval(n: int, p, t):
    """Jacobi polynomial ``P_n^{(alpha,beta)}(t)`` by forward recurrence."""
    n = _check_degree(n)
    p = _jacobi_pair(p)
    return jacobi_homogeneous(n, p.alpha, p.beta, _clamp(t))


def jacobi_norm(n: int, p) -> float:
    """Normalized squared norm ``h_n^{(alpha,beta)}``; symmetric in the pair."""
    n = _check_degree(n)
    p = _jacobi_pair(p)
    if n == 0:
        return 1.0
    a, b = p.alpha, p.beta
    r = poch_ratio([(a + 1, n), (b + 1, n)], [(1.0, n), (a + b + 2, n)])
    return r * (a + b + n + 1) / (a + b + 2 * n + 1)


def jacobi_normalizer(p) -> tuple[float, float]:
    """Return ``(c', c)``: ``c'`` normalizes the weight on [-1, 1], ``c`` on [0, 1]."""
    p = _jacobi_pair(p)
    a, b = p.alpha, p.beta
    log_c = gammaln(a + b + 2) - gammaln(a + 1) - gammaln(b + 1)
    c = math.exp(log_c)
    return c / 2 ** (a + b + 1), c


# ---------------------------------------------------------------- Gegenbauer


def gen_gegenbauer_coefficient(n: int, g) -> float:
    """Leading constant relating ``C_n^{(lambda,mu)}`` to its Jacobi factor."""
    g = _gegen_pair(g)
    m, odd = divmod(n, 2)
    return poch_ratio([(g.lam + g.mu, m + odd)], [(g.mu + 0.5, m + odd)])


def gen_gegenbauer_eval(n: int, g, t, t2=None):
    """Generalized Gegenbauer polynomial ``C_n^{(lambda,mu)}(t)``.

    ``t2`` may supply ``t**2`` directly; even degrees then never touch ``t``,
    which lets callers evaluate through a squared coordinate.
    """
    n = _check_degree(n)
    g = _gegen_pair(g)
    if t2 is None:
        t = _clamp(t)
        t2 = t * t
    m, odd = divmod(n, 2)
    const = gen_gegenbauer_coefficient(n, g)
    base = jacobi_homogeneous(m, g.lam - 0.5, g.mu - 0.5 + odd, 2 * np.asarray(t2) - 1)
    if odd:
        return const * np.asarray(t) * base
    return const * base


def gen_gegenbauer_norm(n: int, g) -> float:
    """Normalized squared norm of ``C_n^{(lambda,mu)}``."""
    n = _check_degree(n)
    g = _gegen_pair(g)
    if n == 0:
        return 1.0
    lam, mu = g.lam, g.mu
    m, odd = divmod(n, 2)
    r = poch_ratio([(lam + 0.5, m), (lam + mu, m + odd)], [(1.0, m), (mu + 0.5, m + odd)])
    return r * (lam + mu) / (lam + mu + n)


def gen_gegenbauer_mass(g) -> float:
    """``int_{-1}^1 |t|^(2 mu) (1-t^2)^(lambda-1/2) dt``."""
    g = _gegen_pair(g)
    return math.exp(betaln(g.mu + 0.5, g.lam + 0.5))


def gegenbauer_eval(n: int, lam: float, t):
    """Gegenbauer polynomial ``C_n^lambda``; for ``lambda = 0`` the limit
    ``lim C_n^lambda / lambda = (2/n) T_n`` is returned (``1`` at ``n = 0``)."""
    n = _check_degree(n)
    if lam <= -0.5:
        raise ParameterDomainError(f"Gegenbauer parameter must exceed -1/2, got {lam}")
    t = _clamp(t)
    if lam == 0:
        return _chebyshev(n, t) * (2.0 / n if n else 1.0)
    p0 = np.ones_like(t, dtype=np.result_type(t, float))
    if n == 0:
        return p0
    p1 = 2 * lam * t
    for k in range(1, n):
        p0, p1 = p1, (2 * (k + lam) * t * p1 - (k + 2 * lam - 1) * p0) / (k + 1)
    return p1


def gegenbauer_norm(n: int, lam: float) -> float:
    """Normalized squared norm of :func:`gegenbauer_eval` for weight ``(1-t^2)^(lambda-1/2)``."""
    n = _check_degree(n)
    if n == 0:
        return 1.0
    if lam == 0:
        return 2.0 / n**2
    return lam / (n + lam) * poch_ratio([(2 * lam, n)], [(1.0, n)])


def _chebyshev(n: int, t):
    p0 = np.ones_like(t, dtype=np.result_type(t, float))
    if n == 0:
        return p0
    p1 = np.array(t, dtype=p0.dtype)
    for _ in range(1, n):
        p0, p1 = p1, 2 * t * p1 - p0
    return p1


def zonal_eval(n: int, lam: float, t):
    """Zonal kernel ``Z_n^lambda(t) = (n+lambda)/lambda C_n^lambda(t)``.

    ``lambda = 0`` takes the Chebyshev branch ``2 T_n`` (``1`` at ``n = 0``).
    """
    n = _check_degree(n)
    if lam < 0:
        raise ParameterDomainError(f"zonal kernel needs lambda >= 0, got {lam}")
    t = _clamp(t)
    if n == 0:
        return np.ones_like(t, dtype=np.result_type(t, float))
    if lam == 0:
        return 2 * _chebyshev(n, t)
    return (n + lam) / lam * gegenbauer_eval(n, lam, t)
