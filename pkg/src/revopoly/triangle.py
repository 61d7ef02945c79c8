"""Jacobi polynomials on the triangle ``{u, v >= 0, u + v <= 1}``.

The weight is ``u^alpha v^beta (1-u-v)^gamma`` and, for the four-parameter
variant ``T4``, an extra factor ``(1-v)^theta``.  Inner products are
normalized to unit mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IndexRangeError, ParameterDomainError
from .scalar import beta_mass, jacobi_homogeneous, jacobi_norm, poch_ratio

VARIANTS = ("T", "S", "R", "T4")


@dataclass(frozen=True)
class TriangleParams:
    alpha: float
    beta: float
    gamma: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        # theta only needs the weight near the vertex v = 1 to be integrable
        if min(self.alpha, self.beta, self.gamma) <= -1 or self.alpha + self.gamma + self.theta <= -2:
            raise ParameterDomainError(f"triangle weight is not integrable: {self}")


def _check(variant: str, j: int, m: int, p: TriangleParams) -> None:
    if variant not in VARIANTS:
        raise ParameterDomainError(f"unknown triangle variant {variant!r}")
    if not 0 <= j <= m:
        raise IndexRangeError(f"need 0 <= j <= m, got j={j}, m={m}")
    if variant != "T4" and p.theta != 0:
        raise ParameterDomainError(f"variant {variant} takes theta = 0")


def _t_basis(j, m, a, b, c, th, u, v):
    # P_{m-j}^{(2j+a+c+th+1, b)}(2v-1) * (1-v)^j P_j^{(a,c)}(1 - 2u/(1-v)), homogenized
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    w = 1.0 - v
    inner = jacobi_homogeneous(j, a, c, w - 2.0 * u, w)
    outer = jacobi_homogeneous(m - j, 2 * j + a + c + th + 1, b, 2.0 * v - 1.0)
    return outer * inner


def tri_eval(variant: str, j: int, m: int, p: TriangleParams, u, v):
    """Evaluate ``T``, ``S``, ``R`` or ``T4`` of index ``(j, m)`` at ``(u, v)``."""
    _check(variant, j, m, p)
    a, b, c = p.alpha, p.beta, p.gamma
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if variant in ("T", "T4"):
        return _t_basis(j, m, a, b, c, p.theta, u, v)
    if variant == "S":
        return _t_basis(j, m, c, a, b, 0.0, 1.0 - u - v, u)
    return _t_basis(j, m, b, c, a, 0.0, v, 1.0 - u - v)


def kn_triangle_norm(k: int, n: int, alpha: float, beta: float, gamma: float) -> float:
    """Closed norm in the ``(k, n)`` labelling.

    With the inner degree ``k`` attached to the ``(beta, gamma)`` pair this is
    the norm of ``T^{beta, alpha, gamma}_{k, n}``; :func:`tri_norm` applies it
    with the first two exponents interchanged.
    """
    a, b, g = alpha, beta, gamma
    r = poch_ratio(
        [(a + 1, n - k), (b + 1, k), (g + 1, k), (b + g + 2, n + k)],
        [(1.0, n - k), (1.0, k), (b + g + 2, k), (a + b + g + 3, n + k)],
    )
    num = (n + k + a + b + g + 2) * (k + b + g + 1)
    den = (2 * n + a + b + g + 2) * (2 * k + b + g + 1)
    return r * num / den


def _t_norm(j: int, m: int, a: float, b: float, c: float) -> float:
    return kn_triangle_norm(j, m, b, a, c)


@lru_cache(maxsize=4096)
def _t4_norm(j: int, m: int, p: TriangleParams) -> float:
    from .quad import simplex_rule

    rule = simplex_rule(p, 2 * m)
    vals = _t_basis(j, m, p.alpha, p.beta, p.gamma, p.theta, rule.nodes[:, 0], rule.nodes[:, 1])
    return float(rule.weights @ (vals * vals))


def tri_norm(variant: str, j: int, m: int, p: TriangleParams) -> float:
    """Normalized squared norm of a triangle basis element."""
    _check(variant, j, m, p)
    a, b, c = p.alpha, p.beta, p.gamma
    if variant == "T":
        return _t_norm(j, m, a, b, c)
    if variant == "S":
        return _t_norm(j, m, c, a, b)
    if variant == "R":
        return _t_norm(j, m, b, c, a)
    return _t4_norm(j, m, p)


def triangle_normalizer(alpha: float, beta: float, gamma: float) -> float:
    """``Gamma(a+b+c+3) / (Gamma(a+1) Gamma(b+1) Gamma(c+1))``."""
    return math.exp(
        math.lgamma(alpha + beta + gamma + 3)
        - math.lgamma(alpha + 1)
        - math.lgamma(beta + 1)
        - math.lgamma(gamma + 1)
    )


def t4_norm_closed(j: int, m: int, p: TriangleParams) -> float:
    """Product-of-Jacobi form of the ``T4`` norm (used to cross-check the cache)."""
    a, b, c, th = p.alpha, p.beta, p.gamma, p.theta
    big = 2 * j + a + c + th + 1
    return (
        jacobi_norm(j, (a, c))
        * jacobi_norm(m - j, (big, b))
        * beta_mass(big, b)
        / beta_mass(a + c + th + 1, b)
    )
