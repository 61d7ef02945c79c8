"""Closed-form reproducing kernels by addition formulas.

Kernels are normalized so that the degree-0 kernel is 1, matching the
normalized weights used everywhere else.  Auxiliary integrals over [-1, 1]
use Gauss-Jacobi rules for the exact Beta exponents; an exponent of -1 is
the endpoint limit and becomes the average over the two endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import FamilyBasis
from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, ParameterDomainError
from .revolve import kernel_sum
from .scalar import beta_mass, jacobi_roots, zonal_eval


@dataclass(frozen=True)
class KernelSpec:
    """Family, weight and degree of a kernel; ``nodes`` overrides the
    auxiliary rule size."""

    family: Family
    w: WeightSpec
    n: int
    d: int = 2
    fa: float = 1.0
    fb: float = 0.0
    nodes: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 0:
            raise ParameterDomainError(f"degree must be >= 0, got {self.n}")

    @property
    def dom(self) -> DomainSpec:
        return DomainSpec(self.family, self.d, self.fa, self.fb)

    def size(self) -> int:
        return self.nodes or self.n + 4


def symmetric_mass(a: float) -> float:
    """``int_{-1}^{1} (1-u^2)^a du``."""
    return 2 ** (2 * a + 1) * beta_mass(a, a)


def aux_rule(a: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalized weights for ``(1-u^2)^a`` on [-1, 1]."""
    if a == -1:
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    if a < -1:
        raise ParameterDomainError(f"auxiliary exponent must be >= -1, got {a}")
    u, w = jacobi_roots(m, a, a)
    mass = symmetric_mass(a)
    # the analytic constant must reproduce the degree-0 identity
    if abs(w.sum() / mass - 1) > 1e-12:
        raise ArithmeticError(f"Gauss-Jacobi mass {w.sum()} disagrees with Beta mass {mass}")
    return u, w / mass


def _pairs(p, q):
    (x, t), (y, s) = p, q
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
    s = np.broadcast_to(np.asarray(s, dtype=float), (y.shape[0],))
    return x, t, y, s


def _sqrt(v):
    return np.sqrt(np.clip(v, 0, None))


# ---------------------------------------------------------------- cone


def xi(x, t, y, s, u, v1, v2):
    """Argument of the cone addition formula; broadcasts over the trailing
    auxiliary axes of ``u, v1, v2``."""
    inner = np.einsum("ni,ni->n", x, y)
    cross = _sqrt(t * t - np.einsum("ni,ni->n", x, x)) * _sqrt(s * s - np.einsum("ni,ni->n", y, y))
    ex = (slice(None),) + (None,) * (np.ndim(u) if np.ndim(u) else 0)
    head = _sqrt(0.5 * ((t * s + inner)[ex] + cross[ex] * u))
    return v1 * head + v2 * (_sqrt(1 - t) * _sqrt(1 - s))[ex]


def cone_constant(mu: float, gamma: float, d: int) -> float:
    """``c_{mu,gamma,d}``: reciprocal of the product of the three Beta masses."""
    masses = [symmetric_mass(a) if a > -1 else 1.0 for a in (mu - 1, mu + (d - 3) / 2, gamma - 0.5)]
    return 1.0 / math.prod(masses)


def cone_kernel(spec: KernelSpec, p, q) -> np.ndarray:
    """Reproducing kernel of degree n on the cone for
    ``(1-t)^gamma (t^2-||x||^2)^{mu-1/2}``."""
    w, d = spec.w, spec.d
    if spec.family is not Family.CONE:
        raise ParameterDomainError("cone_kernel needs the cone family")
    if w.alpha != 0 or w.beta != 0:
        raise CapabilityError("the cone addition formula holds for alpha = beta = 0")
    if w.mu < 0 or w.gamma < -0.5:
        raise CapabilityError(f"cone addition formula needs mu >= 0 and gamma >= -1/2, got {w}")
    x, t, y, s = _pairs(p, q)
    m = spec.size()
    u, wu = aux_rule(w.mu - 1, m)
    a, wa = aux_rule(w.mu + (d - 3) / 2, m)
    b, wb = aux_rule(w.gamma - 0.5, m)
    U, A, B = np.meshgrid(u, a, b, indexing="ij")
    W = wu[:, None, None] * wa[None, :, None] * wb[None, None, :]
    vals = zonal_eval(2 * spec.n, 2 * w.mu + w.gamma + d, xi(x, t, y, s, U, A, B))
    return np.einsum("nabc,abc->n", vals, W)


# ---------------------------------------------------------------- double cone


def zeta(x, t, y, s, u, v):
    """Argument of the even double cone addition formula.

    The sign of ``st`` multiplies only the u-term, where the symmetric u-weight
    makes it immaterial; it is kept for fidelity.
    """
    ex = (slice(None),) + (None,) * np.ndim(u)
    sg = np.where(t * s >= 0, 1.0, -1.0)
    cross = _sqrt(t * t - np.einsum("ni,ni->n", x, x)) * _sqrt(s * s - np.einsum("ni,ni->n", y, y))
    cap = _sqrt(1 - t * t) * _sqrt(1 - s * s)
    return np.einsum("ni,ni->n", x, y)[ex] + u * (sg * cross)[ex] + v * cap[ex]


def zeta_family(dom: DomainSpec, x, t, y, s, u, v):
    """Each mapped family's own closed form of the kernel argument."""
    a, b = dom.fa, dom.fb
    fam = dom.family
    ex = (slice(None),) + (None,) * np.ndim(u)
    rx = np.einsum("ni,ni->n", x, x)
    ry = np.einsum("ni,ni->n", y, y)
    sg = np.where(t * s >= 0, 1.0, -1.0)
    if fam is Family.DOUBLE_CONIC:
        cross = _sqrt(t * t - rx) * _sqrt(s * s - ry) / a
        cap = _sqrt(1 - rx - (t * t - rx) / a) * _sqrt(1 - ry - (s * s - ry) / a)
    elif fam is Family.HYPERBOLOID:
        cross = _sqrt((t * t - b) / (1 - b) - rx) * _sqrt((s * s - b) / (1 - b) - ry)
        cap = _sqrt(1 - s * s) * _sqrt(1 - t * t) / (1 - b)
    elif fam is Family.DOUBLE_HYPERBOLIC:
        cross = _sqrt(t * t - b - (1 - b) * rx) * _sqrt(s * s - b - (1 - b) * ry) / (a - b)
        cap = _sqrt(a - t * t + (1 - a) * rx) * _sqrt(a - s * s + (1 - a) * ry) / (a - b)
    elif fam is Family.ELLIPSOID_LENS:
        cross = _sqrt(t * t - b * (1 - rx)) * _sqrt(s * s - b * (1 - ry)) / (a - b)
        cap = _sqrt(a - t * t - a * rx) * _sqrt(a - s * s - a * ry) / (a - b)
    elif fam is Family.DOUBLE_CONE:
        return zeta(x, t, y, s, u, v)
    else:
        raise CapabilityError(f"{fam.value} has no double cone addition formula")
    return np.einsum("ni,ni->n", x, y)[ex] + u * (sg * cross)[ex] + v * cap[ex]


def doublecone_constant(beta: float, gamma: float) -> float:
    """``c_beta c_gamma``: reciprocals of the two Beta masses."""
    return 1.0 / (symmetric_mass(beta - 0.5) * symmetric_mass(gamma - 0.5))


def _check_even_weight(w: WeightSpec) -> None:
    if w.alpha != 0 or w.theta != 0.5:
        raise CapabilityError("the even addition formula holds for alpha = 0 and theta = 1/2")
    if w.beta < -0.5 or w.gamma < -0.5:
        raise CapabilityError(f"even addition formula needs beta, gamma >= -1/2, got {w}")


def _even_kernel(spec: KernelSpec, p, q, arg) -> np.ndarray:
    w, d = spec.w, spec.d
    _check_even_weight(w)
    x, t, y, s = _pairs(p, q)
    m = spec.size()
    u, wu = aux_rule(w.gamma - 0.5, m)
    v, wv = aux_rule(w.beta - 0.5, m)
    U, V = np.meshgrid(u, v, indexing="ij")
    W = wu[:, None] * wv[None, :]
    lam = w.beta + w.gamma + (d + 2) / 2
    vals = zonal_eval(spec.n, lam, arg(x, t, y, s, U, V))
    return np.einsum("nab,ab->n", vals, W)


def doublecone_even_kernel(spec: KernelSpec, p, q) -> np.ndarray:
    """Kernel of the even double cone polynomials of degree n for
    ``(1-t^2)^beta (t^2-||x||^2)^gamma |t|``."""
    if spec.family is not Family.DOUBLE_CONE:
        raise ParameterDomainError("doublecone_even_kernel needs the double cone family")
    return _even_kernel(spec, p, q, zeta)


def mapped_kernel(spec: KernelSpec, p, q) -> np.ndarray:
    """Even kernel of a mapped family from its own closed-form argument."""
    dom = spec.dom
    if not dom.family.mapped:
        raise ParameterDomainError(f"{dom.family.value} is not a mapped family")

    def arg(x, t, y, s, U, V):
        return zeta_family(dom, x, t, y, s, U, V)

    return _even_kernel(spec, p, q, arg)


def to_double_cone(dom: DomainSpec, x, t) -> np.ndarray:
    """Signed double cone coordinate ``z`` of points of a mapped family."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    t = np.asarray(t, dtype=float)
    return np.sign(t) * _sqrt(dom.z2(np.einsum("ni,ni->n", x, x), t * t))


# ---------------------------------------------------------------- basis sums and relations


def basis_kernel(spec: KernelSpec, p, q, parity: str = "any") -> np.ndarray:
    """Kernel as the sum over the family's orthogonal basis."""
    return kernel_sum(spec.n, FamilyBasis(spec.dom, spec.w), p, q, parity)


def oddeven_constant(beta: float, gamma: float, theta: float, d: int) -> float:
    """Constant linking normalized odd and even double cone kernels."""
    a = gamma + theta + d / 2
    return (a + beta + 1.5) / (a + 0.5)


def oddeven_relation_check(beta: float, gamma: float, theta: float, n: int, points, d: int = 2) -> float:
    """``max |P_n^O(theta) - c s t P_{n-1}^E(theta+1)|`` over point pairs,
    both sides by basis sums."""
    if n < 1:
        raise ParameterDomainError("the odd kernel starts at degree 1")
    if min(beta, gamma) < 0 or beta + theta < d / 2:
        raise CapabilityError("relation needs beta, gamma >= 0 and beta + theta >= d/2")
    p, q = points
    x, t, y, s = _pairs(p, q)
    odd = FamilyBasis(DomainSpec(Family.DOUBLE_CONE, d), WeightSpec(beta=beta, gamma=gamma, theta=theta))
    even = FamilyBasis(DomainSpec(Family.DOUBLE_CONE, d), WeightSpec(beta=beta, gamma=gamma, theta=theta + 1))
    lhs = kernel_sum(n, odd, (x, t), (y, s), "odd")
    rhs = oddeven_constant(beta, gamma, theta, d) * s * t * kernel_sum(n - 1, even, (x, t), (y, s), "even")
    return float(np.max(np.abs(lhs - rhs)))
