"""Tensor Gauss-Jacobi quadrature on intervals, the triangle, spheres and
every supported domain of revolution.

Each singular weight factor is absorbed into a Jacobi weight after a change
of variables; rules embed the normalization so that their weights sum to 1.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, ParameterDomainError
from .scalar import jacobi_roots


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes (one row per point) and positive weights.

    For revolution domains the first ``d`` columns hold x and the last holds t.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    domain_tag: str
    d: int = field(default=0)

    @property
    def x(self) -> np.ndarray:
        return self.nodes[:, : self.d]

    @property
    def t(self) -> np.ndarray:
        return self.nodes[:, self.d]

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values))

    def to_csv(self, stream=None) -> str:
        out = stream or io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        ncol = self.nodes.shape[1]
        if self.d:
            header = [f"x{i + 1}" for i in range(self.d)] + ["t"]
        else:
            header = [f"c{i + 1}" for i in range(ncol)]
        writer.writerow(header + ["weight"])
        for row, w in zip(self.nodes, self.weights):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(w))])
        return out.getvalue() if stream is None else ""


def _nodes_for(degree: int) -> int:
    return max(1, degree // 2 + 1)


def gauss_jacobi_rule(m: int, a: float, b: float, interval=(-1.0, 1.0)) -> QuadratureRule:
    """Gauss rule for ``(hi - x)^a (x - lo)^b`` on ``[lo, hi]``, exact to degree ``2m-1``."""
    if m < 1:
        raise ParameterDomainError(f"need at least one node, got {m}")
    if not (a > -1 and b > -1):
        raise ParameterDomainError(f"Jacobi exponents must exceed -1, got ({a}, {b})")
    lo, hi = interval
    y, w = jacobi_roots(m, a, b)
    half = (hi - lo) / 2
    x = lo + half * (y + 1)
    w = w * half ** (a + b + 1)
    return QuadratureRule(x[:, None], w, 2 * m - 1, f"interval[{lo},{hi}]")


def _beta_rule(degree: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    # nodes on [0, 1] for y^a (1-y)^b, weights summing to 1
    y, w = jacobi_roots(_nodes_for(degree), b, a)
    return (y + 1) / 2, w / w.sum()


def _sym_rule(degree: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    t, w = jacobi_roots(_nodes_for(degree), lam, lam)
    return t, w / w.sum()


def simplex_rule(p, degree: int) -> QuadratureRule:
    """Collapsed Gauss rule on the triangle for ``u^a v^b (1-u-v)^c (1-v)^theta``."""
    a, b, c = p.alpha, p.beta, p.gamma
    th = getattr(p, "theta", 0.0)
    v, wv = _beta_rule(degree, b, a + c + th + 1)
    y, wy = _beta_rule(degree, a, c)
    V, Y = np.meshgrid(v, y, indexing="ij")
    W = np.outer(wv, wy)
    nodes = np.column_stack([((1 - V) * Y).ravel(), V.ravel()])
    return QuadratureRule(nodes, W.ravel(), degree, "triangle")


def sphere_rule(d: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Points on S^{d-1} and weights summing to 1, exact to ``degree``."""
    nphi = degree + 1
    phi = 2 * np.pi * (np.arange(nphi) + 0.5) / nphi
    if d == 2:
        return np.column_stack([np.cos(phi), np.sin(phi)]), np.full(nphi, 1.0 / nphi)
    if d == 3:
        z, wz = np.polynomial.legendre.leggauss(_nodes_for(degree))
        wz = wz / wz.sum()
        Z, P = np.meshgrid(z, phi, indexing="ij")
        rho = np.sqrt(1 - Z * Z)
        pts = np.column_stack([(rho * np.cos(P)).ravel(), (rho * np.sin(P)).ravel(), Z.ravel()])
        return pts, np.outer(wz, np.full(nphi, 1.0 / nphi)).ravel()
    raise CapabilityError(f"sphere rules implemented for d in (2, 3), got {d}")


def _grid(*axes):
    """Tensor product of 1D (nodes, weights) pairs."""
    nodes = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    weights = np.ones_like(nodes[0])
    for i, (_, w) in enumerate(axes):
        shape = [1] * len(axes)
        shape[i] = -1
        weights = weights * w.reshape(shape)
    return [n.ravel() for n in nodes], weights.ravel()


def _mirror(s, t, w):
    return np.concatenate([s, s]), np.concatenate([t, -t]), np.concatenate([w, w]) / 2


def profile_rule(dom: DomainSpec, w: WeightSpec, degree: int):
    """Planar rule ``(s, t, weight)`` for ``s^{d-1} W(s, t)`` on the half domain
    ``s >= 0``, exact for polynomials of degree ``degree`` even in s."""
    d = dom.d
    fam = dom.family
    D = degree
    al, be, ga, th = w.alpha, w.beta, w.gamma, w.theta
    half = D // 2
    if fam is Family.CYLINDER:
        (rho, t), wt = _grid(_beta_rule(half, al + (d - 2) / 2, w.mu - 0.5), _sym_rule(D, w.lam - 0.5))
        return np.sqrt(rho), t, wt
    if fam is Family.CONE:
        (t, rho), wt = _grid(
            _beta_rule(D, 2 * al + 2 * w.mu + be + d - 1, ga),
            _beta_rule(half, al + (d - 2) / 2, w.mu - 0.5),
        )
        return t * np.sqrt(rho), t, wt
    if fam is Family.COUPLED_CONE:
        a0 = al + (d - 1) / 2
        (X, Y), wt = _grid(_beta_rule(half, be, a0), _beta_rule(half, be, a0))
        # X, Y in [0, 1] stand for (1 + cos 2A)/2, (1 + cos 2B)/2
        cA, cB = np.sqrt(X), np.sqrt(Y)
        sA, sB = np.sqrt(1 - X), np.sqrt(1 - Y)
        return _mirror(sA * sB, cA * cB, wt)
    if fam is Family.PARABOLOID:
        a = al + (d - 2) / 2
        (t, y), wt = _grid(_beta_rule(D, a + ga + 1, be), _beta_rule(half, a, ga))
        return np.sqrt(t * y), t, wt
    if fam is Family.DOUBLE_CONE or fam.mapped:
        (tau, rho), wt = _grid(
            _beta_rule(half, al + ga + th + (d - 1) / 2, be),
            _beta_rule(half, al + (d - 2) / 2, ga),
        )
        z = np.sqrt(tau)
        s = z * np.sqrt(rho)
        if fam.mapped:
            z = np.sqrt(np.clip(dom.t2_from_z2(s * s, tau), 0, None))
        return _mirror(s, z, wt)
    if fam in (Family.CAPPED_QUADRATIC, Family.CAPPED_ELLIPSOID):
        a, b = dom.fa, dom.fb
        (u, y), wt = _grid(_beta_rule(half, al + (d - 2) / 2, be), _beta_rule(half, ga, th))
        if fam is Family.CAPPED_QUADRATIC:
            v = b + (1 - a) * u + (a - b) * y
        else:
            v = b * (1 - u) + (a - b) * y
        return _mirror(np.sqrt(u), np.sqrt(np.clip(v, 0, None)), wt)
    raise CapabilityError(f"no quadrature for family {fam}")


def domain_rule(dom: DomainSpec, w: WeightSpec, degree: int) -> QuadratureRule:
    """Normalized rule on the revolution domain, exact for ``f W`` when f has
    total degree at most ``degree`` in (x, t)."""
    w.validate(dom)
    s, t, wt = profile_rule(dom, w, degree)
    xi, wxi = sphere_rule(dom.d, degree)
    x = (s[:, None, None] * xi[None, :, :]).reshape(-1, dom.d)
    tt = np.repeat(t, len(wxi))
    weights = np.outer(wt, wxi).ravel()
    nodes = np.column_stack([x, tt])
    return QuadratureRule(nodes, weights / weights.sum(), degree, dom.family.value, dom.d)


def literal_mapped_rule(dom: DomainSpec, w: WeightSpec, degree: int) -> QuadratureRule:
    """Rule for a mapped family when its weight is read as ``W(x, z(x, t))``
    with no change-of-variables factor.

    The node weights carry the smooth factor ``|z| / |t|``; the rule is
    therefore only asymptotically exact.  It exists to test that reading.
    """
    if not dom.family.mapped:
        raise CapabilityError("literal mapped weights apply to mapped families only")
    base = domain_rule(DomainSpec(Family.DOUBLE_CONE, dom.d), w, degree)
    r2 = np.einsum("ij,ij->i", base.x, base.x)
    z = base.t
    t = np.sign(z) * np.sqrt(np.clip(dom.t2_from_z2(r2, z * z), 0, None))
    weights = base.weights * np.abs(z) / np.abs(t)
    nodes = np.column_stack([base.x, t])
    return QuadratureRule(nodes, weights / weights.sum(), -1, dom.family.value + ":literal", dom.d)


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    underintegrated: bool

    def normalized(self) -> np.ndarray:
        dg = np.sqrt(np.abs(np.diag(self.matrix)))
        return self.matrix / np.outer(dg, dg)

    def max_offdiag(self) -> float:
        g = self.normalized()
        return float(np.max(np.abs(g - np.diag(np.diag(g))), initial=0.0))


def evaluate(fns, rule: QuadratureRule) -> np.ndarray:
    """Matrix of function values, one row per node and one column per function."""
    if rule.d:
        cols = [f(rule.x, rule.t) for f in fns]
    else:
        cols = [f(rule.nodes) for f in fns]
    return np.column_stack(cols) if cols else np.zeros((len(rule.weights), 0))


def gram(fns, rule: QuadratureRule) -> GramResult:
    """Gram matrix ``int f_i f_j dW`` under ``rule``."""
    F = evaluate(fns, rule)
    G = (F * rule.weights[:, None]).T @ F
    G = (G + G.T) / 2
    degrees = [getattr(f, "degree", None) for f in fns]
    short = False
    if rule.exactness_degree >= 0 and all(dg is not None for dg in degrees) and degrees:
        top = sorted(degrees)[-2:]
        short = sum(top) * (2 if len(top) == 1 else 1) > rule.exactness_degree
        if short:
            warnings.warn(
                f"rule exact to degree {rule.exactness_degree} is too low for these functions",
                stacklevel=2,
            )
    return GramResult(G, short)


def default_degree(nmax: int) -> int:
    return 2 * nmax + 2


def sphere_mass(d: int) -> float:
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)
