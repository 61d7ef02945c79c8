"""Second-order spectral operators applied by finite differences.

Derivatives come from central differences at steps ``h, h/2, ...`` combined
by Richardson extrapolation, so each operator is checked independently of
how the polynomial it acts on is represented.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .catalog import FamilyBasis
from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, DomainError, ParameterDomainError
from .revolve import EvalFn
from .sphere import HarmonicIndex, ball_indices, ball_op_eval, harmonic_labels, sph_eval

OPERATORS = ("cone", "doublecone-even", "doublecone-odd", "ball", "sphere", "mapped-even", "mapped-odd")


def _derivs(f, P: np.ndarray, h: float, levels: int):
    """Value, gradient (N, D) and Hessian (N, D, D) of ``f`` at rows of ``P``."""
    N, D = P.shape
    u0 = f(P)
    est = []
    step = h
    for _ in range(levels):
        g = np.empty((N, D))
        H = np.empty((N, D, D))
        for i in range(D):
            e = np.zeros(D)
            e[i] = step
            fp, fm = f(P + e), f(P - e)
            g[:, i] = (fp - fm) / (2 * step)
            H[:, i, i] = (fp - 2 * u0 + fm) / step**2
        for i in range(D):
            for j in range(i + 1, D):
                e = np.zeros(D)
                e[i] = e[j] = step
                o = np.zeros(D)
                o[i], o[j] = step, -step
                mixed = (f(P + e) - f(P + o) - f(P - o) + f(P - e)) / (4 * step**2)
                H[:, i, j] = H[:, j, i] = mixed
        est.append((g, H))
        step /= 2
    # Richardson on the even error expansion of central differences
    for lvl in range(1, levels):
        fac = 4.0**lvl
        est = [((fac * b[0] - a[0]) / (fac - 1), (fac * b[1] - a[1]) / (fac - 1)) for a, b in zip(est, est[1:])]
    g, H = est[-1]
    return u0, g, H


def _euler(x, gx):
    return np.einsum("ni,ni->n", x, gx)


def _euler_sq(x, gx, Hxx):
    # <x, grad>^2 u = sum x_i x_j u_ij + <x, grad> u
    return np.einsum("ni,nj,nij->n", x, x, Hxx) + _euler(x, gx)


def cone_operator(g: float, mu: float, x, t, u, gx, ut, Hxx, Hxt, utt):
    """Cone operator acting on the Jacobi polynomials of the cone."""
    d = x.shape[1]
    lap_part = t * np.trace(Hxx, axis1=1, axis2=2) - np.einsum("ni,nj,nij->n", x, x, Hxx)
    e = _euler(x, gx)
    return (
        t * (1 - t) * utt
        + 2 * (1 - t) * np.einsum("ni,ni->n", x, Hxt)
        + lap_part
        + (2 * mu + d) * ut
        - (2 * mu + g + d + 1) * (e + t * ut)
    )


def doublecone_even_operator(b: float, g: float, x, t, u, gx, ut, Hxx, Hxt, utt):
    """Operator whose eigenspaces are the even double cone polynomials for
    ``(1-t^2)^{b-1/2} (t^2-||x||^2)^g |t|``."""
    d = x.shape[1]
    e = _euler(x, gx)
    return (
        (1 - t * t) * utt
        + np.trace(Hxx, axis1=1, axis2=2)
        - _euler_sq(x, gx, Hxx)
        + 2 / t * (1 - t * t) * np.einsum("ni,ni->n", x, Hxt)
        + (2 * g + d + 1) / t * ut
        - t * ut
        - (2 * b + 2 * g + d + 1) * (t * ut + e)
    )


def doublecone_odd_operator(b: float, g: float, x, t, u, gx, ut, Hxx, Hxt, utt):
    """Operator whose eigenspaces are the odd double cone polynomials for
    ``(1-t^2)^{b-1/2} (t^2-||x||^2)^g |t|^{-1}``."""
    d = x.shape[1]
    e = _euler(x, gx)
    return (
        (1 - t * t) * utt
        + np.trace(Hxx, axis1=1, axis2=2)
        - _euler_sq(x, gx, Hxx)
        - e
        + 2 / t * (1 - t * t) * (np.einsum("ni,ni->n", x, Hxt) - e / t)
        + (2 * g + d - 1) / t * (ut - u / t)
        - (2 * b + 2 * g + d) * (t * ut + e)
    )


def cone_eigenvalue(n: int, gamma: float, mu: float, d: int) -> float:
    return -n * (n + 2 * mu + gamma + d)


def doublecone_eigenvalue(n: int, beta: float, gamma: float, d: int, parity: str = "even") -> float:
    shift = 1 if parity == "even" else -1
    return -n * (n + 2 * beta + 2 * gamma + d + shift)


def ball_eigenvalue(n: int, mu: float, d: int) -> float:
    return -n * (n + 2 * mu + d - 1)


def sphere_eigenvalue(n: int, d: int) -> float:
    return -n * (n + d - 2)


@dataclass(frozen=True)
class OperatorSpec:
    """Operator id, its parameters and the finite-difference scheme.

    ``params`` holds ``gamma, mu`` for the cone, ``beta, gamma`` for the
    double-cone and mapped operators and ``mu`` for the ball.  ``dom`` is the
    mapped domain for the mapped operators.
    """

    op: str
    params: dict = field(default_factory=dict)
    d: int = 2
    dom: DomainSpec | None = None
    h: float = 1e-3
    levels: int = 2
    margin: float = 0.1
    tmin: float = 0.2

    def __post_init__(self) -> None:
        if self.op not in OPERATORS:
            raise ParameterDomainError(f"unknown operator {self.op!r}; choose from {OPERATORS}")
        if not 1e-5 <= self.h <= 1e-2:
            raise ParameterDomainError(f"step must lie in [1e-5, 1e-2], got {self.h}")
        if self.levels < 1:
            raise ParameterDomainError("need at least one Richardson level")
        if self.op.startswith("mapped") and (self.dom is None or not self.dom.family.mapped):
            raise ParameterDomainError("mapped operators need a mapped domain")
        if self.op == "mapped-odd" and self.dom.family is not Family.HYPERBOLOID:
            raise CapabilityError("the odd mapped operator exists for the hyperboloid only")

    def p(self, name: str) -> float:
        try:
            return float(self.params[name])
        except KeyError:
            raise ParameterDomainError(f"operator {self.op} needs parameter {name!r}") from None

    def eigenvalue(self, n: int) -> float:
        if self.op == "cone":
            return cone_eigenvalue(n, self.p("gamma"), self.p("mu"), self.d)
        if self.op == "ball":
            return ball_eigenvalue(n, self.p("mu"), self.d)
        if self.op == "sphere":
            return sphere_eigenvalue(n, self.d)
        parity = "even" if self.op.endswith("even") else "odd"
        return doublecone_eigenvalue(n, self.p("beta"), self.p("gamma"), self.d, parity)

    def domain(self) -> DomainSpec | None:
        """Domain whose interior the test points must lie in."""
        if self.op == "cone":
            return DomainSpec(Family.CONE, self.d)
        if self.op.startswith("doublecone"):
            return DomainSpec(Family.DOUBLE_CONE, self.d)
        return self.dom if self.op.startswith("mapped") else None


def _split(d, g, H):
    return g[:, :d], g[:, d], H[:, :d, :d], H[:, :d, d], H[:, d, d]


def _revolve_apply(spec: OperatorSpec, f, x, t):
    P = np.column_stack([x, t])
    u, g, H = _derivs(f, P, spec.h, spec.levels)
    gx, ut, Hxx, Hxt, utt = _split(spec.d, g, H)
    if spec.op == "cone":
        return u, cone_operator(spec.p("gamma"), spec.p("mu"), x, t, u, gx, ut, Hxx, Hxt, utt)
    b, gm = spec.p("beta"), spec.p("gamma")
    if spec.op.endswith("even"):
        return u, doublecone_even_operator(b, gm, x, t, u, gx, ut, Hxx, Hxt, utt)
    return u, doublecone_odd_operator(b, gm, x, t, u, gx, ut, Hxx, Hxt, utt)


def apply_operator(spec: OperatorSpec, u, x, t=None):
    """``(u(p), (D u)(p))`` at the given points.

    ``u`` takes ``(x, t)`` for the domain operators and ``x`` alone for the
    ball and sphere operators.  Mapped operators are applied in the
    double-cone coordinates ``(x, z)`` to ``v(x, z) = u(x, t(x, z))``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    d = spec.d
    if x.shape[1] != d:
        raise ParameterDomainError(f"points have dimension {x.shape[1]}, operator expects {d}")
    if spec.op == "ball":
        mu = spec.p("mu")
        val, g, H = _derivs(lambda P: u(P), x, spec.h, spec.levels)
        out = np.trace(H, axis1=1, axis2=2) - _euler_sq(x, g, H) - (2 * mu + d - 1) * _euler(x, g)
        return val, out
    if spec.op == "sphere":
        radial = np.linalg.norm(x, axis=1)
        if np.max(np.abs(radial - 1)) > 1e-12:
            raise DomainError("sphere operator needs points on the unit sphere")

        def f0(P):
            return u(P / np.linalg.norm(P, axis=1, keepdims=True))

        val, g, H = _derivs(f0, x, spec.h, spec.levels)
        return val, np.trace(H, axis1=1, axis2=2)
    t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
    if spec.op.startswith("mapped"):
        dom = spec.dom
        r2 = np.einsum("ni,ni->n", x, x)
        z = np.sign(t) * np.sqrt(dom.z2(r2, t * t))

        def v(P):
            xx, zz = P[:, :d], P[:, d]
            tt = np.sign(zz) * np.sqrt(dom.t2_from_z2(np.einsum("ni,ni->n", xx, xx), zz * zz))
            return u(np.column_stack([xx, tt]))

        inner = OperatorSpec(spec.op.replace("mapped", "doublecone"), spec.params, d, None, spec.h, spec.levels)
        return _revolve_apply(inner, v, x, z)
    return _revolve_apply(spec, lambda P: u(P), x, t)


def check_points(spec: OperatorSpec, x, t=None) -> None:
    """Reject points closer than the margin to the boundary or to ``t = 0``."""
    dom = spec.domain()
    if dom is None:
        return
    t = np.asarray(t, dtype=float)
    bad = ~dom.interior(x, t, spec.margin)
    if spec.op != "cone":
        bad |= np.abs(t) < spec.tmin
    if np.any(bad):
        idx = np.flatnonzero(bad)
        raise DomainError(
            f"{len(idx)} point(s) violate margin {spec.margin} / |t| >= {spec.tmin}; first at index {idx[0]}"
        )


def spectral_residual(spec: OperatorSpec, u, eigenvalue: float, x, t=None) -> float:
    """``max |D u - lambda u| / max(1, |lambda u|)`` over the points."""
    check_points(spec, x, t)
    val, du = apply_operator(spec, _as_point_fn(u, spec), x, t)
    lam_u = eigenvalue * val
    return float(np.max(np.abs(du - lam_u) / np.maximum(1.0, np.abs(lam_u))))


def _as_point_fn(u, spec: OperatorSpec):
    """Adapt ``u`` to take one stacked array of points."""
    if spec.op in ("ball", "sphere"):
        return u
    d = spec.d

    def f(P):
        return np.asarray(u(P[:, :d], P[:, d]), dtype=float)

    return f


def residual_report(spec: OperatorSpec, n: int, npoints: int, residual: float) -> str:
    doc = {
        "operator": spec.op,
        "params": {**{k: float(v) for k, v in spec.params.items()}, "d": spec.d},
        "n": n,
        "points": npoints,
        "max_residual": residual,
    }
    if spec.dom is not None:
        doc["params"].update(family=spec.dom.family.value, fa=spec.dom.fa, fb=spec.dom.fb)
    return json.dumps(doc, sort_keys=True)


def eigen_weight(spec: OperatorSpec) -> WeightSpec:
    """Weight whose orthogonal polynomials the operator diagonalizes."""
    if spec.op == "cone":
        return WeightSpec(gamma=spec.p("gamma"), mu=spec.p("mu"))
    if spec.op in ("ball", "sphere"):
        raise CapabilityError(f"{spec.op} operator has no domain-of-revolution weight")
    theta = 0.5 if spec.op.endswith("even") else -0.5
    return WeightSpec(beta=spec.p("beta") - 0.5, gamma=spec.p("gamma"), theta=theta)


def eigenbasis(spec: OperatorSpec, n: int) -> list:
    """Orthogonal basis of the degree-n eigenspace of the operator.

    Functions take ``(x, t)`` except for the ball and sphere operators, whose
    functions take ``x``.  Odd hyperboloid eigenfunctions are odd double cone
    polynomials in ``(x, z)`` and are not polynomials in ``t``.
    """
    d = spec.d
    if spec.op == "ball":
        mu = spec.p("mu")
        return [partial(ball_op_eval, b) for b in ball_indices(d, mu, n)]
    if spec.op == "sphere":
        return [partial(sph_eval, HarmonicIndex(d, n, ell)) for ell in harmonic_labels(n, d)]
    w = eigen_weight(spec)
    parity = "even" if spec.op.endswith("even") else ("any" if spec.op == "cone" else "odd")
    if spec.op == "cone":
        basis = FamilyBasis(DomainSpec(Family.CONE, d), w)
    elif spec.op == "mapped-odd":
        base = FamilyBasis(DomainSpec(Family.DOUBLE_CONE, d), w)
        return [_z_substituted(spec.dom, base.element(i)) for i in base.indices(n, "odd")]
    else:
        basis = FamilyBasis(spec.dom or DomainSpec(Family.DOUBLE_CONE, d), w)
    return [basis.element(i) for i in basis.indices(n, parity)]


def _z_substituted(dom: DomainSpec, f: EvalFn) -> EvalFn:
    def fn(x, t):
        z = np.sign(t) * np.sqrt(dom.z2(np.einsum("ni,ni->n", x, x), t * t))
        return f(x, z)

    return EvalFn(fn, None, f.label + "(z)", f.norm)
