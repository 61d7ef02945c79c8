"""Closed-form orthogonal bases for every supported domain family.

Each family is a :class:`ProfileBasis` whose profile polynomials are written
in ``(s^2, t)`` through homogenized Jacobi recurrences, so that factors such
as ``t^{2j} P_j(2 s^2 / t^2 - 1)`` never divide by t.  A :class:`FamilyBasis`
wraps the profile with spherical harmonics and carries the norms.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, ParameterDomainError
from .revolve import BasisIndex, EvalFn, ProfileBasis, enumerate_indices, wrap_basis
from .scalar import (
    beta_mass,
    gegenbauer_eval,
    gegenbauer_norm,
    gen_gegenbauer_eval,
    gen_gegenbauer_mass,
    gen_gegenbauer_norm,
    jacobi_homogeneous,
    jacobi_norm,
)
from .triangle import TriangleParams, _t_basis, tri_eval, tri_norm, triangle_normalizer


def _half(d: int) -> float:
    return (d - 2) / 2


# ---------------------------------------------------------------- cylinder


class CylinderProfile(ProfileBasis):
    """``C_{m-2j}^lam(t) P_j^{(mu-1/2, alpha+k+(d-2)/2)}(2 s^2 - 1)``."""

    def _b(self, k):
        return self.w.alpha + k + _half(self.dom.d)

    def evaluate(self, k, j, m, s2, t):
        w = self.w
        return gegenbauer_eval(m - 2 * j, w.lam, t) * jacobi_homogeneous(j, w.mu - 0.5, self._b(k), 2 * s2 - 1)

    def norm(self, k, j, m):
        w = self.w
        b, b0 = self._b(k), self._b(0)
        a = w.mu - 0.5
        return gegenbauer_norm(m - 2 * j, w.lam) * jacobi_norm(j, (a, b)) * beta_mass(b, a) / beta_mass(b0, a)


class CylinderGegenbauerProfile(ProfileBasis):
    """Products ``C_{m-2j}^lam(t) C_{2j}^{(mu, alpha+k+(d-1)/2)}(s)`` of a
    Gegenbauer and a generalized Gegenbauer polynomial."""

    def _g(self, k):
        return (self.w.mu, self.w.alpha + k + (self.dom.d - 1) / 2)

    def evaluate(self, k, j, m, s2, t):
        radial = gen_gegenbauer_eval(2 * j, self._g(k), None, t2=s2)
        return gegenbauer_eval(m - 2 * j, self.w.lam, t) * radial

    def norm(self, k, j, m):
        g = self._g(k)
        mass = gen_gegenbauer_mass(g) / gen_gegenbauer_mass(self._g(0))
        return gegenbauer_norm(m - 2 * j, self.w.lam) * gen_gegenbauer_norm(2 * j, g) * mass


# ---------------------------------------------------------------- cone


class ConeProfile(ProfileBasis):
    """``P_{m-2j}^{(A, gamma)}(1-2t) t^{2j} P_j^{(mu-1/2, b)}(2 s^2/t^2 - 1)``."""

    def _exps(self, k, j):
        w, d = self.w, self.dom.d
        big = 2 * (k + 2 * j) + w.beta + 2 * w.alpha + 2 * w.mu + d - 1
        return big, w.alpha + k + _half(d)

    def evaluate(self, k, j, m, s2, t):
        w = self.w
        big, b = self._exps(k, j)
        t2 = t * t
        return jacobi_homogeneous(m - 2 * j, big, w.gamma, 1 - 2 * t) * jacobi_homogeneous(
            j, w.mu - 0.5, b, 2 * s2 - t2, t2
        )

    def norm(self, k, j, m):
        w = self.w
        big, b = self._exps(k, j)
        big0, b0 = self._exps(0, 0)
        a = w.mu - 0.5
        return (
            jacobi_norm(m - 2 * j, (big, w.gamma))
            * jacobi_norm(j, (a, b))
            * beta_mass(big, w.gamma)
            / beta_mass(big0, w.gamma)
            * beta_mass(b, a)
            / beta_mass(b0, a)
        )


# ---------------------------------------------------------------- coupled cone


def coupled_cone_profile(j: int, m: int, a: float, b: float, s2, t):
    """Symmetrized product of Jacobi polynomials in ``cos(theta -+ phi)``.

    The two cosines are the roots of ``z^2 - 2(t^2-s^2) z + 2t^2 + 2s^2 - 1``;
    the symmetric combination is a polynomial in ``(s^2, t)``.
    """
    s2 = np.asarray(s2, dtype=float)
    t = np.asarray(t, dtype=float)
    t2 = t * t
    half_sum = t2 - s2
    root = np.sqrt((half_sum * half_sum - 2 * t2 - 2 * s2 + 1).astype(complex))
    xm, xp = half_sum - root, half_sum + root
    mm, odd = divmod(m, 2)
    bb = b + odd

    def p(n, x):
        return jacobi_homogeneous(n, a, bb, x)

    val = (p(mm, xm) * p(j, xp) + p(j, xm) * p(mm, xp)).real
    return 2 * t * val if odd else val


class CoupledConeProfile(ProfileBasis):
    """Coupled cone profiles with Jacobi parameters ``(alpha+k+(d-1)/2, beta)``.

    ``shift`` selects the harmonic-degree shift of the first parameter; the
    alternative ``"2k"`` uses ``alpha+2k+d-1`` and exists for comparison.
    """

    def __init__(self, dom, w, shift: str = "k"):
        super().__init__(dom, w)
        if shift not in ("k", "2k"):
            raise ParameterDomainError(f"unknown shift {shift!r}")
        self.shift = shift

    def _a(self, k):
        if self.shift == "2k":
            return self.w.alpha + 2 * k + self.dom.d - 1
        return self.w.alpha + k + (self.dom.d - 1) / 2

    def evaluate(self, k, j, m, s2, t):
        return coupled_cone_profile(j, m, self._a(k), self.w.beta, s2, t)

    def norm(self, k, j, m):
        if self.shift != "k":
            return super().norm(k, j, m)
        a, a0, b = self._a(k), self._a(0), self.w.beta
        mm, odd = divmod(m, 2)
        bb = b + odd
        sym = 2.0 if j == mm else 1.0
        core = 2 * jacobi_norm(mm, (a, bb)) * jacobi_norm(j, (a, bb)) * sym
        mass = (beta_mass(a, bb) / beta_mass(a0, b)) ** 2
        return core * mass * (4 if odd else 1)


# ---------------------------------------------------------------- paraboloid


class ParaboloidProfile(ProfileBasis):
    """``T_{j, m-j}^{(alpha+k+(d-2)/2, beta, gamma)}(s^2, 1-t)``."""

    def _p(self, k):
        w = self.w
        return TriangleParams(w.alpha + k + _half(self.dom.d), w.beta, w.gamma)

    def evaluate(self, k, j, m, s2, t):
        return tri_eval("T", j, m - j, self._p(k), s2, 1 - np.asarray(t, dtype=float))

    def norm(self, k, j, m):
        p, p0 = self._p(k), self._p(0)
        ratio = triangle_normalizer(p0.alpha, p0.beta, p0.gamma) / triangle_normalizer(p.alpha, p.beta, p.gamma)
        return tri_norm("T", j, m - j, p) * ratio


# ---------------------------------------------------------------- double cone


class DoubleConeProfile(ProfileBasis):
    """``C_{m-2j}^{(beta+1/2, mu_K)}(t) t^{2j} P_j^{(gamma, b)}(2 s^2/t^2 - 1)``
    with ``mu_K = k+2j+alpha+gamma+theta+d/2`` and ``b = k+alpha+(d-2)/2``."""

    def _g(self, k, j):
        w = self.w
        return (w.beta + 0.5, k + 2 * j + w.alpha + w.gamma + w.theta + self.dom.d / 2)

    def _b(self, k):
        return k + self.w.alpha + _half(self.dom.d)

    def evaluate_sq(self, k, j, m, s2, t2, t=None):
        radial = jacobi_homogeneous(j, self.w.gamma, self._b(k), 2 * s2 - t2, t2)
        return gen_gegenbauer_eval(m - 2 * j, self._g(k, j), t, t2=t2) * radial

    def evaluate(self, k, j, m, s2, t):
        t = np.asarray(t, dtype=float)
        return self.evaluate_sq(k, j, m, s2, t * t, t)

    def norm(self, k, j, m):
        g, g0 = self._g(k, j), self._g(0, 0)
        b, b0 = self._b(k), self._b(0)
        ga = self.w.gamma
        mass = gen_gegenbauer_mass(g) / gen_gegenbauer_mass(g0) * beta_mass(b, ga) / beta_mass(b0, ga)
        return gen_gegenbauer_norm(m - 2 * j, g) * jacobi_norm(j, (ga, b)) * mass


def double_cone_t4(k: int, j: int, m: int, dom: DomainSpec, w: WeightSpec, s2, t):
    """Profile of degree m lifted from the four-parameter triangle basis."""
    mm, odd = divmod(m, 2)
    p = TriangleParams(w.alpha + k + _half(dom.d), w.beta, w.gamma, w.theta + (0.5 if odd else -0.5))
    t = np.asarray(t, dtype=float)
    val = _t_basis(j, mm, p.alpha, p.beta, p.gamma, p.theta, s2, 1 - t * t)
    return t * val if odd else val


class DoubleConeTriangleProfile(ProfileBasis):
    """Double cone profiles lifted from the triangle; norms by quadrature."""

    closed_norm = False

    def evaluate(self, k, j, m, s2, t):
        return double_cone_t4(k, j, m, self.dom, self.w, s2, t)


# ---------------------------------------------------------------- mapped double domains


class MappedProfile(ProfileBasis):
    """Even double cone profiles composed with the family's map ``t^2 -> z^2``.

    The inner products use the weight carried over from the double cone by
    the substitution, ``W_dc(x, z) |t| / |z|``.
    """

    def __init__(self, dom, w):
        super().__init__(dom, w)
        self.base = DoubleConeProfile(DomainSpec(Family.DOUBLE_CONE, dom.d), w)

    def supports(self, k, j, m):
        return m % 2 == 0 and 0 <= j <= m // 2

    def evaluate(self, k, j, m, s2, t):
        if m % 2:
            raise CapabilityError("mapped families carry even profiles only")
        t = np.asarray(t, dtype=float)
        return self.base.evaluate_sq(k, j, m, s2, self.dom.z2(s2, t * t))

    def norm(self, k, j, m):
        return self.base.norm(k, j, m)


# ---------------------------------------------------------------- capped cylinders


class CappedProfile(ProfileBasis):
    """``P_j^{(alpha+k+(d-2)/2, beta)}(1-2 s^2) P_{m/2-j}^{(gamma, theta)}(1-2y)``,
    with y the affine coordinate across the two caps."""

    def _a(self, k):
        return self.w.alpha + k + _half(self.dom.d)

    def supports(self, k, j, m):
        return m % 2 == 0 and 0 <= j <= m // 2

    def y(self, s2, t2):
        a, b = self.dom.fa, self.dom.fb
        if self.dom.family is Family.CAPPED_QUADRATIC:
            return (t2 - b - (1 - a) * s2) / (a - b)
        return (t2 + b * s2 - b) / (a - b)

    def evaluate(self, k, j, m, s2, t):
        if m % 2:
            raise CapabilityError("capped cylinders carry even profiles only")
        w = self.w
        t = np.asarray(t, dtype=float)
        y = self.y(s2, t * t)
        return jacobi_homogeneous(j, self._a(k), w.beta, 1 - 2 * s2) * jacobi_homogeneous(
            m // 2 - j, w.gamma, w.theta, 1 - 2 * y
        )

    def norm(self, k, j, m):
        w = self.w
        a, a0 = self._a(k), self._a(0)
        return (
            jacobi_norm(j, (a, w.beta))
            * jacobi_norm(m // 2 - j, (w.gamma, w.theta))
            * beta_mass(a, w.beta)
            / beta_mass(a0, w.beta)
        )


# ---------------------------------------------------------------- families


_CATALOG = {
    Family.CYLINDER: CylinderProfile,
    Family.CONE: ConeProfile,
    Family.COUPLED_CONE: CoupledConeProfile,
    Family.PARABOLOID: ParaboloidProfile,
    Family.DOUBLE_CONE: DoubleConeProfile,
    Family.CAPPED_QUADRATIC: CappedProfile,
    Family.CAPPED_ELLIPSOID: CappedProfile,
}

_GENERIC = {
    Family.CYLINDER: CylinderGegenbauerProfile,
    Family.DOUBLE_CONE: DoubleConeTriangleProfile,
}


def catalog_profile(dom: DomainSpec, w: WeightSpec) -> ProfileBasis:
    cls = MappedProfile if dom.family.mapped else _CATALOG[dom.family]
    return cls(dom, w)


def generic_profile(dom: DomainSpec, w: WeightSpec) -> ProfileBasis:
    """Profile basis built by the generic route (one-variable products or the
    triangle lift) where it differs from the catalog closed form."""
    cls = _GENERIC.get(dom.family)
    if cls is None:
        return catalog_profile(dom, w)
    return cls(dom, w)


class FamilyBasis:
    """Orthogonal basis of a family: indices, wrapped elements and norms."""

    def __init__(self, dom: DomainSpec, w: WeightSpec, profile: ProfileBasis | None = None):
        self.profile = profile or catalog_profile(dom, w)
        self.dom = self.profile.dom
        self.w = self.profile.w
        self._element = lru_cache(maxsize=4096)(self._build)

    def supports_parity(self, parity: str) -> bool:
        if parity == "odd":
            return self.dom.family.t_symmetric and not self.dom.family.even_only
        if parity == "any":
            return not self.dom.family.even_only
        return self.dom.family.t_symmetric

    def indices(self, n: int, parity: str = "any") -> list[BasisIndex]:
        if not self.supports_parity(parity):
            raise CapabilityError(f"{self.dom.family.value} has no {parity} basis of explicit form")
        return enumerate_indices(n, self.dom, parity)

    def _build(self, idx: BasisIndex) -> EvalFn:
        return wrap_basis(self.profile, idx)

    def element(self, idx: BasisIndex) -> EvalFn:
        return self._element(idx)

    def norm(self, idx: BasisIndex) -> float:
        return self.profile.norm(idx.k, idx.j, idx.m)

    def elements(self, nmax: int, parity: str = "any", nmin: int = 0) -> list[EvalFn]:
        return [self.element(i) for n in range(nmin, nmax + 1) for i in self.indices(n, parity)]


def family_basis(dom: DomainSpec, w: WeightSpec) -> FamilyBasis:
    return FamilyBasis(dom, w)


def _element(family: Family, idx: BasisIndex, w: WeightSpec, d: int, fa=1.0, fb=0.0) -> EvalFn:
    return FamilyBasis(DomainSpec(family, d, fa, fb), w).element(idx)


def cylinder_basis(idx: BasisIndex, w: WeightSpec, d: int = 2) -> EvalFn:
    return _element(Family.CYLINDER, idx, w, d)


def cone_basis(idx: BasisIndex, w: WeightSpec, d: int = 2) -> EvalFn:
    return _element(Family.CONE, idx, w, d)


def coupled_cone_basis(idx: BasisIndex, w: WeightSpec, d: int = 2) -> EvalFn:
    return _element(Family.COUPLED_CONE, idx, w, d)


def paraboloid_basis(idx: BasisIndex, w: WeightSpec, d: int = 2) -> tuple[EvalFn, float]:
    f = _element(Family.PARABOLOID, idx, w, d)
    return f, f.norm


def capped_cylinder_basis(kind: str, idx: BasisIndex, w: WeightSpec, fa: float, fb: float, d: int = 2) -> EvalFn:
    fam = {"quadratic": Family.CAPPED_QUADRATIC, "ellipsoid": Family.CAPPED_ELLIPSOID}.get(kind)
    if fam is None:
        raise ParameterDomainError(f"capped cylinder kind must be quadratic or ellipsoid, got {kind!r}")
    if (idx.n - idx.k) % 2:
        raise CapabilityError("capped cylinders have an explicit even basis only")
    return _element(fam, idx, w, d, fa, fb)


def double_cone_basis(idx: BasisIndex, w: WeightSpec, d: int = 2) -> tuple[EvalFn, float]:
    f = _element(Family.DOUBLE_CONE, idx, w, d)
    return f, f.norm


def mapped_even_basis(family, idx: BasisIndex, w: WeightSpec, fa: float, fb: float, d: int = 2) -> tuple[EvalFn, float]:
    fam = Family(family)
    if not fam.mapped:
        raise ParameterDomainError(f"{fam.value} is not a mapped family")
    if (idx.n - idx.k) % 2:
        raise CapabilityError(f"{fam.value} has an explicit even basis only")
    f = _element(fam, idx, w, d, fa, fb)
    return f, f.norm
