"""Generic constructions on domains of revolution.

A planar profile basis, orthogonal on the half domain and even in ``s``, is
wrapped with solid spherical harmonics; fully symmetric domains obtain their
profile basis by lifting a basis on the squared domain.  Index enumeration,
kernel sums and orthogonal projections are built on top.
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, IndexRangeError, ParameterDomainError
from .quad import QuadratureRule, domain_rule, evaluate, profile_rule
from .sphere import HarmonicIndex, dim_harmonic, harmonic_labels, solid_sph_eval

PARITIES = ("any", "even", "odd")


@dataclass(frozen=True)
class EvalFn:
    """Vectorized scalar function of points ``(x, t)`` with ``x`` of shape (N, d)."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    degree: int | None = None
    label: str = ""
    norm: float | None = None

    def __call__(self, x, t) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        t = np.broadcast_to(np.asarray(t, dtype=float), (x.shape[0],))
        return np.asarray(self.fn(x, t), dtype=float)


@dataclass(frozen=True, order=True)
class BasisIndex:
    """``n`` total degree, ``k`` harmonic degree, ``j`` radial index, ``ell``
    harmonic label; ``parity`` is the parity in t or ``any``."""

    n: int
    k: int
    j: int
    ell: int
    parity: str = "any"

    def __post_init__(self) -> None:
        if self.parity not in PARITIES:
            raise ParameterDomainError(f"unknown parity {self.parity!r}")
        if not 0 <= self.k <= self.n:
            raise IndexRangeError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        if not 0 <= self.j <= (self.n - self.k) // 2:
            raise IndexRangeError(f"need 0 <= j <= (n-k)/2, got j={self.j}")
        if self.ell < 1:
            raise IndexRangeError(f"harmonic label must be >= 1, got {self.ell}")

    @property
    def m(self) -> int:
        """Degree of the profile polynomial."""
        return self.n - self.k

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "j": self.j, "ell": self.ell, "parity": self.parity}


def t_parity(n: int, k: int) -> str:
    return "even" if (n - k) % 2 == 0 else "odd"


class ProfileBasis(ABC):
    """Orthogonal basis of planar profile polynomials for the weight
    ``s^{2k+d-1} W(s, t)``, indexed by ``(k, j, m)`` with ``0 <= j <= m/2``."""

    closed_norm: bool = True

    def __init__(self, dom: DomainSpec, w: WeightSpec):
        w.validate(dom)
        self.dom = dom
        self.w = w

    @abstractmethod
    def evaluate(self, k: int, j: int, m: int, s2, t) -> np.ndarray:
        """Profile value from ``s^2`` and ``t``; evenness in s is structural."""

    def norm(self, k: int, j: int, m: int) -> float:
        """Normalized squared norm including the factor ``s^{2k}``."""
        return _quadrature_profile_norm(self, k, j, m)

    def supports(self, k: int, j: int, m: int) -> bool:
        return 0 <= j <= m // 2


def _quadrature_profile_norm(profile: ProfileBasis, k: int, j: int, m: int) -> float:
    return _cached_norm(profile, k, j, m)


@lru_cache(maxsize=8192)
def _cached_norm(profile: ProfileBasis, k: int, j: int, m: int) -> float:
    s, t, wt = profile_rule(profile.dom, profile.w, 2 * (m + k) + 4)
    s2 = s * s
    vals = profile.evaluate(k, j, m, s2, t)
    return float(wt @ (vals * vals * s2**k) / wt.sum())


def wrap_basis(profile: ProfileBasis, idx: BasisIndex) -> EvalFn:
    """``P_j^{n-k}(||x||, t) Y_ell^k(x)`` with the solid harmonic factor."""
    d = profile.dom.d
    if not profile.supports(idx.k, idx.j, idx.m):
        raise CapabilityError(f"{profile.dom.family.value} basis has no element {idx}")
    h = HarmonicIndex(d, idx.k, idx.ell)

    def fn(x, t):
        s2 = np.einsum("ij,ij->i", x, x)
        return profile.evaluate(idx.k, idx.j, idx.m, s2, t) * solid_sph_eval(h, x)

    norm = profile.norm(idx.k, idx.j, idx.m)
    return EvalFn(fn, idx.n, f"Q[{idx.n},{idx.k},{idx.j},{idx.ell}]", norm)


def fullsym_lift(basis2d: Callable, parity: str, j: int, m: int, dom: DomainSpec | None = None) -> EvalFn:
    """Lift ``basis2d(j, m, u, v)`` on the squared domain to a planar polynomial
    ``(s, t) -> P(s^2, t^2)`` (even) or ``t P(s^2, t^2)`` (odd).

    The returned function takes a single planar point array ``x`` of shape
    (N, 1) holding s, matching the ``EvalFn`` calling convention with d = 1.
    """
    if dom is not None and not dom.family.t_symmetric:
        raise CapabilityError(f"{dom.family.value} is not fully symmetric")
    if parity == "even":

        def fn(x, t):
            return basis2d(j, m, x[:, 0] ** 2, t * t)

        return EvalFn(fn, 2 * m, f"E[{j},{m}]")
    if parity == "odd":

        def fn(x, t):
            return t * basis2d(j, m, x[:, 0] ** 2, t * t)

        return EvalFn(fn, 2 * m + 1, f"O[{j},{m}]")
    raise ParameterDomainError(f"lift parity must be even or odd, got {parity!r}")


def dim_even(n: int, d: int) -> int:
    return sum(math.comb(n - 2 * m + d - 1, d - 1) for m in range(n // 2 + 1))


def dim_odd(n: int, d: int) -> int:
    return sum(math.comb(n - 2 * m + d - 2, d - 1) for m in range((n - 1) // 2 + 1)) if n else 0


def enumerate_indices(n: int, dom: DomainSpec, parity: str = "any") -> list[BasisIndex]:
    """Complete sorted index list of degree-n basis elements of the given parity."""
    if parity not in PARITIES:
        raise ParameterDomainError(f"unknown parity {parity!r}")
    if parity != "any" and not dom.family.t_symmetric:
        raise CapabilityError(f"{dom.family.value} has no parity split in t")
    out = []
    for k in range(n + 1):
        par = t_parity(n, k) if dom.family.t_symmetric else "any"
        if parity != "any" and par != parity:
            continue
        for j in range((n - k) // 2 + 1):
            for ell in harmonic_labels(k, dom.d):
                out.append(BasisIndex(n, k, j, ell, par))
    return out


def dim_space(n: int, d: int) -> int:
    """Dimension of orthogonal polynomials of degree n in d+1 variables."""
    return math.comb(n + d, n)


def kernel_sum(n: int, basis, p, q, parity: str = "any") -> np.ndarray:
    """Reproducing kernel ``sum Q(p) Q(q) / H`` over a family basis.

    ``p`` and ``q`` are ``(x, t)`` pairs of equal length.
    """
    (x, t), (y, s) = p, q
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    total = np.zeros(x.shape[0])
    for idx in basis.indices(n, parity):
        f = basis.element(idx)
        total += f(x, t) * f(y, s) / f.norm
    return total


@dataclass
class Projection:
    """Fourier coefficients up to degree N and the evaluable partial sum."""

    basis: object
    entries: list[tuple[BasisIndex, float]] = field(default_factory=list)

    def __call__(self, x, t, degree: int | None = None) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape[0])
        for idx, c in self.entries:
            if degree is None or idx.n == degree:
                out += c * self.basis.element(idx)(x, t)
        return out

    def coefficient(self, idx: BasisIndex) -> float:
        for i, c in self.entries:
            if i == idx:
                return c
        raise KeyError(idx)

    def to_json(self) -> str:
        b = self.basis
        doc = {
            "family": b.dom.family.value,
            "params": {"d": b.dom.d, "fa": b.dom.fa, "fb": b.dom.fb, **b.w.used(b.dom.family)},
            "n": max((i.n for i, _ in self.entries), default=0),
            "entries": [{**i.as_dict(), "coef": c} for i, c in self.entries],
        }
        return json.dumps(doc, sort_keys=True)


def project(f, N: int, basis, rule: QuadratureRule | None = None, parity: str = "any") -> Projection:
    """Coefficients ``<f, Q> / H`` for every basis element of degree at most N."""
    rule = rule or domain_rule(basis.dom, basis.w, 2 * N + 4)
    fv = evaluate([f], rule)[:, 0]
    entries = []
    for n in range(N + 1):
        for idx in basis.indices(n, parity):
            q = basis.element(idx)
            c = float(rule.weights @ (fv * q(rule.x, rule.t))) / q.norm
            entries.append((idx, c))
    return Projection(basis, entries)


def parity_parts(f) -> tuple[EvalFn, EvalFn]:
    """Even and odd parts of f in t, by two-point evaluation."""

    def even(x, t):
        return 0.5 * (f(x, t) + f(x, -t))

    def odd(x, t):
        return 0.5 * (f(x, t) - f(x, -t))

    return EvalFn(even, label="even part"), EvalFn(odd, label="odd part")


def split_projection(f, N: int, basis, rule: QuadratureRule | None = None) -> Projection:
    """Projection assembled as even coefficients of the even part plus odd
    coefficients of the odd part."""
    if not basis.dom.family.t_symmetric:
        raise CapabilityError(f"{basis.dom.family.value} has no parity split in t")
    fe, fo = parity_parts(f)
    pe = project(fe, N, basis, rule, "even")
    po = project(fo, N, basis, rule, "odd") if basis.supports_parity("odd") else Projection(basis)
    entries = sorted(pe.entries + po.entries, key=lambda e: e[0])
    return Projection(basis, entries)


__all__ = [
    "BasisIndex",
    "EvalFn",
    "Family",
    "ProfileBasis",
    "Projection",
    "dim_even",
    "dim_harmonic",
    "dim_odd",
    "dim_space",
    "enumerate_indices",
    "fullsym_lift",
    "kernel_sum",
    "parity_parts",
    "project",
    "split_projection",
    "wrap_basis",
]
