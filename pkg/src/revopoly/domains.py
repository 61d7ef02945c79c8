"""Domain families of revolution, their parameters and weight exponents."""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np

from .errors import DomainError, ParameterDomainError

SLACK = 1e-12


class Family(str, enum.Enum):
    CYLINDER = "cylinder"
    CONE = "cone"
    COUPLED_CONE = "coupledcone"
    PARABOLOID = "paraboloid"
    DOUBLE_CONE = "doublecone"
    DOUBLE_CONIC = "doubleconic"
    HYPERBOLOID = "hyperboloid"
    DOUBLE_HYPERBOLIC = "doublehyperbolic"
    ELLIPSOID_LENS = "ellipsoidlens"
    CAPPED_QUADRATIC = "cappedquadratic"
    CAPPED_ELLIPSOID = "cappedellipsoid"

    @property
    def t_symmetric(self) -> bool:
        return self not in (Family.CONE, Family.PARABOLOID)

    @property
    def mapped(self) -> bool:
        return self in MAPPED

    @property
    def even_only(self) -> bool:
        return self in MAPPED or self in (Family.CAPPED_QUADRATIC, Family.CAPPED_ELLIPSOID)


MAPPED = (Family.DOUBLE_CONIC, Family.HYPERBOLOID, Family.DOUBLE_HYPERBOLIC, Family.ELLIPSOID_LENS)


@dataclass(frozen=True)
class DomainSpec:
    """A family tag plus the dimension d of x and the shape parameters fa, fb."""

    family: Family
    d: int = 2
    fa: float = 1.0
    fb: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.d < 2 or int(self.d) != self.d:
            raise ParameterDomainError(f"d must be an integer >= 2, got {self.d}")
        fam, a, b = self.family, self.fa, self.fb
        if fam is Family.DOUBLE_CONIC and not a > 0:
            raise ParameterDomainError("double conic domain needs fa > 0")
        if fam is Family.HYPERBOLOID and not (a == 1 and 0 < b < 1):
            raise ParameterDomainError("hyperboloid needs fa = 1 and 0 < fb < 1")
        if fam is Family.DOUBLE_HYPERBOLIC and not 0 < b < a:
            raise ParameterDomainError("double hyperbolic domain needs 0 < fb < fa")
        if fam is Family.ELLIPSOID_LENS and not 0 <= b < a:
            raise ParameterDomainError("ellipsoid lens needs 0 <= fb < fa")
        if fam is Family.CAPPED_QUADRATIC and not (0 <= b < a and b + 1 - a >= 0):
            raise ParameterDomainError("quadratic caps need 0 <= fb < fa <= 1 + fb")
        if fam is Family.CAPPED_ELLIPSOID and not 0 < b < a:
            raise ParameterDomainError("ellipsoid caps need 0 < fb < fa")

    def z2(self, r2, t2):
        """Squared double-cone coordinate for mapped families."""
        a, b = self.fa, self.fb
        fam = self.family
        if fam is Family.DOUBLE_CONIC:
            return r2 + (t2 - r2) / a
        if fam is Family.HYPERBOLOID:
            return (t2 - b) / (1 - b)
        if fam is Family.DOUBLE_HYPERBOLIC:
            return (t2 - b - (1 - a) * r2) / (a - b)
        if fam is Family.ELLIPSOID_LENS:
            return (t2 - b + a * r2) / (a - b)
        return t2

    def t2_from_z2(self, r2, z2):
        """Inverse of :meth:`z2`."""
        a, b = self.fa, self.fb
        fam = self.family
        if fam is Family.DOUBLE_CONIC:
            return a * z2 + (1 - a) * r2
        if fam is Family.HYPERBOLOID:
            return b + (1 - b) * z2
        if fam is Family.DOUBLE_HYPERBOLIC:
            return (a - b) * z2 + b + (1 - a) * r2
        if fam is Family.ELLIPSOID_LENS:
            return (a - b) * z2 + b - a * r2
        return z2

    def contains(self, x, t, slack: float = SLACK) -> np.ndarray:
        """Membership predicate with ``slack`` on every defining inequality."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        r2 = np.einsum("ij,ij->i", x, x)
        r = np.sqrt(r2)
        t2 = t * t
        a, b, e = self.fa, self.fb, slack
        fam = self.family
        if fam is Family.CYLINDER:
            return (r <= 1 + e) & (np.abs(t) <= 1 + e)
        if fam is Family.CONE:
            return (r <= t + e) & (t <= 1 + e)
        if fam is Family.COUPLED_CONE:
            return r + np.abs(t) <= 1 + e
        if fam is Family.PARABOLOID:
            return (r2 <= t + e) & (t <= 1 + e)
        if fam is Family.DOUBLE_CONE:
            return (r <= np.abs(t) + e) & (np.abs(t) <= 1 + e)
        if fam is Family.CAPPED_QUADRATIC:
            return (r2 <= 1 + e) & (b + (1 - a) * r2 <= t2 + e) & (t2 <= a + (1 - a) * r2 + e)
        if fam is Family.CAPPED_ELLIPSOID:
            return (r2 <= 1 + e) & (b * (1 - r2) <= t2 + e) & (t2 <= a - b * r2 + e)
        z2 = self.z2(r2, t2)
        return (r2 <= z2 + e) & (z2 <= 1 + e)

    def interior(self, x, t, margin: float = 0.0) -> np.ndarray:
        """True where every axis step of length ``margin`` stays in the domain."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        ok = self.contains(x, t, 0.0)
        if margin > 0:
            for i in range(self.d + 1):
                for sgn in (-margin, margin):
                    if i < self.d:
                        xs = x.copy()
                        xs[:, i] += sgn
                        ok &= self.contains(xs, t, 0.0)
                    else:
                        ok &= self.contains(x, t + sgn, 0.0)
        return ok

    def sample(self, rng: np.random.Generator, n: int, margin: float = 0.0, tmin: float = 0.0):
        """``n`` points drawn uniformly from the interior by rejection.

        ``tmin`` excludes the slab ``|t| < tmin``.
        """
        top = float(np.sqrt(max(1.0, self.fa)))
        lo = 0.0 if self.family in (Family.CONE, Family.PARABOLOID) else -top
        xs, ts, count = [], [], 0
        for _ in range(500):
            if count >= n:
                break
            x = rng.uniform(-1, 1, (4 * n + 16, self.d))
            t = rng.uniform(lo, top, 4 * n + 16)
            keep = self.interior(x, t, margin) & (np.abs(t) >= tmin)
            xs.append(x[keep])
            ts.append(t[keep])
            count += int(keep.sum())
        else:
            raise DomainError(f"could not sample {n} points with margin {margin} from {self.family.value}")
        return np.concatenate(xs)[:n], np.concatenate(ts)[:n]


_USED = {
    Family.CYLINDER: ("alpha", "mu", "lam"),
    Family.CONE: ("alpha", "beta", "gamma", "mu"),
    Family.COUPLED_CONE: ("alpha", "beta"),
    Family.PARABOLOID: ("alpha", "beta", "gamma"),
    Family.CAPPED_QUADRATIC: ("alpha", "beta", "gamma", "theta"),
    Family.CAPPED_ELLIPSOID: ("alpha", "beta", "gamma", "theta"),
}
_DOUBLE = ("alpha", "beta", "gamma", "theta")


@dataclass(frozen=True)
class WeightSpec:
    """Weight exponents; each family reads only the ones it uses."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    theta: float = 0.0
    mu: float = 0.5
    lam: float = 0.5

    def used(self, family: Family) -> dict[str, float]:
        names = _USED.get(Family(family), _DOUBLE)
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name in names}

    def validate(self, dom: DomainSpec) -> None:
        """Raise :class:`ParameterDomainError` when the weight is not integrable."""
        al, be, ga, th, mu, lam = self.alpha, self.beta, self.gamma, self.theta, self.mu, self.lam
        d = dom.d
        fam = dom.family
        bad = None
        if fam is Family.CYLINDER:
            if not (al > -1 and mu > -0.5 and lam > -0.5):
                bad = "cylinder needs alpha > -1 and mu, lambda > -1/2"
        elif fam is Family.CONE:
            if not (al > -d / 2 and mu > -0.5 and ga > -1 and 2 * al + 2 * mu + be + d > 0):
                bad = "cone needs alpha > -d/2, mu > -1/2, gamma > -1, 2alpha+2mu+beta+d > 0"
        elif fam is Family.COUPLED_CONE:
            if not (al > -1 and be > -1):
                bad = "coupled cone needs alpha, beta > -1"
        elif fam is Family.PARABOLOID:
            if not (al > -d / 2 and be > -1 and ga > -1):
                bad = "paraboloid needs alpha > -d/2 and beta, gamma > -1"
        elif fam in (Family.CAPPED_QUADRATIC, Family.CAPPED_ELLIPSOID):
            if not (al > -d / 2 and min(be, ga, th) > -1):
                bad = "capped cylinder needs alpha > -d/2 and beta, gamma, theta > -1"
        elif not (be > -1 and ga > -1 and al > -d / 2 and al + ga + th >= -d / 2):
            bad = "double cone needs beta, gamma > -1, alpha > -d/2, alpha+gamma+theta >= -d/2"
        if bad:
            raise ParameterDomainError(f"{bad}; got {self.used(fam)}")
