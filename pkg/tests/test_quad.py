from __future__ import annotations

import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import betaln

import oracles
from revopoly import DomainSpec, Family, WeightSpec
from revopoly.errors import CapabilityError, ParameterDomainError
from revopoly.quad import domain_rule, gauss_jacobi_rule, gram, simplex_rule, sphere_rule
from revopoly.revolve import EvalFn
from revopoly.triangle import TriangleParams

# (family, weight parameters with polynomial-type exponents, fa, fb)
LITERAL_CASES = [
    ("cylinder", dict(alpha=1, mu=1.5, lam=1.5), 1, 0),
    ("cone", dict(alpha=0, beta=1, gamma=1, mu=1.5), 1, 0),
    ("coupledcone", dict(alpha=0.5, beta=0.5), 1, 0),
    ("coupledcone", dict(alpha=0, beta=-0.5), 1, 0),
    ("paraboloid", dict(alpha=1, beta=1, gamma=2), 1, 0),
    ("doublecone", dict(alpha=0, beta=1, gamma=1, theta=0.5), 1, 0),
    ("doublecone", dict(alpha=1, beta=0, gamma=1, theta=1), 1, 0),
    ("cappedquadratic", dict(alpha=0, beta=1, gamma=1, theta=0), 5 / 8, 1 / 16),
    ("cappedellipsoid", dict(alpha=1, beta=0, gamma=1, theta=1), 1, 1 / 2),
    ("doubleconic", dict(alpha=0, beta=1, gamma=1, theta=0.5), 0.5, 0),
    ("doubleconic", dict(alpha=0, beta=1, gamma=0, theta=0.5), 2, 0),
    ("hyperboloid", dict(alpha=0, beta=1, gamma=1, theta=0.5), 1, 0.1),
    ("doublehyperbolic", dict(alpha=0, beta=1, gamma=1, theta=0.5), 5 / 8, 1 / 8),
    ("ellipsoidlens", dict(alpha=0, beta=1, gamma=1, theta=0.5), 1, 1 / 2),
]


def _beta(a, b):
    return math.exp(betaln(a + 1, b + 1))


def test_gauss_jacobi_examples():
    r = gauss_jacobi_rule(1, 0, 0)
    assert r.nodes[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert r.weights[0] == pytest.approx(2.0)
    r = gauss_jacobi_rule(12, 1.5, 0.25)
    assert r.weights.sum() == pytest.approx(2 ** (1.5 + 0.25 + 1) * _beta(1.5, 0.25), rel=1e-13)
    r = gauss_jacobi_rule(20, 0.5, -0.5, (0.0, 1.0))
    for k in range(40):
        # int_0^1 t^k (1-t)^{1/2} t^{-1/2} dt
        assert r.integrate(r.nodes[:, 0] ** k) == pytest.approx(_beta(0.5, k - 0.5), rel=1e-13)
    with pytest.raises(ParameterDomainError):
        gauss_jacobi_rule(3, -1.0, 0)
    with pytest.raises(ParameterDomainError):
        gauss_jacobi_rule(0, 0, 0)


@pytest.mark.parametrize("d", [2, 3])
def test_sphere_rule_exact(d):
    pts, w = sphere_rule(d, 8)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    ref_pts, ref_w = oracles.sphere(d, 10)
    for e in [(2, 0), (4, 2), (0, 6), (3, 3)]:
        f = lambda p: p[:, 0] ** e[0] * p[:, 1] ** e[1] * (p[:, -1] ** 2 if d == 3 else 1)
        assert w @ f(pts) == pytest.approx(ref_w @ f(ref_pts), abs=1e-14)
    with pytest.raises(CapabilityError):
        sphere_rule(4, 3)


def test_simplex_rule_moments():
    p = TriangleParams(0.5, -0.3, 1.2)
    r = simplex_rule(p, 10)
    u, v, w = oracles.triangle_rule(0.5, -0.3, 1.2, n=12)
    for i in range(5):
        for j in range(5 - i):
            f = r.nodes[:, 0] ** i * r.nodes[:, 1] ** j
            assert r.integrate(f) == pytest.approx(w @ (u**i * v**j), rel=1e-12)


@pytest.mark.parametrize("family,params,fa,fb", LITERAL_CASES)
@pytest.mark.parametrize("d", [2, 3])
def test_moments_against_literal_weight(family, params, fa, fb, d):
    dom = DomainSpec(Family(family), d, fa, fb)
    r = domain_rule(dom, WeightSpec(**params), 12)
    assert r.weights.sum() == pytest.approx(1.0, abs=1e-13)
    assert np.all(r.weights > 0)
    x, t, w = oracles.revolution_rule(family, params, d, fa, fb, n=40, nsph=8)
    for e1, e2, e3 in [(0, 0, 2), (2, 2, 1), (4, 0, 2), (1, 3, 3), (0, 2, 4), (6, 0, 6)]:
        f = lambda X, T: X[:, 0] ** e1 * X[:, 1] ** e2 * T**e3
        assert abs(r.integrate(f(r.x, r.t)) - w @ f(x, t)) <= 1e-12


def _radial(r, p, q):
    return r.integrate(np.einsum("ij,ij->i", r.x, r.x) ** p * r.t**q)


@given(
    p=st.integers(0, 3),
    q=st.integers(0, 4),
    al=st.floats(-0.4, 2),
    be=st.floats(0, 2),
    ga=st.floats(-0.6, 2),
    mu=st.floats(-0.4, 2),
)
def test_cone_beta_moments(p, q, al, be, ga, mu):
    d = 2
    r = domain_rule(DomainSpec(Family.CONE, d), WeightSpec(alpha=al, beta=be, gamma=ga, mu=mu), 2 * p + q)
    # s = t sqrt(rho): t-part and rho-part separate
    tp = lambda k: _beta(k + 2 * al + 2 * mu + be + d - 1, ga)
    rp = lambda k: _beta(k + al + (d - 2) / 2, mu - 0.5)
    ref = tp(2 * p + q) * rp(p) / (tp(0) * rp(0))
    assert _radial(r, p, q) == pytest.approx(ref, rel=1e-11)


@given(
    p=st.integers(0, 3),
    q=st.integers(0, 3),
    al=st.floats(-0.4, 2),
    be=st.floats(-0.6, 2),
    ga=st.floats(-0.6, 2),
    th=st.floats(-0.4, 2),
)
def test_double_cone_beta_moments(p, q, al, be, ga, th):
    d = 3
    r = domain_rule(DomainSpec(Family.DOUBLE_CONE, d), WeightSpec(alpha=al, beta=be, gamma=ga, theta=th), 2 * p + 2 * q)
    tp = lambda k: _beta(k + al + ga + th + (d - 1) / 2, be)
    rp = lambda k: _beta(k + al + (d - 2) / 2, ga)
    ref = tp(p + q) * rp(p) / (tp(0) * rp(0))
    assert _radial(r, p, 2 * q) == pytest.approx(ref, rel=1e-11)
    assert abs(_radial(r, p, 2 * q + 1)) <= 1e-13


@given(p=st.integers(0, 3), q=st.integers(0, 4), al=st.floats(-0.4, 2), mu=st.floats(-0.4, 2), lam=st.floats(-0.4, 2))
def test_cylinder_beta_moments(p, q, al, mu, lam):
    d = 2
    r = domain_rule(DomainSpec(Family.CYLINDER, d), WeightSpec(alpha=al, mu=mu, lam=lam), 2 * p + q)
    rp = lambda k: _beta(k + al + (d - 2) / 2, mu - 0.5)
    tp = 0.0 if q % 2 else _beta((q - 1) / 2, lam - 0.5) / _beta(-0.5, lam - 0.5)
    assert _radial(r, p, q) == pytest.approx(rp(p) / rp(0) * tp, rel=1e-11, abs=1e-14)


@given(p=st.integers(0, 3), q=st.integers(0, 3), al=st.floats(-0.4, 2), be=st.floats(-0.6, 2), ga=st.floats(-0.6, 2))
def test_paraboloid_beta_moments(p, q, al, be, ga):
    d = 2
    r = domain_rule(DomainSpec(Family.PARABOLOID, d), WeightSpec(alpha=al, beta=be, gamma=ga), 2 * p + q)
    # s^2 = t y
    a = al + (d - 2) / 2
    tp = lambda k: _beta(k + a + ga + 1, be)
    yp = lambda k: _beta(k + a, ga)
    ref = tp(p + q) * yp(p) / (tp(0) * yp(0))
    assert _radial(r, p, q) == pytest.approx(ref, rel=1e-11)


def test_cone_moment_example():
    r = domain_rule(DomainSpec(Family.CONE, 2), WeightSpec(alpha=0, beta=0, gamma=1, mu=1), 4)
    d, mu, ga = 2, 1, 1
    assert r.integrate(r.t) == pytest.approx(_beta(2 * mu + d, ga) / _beta(2 * mu + d - 1, ga), rel=1e-13)


def test_gram_examples():
    dom = DomainSpec(Family.DOUBLE_CONE, 2)
    r = domain_rule(dom, WeightSpec(gamma=1, theta=0.5), 6)
    one = EvalFn(lambda x, t: np.ones_like(t), 0)
    assert gram([one], r).matrix == pytest.approx(np.ones((1, 1)))
    fs = [one, EvalFn(lambda x, t: t, 1), EvalFn(lambda x, t: x[:, 0] * t, 2)]
    G = gram(fs, r).matrix
    P = gram(fs[::-1], r).matrix
    np.testing.assert_allclose(P, G[::-1, ::-1], atol=1e-15)
    assert np.all(np.linalg.eigvalsh(G) > -1e-14)


def test_gram_flags_underintegration():
    r = domain_rule(DomainSpec(Family.CONE, 2), WeightSpec(), 4)
    f = EvalFn(lambda x, t: t**3, 3)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = gram([f, f], r)
    assert res.underintegrated
    assert caught


def test_rule_csv_roundtrip():
    r = domain_rule(DomainSpec(Family.CONE, 2), WeightSpec(), 2)
    text = r.to_csv()
    rows = text.strip().splitlines()
    assert rows[0] == "x1,x2,t,weight"
    assert len(rows) == len(r.weights) + 1
    buf = io.StringIO()
    r.to_csv(buf)
    assert buf.getvalue() == text


def test_invalid_weight_is_rejected():
    with pytest.raises(ParameterDomainError):
        domain_rule(DomainSpec(Family.CONE, 2), WeightSpec(gamma=-1.5), 4)
