from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revopoly import DomainSpec, Family
from revopoly.errors import CapabilityError, DomainError, ParameterDomainError
from revopoly.spectral import (
    OperatorSpec,
    apply_operator,
    eigen_weight,
    eigenbasis,
    residual_report,
    spectral_residual,
)


def _points(spec, rng, k=12):
    if spec.op == "ball":
        x = rng.uniform(-0.6, 0.6, (k, spec.d))
        return x, None
    if spec.op == "sphere":
        x = rng.normal(size=(k, spec.d))
        return x / np.linalg.norm(x, axis=1, keepdims=True), None
    tmin = 0.0 if spec.op == "cone" else spec.tmin
    return spec.domain().sample(rng, k, spec.margin, tmin)


def _max_residual(spec, n, rng):
    x, t = _points(spec, rng)
    lam = spec.eigenvalue(n)
    return max(spectral_residual(spec, u, lam, x, t) for u in eigenbasis(spec, n))


def test_constant_has_zero_residual(rng):
    spec = OperatorSpec("cone", dict(gamma=0, mu=0.5))
    x, t = _points(spec, rng)
    assert spectral_residual(spec, lambda x, t: np.ones(len(t)), 0.0, x, t) == 0.0


def test_cone_example(rng):
    assert _max_residual(OperatorSpec("cone", dict(gamma=0, mu=0.5)), 3, rng) <= 1e-5


def test_doublecone_even_example(rng):
    spec = OperatorSpec("doublecone-even", dict(beta=1, gamma=1))
    assert spec.eigenvalue(4) == -4 * (4 + 2 + 2 + 2 + 1)
    assert _max_residual(spec, 4, rng) <= 1e-5


@pytest.mark.parametrize(
    "op,params,d",
    [
        ("cone", dict(gamma=1, mu=1), 3),
        ("doublecone-odd", dict(beta=1, gamma=0.5), 2),
        ("doublecone-even", dict(beta=0.5, gamma=0), 3),
        ("ball", dict(mu=0.5), 2),
        ("ball", dict(mu=1.5), 3),
        ("sphere", {}, 3),
    ],
)
def test_operators(op, params, d, rng):
    spec = OperatorSpec(op, params, d)
    for n in range(1, 4):
        assert _max_residual(spec, n, rng) <= 1e-5


@pytest.mark.parametrize(
    "family,fa,fb",
    [("doubleconic", 0.5, 0.0), ("hyperboloid", 1.0, 0.1), ("doublehyperbolic", 5 / 8, 1 / 8), ("ellipsoidlens", 1.0, 0.5)],
)
def test_mapped_operators(family, fa, fb, rng):
    spec = OperatorSpec("mapped-even", dict(beta=1, gamma=1), 2, DomainSpec(Family(family), 2, fa, fb))
    for n in (2, 4):
        assert _max_residual(spec, n, rng) <= 1e-5


def test_hyperboloid_eigenvalue_is_the_double_cone_one(rng):
    dom = DomainSpec(Family.HYPERBOLOID, 2, 1.0, 0.1)
    beta, gamma = 1.0, 1.0
    for op in ("mapped-even", "mapped-odd"):
        spec = OperatorSpec(op, dict(beta=beta, gamma=gamma), 2, dom)
        n = 2 if op == "mapped-even" else 3
        x, t = _points(spec, rng)
        u = eigenbasis(spec, n)[0]
        assert spectral_residual(spec, u, spec.eigenvalue(n), x, t) <= 1e-5
        # the alternative value -n(n + 2 beta + gamma + 1) leaves a visible residual
        assert spectral_residual(spec, u, -n * (n + 2 * beta + gamma + 1), x, t) > 1e-2


def test_point_rejection(rng):
    spec = OperatorSpec("doublecone-even", dict(beta=1, gamma=1))
    x = np.array([[0.0, 0.0]])
    with pytest.raises(DomainError, match="index 0"):
        spectral_residual(spec, lambda x, t: t * t, 0.0, x, np.array([0.05]))
    with pytest.raises(DomainError):
        apply_operator(OperatorSpec("sphere", {}, 2), lambda P: P[:, 0], np.array([[0.5, 0.5]]))


def test_spec_validation():
    with pytest.raises(ParameterDomainError):
        OperatorSpec("laplace")
    with pytest.raises(ParameterDomainError):
        OperatorSpec("cone", h=0.5)
    with pytest.raises(ParameterDomainError):
        OperatorSpec("mapped-even", dict(beta=1, gamma=1))
    with pytest.raises(CapabilityError):
        OperatorSpec("mapped-odd", dict(beta=1, gamma=1), 2, DomainSpec(Family.DOUBLE_CONIC, 2, 0.5))
    with pytest.raises(ParameterDomainError):
        OperatorSpec("cone", dict(mu=1)).eigenvalue(2)
    with pytest.raises(CapabilityError):
        eigen_weight(OperatorSpec("ball", dict(mu=1)))


def test_eigen_weight_maps_beta():
    w = eigen_weight(OperatorSpec("doublecone-even", dict(beta=1.5, gamma=0.5)))
    assert (w.beta, w.gamma, w.theta) == (1.0, 0.5, 0.5)
    assert eigen_weight(OperatorSpec("doublecone-odd", dict(beta=1, gamma=0))).theta == -0.5


def test_report_shape():
    spec = OperatorSpec("mapped-even", dict(beta=1, gamma=1), 2, DomainSpec(Family.DOUBLE_CONIC, 2, 0.5))
    text = residual_report(spec, 3, 20, 1e-9)
    assert text.startswith('{"max_residual": 1e-09, "n": 3, "operator": "mapped-even"')
    assert '"family": "doubleconic"' in text


@settings(max_examples=10)
@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0), st.integers(0, 3))
def test_cone_eigenspaces(gamma, mu, n):
    spec = OperatorSpec("cone", dict(gamma=gamma, mu=mu))
    assert _max_residual(spec, n, np.random.default_rng(n)) <= 1e-5
