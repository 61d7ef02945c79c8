from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import roots_jacobi

from oracles import sphere
from revopoly.errors import DomainError, IndexRangeError, ParameterDomainError
from revopoly.scalar import jacobi_eval, zonal_eval
from revopoly.sphere import (
    BallIndex,
    HarmonicIndex,
    ball_indices,
    ball_kernel,
    ball_norm,
    ball_op_eval,
    dim_harmonic,
    harmonic_labels,
    solid_sph_eval,
    sph_addition,
    sph_eval,
    surface_area,
)


def _unit(rng, n, d):
    v = rng.normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _ball(rng, n, d, radius=1.0):
    v = _unit(rng, n, d)
    return v * radius * rng.uniform(0, 1, (n, 1)) ** (1 / d)


def test_dimensions():
    assert dim_harmonic(0, 2) == dim_harmonic(0, 3) == 1
    assert all(dim_harmonic(k, 2) == 2 for k in range(1, 10))
    assert all(dim_harmonic(k, 3) == 2 * k + 1 for k in range(10))
    assert surface_area(3) == pytest.approx(4 * np.pi)


def test_low_degree_harmonics():
    th = np.linspace(0, 2 * np.pi, 9)
    xi = np.column_stack([np.cos(th), np.sin(th)])
    assert np.all(sph_eval(HarmonicIndex(2, 0, 1), xi) == 1)
    got = {tuple(np.round(sph_eval(HarmonicIndex(2, 1, l), xi), 12)) for l in (1, 2)}
    ref = {tuple(np.round(np.sqrt(2) * np.cos(th), 12)), tuple(np.round(np.sqrt(2) * np.sin(th), 12))}
    assert got == ref
    p = np.array([[0.6, 0.0, 0.8], [0.0, 1.0, 0.0]])
    vals = np.array([sph_eval(HarmonicIndex(3, 1, l), p) for l in (1, 2, 3)])
    assert sorted(np.round(np.abs(vals[:, 0]), 12)) == sorted(np.round(np.sqrt(3) * np.array([0.6, 0.0, 0.8]), 12))


def test_solid_harmonic():
    x = np.array([[0.3, -0.7]])
    vals = [solid_sph_eval(HarmonicIndex(2, 2, l), x)[0] for l in (1, 2)]
    assert np.sqrt(2) * (0.09 - 0.49) == pytest.approx(vals[0])
    assert solid_sph_eval(HarmonicIndex(3, 2, 3), np.zeros((1, 3)))[0] == 0
    assert solid_sph_eval(HarmonicIndex(3, 0, 1), np.zeros((1, 3)))[0] == 1


@pytest.mark.parametrize("d", [2, 3])
def test_orthonormal(d):
    pts, w = sphere(d, 12)
    idx = [HarmonicIndex(d, k, l) for k in range(9) for l in harmonic_labels(k, d)]
    F = np.column_stack([sph_eval(h, pts) for h in idx])
    G = (F * w[:, None]).T @ F
    np.testing.assert_allclose(G, np.eye(len(idx)), atol=1e-11)


def test_addition_examples(rng):
    xi = _unit(rng, 5, 3)
    for n in range(8):
        np.testing.assert_allclose(sph_addition(3, n, xi, xi), 2 * n + 1, rtol=1e-12)
    phi = rng.uniform(0, np.pi, 6)
    a = np.column_stack([np.ones(6), np.zeros(6)])
    b = np.column_stack([np.cos(phi), np.sin(phi)])
    np.testing.assert_allclose(sph_addition(2, 3, a, b), 2 * np.cos(3 * phi), atol=1e-13)
    assert np.all(sph_addition(3, 0, xi, xi) == 1)


def _fd_laplacian(f, x, h=1e-3):
    def lap(step):
        out = np.zeros(x.shape[0])
        for i in range(x.shape[1]):
            e = np.zeros(x.shape[1])
            e[i] = step
            out += f(x + e) - 2 * f(x) + f(x - e)
        return out / step**2

    return (4 * lap(h / 2) - lap(h)) / 3


@pytest.mark.parametrize("d", [2, 3])
def test_harmonicity(d, rng):
    x = _ball(rng, 50, d)
    for k in range(1, 7):
        for l in harmonic_labels(k, d):
            h = HarmonicIndex(d, k, l)
            f = lambda p, h=h: solid_sph_eval(h, p)
            scale = max(1.0, np.max(np.abs(f(x))))
            assert np.max(np.abs(_fd_laplacian(f, x))) / scale <= 1e-6


def test_sphere_errors():
    with pytest.raises(DomainError):
        sph_eval(HarmonicIndex(3, 1, 1), np.array([[1.0, 1.0, 0.0]]))
    with pytest.raises(IndexRangeError):
        HarmonicIndex(2, 1, 3)
    with pytest.raises(ParameterDomainError):
        HarmonicIndex(4, 1, 1)


def test_ball_examples():
    x = np.array([[0.3, 0.4]])
    assert ball_op_eval(BallIndex(2, 0.5, 0, 0, 1), x)[0] == 1
    vals = {round(float(ball_op_eval(BallIndex(2, 0.5, 1, 0, l), x)[0]), 12) for l in (1, 2)}
    assert round(np.sqrt(2) * 0.3, 12) in vals
    assert ball_op_eval(BallIndex(2, 1.0, 2, 1, 1), np.zeros((1, 2)))[0] == pytest.approx(jacobi_eval(1, (0.5, 0.0), -1.0))


def _ball_rule(d, mu, n=24):
    # radial Gauss-Jacobi in r^2 and an exact sphere rule
    y, wy = roots_jacobi(n, mu - 0.5, (d - 2) / 2)
    r = np.sqrt((y + 1) / 2)
    xi, wxi = sphere(d, n)
    x = (r[:, None, None] * xi[None]).reshape(-1, d)
    w = np.outer(wy, wxi).ravel()
    return x, w / w.sum()


@pytest.mark.parametrize("d,mu", [(2, 0.5), (2, 1.5), (3, 0.0), (3, 1.0)])
def test_ball_gram(d, mu):
    x, w = _ball_rule(d, mu)
    idx = [b for n in range(7) for b in ball_indices(d, mu, n)]
    F = np.column_stack([ball_op_eval(b, x) for b in idx])
    G = (F * w[:, None]).T @ F
    norms = np.array([ball_norm(b) for b in idx])
    np.testing.assert_allclose(G, np.diag(norms), atol=1e-9)
    np.testing.assert_allclose(np.diag(G), norms, rtol=1e-9)


@pytest.mark.parametrize("d,mu", [(2, 0.5), (2, 1.0), (3, 0.0), (2, 0.0)])
def test_ball_kernel_matches_basis_sum(d, mu, rng):
    x, y = _ball(rng, 10, d), _ball(rng, 10, d)
    for n in range(5):
        direct = sum(ball_op_eval(b, x) * ball_op_eval(b, y) / ball_norm(b) for b in ball_indices(d, mu, n))
        np.testing.assert_allclose(ball_kernel(d, mu, n, x, y), direct, rtol=1e-8, atol=1e-8)


def test_ball_kernel_boundary_and_constant(rng):
    x = _unit(rng, 4, 2)
    for n in range(5):
        np.testing.assert_allclose(ball_kernel(2, 0.5, n, x, x), zonal_eval(n, 0.5 + 0.5, np.ones(4)), rtol=1e-10)
    assert np.all(ball_kernel(3, 1.0, 0, _ball(rng, 3, 3), _ball(rng, 3, 3)) == pytest.approx(1.0))
    with pytest.raises(ParameterDomainError):
        ball_kernel(2, -0.1, 1, x, x)


def test_ball_kernel_reproduces(rng):
    d, mu, n = 2, 1.0, 3
    x, w = _ball_rule(d, mu)
    basis = ball_indices(d, mu, n)
    coef = rng.normal(size=len(basis))
    q = lambda p: sum(c * ball_op_eval(b, p) for c, b in zip(coef, basis))
    pts = _ball(rng, 5, d, 0.9)
    for p in pts:
        K = ball_kernel(d, mu, n, np.repeat(p[None], len(x), 0), x)
        assert w @ (K * q(x)) == pytest.approx(q(p[None])[0], abs=1e-6)


@given(st.integers(0, 10), st.integers(0, 2**31))
def test_addition_identity_d3(n, seed):
    r = np.random.default_rng(seed)
    xi, eta = _unit(r, 100, 3), _unit(r, 100, 3)
    direct = sum(sph_eval(HarmonicIndex(3, n, l), xi) * sph_eval(HarmonicIndex(3, n, l), eta) for l in harmonic_labels(n, 3))
    np.testing.assert_allclose(sph_addition(3, n, xi, eta), direct, atol=1e-10 * (2 * n + 1))
