"""Bigraded harmonics, zonal kernels, projections, Funk–Hecke, Cesàro weights, geodesic means."""
import math
from collections import defaultdict

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import ortho_group

from hup_lab.geometry import geodesic_quadrature, sphere_area, sphere_quadrature, to_complex, to_real
from hup_lab.harmonics import (
    BigradedPolynomial,
    SphereFunction,
    bidegrees,
    cesaro_weight,
    funk_hecke,
    geodesic_mean,
    harmonic_basis,
    harmonic_dimension,
    monomials,
    project_l,
    project_pq,
    theta_average,
    zonal,
)

RNG = np.random.default_rng(12345)


def _unit(n, rng=RNG, count=None):
    shape = (n,) if count is None else (count, n)
    v = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _fd_laplacian(f, z, h=1e-3):
    """Euclidean Laplacian in the 2n real coordinates by central differences."""
    x = to_real(z)
    total = np.zeros(x.shape[0], dtype=complex)
    f0 = f(z)
    for j in range(x.shape[1]):
        e = np.zeros(x.shape[1])
        e[j] = h
        total += f(to_complex(x + e)) - 2 * f0 + f(to_complex(x - e))
    return total / (h * h)


def _brute_harmonic_dim(n, p, q):
    """Nullity of Delta: P_{p,q} -> P_{p-1,q-1} from an independently assembled matrix."""
    src = monomials(n, p, q)
    if p == 0 or q == 0:
        return len(src)
    rows = defaultdict(dict)
    for col, (a, b) in enumerate(src):
        for j in range(n):
            if a[j] and b[j]:
                a2 = list(a)
                b2 = list(b)
                a2[j] -= 1
                b2[j] -= 1
                rows[(tuple(a2), tuple(b2))][col] = 4 * a[j] * b[j]
    M = np.zeros((len(rows), len(src)))
    for i, (_, entries) in enumerate(sorted(rows.items())):
        for col, v in entries.items():
            M[i, col] = v
    return len(src) - np.linalg.matrix_rank(M)


# --------------------------------------------------------------- polynomials


def test_homogeneity():
    P = BigradedPolynomial(2, 2, 1, RNG.normal(size=len(monomials(2, 2, 1))))
    z = _unit(2, count=7)
    lam = 0.7 - 1.3j
    np.testing.assert_allclose(P(lam * z), lam**2 * np.conj(lam) * P(z), rtol=1e-12)


def test_basis_examples():
    B = harmonic_basis(2, 1, 0)
    assert B.dim == 2
    # spans {z1, z2}: each element is a combination of z1, z2 only
    assert all(m[1] == (0, 0) for m in monomials(2, 1, 0))
    assert harmonic_basis(2, 1, 1).dim == 3
    z = _unit(2, count=100) * RNG.uniform(0.5, 2.0, size=(100, 1))
    for Y in harmonic_basis(2, 2, 1).elements:
        assert Y.is_harmonic()
        lap = _fd_laplacian(Y.evaluate, z)
        assert np.max(np.abs(lap)) <= 1e-5  # finite-difference truncation ~ h^2
        # symbolic zero: evaluate the symbolic Laplacian exactly
        assert np.max(np.abs(Y.laplacian().evaluate(z))) <= 1e-10


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 2, 1), (2, 3, 2), (3, 1, 1), (3, 2, 2), (2, 4, 0)])
def test_dimension_matches_rank_nullity(n, p, q):
    assert harmonic_dimension(n, p, q) == _brute_harmonic_dim(n, p, q)
    assert harmonic_basis(n, p, q).dim == _brute_harmonic_dim(n, p, q)


@pytest.mark.parametrize("n,p,q", [(2, 2, 1), (2, 3, 3), (3, 2, 1), (1, 3, 0)])
def test_gram_orthonormal(n, p, q):
    B = harmonic_basis(n, p, q)
    rule = sphere_quadrature(n, 1.0, 2 * (p + q) + 2)
    Y = B.evaluate(rule.complex_nodes)
    G = (Y.conj().T * rule.weights) @ Y
    np.testing.assert_allclose(G, np.eye(B.dim), atol=1e-10)


def test_symbolic_vs_fd_laplacian_nonharmonic():
    P = BigradedPolynomial.from_dict(2, {((1, 0), (1, 0)): 1.0, ((0, 1), (0, 1)): 2.0})  # |z1|^2 + 2|z2|^2
    z = _unit(2, count=5)
    np.testing.assert_allclose(P.laplacian().evaluate(z), _fd_laplacian(P.evaluate, z), rtol=1e-5)
    np.testing.assert_allclose(P.laplacian().evaluate(z), 12.0, rtol=1e-12)


def test_basis_csv():
    text = harmonic_basis(2, 1, 1).to_csv()
    assert text.splitlines()[0] == "p,q,j,alpha,beta,re,im"


def test_n1_mixed_class_rejected():
    with pytest.raises(ValueError):
        harmonic_basis(1, 1, 1)


# --------------------------------------------------------------------- zonal


def test_zonal_degree_zero():
    xi, eta = _unit(2), _unit(2)
    assert zonal(0, 4, xi, eta) == pytest.approx(1.0 / sphere_area(2), rel=1e-12)


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_zonal_reproducing(l):
    rng = np.random.default_rng(l)
    rule = sphere_quadrature(2, 1.0, 2 * l + 2)
    coeffs = {(p, l - p): rng.normal(size=harmonic_dimension(2, p, l - p)) for p in range(l + 1)}
    Y = SphereFunction.from_coefficients(2, coeffs)
    xi = _unit(2, rng)
    val = rule.integrate(zonal(l, 4, xi, rule.complex_nodes) * Y(rule.complex_nodes))
    assert abs(val - Y(xi)) <= 1e-8 * max(1.0, abs(Y(xi)))


def test_zonal_rotation_invariance():
    for seed in range(5):
        R = ortho_group.rvs(4, random_state=seed)
        xi, eta = to_real(_unit(2)), to_real(_unit(2))
        for l in range(5):
            assert zonal(l, 4, R @ xi, R @ eta) == pytest.approx(zonal(l, 4, xi, eta), abs=1e-10)


# ---------------------------------------------------------------- projections


def test_project_l_identity_and_orthogonality():
    Y = harmonic_basis(2, 2, 1)[1]
    f = SphereFunction.from_polynomial(Y)
    xi = _unit(2, count=6)
    np.testing.assert_allclose(project_l(f, 3, xi), Y(xi), atol=1e-9)
    for l in (0, 1, 2, 4):
        assert np.max(np.abs(project_l(f, l, xi))) <= 1e-9


def test_project_l_reconstruction():
    f = SphereFunction.random(2, 4, np.random.default_rng(7))
    pts = _unit(2, count=20)
    recon = sum(project_l(f, l, pts) for l in range(5))
    np.testing.assert_allclose(recon, f(pts), atol=1e-8 * max(1.0, float(np.max(np.abs(f(pts))))))


def test_project_pq_examples():
    Y11 = SphereFunction.from_polynomial(harmonic_basis(2, 1, 1)[0])
    pts = _unit(2, count=10)
    np.testing.assert_allclose(project_pq(Y11, 1, 1)(pts), Y11(pts), atol=1e-9)
    assert np.max(np.abs(project_pq(Y11, 2, 0)(pts))) <= 1e-9

    A = SphereFunction.from_coefficients(2, {(2, 0): RNG.normal(size=3)})
    B = SphereFunction.from_coefficients(2, {(0, 2): RNG.normal(size=3)})
    mix = SphereFunction.from_callable(2, lambda z: A(z) + B(z), 2)
    np.testing.assert_allclose(project_pq(mix, 2, 0)(pts), A(pts), atol=1e-8)
    np.testing.assert_allclose(project_pq(mix, 0, 2)(pts), B(pts), atol=1e-8)


def test_project_pq_rejects_aliasing_grid():
    f = SphereFunction.random(2, 3, np.random.default_rng(0))
    with pytest.raises(ValueError):
        project_pq(f, 1, 1, n_theta=5)


def test_completeness_at_band_limit():
    rng = np.random.default_rng(3)
    L = 3
    f = SphereFunction.random(2, L, rng)
    g = SphereFunction.from_callable(2, f.evaluate, L)  # force the projection path
    pts = _unit(2, rng, count=15)
    recon = sum(project_pq(g, p, q)(pts) for p, q in bidegrees(L))
    np.testing.assert_allclose(recon, f(pts), atol=1e-8 * float(np.max(np.abs(f(pts)))))


def test_theta_average_separation():
    rng = np.random.default_rng(4)
    pts = _unit(2, rng, count=8)
    for p, q in [(2, 1), (1, 1), (0, 3)]:
        f = SphereFunction.from_coefficients(2, {(p, q): rng.normal(size=harmonic_dimension(2, p, q))})
        for s in range(-4, 5):
            avg = theta_average(f, s, pts, 4 * 3 + 5)
            if s == p - q:
                np.testing.assert_allclose(avg, f(pts), atol=1e-12)
            else:
                assert np.max(np.abs(avg)) <= 1e-12


# ---------------------------------------------------------------- Funk–Hecke


def test_funk_hecke_constants():
    one = lambda t: np.ones_like(t)  # noqa: E731
    for l in (1, 2, 3):
        assert abs(funk_hecke(one, l, 2)) <= 1e-10
    assert funk_hecke(one, 0, 2) == pytest.approx(sphere_area(2), rel=1e-10)


def _direct_ratio(F, l, n, Y, xi, rule):
    t = np.clip(rule.nodes @ to_real(xi), -1, 1)
    return complex(rule.integrate(F(t) * Y(rule.complex_nodes)) / Y(xi))


def test_funk_hecke_linear_kernel():
    F = lambda t: t  # noqa: E731
    rule = sphere_quadrature(2, 1.0, 6)
    C = funk_hecke(F, 1, 2)
    rng = np.random.default_rng(11)
    for _ in range(5):
        p = int(rng.integers(0, 2))
        Y = SphereFunction.from_coefficients(2, {(p, 1 - p): rng.normal(size=2) + 1j * rng.normal(size=2)})
        xi = _unit(2, rng)
        r = _direct_ratio(F, 1, 2, Y, xi, rule)
        assert r.real == pytest.approx(C, rel=1e-8) and abs(r.imag) < 1e-8 * abs(C)


def test_funk_hecke_eigenvalue_property():
    F = np.exp
    rule = sphere_quadrature(2, 1.0, 40)
    rng = np.random.default_rng(5)
    for l in (2, 3):
        ratios = []
        for _ in range(10):
            coeffs = {(p, l - p): rng.normal(size=harmonic_dimension(2, p, l - p)) for p in range(l + 1)}
            Y = SphereFunction.from_coefficients(2, coeffs)
            ratios.append(_direct_ratio(F, l, 2, Y, _unit(2, rng), rule))
        ratios = np.array(ratios)
        assert np.var(ratios) < 1e-12
        assert np.mean(ratios).real == pytest.approx(funk_hecke(F, l, 2), rel=1e-8)


def test_funk_hecke_closed_form_against_scipy_quad():
    # n = 2: C_l = area(S^2) / G_l^1(1) * int F G_l^1 (1 - t^2)^{1/2} dt
    from scipy.special import eval_gegenbauer

    F = lambda t: np.cos(2 * t)  # noqa: E731
    for l in range(4):
        integral = quad(lambda t: F(t) * eval_gegenbauer(l, 1, t) * math.sqrt(1 - t * t), -1, 1)[0]
        assert funk_hecke(F, l, 2) == pytest.approx(4 * math.pi / (l + 1) * integral, rel=1e-8, abs=1e-12)


# ---------------------------------------------------------------------- Cesàro


def test_cesaro_weights():
    assert cesaro_weight(0, 7, 2.5) == 1.0
    # 1 / binom(m + delta, delta) with m = 7, delta = 2.5
    assert cesaro_weight(7, 7, 2.5) == pytest.approx(math.gamma(3.5) * math.gamma(8) / math.gamma(10.5), rel=1e-12)
    for m in range(21):
        w = [cesaro_weight(l, m, 2.0) for l in range(m + 1)]
        assert all(0 < x <= 1 for x in w)
        assert all(a > b for a, b in zip(w, w[1:]))
    with pytest.raises(ValueError):
        cesaro_weight(3, 2, 2.0)
    with pytest.raises(ValueError):
        cesaro_weight(0, 2, 0.5, n=2)


# -------------------------------------------------------------- geodesic means


def test_geodesic_mean_constant():
    f = SphereFunction.from_callable(2, lambda z: np.full(z.shape[0], 2.0 - 1j), 0)
    assert geodesic_mean(f, _unit(2), 0.4) == pytest.approx(2.0 - 1j, abs=1e-12)


def test_slicing_identity():
    Y = SphereFunction.from_polynomial(harmonic_basis(2, 2, 1)[2])
    omega = _unit(2)
    t, w = np.polynomial.legendre.leggauss(40)
    vals = np.array([geodesic_mean(Y, omega, ti) for ti in t])
    assert abs(np.sum(w * vals * np.sqrt(1 - t**2))) <= 1e-8


def _annihilate_at(f, omega, L):
    """Subtract the zonal components so that Pi_l f(omega) = 0 for every l <= L."""
    lead = [project_l(f, l, omega) / zonal(l, 4, omega, omega) for l in range(L + 1)]

    def g(z):
        return f(z) - sum(c * zonal(l, 4, omega, z) for l, c in enumerate(lead))

    return SphereFunction.from_callable(2, g, L)


def test_geodesic_equivalence_both_directions():
    rng = np.random.default_rng(8)
    L = 3
    ts = np.linspace(-0.95, 0.95, 20)
    for trial in range(10):
        f = SphereFunction.random(2, L, rng)
        omega = _unit(2, rng)
        if trial % 2 == 0:
            f = _annihilate_at(f, omega, L)
        proj = max(abs(project_l(f, l, omega)) for l in range(L + 1))
        means = max(abs(geodesic_mean(f, omega, t)) for t in ts)
        assert (proj <= 1e-7) == (means <= 1e-7)
        if trial % 2 == 0:
            assert means <= 1e-8


def test_geodesic_mean_matches_rule_directly():
    f = SphereFunction.random(2, 2, np.random.default_rng(9))
    omega = _unit(2)
    rule = geodesic_quadrature(omega, -0.3, 8)
    assert geodesic_mean(f, omega, -0.3) == pytest.approx(complex(rule.integrate(f(rule.complex_nodes))), abs=1e-12)
