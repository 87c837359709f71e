"""Weyl transform, the projections E_A / F_N, the kernel of E_A F_N and the HS diagnostics (n = 1)."""
import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from hup_lab.geometry import disk, half_annulus, rectangle, region_measure, union
from hup_lab.harmonics import QuadratureWarning
from hup_lab.specfun import hermite_functions_1d
from hup_lab.transforms import coherent_coefficient, special_hermite
from hup_lab.weyl import (
    GridFunction,
    GridSpec,
    WeylMatrix,
    annihilation_probe,
    basis_gram,
    fourier_wigner,
    hs_identity,
    kernel_K,
    project_EA,
    project_FN,
    random_symbol,
    range_index_convention,
    sap_estimate,
    sap_ratio,
    special_hermite_coefficients,
    synthesize,
    weyl_transform,
)

GRID = GridSpec(14.0, 0.125)
TWO_PI = 2 * math.pi


def _unit_symbol(band, seed, grid=GRID):
    g, c = random_symbol(band, grid, np.random.default_rng(seed))
    return g, c


def _gaussian(center, width, grid=GRID):
    return GridFunction.from_callable(lambda z: np.exp(-np.abs(z - center) ** 2 / (2 * width**2)), grid)


# ------------------------------------------------------------ Fourier–Wigner


def test_fourier_wigner_origin():
    assert fourier_wigner(0, 0, 0j) == pytest.approx(TWO_PI**-0.5, rel=1e-12)


def test_fourier_wigner_matches_special_hermite():
    z = np.array([0.3 + 0.2j, -1.1 + 0.7j, 2.0 - 0.5j])
    for a, b in [(0, 0), (1, 3), (4, 2)]:
        np.testing.assert_allclose(fourier_wigner(a, b, z), special_hermite((a,), (b,), z[:, None]), atol=1e-13)


def test_fourier_wigner_vs_scipy_quad():
    def H(k, x):
        return float(hermite_functions_1d(k, np.array([x]))[k, 0])

    for a, b, z in [(1, 0, 0.4 - 0.9j), (2, 3, -0.6 + 0.3j)]:
        x, y = z.real, z.imag
        f = lambda u, part: part(x * u + x * y / 2) * H(a, u + y) * H(b, u)  # noqa: E731
        val = quad(f, -15, 15, args=(math.cos,), limit=200)[0] + 1j * quad(f, -15, 15, args=(math.sin,), limit=200)[0]
        assert fourier_wigner(a, b, z) == pytest.approx(val / math.sqrt(TWO_PI), abs=1e-11)


@pytest.mark.parametrize("alpha", [1, 2, 3, 5])
@pytest.mark.parametrize("lam", [1.0, 2.0])
def test_coherent_state_slope(alpha, lam):
    """|<pi(w) phi_0, phi_alpha>| e^{|lam||w|^2/4} is |c_alpha| |lam|^{alpha/2} |w|^alpha along a ray."""
    direction = np.exp(0.6j)
    r = np.linspace(0.5, 3.0, 12)
    w = r * direction
    V = np.abs(fourier_wigner(0, alpha, w, lam)) * math.sqrt(TWO_PI)
    y = np.log(V) + abs(lam) * r**2 / 4
    slope, intercept = np.polyfit(np.log(r), y, 1)
    assert slope == pytest.approx(alpha, abs=1e-3)
    expected = math.log(abs(coherent_coefficient((alpha,), lam)) * abs(lam) ** (alpha / 2))
    assert intercept == pytest.approx(expected, abs=1e-6)


def test_orthogonality_relation():
    """<phi_{ab}, phi_{cd}> = delta_ac delta_bd on the grid, for 4 random index pairs."""
    rng = np.random.default_rng(0)
    Z = GRID.points()
    for _ in range(4):
        a, b, c, d = (int(v) for v in rng.integers(0, 6, size=4))
        u = fourier_wigner(a, b, Z)
        v = fourier_wigner(c, d, Z)
        gram = np.sum(u * np.conj(v)) * GRID.cell
        assert abs(gram - float((a, b) == (c, d))) <= 1e-6
        assert abs(np.sum(np.abs(u) ** 2) * GRID.cell - 1.0) <= 1e-6


# ------------------------------------------------------------- Weyl transform


def test_plancherel_random_symbols():
    grid = GridSpec(18.0, 0.125)
    M = 40
    for seed in range(10):
        g, _ = _unit_symbol(M - 4, seed, grid)
        W = weyl_transform(g, M)
        lhs = W.hs_norm()
        rhs = math.sqrt(TWO_PI) * g.norm()
        tail = math.sqrt(W.tail_estimate)
        assert abs(lhs - rhs) <= 0.01 * rhs + tail


def test_plancherel_scaled_lambda():
    g = _gaussian(0.3 + 0.1j, 0.8)
    for lam in (2.0, -1.0):
        W = weyl_transform(g, 40, lam)
        assert math.sqrt(abs(lam)) * W.hs_norm() == pytest.approx(math.sqrt(TWO_PI) * g.norm(), rel=1e-6)


@pytest.mark.parametrize("a,b", [(0, 1), (2, 3), (5, 0), (4, 4)])
def test_rank_one_symbols(a, b):
    c = np.zeros((b + 1 if b >= a else a + 1,) * 2, dtype=complex)
    c[a, b] = 1.0
    g = synthesize(c, GRID)
    s = weyl_transform(g, 12).singular_values()
    assert s[1] / s[0] < 1e-6
    assert s[0] == pytest.approx(math.sqrt(TWO_PI), rel=1e-8)


def test_zero_symbol():
    W = weyl_transform(GridFunction.zeros(GRID), 8)
    assert np.all(W.entries == 0)
    assert W.hs_norm() == 0.0


def test_truncation_warning():
    g = _gaussian(3.0 + 2.0j, 0.4)
    with pytest.warns(QuadratureWarning):
        W = weyl_transform(g, 6)
    assert W.tail_fraction > 1e-6


def test_range_index_and_coefficients():
    assert range_index_convention() == "first"
    g, c = _unit_symbol(6, 3)
    C = special_hermite_coefficients(weyl_transform(g, 10))
    np.testing.assert_allclose(C[:7, :7], c, atol=1e-10)
    assert np.max(np.abs(C[7:, :])) < 1e-10 and np.max(np.abs(C[:, 7:])) < 1e-10


def test_self_adjoint_for_real_even_symbols():
    g = GridFunction.from_callable(lambda z: (1 + z.real**2 - 0.5 * z.imag**2) * np.exp(-np.abs(z) ** 2 / 3), GRID)
    W = weyl_transform(g, 30).entries
    assert np.max(np.abs(W - W.conj().T)) <= 1e-8 * np.max(np.abs(W))


def test_plancherel_defect_decreases_with_M():
    grid = GridSpec(18.0, 0.125)
    g = _gaussian(1.5 - 1.0j, 0.6, grid)
    target = math.sqrt(TWO_PI) * g.norm()
    defects = []
    for M in (20, 30, 40):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", QuadratureWarning)
            W = weyl_transform(g, M)
        defects.append(abs(W.hs_norm() - target) / target)
    assert defects[0] > defects[1] > defects[2]


def test_twisted_translation_covariance():
    grid = GridSpec(18.0, 0.125)
    c = np.zeros((3, 3), dtype=complex)
    c[0, 0], c[1, 2], c[2, 1] = 1.0, 0.5j, -0.3
    g0 = synthesize(c, grid)
    w = 1.0 + 0.5j
    Z = grid.points()
    # g_l(z) = e^{(i/2) Im(z conj w)} g_0(z - w); evaluate g_0(z - w) exactly from the coefficients
    shifted = sum(c[a, b] * fourier_wigner(a, b, Z - w) for a in range(3) for b in range(3))
    gl = GridFunction(np.exp(0.5j * np.imag(Z * np.conj(w))) * shifted, grid)
    s0 = weyl_transform(g0, 40).singular_values()[:5]
    s1 = weyl_transform(gl, 40).singular_values()[:5]
    np.testing.assert_allclose(s1, s0, atol=1e-6)


def test_matrix_text_dump():
    W = WeylMatrix(1, np.array([[1.0, 0.0], [0.5j, 0.0]]))
    lines = W.to_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1:] == ["0 0 1.0 0.0", "1 0 0.0 0.5"]


# ----------------------------------------------------------------- projections


def test_EA_examples():
    g, _ = _unit_symbol(4, 5)
    whole = rectangle((-20, -20), (20, 20))
    np.testing.assert_array_equal(project_EA(g, whole).values, g.values)
    A = disk(1.5, (0.5, 0.0))
    once = project_EA(g, A)
    np.testing.assert_array_equal(project_EA(once, A).values, once.values)
    assert once.support_consistent()
    inside = once.norm() ** 2
    outside = (g - once).norm() ** 2
    assert inside + outside == pytest.approx(g.norm() ** 2, rel=1e-12)


def test_support_flag():
    g = GridFunction.from_callable(lambda z: np.ones(z.shape), GRID, support=disk(2.0))
    assert g.support_consistent()
    bad = GridFunction(np.ones(GRID.shape), GRID, disk(2.0))
    assert not bad.support_consistent()


def test_FN_idempotent_and_defining_relation():
    M, N = 16, 3
    for seed in range(10):
        g, _ = _unit_symbol(10, 100 + seed)
        Fg = project_FN(g, N, M)
        W = weyl_transform(g, M, tail_warn=np.inf).entries.copy()
        W[N:, :] = 0.0  # P_N on the range side
        WF = weyl_transform(Fg, M, tail_warn=np.inf).entries
        assert np.linalg.norm(W - WF) < 1e-8
        if seed < 3:
            FFg = project_FN(Fg, N, M)
            assert np.max(np.abs(FFg.values - Fg.values)) < 1e-10


def test_FN_full_truncation_is_identity():
    g, _ = _unit_symbol(8, 7)
    np.testing.assert_allclose(project_FN(g, 13, 12).values, g.values, atol=1e-10)


def test_kernel_outside_region():
    A = disk(1.0)
    assert kernel_K(2.0 + 0j, 0.3j, A, 3) == 0
    np.testing.assert_array_equal(kernel_K(np.array([1.5, -3j]), np.array([0.1, 0.2]), A, 2), 0)


def test_kernel_diagonal_N1():
    A = disk(1.0)
    z = 0.3 - 0.4j
    # <pi(0) phi_0, phi_0> = 1 computed by direct quadrature of the Gaussian
    direct = quad(lambda u: math.exp(-u * u) / math.sqrt(math.pi), -20, 20)[0]
    assert kernel_K(z, z, A, 1) == pytest.approx(direct / TWO_PI, rel=1e-12)


def test_kernel_operator_consistency():
    A = disk(1.2, (0.2, 0.1))
    N, M = 2, 24
    Z = GRID.points()
    zs = np.array([0.125 + 0.25j, -0.5 + 0.25j, 0.75 - 0.25j])  # lattice points inside A
    for seed in range(5):
        g, _ = _unit_symbol(8, 200 + seed)
        target = project_EA(project_FN(g, N, M), A)
        for z in zs:
            K = kernel_K(z, Z, A, N)
            applied = np.sum(K * g.values) * GRID.cell
            iz = np.argmin(np.abs(GRID.axis - z.real)), np.argmin(np.abs(GRID.axis - z.imag))
            # z lies on the lattice, so the sampled E_A F_N g can be compared directly
            assert abs(GRID.axis[iz[0]] + 1j * GRID.axis[iz[1]] - z) < 1e-12
            assert abs(applied - target.values[iz]) <= 1e-6


# --------------------------------------------------------------- HS identity


def test_hs_identity_examples():
    rep = hs_identity(disk(1.0), 2, 40)
    assert rep.predicted == pytest.approx(1.0, rel=1e-14)
    assert rep.rel_err < 0.02
    assert rep.kernel_rel_diff < 1e-4
    empty = union()
    rep0 = hs_identity(empty, 2, 40)
    assert rep0.computed == 0.0 and rep0.predicted == 0.0
    text = rep.to_csv()
    assert text.splitlines()[0] == "quantity,value"


@pytest.mark.parametrize("A", [rectangle((-1, -0.5), (1.5, 1.0)), half_annulus(0.5, 1.5),
                               union(disk(0.5, (-1, 0)), disk(0.7, (1.5, 0.5)))],
                         ids=["rectangle", "half-annulus", "union"])
def test_hs_identity_other_regions(A):
    rep = hs_identity(A, 2, 40, kernel_route=False)
    assert rep.predicted == pytest.approx(region_measure(A) * 2 / TWO_PI)
    assert rep.rel_err < 0.02


def test_hs_monotone_in_N_and_region():
    vals = [hs_identity(disk(1.0), N, 30, kernel_route=False).computed for N in range(1, 5)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    radii = [0.5, 0.8, 1.0, 1.3]
    vals = [hs_identity(disk(r), 2, 30, kernel_route=False).computed for r in radii]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_truncation_flag_low_M():
    rep = hs_identity(disk(3.0), 2, 4, kernel_route=False)
    assert rep.truncation_dominated


# ---------------------------------------------------------------- probes


def test_probe_whole_grid():
    N, M = 2, 20
    rep = annihilation_probe(rectangle((-16, -16), (16, 16)), N, M)
    np.testing.assert_allclose(rep.singular_values, 1.0, atol=1e-9)
    assert rep.count_near_one == N * (M + 1)
    assert rep.count_near_one <= rep.bound


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_probe_unit_disk(N):
    rep = annihilation_probe(disk(1.0), N, 40)
    assert rep.count_near_one == 0
    assert np.all(rep.singular_values < 1 - 1e-3)
    assert np.all((rep.singular_values >= 0) & (rep.singular_values <= 1 + 1e-12))
    assert rep.count_near_one <= rep.bound
    # stability under doubling the truncation
    rep2 = annihilation_probe(disk(1.0), N, 80)
    assert rep2.singular_values[0] == pytest.approx(rep.singular_values[0], abs=1e-8)


def test_probe_top_singular_value_closed_form():
    # N = 1: top squared singular value on the unit disk is 1 - e^{-1/2}
    rep = annihilation_probe(disk(1.0), 1, 40)
    assert rep.singular_values[0] ** 2 == pytest.approx(1 - math.exp(-0.5), abs=1e-10)
    assert rep.to_csv().splitlines()[0] == "index,sigma"


def test_basis_gram_hermitian_psd():
    G = basis_gram(disk(1.3), range(3), 10)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-13)
    ev = np.linalg.eigvalsh(G)
    assert ev.min() > -1e-12 and ev.max() < 1 + 1e-12


# ------------------------------------------------------------------- SAP


def test_sap_ratio_outside_support():
    A = disk(1.0)
    g = _gaussian(5.0 + 0.0j, 0.7)
    g = g - project_EA(g, A)
    sq, unsq = sap_ratio(g, A, 2, 40)
    assert sq <= 1.0 + 1e-12


def test_sap_ratio_range_outside_BN():
    A, N = disk(1.0), 2
    c = np.zeros((5, 5), dtype=complex)
    c[3, 1] = 1.0  # range index 3 >= N
    g = synthesize(c, GRID)
    sq, _ = sap_ratio(g, A, N, 12)
    assert sq <= 1.0


def test_sap_estimate_stabilises():
    A = disk(1.0)
    a = sap_estimate(A, 2, 12, trials=500)
    b = sap_estimate(A, 2, 12, trials=1000)
    assert abs(b.constant - a.constant) / b.constant < 0.05
    assert b.constant <= b.exact_constant + 1e-12
    assert b.constant_unsquared > 0
