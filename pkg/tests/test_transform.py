import numpy as np
import pytest
from scipy.integrate import quad

from hypergeo_heat import even_case, transform
from hypergeo_heat.errors import DomainError, InsufficientDecay
from hypergeo_heat.hypergeo import delta_density
from hypergeo_heat.quadrature import (GridFunction, Symmetry, TestFunction, box_grid,
                                      gaussian_radii, resolved_nodes, weyl_grid)
from hypergeo_heat.rootsys import build_root_system, multiplicity, rho, weyl_group

A1 = build_root_system("A1")
A2 = build_root_system("A2")
ALPHA = A1.positive_roots[0]


def _setup(rs, mv, width=1.0, n=None):
    m = multiplicity(rs, mv)
    xr, lr = gaussian_radii(rs, rho(rs, m), width, 1e-12)
    if rs.rank == 1:
        n = n or resolved_nodes(xr, lr)
        return m, weyl_grid(rs, n, xr), weyl_grid(rs, n, lr, space="a*")
    return m, weyl_grid(rs, 64, xr, n_angular=32), weyl_grid(rs, 64, lr, space="a*", n_angular=32)


# --- Euclidean transform


def test_euclidean_plancherel_and_shift():
    xg = box_grid(1, 128, 12.0)
    lg = box_grid(1, 128, 12.0, space="a*")
    f = GridFunction(xg, np.exp(-xg.nodes[:, 0] ** 2 / 2))
    F = transform.euclidean_fourier(f, lg)
    # F(lam) = sqrt(2 pi) exp(-lam^2 / 2)
    assert np.allclose(F.values, np.sqrt(2 * np.pi) * np.exp(-lg.nodes[:, 0] ** 2 / 2), atol=1e-12)
    norm_f = f.norm_sq()
    norm_F = transform.SPECTRAL_MEASURE(1) * F.norm_sq()
    assert abs(norm_f - np.sqrt(np.pi)) < 1e-12
    assert abs(norm_F - norm_f) < 1e-12
    g = GridFunction(xg, np.exp(-(xg.nodes[:, 0] - 1.5) ** 2 / 2))
    G = transform.euclidean_fourier(g, lg)
    assert np.allclose(np.abs(G.values), np.abs(F.values), atol=1e-12)
    back = transform.inverse_euclidean_fourier(F, xg.nodes)
    assert np.allclose(back, f.values, atol=1e-12)
    zero = transform.euclidean_fourier(GridFunction(xg, np.zeros(len(xg))), lg)
    assert np.all(zero.values == 0)


def test_decay_enforced():
    xg = box_grid(1, 64, 2.0)
    lg = box_grid(1, 64, 5.0, space="a*")
    f = GridFunction(xg, np.exp(-xg.nodes[:, 0] ** 2 / 2), Symmetry.W_INVARIANT)
    with pytest.raises(InsufficientDecay):
        transform.euclidean_fourier(f, lg)
    with pytest.raises(InsufficientDecay):
        transform.hypergeometric_fourier_grid(A1, multiplicity(A1, 2), f, lg)


# --- hypergeometric transform


def test_flat_case_is_symmetrised_euclidean():
    m = multiplicity(A2, 0.0)
    xr, lr = gaussian_radii(A2, rho(A2, m), 1.0, 1e-12)
    xg = weyl_grid(A2, 32, xr, n_angular=16)
    lg = weyl_grid(A2, 16, lr, space="a*", n_angular=16)
    f = TestFunction("gaussian", 1.0, center=(0.3, 0.1)).sample(xg, A2)
    Ff = transform.hypergeometric_fourier_grid(A2, m, f, lg)
    W = weyl_group(A2)
    sym = sum(transform.euclidean_fourier(f, _points_grid(lg, lg.nodes @ w.T)).values for w in W.elements)
    assert np.allclose(Ff.values, sym, atol=1e-10)


def _points_grid(grid, nodes):
    g = box_grid(grid.rank, 16, 1.0)
    g.nodes, g.weights = nodes, grid.weights
    return g


def test_a1_bump_against_independent_quadrature():
    m = multiplicity(A1, 2)
    R = 2.0
    xg = weyl_grid(A1, 512, R)
    lg = weyl_grid(A1, 64, 10.0, space="a*")
    tf = TestFunction("bump", R)
    f = tf.sample(xg, A1)
    a = ALPHA[0]
    for lam in (0.0, 0.7, 2.3, 5.0):
        val = transform.hypergeometric_fourier(A1, m, f, np.array([lam]))

        def integrand(x):
            # phi times the density, with the sinh(a x) factor cancelled
            mu = -1j * lam
            kern = a * np.sinh(mu * x) / mu if lam else a * x
            return (tf(np.array([[x]]))[0] * kern * 4 * np.sinh(a * x)).real

        ref, _ = quad(integrand, -R, R, limit=400, epsabs=1e-12, epsrel=1e-12)
        assert abs(val - ref) < 1e-9 * max(1, abs(ref))


@pytest.mark.parametrize("mv", [0.0, 2.0, 1.0])
def test_plancherel_and_inversion_a1(mv):
    m, xg, lg = _setup(A1, mv)
    f = TestFunction("gaussian", 1.0).sample(xg, A1)
    lhs, rhs = transform.plancherel_check(A1, m, f, lg)
    assert abs(rhs / lhs - 1) < 1e-8
    if mv == 0.0:
        assert abs(lhs - np.sqrt(np.pi / 2)) < 1e-12
    Ff = transform.hypergeometric_fourier_grid(A1, m, f, lg)
    back = transform.inverse_on_grid(A1, m, Ff, xg)
    assert np.abs(back.values - f.values).max() < 1e-8


def test_flat_roundtrip_matches_euclidean():
    m, xg, lg = _setup(A1, 0.0)
    f = TestFunction("gaussian", 1.0).sample(xg, A1)
    Ff = transform.hypergeometric_fourier_grid(A1, m, f, lg)
    hyp = transform.inverse_on_grid(A1, m, Ff, xg).values
    euc = transform.inverse_euclidean_fourier(transform.euclidean_fourier(f, lg), xg.nodes)
    assert np.abs(hyp - euc).max() < 1e-10


def test_zero_function():
    m, xg, lg = _setup(A1, 2.0)
    z = GridFunction(xg, np.zeros(len(xg)), Symmetry.W_INVARIANT)
    assert transform.plancherel_check(A1, m, z, lg) == (0.0, 0.0)
    Fz = transform.hypergeometric_fourier_grid(A1, m, z, lg)
    assert np.all(transform.inverse_on_grid(A1, m, Fz, xg).values == 0)
    assert np.all(transform.abel_transform(A1, m, z, lg).values == 0)


def test_inverse_domain_check():
    m, xg, lg = _setup(A1, 2.0)
    Ff = transform.hypergeometric_fourier_grid(A1, m, TestFunction().sample(xg, A1), lg)
    with pytest.raises(DomainError):
        transform.inverse_hypergeometric_fourier(A1, m, Ff, np.array([[0.5 + 2.0j]]))


def test_symbol_identity_flat_and_a1():
    for mv in (0.0, 2.0):
        m, xg, lg = _setup(A1, mv)
        lams = np.linspace(0.5, 6, 6)[:, None]
        res, norm1 = transform.symbol_laplace_check(A1, m, TestFunction("gaussian", 1.0), xg, lams)
        assert np.all(res <= 1e-6 * (1 + lams[:, 0] ** 2) * norm1)


# --- Abel transform, tau-action and Lambda


def test_abel_flat_is_symmetrisation():
    m, xg, lg = _setup(A1, 0.0)
    f = TestFunction("gaussian", 1.0).sample(xg, A1)
    Af = transform.abel_transform(A1, m, f, lg)
    assert np.abs(Af.values - len(weyl_group(A1)) * f.values).max() < 1e-10


@pytest.mark.parametrize("mv", [1.0, 2.0, 0.5])
def test_tau_composition(mv):
    m = multiplicity(A2, mv)
    g = weyl_grid(A2, 16, 3.0, space="a*")
    rng = np.random.default_rng(0)
    F = GridFunction(g, rng.normal(size=len(g)) + 1j * rng.normal(size=len(g)))
    W = weyl_group(A2)
    ident = transform.tau_action(A2, m, 0, F)
    assert np.allclose(ident.values, F.values, atol=1e-15)
    for s in range(len(W)):
        for t in range(len(W)):
            st = W.compose(s, t)
            lhs = transform.tau_action(A2, m, st, F).values
            rhs = transform.tau_action(A2, m, s, transform.tau_action(A2, m, t, F)).values
            assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(F.values).max()


def test_tau_sign_rule_complex_case():
    from hypergeo_heat.quadrature import node_permutation
    m = multiplicity(A2, 2)
    g = weyl_grid(A2, 16, 3.0, space="a*")
    rng = np.random.default_rng(1)
    F = GridFunction(g, rng.normal(size=len(g)))
    W = weyl_group(A2)
    for s in range(len(W)):
        perm = node_permutation(g, W.elements[W.inverse(s)])
        expected = W.signs[s] * F.values[perm]
        assert np.allclose(transform.tau_action(A2, m, s, F).values, expected, atol=1e-12)


@pytest.mark.parametrize("rs", [A1, A2])
def test_lambda_complex_case(rs):
    m, xg, lg = _setup(rs, 2.0)
    f = TestFunction("gaussian", 1.0).sample(xg, rs)
    L = transform.lambda_map(rs, m, f, lg)
    assert np.abs(L.values - even_case.delta_half(rs, xg.nodes) * f.values).max() < 1e-8
    assert L.symmetry is Symmetry.TAU_W_INVARIANT
    # chamber shortcut agrees with direct evaluation at a few points
    pts = xg.nodes[:5]
    assert np.allclose(transform.lambda_map(rs, m, f, lg, points=pts), L.values[:5], atol=1e-12)


def test_lambda_flat_isometry():
    m, xg, lg = _setup(A1, 0.0)
    f = TestFunction("gaussian", 1.0).sample(xg, A1)
    L = transform.lambda_map(A1, m, f, lg)
    assert abs(L.norm_sq() / f.norm_sq() - 1) < 1e-10


def test_lambda_isometry_general_multiplicity():
    m, xg, _ = _setup(A1, 1.0)
    f = TestFunction("gaussian", 1.0).sample(xg, A1)
    # Lambda f only decays exponentially for odd m: measure it on a wide box
    _, lr = gaussian_radii(A1, rho(A1, m), 1.0, 1e-12)
    n = resolved_nodes(40.0, lr)
    lg = weyl_grid(A1, n, lr, space="a*")
    wide = weyl_grid(A1, n, 40.0)
    v = transform.lambda_map(A1, m, f, lg, points=wide.nodes)
    ratio = wide.integrate(np.abs(v) ** 2) / f.norm_sq(delta_density(A1, m, xg.nodes))
    assert abs(ratio - 1) < 1e-10


# --- multipliers


def test_multiplier_consistency():
    m = multiplicity(A2, 2)
    lams = np.random.default_rng(2).normal(size=(50, 2)) * 3
    a = transform.SpectralMultiplier.heat(A2, m, 0.3)
    b = transform.SpectralMultiplier.heat(A2, m, 0.2)
    c = transform.SpectralMultiplier.heat(A2, m, 0.5)
    assert np.abs(a(lams) * b(lams) - c(lams)).max() <= 1e-12
    g = transform.SpectralMultiplier.exp_growth(A2, m, 0.5)
    assert np.abs(g(lams) * c(lams) - 1).max() <= 1e-12
    ic = transform.SpectralMultiplier.inverse_c(A2, m)
    assert np.allclose(ic(lams), even_case.inv_c_polynomial(A2, m, -1j * lams))
    bad = transform.SpectralMultiplier(lambda l: np.where(l[:, 0] == 0, np.inf, l[:, 0]), "pole")
    with pytest.raises(DomainError):
        bad(np.zeros((1, 2)))


def test_decay_profile_gaussian_vs_bump():
    m = multiplicity(A1, 2)
    lg = weyl_grid(A1, 128, 30.0, space="a*")
    xg = weyl_grid(A1, 512, 2.0)
    gauss_x = weyl_grid(A1, 256, 9.0)
    Fb = transform.hypergeometric_fourier_grid(A1, m, TestFunction("bump", 2.0).sample(xg, A1), lg)
    Fg = transform.hypergeometric_fourier_grid(A1, m, TestFunction("gaussian", 1.0).sample(gauss_x, A1), lg)
    rb, tb = transform.decay_profile(Fb)
    rg, tg = transform.decay_profile(Fg)
    assert np.all(np.diff(tb) <= 0) and np.all(np.diff(tg) <= 0)
    far = rb > 20
    # the Gaussian transform is far below the bump transform at large |lam|
    assert tg[far].max() < 1e-6 * tb[far].max()
