import numpy as np
import pytest

from hypergeo_heat import even_case, heat, transform
from hypergeo_heat.hypergeo import delta_density
from hypergeo_heat.quadrature import (GridFunction, Symmetry, TestFunction, gaussian_radii,
                                      resolved_nodes, weyl_grid)
from hypergeo_heat.rootsys import build_root_system, multiplicity, rho, weyl_group

A1 = build_root_system("A1")
A2 = build_root_system("A2")


def _setup(rs, mv, width=1.0):
    m = multiplicity(rs, mv)
    xr, lr = gaussian_radii(rs, rho(rs, m), width, 1e-12)
    if rs.rank == 1:
        n = resolved_nodes(xr, lr)
        xg, lg = weyl_grid(rs, n, xr), weyl_grid(rs, n, lr, space="a*")
    else:
        xg = weyl_grid(rs, 64, xr, n_angular=32)
        lg = weyl_grid(rs, 64, lr, space="a*", n_angular=32)
    f = TestFunction("gaussian", width).sample(xg, rs)
    return m, xg, lg, f


def _fock_setup(rs, mv, t, width=1.0):
    """Grids for complex-side integrals: the lambda grid resolves the whole ``X``-box."""
    m = multiplicity(rs, mv)
    xr, lr = gaussian_radii(rs, rho(rs, m), width, 1e-12)
    X, Y = heat.complex_grids(rs.rank, t, xr, lr)
    n = resolved_nodes(X.radius, lr)
    xg, lg = weyl_grid(rs, n, xr), weyl_grid(rs, n, lr, space="a*")
    return m, xg, lg, TestFunction("gaussian", width).sample(xg, rs), X, Y


def _gaussian_heat(z, t):
    # heat flow of exp(-x^2) in one variable
    return np.exp(-z ** 2 / (1 + 4 * t)) / np.sqrt(1 + 4 * t)


def test_parameters_and_weight():
    with pytest.raises(ValueError):
        heat.HeatParameters(0.0)
    with pytest.raises(ValueError):
        heat.HeatParameters(1.0, -1.0)
    w = heat.FockWeight(0.5, 1)
    Y = np.linspace(-3, 3, 7)[:, None]
    assert np.all(w(None, Y) > 0)
    assert np.allclose(w(None, Y), np.exp(-Y[:, 0] ** 2) / np.sqrt(np.pi))
    m = multiplicity(A2, 2)
    hp = heat.HeatParameters.of(A2, m, 0.3)
    r = rho(A2, m)
    assert np.isclose(hp.multiplier(np.zeros(2))[0], np.exp(-0.3 * r @ r))


@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_euclidean_heat_closed_form(t):
    _, xg, lg, f = _setup(A1, 0.0)
    f_hat = transform.euclidean_fourier(f, lg)
    Z = np.array([[0.0], [0.7], [1.3 + 0.4j], [-0.5 - 1.1j]])
    assert np.allclose(heat.euclidean_heat(f_hat, Z, t), _gaussian_heat(Z[:, 0], t), atol=1e-12)
    # real points give a real solution
    assert np.abs(heat.euclidean_heat(f_hat, xg.nodes[:8], t).imag).max() < 1e-14


def test_scaled_extension_matches_direct():
    _, xg, lg, f = _setup(A1, 0.0)
    t = 0.4
    f_hat = transform.euclidean_fourier(f, lg)
    coeffs = transform.SPECTRAL_MEASURE(1) * lg.weights * f_hat.values
    X = np.array([[0.2], [-1.0]])
    Y = np.array([[0.0], [0.9], [-1.6]])
    U = heat.scaled_extension(coeffs, lg.nodes, X, Y, t)
    for j, y in enumerate(Y[:, 0]):
        direct = _gaussian_heat(X[:, 0] + 1j * y, t) * np.exp(-y ** 2 / (4 * t))
        assert np.allclose(U[:, j], direct, atol=1e-12)


@pytest.mark.parametrize("t", [0.1, 1.0])
def test_euclidean_segal_bargmann(t):
    _, xg, lg, f, x_grid, y_grid = _fock_setup(A1, 0.0, t)
    lhs, rhs = heat.euclidean_segal_bargmann_unitarity(f, t, lg, x_grid, y_grid)
    assert abs(rhs / lhs - 1) < 1e-10
    f2 = GridFunction(xg, 2 * f.values)
    lhs2, rhs2 = heat.euclidean_segal_bargmann_unitarity(f2, t, lg, x_grid, y_grid)
    assert np.isclose(lhs2, 4 * lhs, rtol=1e-14) and np.isclose(rhs2, 4 * rhs, rtol=1e-12)
    zero = GridFunction(xg, np.zeros(len(xg)))
    assert heat.euclidean_segal_bargmann_unitarity(zero, t, lg, x_grid, y_grid) == (0.0, 0.0)


def test_heat_flat_case_is_euclidean():
    m, xg, lg, f = _setup(A2, 0.0)
    Ff = transform.hypergeometric_fourier_grid(A2, m, f, lg)
    pts = np.array([[0.3, 0.1], [1.2, -0.4], [0.0, 0.9]])
    hyp = heat.heat_solution(A2, m, Ff, pts, 0.5)
    euc = heat.euclidean_heat(transform.euclidean_fourier(f, lg), pts, 0.5)
    assert np.abs(hyp - euc).max() < 1e-8
    # isotropic Gaussian: product of one-variable flows
    assert np.allclose(euc, _gaussian_heat(pts[:, 0], 0.5) * _gaussian_heat(pts[:, 1], 0.5), atol=1e-10)


@pytest.mark.parametrize("rs", [A1, A2])
def test_heat_complex_case_intertwines(rs):
    """``delta^{1/2} H_t f = e^{-t|rho|^2}`` times the flat flow of ``delta^{1/2} f``."""
    m, xg, lg, f = _setup(rs, 2.0)
    t = 0.3
    Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
    pts = xg.nodes[xg.chamber][:: max(1, len(xg.chamber) // 6)][:6]
    pts = pts[np.linalg.norm(pts, axis=1) < 3]
    lhs = even_case.delta_half(rs, pts) * heat.heat_solution(rs, m, Ff, pts, t)
    g = GridFunction(xg, even_case.delta_half(rs, xg.nodes) * f.values)
    r = rho(rs, m)
    rhs = np.exp(-t * r @ r) * heat.euclidean_heat(transform.euclidean_fourier(g, lg), pts, t)
    assert np.abs(lhs - rhs).max() < 1e-8 * np.abs(rhs).max()


def test_heat_semigroup_and_grid():
    m, xg, lg, f = _setup(A1, 2.0)
    assert heat.heat_multiplier_semigroup(A1, m, lg.nodes, 0.2, 0.3) <= 1e-12
    Ff = transform.hypergeometric_fourier_grid(A1, m, f, lg)
    u = heat.heat_on_grid(A1, m, Ff, xg, 0.2)
    assert u.symmetry is Symmetry.W_INVARIANT
    assert u.symmetry_defect(A1) < 1e-14
    dens = delta_density(A1, m, xg.nodes)
    assert u.norm_sq(dens) <= f.norm_sq(dens)


def test_image_membership():
    m = multiplicity(A1, 2.0)
    t = 0.1
    bx = weyl_grid(A1, 512, 2.0)
    bump = TestFunction("bump", 2.0).sample(bx, A1)
    # heat image of the bump, sampled on a box wide enough for the heat spread
    lg = weyl_grid(A1, resolved_nodes(7.0, 40.0), 40.0, space="a*")
    wide = weyl_grid(A1, len(lg), 7.0)
    u = heat.heat_on_grid(A1, m, transform.hypergeometric_fourier_grid(A1, m, bump, lg), wide, t)
    # undoing the flow on lambda <= 10 recovers the truncated norm of the bump transform
    small = weyl_grid(A1, resolved_nodes(7.0, 10.0), 10.0, space="a*")
    Fb = transform.hypergeometric_fourier_grid(A1, m, bump, small)
    expected = transform.SPECTRAL_MEASURE(1) * np.dot(
        small.weights, np.abs(Fb.values) ** 2 * transform.nu_density(A1, m, small.nodes)) / 4
    im = heat.image_membership(A1, m, u, t, small)
    assert not im.overflow
    assert abs(im.cond2 / expected - 1) < 1e-10
    assert np.isclose(im.cond1, u.norm_sq(delta_density(A1, m, wide.nodes)))
    zero = GridFunction(bx, np.zeros(len(bx)), Symmetry.W_INVARIANT)
    z = heat.image_membership(A1, m, zero, t, small)
    assert (z.cond1, z.cond2) == (0.0, 0.0)
    # the bump itself is not in the image: the truncated norm grows with the lambda radius
    conds = [heat.image_membership(A1, m, bump, 0.5, weyl_grid(A1, 128, R, space="a*"))
             for R in (10.0, 20.0, 40.0)]
    assert conds[0].cond2 < conds[1].cond2 < conds[2].cond2 or conds[2].overflow
    assert conds[2].cond2 > 1e6 * conds[0].cond2 or conds[2].overflow


@pytest.mark.parametrize("rs", [A1, A2])
def test_lambda_extension_restricts_to_delta_half_heat(rs):
    m, xg, lg, f = _setup(rs, 2.0)
    t = 0.3
    Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
    pts = np.array([[0.4] * rs.rank, [1.1] + [-0.3] * (rs.rank - 1)])
    ext = heat.lambda_extension(rs, m, Ff, pts, t)
    ref = even_case.delta_half(rs, pts) * heat.heat_solution(rs, m, Ff, pts, t)
    assert np.abs(ext - ref).max() < 1e-8


def test_lambda_extension_holomorphic_and_meromorphic():
    t = 0.5
    m, xg, lg, f, x_grid, y_grid = _fock_setup(A1, 2.0, t)
    Ff = transform.hypergeometric_fourier_grid(A1, m, f, lg)
    hg = heat.lambda_extension_grid(A1, m, Ff, t, x_grid, y_grid)
    assert hg.provenance is heat.Provenance.LAMBDA_EXTENSION
    assert hg.values.shape == (len(x_grid), len(y_grid))
    Z = np.array([[0.5 + 0.3j], [1.2 - 0.8j], [-0.7 + 1.5j]])
    assert hg.cauchy_riemann_residual(Z).max() < 1e-5
    # the closed form continuation times delta^{1/2} is the Lambda extension
    U = heat.meromorphic_heat_extension(A1, m, Ff, Z, t)
    assert np.allclose(even_case.delta_half(A1, Z) * U, heat.lambda_extension(A1, m, Ff, Z, t),
                       atol=1e-10)
    # sign-twisted symmetry under W
    for w, s in zip(weyl_group(A1).elements, weyl_group(A1).signs):
        assert np.allclose(heat.lambda_extension(A1, m, Ff, Z @ w.T, t),
                           s * heat.lambda_extension(A1, m, Ff, Z, t), atol=1e-12)
    with pytest.raises(ValueError):
        heat.meromorphic_heat_extension(A1, multiplicity(A1, 1), Ff, Z, t)


def test_fock_norm_flat_case_is_euclidean():
    t = 0.5
    m, xg, lg, f, x_grid, y_grid = _fock_setup(A1, 0.0, t)
    Ff = transform.hypergeometric_fourier_grid(A1, m, f, lg)
    hyp = heat.fock_norm(A1, m, Ff, t, x_grid, y_grid)
    _, euc = heat.euclidean_segal_bargmann_unitarity(f, t, lg, x_grid, y_grid)
    assert abs(hyp / euc - 1) < 1e-12


def test_hall_mitchell_identity_and_zero():
    t = 0.5
    m, xg, lg, f, x_grid, y_grid = _fock_setup(A1, 2.0, t)
    rep = heat.hall_mitchell_check(A1, m, f, t, lg, x_grid, y_grid)
    assert abs(rep.ratio - 1) < 1e-8
    assert rep.antisymmetry < 1e-12 and rep.meromorphic_defect < 1e-8
    zero = GridFunction(xg, np.zeros(len(xg)), Symmetry.W_INVARIANT)
    with np.errstate(invalid="ignore", divide="ignore"):
        z = heat.hall_mitchell_check(A1, m, zero, t, lg, x_grid, y_grid)
    assert z.lhs == 0 and z.rhs == 0
    with pytest.raises(ValueError):
        heat.hall_mitchell_check(A1, multiplicity(A1, 1), f, t, lg, x_grid, y_grid)
