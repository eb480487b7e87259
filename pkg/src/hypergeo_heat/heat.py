"""Heat propagators, Segal-Bargmann transforms and Fock norms.

Holomorphic extensions are computed spectrally: a function given by
``u(Z) = int A(lam) e^{-t|lam|^2} e^{i lam Z} dlam`` is evaluated at
``Z = X + iY`` in the rescaled form

    u(X + iY) e^{-|Y|^2/4t} = int A(lam) e^{-t|lam + Y/2t|^2} e^{i lam X} dlam,

which never overflows and is exactly the square root of the Gaussian factor
in the Fock weight.  Fock norms are then plain double quadratures over an
``X``-box and a ``Y``-box.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import even_case
from .hypergeo import delta_density
from .quadrature import GridFunction, QuadratureGrid, Symmetry, box_grid, resolved_nodes
from .rootsys import MultiplicityFunction, RootSystem, rho, weyl_group
from .transform import (SPECTRAL_MEASURE, _reduced, _scatter, euclidean_fourier, inv_c,
                        inverse_hypergeometric_fourier, nu_density, hypergeometric_fourier_grid)

EXP_LIMIT = 700.0


@dataclass(frozen=True)
class HeatParameters:
    t: float
    rho_norm_sq: float = 0.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("heat time must be positive")
        if self.rho_norm_sq < 0:
            raise ValueError("|rho|^2 must be non-negative")

    @classmethod
    def of(cls, rs: RootSystem, m: MultiplicityFunction, t: float) -> "HeatParameters":
        r = rho(rs, m)
        return cls(float(t), float(r @ r))

    def multiplier(self, lams) -> np.ndarray:
        lams = np.atleast_2d(np.asarray(lams, dtype=float))
        return np.exp(-self.t * ((lams ** 2).sum(axis=1) + self.rho_norm_sq))


@dataclass(frozen=True)
class FockWeight:
    """``(2 pi t)^{-r/2} exp(2 t |rho|^2 - |Y|^2 / 2t)``."""

    t: float
    rank: int
    rho_norm_sq: float = 0.0

    def __call__(self, X, Y) -> np.ndarray:
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        return (2 * np.pi * self.t) ** (-self.rank / 2) * np.exp(
            2 * self.t * self.rho_norm_sq - (Y ** 2).sum(axis=1) / (2 * self.t))

    def y_radius(self, lam_radius: float, sigmas: float = 8.0) -> float:
        """``Y``-box radius capturing the Gaussian mass of every spectral component.

        The ``Y``-profile of the frequency ``lam`` is a Gaussian centred at
        ``-2 t lam`` with standard deviation ``sqrt(t)``.
        """
        return 2 * self.t * lam_radius + sigmas * np.sqrt(self.t)


class Provenance(str, enum.Enum):
    EUCLIDEAN_SB = "euclidean_SB"
    LAMBDA_EXTENSION = "lambda_extension"
    DIRECT_A_OMEGA = "direct_A_Omega"


@dataclass
class HolomorphicGridFunction:
    """Samples of a holomorphic function on an ``X``-grid times a ``Y``-grid.

    ``values[i, j]`` is the value at ``X_i + i Y_j``; ``evaluator`` maps
    complex points ``(N, r)`` to values and is used for derivative checks.
    """

    x_grid: QuadratureGrid
    y_grid: QuadratureGrid
    values: np.ndarray
    provenance: Provenance
    evaluator: Callable | None = None
    meta: dict = field(default_factory=dict)

    def cauchy_riemann_residual(self, points, h: float = 1e-3) -> np.ndarray:
        """``max_j |d/dX_j f + i d/dY_j f| / max(|f|, tiny)`` at complex points."""
        if self.evaluator is None:
            raise ValueError("no evaluator attached")
        Z = np.atleast_2d(np.asarray(points, dtype=complex))
        f = self.evaluator
        base = np.abs(f(Z))
        worst = np.zeros(len(Z))
        for j in range(Z.shape[1]):
            e = np.zeros(Z.shape[1])
            e[j] = 1.0
            dx = (-f(Z + 2 * h * e) + 8 * f(Z + h * e) - 8 * f(Z - h * e) + f(Z - 2 * h * e)) / (12 * h)
            ie = 1j * e
            dy = (-f(Z + 2 * h * ie) + 8 * f(Z + h * ie) - 8 * f(Z - h * ie) + f(Z - 2 * h * ie)) / (12 * h)
            worst = np.maximum(worst, np.abs(dx + 1j * dy))
        return worst / np.maximum(base, 1e-300)

    def rows(self):
        """``(X..., Y..., re, im, weight)`` rows for CSV output."""
        for i, (x, wx) in enumerate(zip(self.x_grid.nodes, self.x_grid.weights)):
            for j, (y, wy) in enumerate(zip(self.y_grid.nodes, self.y_grid.weights)):
                v = self.values[i, j]
                yield [*x, *y, v.real, v.imag, wx * wy]


# ---------------------------------------------------------------------------
# Euclidean heat flow


def euclidean_heat(f_hat: GridFunction, Z, t: float) -> np.ndarray:
    """``int e^{-t|lam|^2} f_hat(lam) e^{i lam Z} dlam`` at complex points ``Z``."""
    if not t > 0:
        raise ValueError("heat time must be positive")
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    lam = f_hat.grid.nodes
    coeffs = SPECTRAL_MEASURE(f_hat.grid.rank) * f_hat.grid.weights * f_hat.values \
        * np.exp(-t * (lam ** 2).sum(axis=1))
    return np.exp(1j * Z @ lam.T) @ coeffs


def scaled_extension(coeffs, lams, X, Y, t: float) -> np.ndarray:
    """``u(X + iY) e^{-|Y|^2/4t}`` for ``u = sum coeffs e^{-t|lam|^2} e^{i lam Z}``.

    Returns the ``(len(X), len(Y))`` matrix; see the module docstring.
    """
    lams = np.atleast_2d(lams)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    EX = np.exp(1j * X @ lams.T) * coeffs  # (Nx, L)
    out = np.empty((len(X), len(Y)), dtype=complex)
    step = max(1, (1 << 20) // max(1, len(lams)))
    for s in range(0, len(Y), step):
        shift = lams[None, :, :] + Y[s:s + step, None, :] / (2 * t)
        G = np.exp(-t * (shift ** 2).sum(axis=2))  # (ny, L)
        out[:, s:s + step] = EX @ G.T
    return out


def _fock_quadrature(coeffs, lams, x_grid, y_grid, t, rho_norm_sq, rank):
    """``int int |u(X+iY)|^2 omega_t dX dY`` with ``u`` given by its coefficients."""
    U = scaled_extension(coeffs, lams, x_grid.nodes, y_grid.nodes, t)
    # |U|^2 already carries e^{-|Y|^2/2t}
    dens = np.abs(U) ** 2
    total = x_grid.weights @ dens @ y_grid.weights
    return float(total * (2 * np.pi * t) ** (-rank / 2) * np.exp(2 * t * rho_norm_sq)), U


def complex_radii(t: float, x_radius: float, lam_radius: float) -> tuple[float, float]:
    """``X``- and ``Y``-box radii for Fock integrals.

    The ``X``-box widens the support by the heat spread ``8 sqrt(2t)``; the
    ``Y``-box follows :meth:`FockWeight.y_radius`.
    """
    return x_radius + 8 * np.sqrt(2 * t), FockWeight(t, 1).y_radius(lam_radius)


def complex_grids(rank: int, t: float, x_radius: float, lam_radius: float,
                  n_x: int | None = None, n_y: int | None = None,
                  scheme: str = "gauss_legendre") -> tuple[QuadratureGrid, QuadratureGrid]:
    """``X``- and ``Y``-grids; node counts default to resolving the integrand.

    ``X``: the frequencies up to ``lam_radius`` across the box; ``Y``: the
    Gaussian profiles of width ``sqrt(t)``.
    """
    xr, yr = complex_radii(t, x_radius, lam_radius)
    if n_x is None:
        n_x = resolved_nodes(xr, lam_radius)
    if n_y is None:
        n_y = resolved_nodes(yr, 1.0 / np.sqrt(t), factor=4.0, minimum=32)
    return box_grid(rank, n_x, xr, scheme), box_grid(rank, n_y, yr, scheme)


def euclidean_segal_bargmann_unitarity(f: GridFunction, t: float, lam_grid: QuadratureGrid,
                                       x_grid: QuadratureGrid, y_grid: QuadratureGrid
                                       ) -> tuple[float, float]:
    """``(||f||^2, int int |H_t f(X+iY)|^2 omega_t dX dY)``."""
    if not t > 0:
        raise ValueError("heat time must be positive")
    lhs = f.norm_sq()
    f_hat = euclidean_fourier(f, lam_grid)
    coeffs = SPECTRAL_MEASURE(f.grid.rank) * lam_grid.weights * f_hat.values
    rhs, _ = _fock_quadrature(coeffs, lam_grid.nodes, x_grid, y_grid, t, 0.0, f.grid.rank)
    return lhs, rhs


# ---------------------------------------------------------------------------
# hypergeometric heat flow


def heat_solution(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction, a,
                  t: float) -> np.ndarray:
    """``H_t(m; f)`` at points of ``A(Omega)`` from the transform ``Ff``."""
    hp = HeatParameters.of(rs, m, t)
    return inverse_hypergeometric_fourier(rs, m, Ff, a, multiplier=hp.multiplier)


def heat_on_grid(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction,
                 grid: QuadratureGrid, t: float) -> GridFunction:
    """``H_t(m; f)`` sampled on a W-symmetric grid of ``A``.

    For ``m = 2`` nodes with ``|delta^{1/2}| >= 1`` use ``Lambda H_t f / delta^{1/2}``:
    the exponential sum has no growing factor, so ``H_t f * delta`` keeps a
    relative rather than an absolute error far from the origin.
    """
    idx, _ = _reduced(grid, True)
    H = grid.nodes[idx]
    vals = np.empty(len(H), dtype=complex)
    far = np.zeros(len(H), dtype=bool)
    if m.is_geometric_complex:
        dh = even_case.delta_half(rs, H)
        far = np.abs(dh) >= 1.0
        if far.any():
            vals[far] = lambda_extension(rs, m, Ff, H[far], t) / dh[far]
    if (~far).any():
        vals[~far] = heat_solution(rs, m, Ff, H[~far], t)
    return GridFunction(grid, _scatter(grid, vals, idx), Symmetry.W_INVARIANT, {"t": t})


def heat_multiplier_semigroup(rs: RootSystem, m: MultiplicityFunction, lams, t: float,
                              s: float) -> float:
    """``max |e_t e_s - e_{t+s}|`` for the heat multipliers on ``lams``."""
    a = HeatParameters.of(rs, m, t).multiplier(lams)
    b = HeatParameters.of(rs, m, s).multiplier(lams)
    c = HeatParameters.of(rs, m, t + s).multiplier(lams)
    return float(np.abs(a * b - c).max())


@dataclass
class ImageMembership:
    cond1: float
    cond2: float
    overflow: bool
    lam_radius: float


def image_membership(rs: RootSystem, m: MultiplicityFunction, F: GridFunction, t: float,
                     lam_grid: QuadratureGrid) -> ImageMembership:
    """Both conditions of the image characterisation, truncated to ``lam_grid``.

    ``cond1 = ||F||^2_{L2(delta dx)}``;
    ``cond2 = ||(1/|W|) e^{t(|lam|^2 + |rho|^2)} F(m; F)||^2_{L2(dnu)}``.
    Exponents beyond the double range set ``overflow``.
    """
    hp = HeatParameters.of(rs, m, t)
    cond1 = F.norm_sq(delta_density(rs, m, F.grid.nodes))
    FF = hypergeometric_fourier_grid(rs, m, F, lam_grid)
    expo = t * ((lam_grid.nodes ** 2).sum(axis=1) + hp.rho_norm_sq)
    overflow = bool(np.any(2 * expo > EXP_LIMIT))
    with np.errstate(over="ignore", invalid="ignore"):
        g = np.exp(np.minimum(expo, EXP_LIMIT / 2)) * FF.values
        nW = len(weyl_group(rs))
        cond2 = SPECTRAL_MEASURE(rs.rank) * float(
            np.dot(lam_grid.weights, np.abs(g) ** 2 * nu_density(rs, m, lam_grid.nodes))) / nW ** 2
    if not np.isfinite(cond2):
        overflow = True
    return ImageMembership(float(cond1), float(cond2), overflow, float(lam_grid.radius))


def _lambda_coeffs(rs, m, Ff, t):
    hp = HeatParameters.of(rs, m, t)
    lam = Ff.grid.nodes
    nW = len(weyl_group(rs))
    return (SPECTRAL_MEASURE(rs.rank) * Ff.grid.weights * Ff.values * inv_c(rs, m, -1j * lam)
            * np.exp(-t * hp.rho_norm_sq) / nW)


def lambda_extension(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction, Z,
                     t: float) -> np.ndarray:
    """``Lambda F(Z) = (1/|W|) int e^{-t(|lam|^2+|rho|^2)} F(m;f)(lam) / c(m;-i lam) e^{i lam Z} dlam``."""
    if not t > 0:
        raise ValueError("heat time must be positive")
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    lam = Ff.grid.nodes
    coeffs = _lambda_coeffs(rs, m, Ff, t) * np.exp(-t * (lam ** 2).sum(axis=1))
    return np.exp(1j * Z @ lam.T) @ coeffs


def lambda_extension_grid(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction, t: float,
                          x_grid: QuadratureGrid, y_grid: QuadratureGrid) -> HolomorphicGridFunction:
    """``Lambda F`` on ``x_grid + i y_grid``, stored as ``Lambda F(Z) e^{-|Y|^2/4t}``."""
    coeffs = _lambda_coeffs(rs, m, Ff, t)
    U = scaled_extension(coeffs, Ff.grid.nodes, x_grid.nodes, y_grid.nodes, t)
    return HolomorphicGridFunction(
        x_grid, y_grid, U, Provenance.LAMBDA_EXTENSION,
        evaluator=lambda Z: lambda_extension(rs, m, Ff, Z, t),
        meta={"scaled_by": "exp(-|Y|^2/4t)", "t": t})


def fock_norm(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction, t: float,
              x_grid: QuadratureGrid, y_grid: QuadratureGrid) -> float:
    """``int int |Lambda F(X+iY)|^2 omega_t(m; X+iY) dX dY`` by double quadrature."""
    if not t > 0:
        raise ValueError("heat time must be positive")
    hp = HeatParameters.of(rs, m, t)
    coeffs = _lambda_coeffs(rs, m, Ff, t)
    val, _ = _fock_quadrature(coeffs, Ff.grid.nodes, x_grid, y_grid, t, hp.rho_norm_sq, rs.rank)
    return val


def meromorphic_heat_extension(rs: RootSystem, m: MultiplicityFunction, Ff: GridFunction, Z,
                               t: float) -> np.ndarray:
    """Continuation ``U(Z)`` of the heat solution for ``m = 2`` through the closed form of ``phi``.

    Defined off the zero set of ``delta^{1/2}``; no ``A(Omega)`` restriction.
    """
    if not m.is_geometric_complex:
        raise ValueError("the meromorphic continuation is implemented for m = 2")
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    hp = HeatParameters.of(rs, m, t)
    lam = Ff.grid.nodes
    nW = len(weyl_group(rs))
    coeffs = (SPECTRAL_MEASURE(rs.rank) * Ff.grid.weights * Ff.values * hp.multiplier(lam)
              * nu_density(rs, m, lam) / nW ** 2)
    return coeffs @ even_case.phi_complex(rs, m, 1j * lam, Z)


@dataclass
class HallMitchellReport:
    lhs: float
    rhs: float
    antisymmetry: float
    meromorphic_defect: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else float("nan")


def hall_mitchell_check(rs: RootSystem, m: MultiplicityFunction, f: GridFunction, t: float,
                        lam_grid: QuadratureGrid, x_grid: QuadratureGrid,
                        y_grid: QuadratureGrid, samples=None) -> HallMitchellReport:
    """Norm identity for ``delta^{1/2} U`` in the complex case.

    ``lhs = ||f||^2_{L2(delta dx)}``; ``rhs`` is the Gaussian-weighted
    double integral of ``|delta^{1/2} U|^2`` with ``delta^{1/2} U`` computed
    as ``Lambda F``.  Also reports the sign-twisted W-symmetry defect of
    ``Lambda F`` and the defect of ``delta^{1/2}(Z) U(Z) = Lambda F(Z)`` with
    ``U`` from the closed form, both relative to ``max |Lambda F|`` over the
    sample points.
    """
    if not m.is_geometric_complex:
        raise ValueError("the identity concerns m = 2")
    lhs = f.norm_sq(delta_density(rs, m, f.grid.nodes))
    Ff = hypergeometric_fourier_grid(rs, m, f, lam_grid)
    rhs = fock_norm(rs, m, Ff, t, x_grid, y_grid)
    if samples is None:
        rng = np.random.default_rng(0)
        samples = rng.uniform(-1.5, 1.5, (12, rs.rank)) + 1j * rng.uniform(-1.5, 1.5, (12, rs.rank))
    Z = np.atleast_2d(np.asarray(samples, dtype=complex))
    lam_vals = lambda_extension(rs, m, Ff, Z, t)
    scale = np.abs(lam_vals).max()
    W = weyl_group(rs)
    anti = 0.0
    for w, sg in zip(W.elements, W.signs):
        anti = max(anti, float(np.abs(lambda_extension(rs, m, Ff, Z @ w.T, t) - sg * lam_vals).max()))
    U = meromorphic_heat_extension(rs, m, Ff, Z, t)
    mero = float(np.abs(even_case.delta_half(rs, Z) * U - lam_vals).max())
    return HallMitchellReport(float(lhs), float(rhs), anti / scale, mero / scale)
