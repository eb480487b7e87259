"""Euclidean and hypergeometric Fourier transforms on quadrature grids.

Normalisation: ``da`` is Lebesgue measure on ``a`` and the spectral
measure is ``dlam = (2 pi)^{-r}`` times Lebesgue measure, so that the flat
transform ``F_A f(lam) = int f(x) e^{-i lam x} dx`` is unitary.  The
hypergeometric Plancherel measure is ``dnu = |c(i lam)|^{-2} dlam`` and
``(1/|W|) F(m)`` is unitary from ``L^2(A, delta dx)^W``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import even_case
from .errors import DomainError, InsufficientDecay
from .hypergeo import (apply_L_grid, c_values, delta_density, inv_c_values, jacobi_phi,
                       phi_series_values)
from .quadrature import (GridFunction, QuadratureGrid, Symmetry, TestFunction, boundary_ratio,
                         node_permutation)
from .rootsys import MultiplicityFunction, RootSystem, in_omega, rho, weyl_group

DECAY_TOL = 1e-10
CHUNK = 1 << 18  # kernel entries per block; phi_complex holds |W| copies
JACOBI_BELOW = 0.5  # rank one: Gauss function closer than this to the wall


def SPECTRAL_MEASURE(rank: int) -> float:
    """Density of ``dlam`` with respect to Lebesgue measure."""
    return (2.0 * np.pi) ** (-rank)


# ---------------------------------------------------------------------------
# kernels


def phi_kernel(rs: RootSystem, m: MultiplicityFunction, lams, H) -> np.ndarray:
    """``phi_lam(exp H)`` for spectral rows ``lams`` ``(P, r)`` and points ``H`` ``(Q, r)``.

    Dispatches to the flat formula (``m = 0``), the closed form (``m = 2``,
    reduced), or the series; in rank one points near the wall use the Gauss
    function.  Returns ``(P, Q)``.
    """
    lams = np.atleast_2d(np.asarray(lams, dtype=complex))
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if m.is_zero:
        return even_case.phi_flat(rs, lams, H)
    if m.is_geometric_complex:
        return even_case.phi_complex(rs, m, lams, H)
    W = weyl_group(rs)
    # move real parts into the chamber; phi is W-invariant
    Hc = np.empty_like(H)
    for q, h in enumerate(H):
        best = max(W.elements, key=lambda w: float(np.min(rs.simple_roots @ (w @ h.real))))
        Hc[q] = best @ h
    margin = (Hc.real @ rs.simple_roots.T).min(axis=1)
    far = margin >= JACOBI_BELOW
    if rs.rank != 1 and not np.all(far):
        raise DomainError("general multiplicities in rank two need points away from the walls")
    out = np.empty((len(lams), len(H)), dtype=complex)
    for p, lam in enumerate(lams):
        if np.any(far):
            out[p, far] = _series_or_perturbed(rs, m, lam, Hc[far])
        if np.any(~far):
            out[p, ~far] = jacobi_phi(rs, m, lam, Hc[~far])
    return out


def _series_or_perturbed(rs, m, lam, H):
    from .hypergeo import _phi_at
    return _phi_at(rs, m, lam, H, "series")


def inv_c(rs: RootSystem, m: MultiplicityFunction, lams) -> np.ndarray:
    """``1/c(m; lam)`` with the polynomial form for even multiplicities."""
    lams = np.atleast_2d(np.asarray(lams, dtype=complex))
    if m.is_even:
        return np.asarray(even_case.inv_c_polynomial(rs, m, lams))
    return inv_c_values(rs, m, lams)


def nu_density(rs: RootSystem, m: MultiplicityFunction, lams) -> np.ndarray:
    """``|c(i lam)|^{-2}`` at real spectral nodes."""
    return np.abs(inv_c(rs, m, 1j * np.atleast_2d(np.asarray(lams, dtype=float)))) ** 2


def _check_decay(gf: GridFunction, density=None, what: str = "function") -> None:
    if boundary_ratio(gf, density) > DECAY_TOL:
        raise InsufficientDecay(f"{what} does not decay below {DECAY_TOL:g} at the grid boundary")


def _reduced(grid: QuadratureGrid, invariant: bool):
    """Nodes and weights to sum over, using the chamber when allowed."""
    if invariant and grid.reducible:
        nw = grid.orbits.shape[0]
        idx = grid.chamber
        return idx, grid.weights[idx] * nw
    idx = np.arange(len(grid))
    return idx, grid.weights


def _scatter(grid: QuadratureGrid, chamber_values: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Expand values computed on ``idx`` to the whole grid by W-invariance."""
    if len(idx) == len(grid):
        return chamber_values
    out = np.empty(len(grid), dtype=complex)
    for row in grid.orbits:
        out[row] = chamber_values
    return out


def _kernel_sum(rs, m, lams, H, coeffs, sign: complex) -> np.ndarray:
    """``sum_q coeffs[q] phi_{sign lam}(H_q)`` for every row of ``lams``, chunked."""
    out = np.empty(len(lams), dtype=complex)
    step = max(1, CHUNK // max(1, len(H)))
    for s in range(0, len(lams), step):
        K = phi_kernel(rs, m, sign * lams[s:s + step], H)
        out[s:s + step] = K @ coeffs
    return out


def _points(rs, a) -> np.ndarray:
    from .hypergeo import TorusPoint
    if isinstance(a, TorusPoint):
        return a.H[None, :]
    if isinstance(a, (list, tuple)) and a and isinstance(a[0], TorusPoint):
        return np.array([p.H for p in a])
    return np.atleast_2d(np.asarray(a, dtype=complex))


# ---------------------------------------------------------------------------
# Euclidean transform


def euclidean_fourier(f: GridFunction, lam_grid: QuadratureGrid) -> GridFunction:
    """``F_A f(lam) = int f(x) e^{-i lam x} dx`` at the nodes of ``lam_grid``."""
    _check_decay(f)
    coeffs = f.grid.weights * f.values
    vals = _exp_sum(-1j * lam_grid.nodes, f.grid.nodes, coeffs)
    return GridFunction(lam_grid, vals, f.symmetry, {"transform": "euclidean"})


def inverse_euclidean_fourier(F: GridFunction, points) -> np.ndarray:
    """``int F(lam) e^{i lam Z} dlam`` at points ``Z`` (complex allowed)."""
    Z = np.atleast_2d(np.asarray(points, dtype=complex))
    coeffs = SPECTRAL_MEASURE(F.grid.rank) * F.grid.weights * F.values
    return _exp_sum(1j * Z, F.grid.nodes, coeffs)


def _exp_sum(A, B, coeffs) -> np.ndarray:
    """``sum_j coeffs[j] exp(A_i . B_j)`` for every row of ``A``, in blocks."""
    out = np.empty(len(A), dtype=complex)
    step = max(1, 4 * CHUNK // max(1, len(B)))
    for s in range(0, len(A), step):
        out[s:s + step] = np.exp(A[s:s + step] @ B.T) @ coeffs
    return out


# ---------------------------------------------------------------------------
# hypergeometric transform


def hypergeometric_fourier_grid(rs: RootSystem, m: MultiplicityFunction, f: GridFunction,
                                lam_grid: QuadratureGrid) -> GridFunction:
    """``F(m; f)(lam) = int f(a) phi_{-i lam}(a) delta(a) da`` on a spectral grid."""
    if f.symmetry is not Symmetry.W_INVARIANT:
        raise ValueError("the hypergeometric transform needs a W-invariant function")
    dens = delta_density(rs, m, f.grid.nodes)
    _check_decay(f, dens)
    xi, xw = _reduced(f.grid, True)
    coeffs = xw * f.values[xi] * dens[xi]
    li, _ = _reduced(lam_grid, True)
    vals = _kernel_sum(rs, m, lam_grid.nodes[li], f.grid.nodes[xi], coeffs, -1j)
    return GridFunction(lam_grid, _scatter(lam_grid, vals, li), Symmetry.W_INVARIANT,
                        {"transform": "hypergeometric"})


def hypergeometric_fourier(rs: RootSystem, m: MultiplicityFunction, f: GridFunction,
                           lam) -> complex:
    """``F(m; f)`` at one real spectral point."""
    if f.symmetry is not Symmetry.W_INVARIANT:
        raise ValueError("the hypergeometric transform needs a W-invariant function")
    dens = delta_density(rs, m, f.grid.nodes)
    _check_decay(f, dens)
    xi, xw = _reduced(f.grid, True)
    coeffs = xw * f.values[xi] * dens[xi]
    lam = np.asarray(lam, dtype=float).reshape(1, -1)
    return complex(_kernel_sum(rs, m, lam, f.grid.nodes[xi], coeffs, -1j)[0])


def inverse_hypergeometric_fourier(rs: RootSystem, m: MultiplicityFunction, F: GridFunction,
                                   a, multiplier: Callable | None = None) -> np.ndarray:
    """``(1/|W|^2) int F(lam) phi_{i lam}(a) dnu(lam)`` at points of ``A(Omega)``.

    ``multiplier`` (a function of the spectral nodes) is applied to ``F``
    first; the heat propagator uses it.
    """
    H = _points(rs, a)
    if not np.all(in_omega(rs, H.imag)):
        raise DomainError("evaluation points must lie in A(Omega)")
    nW = len(weyl_group(rs))
    nu = nu_density(rs, m, F.grid.nodes)
    vals = F.values if multiplier is None else F.values * multiplier(F.grid.nodes)
    _check_decay(GridFunction(F.grid, vals), nu, "spectral function")
    invariant = F.symmetry is Symmetry.W_INVARIANT
    li, lw = _reduced(F.grid, invariant)
    coeffs = SPECTRAL_MEASURE(rs.rank) * lw * vals[li] * nu[li] / nW ** 2
    out = np.empty(len(H), dtype=complex)
    step = max(1, CHUNK // max(1, len(li)))
    for s in range(0, len(H), step):
        K = phi_kernel(rs, m, 1j * F.grid.nodes[li], H[s:s + step])
        out[s:s + step] = coeffs @ K
    return out


def inverse_on_grid(rs: RootSystem, m: MultiplicityFunction, F: GridFunction,
                    grid: QuadratureGrid, multiplier: Callable | None = None) -> GridFunction:
    """Inverse transform sampled on a W-symmetric grid of ``A``."""
    idx, _ = _reduced(grid, True)
    vals = inverse_hypergeometric_fourier(rs, m, F, grid.nodes[idx], multiplier)
    return GridFunction(grid, _scatter(grid, vals, idx), Symmetry.W_INVARIANT)


def plancherel_check(rs: RootSystem, m: MultiplicityFunction, f: GridFunction,
                     lam_grid: QuadratureGrid, Ff: GridFunction | None = None) -> tuple[float, float]:
    """``(||f||^2_{L2(delta dx)}, ||(1/|W|) F(m; f)||^2_{L2(dnu)})``."""
    lhs = f.norm_sq(delta_density(rs, m, f.grid.nodes))
    if Ff is None:
        Ff = hypergeometric_fourier_grid(rs, m, f, lam_grid)
    nW = len(weyl_group(rs))
    rhs = SPECTRAL_MEASURE(rs.rank) * Ff.norm_sq(nu_density(rs, m, lam_grid.nodes)) / nW ** 2
    return lhs, rhs


def symbol_laplace_check(rs: RootSystem, m: MultiplicityFunction, f: TestFunction | Callable,
                         x_grid: QuadratureGrid, lams, step: float = 1e-2) -> tuple[np.ndarray, float]:
    """Residuals ``|F(L f)(lam) + (|lam|^2 + |rho|^2) F f(lam)|`` and ``||f||_{L1(delta)}``.

    ``L(m) f`` is computed by Richardson-extrapolated finite differences at
    the grid nodes.
    """
    fn = f.as_callable(rs) if isinstance(f, TestFunction) else f
    fv = GridFunction(x_grid, fn(x_grid.nodes), Symmetry.W_INVARIANT)
    Lf = GridFunction(x_grid, apply_L_grid(rs, m, fn, x_grid.nodes, step), Symmetry.W_INVARIANT)
    lams = np.atleast_2d(np.asarray(lams, dtype=float))
    r = rho(rs, m)
    out = np.empty(len(lams))
    for p, lam in enumerate(lams):
        a = hypergeometric_fourier(rs, m, Lf, lam)
        b = hypergeometric_fourier(rs, m, fv, lam)
        out[p] = abs(a + (lam @ lam + r @ r) * b)
    norm1 = fv.norm1(delta_density(rs, m, x_grid.nodes))
    return out, norm1


# ---------------------------------------------------------------------------
# Abel transform, tau-action and Lambda


def abel_transform(rs: RootSystem, m: MultiplicityFunction, f: GridFunction,
                   lam_grid: QuadratureGrid, points=None,
                   Ff: GridFunction | None = None) -> GridFunction | np.ndarray:
    """``A f = F_A^{-1} F(m; f)``: ``int F(m; f)(lam) e^{i lam x} dlam``.

    Returns a :class:`GridFunction` on ``f.grid`` unless ``points`` is given.
    """
    if Ff is None:
        Ff = hypergeometric_fourier_grid(rs, m, f, lam_grid)
    if points is not None:
        return inverse_euclidean_fourier(Ff, points)
    vals = inverse_euclidean_fourier(Ff, f.grid.nodes)
    return GridFunction(f.grid, vals, Symmetry.W_INVARIANT, {"transform": "abel"})


def c_cocycle(rs: RootSystem, m: MultiplicityFunction, s: int, lams) -> np.ndarray:
    """``c_{s,e}(m; lam) = c(m; s^{-1} i lam) / c(m; i lam)`` at real nodes."""
    W = weyl_group(rs)
    lams = np.atleast_2d(np.asarray(lams, dtype=float))
    sl = lams @ W.elements[s]  # rows are s^{-1} lam
    if m.is_even:
        return inv_c(rs, m, 1j * lams) / inv_c(rs, m, 1j * sl)
    return inv_c_values(rs, m, 1j * lams) * c_values(rs, m, 1j * sl)


def tau_action(rs: RootSystem, m: MultiplicityFunction, s: int, F: GridFunction) -> GridFunction:
    """``(tau_s F)(lam) = c_{s,e}(m; lam) F(s^{-1} lam)`` on a W-symmetric grid."""
    W = weyl_group(rs)
    perm = node_permutation(F.grid, W.elements[W.inverse(s)])
    vals = c_cocycle(rs, m, s, F.grid.nodes) * F.values[perm]
    return GridFunction(F.grid, vals, Symmetry.NONE, {"tau": s})


def lambda_map(rs: RootSystem, m: MultiplicityFunction, f: GridFunction,
               lam_grid: QuadratureGrid, points=None,
               Ff: GridFunction | None = None) -> GridFunction | np.ndarray:
    """``Lambda f = (1/|W|) int F(m; f)(lam) / c(m; -i lam) e^{i lam x} dlam``."""
    if Ff is None:
        Ff = hypergeometric_fourier_grid(rs, m, f, lam_grid)
    nW = len(weyl_group(rs))
    G = GridFunction(lam_grid, Ff.values * inv_c(rs, m, -1j * lam_grid.nodes) / nW)
    if points is not None:
        return inverse_euclidean_fourier(G, points)
    if m.is_geometric_complex and f.grid.reducible:
        # tau(W) acts by the sign character: compute on the chamber only
        W = weyl_group(rs)
        idx = f.grid.chamber
        vc = inverse_euclidean_fourier(G, f.grid.nodes[idx])
        vals = np.empty(len(f.grid), dtype=complex)
        for k, row in enumerate(f.grid.orbits):
            vals[row] = W.signs[k] * vc
    else:
        vals = inverse_euclidean_fourier(G, f.grid.nodes)
    return GridFunction(f.grid, vals, Symmetry.TAU_W_INVARIANT, {"transform": "lambda"})


@dataclass(frozen=True)
class SpectralMultiplier:
    """A Fourier multiplier given by its symbol on ``a*``."""

    symbol: Callable[[np.ndarray], np.ndarray]
    name: str

    def __call__(self, lams) -> np.ndarray:
        vals = np.asarray(self.symbol(np.atleast_2d(np.asarray(lams, dtype=float))))
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"multiplier {self.name!r} is not finite on the grid")
        return vals

    def apply(self, F: GridFunction) -> GridFunction:
        return GridFunction(F.grid, self(F.grid.nodes) * F.values, F.symmetry,
                            {**F.meta, "multiplier": self.name})

    @staticmethod
    def heat(rs: RootSystem, m: MultiplicityFunction, t: float) -> "SpectralMultiplier":
        r2 = float(rho(rs, m) @ rho(rs, m))
        return SpectralMultiplier(lambda l: np.exp(-t * ((l * l).sum(axis=1) + r2)), "heat")

    @staticmethod
    def inverse_c(rs: RootSystem, m: MultiplicityFunction) -> "SpectralMultiplier":
        return SpectralMultiplier(lambda l: inv_c(rs, m, -1j * l), "inv_c")

    @staticmethod
    def exp_growth(rs: RootSystem, m: MultiplicityFunction, t: float) -> "SpectralMultiplier":
        r2 = float(rho(rs, m) @ rho(rs, m))
        return SpectralMultiplier(lambda l: np.exp(t * ((l * l).sum(axis=1) + r2)), "exp_growth")


def decay_profile(F: GridFunction) -> tuple[np.ndarray, np.ndarray]:
    """``(|lam|, max |F|)`` on radial shells, for decay-rate checks."""
    rad = np.linalg.norm(F.grid.nodes, axis=1)
    order = np.argsort(rad)
    r, v = rad[order], np.abs(F.values[order])
    # running maximum from the outside in
    tail = np.maximum.accumulate(v[::-1])[::-1]
    return r, tail
