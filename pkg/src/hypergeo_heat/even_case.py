"""Even multiplicities and the complex case ``m = 2``.

For reduced root systems with even multiplicities ``1/c`` is a polynomial
and the multiplier ``1/c(m; -i .)`` becomes a constant coefficient
differential operator.  When every multiplicity equals 2 the hypergeometric
function has the closed form

    phi_lam(a) = c(lam) * Alt(lam, a) / delta^{1/2}(a),
    Alt(lam, a) = sum_w sign(w) a^{w lam},

which this module evaluates stably (including the removable singularities
on the walls).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .rootsys import MultiplicityFunction, RootSystem, coroot, rho, weyl_group

TAYLOR_RADIUS = 1.0
TAYLOR_TERMS = 22  # |z| < 1: truncation below 1/23!
SINGULAR_DIST = 1e-7
PERTURB_EPS = 1e-5


def _require_even(m: MultiplicityFunction) -> None:
    if not m.is_even:
        raise ValueError("needs a reduced root system with even multiplicities")


def _require_complex(m: MultiplicityFunction) -> None:
    if not m.is_geometric_complex:
        raise ValueError("needs a reduced root system with all multiplicities equal to 2")


def pi_poly(rs: RootSystem, lam) -> np.ndarray:
    """``pi(lam) = prod_{alpha > 0} (alpha, lam)`` (vectorised over rows)."""
    lam = np.asarray(lam, dtype=complex)
    return np.prod(lam @ rs.positive_roots.T, axis=-1)


def delta_half(rs: RootSystem, H) -> np.ndarray:
    """``prod_{alpha > 0} (a^alpha - a^-alpha)`` as an entire function of ``H``."""
    H = np.asarray(H, dtype=complex)
    return np.prod(2.0 * np.sinh(H @ rs.positive_roots.T), axis=-1)


# ---------------------------------------------------------------------------
# polynomial 1/c


def inv_c_polynomial(rs: RootSystem, m: MultiplicityFunction, lam) -> np.ndarray | complex:
    """``1/c(m; lam) = prod_alpha prod_{k < m_alpha/2} (lam_alpha + k)/(rho_alpha + k)``."""
    _require_even(m)
    lam = np.asarray(lam, dtype=complex)
    single = lam.ndim == 1
    lam = np.atleast_2d(lam)
    pos = rs.positive_roots
    norms = (pos * pos).sum(axis=1)
    la = lam @ pos.T / norms
    ra = pos @ rho(rs, m) / norms
    out = np.ones(len(lam), dtype=complex)
    for j, i in enumerate(rs.positive):
        for k in range(int(m.of(i)) // 2):
            out *= (la[:, j] + k) / (ra[j] + k)
    return complex(out[0]) if single else out


# ---------------------------------------------------------------------------
# constant coefficient operators


@dataclass(frozen=True)
class ExponentialPolynomialOperator:
    """``scalar * prod (-1/2 d(H_alpha) + k)``, optionally preceded by ``delta^{1/2}``.

    ``factors`` lists ``(alpha, k)`` pairs with ``alpha`` a root given by its
    coordinates.  Acting on ``a^lam`` each factor multiplies by
    ``k - lam_alpha``.
    """

    root_type: str
    factors: tuple[tuple[tuple[float, ...], int], ...]
    scalar: float
    delta_half_prefactor: bool = False
    scale: float = 1.0

    def symbol(self, lam) -> np.ndarray | complex:
        """Eigenvalue of the constant-coefficient part on ``a^lam``."""
        lam = np.asarray(lam, dtype=complex)
        single = lam.ndim == 1
        lam = np.atleast_2d(lam)
        out = np.full(len(lam), self.scalar, dtype=complex)
        for alpha, k in self.factors:
            al = np.asarray(alpha)
            out *= k - 0.5 * (lam @ coroot(al))
        return complex(out[0]) if single else out

    def _prefactor(self, H):
        if not self.delta_half_prefactor:
            return 1.0
        from .rootsys import build_root_system
        return delta_half(build_root_system(self.root_type, self.scale), H)

    def apply_exponential(self, lam, H) -> np.ndarray:
        """``(D a^lam)(H)`` at points ``H`` of shape ``(Q, r)``."""
        H = np.atleast_2d(np.asarray(H, dtype=complex))
        lam = np.asarray(lam, dtype=complex).reshape(-1)
        return self._prefactor(H) * self.symbol(lam) * np.exp(H @ lam)

    def apply_spectral(self, coeffs, lams, H) -> np.ndarray:
        """Apply to ``sum_j coeffs[j] a^{lams[j]}`` exactly, at points ``H``."""
        H = np.atleast_2d(np.asarray(H, dtype=complex))
        lams = np.atleast_2d(np.asarray(lams, dtype=complex))
        sym = np.asarray(self.symbol(lams)) * np.asarray(coeffs)
        out = np.exp(H @ lams.T) @ sym
        return self._prefactor(H) * out

    def apply(self, f: Callable, H, step: float = 1e-2,
              order: Sequence[int] | None = None) -> complex:
        """Apply to a black-box ``f`` (points ``(N, r)`` -> values) by nested differences.

        ``order`` permutes the factors; on smooth operands the result does
        not depend on it up to the differencing error.
        """
        H = np.asarray(H, dtype=complex).reshape(-1)
        idx = list(order) if order is not None else list(range(len(self.factors)))
        g = _as_batch(f)
        for j in idx:
            alpha, k = self.factors[j]
            g = _factor_fd(g, coroot(np.asarray(alpha)), k, step)
        val = self.scalar * g(H[None, :])[0]
        return complex(self._prefactor(H[None, :])[0] * val) if self.delta_half_prefactor \
            else complex(val)

    def to_dict(self) -> dict:
        return {
            "root_system": self.root_type,
            "factors": [{"root": list(a), "k": k} for a, k in self.factors],
            "scalar": self.scalar,
            "delta_half_prefactor": self.delta_half_prefactor,
            "scale": self.scale,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _as_batch(f: Callable) -> Callable:
    def g(P):
        P = np.atleast_2d(P)
        try:
            out = np.asarray(f(P), dtype=complex)
            if out.shape == (len(P),):
                return out
        except Exception:
            pass
        return np.array([complex(f(p)) for p in P])
    return g


def _factor_fd(g: Callable, v: np.ndarray, k: int, h: float) -> Callable:
    """``(-1/2 d(v) + k) g`` with a fourth-order central difference."""
    def out(P):
        P = np.atleast_2d(P)
        d = (-g(P + 2 * h * v) + 8 * g(P + h * v) - 8 * g(P - h * v) + g(P - 2 * h * v)) / (12 * h)
        return -0.5 * d + k * g(P)
    return out


def _operator(rs: RootSystem, m: MultiplicityFunction, prefactor: bool):
    r = rho(rs, m)
    factors = []
    scalar = 1.0
    for i in rs.positive:
        alpha = rs.roots[i]
        ra = float(alpha @ r / (alpha @ alpha))
        for k in range(int(m.of(i)) // 2):
            factors.append((tuple(float(x) for x in alpha), k))
            scalar /= ra + k
    return ExponentialPolynomialOperator(rs.type, tuple(factors), scalar, prefactor, rs.scale)


def build_psi_a_operator(rs: RootSystem, m: MultiplicityFunction) -> ExponentialPolynomialOperator:
    """The multiplier ``1/c(m; -i .)`` written as a differential operator on ``A``."""
    _require_even(m)
    return _operator(rs, m, prefactor=False)


def build_d_operator(rs: RootSystem, m: MultiplicityFunction) -> ExponentialPolynomialOperator:
    """``D = delta^{1/2} Psi_A`` for ``m = 2``."""
    _require_complex(m)
    return _operator(rs, m, prefactor=True)


# ---------------------------------------------------------------------------
# closed forms of phi


def phi_flat(rs: RootSystem, lam, H) -> np.ndarray:
    """``sum_w a^{w lam}``, the hypergeometric function for ``m = 0``.

    ``lam`` has shape ``(P, r)``, ``H`` has shape ``(Q, r)``; returns ``(P, Q)``.
    """
    W = weyl_group(rs)
    lam = np.atleast_2d(np.asarray(lam, dtype=complex))
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    out = np.zeros((len(lam), len(H)), dtype=complex)
    for w in W.elements:
        out += np.exp((lam @ w.T) @ H.T)
    return out


def _alternating(rs, lam, H):
    """``sum_w sign(w) exp(<w lam, H>)`` with a Taylor branch for small products.

    Orders below ``|positive roots|`` cancel identically and are skipped in
    the Taylor branch, which removes the cancellation error near ``0``.
    Since W acts orthogonally, ``|<w lam, H>| <= |lam| |H|`` selects it.
    """
    W = weyl_group(rs)
    npos = len(rs.positive)
    small = np.outer(np.linalg.norm(lam, axis=1), np.linalg.norm(H, axis=1)) < TAYLOR_RADIUS
    real_phase = not np.any(lam.real) and not np.any(H.imag)
    if real_phase:
        # a^{i theta}: accumulate cosine and sine separately in real arithmetic
        L, X = lam.imag, H.real
        re = np.zeros((len(L), len(X)))
        im = np.zeros_like(re)
        thetas = []
        for w, sg in zip(W.elements, W.signs):
            th = (L @ w.T) @ X.T
            re += sg * np.cos(th)
            im += sg * np.sin(th)
            if np.any(small):
                thetas.append(th[small])
        out = re + 1j * im
        if thetas:
            z = 1j * np.stack(thetas)
            out[small] = _taylor(z, W.signs, npos)
        return out
    out = np.zeros((len(lam), len(H)), dtype=complex)
    zs = []
    for w, sg in zip(W.elements, W.signs):
        z = (lam @ w.T) @ H.T
        out += sg * np.exp(z)
        if np.any(small):
            zs.append(z[small])
    if zs:
        out[small] = _taylor(np.stack(zs), W.signs, npos)
    return out


def _taylor(z, signs, start):
    """``sum_{n >= start} sum_w sign(w) z_w^n / n!`` for ``z`` of shape ``(|W|, K)``."""
    sg = np.asarray(signs, dtype=float)
    term = np.ones_like(z)
    acc = np.zeros(z.shape[1], dtype=complex)
    fact = 1.0
    for n in range(1, TAYLOR_TERMS + 1):
        term *= z
        fact *= n
        if n >= start:
            acc += sg @ term / fact
    return acc


def _phi_complex_raw(rs, m, lam, H):
    pr = pi_poly(rs, rho(rs, m))
    alt = _alternating(rs, lam, H)
    den = pi_poly(rs, lam)[:, None] * delta_half(rs, H)[None, :]
    # singular entries are overwritten by the caller
    with np.errstate(divide="ignore", invalid="ignore"):
        return pr * alt / den


def _wall_distance(rs, X):
    pos = rs.positive_roots
    return (np.abs(X @ pos.T) / np.linalg.norm(pos, axis=1)).min(axis=1)


def _directions(r):
    if r == 1:
        return np.array([[1.0]]), np.array([[1.0]])
    u1 = np.array([[0.8314, 0.5556]])
    u2 = np.array([[-0.3827, 0.9239]])
    return u1, u2


def phi_complex(rs: RootSystem, m: MultiplicityFunction, lam, H) -> np.ndarray:
    """Closed-form ``phi_lam(a)`` for ``m = 2`` on a reduced system.

    ``lam`` is ``(P, r)`` (or one vector), ``H`` is ``(Q, r)`` (or one
    vector), both complex; returns ``(P, Q)`` (or a scalar).  Points on the
    singular set ``pi(lam) = 0`` or ``delta^{1/2}(H) = 0`` are averaged over
    four symmetric perturbations.
    """
    _require_complex(m)
    lam = np.asarray(lam, dtype=complex)
    H = np.asarray(H, dtype=complex)
    scalar = lam.ndim == 1 and H.ndim == 1
    lam = np.atleast_2d(lam)
    H = np.atleast_2d(H)
    out = _phi_complex_raw(rs, m, lam, H)

    sing_l = _wall_distance(rs, lam) < SINGULAR_DIST
    sing_h = _wall_distance(rs, H) < SINGULAR_DIST
    if np.any(sing_l) or np.any(sing_h):
        u1, u2 = _directions(rs.rank)
        e = PERTURB_EPS
        for p in np.flatnonzero(sing_l):
            out[p] = _average4(rs, m, lam[p:p + 1], H, u1, u2, e, which="lam")[0]
        qs = np.flatnonzero(sing_h)
        if qs.size:
            rows = np.flatnonzero(~sing_l)
            if rows.size:
                vals = _average4(rs, m, lam[rows], H[qs], u1, u2, e, which="H")
                out[np.ix_(rows, qs)] = vals
    return complex(out[0, 0]) if scalar else out


def _average4(rs, m, lam, H, u1, u2, e, which):
    acc = 0
    for s in (1.0, -1.0):
        for u in (u1, u2):
            if which == "lam":
                Hp = H
                if np.any(_wall_distance(rs, H) < SINGULAR_DIST):
                    Hp = H + s * e * u
                acc = acc + _phi_complex_raw(rs, m, lam + s * e * u, Hp)
            else:
                acc = acc + _phi_complex_raw(rs, m, lam, H + s * e * u)
    return acc / 4.0


# ---------------------------------------------------------------------------
# identities


def shift_identity_residual(rs: RootSystem, m: MultiplicityFunction, lam, H,
                            phi: Callable | None = None) -> np.ndarray:
    """``|delta phi_lam - c(lam) c(-lam) D psi_lam|`` at points ``H`` of ``A+``.

    ``psi_lam = sum_w a^{w lam}`` and ``D`` acts on it exactly.  ``phi``
    defaults to the series evaluation.
    """
    from .hypergeo import c_values, delta_density, hypergeometric_function

    _require_complex(m)
    D = build_d_operator(rs, m)
    W = weyl_group(rs)
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    H = np.atleast_2d(np.asarray(H, dtype=float))
    wl = np.array([w @ lam for w in W.elements])
    Dpsi = D.apply_spectral(np.ones(len(wl)), wl, H)
    cc = c_values(rs, m, np.array([lam, -lam]))
    if phi is None:
        ph = np.array([hypergeometric_function(rs, m, lam, h) for h in H])
    else:
        ph = phi(lam, H)
    lhs = delta_density(rs, m, H) * ph
    return np.abs(lhs - cc[0] * cc[1] * Dpsi)


@dataclass
class AbelInversionReport:
    points: np.ndarray
    residual: np.ndarray
    relative: np.ndarray
    max_relative: float


def abel_inversion_check(rs: RootSystem, m: MultiplicityFunction, f, lam_grid,
                         delta_min: float = 0.01, method: str = "spectral",
                         step: float = 1e-2, max_points: int | None = None) -> AbelInversionReport:
    """Residual of ``D(Abel f) = |W| delta f`` at the nodes of ``f.grid`` with ``delta >= delta_min``.

    ``f`` is a W-invariant :class:`GridFunction` on ``A``.  The relative
    residual divides by ``|W| delta(a) max|f|``.  With ``method="spectral"``
    ``D`` acts exactly on the exponentials of the Abel integral; with
    ``"fd"`` it is applied by nested differences to the Abel transform as a
    black box.
    """
    from .hypergeo import delta_density
    from .transform import SPECTRAL_MEASURE, abel_transform, hypergeometric_fourier_grid

    _require_complex(m)
    D = build_d_operator(rs, m)
    nW = len(weyl_group(rs))
    dens = delta_density(rs, m, f.grid.nodes)
    keep = np.flatnonzero(dens >= delta_min)
    if max_points is not None and len(keep) > max_points:
        keep = keep[np.linspace(0, len(keep) - 1, max_points).round().astype(int)]
    pts, dens, fvals = f.grid.nodes[keep], dens[keep], f.values[keep]
    Ff = hypergeometric_fourier_grid(rs, m, f, lam_grid)
    if method == "spectral":
        coeffs = SPECTRAL_MEASURE(rs.rank) * lam_grid.weights * Ff.values
        lhs = D.apply_spectral(coeffs, 1j * lam_grid.nodes, pts)
    elif method == "fd":
        def abel(P):
            return abel_transform(rs, m, f, lam_grid, np.atleast_2d(P), Ff=Ff)
        lhs = np.array([D.apply(abel, p, step=step) for p in pts])
    else:
        raise ValueError(f"unknown method {method!r}")
    rhs = nW * dens * fvals
    res = np.abs(lhs - rhs)
    top = np.abs(f.values).max()
    rel = res / (nW * dens * top) if top > 0 else res
    return AbelInversionReport(pts, res, rel, float(rel.max()) if rel.size else 0.0)
