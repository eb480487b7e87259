"""Hypergeometric functions attached to a root system and a multiplicity.

The main entry points are

* :func:`gamma_coefficients` -- the coefficients of the Harish-Chandra
  expansion, filled degree by degree from the recursion;
* :func:`c_function` -- the Gamma-product c-function normalised by
  ``c(m; rho(m)) = 1``;
* :func:`harish_chandra_series` and :func:`hypergeometric_function`;
* :func:`delta_density`, :func:`plancherel_density` and :func:`apply_L`.

Spectral parameters and points are plain numpy vectors in the orthonormal
frame.  The small dataclasses :class:`SpectralParameter` and
:class:`TorusPoint` are accepted wherever a vector is.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import mpmath
import numpy as np
from scipy import special

from .errors import DomainError, PoleEncountered, SingularParameter
from .rootsys import (
    MultiplicityFunction,
    RootSystem,
    coroot,
    in_omega,
    lattice_shell,
    rho,
    to_chamber,
    weyl_group,
)

LOG2 = np.log(2.0)

SERIES_CAPS = (8, 16, 32, 64)
SERIES_TOL = 1e-12
SINGULAR_TOL = 1e-10
POLE_TOL = 1e-12
REMOVABLE_EPS = 1e-6


# ---------------------------------------------------------------------------
# parameters and points


@dataclass(frozen=True, eq=False)
class SpectralParameter:
    """A complex linear functional on ``a`` in orthonormal coordinates."""

    value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", np.asarray(self.value, dtype=complex).reshape(-1))

    def lambda_alpha(self, rs: RootSystem) -> np.ndarray:
        """``lambda_alpha = lambda(H_alpha)/2`` for every root."""
        return lambda_alpha(rs, self.value)


def lambda_alpha(rs: RootSystem, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    R = rs.roots
    return lam @ R.T / (R * R).sum(axis=1)


class PointTag(enum.Enum):
    A = "A"
    A_OMEGA = "A_Omega"
    A_PLUS_2OMEGA = "A_plus_2Omega"


@dataclass(frozen=True, eq=False)
class TorusPoint:
    """``a = exp(H_R + i H_I)`` stored through its logarithm."""

    log_real: np.ndarray
    log_imag: np.ndarray = None
    tag: PointTag = PointTag.A

    def __post_init__(self):
        re = np.asarray(self.log_real, dtype=float).reshape(-1)
        im = np.zeros_like(re) if self.log_imag is None else \
            np.asarray(self.log_imag, dtype=float).reshape(-1)
        object.__setattr__(self, "log_real", re)
        object.__setattr__(self, "log_imag", im)
        if self.tag is PointTag.A and np.any(im != 0):
            object.__setattr__(self, "tag", PointTag.A_OMEGA)

    @property
    def H(self) -> np.ndarray:
        return self.log_real + 1j * self.log_imag

    def power(self, lam) -> complex:
        """``a**lam = exp(lam(H))``."""
        return complex(np.exp(np.dot(np.asarray(lam, dtype=complex), self.H)))

    def validate(self, rs: RootSystem) -> None:
        if self.tag is PointTag.A and np.any(self.log_imag != 0):
            raise DomainError("tag A requires a real logarithm")
        if self.tag is PointTag.A_OMEGA and not in_omega(rs, self.log_imag)[0]:
            raise DomainError("imaginary part is not in Omega")
        if self.tag is PointTag.A_PLUS_2OMEGA:
            if not np.all(rs.positive_roots @ self.log_real > 0):
                raise DomainError("real part is not in the positive chamber")
            if not in_omega(rs, self.log_imag, factor=2.0)[0]:
                raise DomainError("imaginary part is not in 2 Omega")


def _as_vector(x) -> np.ndarray:
    if isinstance(x, SpectralParameter):
        return x.value
    if isinstance(x, TorusPoint):
        return x.H
    return np.asarray(x, dtype=complex)


# ---------------------------------------------------------------------------
# coefficient recursion


@dataclass(frozen=True)
class _Recursion:
    """Index structure of the recursion for one root system and cap."""

    shell_coeffs: np.ndarray
    shell_points: np.ndarray
    degree_slices: tuple[tuple[int, int], ...]
    # one row per recursion term: target, predecessor, positive-root slot, (mu - 2k alpha, alpha)
    t_target: np.ndarray
    t_pred: np.ndarray
    t_root: np.ndarray
    t_const: np.ndarray
    has_terms: np.ndarray


@functools.lru_cache(maxsize=64)
def _recursion(type_: str, scale: float, cap: int) -> _Recursion:
    from .rootsys import build_root_system

    rs = build_root_system(type_, scale)
    shell = lattice_shell(rs, cap)
    index = shell.index()
    pos = rs.positive
    pos_coeffs = rs.simple_coords[pos]
    pos_vecs = rs.roots[pos]
    tt, tp, ta, tc = [], [], [], []
    for k in range(1, len(shell)):
        c = shell.coeffs[k]
        mu = shell.points[k]
        for a, (ac, av) in enumerate(zip(pos_coeffs, pos_vecs)):
            j = 1
            while True:
                pc = c - 2 * j * ac
                if np.any(pc < 0):
                    break
                tt.append(k)
                tp.append(index[tuple(pc)])
                ta.append(a)
                tc.append(float((mu - 2 * j * av) @ av))
                j += 1
    deg = shell.degrees
    slices = []
    start = 0
    for d in range(cap + 1):
        stop = start + int(np.sum(deg == d))
        slices.append((start, stop))
        start = stop
    has_terms = np.zeros(len(shell), dtype=bool)
    has_terms[np.array(tt, dtype=int)] = True
    return _Recursion(shell.coeffs, shell.points, tuple(slices),
                      np.array(tt, dtype=int), np.array(tp, dtype=int),
                      np.array(ta, dtype=int), np.array(tc), has_terms)


@dataclass(frozen=True, eq=False)
class GammaTable:
    """Coefficients ``Gamma_mu(m; lambda)`` on a lattice shell.

    ``values`` has shape ``(len(shell),)`` for a single spectral parameter
    and ``(len(shell), B)`` for a batch.
    """

    coeffs: np.ndarray
    points: np.ndarray
    values: np.ndarray
    lam: np.ndarray
    singular_flag: bool
    cap: int

    def __getitem__(self, n: Sequence[int]):
        hit = np.flatnonzero(np.all(self.coeffs == np.asarray(n), axis=1))
        if not hit.size:
            raise KeyError(tuple(n))
        return self.values[hit[0]]

    @property
    def degrees(self) -> np.ndarray:
        return self.coeffs.sum(axis=1)


def gamma_coefficients(rs: RootSystem, m: MultiplicityFunction, lam, cap: int,
                       tol: float = SINGULAR_TOL) -> GammaTable:
    """Fill the coefficient table degree by degree.

    ``lam`` may be a single vector or a batch of shape ``(B, r)``.  Lattice
    points that receive no terms from the recursion (for instance odd
    multiples of the root in rank one) get the coefficient 0 without a
    denominator check.  Raises :class:`SingularParameter` when a needed
    denominator ``(mu, mu - 2 lambda)`` is below ``tol * (mu, mu)``.
    """
    lam_in = _as_vector(lam)
    single = lam_in.ndim == 1
    lams = np.atleast_2d(lam_in)
    rec = _recursion(rs.type, rs.scale, int(cap))
    pos_vecs = rs.roots[rs.positive]
    mvals = m.values[rs.positive]
    rho_dot = pos_vecs @ rho(rs, m)
    lam_dot = lams @ pos_vecs.T  # (B, npos)

    n = len(rec.shell_coeffs)
    B = lams.shape[0]
    G = np.zeros((n, B), dtype=complex)
    G[0] = 1.0
    mu = rec.shell_points
    denom = (mu * mu).sum(axis=1)[:, None] - 2.0 * (mu @ lams.T)  # (n, B)
    musq = (mu * mu).sum(axis=1)

    bad = rec.has_terms[:, None] & (np.abs(denom) < tol * np.maximum(musq, 1e-300)[:, None])
    bad[0] = False
    if np.any(bad):
        raise SingularParameter(
            "recursion denominator (mu, mu - 2 lambda) vanishes; perturb lambda")

    weight = mvals[rec.t_root]
    live = weight != 0
    tt, tp, ta = rec.t_target[live], rec.t_pred[live], rec.t_root[live]
    tconst = rec.t_const[live] + rho_dot[ta]
    wts = weight[live]
    order = np.argsort(tt, kind="stable")
    tt, tp, ta, tconst, wts = tt[order], tp[order], ta[order], tconst[order], wts[order]
    bounds = np.searchsorted(tt, [s for s, _ in rec.degree_slices] + [n])

    for d, (start, stop) in enumerate(rec.degree_slices):
        if d == 0 or start == stop:
            continue
        lo, hi = bounds[d], bounds[d + 1]
        if lo == hi:
            continue
        contrib = wts[lo:hi, None] * G[tp[lo:hi]] * (tconst[lo:hi, None] - lam_dot[:, ta[lo:hi]].T)
        acc = np.zeros((stop - start, B), dtype=complex)
        np.add.at(acc, tt[lo:hi] - start, contrib)
        block = 2.0 * acc / np.where(rec.has_terms[start:stop, None], denom[start:stop], 1.0)
        G[start:stop] = np.where(rec.has_terms[start:stop, None], block, 0.0)

    values = G[:, 0] if single else G
    return GammaTable(rec.shell_coeffs, rec.shell_points, values, lam_in, False, int(cap))


# ---------------------------------------------------------------------------
# c-function


def _near_nonpositive_int(z: np.ndarray, tol: float = POLE_TOL) -> np.ndarray:
    r = np.rint(z.real)
    return (np.abs(z - r) < tol) & (r <= 0)


def _log_factor(x, ma, m2a):
    a = 0.5 * (x + 0.5 * ma + 1.0)
    b = 0.5 * (x + 0.5 * ma + m2a)
    return -x * LOG2 + special.loggamma(x) - special.loggamma(a) - special.loggamma(b)


def _factor(x: np.ndarray, ma: float, m2a: float) -> tuple[np.ndarray, np.ndarray]:
    """One Gamma factor of the c-function and a mask of genuine poles.

    Removable singularities (numerator and denominator poles colliding)
    are resolved by averaging the two neighbours ``x +- eps``.
    """
    x = np.asarray(x, dtype=complex)
    a = 0.5 * (x + 0.5 * ma + 1.0)
    b = 0.5 * (x + 0.5 * ma + m2a)
    num_pole = _near_nonpositive_int(x)
    den_pole = _near_nonpositive_int(a) | _near_nonpositive_int(b)
    out = np.zeros(x.shape, dtype=complex)
    regular = ~num_pole & ~den_pole
    out[regular] = np.exp(_log_factor(x[regular], ma, m2a))
    # denominator-only poles: the factor vanishes, out stays 0
    removable = num_pole & den_pole
    if np.any(removable):
        xr = x[removable]
        e = REMOVABLE_EPS
        out[removable] = 0.5 * (np.exp(_log_factor(xr + e, ma, m2a))
                                + np.exp(_log_factor(xr - e, ma, m2a)))
    pole = num_pole & ~den_pole
    return out, pole


def _root_data(rs: RootSystem, m: MultiplicityFunction):
    idx = rs.reduced_positive
    vecs = rs.roots[idx]
    ma = np.array([m.of(i) for i in idx])
    m2a = np.array([m.of_double(i) for i in idx])
    return vecs, ma, m2a


def _c_unnormalised(rs, m, lams):
    """Unnormalised product and pole mask for a batch ``(B, r)``."""
    vecs, ma, m2a = _root_data(rs, m)
    xs = lams @ vecs.T / (vecs * vecs).sum(axis=1)
    val = np.ones(lams.shape[0], dtype=complex)
    pole = np.zeros(lams.shape[0], dtype=bool)
    for j in range(len(vecs)):
        f, p = _factor(xs[:, j], ma[j], m2a[j])
        val = val * np.where(p, 1.0, f)
        pole |= p
    return val, pole


@functools.lru_cache(maxsize=256)
def _kappa0_cached(type_, scale, per_orbit) -> float:
    from .rootsys import build_root_system, multiplicity

    rs = build_root_system(type_, scale)
    m = multiplicity(rs, per_orbit)
    val, pole = _c_unnormalised(rs, m, rho(rs, m)[None, :].astype(complex))
    if pole[0] or val[0] == 0:
        raise PoleEncountered("c-function normalisation is singular at rho(m)")
    return complex(1.0 / val[0])


def kappa0(rs: RootSystem, m: MultiplicityFunction) -> complex:
    """Normalising constant making ``c(m; rho(m)) = 1``."""
    return _kappa0_cached(rs.type, rs.scale, m.per_orbit)


class CFunctionValue(NamedTuple):
    value: complex
    kappa0: float


def c_values(rs: RootSystem, m: MultiplicityFunction, lams) -> np.ndarray:
    """Vectorised ``c(m; lambda)``; genuine poles raise :class:`PoleEncountered`."""
    lams = np.atleast_2d(_as_vector(lams))
    val, pole = _c_unnormalised(rs, m, lams)
    if np.any(pole):
        raise PoleEncountered("c-function evaluated at a pole of Gamma(lambda_alpha)")
    return kappa0(rs, m) * val


def inv_c_values(rs: RootSystem, m: MultiplicityFunction, lams) -> np.ndarray:
    """Vectorised ``1 / c(m; lambda)``, equal to 0 at the poles of ``c``."""
    lams = np.atleast_2d(_as_vector(lams))
    val, pole = _c_unnormalised(rs, m, lams)
    if np.any((val == 0) & ~pole):
        raise PoleEncountered("1/c evaluated at a zero of the c-function")
    safe = np.where(pole, 1.0, val)
    return np.where(pole, 0.0, 1.0 / safe) / kappa0(rs, m)


def c_function(rs: RootSystem, m: MultiplicityFunction, lam) -> CFunctionValue:
    k0 = kappa0(rs, m)
    v = c_values(rs, m, _as_vector(lam).reshape(1, -1))[0]
    return CFunctionValue(complex(v), float(k0.real))


def c_ratio(rs: RootSystem, m: MultiplicityFunction, s: int, t: int, lam) -> complex:
    """``c(m; s^{-1} i lam) / c(m; t^{-1} i lam)`` for Weyl element indices ``s``, ``t``.

    Unimodular for real ``lam``.
    """
    W = weyl_group(rs)
    lam = np.asarray(lam, dtype=float)
    a = W.elements[s].T @ lam
    b = W.elements[t].T @ lam
    vals = c_values(rs, m, 1j * np.array([a, b]))
    return complex(vals[0] / vals[1])


def c_ratio_values(rs, m, s: int, lams) -> np.ndarray:
    """``c_{s,e}(m; lam)`` on a batch of real spectral points."""
    W = weyl_group(rs)
    lams = np.atleast_2d(np.asarray(lams, dtype=float))
    sl = lams @ W.elements[s]  # rows s^{-1} lam
    return inv_c_values(rs, m, 1j * lams) * c_values(rs, m, 1j * sl)


# ---------------------------------------------------------------------------
# Harish-Chandra series and the hypergeometric function


class SeriesResult(NamedTuple):
    value: complex
    truncation: float
    cap: int


def _series_batch(rs, m, lams, H, cap):
    """``Phi_lam(H)`` for lams ``(B, r)`` and points ``(Q, r)``.

    Returns values ``(B, Q)`` and the relative size of the last two graded
    shells, ``(B, Q)``.
    """
    table = gamma_coefficients(rs, m, lams, cap)
    G = table.values if table.values.ndim == 2 else table.values[:, None]
    E = np.exp(-(H @ table.points.T))  # (Q, n)
    deg = table.degrees
    total = E @ G  # (Q, B)
    tail_mask = deg >= max(cap - 1, 1)
    tail = np.abs(E[:, tail_mask]) @ np.abs(G[tail_mask])
    r = rho(rs, m)
    pref = np.exp(H @ lams.T - (H @ r)[:, None])  # (Q, B)
    vals = (pref * total).T
    scale = np.maximum(np.abs(total), 1e-300)
    return vals, (tail / scale).T


def harish_chandra_series(rs: RootSystem, m: MultiplicityFunction, lam, a,
                          cap: int | None = None, tol: float = SERIES_TOL) -> SeriesResult:
    """Truncated Harish-Chandra series at a point of ``A+(2 Omega)``.

    With ``cap=None`` the degree cap is doubled from 8 up to 64 until the
    last graded shells contribute less than ``tol`` relative.
    """
    if isinstance(a, TorusPoint):
        a.validate(rs)
        H = a.H
    else:
        H = np.asarray(a, dtype=complex)
    if not np.all(rs.positive_roots @ H.real > 0):
        raise DomainError("Harish-Chandra series needs a point of A+(2 Omega)")
    if not in_omega(rs, H.imag, factor=2.0)[0]:
        raise DomainError("imaginary part outside 2 Omega")
    lams = np.atleast_2d(_as_vector(lam))
    caps = (cap,) if cap is not None else SERIES_CAPS
    for c in caps:
        vals, tails = _series_batch(rs, m, lams, H[None, :], c)
        if cap is not None or tails[0, 0] < tol:
            return SeriesResult(complex(vals[0, 0]), float(tails[0, 0]), c)
    raise DomainError(
        f"series did not reach tolerance {tol:g} at cap {caps[-1]}; point too close to a wall")


def _perturbation_direction(r: int) -> np.ndarray:
    v = np.array([1.0, np.sqrt(2.0), np.sqrt(3.0)][:r]) + 0.1234567 * np.arange(r)
    return v / np.linalg.norm(v)


def phi_series_values(rs: RootSystem, m: MultiplicityFunction, lam, H,
                      tol: float = SERIES_TOL) -> np.ndarray:
    """``phi_lam`` at points ``H`` (shape ``(Q, r)``) of ``A+(2 Omega)`` via the series.

    Points must already lie in the positive chamber (real part).  Singular
    ``lam`` raises; see :func:`hypergeometric_function` for the perturbation
    rule.
    """
    W = weyl_group(rs)
    lam = _as_vector(lam).reshape(-1)
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    wl = np.array([w @ lam for w in W.elements])
    cw = c_values(rs, m, wl)
    for c in SERIES_CAPS:
        vals, tails = _series_batch(rs, m, wl, H, c)
        if np.all(tails < tol):
            return cw @ vals
    raise DomainError("series did not converge within the hard cap; too close to a wall")


def jacobi_phi(rs: RootSystem, m: MultiplicityFunction, lam, H) -> np.ndarray:
    """Rank-one ``phi_lam`` through the Gauss function.

    ``phi_lam(exp H) = 2F1((rho_a + lam_a)/2, (rho_a - lam_a)/2; (m_a + m_2a + 1)/2;
    -sinh(alpha(H))**2)`` with ``alpha`` the indivisible positive root.
    Valid on all of ``A(Omega)``, including the wall ``H = 0``.
    """
    if rs.rank != 1:
        raise DomainError("the Gauss-function route exists only in rank one")
    i = int(rs.reduced_positive[0])
    alpha = rs.roots[i]
    ma, m2a = m.of(i), m.of_double(i)
    la = complex(np.dot(_as_vector(lam).reshape(-1), alpha) / alpha.dot(alpha))
    ra = 0.5 * ma + m2a
    cc = 0.5 * (ma + m2a + 1.0)
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    s = H @ alpha
    out = np.empty(len(s), dtype=complex)
    for k, sk in enumerate(s):
        z = -mpmath.sinh(mpmath.mpc(sk.real, sk.imag)) ** 2
        out[k] = complex(mpmath.hyp2f1(0.5 * (ra + la), 0.5 * (ra - la), cc, z))
    return out


def _phi_at(rs, m, lam, H, method):
    """``phi`` at chamber points ``H`` with the perturbation rule for singular ``lam``."""
    if method == "jacobi":
        return jacobi_phi(rs, m, lam, H)
    try:
        return phi_series_values(rs, m, lam, H)
    except (SingularParameter, PoleEncountered):
        pass
    v = _perturbation_direction(rs.rank)
    eps = 1e-5 * (1.0 + np.linalg.norm(lam))
    for turn in range(4):
        d = v if turn == 0 else np.roll(v, turn) * (1.0 + 0.1 * turn)
        try:
            plus = phi_series_values(rs, m, lam + eps * d, H)
            minus = phi_series_values(rs, m, lam - eps * d, H)
            return 0.5 * (plus + minus)
        except (SingularParameter, PoleEncountered):
            continue
    raise SingularParameter("perturbation retries exhausted")


def hypergeometric_function(rs: RootSystem, m: MultiplicityFunction, lam, a,
                            cap: int | None = None, method: str = "auto") -> complex:
    """``phi_lam(m; a)`` as the W-symmetrised Harish-Chandra sum.

    The point is first moved into the closed positive chamber by the Weyl
    group.  ``method`` is ``"series"``, ``"jacobi"`` (rank one only) or
    ``"auto"``, which falls back to the Gauss function in rank one when the
    series cannot converge near the wall.
    """
    if isinstance(a, TorusPoint):
        a.validate(rs)
        H = a.H
    else:
        H = np.asarray(a, dtype=complex).reshape(-1)
    if not in_omega(rs, H.imag, factor=2.0)[0]:
        raise DomainError("imaginary part outside 2 Omega")
    k, HR = to_chamber(rs, H.real)
    w = weyl_group(rs).elements[k]
    Hc = (HR + 1j * (w @ H.imag))[None, :]
    lam = _as_vector(lam).reshape(-1)
    if cap is not None:
        W = weyl_group(rs)
        wl = np.array([ww @ lam for ww in W.elements])
        vals, _ = _series_batch(rs, m, wl, Hc, cap)
        return complex(c_values(rs, m, wl) @ vals[:, 0])
    if method == "jacobi":
        return complex(jacobi_phi(rs, m, lam, Hc)[0])
    on_wall = np.any(np.abs(rs.simple_roots @ HR) < 1e-14)
    if not on_wall:
        try:
            return complex(_phi_at(rs, m, lam, Hc, "series")[0])
        except DomainError:
            if method == "series" or rs.rank != 1:
                raise
    elif method == "series" or rs.rank != 1:
        raise DomainError("series evaluation on a chamber wall is not possible")
    return complex(jacobi_phi(rs, m, lam, Hc)[0])


# ---------------------------------------------------------------------------
# densities


def delta_density(rs: RootSystem, m: MultiplicityFunction, H) -> np.ndarray | float:
    """``prod_{alpha > 0} |a^alpha - a^-alpha|^{m_alpha}`` at real points."""
    if isinstance(H, TorusPoint):
        if np.any(H.log_imag != 0):
            raise DomainError("delta is defined on A (real logarithm)")
        H = H.log_real
    H = np.asarray(H, dtype=float)
    single = H.ndim == 1
    H = np.atleast_2d(H)
    mv = m.values[rs.positive]
    s = np.abs(2.0 * np.sinh(H @ rs.positive_roots.T))
    with np.errstate(divide="ignore"):
        terms = np.where(mv == 0, 1.0, s ** mv)
    out = terms.prod(axis=1)
    return float(out[0]) if single else out


def plancherel_density(rs: RootSystem, m: MultiplicityFunction, lam) -> np.ndarray | float:
    """``|c(m; i lam)|^-2`` at real spectral points."""
    lam = np.asarray(lam, dtype=float)
    single = lam.ndim == 1
    out = np.abs(inv_c_values(rs, m, 1j * np.atleast_2d(lam))) ** 2
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# the radial operator


def _fd_first(f, H, v, h):
    pts = np.array([H + 2 * h * v, H + h * v, H - h * v, H - 2 * h * v])
    y = f(pts)
    return (-y[0] + 8 * y[1] - 8 * y[2] + y[3]) / (12 * h)


def _fd_second(f, H, v, h):
    pts = np.array([H + 2 * h * v, H + h * v, H, H - h * v, H - 2 * h * v])
    y = f(pts)
    return (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * h * h)


def _vectorised(f: Callable) -> Callable:
    def g(pts):
        try:
            out = np.asarray(f(pts), dtype=complex)
            if out.shape == (len(pts),):
                return out
        except Exception:
            pass
        return np.array([complex(f(p)) for p in pts])
    return g


def apply_L(rs: RootSystem, m: MultiplicityFunction, f: Callable, a, step: float = 1e-2,
            richardson: bool = True) -> complex:
    """Apply the radial Laplacian ``L(m)`` to ``f`` at ``a`` by finite differences.

    ``f`` maps an array of points ``(N, r)`` (complex logarithms) to values;
    a scalar function of one point is also accepted.  Central differences of
    order four are used; with ``richardson=True`` steps ``h`` and ``h/2``
    are combined to order six.
    """
    H = a.H if isinstance(a, TorusPoint) else np.asarray(a, dtype=complex).reshape(-1)
    pos = rs.positive_roots
    reach = 2 * step * np.linalg.norm(pos, axis=1).max()
    if np.any(np.abs(pos @ H.real) <= reach):
        raise DomainError("point within finite-difference reach of a wall")
    g = _vectorised(f)
    mv = m.values[rs.positive]

    def L(h):
        out = 0j
        for j in range(rs.rank):
            e = np.zeros(rs.rank)
            e[j] = 1.0
            out += _fd_second(g, H, e, h)
        for alpha, ma in zip(pos, mv):
            if ma == 0:
                continue
            q = np.exp(-2.0 * (alpha @ H))
            out += ma * (1 + q) / (1 - q) * _fd_first(g, H, alpha, h)
        return out

    if not richardson:
        return complex(L(step))
    return complex((16 * L(step / 2) - L(step)) / 15)


# ---------------------------------------------------------------------------
# growth estimate


@dataclass
class GrowthReport:
    ratios: np.ndarray
    max_ratio: float
    constant: float
    finite: bool = field(default=True)


def growth_exponent(rs: RootSystem, m: MultiplicityFunction, lam, H) -> float:
    """Exponent of the Heckman-Opdam bound at ``H = H_R + i H_I``."""
    W = weyl_group(rs)
    lam = _as_vector(lam).reshape(-1)
    H = np.asarray(H, dtype=complex).reshape(-1)
    r = rho(rs, m)
    wl = np.array([w @ lam for w in W.elements])
    wr = np.array([w @ r for w in W.elements])
    return float(-(wl.imag @ H.imag).min() + (wr @ H.imag).max() + (wl.real @ H.real).max())


def growth_bound_check(rs: RootSystem, m: MultiplicityFunction, lam,
                       samples: Sequence[TorusPoint],
                       phi: Callable | None = None) -> GrowthReport:
    """Ratios ``|phi_lam(a)| / exp(bound(a))`` over sample points of ``A(Omega)``."""
    ratios = []
    for a in samples:
        if not in_omega(rs, a.log_imag)[0]:
            raise DomainError("growth samples must lie in A(Omega)")
        val = phi(a) if phi is not None else hypergeometric_function(rs, m, lam, a)
        ratios.append(abs(val) / np.exp(growth_exponent(rs, m, lam, a.H)))
    ratios = np.array(ratios)
    mx = float(ratios.max()) if ratios.size else 0.0
    return GrowthReport(ratios, mx, mx, bool(np.all(np.isfinite(ratios))))


def apply_L_grid(rs: RootSystem, m: MultiplicityFunction, f: Callable, H, step: float = 1e-2,
                 richardson: bool = True) -> np.ndarray:
    """Vectorised ``L(m) f`` at real points ``H`` of shape ``(N, r)``.

    ``f`` must accept arrays of points.  Stencils may cross walls, so ``f``
    has to be smooth there (W-invariant test functions are).  Points on a
    wall raise :class:`DomainError` since ``coth`` is singular there.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    pos = rs.positive_roots
    ah = H @ pos.T
    if np.any(np.abs(ah) < 1e-12):
        raise DomainError("L(m) has a singular coefficient on the walls")
    mv = m.values[rs.positive]
    eye = np.eye(rs.rank)

    def shifted(v, k, h):
        return np.asarray(f(H + k * h * v), dtype=complex)

    def L(h):
        out = np.zeros(len(H), dtype=complex)
        centre = shifted(eye[0], 0, h)
        for j in range(rs.rank):
            v = eye[j]
            out += (-shifted(v, 2, h) + 16 * shifted(v, 1, h) - 30 * centre
                    + 16 * shifted(v, -1, h) - shifted(v, -2, h)) / (12 * h * h)
        for col, (alpha, ma) in enumerate(zip(pos, mv)):
            if ma == 0:
                continue
            d = (-shifted(alpha, 2, h) + 8 * shifted(alpha, 1, h) - 8 * shifted(alpha, -1, h)
                 + shifted(alpha, -2, h)) / (12 * h)
            out += ma / np.tanh(ah[:, col]) * d
        return out

    if not richardson:
        return L(step)
    return (16 * L(step / 2) - L(step)) / 15
