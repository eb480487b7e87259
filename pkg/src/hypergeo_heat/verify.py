"""Verification suites.

Each suite returns a list of :class:`Check` records (name, lhs, rhs,
defect, tolerance, pass, statement).  ``run_suites`` is what the CLI and the
acceptance tests call; all randomness is drawn from one seeded generator per
suite so reports are reproducible.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import even_case, heat, transform
from .hypergeo import (apply_L, apply_L_grid, c_values, delta_density, gamma_coefficients,
                       hypergeometric_function, inv_c_values, phi_series_values)
from .quadrature import (GridFunction, Symmetry, TestFunction, box_grid, gaussian_radii,
                         resolved_nodes, weyl_grid)
from .rootsys import build_root_system, multiplicity, rho, weyl_group

ROUNDOFF_FLOOR = 1e-12


@dataclass
class Check:
    name: str
    lhs: float
    rhs: float
    defect: float
    tolerance: float
    passed: bool
    statement: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: defect={self.defect:.3e} tol={self.tolerance:.1e}"


def _check(name, lhs, rhs, defect, tol, statement, **details) -> Check:
    defect = float(defect)
    ok = bool(np.isfinite(defect) and defect <= tol)
    return Check(name, float(np.real(lhs)), float(np.real(rhs)), defect, float(tol), ok,
                 statement, details)


def decreasing(defects, floor: float = ROUNDOFF_FLOOR) -> bool:
    """True if every refinement lowers the defect or both values sit at the roundoff floor."""
    return all(b < a or b <= floor for a, b in zip(defects, defects[1:]))


def _ladder_n(n: int, k: float, minimum: int = 16) -> int:
    return max(minimum, int(8 * np.ceil(n * k / 8)))


# ---------------------------------------------------------------------------
# 1. coefficient recursion


def suite_gamma(rng, tol=1e-12) -> list[Check]:
    rs = build_root_system("A1")
    m = multiplicity(rs, 2)
    lams = rng.normal(size=(20, 1)) * 2 + 1j * rng.normal(size=(20, 1)) * 2
    table = gamma_coefficients(rs, m, lams, cap=40)
    idx = table.coeffs[:, 0]
    even = (idx % 2 == 0) & (idx <= 40)
    odd = idx % 2 == 1
    dev = np.abs(table.values[even] - 1).max()
    odd_dev = np.abs(table.values[odd]).max()
    return [
        _check("gamma/A1_m2_even_coefficients_equal_one", 1.0, 1.0, dev, tol,
               "A1 with m=2: Gamma_{2k alpha} = 1 for k <= 20 at 20 random lambda",
               n_lambda=20, k_max=20),
        _check("gamma/A1_m2_odd_coefficients_vanish", 0.0, 0.0, odd_dev, tol,
               "A1 with m=2: odd-degree coefficients vanish"),
    ]


# ---------------------------------------------------------------------------
# 2. c-function


def _mults(type_):
    mixed = {"A1": 3.5, "A2": 0.7, "B2": {"long": 1.0, "short": 2.5},
             "BC1": {"alpha": 2.0, "2alpha": 1.0}}[type_]
    return {"m1": 1.0, "m2": 2.0, "mixed": mixed}


def suite_c_function(rng, tol_rho=1e-12, tol_form=1e-10) -> list[Check]:
    out = []
    worst = 0.0
    for t in ("A1", "A2", "B2", "BC1"):
        rs = build_root_system(t)
        for label, mv in _mults(t).items():
            m = multiplicity(rs, mv)
            v = c_values(rs, m, rho(rs, m)[None, :])[0]
            worst = max(worst, abs(v - 1))
    out.append(_check("c_function/normalisation_at_rho", 1.0, 1.0, worst, tol_rho,
                      "c(m; rho(m)) = 1 for A1, A2, B2, BC1 with m=1, m=2 and mixed m"))
    worst = 0.0
    for t in ("A1", "A2", "B2"):
        rs = build_root_system(t)
        m = multiplicity(rs, 2)
        lams = rng.normal(size=(50, rs.rank)) + 1j * rng.normal(size=(50, rs.rank))
        closed = even_case.pi_poly(rs, rho(rs, m)) / even_case.pi_poly(rs, lams)
        gam = c_values(rs, m, lams)
        worst = max(worst, float((np.abs(gam - closed) / np.abs(closed)).max()))
    out.append(_check("c_function/m2_equals_pi_ratio", 0.0, 0.0, worst, tol_form,
                      "m=2 reduced: c(lam) = pi(rho)/pi(lam) at 50 random lambda (relative)"))
    worst = 0.0
    for t, mv in (("A1", 2.0), ("A1", 4.0), ("A2", 2.0), ("B2", 2.0),
                  ("B2", {"long": 2.0, "short": 4.0})):
        rs = build_root_system(t)
        m = multiplicity(rs, mv)
        lams = rng.normal(size=(50, rs.rank)) + 1j * rng.normal(size=(50, rs.rank))
        poly = even_case.inv_c_polynomial(rs, m, lams)
        gam = inv_c_values(rs, m, lams)
        worst = max(worst, float((np.abs(poly - gam) / np.maximum(np.abs(gam), 1e-300)).max()))
    out.append(_check("c_function/even_polynomial_matches_gamma_form", 0.0, 0.0, worst, tol_form,
                      "even m: the product polynomial equals 1/c from the Gamma form (relative)"))
    return out


# ---------------------------------------------------------------------------
# 3. eigenvalue equation


def _chamber_points(rs, rng, k, lo=0.7, hi=1.4, imag=0.25):
    """Points of A+(Omega): simple-root values in ``[lo, hi]``, small imaginary part."""
    S = rs.simple_roots
    vals = rng.uniform(lo, hi, size=(k, rs.rank))
    HR = np.linalg.solve(S, vals.T).T
    HI = np.linalg.solve(S, rng.uniform(-imag, imag, size=(k, rs.rank)).T).T
    return HR + 1j * HI


def suite_eigen(rng, tol=1e-6) -> list[Check]:
    cases = [("A1", 1.0), ("A1", 2.0), ("A1", 3.5), ("A2", 2.0), ("BC1", {"alpha": 2.0, "2alpha": 1.0})]
    out = []
    for t, mv in cases:
        rs = build_root_system(t)
        m = multiplicity(rs, mv)
        r = rho(rs, m)
        pts = _chamber_points(rs, rng, 5)
        worst = 0.0
        for _ in range(10):
            lam = rng.uniform(-1.5, 1.5, rs.rank) + 1j * rng.uniform(-1.5, 1.5, rs.rank)
            # stencils stay inside the chamber, so the series applies to the whole batch
            f = (lambda lam_: lambda P: phi_series_values(rs, m, lam_, np.atleast_2d(P)))(lam)
            phi = f(pts)
            Lphi = np.array([apply_L(rs, m, f, p, step=1e-2) for p in pts])
            ev = lam @ lam - r @ r
            worst = max(worst, float(np.linalg.norm(Lphi - ev * phi) / np.linalg.norm(phi)))
        out.append(_check(f"eigen/{t}_{_label(mv)}", 0.0, 0.0, worst, tol,
                          "L(m) phi_lam = ((lam,lam) - (rho,rho)) phi_lam; Richardson FD residual "
                          "relative to ||phi|| over 5 points of A+(Omega), 10 random lambda"))
    return out


def _label(mv) -> str:
    if isinstance(mv, dict):
        return "m" + "_".join(f"{k}{v:g}" for k, v in mv.items())
    return f"m{mv:g}"


# ---------------------------------------------------------------------------
# 4. closed form for m = 2


def suite_closed_form(rng, tol=1e-10) -> list[Check]:
    out = []
    for t in ("A1", "A2"):
        rs = build_root_system(t)
        m = multiplicity(rs, 2)
        pts = _chamber_points(rs, rng, 20, lo=0.6, hi=2.0, imag=0.6)
        lams = rng.uniform(-2, 2, (10, rs.rank)) + 1j * rng.uniform(-2, 2, (10, rs.rank))
        closed = even_case.phi_complex(rs, m, lams, pts)
        series = np.array([[hypergeometric_function(rs, m, l, p, method="series") for p in pts]
                           for l in lams])
        rel = float((np.abs(series - closed) / np.abs(closed)).max())
        out.append(_check(f"closed_form/{t}_m2", 0.0, 0.0, rel, tol,
                          "m=2: series phi agrees with c(lam) Alt / delta^{1/2} on 20 points "
                          "of A+(Omega), 10 random lambda (relative)"))
    return out


# ---------------------------------------------------------------------------
# 5. Plancherel and inversion


@dataclass
class TransformSetup:
    rs: object
    m: object
    width: float
    x_radius: float
    lam_radius: float
    n: int
    n_angular: int | None = None

    def grids(self, k: float = 1.0):
        n = _ladder_n(self.n, k)
        na = None if self.n_angular is None else max(8, int(round(self.n_angular * k)))
        xg = weyl_grid(self.rs, n, self.x_radius, n_angular=na)
        lg = weyl_grid(self.rs, n, self.lam_radius, space="a*", n_angular=na)
        return xg, lg

    def function(self, grid):
        return TestFunction("gaussian", self.width).sample(grid, self.rs)


def transform_setup(type_, mv, width, tol=1e-12, n_scale: float = 1.0) -> TransformSetup:
    rs = build_root_system(type_)
    m = multiplicity(rs, mv)
    xr, lr = gaussian_radii(rs, rho(rs, m), width, tol)
    if rs.rank == 1:
        return TransformSetup(rs, m, width, xr, lr, _ladder_n(resolved_nodes(xr, lr), n_scale))
    return TransformSetup(rs, m, width, xr, lr, _ladder_n(64, n_scale), max(8, int(32 * n_scale)))


def suite_plancherel(rng, tol=1e-3, tol_inv=1e-4, widths=(0.5, 1.0, 2.0)) -> list[Check]:
    out = []
    for t, mv in (("A1", 0.0), ("A1", 2.0), ("A2", 2.0)):
        for w in widths:
            S = transform_setup(t, mv, w)
            ladder = []
            for k in (0.25, 0.5, 1.0):
                xg, lg = S.grids(k)
                f = S.function(xg)
                lhs, rhs = transform.plancherel_check(S.rs, S.m, f, lg)
                ladder.append(abs(rhs / lhs - 1))
            mono = decreasing(ladder)
            c = _check(f"plancherel/{t}_{_label(mv)}_width{w:g}", lhs, rhs, ladder[-1], tol,
                       "||(1/|W|) F(m;f)||^2_{dnu} / ||f||^2_{dmu} = 1; defect decreases under "
                       "2x refinement", ladder=[float(x) for x in ladder], decreasing=mono)
            c.passed = c.passed and mono
            out.append(c)
            xg, lg = S.grids(1.0)
            f = S.function(xg)
            Ff = transform.hypergeometric_fourier_grid(S.rs, S.m, f, lg)
            inv = transform.inverse_on_grid(S.rs, S.m, Ff, xg)
            err = float(np.abs(inv.values - f.values).max())
            out.append(_check(f"inversion/{t}_{_label(mv)}_width{w:g}", 0.0, 0.0, err, tol_inv,
                              "inverse transform recovers f: sup error on the grid"))
    return out


# ---------------------------------------------------------------------------
# 6. symbol of L(m)


def suite_symbol(rng, tol=1e-4) -> list[Check]:
    S = transform_setup("A1", 2.0, 1.0)
    xg, _ = S.grids()
    lams = np.linspace(0.25, 8.0, 16)[:, None]
    res, norm1 = transform.symbol_laplace_check(S.rs, S.m, TestFunction("gaussian", 1.0), xg, lams)
    worst = float((res / ((1 + lams[:, 0] ** 2) * norm1)).max())
    return [_check("symbol/A1_m2", 0.0, 0.0, worst, tol,
                   "F(m; L(m) f)(lam) = -(|lam|^2 + |rho|^2) F(m; f)(lam) on 16 spectral points; "
                   "defect is max residual / ((1+|lam|^2) ||f||_1)", norm1=norm1)]


# ---------------------------------------------------------------------------
# 7. Euclidean Segal-Bargmann


def suite_euclidean_sb(rng, tol=1e-6) -> list[Check]:
    out = []
    xr, lr = 8.0, 9.0
    exact = np.sqrt(np.pi)
    for t in (0.1, 0.5, 1.0):
        X, Y = heat.complex_grids(1, t, xr, lr)
        n = resolved_nodes(X.radius, lr)
        xg = box_grid(1, n, xr)
        lg = box_grid(1, n, lr, space="a*")
        f = GridFunction(xg, np.exp(-xg.nodes[:, 0] ** 2 / 2), Symmetry.W_INVARIANT)
        lhs, rhs = heat.euclidean_segal_bargmann_unitarity(f, t, lg, X, Y)
        d = max(abs(rhs / lhs - 1), abs(lhs / exact - 1), abs(rhs / exact - 1))
        out.append(_check(f"euclidean_sb/t{t:g}", lhs, rhs, d, tol,
                          "r=1, f = exp(-x^2/2): Fock norm of the heat extension equals "
                          "||f||^2 = sqrt(pi)", exact=exact))
    return out


# ---------------------------------------------------------------------------
# 8. hypergeometric Fock isometry


def _fock_grids(S: TransformSetup, t: float, k: float):
    xr, yr = heat.complex_radii(t, S.x_radius, S.lam_radius)
    n = resolved_nodes(xr, S.lam_radius)
    ny = resolved_nodes(yr, 1 / np.sqrt(t), factor=4.0, minimum=32)
    nk, nyk = _ladder_n(n, k), _ladder_n(ny, k)
    xg = weyl_grid(S.rs, nk, S.x_radius)
    lg = weyl_grid(S.rs, nk, S.lam_radius, space="a*")
    X = box_grid(S.rs.rank, nk, xr)
    Y = box_grid(S.rs.rank, nyk, yr)
    return xg, lg, X, Y


BUMP_RADIUS = 2.0
BUMP_LAM_RADIUS = 40.0  # bump transform ~ exp(-c sqrt(lam)): truncation 2e-8 at t-independent cost
BUMP_X_NODES = 512


def suite_fock(rng, tol=1e-3) -> list[Check]:
    """Compactly supported bump; the ladder doubles the lambda-range with all node counts."""
    out = []
    rs = build_root_system("A1")
    m = multiplicity(rs, 2)
    tf = TestFunction("bump", BUMP_RADIUS)
    xg = weyl_grid(rs, BUMP_X_NODES, BUMP_RADIUS)
    f = tf.sample(xg, rs)
    lhs = f.norm_sq(delta_density(rs, m, xg.nodes))
    for t in (0.1, 0.5, 1.0):
        ladder = []
        for k in (0.5, 1.0, 2.0):
            lr = BUMP_LAM_RADIUS * k
            X, Y = heat.complex_grids(1, t, BUMP_RADIUS, lr)
            lg = weyl_grid(rs, len(X.nodes), lr, space="a*")
            Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
            rhs = heat.fock_norm(rs, m, Ff, t, X, Y)
            ladder.append(abs(rhs / lhs - 1))
            if k == 1.0:
                at_default = rhs, ladder[-1]
        mono = decreasing(ladder)
        c = _check(f"fock/A1_m2_bump_t{t:g}", lhs, at_default[0], at_default[1], tol,
                   "double integral of |Lambda F|^2 against the Fock weight equals ||f||^2_{dmu} "
                   "for a compactly supported bump; defect decreases under simultaneous 2x "
                   "refinement of lambda-, X- and Y-grids", ladder=[float(x) for x in ladder], decreasing=mono)
        c.passed = c.passed and mono
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# 9. Hall-Mitchell


def suite_hall_mitchell(rng, tol=1e-3, tol_anti=1e-10, tol_mero=1e-8) -> list[Check]:
    S = transform_setup("A1", 2.0, 1.0)
    t = 0.5
    xg, lg, X, Y = _fock_grids(S, t, 1.0)
    f = S.function(xg)
    samples = rng.uniform(-1.5, 1.5, (12, 1)) + 1j * rng.uniform(-1.5, 1.5, (12, 1))
    rep = heat.hall_mitchell_check(S.rs, S.m, f, t, lg, X, Y, samples)
    return [
        _check("hall_mitchell/A1_norm_identity", rep.lhs, rep.rhs, abs(rep.ratio - 1), tol,
               "||f||^2 equals the Gaussian-weighted norm of delta^{1/2} U, t = 0.5"),
        _check("hall_mitchell/A1_sign_symmetry", 0.0, 0.0, rep.antisymmetry, tol_anti,
               "delta^{1/2} U (w Z) = sign(w) delta^{1/2} U (Z), relative to max |delta^{1/2} U|"),
        _check("hall_mitchell/A1_meromorphic_route", 0.0, 0.0, rep.meromorphic_defect, tol_mero,
               "delta^{1/2}(Z) U(Z) with U continued through the closed form of phi equals "
               "Lambda F(Z), relative to max |Lambda F|"),
    ]


# ---------------------------------------------------------------------------
# 10. Abel inversion


def suite_abel(rng, tol=1e-4) -> list[Check]:
    S = transform_setup("A1", 2.0, 1.0)
    xg, lg = S.grids()
    f = S.function(xg)
    out = []
    for method in ("spectral", "fd"):
        rep = even_case.abel_inversion_check(S.rs, S.m, f, lg, delta_min=0.01, method=method)
        out.append(_check(f"abel_inv/A1_m2_{method}", 0.0, 0.0, rep.max_relative, tol,
                          "D (Abel f) = |W| delta f on grid points with delta >= 0.01; relative "
                          "to |W| delta(a) max|f|", method=method, points=len(rep.points)))
    return out


# ---------------------------------------------------------------------------
# 11. Lambda for m = 2


def suite_lambda(rng, tol_pointwise=1e-6, tol_iso=1e-3, tol_inter=1e-4) -> list[Check]:
    out = []
    for t in ("A1", "A2"):
        S = transform_setup(t, 2.0, 1.0)
        xg, lg = S.grids()
        f = S.function(xg)
        Ff = transform.hypergeometric_fourier_grid(S.rs, S.m, f, lg)
        Lf = transform.lambda_map(S.rs, S.m, f, lg, Ff=Ff)
        target = even_case.delta_half(S.rs, xg.nodes) * f.values
        out.append(_check(f"lambda/{t}_m2_multiplication", 0.0, 0.0,
                          np.abs(Lf.values - target).max(), tol_pointwise,
                          "m=2: Lambda f = delta^{1/2} f pointwise on the grid"))
        a = Lf.norm_sq()
        b = f.norm_sq(delta_density(S.rs, S.m, xg.nodes))
        out.append(_check(f"lambda/{t}_m2_isometry", np.sqrt(a), np.sqrt(b),
                          abs(np.sqrt(a / b) - 1), tol_iso,
                          "||Lambda f||_{L2(dx)} / ||f||_{L2(delta dx)} = 1"))
        out.append(_intertwining(S, xg, lg, f, tol_inter))
    return out


def _intertwining(S, xg, lg, f, tol) -> Check:
    """``Lambda(L(m) f) = (L_A - |rho|^2) Lambda f`` at sample nodes, both sides by differences."""
    rs, m = S.rs, S.m
    fn = TestFunction("gaussian", S.width).as_callable(rs)
    Lf = GridFunction(xg, apply_L_grid(rs, m, fn, xg.nodes), Symmetry.W_INVARIANT)
    LFf = transform.hypergeometric_fourier_grid(rs, m, Lf, lg)
    Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
    # sample nodes where f is not negligible
    rad = np.linalg.norm(xg.nodes, axis=1)
    cand = np.flatnonzero(rad < 2.0 / np.sqrt(S.width))
    idx = cand[np.linspace(0, len(cand) - 1, min(24, len(cand))).round().astype(int)]
    P = xg.nodes[idx]
    lhs = transform.lambda_map(rs, m, Lf, lg, points=P, Ff=LFf)

    def lam_f(Q):
        return transform.lambda_map(rs, m, f, lg, points=np.atleast_2d(Q), Ff=Ff)

    flat = multiplicity(rs, 0.0)
    r2 = float(rho(rs, m) @ rho(rs, m))
    rhs = apply_L_grid(rs, flat, lam_f, P, step=2e-2) - r2 * lam_f(P)
    scale = np.abs(rhs).max()
    return _check(f"lambda/{rs.type}_m2_intertwining", 0.0, 0.0,
                  np.abs(lhs - rhs).max() / scale, tol,
                  "Lambda(L(m) f) = (L_A - |rho|^2) Lambda f, both operators by finite "
                  "differences; relative to max |rhs|")


# ---------------------------------------------------------------------------
# 12. heat flow


def suite_heat(rng, tol_semi=1e-10, tol_init=1e-3) -> list[Check]:
    S = transform_setup("A1", 2.0, 1.0)
    rs, m = S.rs, S.m
    # room for the heat spread of H_{0.2} f; wider boxes expose the roundoff floor times delta
    xr = S.x_radius + 4 * np.sqrt(2 * 0.2)
    n = resolved_nodes(xr, S.lam_radius)
    xg = weyl_grid(rs, n, xr)
    lg = weyl_grid(rs, n, S.lam_radius, space="a*")
    f = S.function(xg)
    Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
    dens = delta_density(rs, m, xg.nodes)
    out = []
    mult = heat.heat_multiplier_semigroup(rs, m, lg.nodes, 0.2, 0.3)
    t1, t2 = 0.2, 0.3
    u1 = heat.heat_on_grid(rs, m, Ff, xg, t1)
    Fu1 = transform.hypergeometric_fourier_grid(rs, m, u1, lg)
    two = heat.heat_on_grid(rs, m, Fu1, xg, t2).values
    one = heat.heat_on_grid(rs, m, Ff, xg, t1 + t2).values
    evald = float(np.abs(two - one).max() / np.abs(one).max())
    out.append(_check("heat/semigroup_multiplier", 0.0, 0.0, mult, tol_semi,
                      "e^{-t(.)} e^{-s(.)} = e^{-(t+s)(.)} on the spectral grid"))
    out.append(_check("heat/semigroup_evaluated", 0.0, 0.0, evald, tol_semi,
                      "H_s(H_t f) = H_{t+s} f evaluated through the transform (relative sup)"))
    nf = np.sqrt(f.norm_sq(dens))
    times = (1.0, 0.5, 0.1, 1e-2, 1e-3, 1e-4)
    norms, errs = [], []
    for t in times:
        u = heat.heat_on_grid(rs, m, Ff, xg, t)
        norms.append(np.sqrt(u.norm_sq(dens)))
        errs.append(np.sqrt(GridFunction(xg, u.values - f.values).norm_sq(dens)) / nf)
    excess = max(0.0, max(n / nf - 1 for n in norms))
    out.append(_check("heat/contraction", max(norms), nf, excess, ROUNDOFF_FLOOR,
                      "||H_t f||_{dmu} <= ||f||_{dmu} for t in {1, 0.5, 0.1, 1e-2, 1e-3, 1e-4}",
                      ratios=[float(n / nf) for n in norms]))
    mono = all(b < a for a, b in zip(errs, errs[1:]))
    c = _check("heat/initial_limit", errs[-1], 0.0, errs[-1], tol_init,
               "||H_t f - f|| / ||f|| decreases as t decreases and is small at t = 1e-4",
               errors=[float(e) for e in errs], times=list(times), decreasing=mono)
    c.passed = c.passed and mono
    out.append(c)
    return out


SUITES: dict[str, Callable] = {
    "gamma": suite_gamma,
    "c_function": suite_c_function,
    "eigen": suite_eigen,
    "closed_form": suite_closed_form,
    "plancherel": suite_plancherel,
    "symbol": suite_symbol,
    "euclidean_sb": suite_euclidean_sb,
    "fock": suite_fock,
    "hall_mitchell": suite_hall_mitchell,
    "abel_inv": suite_abel,
    "lambda": suite_lambda,
    "heat": suite_heat,
}


def run_suites(names=("all",), seed: int = 0) -> list[Check]:
    """Run the named suites (``"all"`` for every suite) with a seeded generator each.

    A suite's generator depends only on ``seed`` and the suite, not on which
    other suites run alongside it.
    """
    if "all" in names:
        names = tuple(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    out = []
    order = list(SUITES)
    for name in names:
        rng = np.random.default_rng([seed, order.index(name)])
        t0 = time.perf_counter()
        checks = SUITES[name](rng)
        dt = time.perf_counter() - t0
        for c in checks:
            c.details.setdefault("suite_seconds", round(dt, 3))
        out.extend(checks)
    return out
