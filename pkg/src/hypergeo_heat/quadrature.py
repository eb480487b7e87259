"""Quadrature grids, sampled functions and built-in test functions.

Two grid families are provided:

* ``box_grid``: tensor product of a one-dimensional rule on ``[-R, R]``;
* ``weyl_grid``: a grid generated inside the positive chamber and reflected
  by the Weyl group, so that its node set is exactly W-symmetric.  In rank
  one and for A1xA1 it is the tensor box itself; for A2 and B2 it is a polar
  rule on the chamber wedge.

When a grid is W-symmetric and has no node on a wall, ``orbits[k, j]`` is
the index of ``w_k`` applied to chamber node ``j`` and sums of W-invariant
integrands can be restricted to the chamber.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial import cKDTree

from .errors import DomainError
from .rootsys import RootSystem, build_root_system, weyl_group

MIN_NODES = 16
WALL_TOL = 1e-12


class Scheme(str, enum.Enum):
    TRAPEZOID = "trapezoid"
    GAUSS_LEGENDRE = "gauss_legendre"


class Symmetry(str, enum.Enum):
    W_INVARIANT = "W_invariant"
    TAU_W_INVARIANT = "tau_W_invariant"
    NONE = "none"


def rule_1d(n: int, a: float, b: float, scheme: str | Scheme) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point rule on ``[a, b]``."""
    scheme = Scheme(scheme)
    if scheme is Scheme.GAUSS_LEGENDRE:
        x, w = leggauss(n)
        return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w
    x = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[[0, -1]] *= 0.5
    return x, w


@dataclass
class QuadratureGrid:
    """Nodes ``(N, r)`` with positive weights.

    ``space`` is ``"a"`` (the torus side) or ``"a*"`` (spectral side).
    ``spec`` records the builder arguments so the grid can be rebuilt
    from a serialized header.
    """

    nodes: np.ndarray
    weights: np.ndarray
    radius: float
    scheme: str
    shape: str = "box"
    space: str = "a"
    spec: dict = field(default_factory=dict)
    chamber: np.ndarray | None = None
    orbits: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return self.nodes.shape[1]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def volume(self) -> float:
        if self.shape == "box":
            return (2.0 * self.radius) ** self.rank
        if self.shape == "disk":
            return np.pi * self.radius ** 2
        raise ValueError(self.shape)

    @property
    def reducible(self) -> bool:
        """True if W-invariant sums may be taken over the chamber only."""
        return self.orbits is not None

    def integrate(self, values) -> complex:
        return complex(np.dot(self.weights, values))

    def refined(self, factor: int = 2) -> "QuadratureGrid":
        """The same grid family with ``factor`` times the nodes per axis."""
        spec = dict(self.spec)
        for key in ("n", "n_radial", "n_angular"):
            if key in spec:
                spec[key] = int(spec[key]) * factor
        return grid_from_spec(spec)

    def to_dict(self) -> dict:
        return {"spec": self.spec, "radius": self.radius, "scheme": self.scheme,
                "shape": self.shape, "space": self.space, "size": len(self),
                "rank": self.rank}


def box_grid(rank: int, n: int, radius: float, scheme: str | Scheme = Scheme.GAUSS_LEGENDRE,
             space: str = "a") -> QuadratureGrid:
    """Tensor-product rule on ``[-radius, radius]^rank``.

    Even ``n`` keeps nodes off the coordinate hyperplanes for both schemes.
    """
    if n < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} nodes per axis, got {n}")
    if radius <= 0:
        raise ValueError("radius must be positive")
    x, w = rule_1d(n, -radius, radius, scheme)
    mesh = np.meshgrid(*([x] * rank), indexing="ij")
    wmesh = np.meshgrid(*([w] * rank), indexing="ij")
    nodes = np.stack([g.ravel() for g in mesh], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wmesh], axis=1), axis=1)
    spec = {"kind": "box", "rank": rank, "n": n, "radius": radius,
            "scheme": Scheme(scheme).value, "space": space}
    return QuadratureGrid(nodes, weights, radius, Scheme(scheme).value, "box", space, spec)


def _chamber_wedge(rs: RootSystem) -> tuple[float, float]:
    """Angular interval of the positive chamber in rank 2."""
    s1, s2 = rs.simple_roots
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    d1 = rot @ s1
    if d1 @ s2 < 0:
        d1 = -d1
    d2 = rot @ s2
    if d2 @ s1 < 0:
        d2 = -d2
    t1 = np.arctan2(d1[1], d1[0])
    t2 = np.arctan2(d2[1], d2[0])
    lo, hi = sorted((t1, t2))
    mid = 0.5 * (lo + hi)
    probe = np.array([np.cos(mid), np.sin(mid)])
    if np.any(rs.simple_roots @ probe <= 0):
        lo, hi = hi, lo + 2 * np.pi
    return lo, hi


def weyl_grid(rs: RootSystem, n: int, radius: float,
              scheme: str | Scheme = Scheme.GAUSS_LEGENDRE, space: str = "a",
              n_angular: int | None = None) -> QuadratureGrid:
    """W-symmetric grid with orbit maps.

    Rank one and A1xA1 use a tensor box whose axes are the walls.  With
    Gauss-Legendre each axis carries ``n // 2`` nodes on ``(0, radius)`` and
    their mirror images, so densities such as ``|sinh x|^m`` that are not
    smooth across a wall are integrated panel-wise.  A2 and B2 use ``n`` radial Gauss-Legendre nodes on ``(0, radius)`` times
    ``n_angular`` angular nodes on the chamber wedge, reflected by W; the
    integration region is then the disk of that radius.
    """
    if rs.type not in ("A2", "B2"):
        g = box_grid(rs.rank, n, radius, scheme, space)
        if Scheme(scheme) is Scheme.GAUSS_LEGENDRE:
            x, w = rule_1d(n // 2, 0.0, radius, scheme)
            x, w = np.concatenate([-x[::-1], x]), np.concatenate([w[::-1], w])
            mesh = np.meshgrid(*([x] * rs.rank), indexing="ij")
            wmesh = np.meshgrid(*([w] * rs.rank), indexing="ij")
            g.nodes = np.stack([a.ravel() for a in mesh], axis=1)
            g.weights = np.prod(np.stack([a.ravel() for a in wmesh], axis=1), axis=1)
        g.spec.update({"kind": "weyl", "type": rs.type, "scale": rs.scale})
        attach_orbits(g, rs)
        return g
    if n < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} radial nodes, got {n}")
    n_angular = n_angular or max(MIN_NODES // 2, n // 4)
    lo, hi = _chamber_wedge(rs)
    r, wr = rule_1d(n, 0.0, radius, Scheme.GAUSS_LEGENDRE)
    th, wt = rule_1d(n_angular, lo, hi, Scheme.GAUSS_LEGENDRE)
    R, T = np.meshgrid(r, th, indexing="ij")
    WR, WT = np.meshgrid(wr * r, wt, indexing="ij")
    base = np.stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()], axis=1)
    bw = (WR * WT).ravel()
    W = weyl_group(rs)
    nodes = np.concatenate([base @ w.T for w in W.elements])
    weights = np.tile(bw, len(W))
    nc = len(base)
    spec = {"kind": "weyl", "type": rs.type, "scale": rs.scale, "rank": 2,
            "n_radial": n, "n_angular": n_angular, "radius": radius,
            "scheme": Scheme.GAUSS_LEGENDRE.value, "space": space}
    g = QuadratureGrid(nodes, weights, radius, Scheme.GAUSS_LEGENDRE.value, "disk", space, spec)
    g.chamber = np.arange(nc)
    g.orbits = np.arange(len(W) * nc).reshape(len(W), nc)
    return g


def attach_orbits(grid: QuadratureGrid, rs: RootSystem, tol: float = 1e-9) -> None:
    """Compute chamber indices and orbit maps by nearest-node matching.

    Leaves ``grid.orbits`` unset when a node lies on a wall or the node set
    is not W-symmetric.
    """
    X = grid.nodes
    vals = X @ rs.simple_roots.T
    if np.any(np.abs(X @ rs.positive_roots.T) < WALL_TOL):
        grid.chamber = np.flatnonzero(np.all(vals > 0, axis=1))
        grid.orbits = None
        return
    chamber = np.flatnonzero(np.all(vals > 0, axis=1))
    W = weyl_group(rs)
    tree = cKDTree(X)
    orbits = np.empty((len(W), len(chamber)), dtype=int)
    for k, w in enumerate(W.elements):
        d, idx = tree.query(X[chamber] @ w.T)
        if np.any(d > tol * max(1.0, grid.radius)):
            grid.chamber, grid.orbits = chamber, None
            return
        orbits[k] = idx
    if len(W) * len(chamber) != len(X):
        grid.chamber, grid.orbits = chamber, None
        return
    grid.chamber, grid.orbits = chamber, orbits


def node_permutation(grid: QuadratureGrid, w: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """``perm`` with ``nodes[perm[i]] = w @ nodes[i]`` for a W-symmetric grid."""
    tree = cKDTree(grid.nodes)
    d, idx = tree.query(grid.nodes @ np.asarray(w).T)
    if np.any(d > tol * max(1.0, grid.radius)):
        raise DomainError("grid is not symmetric under the given element")
    return idx


def grid_from_spec(spec: dict) -> QuadratureGrid:
    kind = spec.get("kind", "box")
    if kind == "box":
        return box_grid(int(spec["rank"]), int(spec["n"]), float(spec["radius"]),
                        spec.get("scheme", "gauss_legendre"), spec.get("space", "a"))
    if kind == "weyl":
        rs = build_root_system(spec["type"], float(spec.get("scale", 1.0)))
        n = int(spec.get("n", spec.get("n_radial")))
        return weyl_grid(rs, n, float(spec["radius"]), spec.get("scheme", "gauss_legendre"),
                         spec.get("space", "a"), spec.get("n_angular"))
    raise ValueError(f"unknown grid kind {kind!r}")


# ---------------------------------------------------------------------------
# sampled functions


@dataclass
class GridFunction:
    grid: QuadratureGrid
    values: np.ndarray
    symmetry: Symmetry = Symmetry.NONE
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        self.symmetry = Symmetry(self.symmetry)
        if len(self.values) != len(self.grid):
            raise ValueError("values do not match the grid")

    def integral(self, density=None) -> complex:
        v = self.values if density is None else self.values * density
        return self.grid.integrate(v)

    def norm_sq(self, density=None) -> float:
        d = 1.0 if density is None else density
        return float(np.dot(self.grid.weights, np.abs(self.values) ** 2 * d))

    def norm1(self, density=None) -> float:
        d = 1.0 if density is None else density
        return float(np.dot(self.grid.weights, np.abs(self.values) * d))

    def symmetry_defect(self, rs: RootSystem) -> float:
        """``max |f(wx) - chi(w) f(x)|`` with ``chi`` trivial or the sign."""
        W = weyl_group(rs)
        worst = 0.0
        for k, w in enumerate(W.elements):
            perm = node_permutation(self.grid, w)
            chi = W.signs[k] if self.symmetry is Symmetry.TAU_W_INVARIANT else 1.0
            worst = max(worst, float(np.abs(self.values[perm] - chi * self.values).max()))
        return worst

    def scaled(self, s: complex) -> "GridFunction":
        return GridFunction(self.grid, s * self.values, self.symmetry, dict(self.meta))


def save_grid_function(gf: GridFunction, path: str | Path) -> tuple[Path, Path]:
    """Write ``<stem>.csv`` (coordinates, weight, re, im) and ``<stem>.json``."""
    path = Path(path)
    stem = path.with_suffix("")
    csv_path, json_path = stem.with_suffix(".csv"), stem.with_suffix(".json")
    r = gf.grid.rank
    with open(csv_path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow([f"x{i + 1}" for i in range(r)] + ["weight", "re", "im"])
        for x, w, v in zip(gf.grid.nodes, gf.grid.weights, gf.values):
            wr.writerow([repr(float(c)) for c in x] + [repr(float(w)), repr(float(v.real)), repr(float(v.imag))])
    header = {"grid": gf.grid.to_dict(), "symmetry": gf.symmetry.value, "meta": gf.meta,
              "data": csv_path.name}
    json_path.write_text(json.dumps(header, indent=2, default=_json_default))
    return csv_path, json_path


def load_grid_function(path: str | Path) -> GridFunction:
    """Read a grid function written by :func:`save_grid_function`.

    The grid is rebuilt from the header and its nodes checked against the
    CSV; without a usable header the CSV nodes and weights are used as is.
    """
    path = Path(path)
    stem = path.with_suffix("")
    data = np.loadtxt(stem.with_suffix(".csv"), delimiter=",", skiprows=1, ndmin=2)
    json_path = stem.with_suffix(".json")
    header = json.loads(json_path.read_text()) if json_path.exists() else {}
    gdict = header.get("grid", {})
    r = data.shape[1] - 3
    nodes, weights = data[:, :r], data[:, r]
    values = data[:, r + 1] + 1j * data[:, r + 2]
    grid = None
    if gdict.get("spec"):
        grid = grid_from_spec(gdict["spec"])
        if grid.nodes.shape != nodes.shape or np.abs(grid.nodes - nodes).max() > 1e-12:
            raise ValueError("CSV nodes do not match the grid described in the header")
    if grid is None:
        grid = QuadratureGrid(nodes, weights, float(np.abs(nodes).max()),
                              gdict.get("scheme", "unknown"), gdict.get("shape", "box"),
                              gdict.get("space", "a"))
    return GridFunction(grid, values, header.get("symmetry", "none"), header.get("meta", {}))


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """W-invariant test function.

    ``kind="gaussian"``: ``mean_w exp(-width |H - w center|^2)``;
    ``kind="bump"``: ``exp(1 - 1/(1 - |H|^2/width^2))`` inside the ball of
    radius ``width`` and zero outside (smooth, compactly supported).
    """

    __test__ = False  # not a pytest class

    kind: str = "gaussian"
    width: float = 1.0
    center: tuple[float, ...] | None = None
    amplitude: float = 1.0

    def __call__(self, H, rs: RootSystem | None = None) -> np.ndarray:
        H = np.atleast_2d(np.asarray(H, dtype=float))
        if self.kind == "gaussian":
            if self.center is not None and rs is None:
                raise ValueError("a centred gaussian needs the root system to symmetrise")
            if self.center is None:
                return self.amplitude * np.exp(-self.width * (H ** 2).sum(axis=1))
            W = weyl_group(rs)
            c = np.asarray(self.center, dtype=float)
            acc = sum(np.exp(-self.width * ((H - w @ c) ** 2).sum(axis=1)) for w in W.elements)
            return self.amplitude * acc / len(W)
        if self.kind == "bump":
            s = (H ** 2).sum(axis=1) / self.width ** 2
            out = np.zeros(len(H))
            inside = s < 1
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
            return self.amplitude * out
        raise ValueError(f"unknown test function kind {self.kind!r}")

    def sample(self, grid: QuadratureGrid, rs: RootSystem | None = None) -> GridFunction:
        return GridFunction(grid, self(grid.nodes, rs), Symmetry.W_INVARIANT,
                            {"test_function": self.to_dict()})

    def as_callable(self, rs: RootSystem | None = None) -> Callable:
        return lambda H: self(H, rs)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "width": self.width,
                "center": list(self.center) if self.center is not None else None,
                "amplitude": self.amplitude}


def boundary_ratio(gf: GridFunction, density=None) -> float:
    """Largest ``|f * density|`` on the outermost node shell relative to the maximum."""
    v = np.abs(gf.values if density is None else gf.values * density)
    top = v.max()
    if top == 0:
        return 0.0
    rad = np.abs(gf.grid.nodes).max(axis=1) if gf.grid.shape == "box" else \
        np.linalg.norm(gf.grid.nodes, axis=1)
    outer = rad >= rad.max() * (1 - 1e-9)
    return float(v[outer].max() / top)


def gaussian_radii(rs: RootSystem, rho_vec, width: float, tol: float = 1e-14) -> tuple[float, float]:
    """Box radii on ``a`` and ``a*`` adequate for ``exp(-width |H|^2)``.

    On ``a`` the density grows at most like ``exp(2 |rho| |H|)``; on ``a*``
    the transform decays like ``exp(-|lam|^2 / (4 width))`` against a
    polynomial Plancherel density of degree ``2 |positive roots|``.
    """
    L = -np.log(tol)
    rn = float(np.linalg.norm(rho_vec))
    x_r = (rn + np.sqrt(rn * rn + width * L)) / width
    deg = 2 * len(rs.positive)
    lam_r = np.sqrt(4 * width * L)
    for _ in range(3):
        lam_r = np.sqrt(4 * width * (L + deg * np.log1p(lam_r)))
    return float(x_r), float(lam_r)


def resolved_nodes(r_space: float, r_freq: float, factor: float = 1.3,
                   minimum: int = MIN_NODES) -> int:
    """Gauss-Legendre node count resolving ``exp(i lam x)`` for ``|x| <= r_space``, ``|lam| <= r_freq``.

    Rounded up to a multiple of 8 (hence even, keeping nodes off the origin).
    """
    n = max(minimum, int(np.ceil(factor * r_space * r_freq)))
    return int(8 * np.ceil(n / 8))
