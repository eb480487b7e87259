"""Small-rank root systems, Weyl groups and related combinatorics.

Roots live in an orthonormal coordinate frame of ``a`` (so ``a*`` is
identified with ``a`` through the standard dot product).  A root ``alpha``
acts on ``H`` by ``alpha(H) = alpha . H`` and the coroot is
``H_alpha = 2 alpha / (alpha, alpha)``.

Supported types: ``A1``, ``A1xA1``, ``A2``, ``B2`` and the non-reduced
``BC1``.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import UnsupportedRootSystem, WeylClosureError

SUPPORTED_TYPES = ("A1", "A1xA1", "A2", "B2", "BC1")

_SQRT3 = np.sqrt(3.0)

# Simple roots at unit scale, rows are roots.
_SIMPLE = {
    "A1": np.array([[1.0]]),
    "BC1": np.array([[1.0]]),
    "A1xA1": np.array([[1.0, 0.0], [0.0, 1.0]]),
    "A2": np.array([[1.0, 0.0], [-0.5, _SQRT3 / 2.0]]),
    "B2": np.array([[1.0, -1.0], [0.0, 1.0]]),
}

_WEYL_ORDER = {"A1": 2, "BC1": 2, "A1xA1": 4, "A2": 6, "B2": 8}

_MAX_WEYL = 1000


def reflection_matrix(alpha: np.ndarray) -> np.ndarray:
    """Matrix of ``r_alpha(H) = H - alpha(H) H_alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    return np.eye(alpha.size) - 2.0 * np.outer(alpha, alpha) / alpha.dot(alpha)


def coroot(alpha: np.ndarray) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return 2.0 * alpha / alpha.dot(alpha)


def _contains(rows: list[np.ndarray], v: np.ndarray, tol: float = 1e-9) -> bool:
    return any(np.allclose(r, v, atol=tol) for r in rows)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A root system in an orthonormal frame.

    ``roots`` holds every root as a row; ``positive`` and ``simple`` are
    index arrays into it.  ``simple_coords[i]`` gives the expansion of
    root ``i`` in the simple roots.  ``gram`` is the matrix of inner
    products of the simple roots.
    """

    type: str
    scale: float
    roots: np.ndarray
    positive: np.ndarray
    simple: np.ndarray
    simple_coords: np.ndarray
    orbits: tuple[tuple[int, ...], ...]
    orbit_labels: tuple[str, ...]

    @property
    def rank(self) -> int:
        return self.roots.shape[1]

    @property
    def gram(self) -> np.ndarray:
        s = self.simple_roots
        return s @ s.T

    @property
    def positive_roots(self) -> np.ndarray:
        return self.roots[self.positive]

    @property
    def simple_roots(self) -> np.ndarray:
        return self.roots[self.simple]

    @property
    def reduced_positive(self) -> np.ndarray:
        """Indices of positive roots ``alpha`` with ``alpha/2`` not a root.

        These are the roots indexing the Gamma-factor product of the
        c-function; for ``BC1`` this is ``{alpha}`` rather than ``{2 alpha}``.
        """
        keep = []
        for i in self.positive:
            if self.root_index(self.roots[i] / 2.0) is None:
                keep.append(i)
        return np.array(keep, dtype=int)

    @property
    def is_reduced(self) -> bool:
        return all(self.root_index(2.0 * r) is None for r in self.roots)

    def root_index(self, v: np.ndarray, tol: float = 1e-9) -> int | None:
        d = np.abs(self.roots - np.asarray(v, dtype=float)).max(axis=1)
        hit = np.flatnonzero(d < tol)
        return int(hit[0]) if hit.size else None

    def double_index(self, i: int) -> int | None:
        """Index of ``2 alpha`` for root ``i``, or ``None``."""
        return self.root_index(2.0 * self.roots[i])

    def orbit_of(self, i: int) -> int:
        for k, orb in enumerate(self.orbits):
            if i in orb:
                return k
        raise KeyError(i)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "rank": self.rank,
            "scale": self.scale,
            "roots": self.roots.tolist(),
            "positive": self.positive.tolist(),
            "simple": self.simple.tolist(),
            "orbit_labels": list(self.orbit_labels),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RootSystem":
        rs = build_root_system(d["type"], d.get("scale", 1.0))
        if "roots" in d and not np.allclose(np.asarray(d["roots"]), rs.roots):
            raise UnsupportedRootSystem("root coordinates do not match the named type")
        return rs


def build_root_system(type: str, scale: float = 1.0) -> RootSystem:
    """Build one of the supported root systems.

    ``scale`` multiplies every root, so the Gram matrix scales by
    ``scale**2``.
    """
    if type not in SUPPORTED_TYPES:
        raise UnsupportedRootSystem(
            f"unsupported root system {type!r}; choose from {SUPPORTED_TYPES}")
    if not scale > 0:
        raise UnsupportedRootSystem("scale must be positive")
    simple = scale * _SIMPLE[type]
    gens = [reflection_matrix(a) for a in simple]

    # Reduced roots: W-orbit of the simple roots.
    roots: list[np.ndarray] = []
    frontier = [a for a in simple]
    while frontier:
        v = frontier.pop()
        if _contains(roots, v):
            continue
        roots.append(v)
        frontier.extend(g @ v for g in gens)
    if type == "BC1":
        roots = roots + [2.0 * r for r in roots]

    R = np.array(roots)
    inv = np.linalg.inv(simple)
    coords = R @ inv
    coords_int = np.rint(coords)
    if not np.allclose(coords, coords_int, atol=1e-9):
        raise UnsupportedRootSystem("roots are not integral in the simple roots")
    coords_int = coords_int.astype(int)
    positive_mask = np.all(coords_int >= 0, axis=1)

    # Canonical order: positive roots first, by height then lex, then negatives.
    order = sorted(
        range(len(R)),
        key=lambda i: (not positive_mask[i], abs(coords_int[i]).sum(),
                       tuple(-abs(coords_int[i]))),
    )
    R = R[order]
    coords_int = coords_int[order]
    positive = np.flatnonzero(np.all(coords_int >= 0, axis=1))
    simple_idx = np.array([
        int(np.flatnonzero(np.abs(R - a).max(axis=1) < 1e-9)[0]) for a in simple
    ])

    W = _closure(gens)
    orbits: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for i in positive:
        if i in seen:
            continue
        orb = set()
        for w in W:
            j = np.flatnonzero(np.abs(R - w @ R[i]).max(axis=1) < 1e-9)
            orb.add(int(j[0]))
        seen |= orb
        orbits.append(tuple(sorted(orb)))

    labels = _orbit_labels(type, R, orbits)
    return RootSystem(type=type, scale=float(scale), roots=R, positive=positive,
                      simple=simple_idx, simple_coords=coords_int,
                      orbits=tuple(orbits), orbit_labels=labels)


def _orbit_labels(type, R, orbits) -> tuple[str, ...]:
    if len(orbits) == 1:
        return ("all",)
    if type == "B2":
        lengths = [R[o[0]].dot(R[o[0]]) for o in orbits]
        return tuple("short" if L == min(lengths) else "long" for L in lengths)
    if type == "BC1":
        lengths = [R[o[0]].dot(R[o[0]]) for o in orbits]
        return tuple("alpha" if L == min(lengths) else "2alpha" for L in lengths)
    return tuple(f"e{k + 1}" for k in range(len(orbits)))


def _closure(gens: Sequence[np.ndarray]) -> list[np.ndarray]:
    r = gens[0].shape[0]
    elements = [np.eye(r)]
    frontier = [np.eye(r)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                if not _contains(elements, h):
                    elements.append(h)
                    nxt.append(h)
                    if len(elements) > _MAX_WEYL:
                        raise WeylClosureError("Weyl group closure exceeded safety bound")
        frontier = nxt
    return elements


@dataclass(frozen=True, eq=False)
class WeylGroup:
    elements: tuple[np.ndarray, ...]
    signs: tuple[int, ...]
    identity: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def matrices(self) -> np.ndarray:
        return np.array(self.elements)

    def index(self, w: np.ndarray) -> int:
        for k, e in enumerate(self.elements):
            if np.allclose(e, w, atol=1e-9):
                return k
        raise KeyError("not an element of this Weyl group")

    def compose(self, i: int, j: int) -> int:
        return self.index(self.elements[i] @ self.elements[j])

    def inverse(self, i: int) -> int:
        return self.index(self.elements[i].T)


_WEYL_CACHE: dict[tuple[str, float], WeylGroup] = {}


def weyl_group(rs: RootSystem) -> WeylGroup:
    """All Weyl group elements as orthogonal matrices, identity first."""
    key = (rs.type, rs.scale)
    if key not in _WEYL_CACHE:
        els = _closure([reflection_matrix(a) for a in rs.simple_roots])
        signs = tuple(int(np.rint(np.linalg.det(w))) for w in els)
        _WEYL_CACHE[key] = WeylGroup(elements=tuple(els), signs=signs)
    return _WEYL_CACHE[key]


def to_chamber(rs: RootSystem, H: np.ndarray) -> tuple[int, np.ndarray]:
    """Return ``(k, w_k H)`` with ``w_k H`` in the closed positive chamber."""
    W = weyl_group(rs)
    simple = rs.simple_roots
    H = np.asarray(H, dtype=float)
    best = None
    for k, w in enumerate(W.elements):
        v = w @ H
        s = (simple @ v).min()
        if s >= -1e-13:
            return k, v
        if best is None or s > best[2]:
            best = (k, v, s)
    return best[0], best[1]


# ---------------------------------------------------------------------------
# multiplicities


@dataclass(frozen=True, eq=False)
class MultiplicityFunction:
    """W-invariant nonnegative multiplicities, one value per root."""

    root_system: RootSystem
    per_orbit: tuple[float, ...]

    def __post_init__(self):
        if len(self.per_orbit) != len(self.root_system.orbits):
            raise ValueError(
                f"{self.root_system.type} has {len(self.root_system.orbits)} root "
                f"orbits {self.root_system.orbit_labels}, got {len(self.per_orbit)} values")
        if any(v < 0 for v in self.per_orbit):
            raise ValueError("multiplicities must be nonnegative")

    @property
    def values(self) -> np.ndarray:
        """Multiplicity of every root (aligned with ``roots``)."""
        rs = self.root_system
        out = np.zeros(len(rs.roots))
        for k, orb in enumerate(rs.orbits):
            for i in orb:
                out[i] = self.per_orbit[k]
        return out

    def of(self, i: int) -> float:
        return float(self.values[i])

    def of_double(self, i: int) -> float:
        """``m_{2 alpha}`` for root ``i`` (zero if ``2 alpha`` is not a root)."""
        j = self.root_system.double_index(i)
        return 0.0 if j is None else float(self.values[j])

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.per_orbit)

    @property
    def is_even(self) -> bool:
        return self.root_system.is_reduced and all(
            float(v).is_integer() and int(v) % 2 == 0 for v in self.per_orbit)

    @property
    def is_geometric_complex(self) -> bool:
        return self.root_system.is_reduced and all(v == 2 for v in self.per_orbit)

    def to_dict(self) -> dict:
        return dict(zip(self.root_system.orbit_labels, self.per_orbit))


def multiplicity(rs: RootSystem, values: float | Sequence[float] | Mapping[str, float]
                 ) -> MultiplicityFunction:
    """Build a multiplicity function.

    ``values`` is a constant, a sequence ordered like ``rs.orbit_labels``,
    or a mapping from orbit label to value.
    """
    if isinstance(values, Mapping):
        missing = set(rs.orbit_labels) - set(values)
        if missing:
            raise ValueError(f"missing multiplicities for orbits {sorted(missing)}")
        per = tuple(float(values[k]) for k in rs.orbit_labels)
    elif np.isscalar(values):
        per = (float(values),) * len(rs.orbits)
    else:
        per = tuple(float(v) for v in values)
    # W-invariance holds by construction: one value per orbit.
    return MultiplicityFunction(rs, per)


def rho(rs: RootSystem, m: MultiplicityFunction) -> np.ndarray:
    """Half the multiplicity-weighted sum of the positive roots."""
    vals = m.values[rs.positive]
    return 0.5 * (vals[:, None] * rs.positive_roots).sum(axis=0)


# ---------------------------------------------------------------------------
# the positive cone of the root lattice


@dataclass(frozen=True, eq=False)
class LatticeShell:
    """Points ``sum n_j alpha_j`` of the positive cone with ``sum n_j <= cap``.

    ``coeffs`` holds the integer coordinates in graded-lexicographic order
    and ``points`` the vectors themselves.
    """

    degree_cap: int
    coeffs: np.ndarray
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def degrees(self) -> np.ndarray:
        return self.coeffs.sum(axis=1)

    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(c): k for k, c in enumerate(self.coeffs.tolist())}


def graded_compositions(r: int, cap: int):
    for d in range(cap + 1):
        block = [c for c in itertools.product(range(d + 1), repeat=r) if sum(c) == d]
        block.sort(reverse=True)
        yield from block


def lattice_shell(rs: RootSystem, degree_cap: int) -> LatticeShell:
    if degree_cap < 0:
        raise ValueError("degree_cap must be nonnegative")
    coeffs = np.array(list(graded_compositions(rs.rank, degree_cap)), dtype=int)
    return LatticeShell(degree_cap, coeffs, coeffs @ rs.simple_roots)


# ---------------------------------------------------------------------------
# tube domains


class DomainKind(enum.Enum):
    OMEGA = "Omega"
    TWO_OMEGA = "TwoOmega"
    POSITIVE_CHAMBER = "PositiveChamber"


@dataclass(frozen=True, eq=False)
class TubeDomain:
    kind: DomainKind
    root_system: RootSystem


def in_domain(d: TubeDomain, H) -> bool:
    """Strict membership test for ``Omega``, ``2 Omega`` or the open chamber."""
    rs = d.root_system
    H = np.asarray(H, dtype=float).reshape(-1)
    if H.size != rs.rank:
        raise ValueError(f"expected a vector of dimension {rs.rank}")
    if d.kind is DomainKind.POSITIVE_CHAMBER:
        return bool(np.all(rs.positive_roots @ H > 0))
    bound = np.pi / 2 if d.kind is DomainKind.OMEGA else np.pi
    return bool(np.all(np.abs(rs.roots @ H) < bound))


def in_omega(rs: RootSystem, H_imag, factor: float = 1.0) -> np.ndarray:
    """Vectorised membership of imaginary parts in ``factor * Omega``."""
    H = np.atleast_2d(np.asarray(H_imag, dtype=float))
    return np.all(np.abs(H @ rs.roots.T) < factor * np.pi / 2, axis=1)
