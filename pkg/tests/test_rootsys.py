import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergeo_heat.errors import UnsupportedRootSystem
from hypergeo_heat.rootsys import (SUPPORTED_TYPES, DomainKind, TubeDomain, build_root_system,
                                   coroot, in_domain, in_omega, lattice_shell, multiplicity, rho,
                                   to_chamber, weyl_group)


def _has_row(R, v, tol=1e-9):
    return bool(np.any(np.linalg.norm(R - v, axis=1) < tol))


@pytest.mark.parametrize("type_", SUPPORTED_TYPES)
def test_axioms(type_):
    rs = build_root_system(type_)
    R = rs.roots
    for a in R:
        for b in R:
            refl = b - 2 * (a @ b) / (a @ a) * a
            assert _has_row(R, refl)
        assert np.isclose(a @ coroot(a), 2.0)
    pos = rs.positive_roots
    assert len(pos) * 2 == len(R)
    for p in pos:
        assert not _has_row(pos, -p)
    coeffs = rs.simple_coords[rs.positive]
    assert np.all(coeffs >= -1e-12)
    assert np.allclose(coeffs, np.round(coeffs))


@pytest.mark.parametrize("type_,order", [("A1", 2), ("BC1", 2), ("A1xA1", 4), ("A2", 6), ("B2", 8)])
def test_weyl_group(type_, order):
    rs = build_root_system(type_)
    W = weyl_group(rs)
    assert len(W) == order
    assert np.allclose(W.elements[0], np.eye(rs.rank))
    for w in W.elements:
        for a in rs.roots:
            assert _has_row(rs.roots, w @ a)
    for i in range(len(W)):
        for j in range(len(W)):
            W.compose(i, j)  # closure
    if type_ == "A2":
        assert sorted(W.signs).count(-1) == 3
    if type_ == "A1":
        assert W.signs == (1, -1)


def test_build_examples():
    a1 = build_root_system("A1")
    assert len(a1.positive) == 1 and len(a1.roots) == 2
    assert len(build_root_system("A2").positive) == 3
    bc1 = build_root_system("BC1")
    assert len(bc1.positive) == 2
    assert len(bc1.reduced_positive) == 1
    alpha = bc1.roots[bc1.reduced_positive[0]]
    assert _has_row(bc1.positive_roots, 2 * alpha)
    with pytest.raises(UnsupportedRootSystem):
        build_root_system("G2")
    with pytest.raises(ValueError):
        build_root_system("A1", scale=-1.0)


def test_rho_examples():
    a1 = build_root_system("A1")
    alpha = a1.positive_roots[0]
    assert np.allclose(rho(a1, multiplicity(a1, 2)), alpha)
    for t in SUPPORTED_TYPES:
        rs = build_root_system(t)
        assert np.allclose(rho(rs, multiplicity(rs, 0)), 0)
    bc1 = build_root_system("BC1")
    al = bc1.roots[bc1.reduced_positive[0]]
    assert np.allclose(rho(bc1, multiplicity(bc1, {"alpha": 2, "2alpha": 1})), 2 * al)


def test_multiplicity_invariance():
    rs = build_root_system("B2")
    m = multiplicity(rs, {"long": 1.0, "short": 2.5})
    W = weyl_group(rs)
    for i, a in enumerate(rs.roots):
        for w in W.elements:
            j = rs.root_index(w @ a)
            assert m.values[i] == m.values[j]
    with pytest.raises(ValueError):
        multiplicity(rs, -1.0)


def test_lattice_shell():
    a1 = build_root_system("A1")
    s = lattice_shell(a1, 3)
    assert s.coeffs[:, 0].tolist() == [0, 1, 2, 3]
    a2 = build_root_system("A2")
    assert len(lattice_shell(a2, 1)) == 3
    assert len(lattice_shell(a2, 2)) == 6
    assert np.array_equal(lattice_shell(a2, 4).coeffs, lattice_shell(a2, 4).coeffs)


def test_domains():
    a1 = build_root_system("A1")
    alpha = a1.positive_roots[0]
    omega = TubeDomain(DomainKind.OMEGA, a1)
    assert in_domain(omega, np.zeros(1))
    H = np.pi / 2 * alpha / (alpha @ alpha)
    assert not in_domain(omega, H)
    assert in_domain(omega, 0.99 * H)
    a2 = build_root_system("A2")
    r = rho(a2, multiplicity(a2, 1))
    assert in_domain(TubeDomain(DomainKind.POSITIVE_CHAMBER, a2), r)
    assert not in_domain(TubeDomain(DomainKind.POSITIVE_CHAMBER, a2), -r)
    assert in_omega(a2, np.zeros((3, 2))).all()


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["A2", "B2", "A1xA1"]),
       st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
def test_to_chamber(type_, h):
    rs = build_root_system(type_)
    k, v = to_chamber(rs, np.array(h))
    assert np.all(rs.simple_roots @ v >= -1e-12)
    assert np.isclose(np.linalg.norm(v), np.linalg.norm(h))


def test_serialisation_roundtrip():
    from hypergeo_heat.rootsys import RootSystem
    rs = build_root_system("B2", 2.0)
    back = RootSystem.from_dict(rs.to_dict())
    assert np.allclose(back.roots, rs.roots)
    assert back.type == "B2"
