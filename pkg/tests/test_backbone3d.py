"""Tests for dihedral-driven backbone construction and measurement.

Round-trip (build then measure) and rigid-motion invariance are the two
load-bearing properties; helix geometry against textbook Calpha spacings
serves as the external oracle for the placement conventions.
"""

import math

import numpy as np
import pytest

from probkin.backbone3d import (
    ATOM_NAMES,
    GeometryParams,
    build_backbone,
    ca_distance_matrix,
    coords_to_pdb,
    end_to_end_ca_distance,
    end_to_end_grad,
    measure_backbone_dihedrals,
    measure_bond_angle,
    measure_dihedral,
    place_atom,
)
from probkin.errors import DegenerateFrameError, DomainError


def random_dihedrals(rng, n_res, size=None):
    shape = (n_res,) if size is None else (size, n_res)
    return (
        rng.uniform(-math.pi, math.pi, size=shape),
        rng.uniform(-math.pi, math.pi, size=shape),
    )


def test_geometry_params_validation():
    with pytest.raises(DomainError):
        GeometryParams(n_ca=0.0)
    with pytest.raises(DomainError):
        GeometryParams(n_ca_c=180.0)
    with pytest.raises(DomainError):
        GeometryParams(omega=90.0)  # only trans peptides are supported


def test_place_atom_satisfies_its_three_constraints():
    rng = np.random.default_rng(8)
    for _ in range(50):
        a, b, c = rng.normal(size=(3, 3))
        if np.linalg.norm(np.cross(b - a, c - b)) < 1e-6:
            continue
        length = rng.uniform(1.0, 2.0)
        angle = rng.uniform(30.0, 150.0)
        dihedral = rng.uniform(-math.pi, math.pi)
        d = place_atom(a, b, c, length, angle, dihedral)
        assert np.linalg.norm(d - c) == pytest.approx(length, abs=1e-12)
        assert measure_bond_angle(b, c, d) == pytest.approx(angle, abs=1e-9)
        assert measure_dihedral(a, b, c, d) == pytest.approx(dihedral, abs=1e-10)


def test_place_atom_rejects_collinear_frame():
    a, b, c = np.zeros(3), np.array([1.0, 0.0, 0.0]), np.array([2.0, 0.0, 0.0])
    with pytest.raises(DegenerateFrameError):
        place_atom(a, b, c, 1.5, 109.0, 0.5)


def test_measure_dihedral_sign_convention():
    # Looking down the b->c axis, a positive dihedral rotates d
    # clockwise from a; the +90 degree case fixes the handedness.
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 0.0, 0.0])
    c = np.array([0.0, 1.0, 0.0])
    d_plus = np.array([0.0, 1.0, -1.0])
    assert measure_dihedral(a, b, c, d_plus) == pytest.approx(math.pi / 2.0, abs=1e-12)
    assert measure_dihedral(a, b, c, np.array([0.0, 1.0, 1.0])) == pytest.approx(-math.pi / 2.0, abs=1e-12)
    assert measure_dihedral(a, b, c, np.array([1.0, 1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert measure_dihedral(a, b, c, np.array([-1.0, 1.0, 0.0])) == pytest.approx(math.pi, abs=1e-12)


def test_build_backbone_bond_geometry_invariants():
    geom = GeometryParams()
    rng = np.random.default_rng(17)
    phi, psi = random_dihedrals(rng, 6)
    coords = build_backbone(phi, psi, geom)
    assert coords.shape == (6, 3, 3)
    for i in range(6):
        n, ca, c = coords[i]
        assert np.linalg.norm(ca - n) == pytest.approx(geom.n_ca, abs=1e-9)
        assert np.linalg.norm(c - ca) == pytest.approx(geom.ca_c, abs=1e-9)
        assert measure_bond_angle(n, ca, c) == pytest.approx(geom.n_ca_c, abs=1e-7)
        if i + 1 < 6:
            n_next = coords[i + 1, 0]
            assert np.linalg.norm(n_next - c) == pytest.approx(geom.c_n, abs=1e-9)
            # trans peptide plane: omega = CA_i - C_i - N_{i+1} - CA_{i+1}
            om = measure_dihedral(ca, c, n_next, coords[i + 1, 1])
            assert abs(abs(om) - math.pi) < 1e-9


def test_round_trip_dihedrals():
    rng = np.random.default_rng(5)
    phi, psi = random_dihedrals(rng, 8)
    coords = build_backbone(phi, psi)
    phi_m, psi_m = measure_backbone_dihedrals(coords)
    assert math.isnan(phi_m[0]) and math.isnan(psi_m[-1])
    np.testing.assert_allclose(phi_m[1:], phi[1:], atol=1e-8)
    np.testing.assert_allclose(psi_m[:-1], psi[:-1], atol=1e-8)


def test_round_trip_dihedrals_batched():
    rng = np.random.default_rng(6)
    phi, psi = random_dihedrals(rng, 5, size=40)
    coords = build_backbone(phi, psi)
    assert coords.shape == (40, 5, 3, 3)
    phi_m, psi_m = measure_backbone_dihedrals(coords)
    np.testing.assert_allclose(phi_m[:, 1:], phi[:, 1:], atol=1e-8)
    np.testing.assert_allclose(psi_m[:, :-1], psi[:, :-1], atol=1e-8)


def test_batched_build_matches_single_builds_exactly():
    rng = np.random.default_rng(9)
    phi, psi = random_dihedrals(rng, 4, size=7)
    batch = build_backbone(phi, psi)
    for k in range(7):
        np.testing.assert_array_equal(batch[k], build_backbone(phi[k], psi[k]))


def test_rigid_motion_invariance_of_distances():
    rng = np.random.default_rng(10)
    phi, psi = random_dihedrals(rng, 8)
    coords = build_backbone(phi, psi)
    # random rotation via QR, with det fixed to +1
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    moved = coords @ q.T + np.array([3.0, -7.0, 0.5])
    assert end_to_end_ca_distance(moved) == pytest.approx(end_to_end_ca_distance(coords), abs=1e-10)
    np.testing.assert_allclose(ca_distance_matrix(moved), ca_distance_matrix(coords), atol=1e-10)


def test_two_residue_straight_chain_ca_spacing():
    # the virtual Calpha-Calpha distance across a trans peptide bond
    coords = build_backbone(np.zeros(2), np.zeros(2))
    d = np.linalg.norm(coords[1, 1] - coords[0, 1])
    assert abs(d - 3.8) < 0.2


def test_helix_mode_geometry():
    # (phi, psi) = (-60, -40) repeated over 8 residues traces a helix
    # whose first-to-last Calpha distance sits in the canonical band.
    phi = np.full(8, math.radians(-60.0))
    psi = np.full(8, math.radians(-40.0))
    coords = build_backbone(phi, psi)
    assert 10.0 <= end_to_end_ca_distance(coords) <= 14.0


def test_canonical_alpha_helix_ca_spacings():
    # (-57, -47) is the textbook alpha helix: CA(i)->CA(i+3) ~ 5.0-5.3 A,
    # CA(i)->CA(i+4) ~ 6.2-6.4 A, rise ~ 1.5 A per residue.
    phi = np.full(12, math.radians(-57.0))
    psi = np.full(12, math.radians(-47.0))
    dm = ca_distance_matrix(build_backbone(phi, psi))
    d3 = np.array([dm[i, i + 3] for i in range(9)])
    d4 = np.array([dm[i, i + 4] for i in range(8)])
    assert np.all((5.0 < d3) & (d3 < 5.3))
    assert np.all((6.2 < d4) & (d4 < 6.4))


def test_ca_distance_matrix_shape_and_symmetry():
    rng = np.random.default_rng(12)
    phi, psi = random_dihedrals(rng, 5)
    dm = ca_distance_matrix(build_backbone(phi, psi))
    assert dm.shape == (5, 5)
    np.testing.assert_array_equal(np.diag(dm), 0.0)
    np.testing.assert_allclose(dm, dm.T, atol=0.0)


def test_end_to_end_distance_batched():
    rng = np.random.default_rng(13)
    phi, psi = random_dihedrals(rng, 6, size=9)
    coords = build_backbone(phi, psi)
    d = end_to_end_ca_distance(coords)
    assert d.shape == (9,)
    for k in range(9):
        assert d[k] == pytest.approx(float(np.linalg.norm(coords[k, -1, 1] - coords[k, 0, 1])), abs=1e-12)


def test_end_to_end_grad_matches_independent_differences():
    # Richardson consistency: the h = 1e-5 batched gradient must agree
    # with a plain h = 1e-6 loop to well under the truncation budget.
    rng = np.random.default_rng(14)
    phi, psi = random_dihedrals(rng, 5)
    g_phi, g_psi = end_to_end_grad(phi, psi)
    h = 1e-6

    def d_of(ph, ps):
        return float(end_to_end_ca_distance(build_backbone(ph, ps)))

    for i in range(5):
        up, dn = phi.copy(), phi.copy()
        up[i] += h
        dn[i] -= h
        assert g_phi[i] == pytest.approx((d_of(up, psi) - d_of(dn, psi)) / (2 * h), abs=5e-6)
        up, dn = psi.copy(), psi.copy()
        up[i] += h
        dn[i] -= h
        assert g_psi[i] == pytest.approx((d_of(phi, up) - d_of(phi, dn)) / (2 * h), abs=5e-6)


def test_end_to_end_grad_zero_for_unused_angles():
    rng = np.random.default_rng(15)
    phi, psi = random_dihedrals(rng, 5)
    g_phi, g_psi = end_to_end_grad(phi, psi)
    # phi of the first residue and psi of the last do not enter the build
    assert g_phi[0] == 0.0
    assert g_psi[-1] == 0.0


def test_dihedral_input_validation():
    with pytest.raises(DomainError):
        build_backbone(np.zeros(3), np.zeros(4))
    with pytest.raises(DomainError):
        build_backbone(np.zeros(1), np.zeros(1))
    with pytest.raises(DomainError):
        build_backbone(np.array([0.0, math.nan, 0.0]), np.zeros(3))


def test_pdb_output_fixed_columns():
    rng = np.random.default_rng(16)
    phi, psi = random_dihedrals(rng, 3, size=2)
    coords = build_backbone(phi, psi)
    text = coords_to_pdb(coords, chain_id="B")
    lines = text.splitlines()
    assert lines.count("ENDMDL") == 2
    assert sum(1 for ln in lines if ln.startswith("MODEL")) == 2
    assert lines[-1] == "END"
    atoms = [ln for ln in lines if ln.startswith("ATOM")]
    assert len(atoms) == 2 * 3 * len(ATOM_NAMES)
    serial = 0
    for ln in atoms[: 3 * len(ATOM_NAMES)]:
        serial += 1
        assert len(ln) == 78
        assert int(ln[6:11]) == serial
        assert ln[12:16].strip() in ATOM_NAMES
        assert ln[17:20] == "ALA"
        assert ln[21] == "B"
        assert 1 <= int(ln[22:26]) <= 3
        xyz = [float(ln[30:38]), float(ln[38:46]), float(ln[46:54])]
        assert all(math.isfinite(v) for v in xyz)
        assert ln[76:78].strip() in {"N", "C"}
    # coordinates in the text match the array to print precision
    first = atoms[0]
    np.testing.assert_allclose(
        [float(first[30:38]), float(first[38:46]), float(first[46:54])], coords[0, 0, 0], atol=5e-4
    )
