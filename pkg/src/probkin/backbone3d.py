"""Protein backbone construction from dihedral angles.

Internal-coordinate chain building: each atom is placed from the three
previously placed atoms given a bond length, a bond angle and a
dihedral (natural-extension reference frame).  Only backbone heavy
atoms N, CA, C are built, with ideal bond geometry held fixed, so a
conformation is fully described by the (phi, psi) dihedrals.

``place_atom`` and ``build_backbone`` broadcast over leading batch
dimensions; building k conformations in one call costs close to one
build, which is what makes finite-difference gradients of coarse maps
affordable inside a sampler.

Conventions: bond angles in degrees, dihedrals in radians, lengths in
Angstrom.  phi[0] and psi[-1] do not influence the coordinates (their
defining neighbours do not exist) but are carried so angle arrays have
one entry per residue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrameError, DomainError

ATOM_NAMES = ("N", "CA", "C")

_COLLINEAR_TOL = 1e-9


@dataclass(frozen=True)
class GeometryParams:
    """Fixed covalent geometry of the backbone (Engh-Huber style ideals).

    Bond lengths in Angstrom, angles in degrees.  ``omega`` is the
    peptide-bond dihedral, 180 for the trans conformation.
    """

    n_ca: float = 1.458
    ca_c: float = 1.525
    c_n: float = 1.329
    n_ca_c: float = 111.2
    ca_c_n: float = 116.2
    c_n_ca: float = 121.7
    omega: float = 180.0

    def __post_init__(self):
        for name in ("n_ca", "ca_c", "c_n"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"bond length {name} must be > 0, got {v}")
        for name in ("n_ca_c", "ca_c_n", "c_n_ca"):
            v = getattr(self, name)
            if not (0.0 < v < 180.0):
                raise DomainError(f"bond angle {name} must be in (0, 180) degrees, got {v}")
        if abs(self.omega) != 180.0:
            raise DomainError(f"only trans peptides are supported: omega must be +-180, got {self.omega}")


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.cross carries noticeable overhead on small batches; this is the hot path
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def _unit(v: np.ndarray, what: str) -> np.ndarray:
    norm = np.sqrt((v * v).sum(axis=-1, keepdims=True))
    if np.any(norm < 1e-12):
        raise DegenerateFrameError(f"{what} has zero length")
    return v / norm


def place_atom(a, b, c, bond_length, bond_angle_deg, dihedral):
    """Place atom d bonded to c, given the frame atoms a-b-c.

    The new atom satisfies |d - c| = bond_length, angle(b, c, d) =
    bond_angle_deg and dihedral(a, b, c, d) = dihedral (radians).
    Broadcasts over leading dimensions of the coordinate arrays; the
    scalar geometry arguments may also be arrays of the batch shape.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    bc = _unit(c - b, "b-c bond")
    ab = b - a
    n = _cross(ab, bc)
    n_norm = np.sqrt((n * n).sum(axis=-1, keepdims=True))
    ab_norm = np.sqrt((ab * ab).sum(axis=-1, keepdims=True))
    if np.any(n_norm < _COLLINEAR_TOL * ab_norm) or np.any(ab_norm < 1e-12):
        raise DegenerateFrameError("frame atoms a, b, c are collinear")
    n = n / n_norm
    m = _cross(n, bc)
    ang = np.radians(np.asarray(bond_angle_deg, dtype=float))
    tor = np.asarray(dihedral, dtype=float)
    length = np.asarray(bond_length, dtype=float)
    d_bc = (-length * np.cos(ang))[..., None]
    d_m = (length * np.sin(ang) * np.cos(tor))[..., None]
    d_n = (length * np.sin(ang) * np.sin(tor))[..., None]
    return c + d_bc * bc + d_m * m + d_n * n


def measure_dihedral(p0, p1, p2, p3):
    """Signed dihedral angle of the four points, radians in (-pi, pi].

    Sign convention matches :func:`place_atom`: placing with dihedral t
    and measuring returns t.
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    p3 = np.asarray(p3, dtype=float)
    b0 = p0 - p1
    b1 = _unit(p2 - p1, "central bond")
    b2 = p3 - p2
    v = b0 - (b0 * b1).sum(axis=-1, keepdims=True) * b1
    w = b2 - (b2 * b1).sum(axis=-1, keepdims=True) * b1
    x = (v * w).sum(axis=-1)
    y = (_cross(b1, v) * w).sum(axis=-1)
    out = np.arctan2(y, x)
    out = np.where(out <= -math.pi, math.pi, out)
    return float(out) if out.ndim == 0 else out


def measure_bond_angle(a, b, c):
    """Angle at b subtended by a and c, in degrees."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    u = _unit(a - b, "b-a bond")
    v = _unit(c - b, "b-c bond")
    cosang = np.clip((u * v).sum(axis=-1), -1.0, 1.0)
    out = np.degrees(np.arccos(cosang))
    return float(out) if out.ndim == 0 else out


def _check_dihedral_arrays(phi, psi) -> tuple[np.ndarray, np.ndarray]:
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if phi.shape != psi.shape or phi.ndim < 1:
        raise DomainError("phi and psi must share a shape (..., n_residues)")
    if phi.shape[-1] < 2:
        raise DomainError("need at least 2 residues")
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(psi))):
        raise DomainError("dihedrals must be finite")
    return phi, psi


def build_backbone(phi, psi, geom: GeometryParams = GeometryParams()) -> np.ndarray:
    """Backbone coordinates from per-residue (phi, psi) dihedrals.

    Returns an array of shape (..., n_residues, 3, 3): atoms N, CA, C
    per residue.  The first residue seeds the frame: N at the origin,
    CA on +x, C in the xy-plane.  Broadcasts over leading dimensions of
    phi/psi, building the whole batch in one pass.
    """
    phi, psi = _check_dihedral_arrays(phi, psi)
    n_res = phi.shape[-1]
    batch = phi.shape[:-1]
    omega = math.radians(geom.omega)
    out = np.empty(batch + (n_res, 3, 3))
    n_i = np.broadcast_to(np.zeros(3), batch + (3,))
    ca_i = np.broadcast_to(np.array([geom.n_ca, 0.0, 0.0]), batch + (3,))
    ang = math.radians(geom.n_ca_c)
    c1 = np.array([geom.n_ca - geom.ca_c * math.cos(ang), geom.ca_c * math.sin(ang), 0.0])
    c_i = np.broadcast_to(c1, batch + (3,))
    out[..., 0, 0, :] = n_i
    out[..., 0, 1, :] = ca_i
    out[..., 0, 2, :] = c_i
    for i in range(n_res - 1):
        n_next = place_atom(n_i, ca_i, c_i, geom.c_n, geom.ca_c_n, psi[..., i])
        ca_next = place_atom(ca_i, c_i, n_next, geom.n_ca, geom.c_n_ca, omega)
        c_next = place_atom(c_i, n_next, ca_next, geom.ca_c, geom.n_ca_c, phi[..., i + 1])
        out[..., i + 1, 0, :] = n_next
        out[..., i + 1, 1, :] = ca_next
        out[..., i + 1, 2, :] = c_next
        n_i, ca_i, c_i = n_next, ca_next, c_next
    return out


def measure_backbone_dihedrals(coords) -> tuple[np.ndarray, np.ndarray]:
    """Recover (phi, psi) from backbone coordinates.

    phi[..., 0] and psi[..., -1] are NaN; the atoms that would define
    them do not exist.
    """
    coords = np.asarray(coords, dtype=float)
    if coords.ndim < 3 or coords.shape[-1] != 3 or coords.shape[-2] != 3:
        raise DomainError("coords must have shape (..., n_residues, 3, 3)")
    n_res = coords.shape[-3]
    n = coords[..., :, 0, :]
    ca = coords[..., :, 1, :]
    c = coords[..., :, 2, :]
    batch = coords.shape[:-3]
    phi = np.full(batch + (n_res,), np.nan)
    psi = np.full(batch + (n_res,), np.nan)
    phi[..., 1:] = measure_dihedral(c[..., :-1, :], n[..., 1:, :], ca[..., 1:, :], c[..., 1:, :])
    psi[..., :-1] = measure_dihedral(n[..., :-1, :], ca[..., :-1, :], c[..., :-1, :], n[..., 1:, :])
    return phi, psi


def end_to_end_ca_distance(coords):
    """Distance between the first and last CA atoms."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim < 3 or coords.shape[-2] != 3 or coords.shape[-1] != 3:
        raise DomainError("coords must have shape (..., n_residues, 3, 3)")
    diff = coords[..., -1, 1, :] - coords[..., 0, 1, :]
    out = np.sqrt((diff * diff).sum(axis=-1))
    return float(out) if out.ndim == 0 else out


def ca_distance_matrix(coords) -> np.ndarray:
    """Pairwise CA-CA distances of a single structure, shape (L, L)."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 3 or coords.shape[1:] != (3, 3):
        raise DomainError("coords must have shape (n_residues, 3, 3)")
    ca = coords[:, 1, :]
    diff = ca[:, None, :] - ca[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def end_to_end_grad(phi, psi, geom: GeometryParams = GeometryParams(), h: float = 1e-5):
    """Gradient of the end-to-end CA distance w.r.t. (phi, psi).

    Central finite differences with step h, evaluated as a single
    batched build of 4 * n_residues perturbed conformations.  Returns
    (grad_phi, grad_psi); the entries for phi[0] and psi[-1] are exactly
    zero since those dihedrals do not move any atom.
    """
    phi, psi = _check_dihedral_arrays(phi, psi)
    if phi.ndim != 1:
        raise DomainError("end_to_end_grad expects a single conformation")
    n_res = phi.size
    dims = 2 * n_res
    base = np.concatenate([phi, psi])
    angles = np.tile(base, (2 * dims, 1))
    idx = np.arange(dims)
    angles[idx, idx] += h
    angles[dims + idx, idx] -= h
    d = end_to_end_ca_distance(build_backbone(angles[:, :n_res], angles[:, n_res:], geom))
    g = (d[:dims] - d[dims:]) / (2.0 * h)
    return g[:n_res], g[n_res:]


def coords_to_pdb(coords_list, chain_id: str = "A") -> str:
    """Render one or more backbone conformations as PDB-format text.

    Each conformation becomes a MODEL/ENDMDL block of ATOM records
    (residue type is reported as ALA throughout; only backbone atoms
    exist, so the identity is a placeholder).
    """
    coords_list = [np.asarray(c, dtype=float) for c in coords_list]
    lines = []
    for model_idx, coords in enumerate(coords_list, start=1):
        if coords.ndim != 3 or coords.shape[1:] != (3, 3):
            raise DomainError("each conformation must have shape (n_residues, 3, 3)")
        lines.append(f"MODEL     {model_idx:>4}")
        serial = 1
        for res_idx in range(coords.shape[0]):
            for atom_idx, name in enumerate(ATOM_NAMES):
                x, y, z = coords[res_idx, atom_idx]
                lines.append(
                    f"ATOM  {serial:>5} {' ' + name:<4} ALA {chain_id}{res_idx + 1:>4}    "
                    f"{x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{0.0:6.2f}          {name[0]:>2}"
                )
                serial += 1
        lines.append("ENDMDL")
    lines.append("END")
    return "\n".join(lines) + "\n"
