"""Array manifold assembly and field evaluation.

The manifold at a point p is the complex 3 x N matrix mapping feed-current
weights to the (radial, theta, phi) E-field components in the spherical
frame at p. Four variants are assembled here: the full near-field model,
the far-field model without frame rotations, the classical isolated
manifold built from per-antenna phase centers, and a phase-only isotropic
lift used as a beamforming baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import ArrayModel
from .dipole import (
    FRAME_GLOBAL,
    SINGULARITY_GUARD_WAVELENGTHS,
    FieldVec,
    SingularityError,
    _alpha_ang_ff_r,
    _alpha_ang_r,
    _alpha_rad_r,
    ff_dipole_transform,
)
from .geometry import rotation_matrix, spherical_basis_batch

VARIANT_NEAR = "near"
VARIANT_FAR = "far"
VARIANT_ISOLATED = "isolated"
VARIANT_ISOTROPIC = "isotropic-lifted"


@dataclass
class ManifoldMatrix:
    """3 x N weight-to-field map at one observation point.

    Rows are ordered (radial, theta, phi) in the spherical frame at
    ``point``. ``variant`` records which model assembled it.
    """

    a: np.ndarray
    point: np.ndarray
    variant: str

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex)
        self.point = np.asarray(self.point, dtype=float)
        if self.a.ndim != 2 or self.a.shape[0] != 3:
            raise ValueError("manifold matrix must have shape (3, N)")

    @property
    def n_antennas(self) -> int:
        return self.a.shape[1]


def _relative_geometry(model: ArrayModel, p: np.ndarray):
    """Segment-relative vectors and distances with the singularity guard."""
    rel = p[None, :] - model.centroids
    r = np.linalg.norm(rel, axis=1)
    guard = SINGULARITY_GUARD_WAVELENGTHS * model.medium.wavelength
    k = int(np.argmin(r))
    if r[k] < guard:
        ant = int(model.segment_antenna_index[k])
        seg = k - int(np.searchsorted(model.segment_antenna_index, ant))
        raise SingularityError(
            f"evaluation point {p.tolist()} is within the singularity guard of "
            f"antenna {ant}, segment {seg} (distance {r[k]:.3e} m)"
        )
    return rel, r


def assemble_manifold(model: ArrayModel, p) -> ManifoldMatrix:
    """Near-field manifold: per-segment dipole transforms rotated into the
    frame at ``p`` and contracted with the moment matrix.

    Column n equals the field at ``p`` when antenna n alone is driven with
    a unity feed current.
    """
    p = np.asarray(p, dtype=float)
    rel, r = _relative_geometry(model, p)
    u_r, u_theta, u_phi = spherical_basis_batch(rel)
    a_rad = _alpha_rad_r(r, model.medium)
    a_ang = _alpha_ang_r(r, model.medium)

    k = model.n_segments
    t = np.empty((k, 3, 3), dtype=complex)
    t[:, 0, :] = a_rad[:, None] * u_r
    t[:, 1, :] = a_ang[:, None] * u_theta
    t[:, 2, :] = a_ang[:, None] * u_phi
    # local-frame rotations: columns of q_k are the basis at each segment
    q_k = np.stack([u_r, u_theta, u_phi], axis=2)
    q_p = rotation_matrix(p)
    cart = np.einsum("kij,kjn->in", q_k @ t, model.moment_blocks)
    return ManifoldMatrix(q_p.T @ cart, p, VARIANT_NEAR)


def assemble_ff_manifold(model: ArrayModel, p) -> ManifoldMatrix:
    """Far-field manifold: 1/r dipole transforms, no frame rotations.

    The radial row is exactly zero by construction.
    """
    p = np.asarray(p, dtype=float)
    rel, r = _relative_geometry(model, p)
    _, u_theta, u_phi = spherical_basis_batch(rel)
    a_ff = _alpha_ang_ff_r(r, model.medium)

    k = model.n_segments
    t = np.zeros((k, 3, 3), dtype=complex)
    t[:, 1, :] = a_ff[:, None] * u_theta
    t[:, 2, :] = a_ff[:, None] * u_phi
    a = np.einsum("kij,kjn->in", t, model.moment_blocks)
    return ManifoldMatrix(a, p, VARIANT_FAR)


def isolated_manifold(model: ArrayModel, p) -> ManifoldMatrix:
    """Classical isolated manifold for an uncoupled model.

    Each antenna collapses to a single far-field radiator at its phase
    center (the centroid of its segment centroids) carrying its summed
    unity-drive moment, so column n is the far-field dipole transform at
    p minus that center applied to the total moment.
    """
    if not model.is_uncoupled:
        raise ValueError("isolated manifold requires uncoupled moments")
    p = np.asarray(p, dtype=float)
    guard = SINGULARITY_GUARD_WAVELENGTHS * model.medium.wavelength
    cols = []
    for n in range(model.n_antennas):
        rel = p - model.antenna_phase_centers[n]
        if np.linalg.norm(rel) < guard:
            raise SingularityError(
                f"evaluation point coincides with the phase center of antenna {n}"
            )
        cols.append(ff_dipole_transform(rel, model.medium) @ model.antenna_total_moment(n))
    return ManifoldMatrix(np.column_stack(cols), p, VARIANT_ISOLATED)


def isotropic_steering(model: ArrayModel, p) -> np.ndarray:
    """Unit-modulus steering phases exp(-j*beta*|p - c_n|) per antenna.

    c_n is the phase center of antenna n. Raises SingularityError when the
    point coincides with a phase center.
    """
    p = np.asarray(p, dtype=float)
    d = np.linalg.norm(p[None, :] - model.antenna_phase_centers, axis=1)
    guard = SINGULARITY_GUARD_WAVELENGTHS * model.medium.wavelength
    if np.any(d < guard):
        n = int(np.argmin(d))
        raise SingularityError(
            f"steering point coincides with the phase center of antenna {n}"
        )
    return np.exp(-1j * model.medium.beta * d)


def isotropic_weights(model: ArrayModel, p, conjugate: bool = True) -> np.ndarray:
    """Unit-power matched-filter baseline weights from isotropic phases.

    With ``conjugate`` (default) the steering phases are conjugated so the
    per-antenna path delays cancel at ``p``; the raw unconjugated variant
    is kept available for comparison.
    """
    a_iso = isotropic_steering(model, p)
    w = np.conj(a_iso) if conjugate else a_iso
    return w / np.linalg.norm(w)


def isotropic_lifted_manifold(model: ArrayModel, p) -> ManifoldMatrix:
    """Isotropic steering lifted to manifold form.

    The phase vector occupies the theta row with zero radial and phi rows,
    which lets the beamforming solvers run unchanged on the isotropic
    baseline; entries are dimensionless phases, not fields.
    """
    a = np.zeros((3, model.n_antennas), dtype=complex)
    a[1, :] = isotropic_steering(model, p)
    return ManifoldMatrix(a, np.asarray(p, dtype=float), VARIANT_ISOTROPIC)


def evaluate_field(a: ManifoldMatrix, w) -> FieldVec:
    """Field at the manifold's point for feed weights ``w`` (E = A @ w)."""
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.size != a.n_antennas:
        raise ValueError(
            f"weight vector has length {w.size}, expected {a.n_antennas}"
        )
    return FieldVec(a.a @ w, FRAME_GLOBAL, a.point)
