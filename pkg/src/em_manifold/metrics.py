"""Validation metrics: brute-force field summation, error and gain figures,
and near/far convergence sweeps.

brute_force_field is the reference oracle for the manifold assembly: it
takes a deliberately different route through the same physics (weights
applied to moments first, scalar spherical components per segment, one
final rotation) so agreement between the two paths exercises every index
and frame convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .array_model import ArrayModel, assemble_uncoupled, generate_half_wave_dipole
from .dipole import (
    EPS_0,
    FRAME_GLOBAL,
    SINGULARITY_GUARD_WAVELENGTHS,
    FieldVec,
    Medium,
    SingularityError,
)
from .manifold import assemble_ff_manifold, assemble_manifold, evaluate_field

REFERENCE_DIPOLE_SEGMENTS = 40


@dataclass
class ErrorReport:
    """Relative field error plus its per-component breakdown."""

    relative_error: float
    per_component: np.ndarray


@dataclass
class GainSample:
    """Gain in dB relative to the reference half-wave dipole at a point."""

    gain_dbd: float
    point: np.ndarray


@dataclass
class ConvergenceSweep:
    """Near-vs-far relative errors over radii and their log-log slope."""

    radii: np.ndarray
    errors: np.ndarray
    slope: float

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.radii.tolist(), self.errors.tolist()))


def brute_force_field(model: ArrayModel, w, p) -> FieldVec:
    """Field at ``p`` by direct summation over every segment.

    Applies the weights to the moment matrix first, evaluates each
    segment's (radial, theta, phi) components from the scalar amplitude
    formulas with explicit angles, sums the contributions in Cartesian
    coordinates, and rotates once into the spherical frame at ``p``. No
    intermediate matrices are shared with the manifold assembly path.
    """
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=complex).reshape(-1)
    med = model.medium
    beta = med.beta
    omega = med.omega

    moments = (model.moment_matrix @ w).reshape(-1, 3)
    rel = p[None, :] - model.centroids
    r = np.linalg.norm(rel, axis=1)
    if np.any(r < SINGULARITY_GUARD_WAVELENGTHS * med.wavelength):
        raise SingularityError("evaluation point sits on a segment centroid")

    theta = np.arccos(np.clip(rel[:, 2] / r, -1.0, 1.0))
    phi = np.arctan2(rel[:, 1], rel[:, 0])
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    u_r = np.column_stack([cp * st, sp * st, ct])
    u_th = np.column_stack([cp * ct, sp * ct, -st])
    u_ph = np.column_stack([-sp, cp, np.zeros_like(sp)])

    phase = np.exp(-1j * beta * r)
    a_rad = phase / (1j * omega * EPS_0 * 2 * np.pi) * (1 / r**3 + 1j * beta / r**2)
    a_ang = (
        -phase
        / (1j * omega * EPS_0 * 4 * np.pi)
        * (1 / r**3 + 1j * beta / r**2 - beta**2 / r)
    )

    e_r = a_rad * np.sum(moments * u_r, axis=1)
    e_th = a_ang * np.sum(moments * u_th, axis=1)
    e_ph = a_ang * np.sum(moments * u_ph, axis=1)
    e_cart = (e_r[:, None] * u_r + e_th[:, None] * u_th + e_ph[:, None] * u_ph).sum(
        axis=0
    )

    rp = np.linalg.norm(p)
    if rp == 0.0:
        raise SingularityError("observation frame undefined at the origin")
    theta_p = np.arccos(np.clip(p[2] / rp, -1.0, 1.0))
    phi_p = np.arctan2(p[1], p[0])
    stp, ctp = np.sin(theta_p), np.cos(theta_p)
    spp, cpp = np.sin(phi_p), np.cos(phi_p)
    ur_p = np.array([cpp * stp, spp * stp, ctp])
    uth_p = np.array([cpp * ctp, spp * ctp, -stp])
    uph_p = np.array([-spp, cpp, 0.0])
    e_sph = np.array([e_cart @ ur_p, e_cart @ uth_p, e_cart @ uph_p])
    return FieldVec(e_sph, FRAME_GLOBAL, p)


def relative_error(e_ref: FieldVec, e_test: FieldVec) -> ErrorReport:
    """Norm of the field difference relative to the reference norm."""
    if e_ref.frame != e_test.frame:
        raise ValueError(f"frame mismatch: {e_ref.frame!r} vs {e_test.frame!r}")
    ref_norm = float(np.linalg.norm(e_ref.e))
    if ref_norm == 0.0:
        raise ValueError("undefined relative error: reference field is zero")
    diff = e_ref.e - e_test.e
    return ErrorReport(float(np.linalg.norm(diff)) / ref_norm, np.abs(diff) / ref_norm)


@lru_cache(maxsize=8)
def _reference_dipole(medium: Medium) -> ArrayModel:
    """The z-oriented half-wave dipole at the origin used as 0 dBd."""
    block = generate_half_wave_dipole(
        (0.0, 0.0, 0.0), (0.0, 0.0, 1.0), REFERENCE_DIPOLE_SEGMENTS, medium
    )
    return assemble_uncoupled([block])


def reference_dipole_field(p, medium: Medium) -> FieldVec:
    """Field of the unity-fed reference half-wave dipole at ``p``."""
    return evaluate_field(assemble_manifold(_reference_dipole(medium), p), [1.0])


def gain_dbd(model: ArrayModel, w, p, medium: Medium | None = None) -> GainSample:
    """Array gain at ``p`` in dB over the reference half-wave dipole.

    10*log10(|E_arr|^2 / |E_ref|^2) with both fields evaluated through the
    near-field model; invariant to a global phase on ``w``.
    """
    p = np.asarray(p, dtype=float)
    med = medium if medium is not None else model.medium
    e_ref = reference_dipole_field(p, med)
    ref_norm = float(np.linalg.norm(e_ref.e))
    if ref_norm == 0.0:
        raise ValueError("reference dipole field is null at the requested point")
    e_arr = evaluate_field(assemble_manifold(model, p), w)
    g = 10.0 * np.log10(float(np.linalg.norm(e_arr.e)) ** 2 / ref_norm**2)
    return GainSample(float(g), p)


def convergence_sweep(model: ArrayModel, w, direction, radii) -> ConvergenceSweep:
    """Relative near-vs-far field error along a direction at given radii.

    Radii must be positive and increasing; the reported slope is the
    least-squares fit of log(error) against log(radius).
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    direction = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    direction = direction / norm
    errors = []
    for r in radii:
        p = r * direction
        e_near = evaluate_field(assemble_manifold(model, p), w)
        e_far = evaluate_field(assemble_ff_manifold(model, p), w)
        errors.append(relative_error(e_near, e_far).relative_error)
    errors = np.asarray(errors)
    slope = float(np.polyfit(np.log(radii), np.log(errors), 1)[0])
    return ConvergenceSweep(radii, errors, slope)
