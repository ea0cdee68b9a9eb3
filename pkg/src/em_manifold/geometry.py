"""Spherical-frame geometry: coordinate decomposition, bases, and rotations.

Angle conventions: the polar angle ``theta`` is measured from the +z axis
in [0, pi]; the azimuth ``phi`` from the +x axis in the xy-plane via the
two-argument arctangent, in (-pi, pi]. The azimuth is undefined on the
z-axis and is fixed to phi = 0 there so axis-aligned inputs produce a
deterministic frame.

All functions are pure, operate on 3-vectors in meters, and are safe for
unrestricted parallel invocation.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class DegenerateDirectionError(ValueError):
    """A direction-dependent frame was requested for a zero-length vector."""


class SphericalCoords(NamedTuple):
    """Radial distance (m), polar angle and azimuth (rad) of a point."""

    r: float
    theta: float
    phi: float


class BasisTriple(NamedTuple):
    """Right-handed orthonormal spherical basis (u_r, u_theta, u_phi)."""

    u_r: np.ndarray
    u_theta: np.ndarray
    u_phi: np.ndarray


def to_spherical(p) -> SphericalCoords:
    """Decompose a Cartesian point into spherical coordinates.

    Parameters
    ----------
    p : array-like, shape (3,)
        Point in meters. Must be finite.

    Returns
    -------
    SphericalCoords
        (r, theta, phi) such that
        ``r * [cos(phi) sin(theta), sin(phi) sin(theta), cos(theta)]``
        reconstructs ``p``. The origin maps to (0, 0, 0) by convention
        (degenerate: every direction fits); z-axis points get phi = 0.
    """
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite components")
    x, y, z = p
    r = float(np.sqrt(x * x + y * y + z * z))
    if r == 0.0:
        return SphericalCoords(0.0, 0.0, 0.0)
    theta = float(np.arccos(np.clip(z / r, -1.0, 1.0)))
    phi = float(np.arctan2(y, x))
    if phi == -np.pi:
        phi = np.pi
    return SphericalCoords(r, theta, phi)


def from_spherical(coords: SphericalCoords) -> np.ndarray:
    """Cartesian point for spherical coordinates (inverse of to_spherical)."""
    r, theta, phi = coords
    st = np.sin(theta)
    return r * np.array([np.cos(phi) * st, np.sin(phi) * st, np.cos(theta)])


def spherical_basis(p) -> BasisTriple:
    """Orthonormal spherical basis at a nonzero point.

    u_r points along p, u_theta along increasing polar angle,
    u_phi along increasing azimuth; the triple is right-handed
    (u_r x u_theta = u_phi). The trigonometric factors are taken from the
    normalized components of ``p`` rather than from explicit angles, which
    keeps the triple orthonormal to machine precision.
    """
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    if r == 0.0:
        raise DegenerateDirectionError(
            "degenerate direction: no spherical basis exists at the origin"
        )
    rho = float(np.hypot(p[0], p[1]))
    cos_t = p[2] / r
    sin_t = rho / r
    if rho > 0.0:
        cos_p = p[0] / rho
        sin_p = p[1] / rho
    else:
        # z-axis: azimuth fixed to 0
        cos_p, sin_p = 1.0, 0.0
    u_r = p / r
    u_theta = np.array([cos_p * cos_t, sin_p * cos_t, -sin_t])
    u_phi = np.array([-sin_p, cos_p, 0.0])
    return BasisTriple(u_r, u_theta, u_phi)


def rotation_matrix(p) -> np.ndarray:
    """Rotation with columns (u_r, u_theta, u_phi) at ``p``.

    Maps spherical field components at ``p`` to Cartesian components via
    ``q @ e_sph``; its transpose performs the inverse mapping.
    """
    return np.column_stack(spherical_basis(p))


def rotational_coherence(p, p_k) -> np.ndarray:
    """Alignment of the spherical frame at ``p_k`` with the frame at ``p``.

    Returns q(p)^T q(p_k), the real orthogonal matrix taking spherical
    components local to ``p_k`` into the spherical frame at ``p``. Equals
    the identity when both points share a direction, and converges to the
    identity as ``p`` recedes with ``p - p_k`` held fixed.
    """
    return rotation_matrix(p).T @ rotation_matrix(p_k)


def spherical_basis_batch(points: np.ndarray):
    """Vectorized spherical_basis over rows of an (n, 3) array.

    Returns (u_r, u_theta, u_phi), each (n, 3). Rows must be nonzero.
    z-axis rows get the same phi = 0 convention as the scalar version.
    """
    points = np.asarray(points, dtype=float)
    r = np.linalg.norm(points, axis=1)
    if np.any(r == 0.0):
        raise DegenerateDirectionError(
            "degenerate direction: no spherical basis exists at the origin"
        )
    rho = np.hypot(points[:, 0], points[:, 1])
    cos_t = points[:, 2] / r
    sin_t = rho / r
    on_axis = rho == 0.0
    safe_rho = np.where(on_axis, 1.0, rho)
    cos_p = np.where(on_axis, 1.0, points[:, 0] / safe_rho)
    sin_p = np.where(on_axis, 0.0, points[:, 1] / safe_rho)
    u_r = points / r[:, None]
    u_theta = np.column_stack([cos_p * cos_t, sin_p * cos_t, -sin_t])
    u_phi = np.column_stack([-sin_p, cos_p, np.zeros_like(cos_p)])
    return u_r, u_theta, u_phi
