"""Closed-form Hertzian dipole field kernels at a single frequency.

Phasor convention: outward propagation carries exp(-j*beta*r). All
quantities are peak phasors in SI units (moments in A*m, fields in V/m).
Spherical field vectors are ordered (radial, theta, phi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import rotation_matrix, rotational_coherence, spherical_basis

SPEED_OF_LIGHT = 299792458.0
MU_0 = 4.0e-7 * np.pi
# derived so that eta0 = mu0*c and beta/(omega*eps0) = eta0 hold to rounding
EPS_0 = 1.0 / (MU_0 * SPEED_OF_LIGHT**2)
ETA_0 = MU_0 * SPEED_OF_LIGHT

# evaluation points closer than this fraction of a wavelength to a segment
# centroid are rejected instead of producing huge near-singular values
SINGULARITY_GUARD_WAVELENGTHS = 1e-9

FRAME_LOCAL = "local-spherical"
FRAME_GLOBAL = "global-spherical"
FRAME_CARTESIAN = "cartesian"


class SingularityError(ValueError):
    """Field evaluation was requested on top of a radiating segment."""


@dataclass(frozen=True)
class Medium:
    """Free-space propagation constants at a fixed operating frequency."""

    frequency_hz: float

    def __post_init__(self):
        if not (np.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise ValueError("frequency_hz must be finite and positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def omega(self) -> float:
        return 2.0 * np.pi * self.frequency_hz

    @property
    def beta(self) -> float:
        """Angular wavenumber 2*pi/wavelength (rad/m)."""
        return 2.0 * np.pi / self.wavelength

    @property
    def eps0(self) -> float:
        return EPS_0

    @property
    def mu0(self) -> float:
        return MU_0

    @property
    def eta0(self) -> float:
        """Free-space wave impedance sqrt(mu0/eps0) (ohm)."""
        return ETA_0


@dataclass
class FieldVec:
    """Complex E-field 3-vector tagged with its reference frame.

    ``frame`` is one of "local-spherical", "global-spherical" or
    "cartesian"; spherical components are ordered (radial, theta, phi) and
    anchored at ``point`` when given. Fields may only be added when their
    frame tags (and anchor points) agree.
    """

    e: np.ndarray
    frame: str
    point: np.ndarray | None = None

    def __post_init__(self):
        self.e = np.asarray(self.e, dtype=complex)
        if self.point is not None:
            self.point = np.asarray(self.point, dtype=float)

    def __add__(self, other):
        if not isinstance(other, FieldVec):
            return NotImplemented
        if self.frame != other.frame:
            raise ValueError(f"frame mismatch: {self.frame!r} + {other.frame!r}")
        if (self.point is None) != (other.point is None) or (
            self.point is not None and not np.array_equal(self.point, other.point)
        ):
            raise ValueError("cannot add fields anchored at different points")
        return FieldVec(self.e + other.e, self.frame, self.point)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.e))


def _radius(p) -> float:
    r = float(np.linalg.norm(np.asarray(p, dtype=float)))
    if r == 0.0:
        raise SingularityError("dipole field is singular at zero distance")
    return r


def _alpha_rad_r(r, medium: Medium):
    """Radial amplitude at radial distance(s) r (scalar or ndarray)."""
    b = medium.beta
    return (
        np.exp(-1j * b * r)
        / (1j * medium.omega * EPS_0 * 2.0 * np.pi)
        * (1.0 / r**3 + 1j * b / r**2)
    )


def _alpha_ang_r(r, medium: Medium):
    """Angular amplitude at radial distance(s) r (scalar or ndarray)."""
    b = medium.beta
    return (
        -np.exp(-1j * b * r)
        / (1j * medium.omega * EPS_0 * 4.0 * np.pi)
        * (1.0 / r**3 + 1j * b / r**2 - b**2 / r)
    )


def _alpha_ang_ff_r(r, medium: Medium):
    """Far-field angular amplitude at radial distance(s) r."""
    b = medium.beta
    return b**2 * np.exp(-1j * b * r) / (1j * medium.omega * EPS_0 * 4.0 * np.pi * r)


def alpha_rad(p, medium: Medium) -> complex:
    """Radial field amplitude of a unit moment at relative position p.

    exp(-j*beta*r)/(j*omega*eps0*2*pi) * (1/r^3 + j*beta/r^2); carries the
    1/r^3 and 1/r^2 near-zone terms only, so r*alpha_rad vanishes at
    infinity.
    """
    return complex(_alpha_rad_r(_radius(p), medium))


def alpha_ang(p, medium: Medium) -> complex:
    """Angular field amplitude of a unit moment at relative position p.

    -exp(-j*beta*r)/(j*omega*eps0*4*pi) * (1/r^3 + j*beta/r^2 - beta^2/r);
    the -beta^2/r term dominates far out, where it tends to alpha_ang_ff.
    """
    return complex(_alpha_ang_r(_radius(p), medium))


def alpha_ang_ff(p, medium: Medium) -> complex:
    """Far-field limit beta^2*exp(-j*beta*r)/(j*omega*eps0*4*pi*r).

    Its magnitude is eta0*beta*/(4*pi*r): the familiar 1/r radiation law.
    """
    return complex(_alpha_ang_ff_r(_radius(p), medium))


def dipole_field_transform(p_k, medium: Medium) -> np.ndarray:
    """3x3 map from a dipole moment to its local spherical field components.

    Rows are (alpha_rad*u_r, alpha_ang*u_theta, alpha_ang*u_phi) evaluated
    at ``p_k``, so ``T @ m`` yields (E_r, E_theta, E_phi) in the spherical
    frame local to the segment.
    """
    r = _radius(p_k)
    u_r, u_theta, u_phi = spherical_basis(p_k)
    a_rad = _alpha_rad_r(r, medium)
    a_ang = _alpha_ang_r(r, medium)
    return np.vstack([a_rad * u_r, a_ang * u_theta, a_ang * u_phi])


def ff_dipole_transform(p_k, medium: Medium) -> np.ndarray:
    """Far-field 3x3 dipole transform with an exactly zero radial row.

    Rows are (0, alpha_ang_ff*u_theta, alpha_ang_ff*u_phi) at ``p_k``,
    keeping the same (radial, theta, phi) row order as
    dipole_field_transform.
    """
    r = _radius(p_k)
    _, u_theta, u_phi = spherical_basis(p_k)
    a_ff = _alpha_ang_ff_r(r, medium)
    return np.vstack([np.zeros(3, dtype=complex), a_ff * u_theta, a_ff * u_phi])


def dipole_field(m, s, p, medium: Medium, frame: str = FRAME_GLOBAL) -> FieldVec:
    """Field at ``p`` from one dipole of moment ``m`` centered at ``s``.

    The local spherical components at the relative position p - s are
    computed first; "global-spherical" rotates them into the spherical
    frame at ``p`` and "cartesian" further applies the basis at ``p``.
    Raises SingularityError when ``p`` falls within the singularity guard
    distance of ``s``.
    """
    m = np.asarray(m, dtype=complex)
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    rel = p - s
    if np.linalg.norm(rel) < SINGULARITY_GUARD_WAVELENGTHS * medium.wavelength:
        raise SingularityError(
            "evaluation point coincides with the dipole location"
        )
    e_local = dipole_field_transform(rel, medium) @ m
    if frame == FRAME_LOCAL:
        return FieldVec(e_local, FRAME_LOCAL, rel)
    e_global = rotational_coherence(p, rel) @ e_local
    if frame == FRAME_GLOBAL:
        return FieldVec(e_global, FRAME_GLOBAL, p)
    if frame == FRAME_CARTESIAN:
        return FieldVec(rotation_matrix(p) @ e_global, FRAME_CARTESIAN, p)
    raise ValueError(f"unknown frame {frame!r}")
