"""Plane-wave-equivalent power density and its averaged quadratic form.

Pointwise PD is |E|^2/(2*eta0) in W/m^2. Averaging the induced Gram
matrices over a sampled constraint region produces an N x N Hermitian PSD
matrix whose quadratic form in the weights equals the spatially averaged
PD, which is what the exposure-constrained solvers consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import ArrayModel
from .dipole import ETA_0, SingularityError
from .manifold import (
    VARIANT_FAR,
    VARIANT_NEAR,
    ManifoldMatrix,
    assemble_ff_manifold,
    assemble_manifold,
)

_ASSEMBLERS = {VARIANT_NEAR: assemble_manifold, VARIANT_FAR: assemble_ff_manifold}

_GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0


@dataclass
class SampleRegion:
    """Point set over which the PD is averaged."""

    points: np.ndarray  # (M, 3)
    kind: str = "custom"
    center: np.ndarray | None = None
    radius: float | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != 3 or not len(self.points):
            raise ValueError("region needs a nonempty (M, 3) point set")
        if self.center is not None:
            self.center = np.asarray(self.center, dtype=float)

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class PDMatrix:
    """Hermitian PSD matrix mapping weights to region-averaged PD (W/m^2)."""

    x: np.ndarray
    region: SampleRegion | None = None
    variant: str = VARIANT_NEAR
    normalized: bool = False

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=complex)
        if self.x.ndim != 2 or self.x.shape[0] != self.x.shape[1]:
            raise ValueError("PD matrix must be square")

    @property
    def n_antennas(self) -> int:
        return self.x.shape[0]


def pd_point(a: ManifoldMatrix, w) -> float:
    """Pointwise plane-wave-equivalent PD as a quadratic form in ``w``.

    Evaluates w* (A^H A) w / (2*eta0), which equals |A @ w|^2/(2*eta0).
    """
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.size != a.n_antennas:
        raise ValueError(f"weight vector has length {w.size}, expected {a.n_antennas}")
    gram = a.a.conj().T @ a.a
    return float((w.conj() @ gram @ w).real) / (2.0 * ETA_0)


def sphere_region(center, radius: float, n_points: int) -> SampleRegion:
    """Deterministic Fibonacci-lattice sampling of a sphere.

    Produces ``n_points`` quasi-uniform points at distance ``radius`` from
    ``center``; repeated calls give identical points, so averaged
    quantities are reproducible.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if not radius > 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    i = np.arange(n_points) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n_points)
    azimuth = 2.0 * np.pi * i / _GOLDEN_RATIO
    unit = np.column_stack(
        [
            np.sin(polar) * np.cos(azimuth),
            np.sin(polar) * np.sin(azimuth),
            np.cos(polar),
        ]
    )
    return SampleRegion(center + radius * unit, "sphere", center, float(radius))


def custom_region(points) -> SampleRegion:
    """Wrap an explicit (M, 3) point set as a constraint region."""
    return SampleRegion(np.asarray(points, dtype=float), "custom")


def characteristic_pd_matrix(
    model: ArrayModel, region: SampleRegion, variant: str = VARIANT_NEAR
) -> PDMatrix:
    """Region-averaged PD matrix X with w* X w = mean pointwise PD.

    The integral over the region is replaced by the equal-weight sample
    mean over its point set, so duplicating points leaves X unchanged.
    The sum of Gram matrices keeps X Hermitian and PSD by construction.
    """
    try:
        assemble = _ASSEMBLERS[variant]
    except KeyError:
        raise ValueError(f"unsupported PD manifold variant {variant!r}") from None
    n = model.n_antennas
    acc = np.zeros((n, n), dtype=complex)
    for pt in region.points:
        try:
            a = assemble(model, pt).a
        except SingularityError as exc:
            raise SingularityError(
                f"PD region sample point {pt.tolist()} is singular: {exc}"
            ) from exc
        acc += a.conj().T @ a
    x = acc / (2.0 * ETA_0 * len(region))
    return PDMatrix(x, region, variant)


def average_pd(x: PDMatrix | np.ndarray, w) -> float:
    """Region-averaged PD w* X w for weights ``w`` (W/m^2)."""
    mat = x.x if isinstance(x, PDMatrix) else np.asarray(x, dtype=complex)
    w = np.asarray(w, dtype=complex).reshape(-1)
    return float((w.conj() @ mat @ w).real)


def normalize_pd_matrix(
    x: PDMatrix, reference_power: float = 1.0, weights=None
) -> PDMatrix:
    """Rescale X so constraint values read as fractions of worst-case PD.

    By default the worst case is the dominant eigenvalue: after
    normalization, max over ||w||^2 = reference_power of w* X' w equals 1.
    Passing ``weights`` (an iterable of candidate steering vectors, each
    rescaled to the reference power) normalizes by the worst sampled
    steering instead. Eigenvectors are unchanged either way.
    """
    if not reference_power > 0:
        raise ValueError("reference_power must be positive")
    if weights is None:
        worst = float(np.linalg.eigvalsh(x.x)[-1])
    else:
        worst = 0.0
        for w in weights:
            w = np.asarray(w, dtype=complex).reshape(-1)
            nw = np.linalg.norm(w)
            if nw == 0:
                continue
            w = w * np.sqrt(reference_power) / nw
            worst = max(worst, average_pd(x, w) / reference_power)
    if worst <= 0:
        raise ValueError("cannot normalize a PD matrix with no radiated power")
    scale = 1.0 / (worst * reference_power)
    return PDMatrix(x.x * scale, x.region, x.variant, normalized=True)
