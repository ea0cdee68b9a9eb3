"""Antenna array data model: segments, per-antenna moments, and the stacked
array moment matrix referenced to unity feed currents.

The moment matrix has 3*K rows (antenna-major, segment-minor, x/y/z
innermost) and one column per antenna. Column l holds the moments induced
across the whole array when antenna l alone is driven by a unity feed
current, so inter-element coupling lives in the off-block entries. The
analytic generators below produce uncoupled (block-diagonal) matrices;
coupled matrices enter through the JSON ingestion format and are used
verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .dipole import Medium


class MomentFileError(ValueError):
    """A moment-matrix file failed schema or consistency validation."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0 or not np.all(np.isfinite(v)):
        raise ValueError("axis must be a finite nonzero 3-vector")
    return v / n


@dataclass(frozen=True)
class DipoleSegment:
    """One constant-current segment, identified by its centroid (m).

    volume_m3 is metadata only; it does not enter any field computation.
    """

    centroid: tuple[float, float, float]
    volume_m3: float | None = None

    def __post_init__(self):
        c = tuple(float(v) for v in self.centroid)
        if len(c) != 3 or not all(np.isfinite(v) for v in c):
            raise ValueError("segment centroid must be a finite 3-vector")
        object.__setattr__(self, "centroid", c)


@dataclass(frozen=True)
class AntennaGeometry:
    """Ordered segments of one antenna plus the index of the fed segment."""

    segments: tuple[DipoleSegment, ...]
    feed_index: int = 0

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise ValueError("antenna needs at least one segment")
        centroids = [s.centroid for s in segments]
        if len(set(centroids)) != len(centroids):
            raise ValueError("antenna segment centroids must be pairwise distinct")
        if not 0 <= self.feed_index < len(segments):
            raise ValueError("feed_index out of range")
        object.__setattr__(self, "segments", segments)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def centroid_array(self) -> np.ndarray:
        return np.array([s.centroid for s in self.segments], dtype=float)


@dataclass(frozen=True)
class AntennaBlock:
    """A generated antenna: geometry plus its own-block unity-drive moments."""

    geometry: AntennaGeometry
    moments: np.ndarray  # (3*K,) complex, x/y/z innermost
    medium: Medium

    def __post_init__(self):
        m = np.asarray(self.moments, dtype=complex).reshape(-1)
        if m.size != 3 * self.geometry.n_segments:
            raise ValueError("moment vector length must be 3x segment count")
        object.__setattr__(self, "moments", m)


@dataclass
class ArrayModel:
    """N antennas with their stacked 3K x N moment matrix.

    Treat instances as immutable after construction; all evaluation code
    only reads from them, so they can be shared freely across threads.
    """

    antennas: tuple[AntennaGeometry, ...]
    moment_matrix: np.ndarray  # (3*K, N) complex
    medium: Medium

    def __post_init__(self):
        self.antennas = tuple(self.antennas)
        self.moment_matrix = np.asarray(self.moment_matrix, dtype=complex)
        k_total = sum(a.n_segments for a in self.antennas)
        expected = (3 * k_total, len(self.antennas))
        if self.moment_matrix.shape != expected:
            raise ValueError(
                f"moment matrix shape {self.moment_matrix.shape} does not match "
                f"{expected} for {k_total} segments and {len(self.antennas)} antennas"
            )
        if not np.all(np.isfinite(self.moment_matrix)):
            raise ValueError("moment matrix has non-finite entries")

    @property
    def n_antennas(self) -> int:
        return len(self.antennas)

    @property
    def n_segments(self) -> int:
        return sum(a.n_segments for a in self.antennas)

    @cached_property
    def centroids(self) -> np.ndarray:
        """(K, N=3) stacked segment centroids in antenna-major order."""
        return np.vstack([a.centroid_array for a in self.antennas])

    @cached_property
    def segment_antenna_index(self) -> np.ndarray:
        """Antenna index owning each stacked segment."""
        return np.repeat(
            np.arange(self.n_antennas), [a.n_segments for a in self.antennas]
        )

    @cached_property
    def moment_blocks(self) -> np.ndarray:
        """Moment matrix viewed as (K, 3, N): per-segment 3-vector columns."""
        return self.moment_matrix.reshape(self.n_segments, 3, self.n_antennas)

    @cached_property
    def block_slices(self) -> tuple[slice, ...]:
        """Row slice of the moment matrix belonging to each antenna."""
        slices = []
        row = 0
        for a in self.antennas:
            size = 3 * a.n_segments
            slices.append(slice(row, row + size))
            row += size
        return tuple(slices)

    @cached_property
    def is_uncoupled(self) -> bool:
        """True when every column is zero outside its own antenna block."""
        for n, sl in enumerate(self.block_slices):
            col = self.moment_matrix[:, n]
            outside = np.delete(col, np.arange(sl.start, sl.stop))
            if np.any(outside != 0):
                return False
        return True

    @cached_property
    def antenna_phase_centers(self) -> np.ndarray:
        """(N, 3) centroid of each antenna's segment centroids."""
        return np.array(
            [a.centroid_array.mean(axis=0) for a in self.antennas], dtype=float
        )

    def antenna_total_moment(self, n: int) -> np.ndarray:
        """Summed moment 3-vector of antenna n's own block in column n."""
        block = self.moment_matrix[self.block_slices[n], n]
        return block.reshape(-1, 3).sum(axis=0)


def generate_half_wave_dipole(
    center, axis, k_segments: int, medium: Medium, feed_current: float = 1.0
) -> AntennaBlock:
    """Half-wave wire dipole with the textbook sinusoidal current shape.

    The wire of length lambda/2 along ``axis`` is split into ``k_segments``
    equal cells; segment k sits at its cell midpoint u_k and carries moment
    I0*sin(beta*(L/2 - |u_k|))*dl along the wire. The summed moment tends
    to 2*I0/beta times the axis as k_segments grows.
    """
    if k_segments < 3:
        raise ValueError("k_segments must be >= 3")
    axis = _unit(axis)
    center = np.asarray(center, dtype=float)
    length = medium.wavelength / 2.0
    dl = length / k_segments
    offsets = (np.arange(k_segments) + 0.5) * dl - length / 2.0
    amps = feed_current * np.sin(medium.beta * (length / 2.0 - np.abs(offsets))) * dl
    centroids = center + offsets[:, None] * axis
    moments = (amps[:, None] * axis).reshape(-1).astype(complex)
    segments = tuple(DipoleSegment(tuple(c)) for c in centroids)
    geometry = AntennaGeometry(segments, feed_index=k_segments // 2)
    return AntennaBlock(geometry, moments, medium)


def generate_hertzian(center, axis, medium: Medium) -> AntennaBlock:
    """Single-segment radiator with moment 1 A * (lambda/100) along axis."""
    axis = _unit(axis)
    center = np.asarray(center, dtype=float)
    moment = (medium.wavelength / 100.0) * axis
    geometry = AntennaGeometry((DipoleSegment(tuple(center)),))
    return AntennaBlock(geometry, moment.astype(complex), medium)


def assemble_uncoupled(blocks: Sequence[AntennaBlock]) -> ArrayModel:
    """Stack generated antennas into a block-diagonal (uncoupled) model.

    Column l carries antenna l's moments in its own rows and exact zeros
    elsewhere. All antennas must share the same medium.
    """
    blocks = list(blocks)
    if not blocks:
        raise ValueError("at least one antenna is required")
    medium = blocks[0].medium
    for i, b in enumerate(blocks):
        if b.medium != medium:
            raise ValueError(
                f"antenna {i} medium {b.medium.frequency_hz} Hz does not match "
                f"antenna 0 medium {medium.frequency_hz} Hz"
            )
    sizes = [3 * b.geometry.n_segments for b in blocks]
    matrix = np.zeros((sum(sizes), len(blocks)), dtype=complex)
    row = 0
    for i, b in enumerate(blocks):
        matrix[row : row + sizes[i], i] = b.moments
        row += sizes[i]
    return ArrayModel(tuple(b.geometry for b in blocks), matrix, medium)


def half_wave_ula(
    n_antennas: int,
    spacing_m: float,
    medium: Medium,
    *,
    dipole_axis=(0.0, 0.0, 1.0),
    array_axis=(1.0, 0.0, 0.0),
    center=(0.0, 0.0, 0.0),
    k_segments: int = 40,
) -> ArrayModel:
    """Uniform linear array of identical half-wave dipoles, centered on
    ``center`` and laid out along ``array_axis``."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    array_axis = _unit(array_axis)
    center = np.asarray(center, dtype=float)
    blocks = []
    for i in range(n_antennas):
        offset = (i - (n_antennas - 1) / 2.0) * spacing_m
        blocks.append(
            generate_half_wave_dipole(
                center + offset * array_axis, dipole_axis, k_segments, medium
            )
        )
    return assemble_uncoupled(blocks)


def hertzian_ula(
    n_antennas: int,
    spacing_m: float,
    medium: Medium,
    *,
    dipole_axis=(0.0, 0.0, 1.0),
    array_axis=(1.0, 0.0, 0.0),
    center=(0.0, 0.0, 0.0),
) -> ArrayModel:
    """Uniform linear array of single-segment radiators."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    array_axis = _unit(array_axis)
    center = np.asarray(center, dtype=float)
    blocks = []
    for i in range(n_antennas):
        offset = (i - (n_antennas - 1) / 2.0) * spacing_m
        blocks.append(generate_hertzian(center + offset * array_axis, dipole_axis, medium))
    return assemble_uncoupled(blocks)


def save_moment_matrix(model: ArrayModel, path) -> None:
    """Write a model to the JSON moment-matrix format (lossless doubles)."""
    antennas = []
    for a in model.antennas:
        segs = []
        for s in a.segments:
            entry = {"centroid_m": list(s.centroid)}
            if s.volume_m3 is not None:
                entry["volume_m3"] = s.volume_m3
            segs.append(entry)
        antennas.append({"segments": segs})
    rows = [
        [[float(v.real), float(v.imag)] for v in row] for row in model.moment_matrix
    ]
    doc = {
        "frequency_hz": model.medium.frequency_hz,
        "antennas": antennas,
        "moment_matrix": rows,
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_moment_matrix(path) -> ArrayModel:
    """Load and validate a JSON moment-matrix file.

    Row order is antenna-major, segment-minor, with x/y/z components
    innermost. Raises MomentFileError naming the offending row/column for
    dimension mismatches, non-finite entries, and duplicate centroids.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MomentFileError(f"{path}: cannot parse moment file: {exc}") from exc
    if not isinstance(doc, dict):
        raise MomentFileError(f"{path}: top-level JSON object expected")

    freq = doc.get("frequency_hz")
    if not isinstance(freq, (int, float)) or not np.isfinite(freq) or freq <= 0:
        raise MomentFileError(f"{path}: frequency_hz must be a positive number")
    medium = Medium(float(freq))

    raw_antennas = doc.get("antennas")
    if not isinstance(raw_antennas, list) or not raw_antennas:
        raise MomentFileError(f"{path}: antennas must be a nonempty list")
    antennas = []
    for ai, ant in enumerate(raw_antennas):
        segs_raw = ant.get("segments") if isinstance(ant, dict) else None
        if not isinstance(segs_raw, list) or not segs_raw:
            raise MomentFileError(f"{path}: antenna {ai}: segments must be a nonempty list")
        segments = []
        for si, seg in enumerate(segs_raw):
            cen = seg.get("centroid_m") if isinstance(seg, dict) else None
            if (
                not isinstance(cen, list)
                or len(cen) != 3
                or not all(isinstance(v, (int, float)) for v in cen)
            ):
                raise MomentFileError(
                    f"{path}: antenna {ai} segment {si}: centroid_m must be [x, y, z]"
                )
            if not all(np.isfinite(v) for v in cen):
                raise MomentFileError(
                    f"{path}: antenna {ai} segment {si}: non-finite centroid"
                )
            vol = seg.get("volume_m3")
            segments.append(DipoleSegment(tuple(float(v) for v in cen), vol))
        try:
            antennas.append(AntennaGeometry(tuple(segments)))
        except ValueError as exc:
            raise MomentFileError(f"{path}: antenna {ai}: {exc}") from exc

    k_total = sum(a.n_segments for a in antennas)
    n = len(antennas)
    rows = doc.get("moment_matrix")
    if not isinstance(rows, list):
        raise MomentFileError(f"{path}: moment_matrix must be a list of rows")
    if len(rows) != 3 * k_total:
        raise MomentFileError(
            f"{path}: moment_matrix has {len(rows)} rows, expected 3K = {3 * k_total}"
        )
    matrix = np.zeros((3 * k_total, n), dtype=complex)
    for ri, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MomentFileError(
                f"{path}: moment_matrix row {ri}: expected {n} [re, im] entries"
            )
        for ci, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise MomentFileError(
                    f"{path}: moment_matrix row {ri} column {ci}: expected [re, im]"
                )
            if not all(np.isfinite(v) for v in entry):
                raise MomentFileError(
                    f"{path}: moment_matrix row {ri} column {ci}: non-finite entry"
                )
            matrix[ri, ci] = complex(entry[0], entry[1])
    return ArrayModel(tuple(antennas), matrix, medium)
