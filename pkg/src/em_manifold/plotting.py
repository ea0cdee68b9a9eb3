"""Figure rendering for CLI reports: always saved to files, never shown.

The Agg backend is forced so commands work headless, and PNG metadata is
stripped so identical inputs produce byte-identical figures.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = {"dpi": 150, "metadata": {"Software": None}}


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_field_figure(points: np.ndarray, e_sph: np.ndarray, pd: np.ndarray, path) -> None:
    """Component magnitudes and PD along the evaluated point sequence."""
    idx = np.arange(len(points))
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for row, label in zip(e_sph.T, ("|E_r|", "|E_theta|", "|E_phi|")):
        ax1.plot(idx, np.abs(row), label=label)
    ax1.set_ylabel("field magnitude (V/m)")
    ax1.set_yscale("log")
    ax1.legend()
    ax2.plot(idx, pd, color="k")
    ax2.set_ylabel("PD (W/m^2)")
    ax2.set_xlabel("point index")
    ax2.set_yscale("log")
    _finish(fig, path)


def save_pattern_figure(axis_label: str, axis_values, series: dict, path) -> None:
    """Gain curves of each beamforming method over the sweep axis."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, values in series.items():
        ax.plot(axis_values, values, label=name)
    ax.set_xlabel(axis_label)
    ax.set_ylabel("gain (dBd)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def save_pd_matrix_figure(x: np.ndarray, path) -> None:
    """Magnitude heatmap of the averaged PD matrix."""
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(np.abs(x), cmap="viridis")
    ax.set_xlabel("antenna")
    ax.set_ylabel("antenna")
    fig.colorbar(im, ax=ax, label="|X| (W/m^2)")
    _finish(fig, path)


def save_weights_figure(w: np.ndarray, path) -> None:
    """Per-antenna weight magnitudes and phases."""
    idx = np.arange(len(w))
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    ax1.stem(idx, np.abs(w))
    ax1.set_ylabel("|w_n|")
    ax2.stem(idx, np.angle(w))
    ax2.set_ylabel("arg w_n (rad)")
    ax2.set_xlabel("antenna")
    _finish(fig, path)
