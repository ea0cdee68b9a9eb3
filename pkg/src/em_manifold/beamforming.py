"""Beamforming solvers built on the manifold's small-matrix decompositions.

All solvers are closed-form: field-strength maximization and the joint
polarization problem come from the manifold SVD, the fixed-polarization
problem is a matched filter, and the exposure-limited problem is a
generalized Rayleigh quotient solved by whitening with the inverse square
root of the PD matrix.

The polarization-projected objective uses the bilinear (unconjugated)
product b . E, the open-circuit voltage a receive element with effective
length along b develops; solver optimality is asserted under that
convention throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .manifold import ManifoldMatrix
from .power import PDMatrix

# relative eigenvalue floor for inverse-square-root regularization
PD_EIGENVALUE_FLOOR = 1e-12
# Gram eigenvalues below this relative level are indistinguishable from the
# eigensolver's noise floor and are reported as exactly zero singular values
_EIG_FLUSH = 1e-13


class NullManifoldError(ValueError):
    """The manifold has no radiating mode for the requested problem."""


@dataclass
class ManifoldSVD:
    """Thin SVD of a 3 x N manifold: a = u @ diag(s) @ v^H.

    ``u`` (3 x 3, unitary) holds the field polarization basis ordered from
    strongest to weakest; ``s`` always has three descending entries, padded
    with zeros beyond the rank; ``v`` (N x 3) holds the matching excitation
    modes. Columns of ``v`` beyond what N or the rank supports are
    orthonormally completed when possible and zero otherwise, which never
    affects the reconstruction since their singular values vanish.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


@dataclass
class BeamSolution:
    """Solver output: weights, achieved objective, and bookkeeping.

    ``objective`` is |E|^2 in (V/m)^2 for field-strength problems and
    |b . E|^2 for polarization-projected ones, always re-evaluated through
    the manifold that was solved. ``constraints_active`` names the
    constraints met with equality.
    """

    weights: np.ndarray
    objective: float
    method: str
    polarization: np.ndarray | None = None
    constraints_active: tuple[str, ...] = field(default_factory=tuple)


def _as_matrix(a) -> np.ndarray:
    mat = a.a if isinstance(a, ManifoldMatrix) else np.asarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != 3:
        raise ValueError("expected a (3, N) manifold matrix")
    return mat


def _as_pd(x) -> np.ndarray:
    mat = x.x if isinstance(x, PDMatrix) else np.asarray(x, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square PD matrix")
    return mat


def fix_global_phase(w: np.ndarray) -> np.ndarray:
    """Rotate a complex vector so its largest-magnitude entry is real > 0.

    The global phase of a beamforming vector is physically irrelevant;
    pinning it makes solver outputs stable across runs.
    """
    w = np.asarray(w, dtype=complex)
    idx = int(np.argmax(np.abs(w)))
    mag = np.abs(w[idx])
    if mag == 0.0:
        return w.copy()
    return w * (w[idx].conj() / mag)


def _complete_orthonormal(existing: list[np.ndarray], n: int) -> np.ndarray | None:
    """Deterministic unit vector orthogonal to ``existing`` columns, if any."""
    for j in range(n):
        cand = np.zeros(n, dtype=complex)
        cand[j] = 1.0
        for col in existing:
            cand -= col * (col.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm > 0.5:
            return cand / norm
    return None


def manifold_svd(a) -> ManifoldSVD:
    """SVD of a manifold via its 3 x 3 field Gram matrix.

    Eigendecomposing a @ a^H costs O(N) regardless of the antenna count,
    which matters in dense spatial sweeps; right singular vectors are
    recovered by applying a^H to the (phase-pinned) left ones and then
    re-orthonormalized. Eigenvalues at the eigensolver's relative noise
    floor are flushed, so structurally absent modes report exact zeros.
    """
    mat = _as_matrix(a)
    n = mat.shape[1]
    gram = mat @ mat.conj().T
    vals, vecs = np.linalg.eigh(gram)
    order = [2, 1, 0]
    vals = np.clip(vals[order], 0.0, None)
    vals[vals < _EIG_FLUSH * vals[0]] = 0.0
    s = np.sqrt(vals)
    u = vecs[:, order]
    for i in range(3):
        u[:, i] = fix_global_phase(u[:, i])
    v = np.zeros((n, 3), dtype=complex)
    kept: list[np.ndarray] = []
    for i in range(3):
        if s[i] > 0.0:
            col = (mat.conj().T @ u[:, i]) / s[i]
            for prev in kept:
                col -= prev * (prev.conj() @ col)
            col /= np.linalg.norm(col)
            v[:, i] = col
            kept.append(col)
        else:
            extra = _complete_orthonormal(kept, n)
            if extra is not None:
                v[:, i] = extra
                kept.append(extra)
    return ManifoldSVD(u, s, v)


def max_field_strength(a, power: float) -> BeamSolution:
    """Weights maximizing |E|^2 at the manifold's point for ||w||^2 = power.

    The optimum is the dominant excitation mode scaled to the power
    budget; the achieved objective is power * s1^2.
    """
    if not power > 0:
        raise ValueError("power must be positive")
    mat = _as_matrix(a)
    svd = manifold_svd(mat)
    if svd.s[0] <= 0.0:
        raise NullManifoldError("no radiating mode: manifold is numerically zero")
    w = fix_global_phase(np.sqrt(power) * svd.v[:, 0])
    objective = float(np.linalg.norm(mat @ w) ** 2)
    return BeamSolution(w, objective, "max-field", None, ("transmit_power",))


def mrt_polarized(a, b, power: float) -> BeamSolution:
    """Matched-filter weights maximizing |b . E|^2 for a fixed unit b.

    The b-projected manifold row is conjugated into the weights, giving
    objective power * ||a^T b||^2.
    """
    if not power > 0:
        raise ValueError("power must be positive")
    mat = _as_matrix(a)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.size != 3 or abs(np.linalg.norm(b) - 1.0) > 1e-9:
        raise ValueError("polarization b must be a unit-norm complex 3-vector")
    c = mat.T @ b
    nc = float(np.linalg.norm(c))
    if nc <= 1e-14 * np.linalg.norm(mat):
        raise NullManifoldError("receive polarization lies in the manifold null space")
    w = fix_global_phase(np.sqrt(power) * c.conj() / nc)
    objective = float(np.abs(b @ (mat @ w)) ** 2)
    return BeamSolution(w, objective, "mrt", b, ("transmit_power",))


def joint_polarization(a, power: float) -> BeamSolution:
    """Jointly optimal receive polarization and weights.

    Maximizing |b . E|^2 over both arguments lands on the dominant
    singular pair: b is the conjugate of the leading polarization basis
    vector and w the leading excitation mode, with objective power * s1^2,
    the same value the unprojected field-strength problem attains.
    """
    if not power > 0:
        raise ValueError("power must be positive")
    mat = _as_matrix(a)
    svd = manifold_svd(mat)
    if svd.s[0] <= 0.0:
        raise NullManifoldError("no radiating mode: manifold is numerically zero")
    b = svd.u[:, 0].conj()
    w = fix_global_phase(np.sqrt(power) * svd.v[:, 0])
    objective = float(np.abs(b @ (mat @ w)) ** 2)
    return BeamSolution(w, objective, "joint-polarization", b, ("transmit_power",))


def _inv_sqrt_psd(x: np.ndarray, floor_rel: float = PD_EIGENVALUE_FLOOR):
    """Hermitian inverse square root with a relative eigenvalue floor.

    Returns (x^(-1/2), eigvecs, mask of floored eigenvalues). Floored
    directions are regularized rather than amplified without bound.
    """
    vals, vecs = np.linalg.eigh(x)
    lam_max = float(vals[-1])
    if lam_max <= 0.0:
        raise ValueError("PD matrix has no positive eigenvalue")
    floor = floor_rel * lam_max
    floored = vals < floor
    clipped = np.maximum(vals, floor)
    inv_sqrt = (vecs / np.sqrt(clipped)) @ vecs.conj().T
    return inv_sqrt, vecs, floored


def pd_constrained(a, x, q_limit: float) -> BeamSolution:
    """Weights maximizing |E|^2 under the averaged-PD budget w* X w <= q.

    Whitening by X^(-1/2) turns the problem into an ordinary dominant-mode
    maximization; the budget binds with equality at the optimum. If X is
    singular beyond the eigenvalue floor and the manifold has energy in
    the deficient directions, a warning is issued and the regularized
    inverse is used.
    """
    if not q_limit > 0:
        raise ValueError("q_limit must be positive")
    mat = _as_matrix(a)
    xmat = _as_pd(x)
    inv_sqrt, vecs, floored = _inv_sqrt_psd(xmat)
    if np.any(floored):
        null_energy = np.linalg.norm(mat @ vecs[:, floored])
        if null_energy > 1e-12 * np.linalg.norm(mat):
            warnings.warn(
                "PD matrix is singular beyond the eigenvalue floor and the "
                "manifold radiates into its null space; solving with the "
                "regularized inverse",
                RuntimeWarning,
                stacklevel=2,
            )
    whitened = mat @ inv_sqrt
    svd = manifold_svd(whitened)
    if svd.s[0] <= 0.0:
        raise NullManifoldError("no radiating mode under the PD constraint")
    w = fix_global_phase(np.sqrt(q_limit) * (inv_sqrt @ svd.v[:, 0]))
    objective = float(np.linalg.norm(mat @ w) ** 2)
    return BeamSolution(w, objective, "pd-constrained", None, ("pd",))


def power_backoff(w, x, q_limit: float) -> np.ndarray:
    """Scale weights down just enough to satisfy the averaged-PD budget.

    Returns gamma * w with gamma = min(1, sqrt(q / (w* X w))): compliant
    inputs pass through unchanged and violating ones come back exactly on
    the budget.
    """
    w = np.asarray(w, dtype=complex).reshape(-1)
    xmat = _as_pd(x)
    val = float((w.conj() @ xmat @ w).real)
    if val <= q_limit:
        return w.copy()
    return w * np.sqrt(q_limit / val)


def combined_constraint(a, x, q_limit: float, power: float) -> BeamSolution:
    """Best-of-two-candidates heuristic for joint power and PD budgets.

    Candidate one solves the power-only problem and backs off to PD
    compliance; candidate two solves the PD-only problem and clamps the
    transmit power. Both are feasible for the joint problem; the higher
    |E|^2 wins.
    """
    if not power > 0 or not q_limit > 0:
        raise ValueError("power and q_limit must be positive")
    mat = _as_matrix(a)
    xmat = _as_pd(x)

    w1 = power_backoff(max_field_strength(mat, power).weights, xmat, q_limit)
    w2 = pd_constrained(mat, xmat, q_limit).weights
    norm2 = float(np.linalg.norm(w2) ** 2)
    if norm2 > power:
        w2 = w2 * np.sqrt(power / norm2)

    best = max((w1, w2), key=lambda w: float(np.linalg.norm(mat @ w) ** 2))
    w = fix_global_phase(best)
    objective = float(np.linalg.norm(mat @ w) ** 2)

    active = []
    if abs(np.linalg.norm(w) ** 2 - power) <= 1e-9 * power:
        active.append("transmit_power")
    if abs(float((w.conj() @ xmat @ w).real) - q_limit) <= 1e-9 * q_limit:
        active.append("pd")
    return BeamSolution(w, objective, "combined", None, tuple(active))
