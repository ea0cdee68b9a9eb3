"""Electromagnetic array manifolds for dipole-discretized antenna arrays.

The package models each antenna as a collection of constant-current
segments radiating as elementary dipoles, stacks their unity-drive moments
into an array moment matrix, and assembles the 3 x N manifold that maps
feed weights to the E-field at any point. On top of that sit power-density
averaging over sampled regions and closed-form beamforming solvers with
polarization and exposure constraints.
"""

from .array_model import (
    AntennaBlock,
    AntennaGeometry,
    ArrayModel,
    DipoleSegment,
    MomentFileError,
    assemble_uncoupled,
    generate_half_wave_dipole,
    generate_hertzian,
    half_wave_ula,
    hertzian_ula,
    load_moment_matrix,
    save_moment_matrix,
)
from .beamforming import (
    BeamSolution,
    ManifoldSVD,
    NullManifoldError,
    combined_constraint,
    joint_polarization,
    manifold_svd,
    max_field_strength,
    mrt_polarized,
    pd_constrained,
    power_backoff,
)
from .dipole import (
    EPS_0,
    ETA_0,
    MU_0,
    SPEED_OF_LIGHT,
    FieldVec,
    Medium,
    SingularityError,
    alpha_ang,
    alpha_ang_ff,
    alpha_rad,
    dipole_field,
    dipole_field_transform,
    ff_dipole_transform,
)
from .geometry import (
    BasisTriple,
    DegenerateDirectionError,
    SphericalCoords,
    from_spherical,
    rotation_matrix,
    rotational_coherence,
    spherical_basis,
    to_spherical,
)
from .manifold import (
    ManifoldMatrix,
    assemble_ff_manifold,
    assemble_manifold,
    evaluate_field,
    isolated_manifold,
    isotropic_lifted_manifold,
    isotropic_steering,
    isotropic_weights,
)
from .metrics import (
    ConvergenceSweep,
    ErrorReport,
    GainSample,
    brute_force_field,
    convergence_sweep,
    gain_dbd,
    reference_dipole_field,
    relative_error,
)
from .power import (
    PDMatrix,
    SampleRegion,
    average_pd,
    characteristic_pd_matrix,
    custom_region,
    normalize_pd_matrix,
    pd_point,
    sphere_region,
)

__version__ = "0.1.0"
