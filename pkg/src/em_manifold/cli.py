"""Command-line front end.

Subcommands::

    em-manifold field    --config cfg.json [--variant near|ff|isolated] [--out t.csv] [--plot]
    em-manifold beamform --config cfg.json [--variant ...] [--out s.json] [--plot]
    em-manifold pattern  --config cfg.json [--out sweep.csv] [--plot]
    em-manifold pd       --config cfg.json [--variant near|ff] [--out pd.json] [--plot]
    em-manifold validate [--config cfg.json] [--out report.json]

Scenarios live in a single JSON config file; --variant and --out override
the config. Data goes to the output file (or stdout), human messages go to
stderr. Floats are written with 17 significant digits so identical configs
produce byte-identical outputs. Exit codes: 0 success, 1 validation suite
failure, 2 config error, 3 singular/degenerate evaluation point, 4
infeasible or null-manifold beamforming problem.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .array_model import (
    ArrayModel,
    MomentFileError,
    half_wave_ula,
    hertzian_ula,
    load_moment_matrix,
)
from .beamforming import (
    NullManifoldError,
    combined_constraint,
    joint_polarization,
    max_field_strength,
    mrt_polarized,
    pd_constrained,
)
from .dipole import ETA_0, Medium, SingularityError
from .geometry import DegenerateDirectionError
from .manifold import (
    assemble_ff_manifold,
    assemble_manifold,
    evaluate_field,
    isolated_manifold,
    isotropic_weights,
)
from .metrics import brute_force_field, convergence_sweep, gain_dbd, relative_error
from .power import characteristic_pd_matrix, normalize_pd_matrix, sphere_region


class ConfigError(ValueError):
    """A scenario config is missing or misuses a field."""


FIELD_HEADER = "x_m,y_m,z_m,Er_re,Er_im,Eth_re,Eth_im,Eph_re,Eph_im,pd_w_m2"

_FIELD_ASSEMBLERS = {
    "near": assemble_manifold,
    "ff": assemble_ff_manifold,
    "isolated": isolated_manifold,
}

DEFAULT_FREQUENCY_HZ = 5e9
DEFAULT_N_ANTENNAS = 4
DEFAULT_SPACING_WAVELENGTHS = 0.25


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _get(cfg: dict, key: str, ctx: str):
    if key not in cfg:
        raise ConfigError(f"{ctx}{key}: missing required field")
    return cfg[key]


def _number(cfg: dict, key: str, ctx: str, default=None) -> float:
    if key not in cfg:
        if default is not None:
            return default
        raise ConfigError(f"{ctx}{key}: missing required field")
    v = cfg[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
        raise ConfigError(f"{ctx}{key}: expected a finite number")
    return float(v)


def _integer(cfg: dict, key: str, ctx: str, default=None) -> int:
    if key not in cfg and default is not None:
        return default
    v = _number(cfg, key, ctx)
    if v != int(v):
        raise ConfigError(f"{ctx}{key}: expected an integer")
    return int(v)


def _length(cfg: dict, base: str, wavelength: float, ctx: str, default_m=None) -> float:
    """Read a length given either as <base>_m or <base>_wavelengths."""
    has_m = f"{base}_m" in cfg
    has_wl = f"{base}_wavelengths" in cfg
    if has_m and has_wl:
        raise ConfigError(f"{ctx}{base}: give exactly one of _m or _wavelengths")
    if has_m:
        return _number(cfg, f"{base}_m", ctx)
    if has_wl:
        return _number(cfg, f"{base}_wavelengths", ctx) * wavelength
    if default_m is not None:
        return default_m
    raise ConfigError(f"{ctx}{base}_m or {base}_wavelengths: missing required field")


def _vec3(cfg: dict, key: str, ctx: str, default=None) -> np.ndarray:
    if key not in cfg:
        if default is not None:
            return np.asarray(default, dtype=float)
        raise ConfigError(f"{ctx}{key}: missing required field")
    v = cfg[key]
    if (
        not isinstance(v, list)
        or len(v) != 3
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise ConfigError(f"{ctx}{key}: expected [x, y, z]")
    return np.asarray(v, dtype=float)


def _point(cfg: dict, base: str, wavelength: float, ctx: str) -> np.ndarray:
    has_m = f"{base}_m" in cfg
    has_wl = f"{base}_wavelengths" in cfg
    if has_m == has_wl:
        raise ConfigError(f"{ctx}{base}: give exactly one of _m or _wavelengths")
    if has_m:
        return _vec3(cfg, f"{base}_m", ctx)
    return _vec3(cfg, f"{base}_wavelengths", ctx) * wavelength


def _complex_entry(v, ctx: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v, 0.0)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(v[0], v[1])
    raise ConfigError(f"{ctx}: expected a number or [re, im]")


def _complex_vector(cfg: dict, key: str, ctx: str, n: int | None = None) -> np.ndarray:
    v = _get(cfg, key, ctx)
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{ctx}{key}: expected a nonempty list")
    out = np.array([_complex_entry(e, f"{ctx}{key}[{i}]") for i, e in enumerate(v)])
    if n is not None and out.size != n:
        raise ConfigError(f"{ctx}{key}: expected {n} entries, got {out.size}")
    return out


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, complex)]


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config: top-level JSON object expected")
    return doc


def build_model(cfg: dict, base_dir: Path) -> ArrayModel:
    acfg = cfg.get("array")
    if acfg is None:
        acfg = {
            "kind": "half_wave_ula",
            "n_antennas": DEFAULT_N_ANTENNAS,
            "spacing_wavelengths": DEFAULT_SPACING_WAVELENGTHS,
        }
    if not isinstance(acfg, dict):
        raise ConfigError("array: expected an object")
    kind = _get(acfg, "kind", "array.")
    if kind == "moment_file":
        raw = _get(acfg, "path", "array.")
        if not isinstance(raw, str):
            raise ConfigError("array.path: expected a string")
        path = Path(raw)
        if not path.is_absolute():
            path = base_dir / path
        model = load_moment_matrix(path)
        if "frequency_hz" in cfg and float(cfg["frequency_hz"]) != model.medium.frequency_hz:
            raise ConfigError(
                "frequency_hz: does not match the frequency stored in the moment file"
            )
        return model
    if kind not in ("half_wave_ula", "hertzian_ula"):
        raise ConfigError(
            "array.kind: expected half_wave_ula, hertzian_ula or moment_file"
        )
    medium = Medium(_number(cfg, "frequency_hz", "", DEFAULT_FREQUENCY_HZ))
    n = _integer(acfg, "n_antennas", "array.")
    if n < 1:
        raise ConfigError("array.n_antennas: must be >= 1")
    spacing = _length(acfg, "spacing", medium.wavelength, "array.")
    common = {
        "dipole_axis": _vec3(acfg, "dipole_axis", "array.", (0.0, 0.0, 1.0)),
        "array_axis": _vec3(acfg, "array_axis", "array.", (1.0, 0.0, 0.0)),
        "center": _vec3(acfg, "center_m", "array.", (0.0, 0.0, 0.0)),
    }
    if kind == "half_wave_ula":
        k_segments = _integer(acfg, "k_segments", "array.", 40)
        return half_wave_ula(n, spacing, medium, k_segments=k_segments, **common)
    return hertzian_ula(n, spacing, medium, **common)


def evaluation_points(cfg: dict, wavelength: float) -> np.ndarray:
    ecfg = _get(cfg, "evaluation", "")
    if not isinstance(ecfg, dict):
        raise ConfigError("evaluation: expected an object")
    kind = _get(ecfg, "kind", "evaluation.")
    if kind == "point":
        return _point(ecfg, "point", wavelength, "evaluation.")[None, :]
    if kind == "grid":
        axes = []
        for name in ("xs", "ys", "zs"):
            key_m, key_wl = f"{name}_m", f"{name}_wavelengths"
            if (key_m in ecfg) == (key_wl in ecfg):
                raise ConfigError(
                    f"evaluation.{name}: give exactly one of _m or _wavelengths"
                )
            raw = ecfg.get(key_m, ecfg.get(key_wl))
            scale = 1.0 if key_m in ecfg else wavelength
            if not isinstance(raw, list) or not raw:
                raise ConfigError(f"evaluation.{name}: expected a nonempty list")
            axes.append([float(v) * scale for v in raw])
        return np.array(
            [(x, y, z) for x in axes[0] for y in axes[1] for z in axes[2]], dtype=float
        )
    if kind == "sphere":
        center = _point(ecfg, "center", wavelength, "evaluation.")
        radius = _length(ecfg, "radius", wavelength, "evaluation.")
        n_points = _integer(ecfg, "n_points", "evaluation.")
        return sphere_region(center, radius, n_points).points
    raise ConfigError(f"evaluation.kind: unsupported kind {kind!r} for this command")


def _write_text(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _resolve_out(args, cfg: dict) -> str | None:
    if args.out is not None:
        return args.out
    out = cfg.get("output")
    if isinstance(out, dict) and isinstance(out.get("path"), str):
        return out["path"]
    return None


def _plot_path(out_path: str | None, enabled: bool) -> str | None:
    if not enabled:
        return None
    if out_path is None:
        raise ConfigError("output.path: --plot needs a file output, not stdout")
    return str(Path(out_path).with_suffix(".png"))


def _json_dump(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def cmd_field(args) -> int:
    cfg = load_config(args.config)
    variant = args.variant or cfg.get("variant", "near")
    if variant not in _FIELD_ASSEMBLERS:
        raise ConfigError(f"variant: {variant!r} is not valid for the field command")
    model = build_model(cfg, Path(args.config).parent)
    w = _complex_vector(cfg, "weights", "", model.n_antennas)
    points = evaluation_points(cfg, model.medium.wavelength)
    assemble = _FIELD_ASSEMBLERS[variant]

    lines = [FIELD_HEADER]
    fields = np.empty((len(points), 3), dtype=complex)
    pd_vals = np.empty(len(points))
    for i, pt in enumerate(points):
        e = assemble(model, pt).a @ w
        pd = float(np.linalg.norm(e) ** 2) / (2.0 * ETA_0)
        fields[i] = e
        pd_vals[i] = pd
        lines.append(
            ",".join(
                [_fmt(pt[0]), _fmt(pt[1]), _fmt(pt[2])]
                + [_fmt(part) for c in e for part in (c.real, c.imag)]
                + [_fmt(pd)]
            )
        )
    out_path = _resolve_out(args, cfg)
    _write_text("\n".join(lines) + "\n", out_path)
    plot = _plot_path(out_path, args.plot)
    if plot:
        from . import plotting

        plotting.save_field_figure(points, fields, pd_vals, plot)
    return 0


def _solve_beamform(cfg: dict, model: ArrayModel, variant: str, p: np.ndarray):
    solver = cfg.get("solver")
    if not isinstance(solver, dict):
        raise ConfigError("solver: expected an object")
    method = _get(solver, "method", "solver.")
    power = _number(solver, "power", "solver.", 1.0)
    if power <= 0:
        raise ConfigError("solver.power: must be positive")

    if variant == "isotropic":
        if method not in ("svd", "isotropic"):
            raise ConfigError("variant: isotropic only supports the isotropic method")
        method = "isotropic"
    assemblers = {
        "near": assemble_manifold,
        "ff": assemble_ff_manifold,
        "isolated": isolated_manifold,
    }
    if method != "isotropic" and variant not in assemblers:
        raise ConfigError(f"variant: {variant!r} is not valid for beamforming")

    if method == "isotropic":
        conjugate = solver.get("conjugate", True)
        if not isinstance(conjugate, bool):
            raise ConfigError("solver.conjugate: expected a boolean")
        w = np.sqrt(power) * isotropic_weights(model, p, conjugate=conjugate)
        return w, None, ("transmit_power",), method

    a_solve = assemblers[variant](model, p)
    if method == "svd":
        sol = max_field_strength(a_solve, power)
    elif method == "joint":
        sol = joint_polarization(a_solve, power)
    elif method == "mrt":
        b = _complex_vector(solver, "polarization", "solver.", 3)
        nb = np.linalg.norm(b)
        if nb == 0:
            raise ConfigError("solver.polarization: must be nonzero")
        sol = mrt_polarized(a_solve, b / nb, power)
    elif method in ("pd", "combined"):
        region_cfg = solver.get("pd_region")
        if not isinstance(region_cfg, dict):
            raise ConfigError("solver.pd_region: expected an object")
        wavelength = model.medium.wavelength
        region = sphere_region(
            _point(region_cfg, "center", wavelength, "solver.pd_region."),
            _length(region_cfg, "radius", wavelength, "solver.pd_region."),
            _integer(region_cfg, "n_points", "solver.pd_region.", 50),
        )
        x = characteristic_pd_matrix(model, region, "far" if variant == "ff" else "near")
        if solver.get("normalize_pd", True):
            x = normalize_pd_matrix(x, _number(solver, "reference_power", "solver.", 1.0))
        q_limit = _number(solver, "pd_limit", "solver.")
        if q_limit <= 0:
            raise ConfigError("solver.pd_limit: must be positive")
        if method == "pd":
            sol = pd_constrained(a_solve, x, q_limit)
        else:
            sol = combined_constraint(a_solve, x, q_limit, power)
    else:
        raise ConfigError(
            "solver.method: expected svd, mrt, joint, pd, combined or isotropic"
        )
    return sol.weights, sol.polarization, sol.constraints_active, method


def cmd_beamform(args) -> int:
    cfg = load_config(args.config)
    variant = args.variant or cfg.get("variant", "near")
    model = build_model(cfg, Path(args.config).parent)
    points = evaluation_points(cfg, model.medium.wavelength)
    if len(points) != 1:
        raise ConfigError("evaluation.kind: beamform needs a single evaluation point")
    p = points[0]

    w, b, active, method = _solve_beamform(cfg, model, variant, p)

    # objective and gain are re-evaluated through the near-field model so
    # different methods are compared against the same physics
    a_eval = assemble_manifold(model, p)
    e = a_eval.a @ w
    if b is not None:
        objective = float(np.abs(b @ e) ** 2)
    else:
        objective = float(np.linalg.norm(e) ** 2)
    gain = gain_dbd(model, w, p).gain_dbd

    doc = {
        "method": method,
        "weights": _pairs(w),
        "objective": objective,
        "gain_dbd": gain,
        "constraints_active": list(active),
    }
    if b is not None:
        doc["polarization"] = _pairs(b)
    out_path = _resolve_out(args, cfg)
    _write_text(_json_dump(doc), out_path)
    plot = _plot_path(out_path, args.plot)
    if plot:
        from . import plotting

        plotting.save_weights_figure(w, plot)
    return 0


def _pattern_gains(model, focus, include_ff):
    """Per-method unit-power weights for a fixed focus point."""
    weights = {
        "gain_dbd_svd": max_field_strength(assemble_manifold(model, focus), 1.0).weights,
        "gain_dbd_isotropic": isotropic_weights(model, focus),
    }
    if include_ff:
        weights["gain_dbd_ff"] = max_field_strength(
            assemble_ff_manifold(model, focus), 1.0
        ).weights
    return weights


def cmd_pattern(args) -> int:
    cfg = load_config(args.config)
    model = build_model(cfg, Path(args.config).parent)
    wavelength = model.medium.wavelength
    ecfg = _get(cfg, "evaluation", "")
    if not isinstance(ecfg, dict):
        raise ConfigError("evaluation: expected an object")
    kind = _get(ecfg, "kind", "evaluation.")
    include_ff = bool(ecfg.get("include_ff", False))
    columns = ["gain_dbd_svd", "gain_dbd_isotropic"] + (
        ["gain_dbd_ff"] if include_ff else []
    )

    axis_values: list[float] = []
    rows: list[list[float]] = []
    if kind == "distance_sweep":
        direction = _vec3(ecfg, "direction", "evaluation.")
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise ConfigError("evaluation.direction: must be nonzero")
        direction = direction / norm
        radii = ecfg.get("radii_wavelengths")
        if not isinstance(radii, list) or not radii:
            raise ConfigError("evaluation.radii_wavelengths: expected a nonempty list")
        focus_r = _length(ecfg, "focus", wavelength, "evaluation.")
        method_w = _pattern_gains(model, focus_r * direction, include_ff)
        for rv in radii:
            p = float(rv) * wavelength * direction
            axis_values.append(float(rv))
            rows.append(
                [gain_dbd(model, method_w[c], p).gain_dbd for c in columns]
            )
        axis_label = "distance (wavelengths)"
    elif kind == "angle_sweep":
        radius = _length(ecfg, "radius", wavelength, "evaluation.")
        n_points = _integer(ecfg, "n_points", "evaluation.")
        start = _number(ecfg, "azimuth_start_rad", "evaluation.")
        stop = _number(ecfg, "azimuth_stop_rad", "evaluation.")
        focus_az = _number(ecfg, "focus_azimuth_rad", "evaluation.", 0.5 * np.pi)
        focus = radius * np.array([np.cos(focus_az), np.sin(focus_az), 0.0])
        method_w = _pattern_gains(model, focus, include_ff)
        for az in np.linspace(start, stop, n_points):
            p = radius * np.array([np.cos(az), np.sin(az), 0.0])
            axis_values.append(float(az))
            rows.append([gain_dbd(model, method_w[c], p).gain_dbd for c in columns])
        axis_label = "azimuth (rad)"
    elif kind == "spacing_sweep":
        acfg = cfg.get("array", {})
        if acfg.get("kind", "half_wave_ula") == "moment_file":
            raise ConfigError(
                "array.kind: spacing sweeps rebuild the array, so a generator is required"
            )
        spacings = ecfg.get("spacings_wavelengths")
        if not isinstance(spacings, list) or not spacings:
            raise ConfigError(
                "evaluation.spacings_wavelengths: expected a nonempty list"
            )
        direction = _vec3(ecfg, "direction", "evaluation.", (0.0, 1.0, 0.0))
        direction = direction / np.linalg.norm(direction)
        focus_r = _length(ecfg, "focus", wavelength, "evaluation.")
        focus = focus_r * direction
        for sv in spacings:
            sub = dict(cfg)
            sub["array"] = dict(acfg)
            sub["array"]["spacing_wavelengths"] = float(sv)
            sub["array"].pop("spacing_m", None)
            m = build_model(sub, Path(args.config).parent)
            method_w = _pattern_gains(m, focus, include_ff)
            axis_values.append(float(sv))
            rows.append([gain_dbd(m, method_w[c], focus).gain_dbd for c in columns])
        axis_label = "spacing (wavelengths)"
    else:
        raise ConfigError(
            "evaluation.kind: pattern supports distance_sweep, angle_sweep or spacing_sweep"
        )

    lines = ["axis_value," + ",".join(columns)]
    for av, row in zip(axis_values, rows):
        lines.append(",".join([_fmt(av)] + [_fmt(v) for v in row]))
    out_path = _resolve_out(args, cfg)
    _write_text("\n".join(lines) + "\n", out_path)
    plot = _plot_path(out_path, args.plot)
    if plot:
        from . import plotting

        series = {c: [row[i] for row in rows] for i, c in enumerate(columns)}
        plotting.save_pattern_figure(axis_label, axis_values, series, plot)
    return 0


def cmd_pd(args) -> int:
    cfg = load_config(args.config)
    variant = args.variant or cfg.get("variant", "near")
    if variant not in ("near", "ff"):
        raise ConfigError(f"variant: {variant!r} is not valid for the pd command")
    model = build_model(cfg, Path(args.config).parent)
    wavelength = model.medium.wavelength
    ecfg = _get(cfg, "evaluation", "")
    if not isinstance(ecfg, dict) or ecfg.get("kind") != "sphere":
        raise ConfigError("evaluation.kind: pd needs a sphere evaluation region")
    region = sphere_region(
        _point(ecfg, "center", wavelength, "evaluation."),
        _length(ecfg, "radius", wavelength, "evaluation."),
        _integer(ecfg, "n_points", "evaluation.", 50),
    )
    x = characteristic_pd_matrix(model, region, "far" if variant == "ff" else "near")
    norm_cfg = cfg.get("normalize")
    reference_power = None
    if norm_cfg is not None:
        if not isinstance(norm_cfg, dict):
            raise ConfigError("normalize: expected an object")
        reference_power = _number(norm_cfg, "reference_power", "normalize.", 1.0)
        x = normalize_pd_matrix(x, reference_power)
    eigvals = np.linalg.eigvalsh(x.x)[::-1]
    doc = {
        "n_antennas": model.n_antennas,
        "variant": x.variant,
        "region": {
            "kind": region.kind,
            "center_m": [float(v) for v in region.center],
            "radius_m": region.radius,
            "n_points": len(region),
        },
        "normalized": x.normalized,
        "eigenvalues": [float(v) for v in eigvals],
        "matrix": [_pairs(row) for row in x.x],
    }
    if reference_power is not None:
        doc["reference_power"] = reference_power
    out_path = _resolve_out(args, cfg)
    _write_text(_json_dump(doc), out_path)
    plot = _plot_path(out_path, args.plot)
    if plot:
        from . import plotting

        plotting.save_pd_matrix_figure(x.x, plot)
    return 0


def _suite_oracle(model: ArrayModel, rng) -> dict:
    wavelength = model.medium.wavelength
    direction = np.array([1.0, 2.0, 0.7])
    direction /= np.linalg.norm(direction)
    worst = 0.0
    for r_wl in (2.0, 5.0, 100.0):
        p = r_wl * wavelength * direction
        a = assemble_manifold(model, p)
        for _ in range(8):
            w = rng.standard_normal(model.n_antennas) + 1j * rng.standard_normal(
                model.n_antennas
            )
            err = relative_error(
                brute_force_field(model, w, p), evaluate_field(a, w)
            ).relative_error
            worst = max(worst, err)
    tol = 1e-12
    return {
        "pass": bool(worst < tol),
        "max_relative_error": worst,
        "tolerance": tol,
    }


def _suite_convergence(model: ArrayModel, rng) -> dict:
    wavelength = model.medium.wavelength
    radii = np.array([10.0, 100.0, 1000.0]) * wavelength
    direction = (1.0, 2.0, 0.7)
    w = rng.standard_normal(model.n_antennas) + 1j * rng.standard_normal(
        model.n_antennas
    )
    sweep = convergence_sweep(model, w, direction, radii)
    single = half_wave_ula(1, wavelength, model.medium)
    ref_sweep = convergence_sweep(single, [1.0], direction, radii)
    window = (-1.3, -0.7)
    ok = True
    for s in (sweep, ref_sweep):
        ok = ok and bool(np.all(np.diff(s.errors) < 0))
        ok = ok and window[0] <= s.slope <= window[1]
    return {
        "pass": ok,
        "slope_window": list(window),
        "array": {"errors": sweep.errors.tolist(), "slope": sweep.slope},
        "single_dipole": {"errors": ref_sweep.errors.tolist(), "slope": ref_sweep.slope},
    }


def _suite_constraints(model: ArrayModel, rng) -> dict:
    wavelength = model.medium.wavelength
    p = 100.0 * wavelength * np.array([0.0, 1.0, 0.0])
    a = assemble_manifold(model, p)
    region = sphere_region((0.0, 0.0, 0.0), wavelength, 50)
    x = normalize_pd_matrix(characteristic_pd_matrix(model, region))
    q_limit = 0.5
    sol = pd_constrained(a, x, q_limit)
    tightness = abs(
        float((sol.weights.conj() @ x.x @ sol.weights).real) - q_limit
    ) / q_limit

    svd_sol = max_field_strength(a, 1.0)
    slack = 0.0
    for _ in range(200):
        w = rng.standard_normal(model.n_antennas) + 1j * rng.standard_normal(
            model.n_antennas
        )
        w /= np.linalg.norm(w)
        slack = max(slack, float(np.linalg.norm(a.a @ w) ** 2) - svd_sol.objective)
    tol = 1e-10
    ok = tightness < tol and slack <= tol
    return {
        "pass": bool(ok),
        "pd_constraint_relative_gap": tightness,
        "svd_optimality_slack": slack,
        "tolerance": tol,
    }


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    base_dir = Path(args.config).parent if args.config else Path.cwd()
    rng = np.random.default_rng(20240)
    suites = {}
    model = None
    try:
        model = build_model(cfg, base_dir)
    except (ConfigError, MomentFileError, ValueError) as exc:
        suites["model"] = {"pass": False, "error": str(exc)}

    if model is not None:
        for name, fn in (
            ("oracle_identity", _suite_oracle),
            ("convergence", _suite_convergence),
            ("constraint_tightness", _suite_constraints),
        ):
            try:
                suites[name] = fn(model, rng)
            except Exception as exc:  # noqa: BLE001 - suite failures must report, not crash
                suites[name] = {"pass": False, "error": str(exc)}

    all_pass = bool(suites) and all(s.get("pass") for s in suites.values())
    doc = {"pass": all_pass, "suites": suites}
    out_path = _resolve_out(args, cfg)
    _write_text(_json_dump(doc), out_path)
    return 0 if all_pass else 1


_COMMANDS = {
    "field": cmd_field,
    "beamform": cmd_beamform,
    "pattern": cmd_pattern,
    "pd": cmd_pd,
    "validate": cmd_validate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="em-manifold",
        description="Electric fields, power density and beamforming for "
        "dipole-discretized antenna arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=(name != "validate"), default=None)
        sp.add_argument(
            "--variant",
            choices=["near", "ff", "isolated", "isotropic"],
            default=None,
            help="manifold variant override",
        )
        sp.add_argument("--out", default=None, help="output path override")
        if name != "validate":
            sp.add_argument(
                "--plot",
                action="store_true",
                help="render a figure next to the output file",
            )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MomentFileError as exc:
        print(f"moment file error: {exc}", file=sys.stderr)
        return 2
    except (SingularityError, DegenerateDirectionError) as exc:
        print(f"singular evaluation: {exc}", file=sys.stderr)
        return 3
    except NullManifoldError as exc:
        print(f"infeasible problem: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        # model-level misuse (e.g. isolated variant on a coupled array)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
