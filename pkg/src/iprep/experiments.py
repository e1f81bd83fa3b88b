"""Declarative experiment runner with deterministic file artifacts.

Each experiment is a named composition of the library modules driven by a
single JSON config: the schema is validated up front, every random draw
derives from the mandatory seed, numeric CSV bodies are formatted to 17
significant digits so identical configs reproduce byte-identical files,
and each experiment evaluates its own built-in assertions whose outcome
is folded into the run report.  All writes stay inside the chosen output
directory.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
from scipy.linalg import eigh

from . import adiabatic, ed, models, pauli, rg, tba, xy

__all__ = [
    "ConfigError",
    "ResourceLimitError",
    "RunReport",
    "SCHEMAS",
    "EXPERIMENT_NAMES",
    "validate_config",
    "required_fields",
    "run",
    "format_float",
    "config_hash",
]

#: Fixed significant-digit formatting for every float written to disk.
FLOAT_FORMAT = "%.17g"

_RG_SITE_CAP = 11
_XY_PARENT_SITE_CAP = 8
_XY_LIOM_SITE_CAP = 10
_ENTANGLEMENT_SITE_CAP = 12
_TBA_GRID_CAP = 8192
_IN_PHASE_MARGIN = 0.05


class ConfigError(ValueError):
    """Config rejected before any file is written (exit code 2)."""


class ResourceLimitError(RuntimeError):
    """Config asks for more than the desk-scale caps allow (exit code 3)."""


@dataclass
class RunReport:
    """Everything a finished run reports back."""

    config: dict
    input_hash: str
    files: list[str]
    wall_time_s: float
    assertions: list[dict]
    metrics: dict
    passed: bool

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "input_hash": self.input_hash,
            "files": self.files,
            "wall_time_s": self.wall_time_s,
            "assertions": self.assertions,
            "metrics": self.metrics,
            "passed": self.passed,
        }
        return json.dumps(
            payload, indent=2, sort_keys=True, default=_json_default
        )


def format_float(value: float) -> str:
    """Render one float with the fixed file-output precision."""
    return FLOAT_FORMAT % float(value)


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def config_hash(config: dict) -> str:
    """Content hash of the canonicalized config document."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean cells are not part of any emitter schema")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


@dataclass
class _RunContext:
    out_dir: Path
    threads: int
    files: list[str] = field(default_factory=list)
    assertions: list[dict] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.assertions.append(
            {"name": name, "passed": bool(passed), "detail": detail}
        )

    def emit_csv(self, name: str, header: tuple, rows) -> None:
        path = self.out_dir / name
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(value) for value in row])
        self.files.append(name)

    def emit_json(self, name: str, payload: dict) -> None:
        path = self.out_dir / name
        text = json.dumps(
            payload, indent=2, sort_keys=True, default=_json_default
        )
        path.write_text(text + "\n")
        self.files.append(name)

    def map(self, fn, jobs: list):
        if self.threads <= 1 or len(jobs) <= 1:
            return [fn(job) for job in jobs]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, jobs))


# ---------------------------------------------------------------------------
# Config schemas
# ---------------------------------------------------------------------------

_MODEL = {"type": "string", "enum": sorted(models.MODEL_FACTORIES)}
_NUMBER_LIST = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_POSITIVE_LIST = {
    "type": "array",
    "items": {"type": "number", "exclusiveMinimum": 0},
    "minItems": 1,
}


def _schema(name: str, properties: dict, required: list[str]) -> dict:
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "properties": {
            "experiment": {"const": name},
            "seed": {"type": "integer", "minimum": 0},
            "out": {"type": "string"},
            **properties,
        },
        "required": ["experiment", "seed", *required],
        "additionalProperties": False,
    }


SCHEMAS = {
    "rg_gap_scaling": _schema(
        "rg_gap_scaling",
        {
            "model": _MODEL,
            "sizes": {
                "type": "array",
                "items": {"type": "integer", "minimum": 2},
                "minItems": 3,
            },
        },
        ["model", "sizes"],
    ),
    "rg_eigenvalue_flow": _schema(
        "rg_eigenvalue_flow",
        {
            "model": _MODEL,
            "n_sites": {"type": "integer", "minimum": 2},
            "g_values": _POSITIVE_LIST,
        },
        ["model", "n_sites", "g_values"],
    ),
    "xy_parent_check": _schema(
        "xy_parent_check",
        {
            "n_sites": {"type": "integer", "minimum": 2},
            "n_points": {"type": "integer", "minimum": 1},
            "n_patterns": {"type": "integer", "minimum": 1},
        },
        ["n_sites"],
    ),
    "xy_liom_bound": _schema(
        "xy_liom_bound",
        {
            "n_sites": {"type": "integer", "minimum": 2},
            "points": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": {"type": "number", "minimum": 0},
                    "minItems": 2,
                    "maxItems": 2,
                },
                "minItems": 1,
            },
            "n_points": {"type": "integer", "minimum": 1},
            "n_patterns": {"type": "integer", "minimum": 1},
        },
        ["n_sites"],
    ),
    "tba_sweep": _schema(
        "tba_sweep",
        {
            "delta_values": {
                "type": "array",
                "items": {
                    "type": "number",
                    "minimum": 0,
                    "exclusiveMaximum": 1,
                },
                "minItems": 1,
            },
            "h_values": {
                "type": "array",
                "items": {"type": "number", "minimum": 0},
                "minItems": 1,
            },
            "grid_size": {"type": "integer", "minimum": 64},
        },
        ["delta_values", "h_values"],
    ),
    "xxz_ed_gaps": _schema(
        "xxz_ed_gaps",
        {
            "sizes": {
                "type": "array",
                "items": {"type": "integer", "minimum": 4},
                "minItems": 1,
            },
            "delta_values": _NUMBER_LIST,
            "density": {
                "type": "number",
                "exclusiveMinimum": 0,
                "exclusiveMaximum": 1,
            },
            "slope_checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "delta": {"type": "number"},
                        "target": {"type": "number"},
                        "window": {"type": "number", "exclusiveMinimum": 0},
                    },
                    "required": ["delta", "target", "window"],
                    "additionalProperties": False,
                },
            },
        },
        ["sizes", "delta_values"],
    ),
    "smale_audit": _schema(
        "smale_audit",
        {
            "model": _MODEL,
            "sizes": {
                "type": "array",
                "items": {"type": "integer", "minimum": 2},
                "minItems": 1,
            },
            "snapshot_count": {"type": "integer", "minimum": 2},
        },
        ["model", "sizes"],
    ),
    "adiabatic_fidelity": _schema(
        "adiabatic_fidelity",
        {
            "model": _MODEL,
            "n_sites": {"type": "integer", "minimum": 2},
            "target_index": {"type": "integer", "minimum": 0},
            "g_start": {"type": "number"},
            "g_end": {"type": "number"},
            "times": _POSITIVE_LIST,
            "steps_per_time": {"type": "integer", "minimum": 1},
            "fidelity_target": {
                "type": "number",
                "exclusiveMinimum": 0,
                "maximum": 1,
            },
            "monotone_check": {"type": "boolean"},
            "checkpoint_every": {"type": "integer", "minimum": 1},
        },
        ["model", "n_sites", "target_index", "times"],
    ),
    "entanglement_scan": _schema(
        "entanglement_scan",
        {
            "model": _MODEL,
            "n_sites": {"type": "integer", "minimum": 2},
            "g": {"type": "number"},
            "cut": {"type": "integer", "minimum": 1},
        },
        ["model", "n_sites", "g"],
    ),
}

EXPERIMENT_NAMES = tuple(sorted(SCHEMAS))


def required_fields(name: str) -> list[str]:
    """Required config keys of one experiment (schema order)."""
    return list(SCHEMAS[name]["required"])


def validate_config(config) -> None:
    """Raise :class:`ConfigError` unless the config is schema-valid."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    name = config.get("experiment")
    if name not in SCHEMAS:
        known = ", ".join(EXPERIMENT_NAMES)
        raise ConfigError(f"unknown experiment {name!r}; known: {known}")
    try:
        jsonschema.validate(config, SCHEMAS[name])
    except jsonschema.ValidationError as err:
        raise ConfigError(f"config violates the {name} schema: {err.message}")
    # Cross-field rules the schema language does not express.
    if name == "xy_liom_bound":
        if "points" not in config and "n_points" not in config:
            raise ConfigError("xy_liom_bound needs 'points' or 'n_points'")
    if name == "adiabatic_fidelity":
        if config["target_index"] >= 1 << config["n_sites"]:
            raise ConfigError("target_index outside the state-label range")
    if name == "entanglement_scan":
        if config.get("cut", 1) >= config["n_sites"]:
            raise ConfigError("cut must leave both subsystems nonempty")
    if name == "xxz_ed_gaps":
        density = config.get("density", 0.25)
        for n in config["sizes"]:
            magnons = round(n * density)
            if not 0 < magnons < n:
                raise ConfigError(
                    f"density {density} leaves no excitable sector at N={n}"
                )


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------


def _model_spec(config: dict, n_sites: int) -> models.RGModelSpec:
    name = config["model"]
    if name == "random_uniform":
        return models.random_uniform(n_sites, config["seed"])
    return models.MODEL_FACTORIES[name](n_sites)


def _require_sites(sizes, cap: int, what: str) -> None:
    worst = max(sizes)
    if worst > cap:
        raise ResourceLimitError(
            f"{what} caps at N = {cap}; config asks for N = {worst}"
        )


def _emit_scan(
    ctx: _RunContext, stem: str, spec: models.RGModelSpec, scan: rg.GapScan
) -> None:
    ctx.emit_csv(
        f"{stem}.csv",
        ("g", "min_gap", "argmin_seed_a", "argmin_seed_b", "delta_g_used"),
        [
            (rec.g, rec.min_gap, rec.pair[0], rec.pair[1], rec.delta_g)
            for rec in scan.steps
        ],
    )
    ctx.emit_json(
        f"{stem}.json",
        {
            "spec": {
                "name": spec.name,
                "n_sites": spec.n_sites,
                "omega": spec.omega.tolist(),
                "epsilon": spec.epsilon.tolist(),
                "seed": spec.seed,
            },
            "policy": scan.policy,
            "g_target": scan.g_target,
            "n_rejected": scan.n_rejected,
            "final_roots": scan.final.roots.tolist(),
        },
    )


def _draw_in_phase(rng: np.random.Generator, count: int) -> list[tuple]:
    """Random (gamma, h) away from the critical lines."""
    points = []
    while len(points) < count:
        gamma = rng.uniform(0.0, 2.0)
        h = rng.uniform(0.0, 2.0)
        if abs(h - 1.0) < _IN_PHASE_MARGIN:
            continue
        if h < 1.0 and gamma < _IN_PHASE_MARGIN:
            continue
        points.append((float(gamma), float(h)))
    return points


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _run_rg_gap_scaling(config: dict, ctx: _RunContext) -> None:
    sizes = config["sizes"]
    _require_sites(sizes, _RG_SITE_CAP, "full-spectrum continuation")

    def job(n):
        spec = _model_spec(config, n)
        return n, spec, rg.continuation_scan(spec)

    results = ctx.map(job, list(sizes))
    gaps = []
    for n, spec, scan in results:
        _, gap = rg.minimum_gap(scan)
        gaps.append(gap)
        _emit_scan(ctx, f"scan_N{n}", spec, scan)
    ctx.emit_csv("gap_scaling.csv", ("N", "min_path_gap"), zip(sizes, gaps))
    slope, stderr = ed.loglog_slope(sizes, gaps)
    ctx.metrics["slope"] = slope
    ctx.metrics["slope_stderr"] = stderr
    ctx.check(
        "slope_in_window",
        -1.2 <= slope <= -0.85,
        f"slope = {slope:.4f} (window [-1.2, -0.85])",
    )
    for n, gap in zip(sizes, gaps):
        ctx.check(
            f"gap_tracks_inverse_size_N{n}",
            abs(gap * n - 1.0) <= 0.2,
            f"N*gap = {gap * n:.4f}",
        )


def _run_rg_eigenvalue_flow(config: dict, ctx: _RunContext) -> None:
    n = config["n_sites"]
    _require_sites([n], _RG_SITE_CAP, "full-spectrum continuation")
    g_values = sorted(config["g_values"])
    spec = _model_spec(config, n)
    scan = rg.continuation_scan(
        spec, g_target=g_values[-1], snapshot_couplings=g_values
    )
    rows = []
    for snap in scan.snapshots:
        for seed_index, roots in enumerate(snap.roots):
            for k, value in enumerate(roots, start=1):
                rows.append((snap.g, seed_index, k, value))
    ctx.emit_csv("eigenvalue_flow.csv", ("g", "seed", "k", "q"), rows)
    _emit_scan(ctx, f"scan_N{n}", spec, scan)
    worst_residual = max(
        float(snap.residual_sq.max()) for snap in scan.snapshots
    )
    ctx.metrics["worst_snapshot_residual_sq"] = worst_residual
    ctx.check(
        "snapshots_converged",
        worst_residual < rg.RESIDUAL_TOL_SQ,
        f"max residual^2 = {worst_residual:.3e}",
    )
    margin = min(rec.cross_sector_margin for rec in scan.steps)
    ctx.metrics["min_cross_sector_margin"] = margin
    ctx.check(
        "magnetization_bound_respected",
        margin >= 0.0,
        f"min margin = {margin:.3e}",
    )


def _run_xy_parent_check(config: dict, ctx: _RunContext) -> None:
    n = config["n_sites"]
    _require_sites([n], _XY_PARENT_SITE_CAP, "dense parent spectra")
    n_points = config.get("n_points", 20)
    n_patterns = config.get("n_patterns", 20)
    rng = np.random.default_rng(config["seed"])
    jobs = []
    for gamma, h in _draw_in_phase(rng, n_points):
        spec = xy.XYModelSpec(n_sites=n, gamma=gamma, h=h)
        for _ in range(n_patterns):
            jobs.append((spec, xy.random_valid_pattern(spec, rng)))

    def job(item):
        spec, pattern = item
        parent = xy.build_xy_parent(spec, pattern)
        ground, degeneracy, gap = xy.dense_spectrum_summary(parent)
        return spec.gamma, spec.h, ground, degeneracy, gap

    results = ctx.map(job, jobs)
    ctx.emit_csv(
        "xy_parent_gaps.csv",
        ("gamma", "h", "value"),
        [(gamma, h, gap) for gamma, h, _, _, gap in results],
    )
    worst_gap = max(abs(gap - 1.0) for *_r, gap in results)
    worst_ground = max(abs(ground) for _g, _h, ground, _d, _gap in results)
    unique = all(degeneracy == 1 for *_r, degeneracy, _gap in results)
    ctx.metrics["worst_gap_deviation"] = worst_gap
    ctx.metrics["worst_ground_energy"] = worst_ground
    ctx.check("gaps_equal_one", worst_gap <= 1e-9, f"max |gap-1| = {worst_gap:.2e}")
    ctx.check(
        "ground_levels_at_zero",
        worst_ground <= 1e-9,
        f"max |E0| = {worst_ground:.2e}",
    )
    ctx.check("ground_levels_unique", unique)


def _run_xy_liom_bound(config: dict, ctx: _RunContext) -> None:
    n = config["n_sites"]
    _require_sites([n], _XY_LIOM_SITE_CAP, "dense block spectra")
    n_patterns = config.get("n_patterns", 4)
    rng = np.random.default_rng(config["seed"])
    if "points" in config:
        points = [(float(g), float(h)) for g, h in config["points"]]
    else:
        points = _draw_in_phase(rng, config["n_points"])
    bound_rows = []
    gap_rows = []
    violations = 0
    checked = 0
    for gamma, h in points:
        spec = xy.XYModelSpec(n_sites=n, gamma=gamma, h=h)
        bound, _ = xy.liom_gap_bound(spec)
        bound_rows.append((gamma, h, bound))
        for parity in (1, -1):
            for _ in range(n_patterns):
                pattern = xy.random_valid_pattern(spec, rng, parity=parity)
                gap = xy.liom_parent_gap(spec, pattern)
                gap_rows.append((gamma, h, gap))
                checked += 1
                if bound > gap + 1e-12:
                    violations += 1
    ctx.emit_csv("liom_bound.csv", ("gamma", "h", "value"), bound_rows)
    ctx.emit_csv("liom_parent_gaps.csv", ("gamma", "h", "value"), gap_rows)
    ctx.metrics["patterns_checked"] = checked
    ctx.metrics["violations"] = violations
    ctx.check(
        "bound_below_parent_gap",
        violations == 0,
        f"{violations} of {checked} patterns violate the bound",
    )


def _run_tba_sweep(config: dict, ctx: _RunContext) -> None:
    grid_size = config.get("grid_size", 1024)
    if grid_size > _TBA_GRID_CAP:
        raise ResourceLimitError(
            f"dressing grids cap at {_TBA_GRID_CAP} points; config asks for "
            f"{grid_size}"
        )
    jobs = [
        (delta, h)
        for delta in config["delta_values"]
        for h in config["h_values"]
    ]

    def job(point):
        delta, h = point
        try:
            profile = tba.solve_dressing(
                tba.TBAInput(delta=delta, h=h, grid_size=grid_size)
            )
        except ValueError as err:
            return point, None, str(err)
        return point, profile, ""

    results = ctx.map(job, jobs)
    rows = []
    failures = []
    for (delta, h), profile, message in results:
        if profile is None:
            failures.append(f"delta={delta}, h={h}: {message}")
            continue
        rows.append(
            (
                delta,
                h,
                profile.boundary,
                profile.fermi_velocity,
                profile.dressed_charge_sq,
                profile.magnetization,
                profile.residual,
                profile.iterations,
            )
        )
    ctx.emit_csv(
        "tba_sweep.csv",
        ("delta", "h", "Lambda", "v_F", "Zeta2", "m", "residual", "iterations"),
        rows,
    )
    ctx.metrics["points_solved"] = len(rows)
    ctx.metrics["points_failed"] = len(failures)
    ctx.check(
        "all_points_solved",
        not failures,
        "; ".join(failures[:4]),
    )


def _run_xxz_ed_gaps(config: dict, ctx: _RunContext) -> None:
    density = config.get("density", 0.25)
    jobs = []
    for delta in config["delta_values"]:
        for n in config["sizes"]:
            magnons = round(n * density)
            m = n - 2 * magnons
            if math.comb(n, magnons) > ed.SECTOR_DENSE_LIMIT:
                raise ResourceLimitError(
                    f"sector dimension {math.comb(n, magnons)} at N={n} "
                    f"exceeds the dense cap {ed.SECTOR_DENSE_LIMIT}"
                )
            jobs.append((delta, n, m))

    def job(item):
        delta, n, m = item
        return ed.xxz_sector_gap(n, m, delta)

    records = ctx.map(job, jobs)
    ctx.emit_csv(
        "ed_gaps.csv",
        ("N", "M", "delta", "gap"),
        [
            (rec.n_sites, rec.magnetization, rec.delta, rec.gap)
            for rec in records
        ],
    )
    for check in config.get("slope_checks", []):
        matching = [
            (rec.n_sites, rec.gap)
            for rec in records
            if rec.delta == check["delta"]
        ]
        label = f"slope_at_delta_{check['delta']}"
        if len(matching) < 3:
            ctx.check(label, False, "fewer than three sizes for a fit")
            continue
        xs, ys = zip(*sorted(matching))
        slope, _ = ed.loglog_slope(xs, ys)
        ctx.metrics[label] = slope
        ctx.check(
            label,
            abs(slope - check["target"]) < check["window"],
            f"slope = {slope:.4f}, target {check['target']} "
            f"+/- {check['window']}",
        )


def _run_smale_audit(config: dict, ctx: _RunContext) -> None:
    sizes = config["sizes"]
    _require_sites(sizes, _RG_SITE_CAP, "full-spectrum continuation")
    snapshot_count = config.get("snapshot_count", 8)

    def job(n):
        spec = _model_spec(config, n)
        g_target = rg.default_g_target(spec)
        couplings = [
            g_target * (i + 1) / snapshot_count for i in range(snapshot_count)
        ]
        scan = rg.continuation_scan(
            spec, g_target=g_target, snapshot_couplings=couplings
        )
        return n, rg.smale_audit(scan)

    results = ctx.map(job, list(sizes))
    rows = []
    for n, audit in results:
        trend = audit.min_bound_trend
        rows.append(
            (
                n,
                float(trend[:, 1].min()),
                float(trend[:, 2].min()),
                audit.violations,
            )
        )
        ctx.check(
            f"no_violations_N{n}",
            audit.violations == 0,
            f"{audit.violations} of {audit.n_checked} roots",
        )
    ctx.emit_csv(
        "smale_audit.csv",
        ("N", "min_bound", "min_distance", "violations"),
        rows,
    )
    if len(rows) >= 2:
        first, last = rows[0], rows[-1]
        bound_shrink = first[1] / last[1] if last[1] > 0 else math.inf
        gap_shrink = first[2] / last[2] if last[2] > 0 else math.inf
        ctx.metrics["bound_shrink_factor"] = bound_shrink
        ctx.metrics["distance_shrink_factor"] = gap_shrink


def _run_adiabatic_fidelity(config: dict, ctx: _RunContext) -> None:
    n = config["n_sites"]
    _require_sites([n], adiabatic.EVOLVE_SITE_LIMIT, "dense evolution")
    g_start = config.get("g_start", 0.0)
    g_end = config.get("g_end", 1.0)
    steps_per_time = config.get("steps_per_time", 64)
    checkpoint_every = config.get("checkpoint_every")
    times = sorted(config["times"])
    spec = _model_spec(config, n)

    anchor = adiabatic.RGParentFamily(spec, config["target_index"])
    _, start_vectors = eigh(pauli.to_dense(anchor(g_start)).real)
    initial = start_vectors[:, 0].astype(complex)
    _, end_vectors = eigh(pauli.to_dense(anchor(g_end)).real)
    target = end_vectors[:, 0].astype(complex)

    def job(total_time):
        family = adiabatic.RGParentFamily(spec, config["target_index"])
        steps = max(1, int(math.ceil(total_time * steps_per_time)))
        report = adiabatic.evolve(
            initial,
            family,
            adiabatic.Schedule(g_start, g_end, total_time),
            steps,
            target=target,
            checkpoint_every=checkpoint_every,
        )
        return total_time, report

    results = ctx.map(job, times)
    ctx.emit_csv(
        "fidelity.csv",
        ("T", "steps", "final_fidelity"),
        [(t, rep.steps, rep.final_fidelity) for t, rep in results],
    )
    if checkpoint_every:
        for i, (t, rep) in enumerate(results):
            ctx.emit_json(
                f"checkpoints_{i}.json",
                {
                    "schedule": {
                        "g_start": g_start,
                        "g_end": g_end,
                        "total_time": t,
                    },
                    "steps": rep.steps,
                    "dt": rep.dt,
                    "times": rep.checkpoint_times.tolist(),
                    "fidelities": rep.checkpoint_fidelities.tolist(),
                },
            )
    best = results[-1][1].final_fidelity
    ctx.metrics["final_fidelity_at_largest_T"] = best
    if "fidelity_target" in config:
        ctx.check(
            "fidelity_target_reached",
            best >= config["fidelity_target"],
            f"fidelity {best:.6f} at T = {times[-1]}",
        )
    if config.get("monotone_check"):
        infidelities = [1.0 - rep.final_fidelity for _, rep in results]
        monotone = all(
            later < earlier * 1.05
            for earlier, later in zip(infidelities, infidelities[1:])
        )
        ctx.check(
            "infidelity_monotone",
            monotone,
            "infidelities: "
            + ", ".join(format(x, ".3e") for x in infidelities),
        )


def _run_entanglement_scan(config: dict, ctx: _RunContext) -> None:
    n = config["n_sites"]
    _require_sites([n], _ENTANGLEMENT_SITE_CAP, "full dense diagonalization")
    cut = config.get("cut", n // 2)
    spec = _model_spec(config, n)
    dense = pauli.to_dense(models.build_rg_hamiltonian(spec, config["g"]))
    if np.abs(dense.imag).max() > 1e-12:
        raise RuntimeError("Hamiltonian has unexpected imaginary part")
    _, vectors = eigh(dense.real)
    entropies = [
        ed.entanglement_entropy(vectors[:, i], cut)
        for i in range(vectors.shape[1])
    ]
    ctx.emit_csv(
        "entropies.csv",
        ("N", "state_index", "entropy"),
        [(n, i, s) for i, s in enumerate(entropies)],
    )
    ceiling = cut * math.log(2.0) + 1e-9
    ctx.metrics["max_entropy"] = max(entropies)
    ctx.metrics["mean_entropy"] = float(np.mean(entropies))
    ctx.check(
        "entropies_within_cut_bound",
        all(0.0 <= s <= ceiling for s in entropies),
        f"max = {max(entropies):.4f}, bound = {ceiling:.4f}",
    )


_RUNNERS = {
    "rg_gap_scaling": _run_rg_gap_scaling,
    "rg_eigenvalue_flow": _run_rg_eigenvalue_flow,
    "xy_parent_check": _run_xy_parent_check,
    "xy_liom_bound": _run_xy_liom_bound,
    "tba_sweep": _run_tba_sweep,
    "xxz_ed_gaps": _run_xxz_ed_gaps,
    "smale_audit": _run_smale_audit,
    "adiabatic_fidelity": _run_adiabatic_fidelity,
    "entanglement_scan": _run_entanglement_scan,
}


def run(config: dict, out_dir, threads: int = 1) -> RunReport:
    """Validate, execute, and report one experiment.

    Artifacts and ``report.json`` land in ``out_dir``.  Schema problems
    raise :class:`ConfigError` before anything is written; desk-scale
    overruns raise :class:`ResourceLimitError`.
    """
    validate_config(config)
    if threads < 1:
        raise ConfigError("threads must be at least 1")
    started = time.perf_counter()
    out = Path(out_dir)
    ctx = _RunContext(out_dir=out, threads=threads)
    out.mkdir(parents=True, exist_ok=True)
    _RUNNERS[config["experiment"]](config, ctx)
    report = RunReport(
        config=config,
        input_hash=config_hash(config),
        files=ctx.files,
        wall_time_s=time.perf_counter() - started,
        assertions=ctx.assertions,
        metrics=ctx.metrics,
        passed=all(entry["passed"] for entry in ctx.assertions),
    )
    (out / "report.json").write_text(report.to_json() + "\n")
    return report
