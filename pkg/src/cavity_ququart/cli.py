"""Command-line scenarios: ``transfer | ames | scan | teleport | validate-effective``.

Each run writes a ``summary.json`` (validated against the packaged schema)
plus CSV time series or grids into the output directory.  Exit codes:
0 success, 1 configuration error, 2 a check failed or a request was rejected.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import __version__
from .hilbert import ConfigurationError, Ket, fidelity
from .models import SystemParams
from .protocols import ames as ames_mod
from .protocols import teleportation as tp
from .protocols import state_transfer as tr
from .protocols.states import QubitPairState
from .tolerances import tolerances
from .validation import (
    build_typo_ledger,
    cavity_lifetime,
    quoted_comparison,
    run_full_vs_effective,
)

log = logging.getLogger("cavity_ququart")

SCENARIOS = ("transfer", "ames", "scan", "teleport", "validate-effective")
EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION = 0, 1, 2

# Hz values; the 2pi factor is applied unless the run is in angular units
REFERENCE_G_HZ = 15.2e9
REFERENCE_OMEGA_OP_HZ = 192e12
REFERENCE_DELTA_HZ = 304e6
REFERENCE_LAMBDA_PRIME_HZ = 152e6
REFERENCE_QUALITY_FACTOR = 3.9e4
REFERENCE_CAVITY_EXCITATION = 1e-4

FREQUENCY_KEYS = ("g", "detuning", "omega_op", "delta_mismatch", "lambda_prime")
PARAM_KEYS = FREQUENCY_KEYS + ("detuning_over_g", "n_max", "quality_factor", "cavity_excitation")
TOP_KEYS = ("scenario", "params", "grid", "io", "seed", "angular", "tolerances",
            "variant", "mode", "axes", "input", "resource", "resource_time_error", "reverse_basis")


# -- config ----------------------------------------------------------------


@dataclass
class ScenarioConfig:
    scenario: str
    params: SystemParams
    mismatch_params: SystemParams
    quality_factor: float
    cavity_excitation: float
    n_samples: int
    t_end: float | None
    errors: dict[str, np.ndarray]
    out_dir: Path
    seed: int
    tol: dict[str, float]
    options: dict[str, Any] = field(default_factory=dict)


def _number(section: dict, key: str, prefix: str, default=None, positive=False, nonneg=False):
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigurationError(f"{prefix}{key}: expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise ConfigurationError(f"{prefix}{key}: must be > 0, got {value!r}")
    if nonneg and value < 0:
        raise ConfigurationError(f"{prefix}{key}: must be >= 0, got {value!r}")
    return float(value)


def _integer(section: dict, key: str, prefix: str, default: int, minimum: int) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{prefix}{key}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigurationError(f"{prefix}{key}: must be >= {minimum}, got {value}")
    return value


def _section(raw: dict, key: str) -> dict:
    value = raw.get(key, {})
    if not isinstance(value, dict):
        raise ConfigurationError(f"{key}: expected an object")
    return value


def _check_keys(section: dict, allowed, prefix: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigurationError(f"{prefix}{unknown[0]}: unknown field")


def _system_params(p: dict, scale: float, mismatch: bool) -> SystemParams:
    pre = "params."
    omega_op = _number(p, "omega_op", pre, REFERENCE_OMEGA_OP_HZ, positive=True) * scale
    n_max = _integer(p, "n_max", pre, 2, 1)
    if "detuning" in p and "detuning_over_g" in p:
        raise ConfigurationError("params.detuning: give either detuning or detuning_over_g, not both")
    g_default = REFERENCE_G_HZ
    if mismatch:
        delta = _number(p, "delta_mismatch", pre, REFERENCE_DELTA_HZ, nonneg=True) * scale
        lam_prime = _number(p, "lambda_prime", pre, None, nonneg=True)
        if "detuning" in p:
            detuning = _number(p, "detuning", pre, positive=True) * scale
        else:
            ratio = _number(p, "detuning_over_g", pre, 100.0, positive=True)
            detuning = ratio * _number(p, "g", pre, g_default, positive=True) * scale
        if lam_prime is None and "g" not in p:
            lam_prime = REFERENCE_LAMBDA_PRIME_HZ
        if lam_prime is not None:
            return SystemParams.from_lambda_prime(lam_prime * scale, delta, detuning, omega_op, n_max)
        g = _number(p, "g", pre, g_default, nonneg=True) * scale
        return SystemParams.from_detuning(g, detuning, omega_op, delta, n_max)
    g = _number(p, "g", pre, g_default, nonneg=True) * scale
    if "detuning" in p:
        detuning = _number(p, "detuning", pre, positive=True) * scale
    else:
        ratio = _number(p, "detuning_over_g", pre, 100.0, positive=True)
        if g == 0:
            raise ConfigurationError("params.detuning: required when g = 0")
        detuning = ratio * g
    delta = _number(p, "delta_mismatch", pre, 0.0, nonneg=True) * scale
    return SystemParams.from_detuning(g, detuning, omega_op, delta, n_max)


def _error_grid(spec, key: str, default: tuple[float, float, int]) -> np.ndarray:
    pre = f"grid.{key}."
    if spec is None:
        lo, hi, num = default
        return np.linspace(lo, hi, num)
    if isinstance(spec, list):
        vals = [_number({"v": v}, "v", f"grid.{key}[]") for v in spec]
        if not vals:
            raise ConfigurationError(f"grid.{key}: empty list")
        return np.array(vals)
    if not isinstance(spec, dict):
        raise ConfigurationError(f"grid.{key}: expected a list or {{start, stop, num}}")
    _check_keys(spec, ("start", "stop", "num"), pre)
    lo = _number(spec, "start", pre, default[0])
    hi = _number(spec, "stop", pre, default[1])
    num = _integer(spec, "num", pre, default[2], 2)
    return np.linspace(lo, hi, num)


def parse_config(raw: dict, scenario: str, out: str | None = None, seed: int | None = None,
                 angular: bool = False) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigurationError("config: expected a JSON object")
    _check_keys(raw, TOP_KEYS, "")
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"scenario: unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    if raw.get("scenario", scenario) != scenario:
        raise ConfigurationError(f"scenario: config says {raw['scenario']!r} but {scenario!r} was requested")

    angular = angular or bool(raw.get("angular", False))
    scale = 1.0 if angular else 2 * math.pi
    p = _section(raw, "params")
    _check_keys(p, PARAM_KEYS, "params.")

    mode = raw.get("mode", "mismatch")
    if mode not in ames_mod.MODES:
        raise ConfigurationError(f"mode: expected one of {ames_mod.MODES}, got {mode!r}")
    uses_mismatch = scenario == "scan" or (scenario in ("ames", "teleport") and mode == "mismatch")
    params = _system_params(p, scale, mismatch=uses_mismatch)
    mismatch_params = params if uses_mismatch else _system_params(
        {k: v for k, v in p.items() if k in ("omega_op", "n_max")}, scale, mismatch=True)
    if scenario == "validate-effective" and params.n_max < 2:
        raise ConfigurationError("params.n_max: validate-effective needs n_max >= 2")

    grid = _section(raw, "grid")
    _check_keys(grid, ("n_samples", "t_end", "time_errors", "coupling_errors"), "grid.")
    io = _section(raw, "io")
    _check_keys(io, ("out",), "io.")
    seed = seed if seed is not None else raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigurationError(f"seed: expected an integer, got {seed!r}")

    options = {k: raw[k] for k in ("variant", "axes", "input", "resource", "resource_time_error", "reverse_basis")
               if k in raw}
    options["mode"] = mode
    _validate_options(scenario, options)
    return ScenarioConfig(
        scenario=scenario,
        params=params,
        mismatch_params=mismatch_params,
        quality_factor=_number(p, "quality_factor", "params.", REFERENCE_QUALITY_FACTOR, positive=True),
        cavity_excitation=_number(p, "cavity_excitation", "params.", REFERENCE_CAVITY_EXCITATION, positive=True),
        n_samples=_integer(grid, "n_samples", "grid.", 201, 2),
        t_end=_number(grid, "t_end", "grid.", None, positive=True),
        errors={
            "time": _error_grid(grid.get("time_errors"), "time_errors", (-0.05, 0.05, 21)),
            "coupling": _error_grid(grid.get("coupling_errors"), "coupling_errors", (-0.1, 0.1, 21)),
        },
        out_dir=Path(out if out is not None else io.get("out", "out")),
        seed=seed,
        tol=tolerances(_section(raw, "tolerances")),
        options=options,
    )


def _validate_options(scenario: str, options: dict) -> None:
    variant = options.setdefault("variant", "single_photon")
    if variant not in tr.VARIANTS:
        raise ConfigurationError(f"variant: expected one of {tr.VARIANTS}, got {variant!r}")
    axes = options.setdefault("axes", list(ames_mod.SCAN_AXES))
    if not isinstance(axes, list) or not axes or any(a not in ames_mod.SCAN_AXES for a in axes):
        raise ConfigurationError(f"axes: expected a non-empty subset of {list(ames_mod.SCAN_AXES)}")
    resource = options.setdefault("resource", "ideal")
    if resource not in ("ideal", "ames"):
        raise ConfigurationError(f"resource: expected 'ideal' or 'ames', got {resource!r}")
    eps = options.setdefault("resource_time_error", 0.0)
    if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not -1 < eps:
        raise ConfigurationError(f"resource_time_error: expected a number > -1, got {eps!r}")
    basis = options.setdefault("reverse_basis", "fourier")
    if basis not in tp.REVERSE_BASES:
        raise ConfigurationError(f"reverse_basis: expected one of {tp.REVERSE_BASES}, got {basis!r}")
    if "input" in options:
        options["input"] = _parse_input(options["input"])


def _parse_input(value) -> QubitPairState:
    """``{"gg": [re, im], "eg": ..., "ge": ..., "ee": ...}``, normalized on read."""
    if not isinstance(value, dict):
        raise ConfigurationError("input: expected an object with keys gg, eg, ge, ee")
    _check_keys(value, ("gg", "eg", "ge", "ee"), "input.")
    coeffs = {}
    for key in ("gg", "eg", "ge", "ee"):
        pair = value.get(key, [0.0, 0.0])
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, (int, float)) for x in pair)):
            raise ConfigurationError(f"input.{key}: expected [re, im]")
        coeffs[key] = complex(pair[0], pair[1])
    norm = math.sqrt(sum(abs(c) ** 2 for c in coeffs.values()))
    if norm == 0:
        raise ConfigurationError("input: all coefficients are zero")
    return QubitPairState(**{f"c_{k}": c / norm for k, c in coeffs.items()})


# -- output helpers --------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, NaN/inf to None, complex to [re, im]."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_timeseries_csv(path: Path, times, labels, amplitudes, populations, fidelity_col) -> None:
    header = ["t_seconds"]
    for label in labels:
        header += [f"{label}_re", f"{label}_im", f"{label}_pop"]
    header.append("fidelity")
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, t in enumerate(times):
            row = [_fmt(t)]
            for j in range(len(labels)):
                a = amplitudes[i, j]
                row += [_fmt(a.real), _fmt(a.imag), _fmt(populations[i, j])]
            row.append(_fmt(fidelity_col[i]) if fidelity_col is not None else "")
            writer.writerow(row)


def _write_rows(path: Path, header, rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])


class Checks:
    def __init__(self):
        self.items: list[dict] = []

    def add(self, name: str, value, threshold, comparison: str) -> None:
        if comparison == "<=":
            ok = value <= threshold
        elif comparison == ">=":
            ok = value >= threshold
        else:
            ok = value == threshold
        self.items.append({"name": name, "value": value, "threshold": threshold,
                           "comparison": comparison, "passed": bool(ok)})

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.items)


def _params_dict(p: SystemParams) -> dict:
    return {
        "omega_op": p.omega_op, "omega_at": p.omega_at, "g_A": p.g_A, "g_B": p.g_B,
        "detuning": p.detuning, "delta_mismatch": p.delta_mismatch, "lambda": p.lam,
        "lambda_prime": p.lam_prime, "n_max": p.n_max,
    }


def _input_state(cfg: ScenarioConfig) -> QubitPairState:
    if "input" in cfg.options:
        return cfg.options["input"]
    return QubitPairState.haar_random(np.random.default_rng(cfg.seed))


def _quote_params(cfg: ScenarioConfig) -> SystemParams:
    """Configured params when they define a resonant transfer, else the reference set."""
    p = cfg.params
    return p if p.delta_mismatch == 0 and p.lam != 0 else SystemParams.reference_transfer()


def _quoted(cfg: ScenarioConfig) -> dict:
    table = quoted_comparison(_quote_params(cfg), cfg.mismatch_params, cfg.quality_factor, cfg.cavity_excitation)
    return {k: {"description": d, "quoted": q, "computed": c, "relative_deviation": abs(c - q) / q}
            for k, (d, q, c) in table.items()}


# -- scenarios -------------------------------------------------------------


def _run_transfer(cfg: ScenarioConfig, checks: Checks) -> tuple[dict, list[str]]:
    variant = cfg.options["variant"]
    state = _input_state(cfg)
    report = tr.transfer(state, variant, cfg.params)
    matrix = tr.transfer_matrix(variant, cfg.params)
    expected = np.diag([1, -1, -1, 1]) if variant == "vacuum" else np.eye(4)
    map_dev = float(np.max(np.abs(matrix - expected)))
    series = tr.transfer_trace(state, variant, cfg.params, cfg.n_samples, cfg.t_end)
    write_timeseries_csv(cfg.out_dir / "transfer_timeseries.csv", series.times, series.labels,
                         series.amplitudes, series.populations, series.fidelity_to_target)
    checks.add("coefficient_map_deviation", map_dev, cfg.tol["sign_pattern"], "<=")
    if variant != "vacuum":
        checks.add("transfer_infidelity", 1 - report.fidelity, cfg.tol["transfer_infidelity"], "<=")
    round_trip = tr.round_trip_fidelity(state, variant, cfg.params)
    checks.add("round_trip_infidelity", 1 - round_trip, cfg.tol["transfer_infidelity"], "<=")
    results = {
        "variant": variant,
        "input": state.computational(),
        "duration_s": report.duration,
        "fidelity": report.fidelity,
        "phase_profile": report.phase_profile,
        "ququart_amplitudes": report.ququart_amplitudes,
        "coefficient_map": matrix,
        "round_trip_fidelity": round_trip,
        "cavity_lifetime_s": cavity_lifetime(cfg.quality_factor, cfg.params.omega_op, cfg.cavity_excitation),
        "quoted": _quoted(cfg),
    }
    return results, ["transfer_timeseries.csv"]


def _run_ames(cfg: ScenarioConfig, checks: Checks) -> tuple[dict, list[str]]:
    mode = cfg.options["mode"]
    params = cfg.params
    margin = (ames_mod.ames_condition_margin(params.delta_mismatch, params.lam_prime)
              if mode == "mismatch" else None)
    try:
        result = ames_mod.prepare_ames(mode, params)
    except ames_mod.AMESConditionError as err:
        log.error("%s", err)
        return {"mode": mode, "condition_margin": err.margin, "reason": str(err)}, []
    series = ames_mod.ames_trace(mode, params, cfg.n_samples, cfg.t_end)
    write_timeseries_csv(cfg.out_dir / "ames_timeseries.csv", series.times, series.labels,
                         series.amplitudes, series.populations, series.fidelity_to_target)
    checks.add("ames_infidelity", 1 - result.fidelity, cfg.tol["ames_infidelity"], "<=")
    results = {
        "mode": mode,
        "duration_s": result.duration,
        "fidelity": result.fidelity,
        "correction_phases": {"A": result.correction[0], "B": result.correction[1]},
        "condition_margin": margin,
        "rabi_frequency": params.rabi_mismatch if mode == "mismatch" else None,
        "pre_correction": {k: result.pre_correction.amplitudes[int(np.argmax(ames_mod.atomic_ket(k).amplitudes))]
                           for k in ames_mod.DOUBLE_LABELS},
        "quoted": _quoted(cfg),
    }
    return results, ["ames_timeseries.csv"]


def _monotone_from_peak(errors: np.ndarray, fids: np.ndarray, slack: float) -> bool:
    order = np.argsort(errors)
    e, f = errors[order], fids[order]
    k = int(np.argmin(np.abs(e)))
    left_ok = bool(np.all(np.diff(f[: k + 1]) >= -slack))
    right_ok = bool(np.all(np.diff(f[k:]) <= slack))
    return left_ok and right_ok


def _run_scan(cfg: ScenarioConfig, checks: Checks) -> tuple[dict, list[str]]:
    axes = {}
    artifacts = []
    for axis in cfg.options["axes"]:
        curve = ames_mod.ames_sensitivity_scan(axis, cfg.errors[axis], cfg.params)
        name = f"scan_{axis}.csv"
        _write_rows(cfg.out_dir / name, ["relative_error", "fidelity"],
                    zip(curve.errors.astype(float), curve.fidelities.astype(float)))
        artifacts.append(name)
        span = cfg.tol[f"{axis}_scan_range"]
        inside = np.abs(curve.errors) <= span + 1e-12
        worst = float(np.min(curve.fidelities[inside])) if inside.any() else None
        monotone = _monotone_from_peak(curve.errors, curve.fidelities, cfg.tol["monotonicity_slack"])
        if worst is not None:
            checks.add(f"{axis}_scan_min_fidelity", worst, cfg.tol[f"{axis}_scan_floor"], ">=")
        checks.add(f"{axis}_scan_monotone", monotone, True, "==")
        axes[axis] = {"errors": curve.errors, "fidelities": curve.fidelities,
                      "min_fidelity_within_range": worst, "range": span, "monotone_from_peak": monotone}
    return {"axes": axes, "t_e": ames_mod.preparation_time("mismatch", cfg.params)}, artifacts


def _teleport_resource(cfg: ScenarioConfig) -> tuple[Ket, Ket]:
    """``(resource, its ideal counterpart)``."""
    if cfg.options["resource"] == "ideal":
        ideal = ames_mod.ideal_resource()
        return ideal, ideal
    params = cfg.mismatch_params
    nominal = ames_mod.prepare_ames("mismatch", params)
    eps = cfg.options["resource_time_error"]
    if eps == 0:
        return nominal.state, ames_mod.ames_target()
    t = nominal.duration * (1 + eps)
    psi = ames_mod.apply_correction(ames_mod.evolve_from_gg4("mismatch", params, t), nominal.correction)
    return psi, ames_mod.ames_target()


def _run_teleport(cfg: ScenarioConfig, checks: Checks) -> tuple[dict, list[str]]:
    resource, ideal = _teleport_resource(cfg)
    table = tp.derive_correction_table(ideal)
    state = _input_state(cfg)
    branches = tp.teleport_branches(state, resource, table)
    maps = tp.forward_maps(resource)
    f_e, f_avg = tp.channel_fidelities(maps, table)
    resource_fid = fidelity(resource, ideal)
    out, transcript = tp.teleport(state, resource, cfg.seed, table)
    sampled_fid = abs(np.vdot(state.computational(), out.vector())) ** 2
    _write_rows(cfg.out_dir / "teleport_branches.csv", ["alice", "bob", "probability", "fidelity"],
                [(b.outcome[0], b.outcome[1], b.probability, b.fidelity) for b in branches])

    basis = cfg.options["reverse_basis"]
    rev_branches = tp.reverse_teleport_branches(out, ideal, basis)
    back, rev_transcript = tp.reverse_teleport(out, ideal, cfg.seed, basis)
    composed = abs(np.vdot(state.computational(), back.computational())) ** 2

    worst = min(b.fidelity for b in branches)
    prob_sum = sum(b.probability for b in branches)
    checks.add("probability_sum_deviation", abs(prob_sum - 1), cfg.tol["probability_sum"], "<=")
    if resource_fid >= 1 - cfg.tol["ames_infidelity"]:
        checks.add("worst_branch_infidelity", 1 - worst, cfg.tol["teleport_infidelity"], "<=")
        checks.add("composition_infidelity", 1 - composed, cfg.tol["teleport_infidelity"], "<=")
    results = {
        "resource": cfg.options["resource"],
        "resource_time_error": cfg.options["resource_time_error"],
        "resource_fidelity": resource_fid,
        "input": state.computational(),
        "worst_branch_fidelity": worst,
        "branch_probability_sum": prob_sum,
        "entanglement_fidelity": f_e,
        "average_fidelity": f_avg,
        "sampled": {
            "alice": transcript.outcome.alice,
            "bob": transcript.outcome.bob,
            "probability": transcript.outcome.probability,
            "correction": transcript.correction,
            "output": out.vector(),
            "fidelity": sampled_fid,
        },
        "reverse": {
            "basis": basis,
            "worst_branch_fidelity": min(b.fidelity for b in rev_branches),
            "outcome": [rev_transcript.outcome.j, rev_transcript.outcome.k],
            "probability": rev_transcript.outcome.probability,
            "correction": rev_transcript.correction,
            "output": back.computational(),
            "composition_fidelity": composed,
        },
    }
    return results, ["teleport_branches.csv"]


def _run_validate(cfg: ScenarioConfig, checks: Checks) -> tuple[dict, list[str]]:
    params = cfg.params
    params.require_far_detuned()
    if cfg.t_end is None and params.lam == 0:
        raise ConfigurationError("grid.t_end: required when the coupling vanishes")
    t_end = cfg.t_end if cfg.t_end is not None else math.pi / (2 * abs(params.lam))
    # photon load scales with the mean qubit excitation, so the default input is fixed
    state = cfg.options.get("input") or QubitPairState(0.5, 0.5, 0.5, 0.5)
    psi = state.with_ququart_ground()
    run = run_full_vs_effective(params, psi, t_end, cfg.n_samples)
    finer = run_full_vs_effective(replace(params, n_max=params.n_max + 1), psi, t_end, cfg.n_samples)
    stability = max(abs(finer.final_fidelity - run.final_fidelity),
                    abs(finer.max_photon_population - run.max_photon_population),
                    float(np.max(np.abs(finer.full_populations - run.full_populations))))

    write_timeseries_csv(cfg.out_dir / "full_timeseries.csv", run.times, run.labels,
                         run.full_amplitudes, run.full_populations, run.fidelity)
    write_timeseries_csv(cfg.out_dir / "effective_timeseries.csv", run.times, run.labels,
                         run.effective_amplitudes, run.effective_populations, run.fidelity)
    dev = np.max(np.abs(run.full_populations - run.effective_populations), axis=1)
    _write_rows(cfg.out_dir / "deviation.csv",
                ["t_seconds", "max_population_deviation", "photon_population", "fidelity"],
                zip(run.times, dev, run.photon_population, run.fidelity))

    transfer_params = _quote_params(cfg)
    quoted = quoted_comparison(transfer_params, cfg.mismatch_params, cfg.quality_factor, cfg.cavity_excitation)
    ledger = [e.to_dict() for e in build_typo_ledger(transfer_params, cfg.mismatch_params, quoted)]
    _write_json(cfg.out_dir / "typo_ledger.json", ledger)

    ratio = abs(params.detuning) / params.g_A if params.g_A else math.inf
    enforced = ratio >= 100 * (1 - 1e-9)
    if enforced:
        checks.add("max_photon_population", run.max_photon_population, cfg.tol["photon_population_max"], "<=")
        checks.add("final_fidelity", run.final_fidelity, cfg.tol["effective_fidelity_min"], ">=")
    checks.add("truncation_stability", stability, cfg.tol["truncation_stability"], "<=")
    checks.add("typo_ledger_entries", len(ledger), 0, ">=")
    results = {
        "detuning_over_g": ratio,
        "thresholds_enforced": enforced,
        "t_end_s": t_end,
        "max_photon_population": run.max_photon_population,
        "final_fidelity": run.final_fidelity,
        "max_population_deviation": run.max_population_deviation,
        "truncation_stability": stability,
        "typo_ledger_entries": len(ledger),
        "typo_ledger_ids": [e["id"] for e in ledger],
    }
    return results, ["full_timeseries.csv", "effective_timeseries.csv", "deviation.csv", "typo_ledger.json"]


RUNNERS = {
    "transfer": _run_transfer,
    "ames": _run_ames,
    "scan": _run_scan,
    "teleport": _run_teleport,
    "validate-effective": _run_validate,
}


def _schema() -> dict:
    text = resources.files("cavity_ququart").joinpath("schemas/summary.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def run(cfg: ScenarioConfig) -> int:
    """Execute one scenario, write its artifacts and return the exit code."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    checks = Checks()
    results, artifacts = RUNNERS[cfg.scenario](cfg, checks)
    rejected = cfg.scenario == "ames" and "reason" in results
    status = "rejected" if rejected else ("ok" if checks.passed else "validation_failed")
    summary = _clean({
        "scenario": cfg.scenario,
        "status": status,
        "package_version": __version__,
        "seed": cfg.seed,
        "units": "rad/s, s",
        "params": _params_dict(cfg.params),
        "results": results,
        "checks": checks.items,
        "artifacts": sorted(artifacts + ["summary.json"]),
    })
    jsonschema.validate(summary, _schema())
    _write_json(cfg.out_dir / "summary.json", summary)
    for c in checks.items:
        if not c["passed"]:
            log.warning("check %s failed: %r %s %r", c["name"], c["value"], c["comparison"], c["threshold"])
    return EXIT_OK if status == "ok" else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cavity-ququart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="JSON scenario configuration")
        sp.add_argument("--out", help="output directory (default: io.out or ./out)")
        sp.add_argument("--seed", type=int, help="RNG seed for random inputs and measurement sampling")
        sp.add_argument("--angular", action="store_true", help="config frequencies are in rad/s, not Hz")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        raw = {}
        if args.config is not None:
            raw = json.loads(args.config.read_text(encoding="utf-8"))
        cfg = parse_config(raw, args.scenario, args.out, args.seed, args.angular)
        return run(cfg)
    except (ConfigurationError, OSError, json.JSONDecodeError) as err:
        log.error("config error: %s", err)
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
