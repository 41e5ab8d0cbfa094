"""Command-line front end.

Five subcommands map one-to-one onto library operations: `simulate` writes
interferogram samples for a chosen beam and delay schedule, `recover` runs
harmonic inversion or Basis Pursuit on an interferogram file, `diagnose`
checks sensing-ensemble properties (eta statistic, incoherence, isotropy),
`sweep` traces reconstruction error versus measurement count, and `scenario`
reconstructs builtin beams with both methods side by side.

Configuration comes from defaults, then an optional JSON config file, then
command-line flags, in increasing priority.  All randomness is keyed by the
single `seed` value; outputs are byte-stable for fixed inputs and written
atomically.

Exit codes: 0 success, 2 configuration error, 3 ingestion error, 4 output
I/O error, 5 non-converged solve under --strict.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._rng import derive_seed
from .diagnostics import eta_ensemble, incoherence, isotropy_estimate
from .experiments import (builtin_scenarios, error_vs_m_sweep, run_scenario,
                          scenario_by_name)
from .recovery import BPOptions, basis_pursuit, ft_recover
from .sensing import (DelaySchedule, MeasurementVector, ModalSpectrum,
                      ScheduleKind, nyquist_schedule, random_schedule,
                      sample_interferogram, sensing_matrix)

_TWO_PI = 2.0 * math.pi

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_IO = 4
EXIT_NOT_CONVERGED = 5


class ConfigError(Exception):
    """Bad configuration: unknown key, type mismatch, constraint violation."""


class IngestError(Exception):
    """Malformed interferogram file; message carries the line number."""


class EmitError(Exception):
    """Output file could not be written."""


# ---------------------------------------------------------------------------
# parameter schemas

@dataclass(frozen=True)
class _Param:
    default: object
    convert: object  # callable(key, raw) -> validated value


def _reject(key, constraint, raw):
    raise ConfigError(f"key '{key}': expected {constraint}, got {raw!r}")


def _int_min(minimum):
    def convert(key, raw):
        if isinstance(raw, bool) or not isinstance(raw, int):
            _reject(key, f"an integer >= {minimum}", raw)
        if raw < minimum:
            _reject(key, f"an integer >= {minimum}", raw)
        return raw
    return convert


def _float_min(minimum):
    def convert(key, raw):
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            _reject(key, f"a number >= {minimum}", raw)
        value = float(raw)
        if not math.isfinite(value) or value < minimum:
            _reject(key, f"a number >= {minimum}", raw)
        return value
    return convert


def _float_positive(key, raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        _reject(key, "a number > 0", raw)
    value = float(raw)
    if not math.isfinite(value) or value <= 0:
        _reject(key, "a number > 0", raw)
    return value


def _float_any(key, raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        _reject(key, "a finite number", raw)
    value = float(raw)
    if not math.isfinite(value):
        _reject(key, "a finite number", raw)
    return value


def _bool(key, raw):
    if not isinstance(raw, bool):
        _reject(key, "a boolean", raw)
    return raw


def _string(key, raw):
    if not isinstance(raw, str):
        _reject(key, "a string", raw)
    return raw


def _choice(*options):
    def convert(key, raw):
        if raw not in options:
            _reject(key, "one of " + "/".join(options), raw)
        return raw
    return convert


def _weight_list(key, raw):
    """Nonnegative weights, as a JSON list or a comma-separated string."""
    if isinstance(raw, str):
        raw = [part.strip() for part in raw.split(",")]
    if not isinstance(raw, list) or len(raw) == 0:
        _reject(key, "a non-empty list of numbers", raw)
    out = []
    for item in raw:
        try:
            value = float(item)
        except (TypeError, ValueError):
            _reject(key, "a non-empty list of numbers", raw)
        if isinstance(item, bool) or not math.isfinite(value) or value < 0:
            _reject(key, "nonnegative finite weights", raw)
        out.append(value)
    return out


def _mode_map(key, raw):
    """{harmonic index: weight}, as a JSON object or 'n=w,n=w' string."""
    if isinstance(raw, str):
        pairs = {}
        for part in raw.split(","):
            if "=" not in part:
                _reject(key, "entries of the form n=weight", raw)
            left, right = part.split("=", 1)
            pairs[left.strip()] = right.strip()
        raw = pairs
    if not isinstance(raw, dict) or len(raw) == 0:
        _reject(key, "a non-empty map of mode index to weight", raw)
    out = {}
    for index_raw, weight_raw in raw.items():
        try:
            index = int(index_raw)
        except (TypeError, ValueError):
            _reject(key, "integer mode indices >= 1", raw)
        if index < 1 or index in out:
            _reject(key, "distinct integer mode indices >= 1", raw)
        try:
            weight = float(weight_raw)
        except (TypeError, ValueError):
            _reject(key, "numeric weights", raw)
        if isinstance(weight_raw, bool) or not math.isfinite(weight) or weight < 0:
            _reject(key, "nonnegative finite weights", raw)
        out[index] = weight
    return out


def _int_list(key, raw):
    if isinstance(raw, str):
        raw = [part.strip() for part in raw.split(",")]
    if not isinstance(raw, list) or len(raw) == 0:
        _reject(key, "a non-empty list of integers >= 1", raw)
    out = []
    for item in raw:
        if isinstance(item, bool):
            _reject(key, "integers >= 1", raw)
        try:
            value = int(item)
        except (TypeError, ValueError):
            _reject(key, "integers >= 1", raw)
        if isinstance(item, float) and item != value:
            _reject(key, "integers >= 1", raw)
        if value < 1:
            _reject(key, "integers >= 1", raw)
        out.append(value)
    return out


def _optional(convert):
    def wrapped(key, raw):
        if raw is None:
            return None
        return convert(key, raw)
    return wrapped


_SCHEMAS = {
    "simulate": {
        "n": _Param(64, _int_min(1)),
        "schedule": _Param("even", _choice("even", "random")),
        "m": _Param(None, _optional(_int_min(1))),
        "noise_sigma": _Param(0.0, _float_min(0.0)),
        "scenario": _Param(None, _optional(_string)),
        "weights": _Param(None, _optional(_weight_list)),
        "modes": _Param(None, _optional(_mode_map)),
    },
    "recover": {
        "input": _Param(None, _optional(_string)),
        "method": _Param("bp", _choice("ft", "bp")),
        "baseline": _Param(1.0, _float_any),
        "wrap": _Param(False, _bool),
        "n": _Param(64, _int_min(1)),
        "epsilon": _Param(1e-9, _float_min(0.0)),
        "rho": _Param(1.0, _float_positive),
        "max_iters": _Param(50000, _int_min(1)),
        "nonnegative": _Param(False, _bool),
        "zero_threshold": _Param(1e-6, _float_min(0.0)),
    },
    "diagnose": {
        "check": _Param("eta", _choice("eta", "incoherence", "isotropy")),
        "m": _Param(30, _int_min(1)),
        "n": _Param(64, _int_min(1)),
        "s": _Param(4, _int_min(1)),
        "samples": _Param(100000, _int_min(1)),
        "schedules": _Param(1000, _int_min(1)),
        "rows": _Param(100000, _int_min(1)),
        "redraw_phi": _Param(False, _bool),
    },
    "sweep": {
        "n": _Param(64, _int_min(1)),
        "s_max": _Param(4, _int_min(1)),
        "m_values": _Param(None, _optional(_int_list)),
        "m_min": _Param(5, _int_min(1)),
        "m_max": _Param(50, _int_min(1)),
        "m_step": _Param(5, _int_min(1)),
        "runs": _Param(100, _int_min(1)),
        "vectors": _Param(None, _optional(_int_min(1))),
        "threshold": _Param(0.01, _float_positive),
        "max_iters": _Param(5000, _int_min(1)),
    },
    "scenario": {
        "name": _Param("hg0", _string),
        "all": _Param(False, _bool),
        "nyquist_m": _Param(128, _int_min(1)),
        "cs_m": _Param(30, _int_min(1)),
        "noise_sigma": _Param(0.0, _float_min(0.0)),
    },
}

_GLOBAL_DEFAULTS = {"seed": 0, "out": None, "format": "json", "strict": False}


def _validate_global(key, raw):
    if key == "seed":
        if isinstance(raw, bool) or not isinstance(raw, int) or not 0 <= raw < 2 ** 64:
            _reject(key, "an unsigned 64-bit integer", raw)
        return raw
    if key == "out":
        return None if raw is None else _string(key, raw)
    if key == "format":
        return _choice("json", "csv")(key, raw)
    if key == "strict":
        return _bool(key, raw)
    raise AssertionError(key)


def _check_simulate(params, explicit):
    sources = [k for k in ("scenario", "weights", "modes") if params[k] is not None]
    if len(sources) > 1:
        raise ConfigError(
            "keys 'scenario', 'weights', 'modes' are mutually exclusive; "
            f"got {', '.join(sources)}")
    if params["weights"] is not None:
        if "n" in explicit and len(params["weights"]) != params["n"]:
            raise ConfigError(
                f"key 'weights': length {len(params['weights'])} conflicts "
                f"with n={params['n']}")
        params["n"] = len(params["weights"])
    if params["scenario"] is not None:
        try:
            preset = scenario_by_name(params["scenario"])
        except KeyError as exc:
            raise ConfigError(f"key 'scenario': {exc.args[0]}") from None
        if "n" in explicit and params["n"] != preset.n_modes:
            raise ConfigError(
                f"key 'n': {params['n']} conflicts with scenario "
                f"'{preset.name}' (N={preset.n_modes})")
        params["n"] = preset.n_modes
    if params["modes"] is not None:
        top = max(params["modes"])
        if top > params["n"]:
            raise ConfigError(
                f"key 'modes': index {top} exceeds n={params['n']}")
    if params["m"] is None:
        params["m"] = 128 if params["schedule"] == "even" else 30


def _check_recover(params, explicit):
    if params["input"] is None:
        raise ConfigError("key 'input': an interferogram file path is required")


def _check_diagnose(params, explicit):
    if params["s"] > params["n"]:
        raise ConfigError(
            f"key 's': sparsity {params['s']} exceeds n={params['n']}")


def _check_sweep(params, explicit):
    if params["s_max"] > params["n"]:
        raise ConfigError(
            f"key 's_max': {params['s_max']} exceeds n={params['n']}")
    range_keys = {"m_min", "m_max", "m_step"} & explicit
    if params["m_values"] is not None and range_keys:
        raise ConfigError(
            "key 'm_values': mutually exclusive with "
            + ", ".join(sorted(range_keys)))
    if params["m_values"] is None:
        if params["m_min"] > params["m_max"]:
            raise ConfigError(
                f"key 'm_min': {params['m_min']} exceeds m_max={params['m_max']}")
        params["m_values"] = list(
            range(params["m_min"], params["m_max"] + 1, params["m_step"]))


def _check_scenario(params, explicit):
    names = [s.name for s in builtin_scenarios()]
    if params["name"] not in names:
        raise ConfigError(
            f"key 'name': unknown scenario '{params['name']}'; "
            "available: " + ", ".join(names))
    if params["cs_m"] > params["nyquist_m"]:
        raise ConfigError(
            f"key 'cs_m': {params['cs_m']} exceeds nyquist_m="
            f"{params['nyquist_m']}")


_CROSS_CHECKS = {
    "simulate": _check_simulate,
    "recover": _check_recover,
    "diagnose": _check_diagnose,
    "sweep": _check_sweep,
    "scenario": _check_scenario,
}


@dataclass(frozen=True)
class RunConfig:
    """A fully validated, fully defaulted invocation."""

    command: str
    params: dict
    seed: int
    output_path: str | None
    output_format: str
    strict: bool


def _load_config_file(path: str) -> dict:
    def no_duplicates(pairs):
        seen = {}
        for key, value in pairs:
            if key in seen:
                raise ConfigError(f"duplicate key '{key}' in config file")
            seen[key] = value
        return seen

    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}")
    try:
        loaded = json.loads(text, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(loaded, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return loaded


def parse_config(command: str, config_path: str | None = None,
                 overrides: dict | None = None) -> RunConfig:
    """Merge defaults, config file, and flag overrides into a RunConfig.

    Raises ConfigError on unknown keys, type mismatches, or constraint
    violations; messages name the offending key.
    """
    if command not in _SCHEMAS:
        raise ConfigError(f"unknown command '{command}'")
    schema = _SCHEMAS[command]

    params = {key: spec.default for key, spec in schema.items()}
    globals_map = dict(_GLOBAL_DEFAULTS)
    explicit = set()

    sources = []
    if config_path is not None:
        sources.append(_load_config_file(config_path))
    if overrides:
        sources.append(overrides)
    for source in sources:
        for key, raw in source.items():
            if key in _GLOBAL_DEFAULTS:
                globals_map[key] = _validate_global(key, raw)
            elif key in schema:
                params[key] = schema[key].convert(key, raw)
                explicit.add(key)
            else:
                raise ConfigError(f"unknown key '{key}' for command '{command}'")

    _CROSS_CHECKS[command](params, explicit)
    return RunConfig(
        command=command,
        params=params,
        seed=globals_map["seed"],
        output_path=globals_map["out"],
        output_format=globals_map["format"],
        strict=globals_map["strict"],
    )


# ---------------------------------------------------------------------------
# interferogram file ingestion

def ingest_interferogram(path: str, baseline: float = 1.0,
                         wrap: bool = False) -> tuple[DelaySchedule, MeasurementVector]:
    """Read a delay schedule and measurements from an `alpha,power` CSV.

    Lines starting with '#' and blank lines are ignored.  The first content
    line must be the header.  Delays outside [0, 2*pi] are an error unless
    wrap is set, in which case they are reduced mod 2*pi.  Measurement values
    are power minus baseline.  Errors carry 1-based physical line numbers.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}")

    alphas = []
    powers = []
    saw_header = False
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not saw_header:
            if [p.strip() for p in stripped.split(",")] != ["alpha", "power"]:
                raise IngestError(
                    f"{path}:{lineno}: expected header 'alpha,power', "
                    f"got {stripped!r}")
            saw_header = True
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise IngestError(
                f"{path}:{lineno}: expected 2 comma-separated fields, "
                f"got {len(parts)}")
        try:
            alpha = float(parts[0])
            power = float(parts[1])
        except ValueError:
            raise IngestError(f"{path}:{lineno}: non-numeric field in {stripped!r}")
        if not (math.isfinite(alpha) and math.isfinite(power)):
            raise IngestError(f"{path}:{lineno}: non-finite value in {stripped!r}")
        if wrap:
            alpha = alpha % _TWO_PI
        elif not 0.0 <= alpha <= _TWO_PI:
            raise IngestError(
                f"{path}:{lineno}: alpha {alpha!r} outside [0, 2*pi] "
                "(pass wrap to reduce mod 2*pi)")
        alphas.append(alpha)
        powers.append(power)

    if not saw_header:
        raise IngestError(f"{path}: empty file, expected header 'alpha,power'")
    if not alphas:
        raise IngestError(f"{path}: no data rows after the header")

    schedule = DelaySchedule(np.array(alphas), ScheduleKind.EXTERNAL)
    values = np.array(powers) - baseline
    return schedule, MeasurementVector(values)


# ---------------------------------------------------------------------------
# result emission

@dataclass
class CommandOutput:
    """One command's payload in both serializable shapes."""

    data: dict
    csv_header: str
    csv_rows: list
    csv_comments: list
    strict_violation: bool = False


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def render_text(meta: dict, output: CommandOutput, fmt: str) -> str:
    if fmt == "json":
        body = {"meta": _jsonable(meta), "data": _jsonable(output.data)}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    lines = [f"# {comment}" for comment in output.csv_comments]
    lines.append(output.csv_header)
    for row in output.csv_rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_result(meta: dict, output: CommandOutput, fmt: str,
                path: str | None) -> str:
    """Render and write a result; returns the rendered text.

    path None writes to stdout.  File writes are atomic (temp file plus
    rename) and byte-stable for identical inputs.
    """
    text = render_text(meta, output, fmt)
    if path is None:
        sys.stdout.write(text)
        return text
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".partial-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(temp_path, path)
        except BaseException:
            os.unlink(temp_path)
            raise
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror}")
    return text


# ---------------------------------------------------------------------------
# command handlers

def _simulate_spectrum(params) -> ModalSpectrum:
    if params["scenario"] is not None:
        return scenario_by_name(params["scenario"]).spectrum
    if params["weights"] is not None:
        return ModalSpectrum(np.array(params["weights"]))
    modes = params["modes"] if params["modes"] is not None else {1: 1.0}
    return ModalSpectrum.from_entries(params["n"], modes)


def _run_simulate(cfg: RunConfig) -> CommandOutput:
    p = cfg.params
    spectrum = _simulate_spectrum(p)
    if p["schedule"] == "even":
        schedule = nyquist_schedule(p["m"])
    else:
        schedule = random_schedule(p["m"], derive_seed(cfg.seed, "cli-schedule"))
    y = sample_interferogram(spectrum, schedule, p["noise_sigma"],
                             derive_seed(cfg.seed, "cli-measure"))
    powers = 1.0 + y.values
    data = {
        "alphas": schedule.alphas,
        "powers": powers,
        "schedule": p["schedule"],
        "m": p["m"],
        "n": p["n"],
        "noise_sigma": p["noise_sigma"],
        "true_weights": spectrum.weights,
    }
    rows = list(zip(schedule.alphas.tolist(), powers.tolist()))
    return CommandOutput(data, "alpha,power", rows, [])


def _run_recover(cfg: RunConfig) -> CommandOutput:
    p = cfg.params
    schedule, y = ingest_interferogram(p["input"], p["baseline"], p["wrap"])
    if p["method"] == "ft":
        result = ft_recover(y, schedule, p["n"])
    else:
        opts = BPOptions(
            residual_epsilon=p["epsilon"],
            penalty_rho=p["rho"],
            max_iters=p["max_iters"],
            nonnegative=p["nonnegative"],
            zero_threshold=p["zero_threshold"],
        )
        result = basis_pursuit(sensing_matrix(schedule, p["n"]), y, opts)
    data = {
        "method": p["method"],
        "weights": result.spectrum.weights,
        "raw": result.raw,
        "iterations": result.iterations,
        "converged": result.converged,
        "final_residual": result.final_residual,
        "m": schedule.m,
        "n": p["n"],
    }
    rows = [(i + 1, w) for i, w in enumerate(result.spectrum.weights.tolist())]
    comments = [
        f"method = {p['method']}",
        f"converged = {str(result.converged).lower()}",
        f"final_residual = {_csv_cell(result.final_residual)}",
    ]
    return CommandOutput(data, "n,weight", rows, comments,
                         strict_violation=not result.converged)


def _run_diagnose(cfg: RunConfig) -> CommandOutput:
    p = cfg.params
    if p["check"] == "eta":
        report = eta_ensemble(p["m"], p["n"], p["s"], p["samples"], cfg.seed,
                              redraw_phi=p["redraw_phi"])
        data = {
            "check": "eta",
            "bin_edges": report.bin_edges,
            "counts": report.counts,
            "mean_eta": report.mean_eta,
            "max_abs_eta": report.max_abs_eta,
            "sample_count": report.sample_count,
            "clamped_low": report.clamped_low,
            "clamped_high": report.clamped_high,
            "s": report.s,
            "m": report.m,
            "n": report.n_modes,
        }
        edges = report.bin_edges.tolist()
        rows = [(edges[i], edges[i + 1], int(c))
                for i, c in enumerate(report.counts.tolist())]
        comments = [
            f"mean_eta = {_csv_cell(report.mean_eta)}",
            f"max_abs_eta = {_csv_cell(report.max_abs_eta)}",
            f"samples = {report.sample_count}",
        ]
        return CommandOutput(data, "bin_left,bin_right,count", rows, comments)
    if p["check"] == "incoherence":
        values = np.empty(p["schedules"])
        for i in range(p["schedules"]):
            schedule = random_schedule(
                p["m"], derive_seed(cfg.seed, "cli-incoherence", i))
            values[i] = incoherence(sensing_matrix(schedule, p["n"]))
        data = {
            "check": "incoherence",
            "values": values,
            "max_incoherence": float(values.max()),
            "schedules": p["schedules"],
            "m": p["m"],
            "n": p["n"],
        }
        rows = [(i, v) for i, v in enumerate(values.tolist())]
        comments = [f"max_incoherence = {_csv_cell(values.max())}"]
        return CommandOutput(data, "schedule_index,incoherence", rows, comments)
    report = isotropy_estimate(p["n"], p["rows"], cfg.seed)
    data = {
        "check": "isotropy",
        "estimate": report.estimate,
        "max_offdiag_abs": report.max_offdiag_abs,
        "max_diag_dev": report.max_diag_dev,
        "rows": report.rows_sampled,
        "n": p["n"],
    }
    rows = [
        ("max_offdiag_abs", report.max_offdiag_abs),
        ("max_diag_dev", report.max_diag_dev),
        ("rows_sampled", report.rows_sampled),
    ]
    return CommandOutput(data, "quantity,value", rows, [])


def _run_sweep(cfg: RunConfig) -> CommandOutput:
    p = cfg.params
    result = error_vs_m_sweep(
        p["n"], p["s_max"], p["m_values"], p["runs"],
        vectors=p["vectors"], seed=cfg.seed, threshold=p["threshold"],
        opts=BPOptions(max_iters=p["max_iters"]),
    )
    data = {
        "m_values": result.m_values,
        "mean_error": result.mean_error,
        "std_error": result.std_error,
        "m_star": result.m_star,
        "runs": result.runs_per_point,
        "threshold": result.threshold,
        "n": p["n"],
        "s_max": p["s_max"],
    }
    rows = list(zip(result.m_values.tolist(), result.mean_error.tolist(),
                    result.std_error.tolist()))
    star = "none" if result.m_star is None else str(result.m_star)
    comments = [f"m_star = {star}", f"runs = {result.runs_per_point}"]
    return CommandOutput(data, "M,mean_error,std_error", rows, comments)


def _scenario_payload(result) -> dict:
    return {
        "name": result.spec.name,
        "n": result.spec.n_modes,
        "nyquist_m": result.spec.nyquist_m,
        "cs_m": result.spec.cs_m,
        "truth": result.spec.spectrum.weights,
        "ft_spectrum": result.ft.spectrum.weights,
        "bp_spectrum": result.bp.spectrum.weights,
        "bp_vs_ft_error": result.bp_vs_ft_error,
        "ft_truth_error": result.ft_truth_error,
        "bp_truth_error": result.bp_truth_error,
        "bp_converged": result.bp.converged,
        "bp_iterations": result.bp.iterations,
    }


def _run_scenario_cmd(cfg: RunConfig) -> CommandOutput:
    p = cfg.params
    if p["all"]:
        names = [s.name for s in builtin_scenarios()]
    else:
        names = [p["name"]]
    results = []
    for name in names:
        spec = dataclasses.replace(
            scenario_by_name(name),
            nyquist_m=p["nyquist_m"],
            cs_m=p["cs_m"],
            noise_sigma=p["noise_sigma"],
            seed=cfg.seed,
        )
        results.append(run_scenario(spec))

    payloads = [_scenario_payload(r) for r in results]
    data = payloads[0] if len(payloads) == 1 else {"scenarios": payloads}
    rows = []
    for result in results:
        truth = result.spec.spectrum.weights.tolist()
        ft_w = result.ft.spectrum.weights.tolist()
        bp_w = result.bp.spectrum.weights.tolist()
        for i in range(result.spec.n_modes):
            rows.append((result.spec.name, i + 1, truth[i], ft_w[i], bp_w[i]))
    comments = [
        f"{r.spec.name}: bp_vs_ft_error = {_csv_cell(r.bp_vs_ft_error)}, "
        f"bp_converged = {str(r.bp.converged).lower()}"
        for r in results
    ]
    return CommandOutput(data, "scenario,n,truth,ft_weight,bp_weight", rows,
                         comments,
                         strict_violation=any(not r.bp.converged for r in results))


_HANDLERS = {
    "simulate": _run_simulate,
    "recover": _run_recover,
    "diagnose": _run_diagnose,
    "sweep": _run_sweep,
    "scenario": _run_scenario_cmd,
}


# ---------------------------------------------------------------------------
# argument parsing and entry point

def _add_common_flags(sub):
    sub.add_argument("--config", metavar="PATH",
                     help="JSON config file; flags override its keys")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for all randomness (default 0)")
    sub.add_argument("--out", metavar="PATH", default=None,
                     help="output file (default: stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default=None,
                     help="output format (default: json)")
    sub.add_argument("--strict", action="store_true", default=None,
                     help="exit 5 if a reported solve did not converge")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compint",
        description="Simulate, sample, and recover sparse modal spectra "
                    "from optical interferograms.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser(
        "simulate", help="write interferogram samples for a chosen beam")
    sim.add_argument("--n", type=int, default=None,
                     help="number of potential modes (default 64)")
    sim.add_argument("--schedule", choices=("even", "random"), default=None,
                     help="delay schedule kind (default even)")
    sim.add_argument("--m", type=int, default=None,
                     help="number of samples (default 128 even, 30 random)")
    sim.add_argument("--noise-sigma", type=float, default=None,
                     help="additive Gaussian noise level (default 0)")
    sim.add_argument("--scenario", default=None,
                     help="builtin beam name to simulate")
    sim.add_argument("--weights", default=None,
                     help="comma-separated weight vector (sets n)")
    sim.add_argument("--modes", default=None,
                     help="sparse weights as n=w,n=w pairs")

    rec = subs.add_parser(
        "recover", help="recover modal weights from an interferogram file")
    rec.add_argument("input", nargs="?", default=None,
                     help="interferogram CSV with header alpha,power")
    rec.add_argument("--method", choices=("ft", "bp"), default=None,
                     help="harmonic inversion (ft) or Basis Pursuit (bp); "
                          "default bp")
    rec.add_argument("--baseline", type=float, default=None,
                     help="baseline subtracted from power (default 1.0)")
    rec.add_argument("--wrap", action="store_true", default=None,
                     help="reduce out-of-range delays mod 2*pi")
    rec.add_argument("--n", type=int, default=None,
                     help="number of potential modes (default 64)")
    rec.add_argument("--epsilon", type=float, default=None,
                     help="BP residual radius (default 1e-9)")
    rec.add_argument("--rho", type=float, default=None,
                     help="BP penalty parameter (default 1.0)")
    rec.add_argument("--max-iters", type=int, default=None,
                     help="BP iteration cap (default 50000)")
    rec.add_argument("--nonnegative", action="store_true", default=None,
                     help="restrict BP to nonnegative weights")
    rec.add_argument("--zero-threshold", type=float, default=None,
                     help="snap smaller weights to zero (default 1e-6)")

    diag = subs.add_parser(
        "diagnose", help="check sensing-ensemble properties")
    diag.add_argument("--check", choices=("eta", "incoherence", "isotropy"),
                      default=None, help="which property (default eta)")
    diag.add_argument("--m", type=int, default=None,
                      help="measurements per schedule (default 30)")
    diag.add_argument("--n", type=int, default=None,
                      help="number of potential modes (default 64)")
    diag.add_argument("--s", type=int, default=None,
                      help="sparsity of test vectors (default 4)")
    diag.add_argument("--samples", type=int, default=None,
                      help="eta sample count (default 100000)")
    diag.add_argument("--schedules", type=int, default=None,
                      help="schedules for incoherence (default 1000)")
    diag.add_argument("--rows", type=int, default=None,
                      help="rows for isotropy (default 100000)")
    diag.add_argument("--redraw-phi", action="store_true", default=None,
                      help="fresh sensing matrix per eta sample")

    sweep = subs.add_parser(
        "sweep", help="trace reconstruction error versus measurement count")
    sweep.add_argument("--n", type=int, default=None,
                       help="number of potential modes (default 64)")
    sweep.add_argument("--s-max", type=int, default=None,
                       help="largest support size drawn (default 4)")
    sweep.add_argument("--m-values", default=None,
                       help="comma-separated M values (overrides the range)")
    sweep.add_argument("--m-min", type=int, default=None,
                       help="range start (default 5)")
    sweep.add_argument("--m-max", type=int, default=None,
                       help="range stop, inclusive (default 50)")
    sweep.add_argument("--m-step", type=int, default=None,
                       help="range step (default 5)")
    sweep.add_argument("--runs", type=int, default=None,
                       help="draws per M (default 100)")
    sweep.add_argument("--vectors", type=int, default=None,
                       help="ground-truth pool size (default: runs)")
    sweep.add_argument("--threshold", type=float, default=None,
                       help="mean-error threshold for m_star (default 0.01)")
    sweep.add_argument("--max-iters", type=int, default=None,
                       help="BP iteration cap per solve (default 5000)")

    scen = subs.add_parser(
        "scenario", help="reconstruct builtin beams with both methods")
    scen.add_argument("--name", default=None,
                      help="builtin beam name (default hg0)")
    scen.add_argument("--all", action="store_true", default=None,
                      help="run every builtin beam")
    scen.add_argument("--nyquist-m", type=int, default=None,
                      help="even-grid sample count (default 128)")
    scen.add_argument("--cs-m", type=int, default=None,
                      help="random sample count (default 30)")
    scen.add_argument("--noise-sigma", type=float, default=None,
                      help="additive Gaussian noise level (default 0)")

    for sub in (sim, rec, diag, sweep, scen):
        _add_common_flags(sub)
    return parser


def _overrides_from(args: argparse.Namespace) -> dict:
    skip = {"command", "config"}
    overrides = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        overrides[key] = value
    return overrides


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.command, config_path=args.config,
                           overrides=_overrides_from(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        output = _HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except ValueError as exc:
        # Domain-layer precondition failures (for example requesting ft on an
        # uneven schedule) are configuration problems from the CLI's view.
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    meta = {
        "command": cfg.command,
        "parameters": cfg.params,
        "seed": cfg.seed,
        "version": __version__,
    }
    try:
        emit_result(meta, output, cfg.output_format, cfg.output_path)
    except EmitError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_IO

    if cfg.strict and output.strict_violation:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
