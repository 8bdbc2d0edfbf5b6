"""Command line front end emitting flat CSV run records.

Six subcommands (gap, orbits, cycles, weight-dist, bounds, haar-stats) share
one record schema; columns that do not apply to a command are left empty.
Output is comma separated with a header row, UTF-8 encoded, LF line endings.
With --out the rows append to the named file (the header is written only when
the file is new or empty); without it they go to stdout.

Configuration comes from flags, optionally backed by a key=value config file
named with --config.  Flags win over file entries, file entries win over
built-in defaults.  Every record embeds a short hash of the fully resolved
configuration together with the master seed, so any row can be regenerated
bit for bit by rerunning the command that produced it.

Seed derivation is a splittable counter scheme: the sweep point for ring size
n runs with haar_seed (master_seed, n), and ensemble realization r of that
point runs with (master_seed, n, r).  The damping strength never enters the
seed, so a gamma grid reuses the same circuit realizations, while different
ring sizes and realization indices never share a stream.  Sweep points run
sequentially in submission order and append through a single writer, hence
identical invocations produce identical files.

Exit status: 0 when every sweep point succeeded, 2 for configuration errors,
3 when at least one point failed numerically.  Failed points still produce a
record (flagged converged=false) and a line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import os
import sys

import numpy as np

from .channel import (
    MAX_DENSE_DIMENSION,
    MAX_POWER_QUBITS,
    FloquetSpec,
    annealed_gap,
    dense_gap,
    ensemble_gap,
    gap_eigenmode_weights,
    power_gap,
)
from .cliffords import (
    CliffordCircuit,
    fixed_brickwork,
    named_tableau,
    sampled_brickwork,
)
from .cycles import cycle_search
from .patterns import (
    DopingPattern,
    format_pattern,
    gap_lower_bound_general,
    is_dense,
    is_staggered_like,
    make_pattern,
    parse_pattern,
)
from .paulis import ORBIT_SPECTRUM_MAX_QUBITS, orbit_weight_spectrum
from .rotations import mc_log_bilinear_average, mc_log_entry_average
from .truncation import (
    dense_upper_bound,
    fully_doped_thermodynamic_gap,
    gap_lower_bound_from_truncation,
    largest_eigenmode_free_cutoff,
    staggered_like_upper_bound,
    staggered_thermodynamic_gap,
)

COLUMNS = (
    "command",
    "config_hash",
    "master_seed",
    "n",
    "gamma",
    "pattern",
    "gate_set",
    "statistic",
    "k",
    "method",
    "realizations",
    "orbit_index",
    "weight",
    "value",
    "stderr",
    "analytic",
    "delta",
    "bound_lower",
    "bound_truncation",
    "truncation_cutoff",
    "bound_upper",
    "w_star",
    "found",
    "cycle_period",
    "cycle_translation",
    "cycle_strings",
    "converged",
)

# Ordered so that the sampling stream index of a gate set is stable no
# matter which subset of sets a run asks for.  "identity" and "fixed" are
# deterministic circuits; the others sample gates, optionally restricted to
# one local-Clifford class.
GATE_SETS = (
    ("generic-clifford", None),
    ("identity", "identity"),
    ("identity-class", "identity"),
    ("swap-class", "swap"),
    ("cz-class", "cz"),
    ("iswap-class", "iswap"),
    ("fixed", "fixed"),
)
DEFAULT_GATE_SETS = ("generic-clifford", "cz-class", "iswap-class", "fixed")

DEFAULT_CYCLE_CUTOFF = 8
DEFAULT_HAAR_SAMPLES = 1_000_000

_CONFIG_KEYS = (
    "n",
    "gamma",
    "pattern",
    "k",
    "realizations",
    "seed",
    "method",
    "tol",
    "out",
    "resample-each-period",
    "gate-set",
    "w",
)


class ConfigError(Exception):
    """Invalid flag, config file entry, or flag combination."""


# ---------------------------------------------------------------------------
# configuration parsing


def _parse_int_list(text: str, name: str) -> tuple[int, ...]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(int(part))
        except ValueError:
            raise ConfigError(f"{name} expects integers, got {part!r}") from None
    if not values:
        raise ConfigError(f"{name} list is empty")
    return tuple(values)


def _parse_gamma_grid(text: str) -> tuple[float, ...]:
    """Parse a comma grid ``a,b,c`` or an inclusive range ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("gamma range expects start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"gamma range has a non-numeric part in {text!r}") from None
        if step <= 0:
            raise ConfigError("gamma range step must be positive")
        if stop < start:
            raise ConfigError("gamma range stop must not be below start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        values = tuple(start + i * step for i in range(count))
    else:
        values = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                values.append(float(part))
            except ValueError:
                raise ConfigError(f"gamma expects numbers, got {part!r}") from None
        values = tuple(values)
    if not values:
        raise ConfigError("gamma grid is empty")
    for g in values:
        if not np.isfinite(g) or g < 0:
            raise ConfigError(f"gamma must be finite and nonnegative, got {g}")
    return values


def _parse_bool(text: str, name: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{name} expects a boolean, got {text!r}")


def _load_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    entries: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        entries[key] = value.strip()
    return entries


def _resolve_pattern(text: str, n: int) -> DopingPattern:
    """Resolve a pattern literal or a named generator for ring size n."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    try:
        if kind in ("undoped", "full", "staggered") and not arg:
            return make_pattern(kind, n)
        if kind == "block_staggered":
            return make_pattern(kind, n, k=int(arg))
        if kind == "contiguous":
            return make_pattern(kind, n, n_h=int(arg))
        pattern = parse_pattern(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if pattern.n != n:
        raise ConfigError(
            f"pattern literal {text!r} has {pattern.n} sites but n={n}"
        )
    return pattern


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge flags over config file entries over defaults, then parse."""
    file_cfg = _load_config_file(args.config) if args.config else {}

    def pick(key: str, flag_value):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key)

    raw = {
        "n": pick("n", args.n),
        "gamma": pick("gamma", args.gamma),
        "pattern": pick("pattern", args.pattern),
        "k": pick("k", args.k),
        "realizations": pick("realizations", args.realizations),
        "seed": pick("seed", args.seed),
        "method": pick("method", args.method),
        "tol": pick("tol", args.tol),
        "out": pick("out", args.out),
        "resample-each-period": pick(
            "resample-each-period", args.resample_each_period
        ),
        "gate-set": pick("gate-set", args.gate_set),
        "w": pick("w", args.w),
    }

    cfg: dict = {"command": args.command}
    cfg["n"] = _parse_int_list(raw["n"], "n") if raw["n"] else None
    cfg["gamma"] = _parse_gamma_grid(raw["gamma"]) if raw["gamma"] else None
    if raw["pattern"]:
        cfg["pattern"] = tuple(
            part.strip() for part in raw["pattern"].split(",") if part.strip()
        )
        if not cfg["pattern"]:
            raise ConfigError("pattern list is empty")
    else:
        cfg["pattern"] = ("undoped",)
    cfg["k"] = _parse_int_list(raw["k"], "k") if raw["k"] else None
    if raw["realizations"] is None:
        cfg["realizations"] = None
    else:
        try:
            cfg["realizations"] = int(raw["realizations"])
        except ValueError:
            raise ConfigError(
                f"realizations expects an integer, got {raw['realizations']!r}"
            ) from None
        if cfg["realizations"] < 1:
            raise ConfigError("realizations must be at least 1")
    try:
        cfg["seed"] = int(raw["seed"]) if raw["seed"] is not None else 0
    except ValueError:
        raise ConfigError(f"seed expects an integer, got {raw['seed']!r}") from None
    if cfg["seed"] < 0:
        raise ConfigError("seed must be nonnegative")
    cfg["method"] = raw["method"] or "auto"
    if cfg["method"] not in ("auto", "dense", "power"):
        raise ConfigError(f"method must be auto, dense, or power, got {cfg['method']!r}")
    try:
        cfg["tol"] = float(raw["tol"]) if raw["tol"] is not None else 1e-8
    except ValueError:
        raise ConfigError(f"tol expects a number, got {raw['tol']!r}") from None
    if not 0 < cfg["tol"] < 1:
        raise ConfigError("tol must lie in (0, 1)")
    cfg["out"] = raw["out"]
    resample = raw["resample-each-period"]
    if isinstance(resample, bool) or resample is None:
        cfg["resample"] = bool(resample)
    else:
        cfg["resample"] = _parse_bool(resample, "resample-each-period")
    if raw["gate-set"]:
        names = tuple(
            part.strip() for part in raw["gate-set"].split(",") if part.strip()
        )
        known = {name for name, _ in GATE_SETS}
        expanded: list[str] = []
        for name in names:
            if name == "all":
                expanded.extend(DEFAULT_GATE_SETS)
            elif name in known:
                expanded.append(name)
            else:
                raise ConfigError(f"unknown gate set {name!r}")
        cfg["gate_sets"] = tuple(dict.fromkeys(expanded))
    else:
        cfg["gate_sets"] = DEFAULT_GATE_SETS
    if raw["w"] is None:
        cfg["w"] = DEFAULT_CYCLE_CUTOFF
    else:
        try:
            cfg["w"] = int(raw["w"])
        except ValueError:
            raise ConfigError(f"w expects an integer, got {raw['w']!r}") from None

    cfg["config_hash"] = _config_hash(cfg)
    return cfg


def _config_hash(cfg: dict) -> str:
    """Short digest of the resolved configuration (output path excluded)."""

    def render(value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, tuple):
            return ",".join(render(v) for v in value)
        if isinstance(value, float):
            return repr(value)
        return str(value)

    keys = (
        "command",
        "n",
        "gamma",
        "pattern",
        "k",
        "realizations",
        "seed",
        "method",
        "tol",
        "resample",
        "gate_sets",
        "w",
    )
    text = ";".join(f"{key}={render(cfg[key])}" for key in keys)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


# ---------------------------------------------------------------------------
# record assembly and output


def _row(cfg: dict, **fields) -> dict:
    row = {column: None for column in COLUMNS}
    row["command"] = cfg["command"]
    row["config_hash"] = cfg["config_hash"]
    row["master_seed"] = cfg["seed"]
    row.update(fields)
    return row


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(rows: list[dict], out_path: str | None) -> None:
    rendered = [[_cell(row[column]) for column in COLUMNS] for row in rows]
    if out_path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(rendered)
        return
    fresh = not (os.path.exists(out_path) and os.path.getsize(out_path) > 0)
    with open(out_path, "a", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        if fresh:
            writer.writerow(COLUMNS)
        writer.writerows(rendered)


# ---------------------------------------------------------------------------
# shared sweep helpers


def _require(cfg: dict, key: str, flag: str) -> None:
    if cfg[key] is None:
        raise ConfigError(f"{cfg['command']} needs {flag}")


def _make_spec(cfg: dict, n: int, gamma: float, pattern: DopingPattern) -> FloquetSpec:
    if n > MAX_POWER_QUBITS:
        raise ConfigError(
            f"ring size n={n} exceeds the propagation limit of "
            f"{MAX_POWER_QUBITS} qubits"
        )
    try:
        return FloquetSpec(
            n=n,
            gamma=gamma,
            pattern=pattern,
            haar_seed=(cfg["seed"], n),
            resample_each_period=cfg["resample"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _resolve_method(cfg: dict, n: int, ensemble: bool) -> str:
    method = cfg["method"]
    if method == "dense":
        if 4**n > MAX_DENSE_DIMENSION:
            raise ConfigError(
                f"ring size n={n} exceeds the dense solver limit; "
                "use --method power or auto"
            )
        if cfg["resample"]:
            raise ConfigError(
                "--method dense cannot be combined with --resample-each-period"
            )
        return "dense"
    if cfg["resample"]:
        # A resampled channel has no fixed multiplier; its rate is a time
        # average, reported with a statistical error instead of a tolerance.
        if ensemble:
            raise ConfigError(
                "resampled runs self-average over periods; "
                "drop --realizations or --resample-each-period"
            )
        return "annealed"
    if method == "power":
        return "power"
    if ensemble or 4**n > MAX_DENSE_DIMENSION:
        return "power"
    return "dense"


def _measure_gap(cfg: dict, spec: FloquetSpec, method: str):
    """One gap estimate; returns (delta, stderr, converged)."""
    if method == "dense":
        est = dense_gap(spec)
        return est.delta, None, est.converged
    if method == "annealed":
        est = annealed_gap(spec)
        return est.delta, est.stderr, True
    est = power_gap(spec, tolerance=cfg["tol"])
    return est.delta, None, est.converged


# ---------------------------------------------------------------------------
# subcommands


def cmd_gap(cfg: dict) -> tuple[list[dict], list[str]]:
    _require(cfg, "n", "--n")
    _require(cfg, "gamma", "--gamma")
    realizations = cfg["realizations"] or 1
    rows, failures = [], []
    for n in cfg["n"]:
        for pattern_text in cfg["pattern"]:
            pattern = _resolve_pattern(pattern_text, n)
            method = _resolve_method(cfg, n, ensemble=realizations > 1)
            for gamma in cfg["gamma"]:
                spec = _make_spec(cfg, n, gamma, pattern)
                label = f"gap n={n} gamma={gamma} pattern={format_pattern(pattern)}"
                delta = stderr = None
                converged = False
                try:
                    if realizations == 1:
                        delta, stderr, converged = _measure_gap(cfg, spec, method)
                    else:
                        kwargs = {"tolerance": cfg["tol"]} if method == "power" else {}
                        result = ensemble_gap(spec, realizations, method, **kwargs)
                        delta = result.mean
                        stderr = result.stderr
                        converged = result.failed_count == 0
                        if result.failed_count:
                            failures.append(
                                f"{label}: {result.failed_count} of "
                                f"{realizations} realizations failed"
                            )
                except (RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
                    failures.append(f"{label}: {exc}")
                else:
                    if realizations == 1 and not converged:
                        failures.append(f"{label}: estimate did not converge")
                rows.append(
                    _row(
                        cfg,
                        n=n,
                        gamma=gamma,
                        pattern=format_pattern(pattern),
                        method=method,
                        realizations=realizations,
                        delta=delta,
                        stderr=stderr,
                        converged=converged,
                    )
                )
    return rows, failures


def cmd_orbits(cfg: dict) -> tuple[list[dict], list[str]]:
    _require(cfg, "n", "--n")
    for n in cfg["n"]:
        if n > ORBIT_SPECTRUM_MAX_QUBITS:
            raise ConfigError(
                f"ring size n={n} exceeds the orbit spectrum guard of "
                f"{ORBIT_SPECTRUM_MAX_QUBITS} qubits"
            )
    lc_by_name = dict(GATE_SETS)
    stream_index = {name: i for i, (name, _) in enumerate(GATE_SETS)}
    rows: list[dict] = []
    for n in cfg["n"]:
        for name in cfg["gate_sets"]:
            try:
                if name == "fixed":
                    circuit = fixed_brickwork(n)
                elif name == "identity":
                    gate = named_tableau("identity")
                    circuit = CliffordCircuit(
                        n, (gate,) * (n // 2), (gate,) * (n // 2)
                    )
                else:
                    rng = np.random.default_rng((cfg["seed"], stream_index[name], n))
                    circuit = sampled_brickwork(n, rng, lc_class=lc_by_name[name])
                spectrum = orbit_weight_spectrum(circuit)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            for rank, (_, mean_weight) in enumerate(spectrum):
                rows.append(
                    _row(
                        cfg,
                        n=n,
                        gate_set=name,
                        orbit_index=rank,
                        value=float(mean_weight),
                        converged=True,
                    )
                )
    return rows, []


def cmd_cycles(cfg: dict) -> tuple[list[dict], list[str]]:
    _require(cfg, "k", "--k")
    _require(cfg, "n", "--n")
    if len(cfg["n"]) != 1:
        raise ConfigError("cycles expects a single ring size")
    n = cfg["n"][0]
    rows: list[dict] = []
    for k in cfg["k"]:
        try:
            result = cycle_search(k, cfg["w"], n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        pattern = make_pattern("block_staggered", n, k=k)
        fields = dict(
            n=n,
            pattern=format_pattern(pattern),
            k=k,
            w_star=result.w_star,
            found=result.found,
            converged=True,
        )
        if result.found:
            cycle = result.cycle
            fields.update(
                cycle_period=cycle.period,
                cycle_translation=cycle.translation,
                cycle_strings=";".join(
                    f"{step.string}@{step.offset}:{step.drift:+d}"
                    for step in cycle.steps
                ),
            )
        rows.append(_row(cfg, **fields))
    return rows, []


def cmd_weight_dist(cfg: dict) -> tuple[list[dict], list[str]]:
    _require(cfg, "n", "--n")
    _require(cfg, "gamma", "--gamma")
    if cfg["resample"]:
        raise ConfigError(
            "weight-dist needs a quenched circuit; drop --resample-each-period"
        )
    rows, failures = [], []
    for n in cfg["n"]:
        for pattern_text in cfg["pattern"]:
            pattern = _resolve_pattern(pattern_text, n)
            for gamma in cfg["gamma"]:
                spec = _make_spec(cfg, n, gamma, pattern)
                label = (
                    f"weight-dist n={n} gamma={gamma} "
                    f"pattern={format_pattern(pattern)}"
                )
                try:
                    modes = gap_eigenmode_weights(spec)
                except (RuntimeError, ValueError, ArithmeticError) as exc:
                    failures.append(f"{label}: {exc}")
                    rows.append(
                        _row(
                            cfg,
                            n=n,
                            gamma=gamma,
                            pattern=format_pattern(pattern),
                            converged=False,
                        )
                    )
                    continue
                for weight in sorted(modes.histogram):
                    rows.append(
                        _row(
                            cfg,
                            n=n,
                            gamma=gamma,
                            pattern=format_pattern(pattern),
                            weight=weight,
                            value=modes.histogram[weight],
                            delta=modes.delta,
                            converged=True,
                        )
                    )
    return rows, failures


def cmd_bounds(cfg: dict) -> tuple[list[dict], list[str]]:
    _require(cfg, "n", "--n")
    _require(cfg, "gamma", "--gamma")
    if cfg["resample"]:
        raise ConfigError("bounds needs a quenched circuit; drop --resample-each-period")
    rows, failures = [], []
    for n in cfg["n"]:
        for pattern_text in cfg["pattern"]:
            pattern = _resolve_pattern(pattern_text, n)
            method = _resolve_method(cfg, n, ensemble=False)
            for gamma in cfg["gamma"]:
                spec = _make_spec(cfg, n, gamma, pattern)
                label = (
                    f"bounds n={n} gamma={gamma} pattern={format_pattern(pattern)}"
                )
                lower = (
                    gap_lower_bound_general(pattern, gamma)
                    if pattern.doped_count
                    else None
                )
                if pattern.doped_count == 0 or not is_dense(pattern):
                    upper = None
                elif is_staggered_like(pattern) and _alternates(pattern):
                    upper = staggered_thermodynamic_gap(gamma)
                elif is_staggered_like(pattern):
                    upper = staggered_like_upper_bound(gamma)
                else:
                    upper = dense_upper_bound(gamma)
                # thermodynamic limit value, when the pattern has one
                if pattern.doped_count == pattern.n:
                    analytic = fully_doped_thermodynamic_gap(gamma)
                elif _alternates(pattern):
                    analytic = staggered_thermodynamic_gap(gamma)
                else:
                    analytic = None
                trunc_value = trunc_cutoff = None
                try:
                    report = largest_eigenmode_free_cutoff(spec)
                    bound = gap_lower_bound_from_truncation(
                        spec, report.largest_certified, strong_dissipation=True
                    )
                    trunc_value = bound.value
                    trunc_cutoff = report.largest_certified
                except ValueError as exc:
                    failures.append(f"{label}: truncation bound: {exc}")
                delta = None
                converged = False
                try:
                    delta, _, converged = _measure_gap(cfg, spec, method)
                    if not converged:
                        failures.append(f"{label}: gap estimate did not converge")
                except (RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
                    failures.append(f"{label}: {exc}")
                rows.append(
                    _row(
                        cfg,
                        n=n,
                        gamma=gamma,
                        pattern=format_pattern(pattern),
                        method=method,
                        analytic=analytic,
                        bound_lower=lower,
                        bound_truncation=trunc_value,
                        truncation_cutoff=trunc_cutoff,
                        bound_upper=upper,
                        delta=delta,
                        converged=converged,
                    )
                )
    return rows, failures


def _alternates(pattern: DopingPattern) -> bool:
    return all(
        pattern.doped[j] != pattern.doped[(j + 1) % pattern.n]
        for j in range(pattern.n)
    )


def cmd_haar_stats(cfg: dict) -> tuple[list[dict], list[str]]:
    samples = cfg["realizations"] or DEFAULT_HAAR_SAMPLES
    entry = mc_log_entry_average(samples, seed=cfg["seed"])
    bilinear = mc_log_bilinear_average(samples, seed=cfg["seed"] + 1)
    rows = [
        _row(
            cfg,
            statistic="log-entry",
            realizations=entry.sample_count,
            value=entry.mean,
            stderr=entry.stderr,
            analytic=entry.analytic,
            converged=True,
        ),
        _row(
            cfg,
            statistic="log-bilinear",
            realizations=bilinear.sample_count,
            value=bilinear.mean,
            stderr=bilinear.stderr,
            analytic=bilinear.analytic,
            converged=True,
        ),
    ]
    return rows, []


COMMANDS = {
    "gap": cmd_gap,
    "orbits": cmd_orbits,
    "cycles": cmd_cycles,
    "weight-dist": cmd_weight_dist,
    "bounds": cmd_bounds,
    "haar-stats": cmd_haar_stats,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquetgap",
        description="Liouvillian gap records for doped Floquet Clifford rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "gap": "gap estimates over an (n, gamma, pattern) sweep",
        "orbits": "orbit mean weights of undoped brickwork circuits",
        "cycles": "minimal recurrent cycles of block-staggered rings",
        "weight-dist": "weight distribution of the slowest eigenmode",
        "bounds": "lower and upper gap bounds next to the measured gap",
        "haar-stats": "Monte Carlo averages of single-qubit log statistics",
    }
    for name, text in descriptions.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", help="key=value file merged under the flags")
        p.add_argument("--n", help="comma separated ring sizes")
        p.add_argument("--gamma", help="comma grid a,b,c or range start:stop:step")
        p.add_argument(
            "--pattern",
            help="comma separated pattern literals (x doped, o undoped) or "
            "names: undoped, full, staggered, block_staggered:K, contiguous:NH",
        )
        p.add_argument("--k", help="comma separated block lengths")
        p.add_argument("--realizations", help="ensemble size, or sample count")
        p.add_argument("--seed", help="master seed (default 0)")
        p.add_argument(
            "--method", choices=("auto", "dense", "power"), help="gap solver"
        )
        p.add_argument("--tol", help="power iteration tolerance (default 1e-8)")
        p.add_argument("--out", help="CSV file to append to (default stdout)")
        p.add_argument(
            "--resample-each-period",
            action="store_true",
            default=None,
            help="draw fresh rotations every period",
        )
        p.add_argument(
            "--gate-set",
            help="orbits only: comma separated gate sets or 'all'",
        )
        p.add_argument("--w", help="cycles only: weight scan ceiling (default 8)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        rows, failures = COMMANDS[args.command](cfg)
        write_records(rows, cfg["out"])
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for failure in failures:
        print(f"failed: {failure}", file=sys.stderr)
    return 3 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
