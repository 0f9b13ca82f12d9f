"""Declarative Monte Carlo experiments over SNR, CSIT quality and schemes.

A YAML config describes one experiment; ``run`` executes it into a
``ResultTable`` and ``write_csv`` serializes the table with its metadata.
Per (SNR point, trial) cell, one channel is drawn from a seed derived with
splitmix64 from the master seed and the cell indices; every scheme in the
cell consumes the identical channel and, when CSIT is imperfect, the
identical estimate. Results are therefore byte-identical across runs and
worker counts.

Config layout (unknown keys are rejected)::

    scenario: downlink            # downlink | uplink | region
    fixture: rayleigh             # rayleigh | unit | orthogonal
    dims:      {n_tx: 2, n_users: 2}
    sweep:     {snr_db: [0, 10, 20], alpha: 0.5, trials: 100}
    run:       {master_seed: 1234, schemes: [rsma, sdma], output: results.csv}
    optimizer: {grid_size: 33, max_iters: 500, tol: 1.0e-5, method: split-search,
                objective: sum-rate, split_grid: 101, share_grid: 1,
                uplink_filter: mmse}

``sweep.alpha`` is the CSIT quality exponent (error variance P**-alpha);
omit it or set it to null for perfect CSIT. SNR is 10*log10(P) with unit
noise variance, so the power budget is the only knob.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ._version import __version__
from .baselines import (
    PentagonRegion,
    mac_pentagon,
    oma_tdma_rates,
    uplink_mmse_rates,
    uplink_sic_rates,
)
from .channel import ChannelMatrix, CsitModel, apply_csit_error, sample_rayleigh
from .downlink import evaluate, refit_shares, total_power
from .errors import ConfigError, FeasibilityError, RsmaError, ZfInfeasibleError
from .precoder import (
    default_warm_starts,
    noma_corner_2user,
    optimize_wsr,
    sdma_corner,
    split_search,
)
from .rng import RNG_ID, SEED_MIX_ID, derive_seed
from .uplink import enumerate_orders, evaluate_uplink, optimize_uplink_sumrate, trace_region_2user

SCENARIOS = ("downlink", "uplink", "region")
FIXTURES = ("rayleigh", "unit", "orthogonal")
SCHEMES = ("rsma", "sdma", "noma", "oma")


@dataclass(frozen=True)
class OptimizerSettings:
    """Tunables consumed by the per-scheme design builders."""

    grid_size: int = 33
    max_iters: int = 500
    tol: float = 1e-5
    method: str = "split-search"
    objective: str = "sum-rate"
    split_grid: int = 101
    share_grid: int = 1
    uplink_filter: str = "mmse"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment."""

    scenario: str
    n_tx: int
    n_users: int
    snr_grid_db: tuple[float, ...]
    alpha: float | None
    trials: int
    master_seed: int
    schemes: tuple[str, ...]
    output: str
    fixture: str = "rayleigh"
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)


@dataclass(frozen=True)
class ResultRow:
    """One (scheme, SNR, trial) outcome."""

    scenario: str
    scheme: str
    snr_db: float
    alpha: float
    trial: int
    seed: int
    rates: tuple[float, ...]
    sum_rate: float
    min_rate: float
    power_used: float
    iterations: int
    status: str


@dataclass(frozen=True)
class ResultTable:
    """All rows of one experiment plus reproducibility metadata."""

    rows: tuple[ResultRow, ...]
    n_users: int
    metadata: tuple[tuple[str, str], ...]


_SECTION_KEYS = {
    "dims": ("n_tx", "n_users"),
    "sweep": ("snr_db", "alpha", "trials"),
    "run": ("master_seed", "schemes", "output"),
    "optimizer": (
        "grid_size", "max_iters", "tol", "method", "objective",
        "split_grid", "share_grid", "uplink_filter",
    ),
}
_TOP_SCALARS = ("scenario", "fixture")


def _require(data: dict, section: str, key: str, kind, optional: bool = False):
    if key not in data:
        if optional:
            return None
        raise ConfigError(f"{section}.{key}" if section else key, "missing required field")
    value = data[key]
    name = f"{section}.{key}" if section else key
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(name, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build and validate an ExperimentConfig; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    for key in data:
        if key not in _TOP_SCALARS and key not in _SECTION_KEYS:
            raise ConfigError(str(key), "unknown configuration key")
    for section, keys in _SECTION_KEYS.items():
        block = data.get(section, {})
        if block is None:
            block = {}
        if not isinstance(block, dict):
            raise ConfigError(section, "must be a mapping")
        for key in block:
            if key not in keys:
                raise ConfigError(f"{section}.{key}", "unknown configuration key")

    scenario = _require(data, "", "scenario", str)
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"must be one of {SCENARIOS}, got {scenario!r}")
    fixture = data.get("fixture", "rayleigh")
    if fixture not in FIXTURES:
        raise ConfigError("fixture", f"must be one of {FIXTURES}, got {fixture!r}")

    dims = data.get("dims", {}) or {}
    n_tx = _require(dims, "dims", "n_tx", int)
    n_users = _require(dims, "dims", "n_users", int)
    if n_tx < 1:
        raise ConfigError("dims.n_tx", f"must be a positive integer, got {n_tx}")
    if n_users < 1:
        raise ConfigError("dims.n_users", f"must be a positive integer, got {n_users}")

    sweep = data.get("sweep", {}) or {}
    snr = _require(sweep, "sweep", "snr_db", list)
    if not snr:
        raise ConfigError("sweep.snr_db", "SNR grid must be nonempty")
    try:
        snr_grid = tuple(float(s) for s in snr)
    except (TypeError, ValueError):
        raise ConfigError("sweep.snr_db", "entries must be numbers") from None
    if not all(math.isfinite(s) for s in snr_grid):
        raise ConfigError("sweep.snr_db", "entries must be finite")
    alpha = sweep.get("alpha")
    if alpha is not None:
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
            raise ConfigError("sweep.alpha", "must be a number or null")
        alpha = float(alpha)
        if not (math.isfinite(alpha) and alpha >= 0):
            raise ConfigError("sweep.alpha", f"must be nonnegative, got {alpha}")
    trials = _require(sweep, "sweep", "trials", int)
    if trials < 1:
        raise ConfigError("sweep.trials", f"must be at least 1, got {trials}")

    run_block = data.get("run", {}) or {}
    master_seed = _require(run_block, "run", "master_seed", int)
    if not 0 <= master_seed < 2**64:
        raise ConfigError("run.master_seed", "must fit in 64 unsigned bits")
    schemes = _require(run_block, "run", "schemes", list)
    if not schemes:
        raise ConfigError("run.schemes", "at least one scheme is required")
    for s in schemes:
        if s not in SCHEMES:
            raise ConfigError("run.schemes", f"unknown scheme {s!r}, valid: {SCHEMES}")
    if len(set(schemes)) != len(schemes):
        raise ConfigError("run.schemes", "schemes must be distinct")
    output = _require(run_block, "run", "output", str)
    out_path = Path(output)
    if out_path.is_absolute() or ".." in out_path.parts:
        raise ConfigError("run.output", "must be a relative path inside the output directory")

    opt_block = data.get("optimizer", {}) or {}
    defaults = OptimizerSettings()
    opt = OptimizerSettings(
        grid_size=opt_block.get("grid_size", defaults.grid_size),
        max_iters=opt_block.get("max_iters", defaults.max_iters),
        tol=opt_block.get("tol", defaults.tol),
        method=opt_block.get("method", defaults.method),
        objective=opt_block.get("objective", defaults.objective),
        split_grid=opt_block.get("split_grid", defaults.split_grid),
        share_grid=opt_block.get("share_grid", defaults.share_grid),
        uplink_filter=opt_block.get("uplink_filter", defaults.uplink_filter),
    )
    if not isinstance(opt.grid_size, int) or opt.grid_size < 2:
        raise ConfigError("optimizer.grid_size", f"must be an integer >= 2, got {opt.grid_size}")
    if not isinstance(opt.max_iters, int) or opt.max_iters < 1:
        raise ConfigError("optimizer.max_iters", f"must be a positive integer, got {opt.max_iters}")
    if not isinstance(opt.tol, (int, float)) or isinstance(opt.tol, bool) or opt.tol <= 0:
        raise ConfigError("optimizer.tol", f"must be positive, got {opt.tol}")
    if opt.method not in ("split-search", "wsr"):
        raise ConfigError("optimizer.method", f"must be 'split-search' or 'wsr', got {opt.method!r}")
    if opt.objective not in ("sum-rate", "max-min"):
        raise ConfigError("optimizer.objective", f"must be 'sum-rate' or 'max-min', got {opt.objective!r}")
    if opt.method == "wsr" and opt.objective != "sum-rate":
        raise ConfigError("optimizer.objective", "the wsr method maximizes the (weighted) sum rate only")
    if not isinstance(opt.split_grid, int) or opt.split_grid < 2:
        raise ConfigError("optimizer.split_grid", f"must be an integer >= 2, got {opt.split_grid}")
    if not isinstance(opt.share_grid, int) or opt.share_grid < 1:
        raise ConfigError("optimizer.share_grid", f"must be a positive integer, got {opt.share_grid}")
    if opt.uplink_filter not in ("mmse", "matched"):
        raise ConfigError("optimizer.uplink_filter", f"must be 'mmse' or 'matched', got {opt.uplink_filter!r}")

    cfg = ExperimentConfig(
        scenario=scenario,
        n_tx=n_tx,
        n_users=n_users,
        snr_grid_db=snr_grid,
        alpha=alpha,
        trials=trials,
        master_seed=master_seed,
        schemes=tuple(schemes),
        output=output,
        fixture=fixture,
        optimizer=opt,
    )
    _check_hard_dimensions(cfg)
    return cfg


def _check_hard_dimensions(cfg: ExperimentConfig) -> None:
    if cfg.fixture == "orthogonal" and cfg.n_users > cfg.n_tx:
        raise ConfigError("fixture", "orthogonal fixture needs n_users <= n_tx")
    if cfg.scenario == "region" and cfg.n_users != 2:
        raise ConfigError("dims.n_users", "region tracing needs exactly 2 users")
    if cfg.scenario == "downlink" and "noma" in cfg.schemes and cfg.n_users != 2:
        raise ConfigError("run.schemes", "downlink noma supports exactly 2 users")
    if cfg.scenario == "uplink" and "rsma" in cfg.schemes and cfg.n_users > 4:
        raise ConfigError("run.schemes", "uplink rsma enumerates decoding orders only up to 4 users")


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Dry-run dimension checks; returns advisory notes (hard errors raise)."""
    notes = []
    if cfg.scenario == "downlink" and cfg.n_users > cfg.n_tx:
        if "rsma" in cfg.schemes:
            notes.append(
                "n_users > n_tx: zero-forcing is infeasible, rsma rows will carry "
                "status=zf-infeasible"
            )
        if "sdma" in cfg.schemes:
            notes.append("n_users > n_tx: sdma falls back to matched-filter beams")
    if cfg.scenario == "uplink" and "rsma" in cfg.schemes and cfg.n_users > 2:
        candidates = cfg.optimizer.split_grid ** (cfg.n_users - 1)
        candidates *= len(enumerate_orders(cfg.n_users))
        notes.append(
            f"uplink rsma search visits {candidates} candidates per trial; "
            "consider a smaller optimizer.split_grid"
        )
    if cfg.scenario == "region":
        notes.append("region configs ignore sweep.trials and run.schemes")
    return notes


def apply_overrides(data: dict, overrides: dict[str, object]) -> dict:
    """Set dotted-path keys in a raw config mapping; unknown paths are rejected."""
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        if len(parts) == 1 and parts[0] in _TOP_SCALARS:
            data[parts[0]] = value
        elif len(parts) == 2 and parts[0] in _SECTION_KEYS and parts[1] in _SECTION_KEYS[parts[0]]:
            data.setdefault(parts[0], {})
            if data[parts[0]] is None:
                data[parts[0]] = {}
            data[parts[0]][parts[1]] = value
        else:
            raise ConfigError(dotted, "unknown configuration key")
    return data


def load_config(path, overrides: dict[str, object] | None = None) -> ExperimentConfig:
    """Parse a YAML config file, apply overrides, validate."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(str(path), "config file not found") from None
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(str(path), "config must be a mapping")
    if overrides:
        data = apply_overrides(data, overrides)
    return config_from_dict(data)


def _fixture_channel(cfg: ExperimentConfig, seed: int) -> ChannelMatrix:
    if cfg.fixture == "rayleigh":
        return sample_rayleigh(cfg.n_tx, cfg.n_users, 1.0, seed)
    if cfg.fixture == "unit":
        vectors = np.ones((cfg.n_users, cfg.n_tx), dtype=complex)
    else:  # orthogonal
        vectors = np.eye(cfg.n_users, cfg.n_tx, dtype=complex)
    return ChannelMatrix(vectors, 1.0)


def _downlink_scheme(
    scheme: str,
    truth: ChannelMatrix,
    estimate: ChannelMatrix,
    csit: CsitModel | None,
    power: float,
    opt: OptimizerSettings,
) -> tuple[np.ndarray, float, int]:
    K = truth.n_users
    if scheme == "rsma":
        if opt.method == "wsr":
            starts = default_warm_starts(estimate, power, grid_size=opt.grid_size, csit=csit)
            report = optimize_wsr(
                estimate, np.ones(K), starts,
                max_iters=opt.max_iters, tol=opt.tol, csit=csit,
            )
            design, iterations = report.best_design, report.iterations
        else:
            design, _ = split_search(
                estimate, power, objective=opt.objective,
                grid_size=opt.grid_size, csit=csit,
            )
            iterations = opt.grid_size
        design = refit_shares(truth, design)
        rates = evaluate(truth, design)
        return rates.rate_total, total_power(design), iterations
    if scheme == "sdma":
        design = sdma_corner(estimate, power)
        rates = evaluate(truth, design)
        return rates.rate_total, total_power(design), 0
    if scheme == "noma":
        design = noma_corner_2user(estimate, power, grid_size=opt.grid_size, csit=csit)
        design = refit_shares(truth, design)
        rates = evaluate(truth, design)
        return rates.rate_total, total_power(design), opt.grid_size
    if scheme == "oma":
        rates = oma_tdma_rates(truth, power, design_channel=estimate)
        return rates, power, 0
    raise ConfigError("run.schemes", f"unknown scheme {scheme!r}")


def _uplink_scheme(
    scheme: str,
    truth: ChannelMatrix,
    estimate: ChannelMatrix,
    csit: CsitModel | None,
    power: float,
    opt: OptimizerSettings,
) -> tuple[np.ndarray, float, int]:
    K = truth.n_users
    budgets = np.full(K, power)
    filter_channel = estimate if csit is not None else None
    if scheme == "rsma":
        design, _ = optimize_uplink_sumrate(
            estimate, budgets, split_grid=opt.split_grid, filter_mode=opt.uplink_filter
        )
        rates = evaluate_uplink(
            truth, design, filter_channel=filter_channel, filter_mode=opt.uplink_filter
        )
        candidates = opt.split_grid ** (K - 1) * len(enumerate_orders(K))
        return rates.user_rates, float(design.user_powers().sum()), candidates
    if scheme == "sdma":
        rates = uplink_mmse_rates(truth, budgets, filter_channel=filter_channel)
        return rates, float(budgets.sum()), 0
    if scheme == "noma":
        norms = np.linalg.norm(estimate.vectors, axis=1)
        order = list(np.argsort(-norms, kind="stable"))  # strongest decoded first
        rates = uplink_sic_rates(truth, budgets, order, filter_channel=filter_channel)
        return rates, float(budgets.sum()), 0
    if scheme == "oma":
        rates = oma_tdma_rates(truth, power, design_channel=estimate)
        return rates, power, 0
    raise ConfigError("run.schemes", f"unknown scheme {scheme!r}")


def _cell_rows(cfg: ExperimentConfig, snr_index: int, trial: int) -> list[ResultRow]:
    snr_db = cfg.snr_grid_db[snr_index]
    power = 10.0 ** (snr_db / 10.0)
    cell_seed = derive_seed(cfg.master_seed, snr_index, trial)
    truth = _fixture_channel(cfg, derive_seed(cell_seed, 0))
    if cfg.alpha is None:
        estimate, csit = truth, None
    else:
        estimate, csit = apply_csit_error(truth, cfg.alpha, power, derive_seed(cell_seed, 1))
    alpha_col = float("nan") if cfg.alpha is None else float(cfg.alpha)
    runner = _downlink_scheme if cfg.scenario == "downlink" else _uplink_scheme

    rows = []
    for scheme in cfg.schemes:
        status = "ok"
        try:
            rates, power_used, iterations = runner(scheme, truth, estimate, csit, power, cfg.optimizer)
            rates = tuple(float(r) for r in rates)
        except (ZfInfeasibleError, FeasibilityError, ValueError) as exc:
            if isinstance(exc, ZfInfeasibleError):
                status = "zf-infeasible"
            elif isinstance(exc, FeasibilityError):
                status = "infeasible"
            else:
                status = "unsupported"
            rates = (float("nan"),) * cfg.n_users
            power_used, iterations = float("nan"), 0
        rows.append(
            ResultRow(
                scenario=cfg.scenario,
                scheme=scheme,
                snr_db=float(snr_db),
                alpha=alpha_col,
                trial=trial,
                seed=cell_seed,
                rates=rates,
                sum_rate=float(np.sum(rates)),
                min_rate=float(np.min(rates)),
                power_used=power_used,
                iterations=iterations,
                status=status,
            )
        )
    return rows


def _metadata(cfg: ExperimentConfig) -> tuple[tuple[str, str], ...]:
    return (
        ("toolkit", f"rsma {__version__}"),
        ("rng", RNG_ID),
        ("seed_mix", SEED_MIX_ID),
        ("scenario", cfg.scenario),
        ("fixture", cfg.fixture),
        ("n_tx", str(cfg.n_tx)),
        ("n_users", str(cfg.n_users)),
        ("snr_db", ",".join(_fmt(s) for s in cfg.snr_grid_db)),
        ("alpha", "none" if cfg.alpha is None else _fmt(cfg.alpha)),
        ("trials", str(cfg.trials)),
        ("master_seed", str(cfg.master_seed)),
        ("schemes", ",".join(cfg.schemes)),
    )


def run(cfg: ExperimentConfig, n_threads: int = 1) -> ResultTable:
    """Execute a downlink or uplink experiment into a ResultTable.

    Trials are independent work units; results are assembled in (SNR, trial,
    scheme) order regardless of scheduling, so any thread count produces the
    same table.
    """
    if cfg.scenario == "region":
        raise ConfigError("scenario", "region configs are traced by run_region")
    if n_threads < 1:
        raise ConfigError("threads", f"thread count must be positive, got {n_threads}")
    cells = [
        (si, ti) for si in range(len(cfg.snr_grid_db)) for ti in range(cfg.trials)
    ]
    if n_threads == 1:
        per_cell = [_cell_rows(cfg, si, ti) for si, ti in cells]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            per_cell = list(pool.map(lambda c: _cell_rows(cfg, *c), cells))
    rows = tuple(row for cell in per_cell for row in cell)
    return ResultTable(rows=rows, n_users=cfg.n_users, metadata=_metadata(cfg))


def run_region(cfg: ExperimentConfig) -> tuple[np.ndarray, PentagonRegion]:
    """Trace the two-user uplink rate region and its pentagon oracle.

    The channel comes from the configured fixture at the first SNR grid
    point; both users get the full power budget.
    """
    if cfg.scenario != "region":
        raise ConfigError("scenario", f"expected a region config, got {cfg.scenario!r}")
    power = 10.0 ** (cfg.snr_grid_db[0] / 10.0)
    channel = _fixture_channel(cfg, derive_seed(cfg.master_seed, 0, 0))
    budgets = np.array([power, power])
    points = trace_region_2user(
        channel,
        budgets,
        split_grid=cfg.optimizer.split_grid,
        share_grid=cfg.optimizer.share_grid,
        filter_mode=cfg.optimizer.uplink_filter,
    )
    return points, mac_pentagon(channel, budgets)


_GROUP_COLUMNS = ("scenario", "scheme", "snr_db", "alpha", "trial", "seed", "status")
_METRIC_COLUMNS = ("sum_rate", "min_rate", "power_used", "iterations")


def _sortable(value):
    if isinstance(value, float) and math.isnan(value):
        return (0, 0.0)
    if isinstance(value, str):
        return (2, value)
    return (1, value)


def summarize(table: ResultTable, group_by, metric: str = "sum_rate") -> list[dict]:
    """Group rows and aggregate one metric: count, mean, sample std, percentiles."""
    if not table.rows:
        raise ValueError("cannot summarize an empty table")
    group_by = list(group_by)
    for col in group_by:
        if col not in _GROUP_COLUMNS:
            raise ValueError(f"cannot group by {col!r}, valid: {_GROUP_COLUMNS}")
    if metric not in _METRIC_COLUMNS:
        raise ValueError(f"unknown metric {metric!r}, valid: {_METRIC_COLUMNS}")
    groups: dict[tuple, list[float]] = {}
    for row in table.rows:
        key = tuple(getattr(row, col) for col in group_by)
        groups.setdefault(key, []).append(float(getattr(row, metric)))
    out = []
    for key in sorted(groups, key=lambda k: tuple(_sortable(v) for v in k)):
        values = np.array(groups[key])
        summary = dict(zip(group_by, key))
        summary["n"] = values.size
        summary["mean"] = float(values.mean())
        summary["std"] = 0.0 if values.size == 1 else float(values.std(ddof=1))
        p05, p50, p95 = np.percentile(values, [5, 50, 95])
        summary.update(p05=float(p05), p50=float(p50), p95=float(p95))
        out.append(summary)
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(table: ResultTable, path) -> None:
    """Serialize a table: '#' metadata lines, exact header, 12 significant digits."""
    header = (
        "scenario,scheme,snr_db,alpha,trial,seed,sum_rate,min_rate,"
        + ",".join(f"rate_user_{i + 1}" for i in range(table.n_users))
        + ",power_used,iterations,status"
    )
    lines = [f"# {key}={value}" for key, value in table.metadata]
    lines.append(header)
    for row in table.rows:
        fields = [
            row.scenario,
            row.scheme,
            _fmt(row.snr_db),
            _fmt(row.alpha),
            str(row.trial),
            str(row.seed),
            _fmt(row.sum_rate),
            _fmt(row.min_rate),
            *(_fmt(r) for r in row.rates),
            _fmt(row.power_used),
            str(row.iterations),
            row.status,
        ]
        lines.append(",".join(fields))
    _write_lines(path, lines)


def write_points_csv(points: np.ndarray, path, metadata=()) -> None:
    """Serialize a rate-pair cloud as r1,r2 rows."""
    lines = [f"# {key}={value}" for key, value in metadata]
    lines.append("r1,r2")
    for r1, r2 in np.asarray(points, dtype=float):
        lines.append(f"{_fmt(r1)},{_fmt(r2)}")
    _write_lines(path, lines)


def write_pentagon_csv(region: PentagonRegion, path, metadata=()) -> None:
    """Serialize a pentagon oracle: bounds row plus its two corners."""
    lines = [f"# {key}={value}" for key, value in metadata]
    lines.append("r1_max,r2_max,sum_max")
    lines.append(f"{_fmt(region.r1_max)},{_fmt(region.r2_max)},{_fmt(region.sum_max)}")
    for i, (c1, c2) in enumerate(region.corners, start=1):
        lines.append(f"# corner_{i}={_fmt(c1)},{_fmt(c2)}")
    _write_lines(path, lines)


def _write_lines(path, lines: list[str]) -> None:
    try:
        with open(path, "w", newline="") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise RsmaError(f"cannot write {path}: {exc}") from exc
