"""Command-line front end.

Subcommands::

    rsma run      --config cfg.yaml [--out DIR] [--seed U64] [--threads N]
                  [--set key=value ...]     execute one experiment to CSV
    rsma region   --config cfg.yaml ...     trace the 2-user region + pentagon
    rsma sweep    --config cfg.yaml --set key=v1,v2 ...
                                            grid-expand comma-separated
                                            overrides, one CSV per combination
    rsma validate --config cfg.yaml ...     parse and dry-run dimension checks

Exit codes: 0 success, 1 configuration error, 2 runtime error. Overrides use
dotted paths into the config (for example sweep.trials=500) and win over the
file. RSMA_THREADS provides the default for --threads. All outputs stay
inside the --out directory.
"""
from __future__ import annotations

import argparse
import itertools
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigError, RsmaError
from .experiments import (
    ExperimentConfig,
    load_config,
    run,
    run_region,
    validate_config,
    write_csv,
    write_pentagon_csv,
    write_points_csv,
    _metadata,
)


@dataclass(frozen=True)
class Invocation:
    """Parsed command line: one subcommand plus its options."""

    subcommand: str
    config: str
    overrides: tuple[str, ...]
    verbosity: int


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="experiment config file (YAML)")
    common.add_argument("--out", default=".", metavar="DIR",
                        help="output directory (default: current directory)")
    common.add_argument("--seed", type=int, default=None, metavar="U64",
                        help="override run.master_seed")
    common.add_argument("--threads", type=int, default=None, metavar="N",
                        help="worker threads (default: RSMA_THREADS or 1)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                        help="override a config key by dotted path (repeatable)")
    common.add_argument("--verbose", action="store_true",
                        help="print progress details")

    parser = argparse.ArgumentParser(prog="rsma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("run", parents=[common], help="execute an experiment to CSV")
    sub.add_parser("region", parents=[common],
                   help="trace the 2-user uplink region and its pentagon oracle")
    sub.add_parser("sweep", parents=[common],
                   help="expand comma-separated --set values into a run grid")
    sub.add_parser("validate", parents=[common],
                   help="parse the config and dry-run dimension checks")
    return parser


def _parse_value(key: str, raw: str):
    try:
        return yaml.safe_load(raw)
    except yaml.YAMLError:
        raise ConfigError(key, f"cannot parse override value {raw!r}") from None


def _split_assignment(item: str) -> tuple[str, str]:
    if "=" not in item:
        raise ConfigError(item, "override must have the form key=value")
    key, _, raw = item.partition("=")
    key = key.strip()
    if not key:
        raise ConfigError(item, "override key is empty")
    return key, raw


def _scalar_overrides(items, seed: int | None) -> dict[str, object]:
    overrides: dict[str, object] = {}
    for item in items:
        key, raw = _split_assignment(item)
        overrides[key] = _parse_value(key, raw)
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigError("--seed", "must fit in 64 unsigned bits")
        overrides["run.master_seed"] = seed
    return overrides


def _resolve_threads(ns) -> int:
    if ns.threads is not None:
        value = ns.threads
    else:
        env = os.environ.get("RSMA_THREADS", "")
        if not env:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise ConfigError("RSMA_THREADS", f"not an integer: {env!r}") from None
    if value < 1:
        raise ConfigError("--threads", f"thread count must be positive, got {value}")
    return value


def _resolve_output(out_dir: str, name: str) -> Path:
    base = Path(out_dir).resolve()
    target = (base / name).resolve()
    if not target.is_relative_to(base):
        raise ConfigError("run.output", f"{name!r} escapes the output directory {base}")
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def _do_region(cfg: ExperimentConfig, ns) -> None:
    points, pentagon = run_region(cfg)
    stem = Path(cfg.output).name
    if stem.endswith(".csv"):
        stem = stem[: -len(".csv")]
    points_path = _resolve_output(ns.out, f"{stem}_points.csv")
    pentagon_path = _resolve_output(ns.out, f"{stem}_pentagon.csv")
    meta = _metadata(cfg)
    write_points_csv(points, points_path, meta)
    write_pentagon_csv(pentagon, pentagon_path, meta)
    print(f"wrote {len(points)} region points to {points_path}")
    print(f"wrote pentagon oracle to {pentagon_path}")


def _do_table(cfg: ExperimentConfig, ns) -> None:
    table = run(cfg, n_threads=_resolve_threads(ns))
    path = _resolve_output(ns.out, cfg.output)
    write_csv(table, path)
    print(f"wrote {len(table.rows)} rows to {path}")


def _cmd_run(ns) -> int:
    cfg = load_config(ns.config, _scalar_overrides(ns.set, ns.seed))
    if ns.verbose:
        print(f"running scenario={cfg.scenario} n_tx={cfg.n_tx} n_users={cfg.n_users} "
              f"snr_points={len(cfg.snr_grid_db)} trials={cfg.trials}")
    if cfg.scenario == "region":
        _do_region(cfg, ns)
    else:
        _do_table(cfg, ns)
    return 0


def _cmd_region(ns) -> int:
    cfg = load_config(ns.config, _scalar_overrides(ns.set, ns.seed))
    if cfg.scenario != "region":
        raise ConfigError("scenario", f"the region command needs a region config, got {cfg.scenario!r}")
    _do_region(cfg, ns)
    return 0


def _sweep_axes(items) -> tuple[dict[str, object], list[tuple[str, list[object]]]]:
    fixed: dict[str, object] = {}
    axes: list[tuple[str, list[object]]] = []
    for item in items:
        key, raw = _split_assignment(item)
        raw = raw.strip()
        if "," in raw and not raw.startswith("["):
            values = [_parse_value(key, part) for part in raw.split(",")]
            axes.append((key, values))
        else:
            fixed[key] = _parse_value(key, raw)
    return fixed, axes


def _cmd_sweep(ns) -> int:
    fixed, axes = _sweep_axes(ns.set)
    if not axes:
        raise ConfigError("--set", "sweep needs at least one comma-separated --set value")
    keys = [key for key, _ in axes]
    total = 0
    for combo in itertools.product(*(values for _, values in axes)):
        overrides = dict(fixed)
        overrides.update(zip(keys, combo))
        if ns.seed is not None:
            overrides["run.master_seed"] = ns.seed
        cfg = load_config(ns.config, overrides)
        tag = "__".join(f"{k.replace('.', '-')}={v}" for k, v in zip(keys, combo))
        stem = Path(cfg.output).name
        if stem.endswith(".csv"):
            stem = stem[: -len(".csv")]
        named = ExperimentConfig(**{**cfg.__dict__, "output": f"{stem}__{tag}.csv"})
        if ns.verbose:
            print(f"sweep point {tag}")
        if named.scenario == "region":
            _do_region(named, ns)
        else:
            _do_table(named, ns)
        total += 1
    print(f"completed {total} sweep points")
    return 0


def _cmd_validate(ns) -> int:
    cfg = load_config(ns.config, _scalar_overrides(ns.set, ns.seed))
    print(
        f"config ok: scenario={cfg.scenario} fixture={cfg.fixture} "
        f"n_tx={cfg.n_tx} n_users={cfg.n_users} snr_points={len(cfg.snr_grid_db)} "
        f"trials={cfg.trials} schemes={','.join(cfg.schemes)}"
    )
    for note in validate_config(cfg):
        print(f"note: {note}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "region": _cmd_region,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def parse_invocation(ns) -> Invocation:
    return Invocation(
        subcommand=ns.subcommand,
        config=ns.config,
        overrides=tuple(ns.set),
        verbosity=1 if ns.verbose else 0,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    parse_invocation(ns)  # normalizes and documents the call shape
    try:
        return _COMMANDS[ns.subcommand](ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except RsmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # unexpected failure still maps to a runtime exit
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
