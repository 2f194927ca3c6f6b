"""Command-line front end.

Subcommands ``simulate``, ``spectral``, ``verify`` and ``families``.  Runs
are described by a JSON config (schema in README.md); command-line flags
override values from the file.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .analytic import analytic_trajectory
from .errors import DomainError, EvaluationError, OrthoLadderError, OutOfRangeError
from .oracle import IntegratorConfig, integrate_degenerate, integrate_ladder
from .spectral import check_common_polynomial_map, spectral_solve
from .systems import FAMILIES, DegenerateSystemSpec, SystemSpec, system_from_dict
from .trajectory import TimeGrid
from .verify import available_methods, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMMANDS = ("simulate", "spectral", "verify", "families")
METHODS = ("analytic", "spectral", "oracle")
FORMATS = ("csv", "structured")


class ConfigError(Exception):
    """Bad or inconsistent run configuration (exit status 2)."""


@dataclass
class RunConfig:
    command: str
    system: dict
    start: float = 0.0
    stop: float = 10.0
    num_points: int = 201
    method: str = "analytic"
    output: str | None = None
    format: str = "csv"
    companion: str | None = None
    decomposition: str | None = None
    oracle: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {', '.join(METHODS)}, got {self.method!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        if not (self.stop > self.start >= 0):
            raise ConfigError(f"need stop > start >= 0, got start={self.start}, stop={self.stop}")
        if int(self.num_points) < 2:
            raise ConfigError(f"num_points must be >= 2, got {self.num_points}")
        if self.command != "families" and "family" not in self.system:
            raise ConfigError("config needs system.family")

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.linspace(self.start, self.stop, int(self.num_points))

    def echo(self) -> dict:
        return {
            "command": self.command,
            "system": self.system,
            "time": {"start": self.start, "stop": self.stop, "num_points": int(self.num_points)},
            "method": self.method,
            "output": {"path": self.output, "format": self.format},
            "oracle": self.oracle,
            "thresholds": self.thresholds,
        }


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config(args: argparse.Namespace) -> RunConfig:
    doc: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")

    system = dict(doc.get("system", {}))
    system["params"] = dict(system.get("params", {}))
    if args.family:
        if args.family != system.get("family"):
            system["params"] = {}
        system["family"] = args.family
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        system["params"][key] = _parse_value(value)

    time_cfg = dict(doc.get("time", {}))
    output = dict(doc.get("output", {}))
    oracle = dict(doc.get("oracle", {}))
    for flag, key in (("oracle_step", "step"), ("oracle_tolerance", "tolerance")):
        if getattr(args, flag, None) is not None:
            oracle[key] = getattr(args, flag)

    def pick(flag, mapping, key, default):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return mapping.get(key, default)

    try:
        return RunConfig(
            command=args.command,
            system=system,
            start=float(pick("t_start", time_cfg, "start", 0.0)),
            stop=float(pick("t_stop", time_cfg, "stop", 10.0)),
            num_points=int(pick("num_points", time_cfg, "num_points", 201)),
            method=pick("method", doc, "method", "analytic"),
            output=pick("output", output, "path", None),
            format=pick("format", output, "format", "csv"),
            companion=pick("companion", output, "companion", None),
            decomposition=output.get("decomposition"),
            oracle=oracle,
            thresholds=dict(doc.get("thresholds", {})),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# Output


def _num(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_csv(traj) -> str:
    """``t,rho_0,...,rho_N,mean_n,norm`` with 17 significant digits."""
    pops = traj.level_populations if hasattr(traj, "level_populations") else traj.populations
    levels = pops.shape[1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"rho_{n}" for n in range(levels)] + ["mean_n", "norm"])
    weights = np.arange(levels)
    for t, row in zip(traj.times, pops):
        values = [float(v) for v in row]
        mean = sum(n * v for n, v in zip(weights, values))
        writer.writerow([_num(t)] + [_num(v) for v in values] + [_num(mean), _num(sum(values))])
    return buf.getvalue()


def read_trajectory_csv(text: str):
    """Parse a trajectory CSV back into ``(header, times, rho, mean_n, norm)``."""
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return header, data[:, 0], data[:, 1:-2], data[:, -2], data[:, -1]


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _complex_pairs(array):
    arr = np.asarray(array)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def trajectory_document(config: RunConfig, spec, traj, extra: dict | None = None) -> dict:
    doc = {
        "config": config.echo(),
        "system": spec.to_dict(),
        "method": traj.method,
        "trajectory": {
            "times": [float(t) for t in traj.times],
            "amplitudes": _complex_pairs(traj.amplitudes),
        },
        "metadata": _jsonable(traj.metadata),
    }
    if extra:
        doc.update(_jsonable(extra))
    return doc


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Commands


def _build(config: RunConfig):
    family = config.system["family"]
    if family not in FAMILIES:
        raise ConfigError(
            f"unknown family {family!r}; supported families: {', '.join(FAMILIES)}"
        )
    try:
        return system_from_dict(config.system)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _oracle_config(config: RunConfig) -> IntegratorConfig:
    try:
        return IntegratorConfig(**config.oracle)
    except (TypeError, DomainError) as exc:
        raise ConfigError(f"bad oracle settings: {exc}") from None


def _solve(config: RunConfig, spec, method: str):
    if method not in available_methods(spec):
        raise ConfigError(
            f"method {method!r} is not available for {spec.family}; "
            f"use one of {', '.join(available_methods(spec))}"
        )
    grid = config.grid
    if method == "analytic":
        return analytic_trajectory(spec, grid)
    if method == "spectral":
        return spectral_solve(spec, grid)[1]
    if isinstance(spec, DegenerateSystemSpec):
        return integrate_degenerate(spec, grid, _oracle_config(config))
    return integrate_ladder(spec, grid, _oracle_config(config))


def run_simulate(config: RunConfig) -> int:
    spec = _build(config)
    traj = _solve(config, spec, config.method)
    if config.format == "csv":
        _write(config.output, trajectory_csv(traj))
    else:
        _write(config.output, _dump(trajectory_document(config, spec, traj)))
    if config.companion:
        _write(config.companion, _dump(trajectory_document(config, spec, traj)))
    return EXIT_OK


def run_spectral(config: RunConfig) -> int:
    spec = _build(config)
    if not isinstance(spec, SystemSpec) or not spec.closed:
        raise ConfigError(
            f"spectral needs a closed ladder; {spec.family} with these parameters is open"
        )
    decomp, traj = spectral_solve(spec, config.grid)
    decomposition = {"system": spec.to_dict(), **decomp.to_dict()}
    if spec.scale is not None:
        decomposition["common_polynomial"] = check_common_polynomial_map(decomp, spec).to_dict()
        decomposition["v8_residual"] = decomposition["common_polynomial"]["max_residual"]
    else:
        decomposition["common_polynomial"] = None
        decomposition["v8_residual"] = None

    if config.format == "structured":
        _write(config.output, _dump(trajectory_document(config, spec, traj, {"decomposition": decomposition})))
        return EXIT_OK
    _write(config.output, trajectory_csv(traj))
    target = config.decomposition
    if target is None:
        target = "-" if config.output in (None, "-") else str(Path(config.output).with_suffix(".decomposition.json"))
    _write(target, _dump(_jsonable(decomposition)))
    return EXIT_OK


def run_verify(config: RunConfig) -> int:
    spec = _build(config)
    if len(available_methods(spec)) < 2:
        raise ConfigError(f"{spec.family} supports fewer than two methods; nothing to compare")
    report = run_verification(spec, config.grid, _oracle_config(config), config.thresholds)
    doc = {"config": config.echo(), **report.to_dict()}
    _write(config.output, _dump(_jsonable(doc)))
    if not report.passed:
        print(f"verification failed: {', '.join(report.failures)}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def run_families(out=None) -> int:
    out = out or sys.stdout
    for name, fam in FAMILIES.items():
        out.write(f"{name}\n")
        out.write(f"  realizes: {fam.realizes}\n")
        out.write(f"  methods:  {', '.join(fam.methods)}\n")
        for param, desc in fam.parameters.items():
            out.write(f"  {param}: {desc}\n")
        out.write(f"  example:  {json.dumps(dict(fam.example))}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ortholadder", description="Exact dynamics of laser-driven multilevel ladders."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("families", help="list system families")
    for name, help_text in (
        ("simulate", "compute a population trajectory"),
        ("spectral", "spectral decomposition of a closed ladder"),
        ("verify", "cross-check all available methods"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--family")
        p.add_argument("--param", action="append", metavar="KEY=VALUE", help="system parameter (JSON value)")
        p.add_argument("--method", choices=METHODS)
        p.add_argument("--t-start", type=float)
        p.add_argument("--t-stop", type=float)
        p.add_argument("--num-points", type=int)
        p.add_argument("--output", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--companion", help="extra structured file with complex amplitudes")
        p.add_argument("--oracle-step", type=float)
        p.add_argument("--oracle-tolerance", type=float)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "families":
        return run_families()
    try:
        config = load_config(args)
        runner = {"simulate": run_simulate, "spectral": run_spectral, "verify": run_verify}
        return runner[config.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, OutOfRangeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OrthoLadderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
