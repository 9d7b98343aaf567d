"""Command-line frontend: ``edgecalc <command> [options]``.

Settings resolve as defaults < ``--config`` file (flat ``key = value``) < flags.
``EDGECALC_SEED`` supplies the seed only when neither the file nor a flag does.
The exit status is 0 iff no check record has status ``fail``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import os
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import suites
from .errors import ConfigError
from .report import Report
from .symbols import GridSpec

__all__ = ["COMMANDS", "RunConfig", "load_config_file", "run", "main"]

log = logging.getLogger("edgecalc")

COMMANDS = ("verify-coords", "verify-operator", "symbols", "ellipticity", "conormal",
            "kernel", "fredholm", "report-all")
GRIDS = {
    "default": GridSpec(),
    "coarse": GridSpec(n_per_axis=5),
    "zero": GridSpec(covectors="zero"),
}


@dataclass
class RunConfig:
    command: str = "report-all"
    chart: str = "all"
    samples: int = 100
    seed: int = 0
    tol: Optional[float] = None
    gamma_min: float = -3.0
    gamma_max: float = 4.0
    gamma_step: float = 0.05
    l_max: int = 10
    grid: str = "default"
    output_path: Optional[str] = None
    format: str = "json"
    table_path: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.chart not in ("all", "u1", "u2", "u3"):
            raise ConfigError(f"unknown chart {self.chart!r}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.gamma_step <= 0:
            raise ConfigError("gamma step must be positive")
        if self.gamma_min >= self.gamma_max:
            raise ConfigError("need gamma_min < gamma_max")
        if self.l_max < 0:
            raise ConfigError("l_max must be >= 0")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.grid not in GRIDS:
            raise ConfigError(f"unknown grid {self.grid!r}; choose from {sorted(GRIDS)}")

    def echo(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if "Optional" in str(kind) and raw.lower() in ("", "none"):
        return None
    try:
        if "int" in str(kind):
            return int(raw)
        if "float" in str(kind):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw


def load_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "output":
            key = "output_path"
        if key not in _FIELD_TYPES or key == "command":
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def run(config: RunConfig) -> Report:
    """Run one command and return its report; the report is not written here."""
    config.validate()
    start = time.perf_counter()
    report = Report(config.command, config.echo())
    cmd = config.command
    chart = None if config.chart == "all" else config.chart
    everything = cmd == "report-all"
    if cmd == "verify-coords" or everything:
        report.extend(suites.verify_coords(chart, config.samples, config.seed, config.tol))
    if cmd == "verify-operator" or everything:
        report.extend(suites.verify_operator(chart, config.samples, config.seed, config.tol))
    if cmd == "symbols" or everything:
        report.extend(suites.verify_symbols(config.samples, config.seed, config.tol))
    if cmd == "ellipticity" or everything:
        grid = dataclasses.replace(GRIDS[config.grid], seed=config.seed)
        report.extend(suites.verify_ellipticity(grid))
    if cmd == "conormal" or everything:
        report.extend(suites.verify_conormal(config.l_max, tol=config.tol))
    if cmd == "kernel" or everything:
        report.extend(suites.verify_kernel(config.l_max, config.seed))
        report.extend(suites.verify_exit(1000, config.seed))
    if cmd == "fredholm" or everything:
        records, table = suites.verify_fredholm(config.gamma_min, config.gamma_max,
                                                config.gamma_step, config.l_max)
        report.extend(records)
        if config.table_path:
            _write_table(config.table_path, table)
    report.wall_time = time.perf_counter() - start
    return report


def _write_table(path: str, table) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["gamma", "dim_ker", "dim_coker", "index", "kernel_l", "cokernel_l"])
            for row in table:
                w.writerow([repr(row.gamma), row.dim_ker, row.dim_coker, row.index,
                            " ".join(map(str, row.kernel_l)), " ".join(map(str, row.cokernel_l))])
    except OSError as exc:
        raise OSError(f"cannot write table {path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", default=S, help="flat key=value file overriding defaults")
    common.add_argument("--chart", choices=["all", "u1", "u2", "u3"], default=S)
    common.add_argument("--samples", type=int, default=S)
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--tol", type=float, default=S,
                        help="replaces the primary tolerance of the selected suite")
    common.add_argument("--gamma-min", dest="gamma_min", type=float, default=S)
    common.add_argument("--gamma-max", dest="gamma_max", type=float, default=S)
    common.add_argument("--gamma-step", dest="gamma_step", type=float, default=S)
    common.add_argument("--l-max", dest="l_max", type=int, default=S)
    common.add_argument("--grid", choices=sorted(GRIDS), default=S)
    common.add_argument("--output", "-o", dest="output_path", default=S,
                        help="report path (stdout if omitted)")
    common.add_argument("--format", choices=["json", "csv"], default=S)
    common.add_argument("--table", dest="table_path", default=S,
                        help="fredholm: also write a plot-ready gamma table (CSV)")
    common.add_argument("-v", "--verbose", action="store_true", default=S)

    parser = argparse.ArgumentParser(prog="edgecalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(argv=None, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    ns = vars(build_parser().parse_args(argv))
    ns.pop("verbose", None)
    values = {}
    if "config" in ns:
        values.update(load_config_file(ns.pop("config")))
    values.update(ns)
    if "seed" not in values and environ.get("EDGECALC_SEED"):
        try:
            values["seed"] = int(environ["EDGECALC_SEED"])
        except ValueError as exc:
            raise ConfigError("EDGECALC_SEED must be an integer") from exc
    return RunConfig(**values)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    logging.basicConfig(level=logging.INFO if ("-v" in argv or "--verbose" in argv) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(argv)
        report = run(config)
        body = report.render(config.format)
        if config.output_path:
            Path(config.output_path).write_text(body + ("" if body.endswith("\n") else "\n"))
            log.info("report written to %s", config.output_path)
        else:
            sys.stdout.write(body + ("" if body.endswith("\n") else "\n"))
    except ConfigError as exc:
        print(f"edgecalc: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"edgecalc: I/O error: {exc}", file=sys.stderr)
        return 3
    s = report.summary
    print(f"edgecalc {config.command}: {s['pass']} pass, {s['fail']} fail, "
          f"{s['warning']} warning, {s['degenerate']} degenerate", file=sys.stderr)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
