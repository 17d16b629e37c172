"""Command line front-end: `gmedyn scan ...`.

Exit codes: 0 success, 1 usage/configuration error, 2 solver failure.
Options may come from a flat key=value config file (--config); command
line flags win over file values.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .gme import SolverFailure
from .scan import ALL_TAGS, FORMATS, ScanConfig, emit_csv, emit_svg, run_scan

USAGE_ERROR = 1
SOLVER_ERROR = 2

CONFIG_KEYS = ("state", "n", "a", "tau", "nu_max", "steps", "ensemble",
               "seed", "out", "format", "with_f")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def read_config_file(path) -> dict[str, str]:
    """Parse a flat key=value file; blank lines and # comments ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmedyn",
                     description="Genuine multipartite entanglement under "
                                 "random-telegraph dephasing")
    sub = parser.add_subparsers(dest="command", required=True)
    scan = sub.add_parser("scan", help="sweep E(nu) for a state or ensemble")
    scan.add_argument("--config", help="key=value config file; flags override it")
    scan.add_argument("--state", choices=ALL_TAGS, help="initial state tag")
    scan.add_argument("--n", type=int, choices=(2, 3, 4),
                      help="qubit count for random tags (default 3)")
    scan.add_argument("--a", type=float, help="coupling amplitude (1/s), default 1")
    scan.add_argument("--tau", help="memory time(s) in s, comma separated, default 5")
    scan.add_argument("--nu-max", type=float, dest="nu_max",
                      help="end of the dimensionless time grid, default 1")
    scan.add_argument("--steps", type=int, help="grid points, default 101")
    scan.add_argument("--ensemble", type=int,
                      help="ensemble size for random tags, default 100")
    scan.add_argument("--seed", type=int, help="random seed, default 0")
    scan.add_argument("--out", help="output path base (required)")
    scan.add_argument("--format", choices=FORMATS, help="csv, svg or both (default csv)")
    scan.add_argument("--with-f", action="store_true", dest="with_f", default=None,
                      help="add the f(nu)/10 column")
    return parser


def config_from_args(args) -> tuple[ScanConfig, str]:
    file_values = read_config_file(args.config) if args.config else {}

    def pick(key, attr, cast):
        val = getattr(args, attr)
        if val is not None:
            return val
        if key in file_values:
            return cast(file_values[key])
        return None

    state = pick("state", "state", str)
    if state is None:
        raise ValueError("--state is required (flag or config file)")
    out = pick("out", "out", str)
    if out is None:
        raise ValueError("--out is required (flag or config file)")

    tau_raw = pick("tau", "tau", str)
    if tau_raw is None:
        tau = (5.0,)
    else:
        tau = tuple(float(t) for t in str(tau_raw).split(","))

    with_f = pick("with_f", "with_f", lambda s: s.lower() in ("1", "true", "yes"))

    def defaulted(value, fallback):
        return fallback if value is None else value

    cfg = ScanConfig(
        state=state,
        a=defaulted(pick("a", "a", float), 1.0),
        tau=tau,
        nu_max=defaulted(pick("nu_max", "nu_max", float), 1.0),
        steps=defaulted(pick("steps", "steps", int), 101),
        n_qubits=defaulted(pick("n", "n", int), 3),
        ensemble_size=defaulted(pick("ensemble", "ensemble", int), 100),
        seed=defaulted(pick("seed", "seed", int), 0),
        fmt=defaulted(pick("format", "format", str), "csv"),
        with_f=bool(with_f),
    )
    return cfg, out


def output_paths(out: str, fmt: str) -> dict[str, Path]:
    """Resolve the CSV/SVG file names from the --out base path."""
    base = Path(out)
    paths = {}
    for kind, ext in (("csv", ".csv"), ("svg", ".svg")):
        if fmt not in (kind, "both"):
            continue
        if base.suffix == ext:
            paths[kind] = base
        else:
            paths[kind] = base.with_name(base.name + ext)
    return paths


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return USAGE_ERROR
        return 0 if not exc.code else USAGE_ERROR

    try:
        cfg, out = config_from_args(args)
        paths = output_paths(out, cfg.fmt)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    try:
        result = run_scan(cfg)
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return SOLVER_ERROR

    if "csv" in paths:
        emit_csv(result, paths["csv"])
    if "svg" in paths:
        emit_svg(result, paths["svg"])
    for p in paths.values():
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
