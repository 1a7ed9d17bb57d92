"""Command line entry point: ``koppelman <scenario> [flags]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage and
configuration errors, 3 when a numerical family diverges or a quadrature
budget is exhausted.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError
from .scenarios import CONFIG_HELP, PRESETS, SCENARIOS, ScenarioConfig, emit_plotdata, run

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3
OUTPUT_ENV = "KOPPELMAN_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="koppelman",
        description="Run a named Koppelman-formula experiment and write a JSON report.",
        epilog=CONFIG_HELP + f"\noutput: without --output the report goes to ${OUTPUT_ENV}/<scenario>.json "
               "when that variable is set, otherwise to stdout.  Timings are written to a\n"
               "separate <report>.meta.json so that reports stay byte-identical across runs.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="scenario", metavar="scenario", parser_class=_Parser)
    sub.required = True
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario",
                           epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", type=Path, help="TOML configuration file (flags override it)")
        if name in PRESETS:
            p.add_argument("--preset", choices=PRESETS[name],
                           help=f"experiment variant (default {PRESETS[name][0]})")
        p.add_argument("--r", type=int, help="curve exponent r (default 2)")
        p.add_argument("--s", type=int, help="curve exponent s (default 3)")
        p.add_argument("--curves", help="several curves, e.g. '2,3;3,4' (cusp-classify, structure-form)")
        p.add_argument("--kmax", type=int, help="largest monomial degree (default 2(r-1)(s-1))")
        p.add_argument("--phi", help="Laurent polynomial in tau, e.g. 'tau' or '1 + tau**2'")
        p.add_argument("--grid", help="point set: NxM, randomN or pathN")
        p.add_argument("--seed", type=int, help="seed for random point sets (default 0)")
        p.add_argument("--tol", type=float, help="adaptive quadrature tolerance")
        p.add_argument("--output", type=Path, help="path of the JSON report")
        p.add_argument("--csv", type=Path, help="also write (re z, im z, re val, im val, residual) rows")
    return parser


def _overrides(args) -> dict:
    ov: dict = {"scenario": args.scenario}

    def put(section, key, value):
        if value is not None:
            ov.setdefault(section, {})[key] = value

    put("geometry", "preset", getattr(args, "preset", None))
    put("geometry", "r", args.r)
    put("geometry", "s", args.s)
    put("geometry", "kmax", args.kmax)
    put("geometry", "phi", args.phi)
    if args.curves is not None:
        try:
            curves = [[int(x) for x in part.split(",")] for part in args.curves.split(";") if part.strip()]
        except ValueError:
            raise ConfigError("--curves expects pairs like '2,3;3,4'", field="geometry.curves") from None
        put("geometry", "curves", curves)
    put("grid", "name", args.grid)
    put("grid", "seed", args.seed)
    put("quadrature", "tol", args.tol)
    put("output", "path", str(args.output) if args.output else None)
    put("output", "csv", str(args.csv) if args.csv else None)
    return ov


def load_config(args) -> ScenarioConfig:
    ov = _overrides(args)
    if args.config is not None:
        if not args.config.is_file():
            raise ConfigError(f"config file {args.config} not found", field="config")
        cfg = ScenarioConfig.from_toml(args.config, ov)
    else:
        cfg = ScenarioConfig.from_mapping(ov)
    if cfg.scenario != args.scenario:
        raise ConfigError(f"config names scenario {cfg.scenario!r}", field="scenario")
    return cfg


def _report_path(cfg: ScenarioConfig) -> Path | None:
    if cfg.output["path"]:
        return Path(cfg.output["path"])
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env) / f"{cfg.scenario}.json"
    return None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"koppelman: config error in {exc.field}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run(cfg.scenario, cfg)
    path = _report_path(cfg)
    try:
        if path is None:
            sys.stdout.write(report.to_json())
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(report.to_json(), encoding="utf-8")
            path.with_suffix(".meta.json").write_text(report.meta_json(), encoding="utf-8")
            print(f"report: {path}")
        if cfg.output["csv"]:
            emit_plotdata(report, cfg.output["csv"])
    except OSError as exc:
        print(f"koppelman: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(report.summary(), file=sys.stderr if path is None else sys.stdout)
    if report.error is not None:
        return EXIT_DIVERGENCE
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
