"""Command-line entry point.

Exit codes: 0 success, 1 configuration or parse error, 2 numerical
precondition failure.
"""

import argparse
from dataclasses import replace
import json
from pathlib import Path
import sys

from .config import RunConfig, load_config
from .dsl import format_network, load_network
from .errors import ConfigError, DegenerateInputError, NetworkParseError, PreconditionError
from .network import compile_recipe, gain_basis
from . import experiments, plotting

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


def _seed(text):
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value run configuration")
    common.add_argument("--seed", type=_seed, help="optimizer seed (overrides the config)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    common.add_argument("--format", choices=("csv", "json", "svg"), help="format printed to stdout")
    common.add_argument("--losses", choices=("on", "off"), help="detector loss at measurement")

    parser = argparse.ArgumentParser(
        prog="virtualnet",
        description="Virtual linear-optics networks on multimode squeezed light.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    sub.add_parser("table1", parents=[common], help="inseparability of the N-mode recipes, N=2..8")
    sub.add_parser("table2", parents=[common], help="cluster-state inequalities, N=2..5")
    sub.add_parser("figure5", parents=[common], help="average inseparability against N for several squeezing levels")
    sub.add_parser("epr", parents=[common], help="two-mode Reid value and optimal splitter")
    p = sub.add_parser("compile", parents=[common], help="dump the matrix and gains of a network")
    src = p.add_mutually_exclusive_group()
    src.add_argument("network", nargs="?", type=Path, help="network description file")
    src.add_argument("--recipe", type=int, metavar="N", help="use the built-in N-mode recipe")
    p = sub.add_parser("patterns", parents=[common], help="pixel patterns of each measured mode")
    p.add_argument("network", nargs="?", type=Path, help="network description file")
    return parser


def resolve_config(args):
    config = load_config(args.config) if args.config else RunConfig()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.losses is not None:
        changes["losses"] = args.losses == "on"
    if args.format is not None:
        changes["output_format"] = args.format
    return replace(config, **changes) if changes else config


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _emit_table(table, config, out, value_columns, title):
    if config.output_format == "svg":
        raise ConfigError(f"svg output is only available for figure5, not {table.name}")
    text = table.to_json() if config.output_format == "json" else table.to_csv()
    _write(out / f"{table.name}.{config.output_format}", text)
    out.mkdir(parents=True, exist_ok=True)
    plotting.table_png(table, value_columns, out / f"{table.name}.png", title)
    return text


def cmd_table1(config, args):
    table = experiments.run_table1(config)
    numerals = [c for c in table.columns if c in experiments.NUMERALS]
    return _emit_table(table, config, args.out, numerals, "van Loock-Furusawa inequalities")


def cmd_table2(config, args):
    table = experiments.run_table2(config)
    return _emit_table(table, config, args.out, ["I", "II", "III", "IV"], "cluster inequalities")


def cmd_figure5(config, args):
    table = experiments.run_figure5(config)
    curves = experiments.figure5_curves(table)
    csv_text = table.to_csv()
    svg_text = plotting.curves_svg(curves)
    out = args.out
    _write(out / "figure5.csv", csv_text)
    _write(out / "figure5.svg", svg_text)
    plotting.curves_png(curves, out / "figure5.png")
    if config.output_format == "json":
        text = table.to_json()
        _write(out / "figure5.json", text)
        return text
    return svg_text if config.output_format == "svg" else csv_text


def cmd_epr(config, args):
    result = experiments.run_epr(config)
    if config.output_format == "svg":
        raise ConfigError("svg output is only available for figure5, not epr")
    if config.output_format == "csv":
        ref = result["reference"]
        text = (
            "quantity,value,reference,tolerance\n"
            f"reid_value,{result['reid_value']:.6f},{ref['reid_value']},{ref['reid_tolerance']}\n"
            f"reid_value_50,{result['reid_value_50']:.6f},,\n"
            f"optimal_R,{result['optimal_R']:.6f},{ref['optimal_R']},{ref['optimal_R_tolerance']}\n"
            f"vlf_value,{result['vlf_value']:.6f},,\n"
        )
    else:
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    _write(args.out / f"epr.{config.output_format}", text)
    return text


def _network_from(args, config):
    if getattr(args, "recipe", None) is not None:
        return compile_recipe(args.recipe, config.long_arm)
    path = args.network or (Path(config.network_file) if config.network_file else None)
    if path is None:
        return None
    return load_network(path)


def cmd_compile(config, args):
    net = _network_from(args, config)
    if net is None:
        raise ConfigError("compile needs a network file, --recipe N or network_file in the config")
    table = experiments.run_compile(net)
    if config.output_format == "svg":
        raise ConfigError("svg output is only available for figure5, not compile")
    text = table.to_json() if config.output_format == "json" else table.to_csv()
    _write(args.out / f"compile.{config.output_format}", text)
    _write(args.out / "network.txt", format_network(net))
    return text


def cmd_patterns(config, args):
    net = _network_from(args, config)
    if config.output_format != "csv":
        raise ConfigError("patterns are written as csv only")
    text = experiments.run_patterns(config, net)
    _write(args.out / "patterns.csv", text)
    if net is None:
        net = compile_recipe(config.pattern_modes, config.long_arm) if config.pattern_modes >= 2 else None
    if net is not None and net.n_modes <= 8:
        plotting.patterns_png(gain_basis(net), args.out / "patterns.png")
    return text


COMMANDS = {
    "table1": cmd_table1,
    "table2": cmd_table2,
    "figure5": cmd_figure5,
    "epr": cmd_epr,
    "compile": cmd_compile,
    "patterns": cmd_patterns,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 is reserved for numerical failures
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        config = resolve_config(args)
        text = COMMANDS[args.verb](config, args)
    except (PreconditionError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, NetworkParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
