import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .capacity import PlanError
from .config import ConfigError, load
from .ctmc import CtmcError
from .experiments import COMMANDS, EXIT_CONFIG_ERROR

log = logging.getLogger("raidavail")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raidavail",
        description="Availability of backed-up RAID arrays under wrong disk replacement.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, help="override simulation.master_seed")
    parser.add_argument("--iterations", type=int, help="override simulation.iterations")
    parser.add_argument("--workers", type=int, help="override simulation.workers")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load(args.config, seed=args.seed, iterations=args.iterations, workers=args.workers)
        table = COMMANDS[args.command](cfg)
    except (ConfigError, PlanError) as exc:
        print(f"raidavail: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except CtmcError as exc:
        print(f"raidavail: model error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ValueError as exc:
        print(f"raidavail: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    text = experiments.to_json(table) if args.format == "json" else experiments.to_csv(table)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.command == "validate":
        failed = table.column("verdict").count("fail")
        print(f"validate: {len(table.rows) - failed}/{len(table.rows)} grid points pass", file=sys.stderr)
    if args.command == "compare":
        for hep in dict.fromkeys(table.column("hep")):
            block = sorted((r for r in table.rows if r["hep"] == hep), key=lambda r: r["rank"])
            print(f"ranking hep={hep:g}: " + " > ".join(r["config"] for r in block), file=sys.stderr)
    return table.status


if __name__ == "__main__":
    sys.exit(main())
