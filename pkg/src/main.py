#!/usr/bin/env python3
"""flowcast command-line entry point.

Usage:
    python -m src.main <command> [--config FILE] [overrides]

Commands: synth, train, forecast, eval, toy. Exit codes: 0 success,
2 input / configuration error, 3 numerical failure, 1 anything else.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .modules.flow_001 import CouplingVariant
from .modules.integrate_001 import COMMANDS, PipelineOrchestrator
from .utils.config import RunConfig
from .utils.errors import exit_code_for

logger = logging.getLogger("flowcast")

COMMAND_HELP = {
    "synth": "write a synthetic household load CSV",
    "train": "train a conditional flow and write its checkpoint",
    "forecast": "sample scenarios for every test window; repeat with another --checkpoint "
                "and the same --out to add a second flow method",
    "eval": "compute reliability / sharpness metrics and charts for every scenarios_<method>.csv",
    "toy": "fit N(0, sigma^2) to a Gaussian mixture under KL and W1",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowcast", description="Flow-based conditional scenario forecasting"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=COMMAND_HELP[command])
        sub.add_argument("--config", help="JSON run configuration")
        sub.add_argument("--out", help="output directory")
        sub.add_argument("--seed", type=int, help="seed for generation, training and sampling")
        sub.add_argument("--households", type=int,
                         help="synthetic household count (synth) or aggregation level (others)")
        sub.add_argument("--data", help="load CSV (default: synthetic data generated in memory)")
        sub.add_argument("--variant", choices=[v.value for v in CouplingVariant])
        sub.add_argument("--blocks", type=int, help="number of coupling blocks K")
        sub.add_argument("--beta", type=float, help="Wasserstein regularization weight")
        sub.add_argument("--scenarios", type=int, help="scenarios per test window")
        if command == "forecast":
            sub.add_argument("--checkpoint", help="checkpoint directory (default: <out>/checkpoint)")
        if command == "eval":
            sub.add_argument("--input", dest="input_dir",
                             help="directory with realized.csv and one scenarios_<method>.csv "
                                  "per method (default: <out>)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = RunConfig.load(args.config).apply_overrides(
            args.command,
            out=args.out,
            seed=args.seed,
            households=args.households,
            data=args.data,
            variant=args.variant,
            blocks=args.blocks,
            beta=args.beta,
            scenarios=args.scenarios,
        )
    except Exception as e:
        logger.error("✗ configuration: %s", e)
        return exit_code_for(e)

    paths = {}
    if getattr(args, "checkpoint", None):
        paths["checkpoint"] = args.checkpoint
    if getattr(args, "input_dir", None):
        paths["input_dir"] = args.input_dir

    results = PipelineOrchestrator(callback=logger.info).run(args.command, config, **paths)
    for error in results["errors"]:
        logger.error("%s: %s", error["type"], error["message"])
        logger.debug(error["traceback"])
    return results["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
