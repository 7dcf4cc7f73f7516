"""``ccrflow-lab``: run a verification suite and write a JSON report.

Exit codes: 0 when every check passes, 1 when any check fails or errors,
2 for a configuration or usage problem (no report is written then).
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ALL_SUITES, load_config
from .errors import ConfigError
from .suites import run_suite, summary


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors share the config exit code
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ccrflow-lab", description="Run seeded numerical checks of CCR flow constructions.")
    p.add_argument("suite", choices=ALL_SUITES)
    p.add_argument("--config", help="TOML configuration file (defaults are used when omitted)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help="write the JSON report here instead of standard output")
    p.add_argument("--tolerance-scale", type=float, dest="tolerance_scale",
                   help="multiply numerical tolerances by this factor")
    return p


def resolve_config(args) -> dict:
    cfg = load_config(args.config)
    if cfg["suite"] is not None and cfg["suite"] != args.suite:
        raise ConfigError(f"config names suite {cfg['suite']!r} but {args.suite!r} was requested")
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        cfg["seed"] = args.seed
    if args.tolerance_scale is not None:
        if not args.tolerance_scale > 0:
            raise ConfigError("--tolerance-scale must be positive")
        cfg["tolerance_scale"] = args.tolerance_scale
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"ccrflow-lab: config error: {exc}", file=sys.stderr)
        return 2
    report = run_suite(args.suite, cfg)
    body = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    print(summary(report), file=sys.stderr)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
