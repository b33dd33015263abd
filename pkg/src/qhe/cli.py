"""``qhe`` command line: sweeps and single-cycle reports from a JSON config."""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .errors import (
    ConfigError,
    DimensionMismatchError,
    InvalidParameterError,
    InvalidScaleError,
    InvalidSpacingError,
    InvalidTemperatureError,
    QHEError,
)
from .scans import COMMANDS, load_config, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# malformed inputs that only surface once values reach the model
_INPUT_ERRORS = (
    ConfigError,
    DimensionMismatchError,
    InvalidParameterError,
    InvalidScaleError,
    InvalidSpacingError,
    InvalidTemperatureError,
)


def _override(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed out of u64 range: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhe", description="Multi-level quantum Otto engine sweeps.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), dest="fmt")
    p.add_argument("--seed", type=_u64, help="u64 seed recorded with the output (default 42)")
    p.add_argument("--set", type=_override, action="append", default=[], metavar="KEY=VALUE",
                   help="override a config field; dotted keys reach nested blocks")
    p.add_argument("--workers", type=int, default=1, help="worker processes for grid sweeps")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        cfg = load_config(
            args.command, doc, out=args.out, fmt=args.fmt, seed=args.seed,
            workers=args.workers, overrides=args.set,
        )
        text = run(cfg)
    except _INPUT_ERRORS as exc:
        print(f"qhe: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QHEError as exc:
        print(f"qhe: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.out:
        tmp = cfg.out + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, cfg.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
