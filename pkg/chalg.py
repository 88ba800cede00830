"""
chalg.py — CHAlg command-line entry point.

    python chalg.py lyndon --alphabet 2 --max-len 4
    python chalg.py reduce --n 2 "s1(abab)"
    python chalg.py amitsur --m 3 --n 2 --slots "t1:a,t2:b,t3:ba" --coeff 1,1,1
    python chalg.py verify --n 2 --exact "s2(ab) - s2(a)s2(b)"
    python chalg.py --json repro-paper-example

Global flags (accepted before or after the subcommand):
    --json          machine-readable output on stdout
    --unicode       σ_2(a²b) instead of s2[a^2b]
    -v / -vv        INFO / DEBUG logging on stderr
    --max-degree, --max-slots   override the resource caps for this run
"""

from __future__ import annotations

import argparse
import logging
import os as _os
import sys
from typing import List, Optional

# Keep the project root first on sys.path so `modules` and `expr_parser`
# resolve to this checkout.
_chalg_root = _os.path.dirname(_os.path.abspath(__file__))
if _chalg_root not in sys.path:
    sys.path.insert(0, _chalg_root)

from modules.config import Config
from modules.help_module import MODULE_HELP
from router import EXIT_USAGE, HANDLERS, Result, route

log = logging.getLogger("CHAlg")

SUGGEST_THRESHOLD = 70


# ─────────────────────────────────────────────────────────────────
# ARGUMENTS
# ─────────────────────────────────────────────────────────────────
def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Same flags for the main parser and every subparser; the subparser copy
    uses SUPPRESS defaults so it never overwrites a value set before the
    subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False),
                   help="print the JSON payload instead of the text report")
    p.add_argument("--unicode", action="store_true", default=d(False),
                   help="render σ_i and superscripts")
    p.add_argument("-v", "--verbose", action="count", default=d(0),
                   help="-v INFO, -vv DEBUG (stderr)")
    p.add_argument("--max-degree", type=int, default=d(None), metavar="D",
                   help=f"degree cap (env CHALG_MAX_DEGREE, now {Config.MAX_DEGREE})")
    p.add_argument("--max-slots", type=int, default=d(None), metavar="K",
                   help=f"slot cap (env CHALG_MAX_SLOTS, now {Config.MAX_SLOTS})")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chalg", description=MODULE_HELP["general"],
        parents=[_global_flags(False)],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = _global_flags(True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=MODULE_HELP[name].split(".")[0],
                              description=MODULE_HELP[name])

    p = add("lyndon")
    p.add_argument("--alphabet", type=int, required=True, metavar="Q")
    p.add_argument("--max-len", type=int, required=True, metavar="D")
    p.add_argument("--count", action="store_true", help="necklace counts per length only")

    p = add("reduce")
    p.add_argument("--n", type=int, default=None, help="truncation level (omit: none)")
    p.add_argument("expr")

    p = add("amitsur")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--slots", required=True, help='e.g. "t1:a,t2:b,t3:ba"')
    p.add_argument("--coeff", default=None, help="polarization multi-index, e.g. 1,1,1")

    p = add("chpoly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("expr")

    p = add("verify")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--random", dest="mode", action="store_const", const="random")
    p.set_defaults(mode="auto")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("expr")

    p = add("kernel")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", required=True, help="comma-separated monomials of f")
    p.add_argument("--g", required=True, help="comma-separated monomials of g")

    p = add("norm-check")
    p.add_argument("--shape", required=True, help='blocks m:a, e.g. "2:1,1:1"')
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    add("repro-paper-example")

    p = sub.add_parser("help", parents=[common], help="topic guide")
    p.add_argument("topic", nargs="*")
    return parser


# ─────────────────────────────────────────────────────────────────
# DID-YOU-MEAN
# ─────────────────────────────────────────────────────────────────
def suggest_command(word: str) -> Optional[str]:
    try:
        from fuzzywuzzy import process
    except ImportError:
        try:
            from thefuzz import process  # type: ignore
        except ImportError:
            return None
    best = process.extractOne(word, list(HANDLERS))
    if best and best[1] >= SUGGEST_THRESHOLD:
        return best[0]
    return None


def _first_positional(argv: List[str]) -> Optional[str]:
    takes_value = {"--max-degree", "--max-slots"}
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in takes_value:
            skip = True
            continue
        if not tok.startswith("-"):
            return tok
    return None


# ─────────────────────────────────────────────────────────────────
# MAIN
# ─────────────────────────────────────────────────────────────────
def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="[%(asctime)s] [%(levelname)s] %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    command = _first_positional(argv)
    if command is not None and command not in HANDLERS:
        hint = suggest_command(command)
        msg = f"chalg: unknown command {command!r}"
        if hint:
            msg += f"; did you mean {hint!r}?"
        print(msg, file=sys.stderr)
        return EXIT_USAGE

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)

    _setup_logging(args.verbose)
    Config.override(args.max_degree, args.max_slots)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if args.command == "help":
        args.topic = " ".join(args.topic)

    result: Result = route(args)
    if args.json:
        print(result.to_json())
    else:
        stream = sys.stdout if result.exit_code in (0, 1) else sys.stderr
        print(result.message, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
