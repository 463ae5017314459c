"""
Command-line front door.

    tstruct-lab member --ring 12 --complex 'stalk(3,[1])' \\
        --filtration '{"cutoffs":[{"prime":2,"top":1},{"prime":3,"top":0}]}'
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .controllers.command_controller import VERBS, SIDES, Command, CommandController
from .errors import ParseError
from .loaders.json_loader import DocumentLoader
from .managers.log_manager import enable_debug, enable_file_logging, logger, set_quiet


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tstruct-lab",
        description="Verify t-structures of D(Z/n) classified by Thomason filtrations.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Complex shorthand: stalk(d,[n]), koszul(d)[k], K(d)[k], cech(d)[k], R[k]\n"
            "Exit status: 0 ok, 2 bad input or domain error, 3 internal check failed"
        ),
    )
    parser.add_argument("verb", choices=VERBS, help="Operation to run")
    parser.add_argument("--ring", type=int, help="Modulus n of Z/n")
    parser.add_argument("--in", dest="input", help="JSON input document ('-' for stdin)")
    parser.add_argument("--out", help="Write the output document here instead of stdout")
    parser.add_argument("--complex", help="Complex as JSON or shorthand")
    parser.add_argument("--filtration", help="Filtration as JSON")
    parser.add_argument("--gens", help="Generator list, JSON or '[K(2)[-1], K(3)[0]]'")
    parser.add_argument("--elements", help="Ring elements, e.g. '2,3'")
    parser.add_argument("--ideal", help="Generator of the ideal for the Cech triangle")
    parser.add_argument("--side", choices=SIDES, help="Which membership oracles to run")
    parser.add_argument("--depth", type=int, help="Coresolution depth")
    parser.add_argument("--seed", type=int, help="Suite seed")
    parser.add_argument("--window", help="Cutoff window a:b")
    parser.add_argument("--minus-inf", action="store_true", help="Enumerate -inf cutoffs too")
    parser.add_argument("--plus-inf", action="store_true", help="Enumerate +inf cutoffs too")
    parser.add_argument("--jobs", type=int, help="Worker processes for selftest")
    parser.add_argument("--config", help="Suite config document for selftest")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Only warnings and errors")
    parser.add_argument("--log-file", help="Also log to this file")
    return parser


OPTION_NAMES = (
    "complex",
    "filtration",
    "gens",
    "elements",
    "ideal",
    "side",
    "depth",
    "seed",
    "window",
    "minus_inf",
    "plus_inf",
    "jobs",
    "config",
)


def options_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    options = {name: getattr(args, name) for name in OPTION_NAMES}
    return {k: v for k, v in options.items() if v is not None and v is not False}


def command_from_args(args: argparse.Namespace) -> Command:
    """
    Raises:
        ParseError: if the --in document cannot be read
    """
    options = options_from_args(args)
    document = None
    if args.input:
        document = DocumentLoader.read(args.input)
        if not isinstance(document, dict):
            raise ParseError("input document must be an object")
    return Command(args.verb, args.ring, options, document)


def render_text(document: Dict[str, Any]) -> str:
    lines = []
    for key, value in document.items():
        if isinstance(value, (dict, list)):
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def emit(document: Dict[str, Any], fmt: str, out: Optional[str]):
    if fmt == "text":
        text = render_text(document)
    else:
        text = json.dumps(document, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        enable_debug()
    elif args.quiet:
        set_quiet()
    if args.log_file:
        enable_file_logging(args.log_file)

    controller = CommandController()
    try:
        command = command_from_args(args)
    except ParseError as exc:
        unread = Command(args.verb, args.ring, options_from_args(args))
        status, document = controller.reject(unread, exc)
    else:
        status, document = controller.dispatch(command)
    emit(document, args.format, args.out)
    return status


def main():
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
