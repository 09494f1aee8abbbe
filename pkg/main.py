#!/usr/bin/env python3
"""
NPT Main Entry Point

Proof checker for nullary parametric type theory: batch checking, normal
forms, an interactive REPL and the golden-test runner.

Usage:
    python main.py check FILE...            # Check files on top of the prelude
    python main.py norm FILE NAME           # Print the normal form of NAME
    python main.py norm FILE NAME --trace   # ...followed by the reduction rules used
    python main.py repl                     # Interactive session
    python main.py golden [DIR] [--bless]   # Run (or rewrite) NAME.npt / NAME.golden pairs
"""

import argparse
import logging
import sys

from dotenv import load_dotenv

# Load environment variables FIRST so NPT_LIB from .env is visible to config lookups
load_dotenv(override=False)

from src.cli.commands import CliConfig, cmd_check, cmd_golden, cmd_norm
from src.cli.repl import cmd_repl
from src.utils.config import CLI_CONFIG, KERNEL_CONFIG, PATHS
from src.utils.diagnostic_logger import DiagnosticReporter


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--budget', type=_positive, default=None,
                        help=f'Reduction step budget (default: file pragma, else {KERNEL_CONFIG["step_budget"]:,})')
    common.add_argument('--no-prelude', action='store_true',
                        help='Start from an empty signature instead of the prelude')
    common.add_argument('--diag-format', choices=CLI_CONFIG["diag_formats"], default=CLI_CONFIG["diag_format"],
                        help='Diagnostic output format (default: text)')
    common.add_argument('--strategy', choices=KERNEL_CONFIG["strategies"], default=KERNEL_CONFIG["strategy"],
                        help='Normalization strategy: leftmost-outermost or rightmost-innermost (default: lo)')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='Debug logging, including every reduction step')
    common.add_argument('--save-session', action='store_true',
                        help=f'Write a JSON summary of reported diagnostics to {PATHS["log_dir"]}/')

    parser = argparse.ArgumentParser(description='NPT proof checker for nullary parametric type theory')
    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', parents=[common], help='Typecheck source files')
    check.add_argument('paths', nargs='+', help='.npt files, checked in order')

    norm = sub.add_parser('norm', parents=[common], help='Normalize a definition')
    norm.add_argument('path', help='.npt file to check')
    norm.add_argument('name', help='definition to normalize')
    norm.add_argument('--trace', action='store_true',
                      help='Print the reduction rules applied, after a "-- trace" line')

    sub.add_parser('repl', parents=[common], help='Interactive session')

    golden = sub.add_parser('golden', parents=[common], help='Run golden tests')
    golden.add_argument('dir', nargs='?', default=None, help='directory of NAME.npt / NAME.golden pairs')
    golden.add_argument('--bless', action='store_true', help='Rewrite the .golden files instead of comparing')
    return parser


def main(argv=None) -> int:
    """Parse arguments, configure logging and dispatch to a command."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )

    if args.command == 'check':
        paths = args.paths
    elif args.command == 'norm':
        paths = [args.path]
    elif args.command == 'golden':
        paths = [args.dir] if args.dir else []
    else:
        paths = []

    config = CliConfig(
        command=args.command,
        paths=paths,
        name=getattr(args, 'name', None),
        budget=args.budget,
        trace=getattr(args, 'trace', False),
        no_prelude=args.no_prelude,
        diag_format=args.diag_format,
        strategy=args.strategy,
        bless=getattr(args, 'bless', False),
        progress=CLI_CONFIG["show_progress"] and sys.stderr.isatty(),
    )

    if config.command == 'repl':
        return cmd_repl(config)

    reporter = DiagnosticReporter(config.diag_format, command=config.command)
    commands = {'check': cmd_check, 'norm': cmd_norm, 'golden': cmd_golden}
    code = commands[config.command](config, reporter)
    if args.save_session:
        path = reporter.save_summary()
        print(f"📝 Session summary: {path}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
