"""
Command implementations for the `npt` command line.

Each command takes a CliConfig, writes results to `out` (standard output by
default) and diagnostics through a DiagnosticReporter, and returns an exit
code: 0 success, 1 diagnostic or golden mismatch, 2 I/O failure, 3 step
budget exhausted.
"""

import difflib
import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional, TextIO, Tuple

from tqdm import tqdm

from src.core.diagnostics import ErrorCode, KernelError
from src.core.pipeline import (
    CheckedFile, check_file, check_files, golden_definitions, normalize_definition, read_source,
)
from src.core.typechecker import Signature
from src.stdlib.prelude import base_signature, load_corpus, load_extras
from src.surface.pretty import pretty_term
from src.utils.config import CLI_CONFIG, EXIT_CODES, KERNEL_CONFIG, PATHS
from src.utils.diagnostic_logger import DiagnosticReporter
from src.utils.validation import (
    golden_cases, validate_environment, validate_golden_dir, validate_source_paths,
)

logger = logging.getLogger(__name__)

COMMANDS = ("check", "norm", "repl", "golden")


@dataclass
class CliConfig:
    command: str
    paths: List[str] = field(default_factory=list)
    name: Optional[str] = None
    budget: Optional[int] = None
    trace: bool = False
    no_prelude: bool = False
    diag_format: str = CLI_CONFIG["diag_format"]
    strategy: str = KERNEL_CONFIG["strategy"]
    bless: bool = False
    progress: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command: {self.command}")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("--budget must be a positive integer")
        if self.strategy not in KERNEL_CONFIG["strategies"]:
            raise ValueError(f"unknown strategy: {self.strategy}")
        if self.diag_format not in CLI_CONFIG["diag_formats"]:
            raise ValueError(f"unknown diagnostic format: {self.diag_format}")


def exit_code_for(err: KernelError) -> int:
    if err.code is ErrorCode.BUDGET_EXCEEDED:
        return EXIT_CODES["budget"]
    return EXIT_CODES["diagnostic"]


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def prepare_signature(config: CliConfig, reporter: DiagnosticReporter) -> Tuple[Optional[Signature], int]:
    """Validate inputs and build the base Signature.

    The library is checked under its own pragmas; --budget applies to user files.
    """
    if not validate_source_paths(config.paths):
        return None, EXIT_CODES["io"]
    if not config.no_prelude and not validate_environment(quiet=True):
        return None, EXIT_CODES["io"]
    try:
        return base_signature(config.paths, not config.no_prelude), EXIT_CODES["ok"]
    except KernelError as err:
        reporter.report(err.diagnostic)
        return None, exit_code_for(err)
    except (OSError, ValueError) as e:
        _status(f"❌ Could not load the library: {e}")
        return None, EXIT_CODES["io"]


def cmd_check(config: CliConfig, reporter: Optional[DiagnosticReporter] = None) -> int:
    """Check every file in order on top of the prelude."""
    reporter = reporter or DiagnosticReporter(config.diag_format, command="check")
    signature, code = prepare_signature(config, reporter)
    if signature is None:
        return code
    try:
        _, checked = check_files(config.paths, signature, config.budget, progress=config.progress)
    except KernelError as err:
        reporter.report(err.diagnostic)
        return exit_code_for(err)
    except OSError as e:
        _status(f"❌ {e}")
        return EXIT_CODES["io"]
    for item in checked:
        reporter.note_file(item.path)
        _status(f"✅ {item.path}: {len(item.result.decls)} declaration(s) checked")
    return EXIT_CODES["ok"]


def cmd_norm(config: CliConfig, reporter: Optional[DiagnosticReporter] = None,
             out: Optional[TextIO] = None) -> int:
    """Print the normal form of one definition, optionally with its reduction trace."""
    out = out or sys.stdout
    reporter = reporter or DiagnosticReporter(config.diag_format, command="norm")
    signature, code = prepare_signature(config, reporter)
    if signature is None:
        return code
    try:
        checked = check_file(config.paths[0], signature, config.budget)
        result = normalize_definition(checked, config.name, config.budget,
                                      strategy=config.strategy, trace=config.trace)
    except KernelError as err:
        reporter.report(err.diagnostic)
        return exit_code_for(err)
    except OSError as e:
        _status(f"❌ {e}")
        return EXIT_CODES["io"]
    print(pretty_term(result.term, reserved=checked.signature.global_names()), file=out)
    if config.trace:
        print(CLI_CONFIG["trace_marker"], file=out)
        for rule in result.trace.rules():
            print(rule, file=out)
    return EXIT_CODES["ok"]


def render_goldens(checked: CheckedFile, budget: Optional[int], strategy: str) -> str:
    """One `name = normal form` line per definition marked golden."""
    reserved = checked.signature.global_names()
    lines = []
    for decl in golden_definitions(checked):
        result = normalize_definition(checked, decl.name, budget, strategy=strategy)
        lines.append(f"{decl.name} = {pretty_term(result.term, reserved=reserved)}")
    return "".join(line + "\n" for line in lines)


def _diff(expected: str, actual: str, case: str) -> str:
    return "".join(difflib.unified_diff(
        expected.splitlines(keepends=True), actual.splitlines(keepends=True),
        fromfile=f"{case}{PATHS['golden_suffix']}", tofile=f"{case} (actual)",
    ))


def cmd_golden(config: CliConfig, reporter: Optional[DiagnosticReporter] = None,
               out: Optional[TextIO] = None) -> int:
    """Run (or with --bless, rewrite) every NAME.npt / NAME.golden pair in a directory."""
    out = out or sys.stdout
    reporter = reporter or DiagnosticReporter(config.diag_format, command="golden")
    directory = config.paths[0] if config.paths else PATHS["golden_dir"]
    if not validate_golden_dir(directory):
        return EXIT_CODES["io"]
    cases = golden_cases(directory)
    if not cases:
        print("0 cases", file=out)
        return EXIT_CODES["ok"]

    library = CliConfig("check", [str(c) for c in cases], budget=config.budget,
                        no_prelude=config.no_prelude, diag_format=config.diag_format)
    signature, code = prepare_signature(library, reporter)
    if signature is None:
        return code
    if not config.no_prelude:
        # golden suites see the whole shipped library
        try:
            signature = load_corpus(signature)
            signature = load_extras(signature)
        except KernelError as err:
            reporter.report(err.diagnostic)
            return exit_code_for(err)

    failures: List[str] = []
    unreadable = False
    reports: List[str] = []
    for source in tqdm(cases, desc="Golden", unit="case", disable=not config.progress):
        case = source.stem
        expected_path = source.with_suffix(PATHS["golden_suffix"])
        try:
            actual = render_goldens(check_file(str(source), signature, config.budget),
                                    config.budget, config.strategy)
            if config.bless:
                expected_path.write_text(actual, encoding="utf-8")
                reports.append(f"📝 {case}: blessed")
                continue
            expected = read_source(str(expected_path)) if expected_path.exists() else None
        except KernelError as err:
            reporter.report(err.diagnostic)
            failures.append(case)
            reports.append(f"❌ {case}: {err.code.value}")
            continue
        except OSError as e:
            unreadable = True
            failures.append(case)
            reports.append(f"❌ {case}: {e}")
            continue
        if expected is None:
            failures.append(case)
            reports.append(f"❌ {case}: missing {expected_path.name}")
        elif expected != actual:
            failures.append(case)
            reports.append(f"❌ {case}\n{_diff(expected, actual, case)}".rstrip("\n"))
        else:
            reports.append(f"✅ {case}")

    for line in reports:
        print(line, file=out)
    passed = len(cases) - len(failures)
    print(f"{passed}/{len(cases)} cases passed", file=out)
    logger.info(f"Golden run over {directory}: {passed}/{len(cases)} passed")
    if unreadable:
        return EXIT_CODES["io"]
    return EXIT_CODES["ok"] if not failures else EXIT_CODES["diagnostic"]
