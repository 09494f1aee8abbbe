"""
Source pipeline for NPT.

Reusable functions that take `.npt` text through parse -> elaborate -> check
on top of an existing Signature, and that normalize checked definitions.
Diagnostics leave this module as KernelError with the file name attached.
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

from tqdm import tqdm

from src.core.diagnostics import ErrorCode, KernelError, fail
from src.core.evaluator import Evaluator, ReductionTrace
from src.core.syntax import Telescope, Term
from src.core.typechecker import CoreDef, Signature
from src.surface.elaborator import ElaboratedFile, elaborate
from src.surface.parser import parse
from src.utils.config import KERNEL_CONFIG, raise_recursion_limit

logger = logging.getLogger(__name__)

raise_recursion_limit()


@dataclass
class CheckedFile:
    """One source file after a successful check."""
    path: str
    result: ElaboratedFile

    @property
    def signature(self) -> Signature:
        return self.result.signature

    @property
    def budget(self) -> Optional[int]:
        return self.result.budget


@dataclass
class Normalized:
    name: str
    term: Term
    steps: int
    trace: Optional[ReductionTrace] = None


def depth_exceeded() -> KernelError:
    """BudgetExceeded for input nested deeper than the interpreter stack allows."""
    return fail(ErrorCode.BUDGET_EXCEEDED,
                f"nesting depth exceeds the recursion limit of {sys.getrecursionlimit()}")


def read_source(path: str) -> str:
    """Read a source file.

    Raises:
        OSError: the file cannot be read or is not valid UTF-8.
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise OSError(f"{path} is not valid UTF-8: {e.reason} at byte {e.start}") from e


def check_source(text: str, signature: Signature, file: str = "<input>",
                 budget: Optional[int] = None) -> ElaboratedFile:
    """Parse, elaborate and check `text` on top of `signature`."""
    try:
        decls = parse(text)
        return elaborate(signature, decls, budget)
    except KernelError as err:
        raise err.located(file=file)
    except RecursionError:
        raise depth_exceeded().located(file=file) from None


def check_file(path: str, signature: Signature, budget: Optional[int] = None) -> CheckedFile:
    logger.info(f"Checking {path}")
    result = check_source(read_source(path), signature, file=path, budget=budget)
    return CheckedFile(path, result)


def check_files(paths: Iterable[str], signature: Signature, budget: Optional[int] = None,
                progress: bool = False) -> Tuple[Signature, List[CheckedFile]]:
    """Check files in order, each on top of everything checked before it."""
    paths = list(paths)
    checked: List[CheckedFile] = []
    for path in tqdm(paths, desc="Checking", unit="file", disable=not progress or len(paths) < 2):
        item = check_file(path, signature, budget)
        signature = item.signature
        checked.append(item)
    return signature, checked


def effective_budget(cli_budget: Optional[int], file_budget: Optional[int] = None) -> int:
    """--budget beats a `{-# budget N #-}` pragma, which beats the configured default."""
    if cli_budget is not None:
        return cli_budget
    if file_budget is not None:
        return file_budget
    return KERNEL_CONFIG["step_budget"]


def normalize_term(signature: Signature, term: Term, ctx: Optional[Telescope] = None,
                   budget: Optional[int] = None, strategy: Optional[str] = None,
                   trace: bool = False) -> Tuple[Term, Evaluator]:
    evaluator = Evaluator(signature, budget=budget, strategy=strategy,
                          trace=ReductionTrace() if trace else None)
    try:
        return evaluator.normalize(ctx or Telescope(), term), evaluator
    except RecursionError:
        raise depth_exceeded() from None


def normalize_definition(checked: CheckedFile, name: str, cli_budget: Optional[int] = None,
                         strategy: Optional[str] = None, trace: bool = False) -> Normalized:
    """Normalize the body of a definition from `checked`, or any definition it can see."""
    decl = checked.result.definition(name)
    if decl is not None:
        body = decl.body
    else:
        body = checked.signature.definition_body(name)
        if body is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"`{name}` is not a definition").located(file=checked.path)
    budget = effective_budget(cli_budget, checked.budget)
    try:
        term, evaluator = normalize_term(checked.signature, body, budget=budget,
                                         strategy=strategy, trace=trace)
    except KernelError as err:
        raise err.located(file=checked.path)
    logger.debug(f"Normalized {name} in {evaluator.steps} step(s)")
    return Normalized(name, term, evaluator.steps, evaluator.trace)


def golden_definitions(checked: CheckedFile) -> List[CoreDef]:
    return [d for d in checked.result.decls if isinstance(d, CoreDef) and d.golden]
