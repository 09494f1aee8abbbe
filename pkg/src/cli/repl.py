"""
Interactive read-eval-print loop.

The session holds a Signature (seeded with the prelude) and a working
telescope that only grows to the right. Diagnostics are printed inline and
the session continues.
"""

import logging
import sys
from typing import Callable, Dict, Optional, TextIO

from src.cli.commands import prepare_signature
from src.core.diagnostics import KernelError
from src.core.evaluator import Evaluator
from src.core.pipeline import depth_exceeded
from src.core.syntax import Telescope
from src.core.typechecker import Signature
from src.surface.elaborator import elaborate, elaborate_expr, elaborate_type
from src.surface.parser import parse, parse_binder, parse_expr
from src.surface.pretty import pretty_telescope, pretty_term
from src.utils.config import CLI_CONFIG
from src.utils.diagnostic_logger import DiagnosticReporter

logger = logging.getLogger(__name__)

HELP = """\
:t EXPR            show the type of EXPR
:n EXPR            normalize EXPR
:def DECL          add a declaration (def, postulate or data)
:assume (x : @I)   extend the context with a bridge variable
:assume (a : A)    extend the context with a term variable
:ctx               show the context
:help              this message
:q                 quit"""


class Repl:
    def __init__(self, signature: Optional[Signature] = None, budget: Optional[int] = None,
                 strategy: Optional[str] = None, out: Optional[TextIO] = None,
                 reporter: Optional[DiagnosticReporter] = None):
        self.signature = signature if signature is not None else Signature()
        self.ctx = Telescope()
        self.budget = budget
        self.strategy = strategy
        self.out = out or sys.stdout
        self.reporter = reporter or DiagnosticReporter(stream=self.out, command="repl")
        self.commands: Dict[str, Callable[[str], None]] = {
            ":t": self.type_of,
            ":n": self.normalize,
            ":def": self.define,
            ":assume": self.assume,
            ":ctx": self.show_context,
            ":help": self.help,
        }

    def say(self, text: str) -> None:
        print(text, file=self.out)

    def show(self, term) -> str:
        return pretty_term(term, self.ctx.names(), reserved=self.signature.global_names())

    # -- commands ----------------------------------------------------------------

    def type_of(self, arg: str) -> None:
        _, ty = elaborate_expr(self.signature, self.ctx, parse_expr(arg), budget=self.budget)
        self.say(self.show(ty))

    def normalize(self, arg: str) -> None:
        term, _ = elaborate_expr(self.signature, self.ctx, parse_expr(arg), budget=self.budget)
        evaluator = Evaluator(self.signature, budget=self.budget, strategy=self.strategy)
        self.say(self.show(evaluator.normalize(self.ctx, term)))

    def define(self, arg: str) -> None:
        if len(self.ctx):
            self.say("⚠️  declarations are checked in the empty context; the working context is ignored")
        result = elaborate(self.signature, parse(arg), self.budget)
        self.signature = result.signature
        for decl in result.decls:
            self.say(f"defined {decl.name}")

    def assume(self, arg: str) -> None:
        ctx = self.ctx
        for name, dom, _ in parse_binder(arg):
            if dom is None:
                ctx = ctx.aff(name)
            else:
                ctx = ctx.cart(name, elaborate_type(self.signature, ctx, dom))
        self.ctx = ctx

    def show_context(self, arg: str) -> None:
        text = pretty_telescope(self.ctx, reserved=self.signature.global_names())
        self.say(text or "(empty)")

    def help(self, arg: str) -> None:
        self.say(HELP)

    # -- loop ----------------------------------------------------------------------

    def handle(self, line: str) -> bool:
        """Run one input line; False means quit."""
        line = line.strip()
        if not line or line.startswith("--"):
            return True
        word, _, rest = line.partition(" ")
        if word in (":q", ":quit"):
            return False
        command = self.commands.get(word)
        if command is None:
            self.say(f"unknown command `{word}`; try :help")
            return True
        try:
            command(rest.strip())
        except KernelError as err:
            self.reporter.report(err.diagnostic.with_location(file="<repl>"))
        except RecursionError:
            self.reporter.report(depth_exceeded().diagnostic.with_location(file="<repl>"))
        return True

    def run(self, stdin: Optional[TextIO] = None, interactive: bool = True) -> int:
        stdin = stdin or sys.stdin
        while True:
            if interactive:
                print(CLI_CONFIG["prompt"], end="", file=self.out, flush=True)
            line = stdin.readline()
            if not line:
                return 0
            if not self.handle(line):
                return 0


def cmd_repl(config, stdin: Optional[TextIO] = None, out: Optional[TextIO] = None) -> int:
    """Start a REPL over the prelude (or an empty Signature with --no-prelude)."""
    out = out or sys.stdout
    reporter = DiagnosticReporter(config.diag_format, stream=out, command="repl")
    signature, code = prepare_signature(config, reporter)
    if signature is None:
        return code
    stdin = stdin or sys.stdin
    repl = Repl(signature, config.budget, config.strategy, out=out, reporter=reporter)
    logger.info(f"REPL started with {len(signature)} global declaration(s)")
    return repl.run(stdin, interactive=stdin.isatty())
