"""Shared fixtures: the shipped library is checked once per session."""

from pathlib import Path
from typing import Optional, Tuple

import pytest

from src.core.syntax import Telescope, Term
from src.core.typechecker import Signature
from src.stdlib.prelude import load_corpus, load_prelude
from src.surface.elaborator import elaborate_expr, elaborate_type
from src.surface.parser import parse_binder, parse_expr

TESTS_DIR = Path(__file__).resolve().parent


def build_context(signature: Signature, *groups: str) -> Telescope:
    """Telescope from binder groups such as "(x : @I)" or "(a b : Nm)"."""
    ctx = Telescope()
    for group in groups:
        for name, dom, _ in parse_binder(group):
            ctx = ctx.aff(name) if dom is None else ctx.cart(name, elaborate_type(signature, ctx, dom))
    return ctx


class Elab:
    """Elaborate expressions against a fixed Signature."""

    def __init__(self, signature: Signature):
        self.signature = signature

    def context(self, *groups: str) -> Telescope:
        return build_context(self.signature, *groups)

    def type(self, source: str, *groups: str) -> Term:
        return elaborate_type(self.signature, self.context(*groups), parse_expr(source))

    def __call__(self, source: str, *groups: str, expected: Optional[str] = None) -> Tuple[Telescope, Term, Term]:
        ctx = self.context(*groups)
        ty = elaborate_type(self.signature, ctx, parse_expr(expected)) if expected else None
        term, inferred = elaborate_expr(self.signature, ctx, parse_expr(source), expected=ty)
        return ctx, term, inferred


@pytest.fixture(scope="session")
def prelude() -> Signature:
    return load_prelude()


@pytest.fixture(scope="session")
def corpus(prelude) -> Signature:
    return load_corpus(prelude)


@pytest.fixture(scope="session")
def elab(prelude) -> Elab:
    return Elab(prelude)


@pytest.fixture(scope="session")
def elab_corpus(corpus) -> Elab:
    return Elab(corpus)


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return TESTS_DIR / "golden"


@pytest.fixture(scope="session")
def neg_dir() -> Path:
    return TESTS_DIR / "neg"
