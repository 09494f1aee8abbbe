import pytest

from src.core.datatypes import CoreData
from src.core.diagnostics import ErrorCode, KernelError
from src.core.pipeline import check_source, read_source
from src.core.syntax import GelType, Lam, NmType, Telescope, Universe, Var
from src.core.typechecker import CoreDef, Signature
from src.stdlib.prelude import load_corpus, load_extras, read_manifest
from src.surface.lexer import IDENT, KEYWORD, PRAGMA, SYMBOL, tokenize
from src.surface.parser import parse, parse_binder
from src.surface.pretty import pretty_decls, pretty_telescope, pretty_term


def texts(source: str):
    return [(t.kind, t.text) for t in tokenize(source)[:-1]]


class TestLexer:
    def test_unicode_aliases(self):
        assert texts("λ ⊸ 𝕀 → Σ") == [
            (SYMBOL, "\\"), (SYMBOL, "-o"), (SYMBOL, "@I"), (SYMBOL, "->"), (KEYWORD, "Sig"),
        ]

    def test_aliases_elaborate_like_ascii(self, elab):
        _, ascii_term, _ = elab("\\(x : @I). name x")
        _, unicode_term, _ = elab("λ(x : 𝕀). name x")
        assert ascii_term == unicode_term

    def test_identifiers(self):
        assert texts("n' _ g0 -o") == [(IDENT, "n'"), (IDENT, "_"), (IDENT, "g0"), (SYMBOL, "-o")]

    def test_comments_and_pragmas(self):
        tokens = texts("-- a comment\n{-# budget 40 #-} def")
        assert tokens == [(PRAGMA, "budget 40"), (KEYWORD, "def")]


class TestSyntaxErrors:
    @pytest.mark.parametrize("source", [
        "def x : U :=",
        "def x : U := $",
        "{-# golden",
        "data D : Nat where",
        "def f (x) : U := U",
    ])
    def test_rejected(self, source):
        with pytest.raises(KernelError) as err:
            parse(source)
        assert err.value.code is ErrorCode.SYNTAX_ERROR

    def test_position(self):
        with pytest.raises(KernelError) as err:
            parse("def a : U :=\n  ?")
        span = err.value.diagnostic.span
        assert (span.line, span.col) == (2, 3)

    def test_binder(self):
        assert [(n, d) for n, d, _ in parse_binder("(x y : @I)")] == [("x", None), ("y", None)]
        with pytest.raises(KernelError):
            parse_binder("(x : @I) extra")

    def test_bad_budget_pragma(self, prelude):
        with pytest.raises(KernelError) as err:
            check_source("{-# budget many #-}\ndef a : U := U\n", prelude)
        assert err.value.code is ErrorCode.SYNTAX_ERROR


class TestPrinter:
    def test_shadowing_gets_suffix(self):
        t = Lam(NmType(), Lam(NmType(), Var(1), name="a"), name="a")
        assert pretty_term(t) == "\\(a : Nm). \\(a1 : Nm). a"

    def test_globals_and_keywords_are_avoided(self):
        assert pretty_term(Lam(NmType(), Var(0), name="tt"), reserved=["tt"]) == "\\(tt1 : Nm). tt1"
        assert pretty_term(Lam(NmType(), Var(0), name="gel")) == "\\(gel1 : Nm). gel1"

    def test_nameless_binders(self):
        assert pretty_term(Lam(NmType(), Var(0), name="_")) == "\\(x0 : Nm). x0"
        assert pretty_term(Lam(NmType(), NmType(), name="_")) == "\\(_ : Nm). Nm"

    def test_telescope(self):
        gamma = Telescope().cart("A", Universe()).aff("x").cart("a", GelType(Var(1), Var(0)))
        assert pretty_telescope(gamma) == "(A : U) (x : @I) (a : Gel A x)"

    def test_parenthesizes_arguments(self, elab):
        ctx, term, _ = elab("forg Nm x (gel n x)", "(n : Nm)", "(x : @I)")
        assert pretty_term(term, ctx.names(), reserved=elab.signature.global_names()) == "forg Nm x (gel n x)"


def _shape(decl):
    if isinstance(decl, CoreData):
        return decl.name, decl.params, decl.ctors
    if isinstance(decl, CoreDef):
        return decl.name, decl.type, decl.body, decl.golden
    return decl.name, decl.type


def _round_trip(path, base: Signature):
    first = check_source(read_source(str(path)), base, file=str(path))
    reserved = first.signature.global_names()
    printed = pretty_decls(first.decls, reserved, first.budget)
    second = check_source(printed, base, file="<printed>")
    return first, second, printed, pretty_decls(second.decls, reserved, second.budget)


@pytest.fixture(scope="module")
def library_bases(prelude, corpus):
    return {"prelude": Signature(), "corpus": prelude, "extras": corpus}


@pytest.mark.parametrize("group", ["prelude", "corpus", "extras"])
def test_library_round_trips_through_the_printer(library_bases, group):
    manifest = read_manifest()
    for entry in manifest.group(group):
        first, second, printed, reprinted = _round_trip(manifest.path_of(entry), library_bases[group])
        assert [_shape(d) for d in second.decls] == [_shape(d) for d in first.decls]
        assert reprinted == printed


def test_golden_sources_round_trip(golden_dir, corpus):
    base = load_extras(corpus)
    for path in sorted(golden_dir.glob("*.npt")):
        first, second, printed, reprinted = _round_trip(path, base)
        assert [_shape(d) for d in second.decls] == [_shape(d) for d in first.decls], path.name
        assert reprinted == printed


def test_corpus_needs_prelude():
    with pytest.raises(KernelError) as err:
        load_corpus(Signature())
    assert err.value.code is ErrorCode.UNBOUND_NAME
