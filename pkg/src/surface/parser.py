"""
Recursive-descent parser for `.npt` files.

    decl   ::= 'def' IDENT group* ':' expr ':=' expr
             | 'postulate' IDENT group* ':' expr
             | 'data' IDENT group* ':' 'U' 'where' ('|' IDENT ':' expr)*
             | '{-#' pragma '#-}'
    group  ::= '(' IDENT+ ':' ('@I' | expr) ')'
    expr   ::= '\\' (IDENT | group)+ '.' expr
             | 'Sig' '(' IDENT ':' expr ')' '.' expr
             | group ('->' | '-o') expr
             | '@I' '-o' expr
             | app ('->' expr)?
    app    ::= head atom*
    head   ::= 'name' IDENT | 'Gel' atom IDENT | 'gel' atom IDENT | 'ung' atom
             | 'fst' atom | 'snd' atom | 'Id' atom atom atom | 'J' atom atom atom
             | 'ext' atom IDENT atom ('with' 'motive' expr)?
             | 'indNm' IDENT atom atom atom 'with' 'motive' expr
             | atom
    atom   ::= IDENT | 'U' | 'Nm' | 'refl' | '(' expr ')' | '(' expr ':' expr ')'
             | '(' expr (',' expr)+ ')'

A parenthesised group followed by an arrow is a dependent binder; otherwise
the parenthesis is re-read as an annotation or a plain subexpression.
"""

import logging
from typing import List, Optional, Tuple

from src.core.diagnostics import ErrorCode, KernelError, Span, fail
from src.surface.lexer import EOF, IDENT, KEYWORD, PRAGMA, Token, tokenize
from src.surface.syntax_tree import (
    SAnn, SApp, SBridgePi, SCtor, SData, SDef, SExpr, SExt, SFst, SGelIntro,
    SGelType, SId, SIndNm, SJ, SLam, SName, SNm, SPair, SPi, SPostulate, SPragma,
    SRefl, SSigma, SSnd, SUng, SUniverse, SVar, SurfaceDecl,
)

logger = logging.getLogger(__name__)

# (name, domain or None for @I, span)
Binder = Tuple[str, Optional[SExpr], Span]


def _join(start: Span, end: Span) -> Span:
    return Span(start.line, start.col, end.end_line, end.end_col)


class Parser:
    def __init__(self, text: str):
        self.tokens: List[Token] = tokenize(text)
        self.i = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != EOF:
            self.i += 1
        return token

    def at(self, text: str) -> bool:
        return self.peek().is_(text)

    def last_span(self) -> Span:
        return self.tokens[max(self.i - 1, 0)].span

    def error(self, message: str, token: Optional[Token] = None) -> KernelError:
        token = token or self.peek()
        found = "end of input" if token.kind == EOF else f"`{token.text}`"
        return fail(ErrorCode.SYNTAX_ERROR, f"{message}, found {found}", span=token.span)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected `{text}`")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.peek().kind != IDENT:
            raise self.error("expected an identifier")
        return self.advance()

    # -- declarations -----------------------------------------------------------

    def parse_file(self) -> List[SurfaceDecl]:
        decls: List[SurfaceDecl] = []
        while self.peek().kind != EOF:
            decls.append(self.parse_decl())
        return decls

    def parse_decl(self) -> SurfaceDecl:
        token = self.peek()
        if token.kind == PRAGMA:
            self.advance()
            key, _, value = token.text.partition(" ")
            if not key:
                raise fail(ErrorCode.SYNTAX_ERROR, "empty pragma", span=token.span)
            return SPragma(key=key, value=value.strip() or None, span=token.span)
        if token.is_("def"):
            return self._def()
        if token.is_("postulate"):
            self.advance()
            name = self.expect_ident()
            groups = self._groups()
            self.expect(":")
            ty = _close_type(groups, self.parse_expr())
            return SPostulate(name=name.text, type=ty, span=_join(token.span, self.last_span()))
        if token.is_("data"):
            return self._data()
        raise self.error("expected a declaration (`def`, `postulate` or `data`)")

    def _def(self) -> SDef:
        start = self.advance()
        name = self.expect_ident()
        groups = self._groups()
        self.expect(":")
        ty = self.parse_expr()
        self.expect(":=")
        body = self.parse_expr()
        return SDef(name=name.text, type=_close_type(groups, ty), body=_close_body(groups, body),
                    span=_join(start.span, self.last_span()))

    def _data(self) -> SData:
        start = self.advance()
        name = self.expect_ident()
        params = tuple((n, dom) for n, dom, _ in self._groups())
        self.expect(":")
        self.expect("U")
        self.expect("where")
        ctors = []
        while self.at("|"):
            self.advance()
            ctor = self.expect_ident()
            self.expect(":")
            ty = self.parse_expr()
            ctors.append(SCtor(name=ctor.text, type=ty, span=_join(ctor.span, self.last_span())))
        return SData(name=name.text, params=params, ctors=tuple(ctors),
                     span=_join(start.span, self.last_span()))

    # -- binder groups ----------------------------------------------------------

    def _group(self) -> List[Binder]:
        """`(x y : A)` or `(x y : @I)`"""
        self.expect("(")
        names = [self.expect_ident()]
        while self.peek().kind == IDENT:
            names.append(self.advance())
        self.expect(":")
        if self.at("@I") and self.peek(1).is_(")"):
            self.advance()
            dom = None
        else:
            dom = self.parse_expr()
        self.expect(")")
        return [(n.text, dom, n.span) for n in names]

    def _groups(self) -> List[Binder]:
        binders: List[Binder] = []
        while self.at("("):
            binders.extend(self._group())
        return binders

    def _try_arrow_group(self) -> Optional[List[Binder]]:
        saved = self.i
        try:
            binders = self._group()
            if self.at("->") or self.at("-o"):
                return binders
        except KernelError:
            pass
        self.i = saved
        return None

    # -- expressions --------------------------------------------------------------

    def parse_expr(self) -> SExpr:
        if self.at("\\"):
            return self._lambda()
        if self.at("Sig"):
            return self._sigma()
        return self._arrow()

    def _lambda(self) -> SExpr:
        start = self.advance()
        binders: List[Tuple[str, Optional[SExpr], bool]] = []
        while not self.at("."):
            if self.at("("):
                binders.extend((n, dom, dom is None) for n, dom, _ in self._group())
            elif self.peek().kind == IDENT:
                binders.append((self.advance().text, None, False))
            else:
                raise self.error("expected a binder or `.`")
        if not binders:
            raise self.error("a lambda needs at least one binder")
        self.expect(".")
        body = self.parse_expr()
        for name, dom, bridge in reversed(binders):
            body = SLam(span=_join(start.span, body.span), name=name, dom=dom, body=body, bridge=bridge)
        return body

    def _sigma(self) -> SExpr:
        start = self.advance()
        self.expect("(")
        name = self.expect_ident()
        self.expect(":")
        fst_ty = self.parse_expr()
        self.expect(")")
        self.expect(".")
        snd_ty = self.parse_expr()
        return SSigma(span=_join(start.span, snd_ty.span), name=name.text, fst_ty=fst_ty, snd_ty=snd_ty)

    def _arrow(self) -> SExpr:
        start = self.peek()
        if self.at("@I"):
            self.advance()
            self.expect("-o")
            cod = self.parse_expr()
            return SBridgePi(span=_join(start.span, cod.span), name=None, cod=cod)
        if self.at("("):
            binders = self._try_arrow_group()
            if binders is not None:
                arrow = self.advance()
                bridge = binders[0][1] is None
                if bridge != (arrow.text == "-o"):
                    expected = "-o" if bridge else "->"
                    raise fail(ErrorCode.SYNTAX_ERROR,
                               f"this binder must be followed by `{expected}`", span=arrow.span)
                cod = self.parse_expr()
                for name, dom, _ in reversed(binders):
                    span = _join(start.span, cod.span)
                    cod = (SBridgePi(span=span, name=name, cod=cod) if bridge
                           else SPi(span=span, name=name, dom=dom, cod=cod))
                return cod
        lhs = self._app()
        if self.at("->"):
            self.advance()
            cod = self.parse_expr()
            return SPi(span=_join(lhs.span, cod.span), name=None, dom=lhs, cod=cod)
        if self.at("-o"):
            raise self.error("`-o` needs `@I` or a bridge binder `(x : @I)` on its left", self.peek())
        return lhs

    def _atom_start(self) -> bool:
        token = self.peek()
        return token.kind == IDENT or any(token.is_(t) for t in ("U", "Nm", "refl", "("))

    def _app(self) -> SExpr:
        expr = self._head()
        while self._atom_start():
            arg = self._atom()
            expr = SApp(span=_join(expr.span, arg.span), fn=expr, arg=arg)
        return expr

    def _motive(self) -> SExpr:
        self.expect("with")
        self.expect("motive")
        return self.parse_expr()

    def _head(self) -> SExpr:
        token = self.peek()
        if token.kind != KEYWORD:
            return self._atom()
        word = token.text
        if word == "name":
            self.advance()
            var = self.expect_ident()
            return SName(span=_join(token.span, var.span), var=var.text)
        if word in ("Gel", "gel"):
            self.advance()
            body = self._atom()
            var = self.expect_ident()
            span = _join(token.span, var.span)
            if word == "Gel":
                return SGelType(span=span, ty=body, var=var.text)
            return SGelIntro(span=span, body=body, var=var.text)
        if word in ("ung", "fst", "snd"):
            self.advance()
            arg = self._atom()
            span = _join(token.span, arg.span)
            if word == "ung":
                return SUng(span=span, bridge=arg)
            return SFst(span=span, pair=arg) if word == "fst" else SSnd(span=span, pair=arg)
        if word in ("Id", "J"):
            self.advance()
            a, b, c = self._atom(), self._atom(), self._atom()
            span = _join(token.span, c.span)
            if word == "Id":
                return SId(span=span, ty=a, lhs=b, rhs=c)
            return SJ(span=span, motive=a, base=b, eq=c)
        if word == "ext":
            self.advance()
            method = self._atom()
            var = self.expect_ident()
            arg = self._atom()
            motive = self._motive() if self.at("with") else None
            end = motive.span if motive is not None else arg.span
            return SExt(span=_join(token.span, end), method=method, var=var.text, arg=arg, motive=motive)
        if word == "indNm":
            self.advance()
            var = self.expect_ident()
            scrutinee, base, step = self._atom(), self._atom(), self._atom()
            motive = self._motive()
            return SIndNm(span=_join(token.span, motive.span), var=var.text, scrutinee=scrutinee,
                          base=base, step=step, motive=motive)
        return self._atom()

    def _atom(self) -> SExpr:
        token = self.peek()
        if token.kind == IDENT:
            self.advance()
            return SVar(span=token.span, name=token.text)
        if token.is_("U"):
            self.advance()
            return SUniverse(span=token.span)
        if token.is_("Nm"):
            self.advance()
            return SNm(span=token.span)
        if token.is_("refl"):
            self.advance()
            return SRefl(span=token.span)
        if token.is_("("):
            self.advance()
            inner = self.parse_expr()
            if self.at(":"):
                self.advance()
                ty = self.parse_expr()
                close = self.expect(")")
                return SAnn(span=_join(token.span, close.span), term=inner, ty=ty)
            items = [inner]
            while self.at(","):
                self.advance()
                items.append(self.parse_expr())
            close = self.expect(")")
            if len(items) == 1:
                return inner
            pair = items[-1]
            for item in reversed(items[:-1]):
                pair = SPair(span=_join(token.span, close.span), fst=item, snd=pair)
            return pair
        raise self.error("expected an expression")


def _close_type(groups: List[Binder], ty: SExpr) -> SExpr:
    for name, dom, span in reversed(groups):
        ty = (SBridgePi(span=_join(span, ty.span), name=name, cod=ty) if dom is None
              else SPi(span=_join(span, ty.span), name=name, dom=dom, cod=ty))
    return ty


def _close_body(groups: List[Binder], body: SExpr) -> SExpr:
    for name, dom, span in reversed(groups):
        body = SLam(span=_join(span, body.span), name=name, dom=dom, body=body, bridge=dom is None)
    return body


def parse(text: str) -> List[SurfaceDecl]:
    """Parse a whole source file."""
    decls = Parser(text).parse_file()
    logger.debug(f"Parsed {len(decls)} declaration(s)")
    return decls


def parse_expr(text: str) -> SExpr:
    parser = Parser(text)
    expr = parser.parse_expr()
    if parser.peek().kind != EOF:
        raise parser.error("unexpected input after the expression")
    return expr


def parse_binder(text: str) -> List[Binder]:
    """`(x : @I)` or `(a b : A)`, as accepted by the REPL's `:assume`."""
    parser = Parser(text)
    binders = parser._group()
    if parser.peek().kind != EOF:
        raise parser.error("unexpected input after the binder")
    return binders
