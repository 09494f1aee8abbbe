"""
Pretty printer from core terms back to concrete syntax.

The output re-parses and re-elaborates to an α-identical term. Binder names
come from the display names carried by the core; a name that would shadow
something visible (an enclosing binder, a global or a keyword) gets a numeric
suffix, and nameless binders that are actually used become `x0`, `x1`, ...
"""

from typing import Iterable, List, Optional, Sequence, Tuple

from src.core.syntax import (
    Aff, Ann, App, BridgeApp, BridgeLam, BridgePi, CName, CtorApp, DataRef, ElimApp,
    Ext, Fst, GelIntro, GelType, GlobalRef, Id, IndNm, J, Lam, NmType, Pair, Pi,
    Refl, Sigma, Snd, Telescope, Term, Ung, Universe, Var, mentions,
)
from src.surface.lexer import KEYWORDS

TOP, ARROW_LHS, APP, ATOM = range(4)


class _Printer:
    def __init__(self, reserved: Iterable[str]):
        self.reserved = set(reserved) | KEYWORDS

    def fresh(self, base: str, scope: Sequence[str], used: bool = True) -> str:
        if base in ("", "_"):
            if not used:
                return "_"
            i = 0
            while f"x{i}" in scope or f"x{i}" in self.reserved:
                i += 1
            return f"x{i}"
        name, n = base, 1
        while name in scope or name in self.reserved:
            name = f"{base}{n}"
            n += 1
        return name

    def context(self, names: Sequence[str]) -> List[str]:
        scope: List[str] = []
        for name in names:
            scope.append(self.fresh(name, scope))
        return scope

    @staticmethod
    def var(v: Var, scope: List[str]) -> str:
        if v.index < len(scope):
            return scope[-1 - v.index]
        return f"#{v.index}"

    def atom(self, t: Term, scope: List[str]) -> str:
        return self.go(t, scope, ATOM)

    def spine(self, head: str, args: Sequence[Term], scope: List[str], prec: int) -> str:
        if not args:
            return head
        text = " ".join([head] + [self.atom(a, scope) for a in args])
        return f"({text})" if prec > APP else text

    def go(self, t: Term, scope: List[str], prec: int) -> str:
        if isinstance(t, Var):
            return self.var(t, scope)
        if isinstance(t, Universe):
            return "U"
        if isinstance(t, NmType):
            return "Nm"
        if isinstance(t, Refl):
            return "refl"
        if isinstance(t, GlobalRef):
            return t.name
        if isinstance(t, Pair):
            return f"({self.go(t.fst, scope, TOP)}, {self.go(t.snd, scope, TOP)})"
        if isinstance(t, Ann):
            return f"({self.go(t.term, scope, TOP)} : {self.go(t.ty, scope, TOP)})"

        if isinstance(t, (Pi, BridgePi, Lam, BridgeLam, Sigma)):
            text = self.binder_form(t, scope)
            return f"({text})" if prec > TOP else text

        if isinstance(t, Ext) and t.family is not None:
            text = (f"ext {self.atom(t.method, scope)} {self.var(t.x, scope)} {self.atom(t.arg, scope)}"
                    f" with motive {self.go(t.family, scope, TOP)}")
            return f"({text})" if prec > TOP else text
        if isinstance(t, IndNm):
            step = Lam(GelType(NmType(), t.x), t.step, name=t.step_name)
            motive = Lam(NmType(), t.motive, name=t.motive_name)
            text = (f"indNm {self.var(t.x, scope)} {self.atom(t.scrutinee, scope)} "
                    f"{self.atom(t.base, scope)} {self.atom(step, scope)} "
                    f"with motive {self.go(motive, scope, TOP)}")
            return f"({text})" if prec > TOP else text

        if isinstance(t, App):
            text = f"{self.go(t.fn, scope, APP)} {self.atom(t.arg, scope)}"
        elif isinstance(t, BridgeApp):
            text = f"{self.go(t.fn, scope, APP)} {self.var(t.x, scope)}"
        elif isinstance(t, Fst):
            text = f"fst {self.atom(t.pair, scope)}"
        elif isinstance(t, Snd):
            text = f"snd {self.atom(t.pair, scope)}"
        elif isinstance(t, CName):
            text = f"name {self.var(t.x, scope)}"
        elif isinstance(t, GelType):
            text = f"Gel {self.atom(t.ty, scope)} {self.var(t.x, scope)}"
        elif isinstance(t, GelIntro):
            text = f"gel {self.atom(t.body, scope)} {self.var(t.x, scope)}"
        elif isinstance(t, Ung):
            text = f"ung {self.atom(t.bridge, scope)}"
        elif isinstance(t, Ext):
            text = f"ext {self.atom(t.method, scope)} {self.var(t.x, scope)} {self.atom(t.arg, scope)}"
        elif isinstance(t, Id):
            text = " ".join(["Id"] + [self.atom(a, scope) for a in (t.ty, t.lhs, t.rhs)])
        elif isinstance(t, J):
            text = " ".join(["J"] + [self.atom(a, scope) for a in (t.motive, t.base, t.eq)])
        elif isinstance(t, DataRef):
            return self.spine(t.name, t.params, scope, prec)
        elif isinstance(t, CtorApp):
            return self.spine(t.name, t.args, scope, prec)
        elif isinstance(t, ElimApp):
            args = (*t.params, t.motive, *t.methods, t.scrutinee)
            return self.spine(t.name, args, scope, prec)
        else:
            raise TypeError(f"cannot print {type(t).__name__}")
        return f"({text})" if prec > APP else text

    def binder_form(self, t: Term, scope: List[str]) -> str:
        if isinstance(t, Pi):
            if not mentions(t.cod, 0):
                lhs = self.go(t.dom, scope, ARROW_LHS)
                if isinstance(t.dom, Ann):
                    lhs = f"({lhs})"
                return f"{lhs} -> {self.go(t.cod, scope + ['_'], TOP)}"
            name = self.fresh(t.name, scope)
            return f"({name} : {self.go(t.dom, scope, TOP)}) -> {self.go(t.cod, scope + [name], TOP)}"
        if isinstance(t, BridgePi):
            if not mentions(t.cod, 0):
                return f"@I -o {self.go(t.cod, scope + ['_'], TOP)}"
            name = self.fresh(t.name, scope)
            return f"({name} : @I) -o {self.go(t.cod, scope + [name], TOP)}"
        if isinstance(t, Sigma):
            name = self.fresh(t.name, scope, used=mentions(t.snd_ty, 0))
            return f"Sig ({name} : {self.go(t.fst_ty, scope, TOP)}). {self.go(t.snd_ty, scope + [name], TOP)}"
        name = self.fresh(t.name, scope, used=mentions(t.body, 0))
        body = self.go(t.body, scope + [name], TOP)
        if isinstance(t, BridgeLam):
            return f"\\({name} : @I). {body}"
        if t.dom is None:
            return f"\\{name}. {body}"
        return f"\\({name} : {self.go(t.dom, scope, TOP)}). {body}"


def pretty_term(t: Term, names: Sequence[str] = (), reserved: Iterable[str] = ()) -> str:
    """Render `t`, whose free variables are named by `names` (outermost first)."""
    printer = _Printer(reserved)
    return printer.go(t, printer.context(names), TOP)


def _telescope(printer: _Printer, gamma: Telescope) -> Tuple[str, List[str]]:
    scope: List[str] = []
    parts = []
    for entry in gamma.entries:
        name = printer.fresh(entry.name, scope)
        if isinstance(entry, Aff):
            shown = "@I"
        else:
            shown = printer.go(entry.type, scope, TOP) if entry.type is not None else "?"
        parts.append(f"({name} : {shown})")
        scope.append(name)
    return " ".join(parts), scope


def pretty_telescope(gamma: Telescope, reserved: Iterable[str] = ()) -> str:
    return _telescope(_Printer(reserved), gamma)[0]


def pretty_decl(decl, reserved: Iterable[str] = ()) -> str:
    """Render an elaborated declaration (definition, postulate or data) as source."""
    printer = _Printer(set(reserved) - {decl.name})
    if hasattr(decl, "ctors"):
        params, scope = _telescope(printer, decl.params)
        head = f"data {decl.name}{' ' + params if params else ''} : U where"
        ctors = "".join(f"\n  | {name} : {printer.go(ty, scope, TOP)}" for name, ty in decl.ctors)
        return head + ctors
    ty = printer.go(decl.type, [], TOP)
    if hasattr(decl, "body"):
        pragma = "{-# golden #-}\n" if getattr(decl, "golden", False) else ""
        return f"{pragma}def {decl.name} : {ty} := {printer.go(decl.body, [], TOP)}"
    return f"postulate {decl.name} : {ty}"


def pretty_decls(decls: Iterable, reserved: Iterable[str] = (), budget: Optional[int] = None) -> str:
    """Render a whole file; the inverse of parse + elaborate up to α."""
    reserved = set(reserved)
    blocks = [f"{{-# budget {budget} #-}}"] if budget is not None else []
    for decl in decls:
        blocks.append(pretty_decl(decl, reserved))
    return "\n\n".join(blocks) + "\n"
