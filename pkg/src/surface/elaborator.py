"""
Elaboration from surface syntax to core terms.

Bidirectional and kernel-assisted: the elaborator resolves names to de Bruijn
positions, decides the kind of every unannotated λ from the type it is checked
against, fills constructor parameters from the expected type and η-expands
partially applied constructors, type formers and eliminators. It reuses the
kernel's whnf and conversion, and every finished declaration is handed to
`check_declaration`, so the kernel stays the only authority on typing.
Errors raised while elaborating a node carry that node's span.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from src.core.datatypes import CoreData, DataDecl, make_data_entry
from src.core.diagnostics import ErrorCode, KernelError, Span, fail
from src.core.syntax import (
    Aff, Ann, App, BridgeApp, BridgeLam, BridgePi, CName, CtorApp, DataRef, ElimApp,
    Ext, Fst, GelIntro, GelType, GlobalRef, Id, IndNm, J, Lam, NmType, Pair, Pi,
    Refl, Sigma, Snd, Telescope, Term, Ung, Universe, Var, forg_term, instantiate,
    instantiate2, is_fresh, mentions, shift,
)
from src.core.typechecker import (
    CoreDecl, CoreDef, CorePostulate, Signature, TypeChecker, check_declaration,
    ext_method_type,
)
from src.surface.syntax_tree import (
    SAnn, SApp, SBridgePi, SData, SDef, SExpr, SExt, SFst, SGelIntro, SGelType, SId,
    SIndNm, SJ, SLam, SName, SNm, SPair, SPi, SPostulate, SPragma, SRefl, SSigma,
    SSnd, SUng, SUniverse, SVar, SurfaceDecl,
)

logger = logging.getLogger(__name__)

Typed = Tuple[Term, Term]
Builder = Callable[[List[Term], int], Term]


@dataclass
class ElaboratedFile:
    """Core declarations of one file and the Signature after the last of them."""
    decls: List[CoreDecl] = field(default_factory=list)
    signature: Signature = field(default_factory=Signature)
    budget: Optional[int] = None

    @property
    def goldens(self) -> List[str]:
        return [d.name for d in self.decls if isinstance(d, CoreDef) and d.golden]

    def definition(self, name: str) -> Optional[CoreDef]:
        for decl in self.decls:
            if isinstance(decl, CoreDef) and decl.name == name:
                return decl
        return None


def _flatten(e: SExpr) -> Tuple[SExpr, List[SExpr]]:
    args: List[SExpr] = []
    while isinstance(e, SApp):
        args.append(e.arg)
        e = e.fn
    args.reverse()
    return e, args


class Elaborator:
    """Surface-to-core translation for one file, extending its Signature as it goes."""

    def __init__(self, signature: Signature, budget: Optional[int] = None):
        self.signature = signature
        self.budget = budget
        self.checker = TypeChecker(signature, budget)

    def _use(self, signature: Signature) -> None:
        self.signature = signature
        self.checker = TypeChecker(signature, self.budget)

    # -- kernel helpers ------------------------------------------------------------

    def whnf(self, ctx: Telescope, t: Term) -> Term:
        return self.checker.whnf(ctx, t)

    def show(self, ctx: Telescope, t: Term) -> str:
        return self.checker.show(ctx, t)

    def _expect_convertible(self, ctx: Telescope, core: Term, actual: Term, expected: Term) -> None:
        if not self.checker.convertible(ctx, actual, expected, Universe()):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"expected `{self.show(ctx, expected)}` but `{self.show(ctx, core)}` "
                       f"has type `{self.show(ctx, actual)}`", telescope=ctx)

    def _affine(self, ctx: Telescope, name: str, span: Span) -> Var:
        """Resolve `name` to an affine entry of `ctx`; term variables raise KindMismatch."""
        index = ctx.lookup(name) if name != "_" else None
        if index is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"unknown bridge variable `{name}`", telescope=ctx, span=span)
        if not isinstance(ctx.entry(index), Aff):
            raise fail(ErrorCode.KIND_MISMATCH,
                       f"`{name}` is a term variable, but a bridge variable is required here",
                       telescope=ctx, span=span)
        return Var(index, name)

    def _require_fresh(self, ctx: Telescope, x: Var, t: Term, code: ErrorCode,
                       what: str, span: Span) -> None:
        """Raise `code` at `span` unless `t` avoids `x` and every cartesian entry after it."""
        if not is_fresh(ctx, x.index, t):
            raise fail(code,
                       f"{what} `{self.show(ctx, t)}` must not mention `{x.name}` "
                       f"or any term variable bound after it", telescope=ctx, span=span)

    # -- entry points ----------------------------------------------------------------

    def infer(self, ctx: Telescope, e: SExpr) -> Typed:
        """Elaborate `e` in synthesis mode.

        Args:
            ctx: Telescope the names in `e` resolve against.
            e: A surface expression.

        Returns:
            The core term and its type.

        Raises:
            KernelError: Located at the span of `e` unless an inner node
                already attached a span.
        """
        try:
            return self._infer(ctx, e)
        except KernelError as err:
            raise err.located(span=e.span)

    def check(self, ctx: Telescope, e: SExpr, ty: Term) -> Term:
        """Elaborate `e` against the core type `ty`.

        Unannotated lambdas take their kind from the weak-head form of `ty`.

        Returns:
            The core term.
        """
        try:
            return self._check(ctx, e, ty)
        except KernelError as err:
            raise err.located(span=e.span)

    def elab_type(self, ctx: Telescope, e: SExpr) -> Term:
        return self.check(ctx, e, Universe())

    # -- synthesis -------------------------------------------------------------------

    def _infer(self, ctx: Telescope, e: SExpr) -> Typed:
        if isinstance(e, (SVar, SApp)):
            return self._spine(ctx, e, None)
        if isinstance(e, SUniverse):
            return Universe(), Universe()
        if isinstance(e, SNm):
            return NmType(), Universe()
        if isinstance(e, SPi):
            name = e.name or "_"
            dom = self.elab_type(ctx, e.dom)
            return Pi(dom, self.elab_type(ctx.cart(name, dom), e.cod), name=name), Universe()
        if isinstance(e, SBridgePi):
            name = e.name or "_"
            return BridgePi(self.elab_type(ctx.aff(name), e.cod), name=name), Universe()
        if isinstance(e, SSigma):
            fst_ty = self.elab_type(ctx, e.fst_ty)
            snd_ty = self.elab_type(ctx.cart(e.name, fst_ty), e.snd_ty)
            return Sigma(fst_ty, snd_ty, name=e.name), Universe()
        if isinstance(e, SLam):
            if e.bridge:
                body, ty = self.infer(ctx.aff(e.name), e.body)
                return BridgeLam(body, name=e.name), BridgePi(ty, name=e.name)
            if e.dom is None:
                raise fail(ErrorCode.AMBIGUOUS_BINDER_KIND,
                           f"cannot tell whether `\\{e.name}` binds a term or a bridge variable; "
                           f"annotate it as `\\({e.name} : A)` or `\\({e.name} : @I)`", telescope=ctx)
            dom = self.elab_type(ctx, e.dom)
            body, ty = self.infer(ctx.cart(e.name, dom), e.body)
            return Lam(dom, body, name=e.name), Pi(dom, ty, name=e.name)
        if isinstance(e, SPair):
            a, a_ty = self.infer(ctx, e.fst)
            b, b_ty = self.infer(ctx, e.snd)
            return Pair(a, b), Sigma(a_ty, shift(b_ty, 1))
        if isinstance(e, (SFst, SSnd)):
            p, p_ty = self.infer(ctx, e.pair)
            sigma = self.whnf(ctx, p_ty)
            if not isinstance(sigma, Sigma):
                raise fail(ErrorCode.TYPE_MISMATCH,
                           f"`{self.show(ctx, p)}` has type `{self.show(ctx, p_ty)}`, which is not a pair type",
                           telescope=ctx)
            if isinstance(e, SFst):
                return Fst(p), sigma.fst_ty
            return Snd(p), instantiate(sigma.snd_ty, Fst(p))
        if isinstance(e, SName):
            return CName(self._affine(ctx, e.var, e.span)), NmType()
        if isinstance(e, SGelType):
            x = self._affine(ctx, e.var, e.span)
            ty = self.elab_type(ctx, e.ty)
            self._require_fresh(ctx, x, ty, ErrorCode.GEL_FRESHNESS_VIOLATION, "the Gel carrier", e.ty.span)
            return GelType(ty, x), Universe()
        if isinstance(e, SGelIntro):
            x = self._affine(ctx, e.var, e.span)
            body, ty = self.infer(ctx, e.body)
            self._require_fresh(ctx, x, body, ErrorCode.GEL_FRESHNESS_VIOLATION,
                                "the argument of gel", e.body.span)
            return GelIntro(body, x), GelType(ty, x)
        if isinstance(e, SUng):
            bridge, _ = self.infer(ctx, e.bridge)
            core = Ung(bridge)
            return core, self.checker.infer(ctx, core)
        if isinstance(e, SExt):
            return self._ext(ctx, e)
        if isinstance(e, SIndNm):
            return self._ind_nm(ctx, e)
        if isinstance(e, SId):
            ty = self.elab_type(ctx, e.ty)
            return Id(ty, self.check(ctx, e.lhs, ty), self.check(ctx, e.rhs, ty)), Universe()
        if isinstance(e, SRefl):
            raise fail(ErrorCode.TYPE_MISMATCH, "cannot infer the type of `refl`; annotate it", telescope=ctx)
        if isinstance(e, SJ):
            return self._j(ctx, e)
        if isinstance(e, SAnn):
            ty = self.elab_type(ctx, e.ty)
            return Ann(self.check(ctx, e.term, ty), ty), ty
        raise TypeError(f"unknown surface node {type(e).__name__}")

    # -- checking ----------------------------------------------------------------------

    def _check(self, ctx: Telescope, e: SExpr, ty: Term) -> Term:
        if isinstance(e, (SVar, SApp)):
            return self._spine(ctx, e, ty)[0]
        if isinstance(e, SLam):
            return self._check_lam(ctx, e, ty)
        if isinstance(e, SPair):
            sigma = self.whnf(ctx, ty)
            if isinstance(sigma, Sigma):
                a = self.check(ctx, e.fst, sigma.fst_ty)
                return Pair(a, self.check(ctx, e.snd, instantiate(sigma.snd_ty, a)))
        if isinstance(e, SRefl):
            self.checker.check(ctx, Refl(), ty)
            return Refl()
        if isinstance(e, SUng):
            target = BridgePi(GelType(shift(ty, 1), Var(0, "x")), name="x")
            return Ung(self.check(ctx, e.bridge, target))
        if isinstance(e, SGelIntro):
            gel = self.whnf(ctx, ty)
            x = self._affine(ctx, e.var, e.span)
            if isinstance(gel, GelType) and gel.x == x:
                body = self.check(ctx, e.body, gel.ty)
                self._require_fresh(ctx, x, body, ErrorCode.GEL_FRESHNESS_VIOLATION,
                                    "the argument of gel", e.body.span)
                return GelIntro(body, x)
        core, actual = self.infer(ctx, e)
        self._expect_convertible(ctx, core, actual, ty)
        return core

    def _check_lam(self, ctx: Telescope, e: SLam, ty: Term) -> Term:
        expected = self.whnf(ctx, ty)
        if e.bridge or (e.dom is None and isinstance(expected, BridgePi)):
            if not isinstance(expected, BridgePi):
                raise fail(ErrorCode.TYPE_MISMATCH,
                           f"the bridge lambda `\\({e.name} : @I)` cannot have type `{self.show(ctx, ty)}`",
                           telescope=ctx)
            return BridgeLam(self.check(ctx.aff(e.name), e.body, expected.cod), name=e.name)
        if isinstance(expected, Pi):
            dom = expected.dom
            if e.dom is not None:
                dom = self.elab_type(ctx, e.dom)
                if not self.checker.convertible(ctx, dom, expected.dom, Universe()):
                    raise fail(ErrorCode.TYPE_MISMATCH,
                               f"binder `{e.name}` is annotated `{self.show(ctx, dom)}` "
                               f"but `{self.show(ctx, expected.dom)}` is expected", telescope=ctx)
            return Lam(dom, self.check(ctx.cart(e.name, dom), e.body, expected.cod), name=e.name)
        if e.dom is None:
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"a lambda cannot have type `{self.show(ctx, ty)}`", telescope=ctx)
        core, actual = self.infer(ctx, e)
        self._expect_convertible(ctx, core, actual, ty)
        return core

    # -- application spines --------------------------------------------------------------

    def _spine(self, ctx: Telescope, e: SExpr, expected: Optional[Term]) -> Typed:
        """Elaborate a head applied to arguments, dispatching on what the head names."""
        head, args = _flatten(e)
        if isinstance(head, SVar):
            local = head.name != "_" and ctx.lookup(head.name) is not None
            kind = None if local else self.signature.kind_of(head.name)
            if kind == "constructor":
                return self._constructor(ctx, head, args, expected)
            if kind == "data":
                entry = self.signature.data(head.name)
                return self._saturate(ctx, entry.former_type, entry.decl.param_count,
                                      lambda full, r: DataRef(head.name, tuple(full)), args, expected)
            if kind == "eliminator":
                entry = self.signature.data_by_eliminator(head.name)
                m, n = entry.decl.param_count, len(entry.decl.ctors)

                def build(full: List[Term], r: int) -> Term:
                    return ElimApp(head.name, tuple(full[:m]), full[m], tuple(full[m + 1:m + 1 + n]), full[-1])

                return self._saturate(ctx, entry.eliminator, m + n + 2, build, args, expected)
            fn, fn_ty = self._resolve(ctx, head, kind)
        else:
            fn, fn_ty = self.infer(ctx, head)
        return self._apply(ctx, fn, fn_ty, args, expected)

    def _resolve(self, ctx: Telescope, head: SVar, kind: Optional[str]) -> Typed:
        index = ctx.lookup(head.name) if head.name != "_" else None
        if index is not None:
            entry = ctx.entry(index)
            if isinstance(entry, Aff):
                raise fail(ErrorCode.KIND_MISMATCH,
                           f"bridge variable `{head.name}` used as a term (write `name {head.name}`)",
                           telescope=ctx, span=head.span)
            return Var(index, head.name), ctx.type_of(index)
        if kind in ("definition", "postulate"):
            return GlobalRef(head.name), self.signature.global_type(head.name)
        raise fail(ErrorCode.UNBOUND_NAME, f"unknown name `{head.name}`", telescope=ctx, span=head.span)

    def _apply(self, ctx: Telescope, fn: Term, fn_ty: Term, args: Sequence[SExpr],
               expected: Optional[Term]) -> Typed:
        """Apply `fn` to `args` one at a time.

        A Pi type checks the next argument against its domain. A bridge type
        takes a bridge variable, which the function must be fresh for.

        Args:
            ctx: Current telescope.
            fn: Core head elaborated so far.
            fn_ty: Type of `fn`.
            args: Remaining surface arguments.
            expected: Type the result is compared with, if known.

        Returns:
            The application and its type (`expected` when given).
        """
        for arg in args:
            fty = self.whnf(ctx, fn_ty)
            if isinstance(fty, Pi):
                a = self.check(ctx, arg, fty.dom)
                fn, fn_ty = App(fn, a), instantiate(fty.cod, a)
            elif isinstance(fty, BridgePi):
                if not isinstance(arg, SVar):
                    raise fail(ErrorCode.KIND_MISMATCH,
                               f"`{self.show(ctx, fn)}` is a bridge and must be applied to a bridge variable",
                               telescope=ctx, span=arg.span)
                x = self._affine(ctx, arg.name, arg.span)
                self._require_fresh(ctx, x, fn, ErrorCode.AFFINITY_VIOLATION, "the bridge", arg.span)
                fn, fn_ty = BridgeApp(fn, x), instantiate(fty.cod, x)
            else:
                raise fail(ErrorCode.NOT_A_FUNCTION,
                           f"`{self.show(ctx, fn)}` of type `{self.show(ctx, fty)}` is not a function",
                           telescope=ctx, span=arg.span)
        if expected is not None:
            self._expect_convertible(ctx, fn, fn_ty, expected)
            return fn, expected
        return fn, fn_ty

    def _saturate(self, ctx: Telescope, closed_type: Term, arity: int, build: Builder,
                  args: Sequence[SExpr], expected: Optional[Term]) -> Typed:
        """Apply a head of known arity, η-expanding when too few arguments are given."""
        core_args: List[Term] = []
        fn_ty = closed_type
        for arg in args[:arity]:
            fty = self.whnf(ctx, fn_ty)
            a = self.check(ctx, arg, fty.dom)
            core_args.append(a)
            fn_ty = instantiate(fty.cod, a)
        missing = arity - len(core_args)
        binders: List[Tuple[str, Term]] = []
        inner, ty = ctx, fn_ty
        for _ in range(missing):
            fty = self.whnf(inner, ty)
            binders.append((fty.name, fty.dom))
            inner = inner.cart(fty.name, fty.dom)
            ty = fty.cod
        full = [shift(a, missing) for a in core_args]
        full += [Var(missing - 1 - i, name) for i, (name, _) in enumerate(binders)]
        core = build(full, missing)
        for name, dom in reversed(binders):
            core = Lam(dom, core, name=name)
        return self._apply(ctx, core, fn_ty, args[arity:], expected)

    def _constructor(self, ctx: Telescope, head: SVar, args: Sequence[SExpr],
                     expected: Optional[Term]) -> Typed:
        entry = self.signature.data_by_constructor(head.name)
        _, sig = entry.decl.ctor(head.name)
        if entry.decl.param_count == 0:
            params: Tuple[Term, ...] = ()
        elif expected is not None:
            params = self._params_from_expected(ctx, expected, max(sig.arity - len(args), 0), entry.name, head.name)
        else:
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"cannot infer the parameters of `{head.name}`; use it where its type is known",
                       telescope=ctx, span=head.span)
        fn_ty = entry.ctor_type(head.name)
        for p in params:
            fn_ty = instantiate(self.whnf(ctx, fn_ty).cod, p)

        def build(full: List[Term], r: int) -> Term:
            return CtorApp(head.name, tuple(full), tuple(shift(p, r) for p in params))

        return self._saturate(ctx, fn_ty, sig.arity, build, args, expected)

    def _params_from_expected(self, ctx: Telescope, expected: Term, missing: int,
                              data: str, ctor: str) -> Tuple[Term, ...]:
        """Read the data parameters of a constructor off the type it is checked against.

        `missing` arguments are still to be supplied by η-expansion, so the
        expected type is opened under that many Pi binders first.
        """
        inner, ty = ctx, expected
        for _ in range(missing):
            fty = self.whnf(inner, ty)
            if not isinstance(fty, Pi):
                break
            inner, ty = inner.cart(fty.name, fty.dom), fty.cod
        target = self.whnf(inner, ty)
        if (not isinstance(target, DataRef) or target.name != data
                or any(mentions(p, i) for p in target.params for i in range(missing))):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"constructor `{ctor}` builds a `{data}`, but `{self.show(ctx, expected)}` is expected",
                       telescope=ctx)
        return tuple(shift(p, -missing) for p in target.params)

    # -- nominal eliminators -------------------------------------------------------------

    def _ext(self, ctx: Telescope, e: SExt) -> Typed:
        """Elaborate `ext`.

        With `with motive` the family comes from the motive and the method is
        checked against it. Otherwise it is read off the inferred method type.
        Both the method and the motive must be fresh for the bridge variable.
        """
        x = self._affine(ctx, e.var, e.span)
        if e.motive is not None:
            family, _ = self.infer(ctx, e.motive)
            self._require_fresh(ctx, x, family, ErrorCode.AFFINITY_VIOLATION, "the ext motive", e.motive.span)
            try:
                dom, cod = self.checker._family_parts(ctx, family)
            except KernelError as err:
                raise err.located(span=e.motive.span)
            method = self.check(ctx, e.method, ext_method_type(dom, cod))
        else:
            family = None
            method, method_ty = self.infer(ctx, e.method)
            try:
                dom, cod = self.checker.ext_family_of_method(ctx, method_ty)
            except KernelError as err:
                raise err.located(span=e.method.span)
        self._require_fresh(ctx, x, method, ErrorCode.AFFINITY_VIOLATION, "the ext method", e.method.span)
        arg = self.check(ctx, e.arg, instantiate(dom, x))
        return Ext(method, x, arg, family), instantiate2(cod, x, arg)

    def _ind_nm(self, ctx: Telescope, e: SIndNm) -> Typed:
        x = self._affine(ctx, e.var, e.span)
        motive_src = e.motive
        if isinstance(motive_src, SLam) and not motive_src.bridge:
            if motive_src.dom is not None:
                self._binder_is(ctx, motive_src, NmType())
            motive_name = motive_src.name
            motive = self.elab_type(ctx.cart(motive_name, NmType()), motive_src.body)
        else:
            motive_name = "z"
            whole = self.check(ctx, motive_src, Pi(NmType(), Universe(), name="z"))
            motive = App(shift(whole, 1), Var(0, "z"))
        scrutinee = self.check(ctx, e.scrutinee, NmType())
        base = self.check(ctx, e.base, instantiate(motive, CName(x)))

        gel_nm = GelType(NmType(), x)
        step_src = e.step
        step_name = step_src.name if isinstance(step_src, SLam) and not step_src.bridge else "g"
        expected = instantiate(shift(motive, 1, cutoff=1),
                               forg_term(Var(x.index + 1, x.name), Var(0, step_name)))
        if isinstance(step_src, SLam) and not step_src.bridge:
            if step_src.dom is not None:
                self._binder_is(ctx, step_src, gel_nm)
            step = self.check(ctx.cart(step_name, gel_nm), step_src.body, expected)
        else:
            whole = self.check(ctx, step_src, Pi(gel_nm, expected, name=step_name))
            step = App(shift(whole, 1), Var(0, step_name))
        core = IndNm(x, motive, scrutinee, base, step, motive_name=motive_name, step_name=step_name)
        return core, instantiate(motive, scrutinee)

    def _binder_is(self, ctx: Telescope, lam: SLam, ty: Term) -> None:
        dom = self.elab_type(ctx, lam.dom)
        if not self.checker.convertible(ctx, dom, ty, Universe()):
            raise fail(ErrorCode.MOTIVE_MISMATCH,
                       f"binder `{lam.name}` must have type `{self.show(ctx, ty)}`",
                       telescope=ctx, span=lam.span)

    def _j(self, ctx: Telescope, e: SJ) -> Typed:
        eq, eq_ty = self.infer(ctx, e.eq)
        ident = self.whnf(ctx, eq_ty)
        if not isinstance(ident, Id):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`J` eliminates an identity proof, got `{self.show(ctx, eq_ty)}`",
                       telescope=ctx, span=e.eq.span)
        motive_ty = Pi(ident.ty, Pi(Id(shift(ident.ty, 1), shift(ident.lhs, 1), Var(0, "y")),
                                    Universe(), name="p"), name="y")
        motive = self.check(ctx, e.motive, motive_ty)
        base = self.check(ctx, e.base, App(App(motive, ident.lhs), Refl()))
        return J(motive, base, eq), App(App(motive, ident.rhs), eq)

    # -- declarations ------------------------------------------------------------------------

    def declaration(self, decl: SurfaceDecl, golden: bool = False) -> CoreDecl:
        """Elaborate one declaration without checking it; `run` hands it to the kernel."""
        empty = Telescope()
        if isinstance(decl, SDef):
            ty = self.elab_type(empty, decl.type)
            return CoreDef(decl.name, ty, self.check(empty, decl.body, ty), span=decl.span, golden=golden)
        if isinstance(decl, SPostulate):
            return CorePostulate(decl.name, self.elab_type(empty, decl.type), span=decl.span)
        return self._data(decl)

    def _data(self, decl: SData) -> CoreData:
        params = Telescope()
        for name, dom in decl.params:
            if dom is None:
                raise fail(ErrorCode.KIND_MISMATCH,
                           f"parameter `{name}` of `{decl.name}` must be a term variable", span=decl.span)
            params = params.cart(name, self.elab_type(params, dom))
        outer = self.signature
        # the type former is visible while its constructors are elaborated
        self._use(outer.extend(make_data_entry(outer, DataDecl(decl.name, params, ()))))
        try:
            ctors = []
            for ctor in decl.ctors:
                try:
                    ctors.append((ctor.name, self.elab_type(params, ctor.type)))
                except KernelError as err:
                    raise err.located(span=ctor.span)
        finally:
            self._use(outer)
        return CoreData(decl.name, params, tuple(ctors), span=decl.span,
                        ctor_spans=tuple(c.span for c in decl.ctors))

    def run(self, decls: Sequence[SurfaceDecl]) -> ElaboratedFile:
        """Elaborate and check `decls` in order, applying pragmas as they appear.

        Returns:
            An ElaboratedFile whose signature includes every declaration.

        Raises:
            KernelError: Located at the failing declaration.
        """
        result = ElaboratedFile(signature=self.signature)
        golden = False
        for decl in decls:
            if isinstance(decl, SPragma):
                golden = self._pragma(decl, result) or golden
                continue
            try:
                core = self.declaration(decl, golden)
            except KernelError as err:
                raise err.located(span=decl.span, declaration=decl.name)
            golden = False
            self._use(check_declaration(self.signature, core, self.budget))
            result.decls.append(core)
            result.signature = self.signature
        logger.info(f"Elaborated {len(result.decls)} declaration(s)")
        return result

    def _pragma(self, pragma: SPragma, result: ElaboratedFile) -> bool:
        if pragma.key == "golden":
            return True
        if pragma.key == "budget":
            if not (pragma.value or "").isdigit() or int(pragma.value) <= 0:
                raise fail(ErrorCode.SYNTAX_ERROR, "`budget` expects a positive integer", span=pragma.span)
            result.budget = int(pragma.value)
            if self.budget is None:
                self.budget = result.budget
                self._use(self.signature)
            return False
        logger.warning(f"Ignoring unknown pragma `{pragma.key}` at line {pragma.span.line}")
        return False


def elaborate(signature: Signature, decls: Sequence[SurfaceDecl],
              budget: Optional[int] = None) -> ElaboratedFile:
    """Elaborate and check a parsed file on top of `signature`.

    Args:
        signature: Library and earlier files.
        decls: Output of the parser.
        budget: Step budget; overrides a `{-# budget N #-}` pragma when given.

    Returns:
        The ElaboratedFile for `decls`.
    """
    return Elaborator(signature, budget).run(decls)


def elaborate_expr(signature: Signature, ctx: Telescope, expr: SExpr,
                   expected: Optional[Term] = None, budget: Optional[int] = None) -> Typed:
    """Elaborate one expression; checks against `expected` when given, else infers."""
    elaborator = Elaborator(signature, budget)
    if expected is not None:
        return elaborator.check(ctx, expr, expected), expected
    return elaborator.infer(ctx, expr)


def elaborate_type(signature: Signature, ctx: Telescope, expr: SExpr) -> Term:
    return Elaborator(signature).elab_type(ctx, expr)
