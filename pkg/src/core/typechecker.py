"""
Bidirectional typechecker for nullary PTT.

Covers the nominal rules (bridge types, extent, Gel, the name type and name
induction), the MLTT fragment (Π, Σ, a single universe with U : U, Id/J) and
data declarations routed through `datatypes`. Premises stated in a restricted
context Γ|x are enforced by testing freshness and then strengthening the
subterm into Γ|x before checking it there.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.core.datatypes import (
    ArgKind, CoreData, DataEntry, check_positivity, make_data_entry,
)
from src.core.diagnostics import ErrorCode, KernelError, Span, fail
from src.core.evaluator import Evaluator
from src.core.syntax import (
    Aff, Ann, App, BridgeApp, BridgeLam, BridgePi, CName, Cart, CtorApp, DataRef,
    ElimApp, Ext, Fst, GelIntro, GelType, GlobalRef, Id, IndNm, J, Lam, NmType,
    Pair, Pi, Refl, Sigma, Snd, Telescope, Term, Ung, Universe, Var,
    forg_term, instantiate, instantiate2, is_fresh, mentions, rename, restrict,
    shift, strengthen, substitute, weaken_from_restriction,
)
from src.surface.pretty import pretty_term

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term


@dataclass(frozen=True)
class Postulate:
    name: str
    type: Term


Declaration = Union[Definition, Postulate, DataEntry]


@dataclass(frozen=True)
class CoreDef:
    name: str
    type: Term
    body: Term
    span: Optional[Span] = None
    golden: bool = False


@dataclass(frozen=True)
class CorePostulate:
    name: str
    type: Term
    span: Optional[Span] = None


CoreDecl = Union[CoreDef, CorePostulate, CoreData]


def _declared_names(entry: Declaration) -> List[str]:
    if isinstance(entry, DataEntry):
        return entry.global_names()
    return [entry.name]


class Signature:
    """Ordered, append-only map of checked global declarations.

    `extend` returns a new Signature; an existing one is never mutated.
    """

    def __init__(self) -> None:
        self._entries: Dict[str, Declaration] = {}
        self._owners: Dict[str, str] = {}

    def extend(self, entry: Declaration) -> "Signature":
        """Return a new Signature with `entry` appended.

        Raises:
            KernelError: DuplicateName if `entry` or one of its constructors or
                its eliminator reuses a name already in scope.
        """
        for name in _declared_names(entry):
            if name in self._owners:
                raise fail(ErrorCode.DUPLICATE_NAME, f"`{name}` is already defined")
        extended = Signature()
        extended._entries = {**self._entries, entry.name: entry}
        extended._owners = {**self._owners, **{n: entry.name for n in _declared_names(entry)}}
        return extended

    def __contains__(self, name: str) -> bool:
        return name in self._owners

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> List[str]:
        return list(self._entries)

    def global_names(self) -> List[str]:
        return list(self._owners)

    def entries(self) -> List[Declaration]:
        return list(self._entries.values())

    def get(self, name: str) -> Optional[Declaration]:
        return self._entries.get(name)

    def owner(self, name: str) -> Optional[Declaration]:
        owner = self._owners.get(name)
        return self._entries[owner] if owner is not None else None

    def kind_of(self, name: str) -> Optional[str]:
        """One of definition, postulate, data, constructor, eliminator; None if unbound."""
        entry = self.owner(name)
        if entry is None:
            return None
        if isinstance(entry, Definition):
            return "definition"
        if isinstance(entry, Postulate):
            return "postulate"
        if name == entry.name:
            return "data"
        if name == entry.decl.eliminator_name:
            return "eliminator"
        return "constructor"

    def definition_body(self, name: str) -> Optional[Term]:
        entry = self._entries.get(name)
        return entry.body if isinstance(entry, Definition) else None

    def global_type(self, name: str) -> Optional[Term]:
        entry = self._entries.get(name)
        return entry.type if isinstance(entry, (Definition, Postulate)) else None

    def data(self, name: str) -> Optional[DataEntry]:
        entry = self._entries.get(name)
        return entry if isinstance(entry, DataEntry) else None

    def data_by_constructor(self, name: str) -> Optional[DataEntry]:
        return self.owner(name) if self.kind_of(name) == "constructor" else None

    def data_by_eliminator(self, name: str) -> Optional[DataEntry]:
        return self.owner(name) if self.kind_of(name) == "eliminator" else None


def ext_method_type(dom: Term, cod: Term) -> Term:
    """(a' : (z:𝕀) ⊸ A) → (y:𝕀) ⊸ B[a' y / a], from A under y and B under (y, a)."""
    body = substitute(cod, lambda i: BridgeApp(Var(1, "a'"), Var(0, "y")) if i == 0
                      else Var(0, "y") if i == 1 else Var(i))
    return Pi(BridgePi(dom, name="z"), BridgePi(body, name="y"), name="a'")


class TypeChecker:
    """Typing rules over one Signature.

    Every conversion test and weak-head reduction goes through a single
    Evaluator, so `budget` bounds the reduction steps of one declaration.
    """

    def __init__(self, signature: Signature, budget: Optional[int] = None):
        self.signature = signature
        self.evaluator = Evaluator(signature, budget=budget)

    # -- helpers -------------------------------------------------------------

    def whnf(self, ctx: Telescope, t: Term) -> Term:
        return self.evaluator.whnf(ctx, t)

    def convertible(self, ctx: Telescope, t: Term, u: Term, ty: Optional[Term] = None) -> bool:
        return self.evaluator.convertible(ctx, t, u, ty)

    def show(self, ctx: Telescope, t: Term) -> str:
        return pretty_term(t, ctx.names())

    def _mismatch(self, ctx: Telescope, t: Term, expected: Term, actual: Optional[Term] = None) -> KernelError:
        if actual is None:
            message = f"`{self.show(ctx, t)}` does not check against `{self.show(ctx, expected)}`"
        else:
            message = (f"expected `{self.show(ctx, expected)}` but `{self.show(ctx, t)}` "
                       f"has type `{self.show(ctx, actual)}`")
        return fail(ErrorCode.TYPE_MISMATCH, message, telescope=ctx)

    def _affine_var(self, ctx: Telescope, x: Var) -> None:
        entry = ctx.entry(x.index)
        if not isinstance(entry, Aff):
            raise fail(ErrorCode.KIND_MISMATCH,
                       f"`{entry.name}` is a term variable, but a bridge variable is required here",
                       telescope=ctx)

    def _restricted(self, ctx: Telescope, x: Var, t: Term, code: ErrorCode,
                    what: str) -> Tuple[Telescope, Term]:
        """Move `t` from `ctx` into the restriction `ctx|x`.

        Args:
            ctx: The telescope `t` is written in.
            x: An affine variable of `ctx`.
            t: The premise that must hold in `ctx|x`.
            code: Error code raised when `t` is not fresh for `x`.
            what: How the message names `t`.

        Returns:
            The restricted telescope and `t` strengthened into it.
        """
        if not is_fresh(ctx, x.index, t):
            name = ctx.entry(x.index).name
            raise fail(code,
                       f"{what} `{self.show(ctx, t)}` must not mention `{name}` "
                       f"or any term variable bound after it", telescope=ctx)
        return restrict(ctx, x.index), strengthen(ctx, x.index, t)

    # -- public rules -----------------------------------------------------------

    def check_type(self, ctx: Telescope, t: Term) -> None:
        """Check that `t` is a type, i.e. has type `U`; raises UniverseExpected otherwise."""
        if isinstance(t, (Lam, BridgeLam, Pair, Refl, CName, GelIntro)):
            raise fail(ErrorCode.UNIVERSE_EXPECTED, f"`{self.show(ctx, t)}` is not a type", telescope=ctx)
        ty = self.infer(ctx, t)
        if not isinstance(self.whnf(ctx, ty), Universe):
            raise fail(ErrorCode.UNIVERSE_EXPECTED,
                       f"`{self.show(ctx, t)}` has type `{self.show(ctx, ty)}`, not `U`", telescope=ctx)

    def check_telescope(self, gamma: Telescope) -> None:
        """Check every cartesian entry type against the prefix before it.

        Affine entries carry no type. Any failure is reported as
        IllFormedEntryType naming the offending entry.
        """
        prefix = Telescope()
        for entry in gamma.entries:
            if isinstance(entry, Cart):
                if entry.type is None:
                    raise fail(ErrorCode.ILL_FORMED_ENTRY_TYPE, f"`{entry.name}` has no type", telescope=prefix)
                try:
                    self.check_type(prefix, entry.type)
                except KernelError as err:
                    raise fail(ErrorCode.ILL_FORMED_ENTRY_TYPE,
                               f"the type of `{entry.name}` is ill-formed: {err.diagnostic.message}",
                               telescope=prefix) from err
            prefix = prefix.extend(entry)

    def infer(self, ctx: Telescope, t: Term) -> Term:
        """Synthesize the type of `t` in `ctx`.

        Dispatches to the `_infer_<Node>` rule for the term former of `t`.

        Args:
            ctx: Telescope of cartesian and affine entries `t` is checked in.
            t: A core term.

        Returns:
            The type of `t`, not necessarily in weak-head normal form.

        Raises:
            KernelError: When no rule applies or a premise fails.
        """
        rule = getattr(self, f"_infer_{type(t).__name__}", None)
        if rule is None:
            raise fail(ErrorCode.TYPE_MISMATCH, f"cannot infer a type for `{self.show(ctx, t)}`", telescope=ctx)
        return rule(ctx, t)

    def check(self, ctx: Telescope, t: Term, ty: Term) -> None:
        """Check `t` against `ty` in `ctx`.

        Lambdas, bridge lambdas, pairs, `refl` and unannotated constructor
        applications are checked against the weak-head form of `ty`. Every
        other term is inferred and compared with `ty` up to conversion.

        Raises:
            KernelError: TypeMismatch, or the error of the failing premise.
        """
        if isinstance(t, Lam):
            expected = self.whnf(ctx, ty)
            if not isinstance(expected, Pi):
                raise self._mismatch(ctx, t, expected)
            if t.dom is not None:
                self.check_type(ctx, t.dom)
                if not self.convertible(ctx, t.dom, expected.dom, Universe()):
                    raise fail(ErrorCode.TYPE_MISMATCH,
                               f"binder `{t.name}` is annotated `{self.show(ctx, t.dom)}` "
                               f"but `{self.show(ctx, expected.dom)}` is expected", telescope=ctx)
            self.check(ctx.cart(t.name, expected.dom), t.body, expected.cod)
            return
        if isinstance(t, BridgeLam):
            expected = self.whnf(ctx, ty)
            if not isinstance(expected, BridgePi):
                raise self._mismatch(ctx, t, expected)
            self.check(ctx.aff(t.name), t.body, expected.cod)
            return
        if isinstance(t, Pair):
            expected = self.whnf(ctx, ty)
            if not isinstance(expected, Sigma):
                raise self._mismatch(ctx, t, expected)
            self.check(ctx, t.fst, expected.fst_ty)
            self.check(ctx, t.snd, instantiate(expected.snd_ty, t.fst))
            return
        if isinstance(t, Refl):
            expected = self.whnf(ctx, ty)
            if not isinstance(expected, Id):
                raise self._mismatch(ctx, t, expected)
            if not self.convertible(ctx, expected.lhs, expected.rhs, expected.ty):
                raise fail(ErrorCode.TYPE_MISMATCH,
                           f"`refl` needs `{self.show(ctx, expected.lhs)}` and "
                           f"`{self.show(ctx, expected.rhs)}` to be definitionally equal", telescope=ctx)
            return
        if isinstance(t, CtorApp) and t.params is None:
            expected = self.whnf(ctx, ty)
            entry = self.signature.data_by_constructor(t.name)
            if entry is None:
                raise fail(ErrorCode.UNBOUND_NAME, f"unknown constructor `{t.name}`", telescope=ctx)
            if not isinstance(expected, DataRef) or expected.name != entry.name:
                raise self._mismatch(ctx, t, expected)
            self._ctor_spine(ctx, entry, t.name, expected.params, t.args)
            return
        actual = self.infer(ctx, t)
        if not self.convertible(ctx, actual, ty, Universe()):
            raise self._mismatch(ctx, t, ty, actual)

    # -- spines --------------------------------------------------------------

    def _apply_spine(self, ctx: Telescope, fn_type: Term, args: Sequence[Term]) -> Term:
        for arg in args:
            fty = self.whnf(ctx, fn_type)
            if not isinstance(fty, Pi):
                raise fail(ErrorCode.NOT_A_FUNCTION,
                           f"too many arguments: `{self.show(ctx, fty)}` is not a function type", telescope=ctx)
            self.check(ctx, arg, fty.dom)
            fn_type = instantiate(fty.cod, arg)
        return fn_type

    def _ctor_spine(self, ctx: Telescope, entry: DataEntry, name: str,
                    params: Sequence[Term], args: Sequence[Term]) -> Term:
        _, sig = entry.decl.ctor(name)
        if len(args) != sig.arity or len(params) != entry.decl.param_count:
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"constructor `{name}` takes {sig.arity} argument(s), got {len(args)}", telescope=ctx)
        return self._apply_spine(ctx, entry.ctor_type(name), tuple(params) + tuple(args))

    # -- inference rules ---------------------------------------------------------

    def _infer_Var(self, ctx: Telescope, t: Var) -> Term:
        entry = ctx.entry(t.index)
        if isinstance(entry, Aff):
            raise fail(ErrorCode.KIND_MISMATCH,
                       f"bridge variable `{entry.name}` used as a term (write `name {entry.name}`)",
                       telescope=ctx)
        ty = ctx.type_of(t.index)
        if ty is None:
            raise fail(ErrorCode.ILL_FORMED_ENTRY_TYPE, f"`{entry.name}` has no type", telescope=ctx)
        return ty

    def _infer_Universe(self, ctx: Telescope, t: Term) -> Term:
        return Universe()

    def _infer_NmType(self, ctx: Telescope, t: Term) -> Term:
        return Universe()

    def _infer_Pi(self, ctx: Telescope, t: Pi) -> Term:
        self.check_type(ctx, t.dom)
        self.check_type(ctx.cart(t.name, t.dom), t.cod)
        return Universe()

    def _infer_Sigma(self, ctx: Telescope, t: Sigma) -> Term:
        self.check_type(ctx, t.fst_ty)
        self.check_type(ctx.cart(t.name, t.fst_ty), t.snd_ty)
        return Universe()

    def _infer_BridgePi(self, ctx: Telescope, t: BridgePi) -> Term:
        self.check_type(ctx.aff(t.name), t.cod)
        return Universe()

    def _infer_Lam(self, ctx: Telescope, t: Lam) -> Term:
        if t.dom is None:
            raise fail(ErrorCode.AMBIGUOUS_BINDER_KIND,
                       f"cannot infer the type of the unannotated binder `{t.name}`", telescope=ctx)
        self.check_type(ctx, t.dom)
        return Pi(t.dom, self.infer(ctx.cart(t.name, t.dom), t.body), name=t.name)

    def _infer_BridgeLam(self, ctx: Telescope, t: BridgeLam) -> Term:
        return BridgePi(self.infer(ctx.aff(t.name), t.body), name=t.name)

    def _infer_App(self, ctx: Telescope, t: App) -> Term:
        fty = self.whnf(ctx, self.infer(ctx, t.fn))
        if not isinstance(fty, Pi):
            hint = " (a bridge takes a bridge variable)" if isinstance(fty, BridgePi) else ""
            raise fail(ErrorCode.NOT_A_FUNCTION,
                       f"`{self.show(ctx, t.fn)}` of type `{self.show(ctx, fty)}` cannot be applied "
                       f"to `{self.show(ctx, t.arg)}`{hint}", telescope=ctx)
        self.check(ctx, t.arg, fty.dom)
        return instantiate(fty.cod, t.arg)

    def _infer_BridgeApp(self, ctx: Telescope, t: BridgeApp) -> Term:
        self._affine_var(ctx, t.x)
        rctx, fn = self._restricted(ctx, t.x, t.fn, ErrorCode.AFFINITY_VIOLATION, "the bridge")
        fty = self.whnf(rctx, self.infer(rctx, fn))
        if not isinstance(fty, BridgePi):
            raise fail(ErrorCode.NOT_A_FUNCTION,
                       f"`{self.show(ctx, t.fn)}` is applied to bridge variable "
                       f"`{ctx.entry(t.x.index).name}` but has type `{self.show(rctx, fty)}`", telescope=ctx)
        cod = weaken_from_restriction(ctx, t.x.index, fty.cod, skip=1)
        return instantiate(cod, t.x)

    def _infer_Pair(self, ctx: Telescope, t: Pair) -> Term:
        return Sigma(self.infer(ctx, t.fst), shift(self.infer(ctx, t.snd), 1))

    def _infer_Fst(self, ctx: Telescope, t: Fst) -> Term:
        ty = self.whnf(ctx, self.infer(ctx, t.pair))
        if not isinstance(ty, Sigma):
            raise fail(ErrorCode.TYPE_MISMATCH, f"`fst` of a non-pair `{self.show(ctx, t.pair)}`", telescope=ctx)
        return ty.fst_ty

    def _infer_Snd(self, ctx: Telescope, t: Snd) -> Term:
        ty = self.whnf(ctx, self.infer(ctx, t.pair))
        if not isinstance(ty, Sigma):
            raise fail(ErrorCode.TYPE_MISMATCH, f"`snd` of a non-pair `{self.show(ctx, t.pair)}`", telescope=ctx)
        return instantiate(ty.snd_ty, Fst(t.pair))

    def _infer_CName(self, ctx: Telescope, t: CName) -> Term:
        self._affine_var(ctx, t.x)
        return NmType()

    def _infer_GelType(self, ctx: Telescope, t: GelType) -> Term:
        self._affine_var(ctx, t.x)
        rctx, ty = self._restricted(ctx, t.x, t.ty, ErrorCode.GEL_FRESHNESS_VIOLATION, "the Gel carrier")
        self.check_type(rctx, ty)
        return Universe()

    def _infer_GelIntro(self, ctx: Telescope, t: GelIntro) -> Term:
        self._affine_var(ctx, t.x)
        rctx, body = self._restricted(ctx, t.x, t.body, ErrorCode.GEL_FRESHNESS_VIOLATION, "the argument of gel")
        carrier = self.infer(rctx, body)
        return GelType(weaken_from_restriction(ctx, t.x.index, carrier), t.x)

    def _infer_Ung(self, ctx: Telescope, t: Ung) -> Term:
        ty = self.whnf(ctx, self.infer(ctx, t.bridge))
        if not isinstance(ty, BridgePi):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`ung` expects a bridge into a Gel type, got `{self.show(ctx, ty)}`", telescope=ctx)
        inner = ctx.aff(ty.name)
        cod = self.whnf(inner, ty.cod)
        if not isinstance(cod, GelType) or cod.x.index != 0:
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`ung` expects `(x : @I) -o Gel A x`, got `{self.show(ctx, ty)}`", telescope=ctx)
        if mentions(cod.ty, 0):
            raise fail(ErrorCode.GEL_FRESHNESS_VIOLATION,
                       f"the carrier `{self.show(inner, cod.ty)}` depends on the bridge variable", telescope=ctx)
        return shift(cod.ty, -1)

    def _family_parts(self, ctx: Telescope, family: Term) -> Tuple[Term, Term]:
        """Split an explicit ext motive `\\y. \\(a : A). B` into A (under y) and B (under y, a)."""
        if not (isinstance(family, BridgeLam) and isinstance(family.body, Lam)
                and family.body.dom is not None):
            raise fail(ErrorCode.MOTIVE_MISMATCH,
                       "an ext motive must have the shape `\\(y : @I). \\(a : A). B`", telescope=ctx)
        lam = family.body
        over_y = ctx.aff(family.name)
        self.check_type(over_y, lam.dom)
        self.check_type(over_y.cart(lam.name, lam.dom), lam.body)
        return lam.dom, lam.body

    def ext_family_of_method(self, ctx: Telescope, method_type: Term) -> Tuple[Term, Term]:
        """Read A (under y) and B (under y, a) off a method type `(a' : 𝕀 ⊸ A) → 𝕀 ⊸ B`."""
        mty = self.whnf(ctx, method_type)
        dom = self.whnf(ctx, mty.dom) if isinstance(mty, Pi) else None
        if not isinstance(dom, BridgePi):
            raise fail(ErrorCode.MOTIVE_MISMATCH,
                       f"the method of ext must take a bridge, but has type `{self.show(ctx, mty)}`",
                       telescope=ctx)
        cod = self.whnf(ctx.cart(mty.name, mty.dom), mty.cod)
        if not isinstance(cod, BridgePi):
            raise fail(ErrorCode.MOTIVE_MISMATCH,
                       f"the method of ext must return a bridge, but has type `{self.show(ctx, mty)}`",
                       telescope=ctx)
        if mentions(cod.cod, 1):
            raise fail(ErrorCode.MOTIVE_MISMATCH,
                       "the result type of the ext method depends on its argument; add `with motive`",
                       telescope=ctx)
        swap = {0: 1, 1: 0}
        return dom.cod, rename(cod.cod, lambda i: swap.get(i, i))

    def _infer_Ext(self, ctx: Telescope, t: Ext) -> Term:
        self._affine_var(ctx, t.x)
        rctx, method = self._restricted(ctx, t.x, t.method, ErrorCode.AFFINITY_VIOLATION, "the ext method")
        if t.family is not None:
            _, family = self._restricted(ctx, t.x, t.family, ErrorCode.AFFINITY_VIOLATION, "the ext motive")
            dom, cod = self._family_parts(rctx, family)
            self.check(rctx, method, ext_method_type(dom, cod))
        else:
            dom, cod = self.ext_family_of_method(rctx, self.infer(rctx, method))
        dom = weaken_from_restriction(ctx, t.x.index, dom, skip=1)
        cod = weaken_from_restriction(ctx, t.x.index, cod, skip=2)
        self.check(ctx, t.arg, instantiate(dom, t.x))
        return instantiate2(cod, t.x, t.arg)

    def _infer_IndNm(self, ctx: Telescope, t: IndNm) -> Term:
        self._affine_var(ctx, t.x)
        self.check(ctx, t.scrutinee, NmType())
        self.check_type(ctx.cart(t.motive_name, NmType()), t.motive)
        self.check(ctx, t.base, instantiate(t.motive, CName(t.x)))
        step_ctx = ctx.cart(t.step_name, GelType(NmType(), t.x))
        x_inner = Var(t.x.index + 1, t.x.name)
        expected = instantiate(shift(t.motive, 1, cutoff=1), forg_term(x_inner, Var(0, t.step_name)))
        self.check(step_ctx, t.step, expected)
        return instantiate(t.motive, t.scrutinee)

    def _infer_Id(self, ctx: Telescope, t: Id) -> Term:
        self.check_type(ctx, t.ty)
        self.check(ctx, t.lhs, t.ty)
        self.check(ctx, t.rhs, t.ty)
        return Universe()

    def _infer_Refl(self, ctx: Telescope, t: Refl) -> Term:
        raise fail(ErrorCode.TYPE_MISMATCH, "cannot infer the type of `refl`; annotate it", telescope=ctx)

    def _infer_J(self, ctx: Telescope, t: J) -> Term:
        ety = self.whnf(ctx, self.infer(ctx, t.eq))
        if not isinstance(ety, Id):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`J` eliminates an identity proof, got `{self.show(ctx, ety)}`", telescope=ctx)
        motive_type = Pi(ety.ty, Pi(Id(shift(ety.ty, 1), shift(ety.lhs, 1), Var(0, "y")),
                                    Universe(), name="p"), name="y")
        self.check(ctx, t.motive, motive_type)
        self.check(ctx, t.base, App(App(t.motive, ety.lhs), Refl()))
        return App(App(t.motive, ety.rhs), t.eq)

    def _infer_DataRef(self, ctx: Telescope, t: DataRef) -> Term:
        entry = self.signature.data(t.name)
        if entry is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"unknown data type `{t.name}`", telescope=ctx)
        if len(t.params) != entry.decl.param_count:
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`{t.name}` takes {entry.decl.param_count} parameter(s), got {len(t.params)}",
                       telescope=ctx)
        return self._apply_spine(ctx, entry.former_type, t.params)

    def _infer_CtorApp(self, ctx: Telescope, t: CtorApp) -> Term:
        entry = self.signature.data_by_constructor(t.name)
        if entry is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"unknown constructor `{t.name}`", telescope=ctx)
        if t.params is None:
            if entry.decl.param_count:
                raise fail(ErrorCode.TYPE_MISMATCH,
                           f"cannot infer the parameters of `{t.name}`; annotate its type", telescope=ctx)
            params: Tuple[Term, ...] = ()
        else:
            params = t.params
        return self._ctor_spine(ctx, entry, t.name, params, t.args)

    def _infer_ElimApp(self, ctx: Telescope, t: ElimApp) -> Term:
        entry = self.signature.data_by_eliminator(t.name)
        if entry is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"unknown eliminator `{t.name}`", telescope=ctx)
        decl = entry.decl
        if len(t.params) != decl.param_count or len(t.methods) != len(decl.ctors):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"`{t.name}` expects {decl.param_count} parameter(s) and {len(decl.ctors)} method(s)",
                       telescope=ctx)
        args = tuple(t.params) + (t.motive,) + tuple(t.methods) + (t.scrutinee,)
        return self._apply_spine(ctx, entry.eliminator, args)

    def _infer_GlobalRef(self, ctx: Telescope, t: GlobalRef) -> Term:
        ty = self.signature.global_type(t.name)
        if ty is None:
            raise fail(ErrorCode.UNBOUND_NAME, f"`{t.name}` is not a defined name", telescope=ctx)
        return ty

    def _infer_Ann(self, ctx: Telescope, t: Ann) -> Term:
        self.check_type(ctx, t.ty)
        self.check(ctx, t.term, t.ty)
        return t.ty

    # -- declarations ---------------------------------------------------------------

    def check_data(self, data: CoreData) -> Signature:
        """Check parameters, positivity and the generated eliminator of a data declaration.

        Returns:
            The Signature extended with the type, its constructors and its eliminator.
        """
        self.check_telescope(data.params)
        if any(isinstance(e, Aff) for e in data.params.entries):
            raise fail(ErrorCode.KIND_MISMATCH, f"parameters of `{data.name}` must be term variables")
        decl = check_positivity(self.signature, data)
        for ctor in decl.ctors:
            ctx = decl.params
            for arg in ctor.args:
                if arg.kind is ArgKind.CONST:
                    self.check_type(ctx, arg.type)
                ctx = ctx.cart(arg.name, arg.type)
        entry = make_data_entry(self.signature, decl)
        extended = self.signature.extend(entry)
        TypeChecker(extended).check_type(Telescope(), entry.eliminator)
        return extended


def check_declaration(signature: Signature, decl: CoreDecl, budget: Optional[int] = None) -> Signature:
    """Check one declaration against the prefix Signature and append it.

    Args:
        signature: Everything checked before `decl`.
        decl: A definition, postulate or data declaration.
        budget: Reduction steps allowed while checking `decl`; None uses the default.

    Returns:
        `signature` extended with `decl`.

    Raises:
        KernelError: Located at the declaration's span and name.
    """
    checker = TypeChecker(signature, budget)
    try:
        if decl.name in signature:
            raise fail(ErrorCode.DUPLICATE_NAME, f"`{decl.name}` is already defined")
        if isinstance(decl, CoreData):
            extended = checker.check_data(decl)
        elif isinstance(decl, CorePostulate):
            checker.check_type(Telescope(), decl.type)
            extended = signature.extend(Postulate(decl.name, decl.type))
        else:
            checker.check_type(Telescope(), decl.type)
            checker.check(Telescope(), decl.body, decl.type)
            extended = signature.extend(Definition(decl.name, decl.type, decl.body))
    except KernelError as err:
        raise err.located(span=decl.span, declaration=decl.name)
    logger.debug(f"Checked {decl.name} ({checker.evaluator.steps} reduction steps)")
    return extended


def check_signature(decls: Iterable[CoreDecl], signature: Optional[Signature] = None,
                    budget: Optional[int] = None) -> Signature:
    """Check `decls` in order, each against the signature built so far."""
    signature = signature if signature is not None else Signature()
    count = 0
    for decl in decls:
        signature = check_declaration(signature, decl, budget)
        count += 1
    logger.info(f"Checked {count} declaration(s); signature holds {len(signature)}")
    return signature


def infer(signature: Signature, gamma: Telescope, t: Term) -> Term:
    return TypeChecker(signature).infer(gamma, t)


def check(signature: Signature, gamma: Telescope, t: Term, ty: Term) -> None:
    TypeChecker(signature).check(gamma, t, ty)


def check_telescope(signature: Signature, gamma: Telescope) -> None:
    TypeChecker(signature).check_telescope(gamma)
