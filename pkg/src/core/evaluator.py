"""
Reduction and definitional equality.

Normalization is substitution-based: the ext β and Nmβ1 rules need syntactic
freshness tests on the term at hand, so terms are never closed over an
environment. Two full-normalization strategies are provided, leftmost-outermost
("lo", the default) and rightmost-innermost ("ri"). Every contraction counts
against a step budget and can be recorded in a ReductionTrace.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

from src.core.datatypes import iota_reduce
from src.core.diagnostics import ErrorCode, KernelError, fail
from src.core.syntax import (
    Ann, App, BridgeApp, BridgeLam, BridgePi, CName, CtorApp, ElimApp, Ext, Fst,
    GelIntro, GelType, GlobalRef, IndNm, J, Lam, Pair, Pi, Refl, Sigma, Snd,
    Telescope, Term, Ung, Var, capture_in_place, instantiate, is_fresh, mentions,
    scope_entry, shift,
)
from src.utils.config import KERNEL_CONFIG

logger = logging.getLogger(__name__)

Path = Tuple[str, ...]


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    path: Path


@dataclass
class ReductionTrace:
    steps: List[ReductionStep] = field(default_factory=list)

    def record(self, rule: str, path: Path) -> None:
        self.steps.append(ReductionStep(rule, path))

    def rules(self) -> List[str]:
        return [s.rule for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


def _child(t: Term, step: str) -> Tuple[str, Optional[int]]:
    fname, _, idx = step.partition(".")
    return fname, (int(idx) if idx else None)


class Evaluator:
    """Weak-head and full normalization plus conversion checking over a Signature."""

    def __init__(self, signature, budget: Optional[int] = None, strategy: Optional[str] = None,
                 trace: Optional[ReductionTrace] = None):
        self.signature = signature
        self.budget = budget if budget is not None else KERNEL_CONFIG["step_budget"]
        self.strategy = strategy or KERNEL_CONFIG["strategy"]
        if self.strategy not in KERNEL_CONFIG["strategies"]:
            raise ValueError(f"unknown normalization strategy: {self.strategy}")
        self.trace = trace
        self.steps = 0

    # -- bookkeeping -------------------------------------------------------

    def _tick(self, rule: str, path: Path) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise fail(ErrorCode.BUDGET_EXCEEDED,
                       f"reduction step budget of {self.budget} exhausted")
        if self.trace is not None:
            self.trace.record(rule, path)
        logger.debug("%s at /%s", rule, "/".join(path))

    # -- root contraction --------------------------------------------------

    def contract(self, ctx: Telescope, t: Term) -> Optional[Tuple[str, Term]]:
        """Contract `t` if its root is a redex, as it stands."""
        if isinstance(t, GlobalRef):
            body = self.signature.definition_body(t.name)
            return ("delta", body) if body is not None else None
        if isinstance(t, Ann):
            return "ann", t.term
        if isinstance(t, App) and isinstance(t.fn, Lam):
            return "beta", instantiate(t.fn.body, t.arg)
        if isinstance(t, BridgeApp) and isinstance(t.fn, BridgeLam):
            return "bridge-beta", instantiate(t.fn.body, t.x)
        if isinstance(t, Fst) and isinstance(t.pair, Pair):
            return "fst", t.pair.fst
        if isinstance(t, Snd) and isinstance(t.pair, Pair):
            return "snd", t.pair.snd
        if isinstance(t, Ung) and isinstance(t.bridge, BridgeLam):
            body = t.bridge.body
            if isinstance(body, GelIntro) and body.x.index == 0 and not mentions(body.body, 0):
                return "gel-beta", shift(body.body, -1)
            return None
        if isinstance(t, Ext):
            try:
                captured = capture_in_place(ctx, t.x.index, t.arg)
            except KernelError:
                return None
            return "ext-beta", BridgeApp(App(t.method, captured), t.x)
        if isinstance(t, IndNm):
            if isinstance(t.scrutinee, CName) and t.scrutinee.x.index == t.x.index:
                return "nm-beta0", t.base
            if is_fresh(ctx, t.x.index, t.scrutinee):
                return "nm-beta1", instantiate(t.step, GelIntro(t.scrutinee, t.x))
            return None
        if isinstance(t, ElimApp):
            reduct = iota_reduce(self.signature, t)
            return ("iota", reduct) if reduct is not None else None
        if isinstance(t, J) and isinstance(t.eq, Refl):
            return "J-beta", t.base
        return None

    # -- weak head normalization --------------------------------------------

    _HEADS = {App: "fn", BridgeApp: "fn", Fst: "pair", Snd: "pair",
              IndNm: "scrutinee", ElimApp: "scrutinee", J: "eq", Ung: "bridge"}

    def _reduce_head(self, ctx: Telescope, t: Term, path: Path) -> Term:
        fname = self._HEADS.get(type(t))
        if fname is None:
            return t
        head = self.whnf(ctx, getattr(t, fname), path + (fname,))
        if isinstance(t, Ung) and isinstance(head, BridgeLam):
            body = self.whnf(ctx.aff(head.name), head.body, path + ("bridge", "body"))
            head = replace(head, body=body)
        return replace(t, **{fname: head})

    def _retry_normalized(self, ctx: Telescope, t: Term, path: Path) -> Optional[Term]:
        """Normalize the subterm a failed freshness test looked at, if that can help."""
        if isinstance(t, Ext):
            arg = self._normalize_lo(ctx, t.arg, path + ("arg",))
            return replace(t, arg=arg) if arg != t.arg else None
        if isinstance(t, IndNm):
            scrutinee = self._normalize_lo(ctx, t.scrutinee, path + ("scrutinee",))
            return replace(t, scrutinee=scrutinee) if scrutinee != t.scrutinee else None
        return None

    def whnf(self, ctx: Telescope, t: Term, path: Path = ()) -> Term:
        while True:
            t = self._reduce_head(ctx, t, path)
            step = self.contract(ctx, t)
            if step is None:
                retried = self._retry_normalized(ctx, t, path)
                if retried is None:
                    return t
                t = retried
                step = self.contract(ctx, t)
                if step is None:
                    return t
            rule, t = step
            self._tick(rule, path)

    # -- full normalization -------------------------------------------------

    def _normalize_children(self, ctx: Telescope, t: Term, path: Path,
                            go: Callable[[Telescope, Term, Path], Term],
                            reverse: bool = False) -> Term:
        fields = list(t._scopes.items())
        if reverse:
            fields.reverse()
        updates = {}
        for fname, binders in fields:
            value = getattr(t, fname)
            if value is None:
                continue
            inner = ctx.extend(scope_entry(t, fname)) if binders else ctx
            if isinstance(value, tuple):
                order = range(len(value) - 1, -1, -1) if reverse else range(len(value))
                items = list(value)
                for i in order:
                    items[i] = go(inner, value[i], path + (f"{fname}.{i}",))
                updates[fname] = tuple(items)
            else:
                updates[fname] = go(inner, value, path + (fname,))
        return replace(t, **updates) if updates else t

    def _normalize_lo(self, ctx: Telescope, t: Term, path: Path) -> Term:
        t = self.whnf(ctx, t, path)
        return self._normalize_children(ctx, t, path, self._normalize_lo)

    def _normalize_ri(self, ctx: Telescope, t: Term, path: Path) -> Term:
        while True:
            t = self._normalize_children(ctx, t, path, self._normalize_ri, reverse=True)
            step = self.contract(ctx, t)
            if step is None:
                return t
            rule, t = step
            self._tick(rule, path)

    def normalize(self, ctx: Telescope, t: Term) -> Term:
        if self.strategy == "ri":
            return self._normalize_ri(ctx, t, ())
        return self._normalize_lo(ctx, t, ())

    def replay(self, ctx: Telescope, t: Term, trace: ReductionTrace) -> Term:
        """Re-apply a recorded trace step by step."""
        for step in trace.steps:
            t = self._rewrite_at(ctx, t, step.path, step.rule)
        return t

    def _rewrite_at(self, ctx: Telescope, t: Term, path: Path, rule: str) -> Term:
        if not path:
            result = self.contract(ctx, t)
            if result is None or result[0] != rule:
                raise ValueError(f"trace step {rule} does not apply to {type(t).__name__}")
            return result[1]
        fname, idx = _child(t, path[0])
        inner = ctx.extend(scope_entry(t, fname)) if t._scopes[fname] else ctx
        value = getattr(t, fname)
        if idx is None:
            return replace(t, **{fname: self._rewrite_at(inner, value, path[1:], rule)})
        items = list(value)
        items[idx] = self._rewrite_at(inner, items[idx], path[1:], rule)
        return replace(t, **{fname: tuple(items)})

    # -- definitional equality ---------------------------------------------

    def convertible(self, ctx: Telescope, t: Term, u: Term, ty: Optional[Term] = None) -> bool:
        if t == u:
            return True
        if ty is not None:
            ty = self.whnf(ctx, ty)
            if isinstance(ty, Pi):
                inner = ctx.cart(ty.name, ty.dom)
                return self.convertible(inner, App(shift(t, 1), Var(0)), App(shift(u, 1), Var(0)), ty.cod)
            if isinstance(ty, BridgePi):
                inner = ctx.aff(ty.name)
                return self.convertible(inner, BridgeApp(shift(t, 1), Var(0)),
                                        BridgeApp(shift(u, 1), Var(0)), ty.cod)
            if isinstance(ty, Sigma):
                return (self.convertible(ctx, Fst(t), Fst(u), ty.fst_ty)
                        and self.convertible(ctx, Snd(t), Snd(u), instantiate(ty.snd_ty, Fst(t))))
            if isinstance(ty, GelType):
                verdict = self._gel_eta(ctx, t, u, ty.x.index, ty.ty)
                if verdict is not None:
                    return verdict
        return self._structural(ctx, t, u)

    def _gel_eta(self, ctx: Telescope, t: Term, u: Term, x: int,
                 carrier: Optional[Term]) -> Optional[bool]:
        """ung(capture t) ≡ ung(capture u) when both captures succeed, else None."""
        try:
            left = Ung(capture_in_place(ctx, x, t))
            right = Ung(capture_in_place(ctx, x, u))
        except KernelError:
            return None
        return self.convertible(ctx, left, right, carrier)

    def _structural(self, ctx: Telescope, t: Term, u: Term) -> bool:
        t = self.whnf(ctx, t)
        u = self.whnf(ctx, u)
        if t == u:
            return True

        if isinstance(t, Lam) or isinstance(u, Lam):
            lam = t if isinstance(t, Lam) else u
            inner = ctx.cart(lam.name, lam.dom)
            return self.convertible(inner, self._body_of(t), self._body_of(u))
        if isinstance(t, BridgeLam) or isinstance(u, BridgeLam):
            lam = t if isinstance(t, BridgeLam) else u
            inner = ctx.aff(lam.name)
            return self.convertible(inner, self._bridge_body_of(t), self._bridge_body_of(u))
        if isinstance(t, Pair) or isinstance(u, Pair):
            return (self.convertible(ctx, Fst(t), Fst(u))
                    and self.convertible(ctx, Snd(t), Snd(u)))
        for side in (t, u):
            if isinstance(side, GelIntro):
                verdict = self._gel_eta(ctx, t, u, side.x.index, None)
                if verdict:
                    return True

        if type(t) is not type(u):
            return False
        for fname in t._affine:
            if getattr(t, fname) != getattr(u, fname):
                return False
        # non-term fields such as global names must agree exactly
        if t != replace(u, **{f: getattr(t, f) for f in t._scopes}):
            return False
        for fname, binders in t._scopes.items():
            if isinstance(t, CtorApp) and fname == "params":
                continue
            left, right = getattr(t, fname), getattr(u, fname)
            if left is None or right is None:
                if left is not right:
                    return False
                continue
            inner = ctx.extend(scope_entry(t, fname)) if binders else ctx
            if isinstance(left, tuple):
                if len(left) != len(right):
                    return False
                if not all(self.convertible(inner, a, b) for a, b in zip(left, right)):
                    return False
            elif not self.convertible(inner, left, right):
                return False
        return True

    @staticmethod
    def _body_of(t: Term) -> Term:
        return t.body if isinstance(t, Lam) else App(shift(t, 1), Var(0))

    @staticmethod
    def _bridge_body_of(t: Term) -> Term:
        return t.body if isinstance(t, BridgeLam) else BridgeApp(shift(t, 1), Var(0))
