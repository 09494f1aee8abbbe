"""
Nominal inductive data types.

A declaration arrives from the elaborator as a `CoreData`: a parameter
telescope and, per constructor, a Π-type over those parameters ending in the
data type itself. `check_positivity` classifies every constructor argument as
Const, Rec (the data type at the same parameters) or BridgeRec (𝕀 ⊸ the data
type); anything else is rejected. From the classified `DataDecl` we generate
the type former, constructor types and the dependent eliminator `ind<Name>`,
and `iota_reduce` computes eliminators on constructors.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Tuple

from src.core.diagnostics import ErrorCode, Span, fail
from src.core.syntax import (
    App, BridgeApp, BridgeLam, BridgePi, Cart, CtorApp, DataRef, ElimApp, Pi,
    Telescope, Term, Universe, Var, mentions, rename, shift,
)

logger = logging.getLogger(__name__)


class ArgKind(str, Enum):
    CONST = "const"
    REC = "rec"
    BRIDGE_REC = "bridge-rec"


@dataclass(frozen=True)
class CtorArg:
    name: str
    kind: ArgKind
    # Const arguments only: the type, in scope of the parameters and earlier arguments.
    type: Optional[Term] = None


@dataclass(frozen=True)
class CtorSig:
    name: str
    args: Tuple[CtorArg, ...]

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class CoreData:
    """An elaborated, not yet classified, data declaration."""
    name: str
    params: Telescope
    ctors: Tuple[Tuple[str, Term], ...]
    span: Optional[Span] = None
    ctor_spans: Tuple[Optional[Span], ...] = ()


@dataclass(frozen=True)
class DataDecl:
    name: str
    params: Telescope
    ctors: Tuple[CtorSig, ...]

    @property
    def eliminator_name(self) -> str:
        return f"ind{self.name}"

    @property
    def param_count(self) -> int:
        return len(self.params)

    def ctor(self, name: str) -> Tuple[int, CtorSig]:
        for i, sig in enumerate(self.ctors):
            if sig.name == name:
                return i, sig
        raise KeyError(name)


@dataclass(frozen=True)
class DataEntry:
    """A checked data declaration as stored in the Signature."""
    decl: DataDecl
    former_type: Term
    ctor_types: Tuple[Tuple[str, Term], ...]
    eliminator: Term

    @property
    def name(self) -> str:
        return self.decl.name

    def global_names(self) -> List[str]:
        return [self.decl.name, *(c.name for c in self.decl.ctors), self.decl.eliminator_name]

    def ctor_type(self, name: str) -> Term:
        return dict(self.ctor_types)[name]


def _subterms(t: Term) -> Iterator[Term]:
    yield t
    for fname in t._scopes:
        value = getattr(t, fname)
        if value is None:
            continue
        for child in (value if isinstance(value, tuple) else (value,)):
            yield from _subterms(child)


def _occurs(name: str, t: Term) -> bool:
    return any(isinstance(s, DataRef) and s.name == name for s in _subterms(t))


def _occurs_negatively(name: str, t: Term) -> bool:
    return any(isinstance(s, Pi) and _occurs(name, s.dom) for s in _subterms(t))


def _self_ref(name: str, param_count: int, depth: int) -> DataRef:
    """The data type at its own parameters, `depth` entries after the parameter telescope."""
    return DataRef(name, tuple(Var(depth + param_count - 1 - i) for i in range(param_count)))


def check_positivity(signature, data: CoreData) -> DataDecl:
    """Classify constructor arguments; reject every other occurrence of the data type."""
    seen = set()
    ctors = []
    m = len(data.params)
    for ctor_name, ty in data.ctors:
        if ctor_name in seen:
            raise fail(ErrorCode.DUPLICATE_NAME,
                       f"constructor `{ctor_name}` is declared twice in `{data.name}`")
        seen.add(ctor_name)
        args: List[CtorArg] = []
        depth = 0
        while isinstance(ty, Pi):
            own = _self_ref(data.name, m, depth)
            dom = ty.dom
            if dom == own:
                kind = ArgKind.REC
            elif isinstance(dom, BridgePi) and dom.cod == shift(own, 1):
                kind = ArgKind.BRIDGE_REC
            elif not _occurs(data.name, dom):
                kind = ArgKind.CONST
            elif _occurs_negatively(data.name, dom):
                raise fail(ErrorCode.NEGATIVE_OCCURRENCE,
                           f"`{data.name}` occurs to the left of an arrow in an argument of `{ctor_name}`")
            else:
                raise fail(ErrorCode.NESTED_OCCURRENCE,
                           f"argument `{ty.name}` of `{ctor_name}` uses `{data.name}` in an unsupported position")
            if kind is not ArgKind.CONST and mentions(ty.cod, 0):
                raise fail(ErrorCode.NESTED_OCCURRENCE,
                           f"later arguments of `{ctor_name}` may not depend on the recursive argument `{ty.name}`")
            args.append(CtorArg(ty.name, kind, dom if kind is ArgKind.CONST else None))
            ty = ty.cod
            depth += 1
        if ty != _self_ref(data.name, m, depth):
            raise fail(ErrorCode.TYPE_MISMATCH,
                       f"constructor `{ctor_name}` must return `{data.name}` applied to its parameters")
        ctors.append(CtorSig(ctor_name, tuple(args)))
    logger.debug(f"Positivity ok for {data.name}: "
                 + ", ".join(f"{c.name}[{' '.join(a.kind.value for a in c.args)}]" for c in ctors))
    return DataDecl(data.name, data.params, tuple(ctors))


def _pis(binders: List[Tuple[str, Term]], body: Term) -> Term:
    for name, dom in reversed(binders):
        body = Pi(dom, body, name=name)
    return body


def _param_binders(decl: DataDecl) -> List[Tuple[str, Term]]:
    return [(e.name, e.type) for e in decl.params.entries]


def former_type(decl: DataDecl) -> Term:
    """Π params. U"""
    return _pis(_param_binders(decl), Universe())


def constructor_type(decl: DataDecl, ctor: CtorSig) -> Term:
    """Π params. Π args. D params"""
    m = decl.param_count
    binders = _param_binders(decl)
    for depth, arg in enumerate(ctor.args):
        if arg.kind is ArgKind.CONST:
            dom = arg.type
        elif arg.kind is ArgKind.REC:
            dom = _self_ref(decl.name, m, depth)
        else:
            dom = BridgePi(_self_ref(decl.name, m, depth + 1), name="x")
        binders.append((arg.name, dom))
    return _pis(binders, _self_ref(decl.name, m, ctor.arity))


def _method_type(decl: DataDecl, ctor: CtorSig) -> Term:
    """The method for `ctor`, in context (params, P)."""
    m = decl.param_count
    # positions[i] = position in the method context of declaration-context entry i
    positions = list(range(m))
    length = m + 1
    motive_pos = m
    binders: List[Tuple[str, Term]] = []

    def var_at(pos: int, extra: int = 0) -> Var:
        return Var(length - 1 - pos + extra)

    def params_here(extra: int = 0) -> Tuple[Term, ...]:
        return tuple(var_at(positions[i], extra) for i in range(m))

    for arg in ctor.args:
        if arg.kind is ArgKind.CONST:
            decl_len = len(positions)
            dom = rename(arg.type, lambda i, n=decl_len: length - 1 - positions[n - 1 - i])
            binders.append((arg.name, dom))
            positions.append(length)
            length += 1
        elif arg.kind is ArgKind.REC:
            binders.append((arg.name, DataRef(decl.name, params_here())))
            arg_pos = length
            positions.append(arg_pos)
            length += 1
            binders.append((f"ih_{arg.name}", App(var_at(motive_pos), var_at(arg_pos))))
            length += 1
        else:
            binders.append((arg.name, BridgePi(DataRef(decl.name, params_here(1)), name="x")))
            arg_pos = length
            positions.append(arg_pos)
            length += 1
            hyp = BridgePi(App(var_at(motive_pos, 1), BridgeApp(var_at(arg_pos, 1), Var(0, "x"))), name="x")
            binders.append((f"ih_{arg.name}", hyp))
            length += 1
    args = tuple(var_at(positions[m + k]) for k in range(ctor.arity))
    conclusion = App(var_at(motive_pos), CtorApp(ctor.name, args, params_here()))
    return _pis(binders, conclusion)


def elaborate_eliminator(signature, decl: DataDecl) -> Term:
    """Π params. Π (P : D params → U). Π methods. Π (s : D params). P s"""
    m = decl.param_count
    n = len(decl.ctors)
    binders = _param_binders(decl)
    binders.append(("P", Pi(_self_ref(decl.name, m, 0), Universe(), name="s")))
    for i, ctor in enumerate(decl.ctors):
        binders.append((f"m_{ctor.name}", shift(_method_type(decl, ctor), i)))
    binders.append(("s", _self_ref(decl.name, m, n + 1)))
    return _pis(binders, App(Var(n + 1, "P"), Var(0, "s")))


def make_data_entry(signature, decl: DataDecl) -> DataEntry:
    return DataEntry(
        decl=decl,
        former_type=former_type(decl),
        ctor_types=tuple((c.name, constructor_type(decl, c)) for c in decl.ctors),
        eliminator=elaborate_eliminator(signature, decl),
    )


def iota_reduce(signature, elim: ElimApp) -> Optional[Term]:
    """One ι-step, or None when the scrutinee is not a constructor of this type."""
    scrutinee = elim.scrutinee
    if not isinstance(scrutinee, CtorApp):
        return None
    entry = signature.data_by_eliminator(elim.name)
    try:
        index, ctor = entry.decl.ctor(scrutinee.name)
    except KeyError:
        return None
    if len(scrutinee.args) != ctor.arity or len(elim.methods) != len(entry.decl.ctors):
        return None
    result = elim.methods[index]
    for spec, arg in zip(ctor.args, scrutinee.args):
        result = App(result, arg)
        if spec.kind is ArgKind.REC:
            result = App(result, ElimApp(elim.name, elim.params, elim.motive, elim.methods, arg))
        elif spec.kind is ArgKind.BRIDGE_REC:
            inner = ElimApp(
                elim.name,
                tuple(shift(p, 1) for p in elim.params),
                shift(elim.motive, 1),
                tuple(shift(mt, 1) for mt in elim.methods),
                BridgeApp(shift(arg, 1), Var(0, "x")),
            )
            result = App(result, BridgeLam(inner, name=arg.name if isinstance(arg, BridgeLam) else "x"))
    return result
