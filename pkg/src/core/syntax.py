"""
Core syntax for nullary PTT.

Terms use de Bruijn indices into a single telescope whose entries are either
cartesian (`Cart`, a name with a type) or affine (`Aff`, a name of kind 𝕀).
Index 0 is the rightmost entry. Display names ride along as metadata and are
ignored by equality, so `==` on terms is α-equivalence.

The affine discipline lives here as well: context restriction Γ|x, the
syntactic freshness test and capture, which rebuilds the bridge λy. t[y/x].
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Tuple, Union

from src.core.diagnostics import ErrorCode, fail

logger = logging.getLogger(__name__)


class Term:
    """Base class of core terms.

    `_scopes` maps each term-valued field to the number of binders the field
    sits under; `_affine` lists the fields that hold an affine variable.
    """
    _scopes: Dict[str, int] = {}
    _affine: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Var(Term):
    index: int
    name: str = field(default="", compare=False)


@dataclass(frozen=True)
class Universe(Term):
    pass


@dataclass(frozen=True)
class Pi(Term):
    dom: Term
    cod: Term
    name: str = field(default="_", compare=False)
    _scopes = {"dom": 0, "cod": 1}


@dataclass(frozen=True)
class Lam(Term):
    dom: Optional[Term]
    body: Term
    name: str = field(default="_", compare=False)
    _scopes = {"dom": 0, "body": 1}


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    _scopes = {"fn": 0, "arg": 0}


@dataclass(frozen=True)
class BridgePi(Term):
    cod: Term
    name: str = field(default="_", compare=False)
    _scopes = {"cod": 1}


@dataclass(frozen=True)
class BridgeLam(Term):
    body: Term
    name: str = field(default="_", compare=False)
    _scopes = {"body": 1}


@dataclass(frozen=True)
class BridgeApp(Term):
    fn: Term
    x: Var
    _scopes = {"fn": 0}
    _affine = ("x",)


@dataclass(frozen=True)
class Sigma(Term):
    fst_ty: Term
    snd_ty: Term
    name: str = field(default="_", compare=False)
    _scopes = {"fst_ty": 0, "snd_ty": 1}


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    _scopes = {"fst": 0, "snd": 0}


@dataclass(frozen=True)
class Fst(Term):
    pair: Term
    _scopes = {"pair": 0}


@dataclass(frozen=True)
class Snd(Term):
    pair: Term
    _scopes = {"pair": 0}


@dataclass(frozen=True)
class NmType(Term):
    pass


@dataclass(frozen=True)
class CName(Term):
    x: Var
    _affine = ("x",)


@dataclass(frozen=True)
class IndNm(Term):
    """Name induction relative to the affine variable `x`.

    `motive` lives under (z : Nm) and `step` under (g : Gel Nm x).
    """
    x: Var
    motive: Term
    scrutinee: Term
    base: Term
    step: Term
    motive_name: str = field(default="z", compare=False)
    step_name: str = field(default="g", compare=False)
    _scopes = {"motive": 1, "scrutinee": 0, "base": 0, "step": 1}
    _affine = ("x",)


@dataclass(frozen=True)
class GelType(Term):
    ty: Term
    x: Var
    _scopes = {"ty": 0}
    _affine = ("x",)


@dataclass(frozen=True)
class GelIntro(Term):
    body: Term
    x: Var
    _scopes = {"body": 0}
    _affine = ("x",)


@dataclass(frozen=True)
class Ung(Term):
    bridge: Term
    _scopes = {"bridge": 0}


@dataclass(frozen=True)
class Ext(Term):
    """Extent. `family`, when present, is `\\(y : @I). \\(a : A). B`."""
    method: Term
    x: Var
    arg: Term
    family: Optional[Term] = None
    _scopes = {"method": 0, "arg": 0, "family": 0}
    _affine = ("x",)


@dataclass(frozen=True)
class Id(Term):
    ty: Term
    lhs: Term
    rhs: Term
    _scopes = {"ty": 0, "lhs": 0, "rhs": 0}


@dataclass(frozen=True)
class Refl(Term):
    pass


@dataclass(frozen=True)
class J(Term):
    motive: Term
    base: Term
    eq: Term
    _scopes = {"motive": 0, "base": 0, "eq": 0}


@dataclass(frozen=True)
class DataRef(Term):
    name: str
    params: Tuple[Term, ...] = ()
    _scopes = {"params": 0}


@dataclass(frozen=True)
class CtorApp(Term):
    name: str
    args: Tuple[Term, ...] = ()
    params: Optional[Tuple[Term, ...]] = field(default=None, compare=False)
    _scopes = {"args": 0, "params": 0}


@dataclass(frozen=True)
class ElimApp(Term):
    name: str
    params: Tuple[Term, ...]
    motive: Term
    methods: Tuple[Term, ...]
    scrutinee: Term
    _scopes = {"params": 0, "motive": 0, "methods": 0, "scrutinee": 0}


@dataclass(frozen=True)
class GlobalRef(Term):
    name: str


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    ty: Term
    _scopes = {"term": 0, "ty": 0}


# ---------------------------------------------------------------------------
# Telescopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cart:
    name: str = field(compare=False)
    type: Optional[Term]


@dataclass(frozen=True)
class Aff:
    name: str = field(compare=False)


Entry = Union[Cart, Aff]


@dataclass(frozen=True)
class Telescope:
    entries: Tuple[Entry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, entry: Entry) -> "Telescope":
        return Telescope(self.entries + (entry,))

    def cart(self, name: str, ty: Optional[Term]) -> "Telescope":
        return self.extend(Cart(name, ty))

    def aff(self, name: str) -> "Telescope":
        return self.extend(Aff(name))

    def position(self, index: int) -> int:
        return len(self.entries) - 1 - index

    def entry(self, index: int) -> Entry:
        if index < 0 or index >= len(self.entries):
            raise fail(ErrorCode.UNBOUND_VARIABLE,
                       f"variable #{index} is out of scope in a telescope of length {len(self.entries)}",
                       telescope=self)
        return self.entries[self.position(index)]

    def is_affine(self, index: int) -> bool:
        return isinstance(self.entry(index), Aff)

    def type_of(self, index: int) -> Optional[Term]:
        """Type of a cartesian entry, weakened into the full telescope."""
        entry = self.entry(index)
        if isinstance(entry, Aff) or entry.type is None:
            return None
        return shift(entry.type, index + 1)

    def names(self) -> List[str]:
        return [e.name for e in self.entries]

    def lookup(self, name: str) -> Optional[int]:
        """Index of the innermost entry called `name`."""
        for pos in range(len(self.entries) - 1, -1, -1):
            if self.entries[pos].name == name:
                return len(self.entries) - 1 - pos
        return None


def scope_entry(t: Term, fname: str) -> Entry:
    """The telescope entry bound by field `fname` of node `t`."""
    if isinstance(t, (Pi, Lam)):
        return Cart(t.name, t.dom)
    if isinstance(t, Sigma):
        return Cart(t.name, t.fst_ty)
    if isinstance(t, (BridgePi, BridgeLam)):
        return Aff(t.name)
    if isinstance(t, IndNm):
        if fname == "motive":
            return Cart(t.motive_name, NmType())
        return Cart(t.step_name, GelType(NmType(), t.x))
    raise ValueError(f"{type(t).__name__}.{fname} binds nothing")


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

VarHook = Callable[[int, Var, bool], Term]


def map_vars(t: Term, on_var: VarHook, depth: int = 0) -> Term:
    """Rebuild `t`, replacing each variable occurrence by `on_var(depth, var, in_affine_slot)`."""
    if isinstance(t, Var):
        return on_var(depth, t, False)
    updates = {}
    for fname in t._affine:
        updates[fname] = on_var(depth, getattr(t, fname), True)
    for fname, binders in t._scopes.items():
        value = getattr(t, fname)
        if value is None:
            continue
        if isinstance(value, tuple):
            updates[fname] = tuple(map_vars(v, on_var, depth + binders) for v in value)
        else:
            updates[fname] = map_vars(value, on_var, depth + binders)
    return replace(t, **updates) if updates else t


def _affine_slot(result: Term, affine: bool) -> Term:
    if affine and not isinstance(result, Var):
        raise fail(ErrorCode.KIND_MISMATCH,
                   "only an affine variable may be substituted into an affine position")
    return result


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add `amount` to every free index >= cutoff."""
    if amount == 0:
        return t

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        if v.index >= depth + cutoff:
            return Var(v.index + amount, v.name)
        return v

    return map_vars(t, on_var)


def rename(t: Term, mapping: Callable[[int], int], skip: int = 0) -> Term:
    """Apply an index renaming to the free variables of `t`.

    The `skip` innermost free indices are treated as locally bound and left alone.
    """

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        bound = depth + skip
        if v.index < bound:
            return v
        return Var(mapping(v.index - bound) + bound, v.name)

    return map_vars(t, on_var)


def substitute(t: Term, sigma: Callable[[int], Term]) -> Term:
    """Simultaneous substitution of `sigma(i)` for every free index i."""

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        if v.index < depth:
            return v
        return _affine_slot(shift(sigma(v.index - depth), depth), affine)

    return map_vars(t, on_var)


def subst(t: Term, target: int, s: Term) -> Term:
    """t[s/target], with `s` living in the same context as `t`."""

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        if v.index - depth == target:
            return _affine_slot(shift(s, depth), affine)
        return v

    return map_vars(t, on_var)


def instantiate(body: Term, s: Term) -> Term:
    """Substitute `s` for the binder of `body` and drop the binder."""

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        if v.index < depth:
            return v
        if v.index == depth:
            return _affine_slot(shift(s, depth), affine)
        return Var(v.index - 1, v.name)

    return map_vars(body, on_var)


def instantiate2(body: Term, outer: Term, inner: Term) -> Term:
    """Instantiate a body under two binders; `inner` is the innermost."""
    return substitute(body, lambda i: inner if i == 0 else outer if i == 1 else Var(i - 2))


# ---------------------------------------------------------------------------
# Occurrences and the affine discipline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarSet:
    """Free occurrences of a term, split by slot kind."""
    cartesian: FrozenSet[int] = frozenset()
    affine: FrozenSet[int] = frozenset()

    def all(self) -> FrozenSet[int]:
        return self.cartesian | self.affine

    def is_empty(self) -> bool:
        return not self.cartesian and not self.affine


def _collect(t: Term, depth: int, cart: Set[int], aff: Set[int]) -> None:
    if isinstance(t, Var):
        if t.index >= depth:
            cart.add(t.index - depth)
        return
    for fname in t._affine:
        v = getattr(t, fname)
        if v.index >= depth:
            aff.add(v.index - depth)
    for fname, binders in t._scopes.items():
        value = getattr(t, fname)
        if value is None:
            continue
        if isinstance(value, tuple):
            for v in value:
                _collect(v, depth + binders, cart, aff)
        else:
            _collect(value, depth + binders, cart, aff)


def supports(t: Term) -> VarSet:
    cart: Set[int] = set()
    aff: Set[int] = set()
    _collect(t, 0, cart, aff)
    return VarSet(frozenset(cart), frozenset(aff))


def mentions(t: Term, index: int) -> bool:
    return index in supports(t).all()


def _require_affine(gamma: Telescope, x: int) -> None:
    if not gamma.is_affine(x):
        raise fail(ErrorCode.POSITION_NOT_AFFINE,
                   f"`{gamma.entry(x).name}` is a cartesian entry, not a bridge variable",
                   telescope=gamma)


def _kept_positions(gamma: Telescope, x: int) -> List[int]:
    p = gamma.position(x)
    return [pos for pos, e in enumerate(gamma.entries)
            if pos < p or (pos > p and isinstance(e, Aff))]


def restrict(gamma: Telescope, x: int) -> Telescope:
    """Γ|x: drop x and every cartesian entry to its right."""
    _require_affine(gamma, x)
    return Telescope(tuple(gamma.entries[pos] for pos in _kept_positions(gamma, x)))


def restriction_map(gamma: Telescope, x: int) -> Dict[int, int]:
    """Index in Γ -> index in Γ|x, for every surviving entry."""
    _require_affine(gamma, x)
    kept = _kept_positions(gamma, x)
    n, m = len(gamma), len(kept)
    return {n - 1 - pos: m - 1 - new_pos for new_pos, pos in enumerate(kept)}


def is_fresh(gamma: Telescope, x: int, t: Term) -> bool:
    _require_affine(gamma, x)
    for i in supports(t).all():
        if i == x:
            return False
        if i < x and not gamma.is_affine(i):
            return False
    return True


def strengthen(gamma: Telescope, x: int, t: Term, skip: int = 0) -> Term:
    """Move `t` from Γ into Γ|x. The caller has established freshness."""
    mapping = restriction_map(gamma, x)

    def to_restricted(i: int) -> int:
        if i not in mapping:
            raise fail(ErrorCode.AFFINITY_VIOLATION,
                       f"`{gamma.entry(i).name}` is not available once `{gamma.entry(x).name}` is consumed",
                       telescope=gamma)
        return mapping[i]

    return rename(t, to_restricted, skip)


def weaken_from_restriction(gamma: Telescope, x: int, t: Term, skip: int = 0) -> Term:
    """Move `t` from Γ|x back into Γ (inverse of `strengthen`)."""
    inverse = {new: old for old, new in restriction_map(gamma, x).items()}
    return rename(t, lambda i: inverse[i], skip)


def capture_in_place(gamma: Telescope, x: int, t: Term) -> BridgeLam:
    """λy. t[y/x], expressed in Γ itself (it never mentions x)."""
    _require_affine(gamma, x)

    def on_var(depth: int, v: Var, affine: bool) -> Term:
        if v.index < depth:
            return v
        i = v.index - depth
        if i == x:
            return Var(depth, v.name)
        if i < x and not gamma.is_affine(i):
            raise fail(ErrorCode.CAPTURE_VIOLATION,
                       f"cannot capture `{gamma.entry(x).name}`: the term mentions "
                       f"`{gamma.entry(i).name}`, a cartesian entry to its right",
                       telescope=gamma)
        return Var(v.index + 1, v.name)

    return BridgeLam(map_vars(t, on_var), name=gamma.entry(x).name)


def capture(gamma: Telescope, x: int, t: Term) -> Term:
    """λy. t[y/x], well-scoped in Γ|x."""
    return strengthen(gamma, x, capture_in_place(gamma, x, t))


def forg_term(x: Var, g: Term) -> Ext:
    """forg x g := ext (λg' y. ung g') x g, at name type."""
    method = Lam(BridgePi(GelType(NmType(), Var(0, "z")), name="z"),
                 BridgeLam(Ung(Var(1, "g'")), name="y"),
                 name="g'")
    return Ext(method, x, g)
