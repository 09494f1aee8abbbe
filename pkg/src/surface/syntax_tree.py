"""
Surface syntax produced by the parser.

Variables are still names here; the elaborator resolves them against the
working telescope and the Signature. Every node records its source span.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from src.core.diagnostics import Span


@dataclass(frozen=True)
class SExpr:
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SVar(SExpr):
    name: str


@dataclass(frozen=True)
class SUniverse(SExpr):
    pass


@dataclass(frozen=True)
class SNm(SExpr):
    pass


@dataclass(frozen=True)
class SPi(SExpr):
    """`(x : A) -> B`, or `A -> B` when `name` is None."""
    name: Optional[str]
    dom: SExpr
    cod: SExpr


@dataclass(frozen=True)
class SBridgePi(SExpr):
    """`(x : @I) -o B`, or `@I -o B` when `name` is None."""
    name: Optional[str]
    cod: SExpr


@dataclass(frozen=True)
class SLam(SExpr):
    """One binder. `bridge` marks `\\(x : @I).`; `dom` is None for a bare `\\x.`"""
    name: str
    dom: Optional[SExpr]
    body: SExpr
    bridge: bool = False


@dataclass(frozen=True)
class SApp(SExpr):
    fn: SExpr
    arg: SExpr


@dataclass(frozen=True)
class SSigma(SExpr):
    name: str
    fst_ty: SExpr
    snd_ty: SExpr


@dataclass(frozen=True)
class SPair(SExpr):
    fst: SExpr
    snd: SExpr


@dataclass(frozen=True)
class SFst(SExpr):
    pair: SExpr


@dataclass(frozen=True)
class SSnd(SExpr):
    pair: SExpr


@dataclass(frozen=True)
class SName(SExpr):
    """`name x`"""
    var: str


@dataclass(frozen=True)
class SGelType(SExpr):
    ty: SExpr
    var: str


@dataclass(frozen=True)
class SGelIntro(SExpr):
    body: SExpr
    var: str


@dataclass(frozen=True)
class SUng(SExpr):
    bridge: SExpr


@dataclass(frozen=True)
class SExt(SExpr):
    method: SExpr
    var: str
    arg: SExpr
    motive: Optional[SExpr] = None


@dataclass(frozen=True)
class SIndNm(SExpr):
    var: str
    scrutinee: SExpr
    base: SExpr
    step: SExpr
    motive: SExpr


@dataclass(frozen=True)
class SId(SExpr):
    ty: SExpr
    lhs: SExpr
    rhs: SExpr


@dataclass(frozen=True)
class SRefl(SExpr):
    pass


@dataclass(frozen=True)
class SJ(SExpr):
    motive: SExpr
    base: SExpr
    eq: SExpr


@dataclass(frozen=True)
class SAnn(SExpr):
    term: SExpr
    ty: SExpr


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SDef:
    name: str
    type: SExpr
    body: SExpr
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SPostulate:
    name: str
    type: SExpr
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SCtor:
    name: str
    type: SExpr
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SData:
    name: str
    # (name, type) pairs; a type of None stands for `@I`, which data parameters reject
    params: Tuple[Tuple[str, Optional[SExpr]], ...]
    ctors: Tuple[SCtor, ...]
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SPragma:
    key: str
    value: Optional[str]
    span: Span = field(compare=False)


SurfaceDecl = Union[SDef, SPostulate, SData, SPragma]
SurfaceFile = List[SurfaceDecl]
