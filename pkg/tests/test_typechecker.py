import pytest

from src.core.diagnostics import ErrorCode, KernelError
from src.core.evaluator import Evaluator
from src.core.syntax import (
    BridgeApp, BridgeLam, BridgePi, Cart, CName, GelType, Lam, NmType, Telescope,
    Universe, Var,
)
from src.core.typechecker import (
    CoreDef, Definition, Signature, TypeChecker, check_declaration, check_telescope, infer,
)
from src.surface.elaborator import Elaborator, elaborate, elaborate_expr
from src.surface.pretty import pretty_term


def inferred(elab, source, *groups):
    ctx, _, ty = elab(source, *groups)
    return pretty_term(ty, ctx.names(), reserved=elab.signature.global_names())


def rejected(elab, source, *groups, expected=None) -> ErrorCode:
    with pytest.raises(KernelError) as err:
        elab(source, *groups, expected=expected)
    return err.value.code


class TestBridgeRules:
    def test_formation(self, elab):
        assert inferred(elab, "(x : @I) -o Gel Nm x") == "U"

    def test_introduction(self, elab):
        assert inferred(elab, "\\(y : @I). name y") == "@I -o Nm"

    def test_elimination(self, elab):
        assert inferred(elab, "b x", "(b : @I -o Nm)", "(x : @I)") == "Nm"

    def test_elimination_needs_bridge_bound_before_x(self, elab):
        assert rejected(elab, "b x", "(x : @I)", "(b : @I -o Nm)") is ErrorCode.AFFINITY_VIOLATION

    def test_elimination_rejects_x_inside_the_bridge(self, elab):
        source = "(\\(y : @I). (name x, name y)) x"
        assert rejected(elab, source, "(x : @I)") is ErrorCode.AFFINITY_VIOLATION

    def test_kernel_checks_affinity_independently(self, prelude):
        ctx = Telescope().aff("x").cart("b", BridgePi(NmType()))
        with pytest.raises(KernelError) as err:
            infer(prelude, ctx, BridgeApp(Var(0, "b"), Var(1, "x")))
        assert err.value.code is ErrorCode.AFFINITY_VIOLATION

    def test_bridge_applied_to_term_variable(self, elab):
        assert rejected(elab, "b n", "(b : @I -o Nm)", "(n : Nm)") is ErrorCode.KIND_MISMATCH


class TestGelRules:
    def test_formation(self, elab):
        assert inferred(elab, "Gel Nm x", "(x : @I)") == "U"

    def test_formation_needs_fresh_carrier(self, elab):
        assert rejected(elab, "Gel A x", "(x : @I)", "(A : U)") is ErrorCode.GEL_FRESHNESS_VIOLATION

    def test_introduction(self, elab):
        assert inferred(elab, "gel n x", "(n : Nm)", "(x : @I)") == "Gel Nm x"

    def test_introduction_needs_fresh_argument(self, elab):
        assert rejected(elab, "gel n x", "(x : @I)", "(n : Nm)") is ErrorCode.GEL_FRESHNESS_VIOLATION
        assert rejected(elab, "gel (name x) x", "(x : @I)") is ErrorCode.GEL_FRESHNESS_VIOLATION

    def test_elimination(self, elab):
        assert inferred(elab, "ung b", "(b : (x : @I) -o Gel Nm x)") == "Nm"

    def test_elimination_needs_gel_codomain(self, elab):
        assert rejected(elab, "ung (\\(x : @I). name x)") is ErrorCode.TYPE_MISMATCH

    def test_kernel_rejects_carrier_mentioning_the_bridge(self, prelude):
        # (x : @I) -o Gel (Gel Nm x) x: the carrier mentions x
        bridge_ty = BridgePi(GelType(GelType(NmType(), Var(0)), Var(0)))
        with pytest.raises(KernelError):
            TypeChecker(prelude).check_type(Telescope(), bridge_ty)


class TestExtent:
    def test_forg_type(self, elab):
        assert inferred(elab, "forg") == "(A : U) -> (x : @I) -o Gel A x -> A"

    def test_ext_with_motive(self, elab):
        source = ("ext (\\(g' : (y : @I) -o Gel Nm y) (y : @I). g' y) x g "
                  "with motive \\(y : @I) (a : Gel Nm y). Gel Nm y")
        assert inferred(elab, source, "(x : @I)", "(g : Gel Nm x)") == "Gel Nm x"

    def test_method_must_be_fresh(self, elab):
        source = "ext (\\(a' : @I -o Nm) (y : @I). n) x (name x)"
        assert rejected(elab, source, "(x : @I)", "(n : Nm)") is ErrorCode.AFFINITY_VIOLATION

    def test_dependent_result_needs_motive(self, elab):
        source = "ext (\\(a' : @I -o Nm) (y : @I). (refl : Id Nm (a' y) (a' y))) x (name x)"
        assert rejected(elab, source, "(x : @I)") is ErrorCode.MOTIVE_MISMATCH

    def test_malformed_motive(self, elab):
        source = "ext (\\(a' : @I -o Nm) (y : @I). a' y) x (name x) with motive \\(a : Nm). Nm"
        assert rejected(elab, source, "(x : @I)") is ErrorCode.MOTIVE_MISMATCH

    def test_argument_type_is_checked(self, elab):
        source = "ext (\\(a' : @I -o Nm) (y : @I). a' y) x zero"
        assert rejected(elab, source, "(x : @I)") is ErrorCode.TYPE_MISMATCH


class TestNameRules:
    def test_formation(self, elab):
        assert inferred(elab, "Nm") == "U"

    def test_introduction(self, elab):
        assert inferred(elab, "name x", "(x : @I)") == "Nm"

    def test_introduction_needs_bridge_variable(self, elab):
        assert rejected(elab, "name n", "(n : Nm)") is ErrorCode.KIND_MISMATCH
        assert rejected(elab, "name q") is ErrorCode.UNBOUND_NAME

    def test_elimination_type_follows_motive(self, elab):
        source = ("indNm x n zero (\\(g : Gel Nm x). suc zero) "
                  "with motive \\(z : Nm). Nat")
        assert inferred(elab, source, "(x : @I)", "(n : Nm)") == "Nat"

    def test_elimination_base_case_is_checked(self, elab):
        source = "indNm x n tt (\\(g : Gel Nm x). zero) with motive \\(z : Nm). Nat"
        assert rejected(elab, source, "(x : @I)", "(n : Nm)") is ErrorCode.TYPE_MISMATCH

    def test_elimination_step_binder_must_be_gel(self, elab):
        source = "indNm x n zero (\\(g : Nm). zero) with motive \\(z : Nm). Nat"
        assert rejected(elab, source, "(x : @I)", "(n : Nm)") is ErrorCode.MOTIVE_MISMATCH

    def test_kernel_name_of_term_variable(self, prelude):
        ctx = Telescope().cart("n", NmType())
        with pytest.raises(KernelError) as err:
            infer(prelude, ctx, CName(Var(0)))
        assert err.value.code is ErrorCode.KIND_MISMATCH


class TestDependentFragment:
    def test_universe_in_universe(self, elab):
        assert inferred(elab, "U") == "U"

    def test_sigma(self, elab):
        assert inferred(elab, "(zero, tt)") == "Sig (_ : Nat). Unit"

    def test_not_a_function(self, elab):
        assert rejected(elab, "zero zero") is ErrorCode.NOT_A_FUNCTION

    def test_unannotated_lambda_cannot_be_inferred(self, elab):
        assert rejected(elab, "\\a. a") is ErrorCode.AMBIGUOUS_BINDER_KIND

    def test_refl_needs_equal_sides(self, elab):
        assert rejected(elab, "(refl : Id Nat zero (suc zero))") is ErrorCode.TYPE_MISMATCH

    def test_refl_by_computation(self, elab):
        assert inferred(elab, "(refl : Id U (Fin zero) Empty)") == "Id U (Fin zero) Empty"

    def test_universe_expected(self, prelude):
        with pytest.raises(KernelError) as err:
            TypeChecker(prelude).check_type(Telescope(), Lam(NmType(), Var(0)))
        assert err.value.code is ErrorCode.UNIVERSE_EXPECTED

    def test_unbound_variable(self, prelude):
        with pytest.raises(KernelError) as err:
            infer(prelude, Telescope(), Var(2))
        assert err.value.code is ErrorCode.UNBOUND_VARIABLE

    def test_bridge_variable_used_as_term(self, prelude):
        with pytest.raises(KernelError) as err:
            infer(prelude, Telescope().aff("x"), Var(0))
        assert err.value.code is ErrorCode.KIND_MISMATCH


class TestTelescopes:
    def test_well_formed(self, prelude):
        gamma = Telescope().cart("A", Universe()).aff("x").cart("a", GelType(Var(1), Var(0)))
        check_telescope(prelude, gamma)

    def test_ill_formed_entry(self, prelude):
        gamma = Telescope().cart("f", Lam(NmType(), Var(0)))
        with pytest.raises(KernelError) as err:
            check_telescope(prelude, gamma)
        assert err.value.code is ErrorCode.ILL_FORMED_ENTRY_TYPE

    def test_entry_checked_in_its_prefix(self, prelude):
        # Gel A x with A bound after x
        gamma = Telescope().aff("x").cart("A", Universe()).cart("a", GelType(Var(0), Var(1)))
        with pytest.raises(KernelError) as err:
            check_telescope(prelude, gamma)
        assert err.value.code is ErrorCode.ILL_FORMED_ENTRY_TYPE


class TestSignature:
    def test_extend_is_persistent(self, prelude):
        ident = CoreDef("ident", BridgePi(NmType()), BridgeLam(CName(Var(0))))
        extended = check_declaration(prelude, ident)
        assert "ident" in extended
        assert "ident" not in prelude
        assert extended.kind_of("ident") == "definition"

    def test_duplicate_name(self, prelude):
        with pytest.raises(KernelError) as err:
            check_declaration(prelude, CoreDef("tt", NmType(), NmType()))
        assert err.value.code is ErrorCode.DUPLICATE_NAME
        assert err.value.diagnostic.declaration == "tt"

    def test_kinds(self, prelude):
        assert prelude.kind_of("Sum") == "data"
        assert prelude.kind_of("inl") == "constructor"
        assert prelude.kind_of("indSum") == "eliminator"
        assert prelude.kind_of("swapDep") == "postulate"
        assert prelude.kind_of("nowhere") is None

    def test_empty_signature(self):
        assert len(Signature()) == 0
        assert Signature().global_names() == []


def test_subject_reduction_over_the_library(corpus):
    """Every library definition normalizes to a term of its declared type."""
    checker = TypeChecker(corpus)
    definitions = [e for e in corpus.entries() if isinstance(e, Definition)]
    assert len(definitions) >= 15
    for entry in definitions:
        body = Evaluator(corpus).normalize(Telescope(), entry.body)
        checker.check(Telescope(), body, entry.type)


def test_library_size(corpus):
    data = [name for name in corpus.names() if corpus.kind_of(name) == "data"]
    assert len(data) >= 7
    for name in ("forg", "loosen", "t1", "t2pre", "t2", "tighten", "bind", "matchbind",
                 "matchdecl", "nu", "swap", "Proc", "AProc", "nsub'", "Ltm", "HMod",
                 "Henc", "hlamLtm", "ubd"):
        assert name in corpus, name


def test_cart_entry_without_type(prelude):
    with pytest.raises(KernelError) as err:
        check_telescope(prelude, Telescope((Cart("a", None),)))
    assert err.value.code is ErrorCode.ILL_FORMED_ENTRY_TYPE


@pytest.mark.parametrize("entry", [
    Signature.extend, Signature.kind_of, TypeChecker, TypeChecker.infer, TypeChecker.check,
    TypeChecker.check_type, TypeChecker.check_telescope, TypeChecker.check_data,
    TypeChecker.ext_family_of_method, check_declaration,
    Elaborator, Elaborator.infer, Elaborator.check, Elaborator.run, elaborate, elaborate_expr,
], ids=lambda f: f.__qualname__)
def test_entry_points_are_documented(entry):
    assert entry.__doc__ and entry.__doc__.strip()
