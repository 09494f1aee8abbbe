import pytest

from src.core.diagnostics import ErrorCode, KernelError
from src.core.evaluator import Evaluator, ReductionTrace
from src.core.syntax import BridgeLam, Ext, GelIntro, IndNm, Telescope, Ung, Var, CName
from src.core.typechecker import Definition
from src.surface.pretty import pretty_term

FORG_CHAIN = ["delta", "beta", "bridge-beta", "beta", "ext-beta", "beta", "bridge-beta", "gel-beta"]

NM_STEP = "indNm x {scrutinee} (inl tt) (\\(g : Gel Nm x). inr (forg Nm x g)) with motive \\(z : Nm). Sum Unit Nm"


def normal(elab, source, *groups, strategy=None, budget=None, trace=None):
    ctx, term, _ = elab(source, *groups)
    evaluator = Evaluator(elab.signature, budget=budget, strategy=strategy, trace=trace)
    return pretty_term(evaluator.normalize(ctx, term), ctx.names(), reserved=elab.signature.global_names())


class TestRules:
    def test_beta(self, elab):
        assert normal(elab, "(\\(k : Nat). suc k) zero") == "suc zero"

    def test_bridge_beta(self, elab):
        assert normal(elab, "(\\(y : @I). name y) x", "(x : @I)") == "name x"

    def test_fst_and_snd(self, elab):
        assert normal(elab, "fst (zero, suc zero)") == "zero"
        assert normal(elab, "snd (zero, suc zero)") == "suc zero"

    def test_delta_unfolds_definitions(self, elab):
        assert normal(elab, "tighten_of_identity") == "inl tt"

    def test_annotation_is_erased(self, elab):
        trace = ReductionTrace()
        assert normal(elab, "(zero : Nat)", trace=trace) == "zero"
        assert trace.rules() == ["ann"]

    def test_iota(self, elab):
        assert normal(elab, "indNat (\\_. Nat) zero (\\_ r. suc r) (suc (suc zero))") == "suc (suc zero)"

    def test_large_elimination(self, elab):
        assert normal(elab, "Fin (suc zero)") == "Sum Unit Empty"

    def test_j_beta(self, elab):
        source = "J (\\(y : Nat) (p : Id Nat zero y). Nat) (suc zero) (refl : Id Nat zero zero)"
        assert normal(elab, source) == "suc zero"

    def test_gel_beta(self, elab):
        assert normal(elab, "ung (\\(x : @I). gel n x)", "(n : Nm)") == "n"

    def test_gel_beta_needs_the_bound_variable(self, prelude):
        # ung (\x. gel (name x) x) is ill-typed; the evaluator leaves it alone
        ctx = Telescope()
        t = Ung(BridgeLam(GelIntro(CName(Var(0)), Var(0))))
        assert Evaluator(prelude).whnf(ctx, t) == t

    def test_ext_beta_fires_on_capturable_argument(self, elab):
        source = "ext (\\(b : @I -o Nm) (z : @I). (inr (b z) : Sum Unit Nm)) x (name x)"
        assert normal(elab, source, "(x : @I)") == "inr (name x)"

    def test_ext_beta_blocked_by_cartesian_entry_right_of_x(self, elab):
        ctx, term, _ = elab("forg Nm x g", "(x : @I)", "(g : Gel Nm x)")
        result = Evaluator(elab.signature).normalize(ctx, term)
        assert isinstance(result, Ext)
        assert pretty_term(result, ctx.names()).startswith("ext ")

    def test_nm_beta0(self, elab):
        assert normal(elab, NM_STEP.format(scrutinee="(name x)"), "(x : @I)") == "inl tt"

    def test_nm_beta1_fires_on_fresh_scrutinee(self, elab):
        assert normal(elab, NM_STEP.format(scrutinee="n"), "(n : Nm)", "(x : @I)") == "inr n"

    def test_nm_beta1_fires_on_other_bridge_variable(self, elab):
        assert normal(elab, NM_STEP.format(scrutinee="(name y)"), "(x y : @I)") == "inr (name y)"

    def test_nm_stuck_on_scrutinee_bound_after_x(self, elab):
        ctx, term, _ = elab(NM_STEP.format(scrutinee="n"), "(x : @I)", "(n : Nm)")
        assert isinstance(Evaluator(elab.signature).whnf(ctx, term), IndNm)


class TestTraces:
    def test_forg_chain(self, elab):
        trace = ReductionTrace()
        assert normal(elab, "forg Nm x (gel n x)", "(n : Nm)", "(x : @I)", trace=trace) == "n"
        assert trace.rules() == FORG_CHAIN
        assert trace.rules()[-4:] == ["ext-beta", "beta", "bridge-beta", "gel-beta"]

    @pytest.mark.parametrize("source, groups", [
        ("forg Nm x (gel n x)", ("(n : Nm)", "(x : @I)")),
        ("tighten (\\(x : @I). name y)", ("(y : @I)",)),
        ("nsub_demo", ()),
    ])
    def test_replay_reproduces_normal_form(self, elab_corpus, source, groups):
        ctx, term, _ = elab_corpus(source, *groups)
        trace = ReductionTrace()
        expected = Evaluator(elab_corpus.signature, trace=trace).normalize(ctx, term)
        assert len(trace) > 0
        assert Evaluator(elab_corpus.signature).replay(ctx, term, trace) == expected

    def test_budget_exceeded(self, elab):
        with pytest.raises(KernelError) as err:
            normal(elab, "forg Nm x (gel n x)", "(n : Nm)", "(x : @I)", budget=3)
        assert err.value.code is ErrorCode.BUDGET_EXCEEDED

    def test_budget_counts_every_step(self, elab):
        ctx, term, _ = elab("forg Nm x (gel n x)", "(n : Nm)", "(x : @I)")
        evaluator = Evaluator(elab.signature, budget=len(FORG_CHAIN))
        evaluator.normalize(ctx, term)
        assert evaluator.steps == len(FORG_CHAIN)

    def test_unknown_strategy(self, prelude):
        with pytest.raises(ValueError):
            Evaluator(prelude, strategy="cbv")


def test_strategies_agree_on_every_corpus_definition(corpus):
    checked = 0
    for entry in corpus.entries():
        if not isinstance(entry, Definition):
            continue
        lo = Evaluator(corpus, strategy="lo").normalize(Telescope(), entry.body)
        ri = Evaluator(corpus, strategy="ri").normalize(Telescope(), entry.body)
        assert lo == ri, entry.name
        checked += 1
    assert checked >= 15


class TestConversion:
    def test_pi_eta(self, elab):
        ctx, f, ty = elab("f", "(f : Nat -> Nat)")
        _, expanded, _ = elab("\\(k : Nat). f k", "(f : Nat -> Nat)")
        assert Evaluator(elab.signature).convertible(ctx, f, expanded, ty)

    def test_bridge_eta(self, elab):
        ctx, b, ty = elab("b", "(b : @I -o Nm)")
        _, expanded, _ = elab("\\(y : @I). b y", "(b : @I -o Nm)")
        assert Evaluator(elab.signature).convertible(ctx, b, expanded, ty)

    def test_sigma_eta(self, elab):
        ctx, p, ty = elab("p", "(p : Sig (a : Nat). Nat)")
        _, pair, _ = elab("(fst p, snd p)", "(p : Sig (a : Nat). Nat)")
        assert Evaluator(elab.signature).convertible(ctx, p, pair, ty)

    def test_distinct_values(self, elab):
        ctx, zero, ty = elab("zero")
        _, one, _ = elab("suc zero")
        assert not Evaluator(elab.signature).convertible(ctx, zero, one, ty)

    def test_gel_eta_on_stuck_terms(self, elab):
        groups = ("(b : (x : @I) -o Gel Nm x)", "(x : @I)")
        ctx, t, ty = elab("b x", *groups)
        _, u, _ = elab("gel (ung b) x", *groups)
        assert Evaluator(elab.signature).convertible(ctx, t, u, ty)


# (carrier, outer context, t : Gel carrier x with x bound innermost)
NU_GEL_INSTANCES = [
    ("Nm", ("(n : Nm)",), "gel n x"),
    ("Nat", (), "gel (suc zero) x"),
    ("Sum Unit Nm", ("(n : Nm)",), "gel (inr n) x"),
    ("(w : @I) -o Nm", (), "bind (\\(w : @I). Nm) x (name x)"),
    ("Sum Unit Nm", (), "t2 (t1 (\\(y : @I). name y)) x"),
]

NU_UNGEL_INSTANCES = [
    ("Nm", ("(n : Nm)",), "n"),
    ("Nat", (), "suc zero"),
    ("Sum Unit Nm", ("(n : Nm)",), "inr n"),
    ("Unit", (), "tt"),
    ("Nm -> Nm", (), "\\(m : Nm). m"),
]

# (B body over w, C, extra context, f, b')
MATCHBIND_INSTANCES = [
    ("Nm", "Nm", ("(f : (x : @I) -o Nm -> Gel Nm x)", "(b' : @I -o Nm)"), "f", "b'"),
    ("Nat", "Nat", ("(f : (x : @I) -o Nat -> Gel Nat x)", "(b' : @I -o Nat)"), "f", "b'"),
    ("Sum Unit Nm", "Nm", ("(f : (x : @I) -o Sum Unit Nm -> Gel Nm x)", "(b' : @I -o Sum Unit Nm)"), "f", "b'"),
    ("Nm", "Sum Unit Nm", ("(f : (x : @I) -o Nm -> Gel (Sum Unit Nm) x)", "(b' : @I -o Nm)"), "f", "b'"),
    ("Nm", "(w : @I) -o Nm", (), "bind (\\(w : @I). Nm)", "\\(y : @I). name y"),
]


class TestNuLaws:
    @pytest.mark.parametrize("carrier, groups, t", NU_GEL_INSTANCES)
    def test_gel_of_nu(self, elab, carrier, groups, t):
        groups = groups + ("(x : @I)",)
        expected = f"Gel ({carrier}) x"
        ctx, lhs, _ = elab(f"gel (nu ({carrier}) (\\(x : @I). {t})) x", *groups, expected=expected)
        _, rhs, _ = elab(t, *groups, expected=expected)
        assert Evaluator(elab.signature).convertible(ctx, lhs, rhs, elab.type(expected, *groups))

    @pytest.mark.parametrize("carrier, groups, t", NU_UNGEL_INSTANCES)
    def test_nu_of_gel(self, elab, carrier, groups, t):
        ctx, lhs, _ = elab(f"nu ({carrier}) (\\(x : @I). gel ({t}) x)", *groups)
        _, rhs, _ = elab(t, *groups, expected=carrier)
        assert Evaluator(elab.signature).convertible(ctx, lhs, rhs, elab.type(carrier, *groups))

    @pytest.mark.parametrize("b_body, c, groups, f, b", MATCHBIND_INSTANCES)
    def test_matchbind_under_gel(self, elab, b_body, c, groups, f, b):
        groups = groups + ("(x : @I)",)
        expected = f"Gel ({c}) x"
        lhs_source = f"gel (matchbind (\\(w : @I). {b_body}) ({c}) ({f}) ({b})) x"
        ctx, lhs, _ = elab(lhs_source, *groups, expected=expected)
        _, rhs, _ = elab(f"({f}) x (({b}) x)", *groups, expected=expected)
        assert Evaluator(elab.signature).convertible(ctx, lhs, rhs, elab.type(expected, *groups))


class TestDerivedPrograms:
    def test_swap_exchanges_bridge_variables(self, elab):
        assert normal(elab, "swap Nm x y (name x)", "(x y : @I)") == "name y"

    def test_swap_leaves_other_names(self, elab):
        assert normal(elab, "swap Nm x y (name z)", "(z x y : @I)") == "name z"

    def test_bind_then_ung(self, elab):
        ctx, term, _ = elab("ung (\\(x : @I). bind (\\(w : @I). Nm) x (name y))", "(y : @I)")
        _, expected, _ = elab("\\(w : @I). name y", "(y : @I)")
        assert Evaluator(elab.signature).normalize(ctx, term) == expected

    def test_tighten_of_fresh_name(self, elab):
        assert normal(elab, "tighten (\\(x : @I). name y)", "(y : @I)") == "inr (name y)"

    def test_tighten_loosen_roundtrip(self, elab):
        assert normal(elab, "tighten (loosen (inr n))", "(n : Nm)") == "inr n"
        assert normal(elab, "tighten (loosen (inl tt))") == "inl tt"

    def test_ubd_of_identity_encoding(self, elab_corpus):
        assert normal(elab_corpus, "ubd zero idEnc") == "lam (\\(x : @I). var (name x))"

    def test_nsub_demo(self, elab_corpus):
        assert normal(elab_corpus, "nsub_demo") == (
            "\\(w : @I). \\(v : @I). inp (name w) (\\(y : @I). out (name v) (name v) nil)")
