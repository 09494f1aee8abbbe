"""Randomized agreement between the syntactic freshness test and two oracles.

Positional: the generator records, for every free variable it emits, the
telescope position it refers to; x is fresh for t when t mentions neither x nor
a cartesian entry to the right of x.

Typed: a well-typed term is fresh for x exactly when it re-checks in Γ|x.
"""

import random
from typing import List, Set, Tuple

import pytest

from src.core.diagnostics import ErrorCode, KernelError
from src.core.syntax import (
    Aff, App, BridgeApp, BridgeLam, BridgePi, CName, Fst, Lam, NmType, Pair, Pi, Sigma,
    Telescope, Term, Universe, Var,
    capture, is_fresh, restrict, strengthen, weaken_from_restriction,
)
from src.core.typechecker import Signature, TypeChecker

SEEDS = range(5)
TERMS_PER_SEED = 200
MAX_ENTRIES = 8


def random_telescope(rng: random.Random, cart_type: Term = Universe()) -> Telescope:
    gamma = Telescope()
    for i in range(rng.randint(1, MAX_ENTRIES)):
        gamma = gamma.aff(f"x{i}") if rng.random() < 0.5 else gamma.cart(f"a{i}", cart_type)
    if not any(isinstance(e, Aff) for e in gamma.entries):
        gamma = gamma.aff("x")
    return gamma


class TermGen:
    def __init__(self, rng: random.Random, gamma: Telescope):
        self.rng = rng
        self.size = len(gamma)
        self.free: Set[int] = set()

    def var(self, depth: int) -> Var:
        if depth and self.rng.random() < 0.3:
            return Var(self.rng.randrange(depth))
        pos = self.rng.randrange(self.size)
        self.free.add(pos)
        return Var(self.size - 1 - pos + depth)

    def term(self, depth: int = 0, fuel: int = 5):
        roll = self.rng.random() if fuel else 0.0
        if roll < 0.35:
            return self.var(depth) if self.rng.random() < 0.8 else Universe()
        if roll < 0.5:
            return App(self.term(depth, fuel - 1), self.term(depth, fuel - 1))
        if roll < 0.65:
            return Lam(NmType(), self.term(depth + 1, fuel - 1))
        if roll < 0.75:
            return BridgeLam(self.term(depth + 1, fuel - 1))
        if roll < 0.85:
            return BridgeApp(self.term(depth, fuel - 1), self.var(depth))
        if roll < 0.93:
            return CName(self.var(depth))
        return Pair(self.term(depth, fuel - 1), self.term(depth, fuel - 1))


def oracle_fresh(gamma: Telescope, x_pos: int, free: Set[int]) -> bool:
    return all(p != x_pos and (p < x_pos or isinstance(gamma.entries[p], Aff)) for p in free)


def cases(seed: int):
    rng = random.Random(seed)
    for _ in range(TERMS_PER_SEED):
        gamma = random_telescope(rng)
        gen = TermGen(rng, gamma)
        t = gen.term()
        affine = [p for p, e in enumerate(gamma.entries) if isinstance(e, Aff)]
        x_pos = rng.choice(affine)
        yield gamma, len(gamma) - 1 - x_pos, x_pos, t, gen.free


@pytest.mark.parametrize("seed", SEEDS)
def test_is_fresh_agrees_with_oracle(seed):
    for gamma, x, x_pos, t, free in cases(seed):
        assert is_fresh(gamma, x, t) == oracle_fresh(gamma, x_pos, free), (gamma, x, t)


@pytest.mark.parametrize("seed", SEEDS)
def test_restriction_keeps_exactly_the_fresh_positions(seed):
    for gamma, x, x_pos, _, _ in cases(seed):
        kept = [p for p in range(len(gamma)) if oracle_fresh(gamma, x_pos, {p})]
        assert restrict(gamma, x).entries == tuple(gamma.entries[p] for p in kept)


@pytest.mark.parametrize("seed", SEEDS)
def test_fresh_terms_move_in_and_out_of_the_restriction(seed):
    fresh_seen = 0
    for gamma, x, x_pos, t, free in cases(seed):
        if not oracle_fresh(gamma, x_pos, free):
            with pytest.raises(KernelError) as err:
                strengthen(gamma, x, t)
            assert err.value.code is ErrorCode.AFFINITY_VIOLATION
            continue
        fresh_seen += 1
        assert weaken_from_restriction(gamma, x, strengthen(gamma, x, t)) == t
    assert fresh_seen > 0


@pytest.mark.parametrize("seed", SEEDS)
def test_capture_succeeds_when_only_x_blocks_freshness(seed):
    for gamma, x, x_pos, t, free in cases(seed):
        others = free - {x_pos}
        if oracle_fresh(gamma, x_pos, others):
            assert isinstance(capture(gamma, x, t), BridgeLam)
        else:
            with pytest.raises(KernelError) as err:
                capture(gamma, x, t)
            assert err.value.code in (ErrorCode.CAPTURE_VIOLATION, ErrorCode.AFFINITY_VIOLATION)


class TypedGen:
    """Well-typed terms over a telescope of names and bridge variables; every type is closed."""

    def __init__(self, rng: random.Random, gamma: Telescope):
        self.rng = rng
        self.gamma = gamma

    def pick(self, local: List[bool], affine: bool):
        found = [i for i, kind in enumerate(reversed(local)) if kind == affine]
        found += [len(local) + j for j in range(len(self.gamma)) if self.gamma.is_affine(j) == affine]
        return Var(self.rng.choice(found)) if found else None

    def name(self, local: List[bool]) -> Term:
        v = self.pick(local, affine=False)
        if v is not None and self.rng.random() < 0.5:
            return v
        return CName(self.pick(local, affine=True))

    def term(self, local: List[bool], fuel: int = 4) -> Tuple[Term, Term]:
        roll = self.rng.random() if fuel else 0.0
        if roll < 0.4:
            return self.name(local), NmType()
        if roll < 0.55:
            (a, a_ty), (b, b_ty) = self.term(local, fuel - 1), self.term(local, fuel - 1)
            return Pair(a, b), Sigma(a_ty, b_ty)
        if roll < 0.7:
            body, ty = self.term(local + [False], fuel - 1)
            return Lam(NmType(), body), Pi(NmType(), ty)
        if roll < 0.85:
            body, ty = self.term(local + [True], fuel - 1)
            return BridgeLam(body), BridgePi(ty)
        (a, a_ty), (b, _) = self.term(local, fuel - 1), self.term(local, fuel - 1)
        return Fst(Pair(a, b)), a_ty


def rechecks_in_restriction(gamma: Telescope, x: int, t: Term, ty: Term) -> bool:
    try:
        TypeChecker(Signature()).check(restrict(gamma, x), strengthen(gamma, x, t), ty)
    except KernelError:
        return False
    return True


@pytest.mark.parametrize("seed", SEEDS)
def test_is_fresh_agrees_with_rechecking_in_restriction(seed):
    rng = random.Random(1000 + seed)
    outcomes = set()
    for _ in range(TERMS_PER_SEED):
        gamma = random_telescope(rng, cart_type=NmType())
        t, ty = TypedGen(rng, gamma).term([])
        TypeChecker(Signature()).check(gamma, t, ty)
        x = rng.choice([i for i in range(len(gamma)) if gamma.is_affine(i)])
        fresh = is_fresh(gamma, x, t)
        assert fresh == rechecks_in_restriction(gamma, x, t, ty), (gamma, x, t)
        outcomes.add(fresh)
    assert outcomes == {True, False}
