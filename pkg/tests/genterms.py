"""Seeded generator of well-typed closed terms, used by the confluence and
normal-form sampling suites.  Terms are built type-directed, so every output
type-checks by construction; sizes stay small enough that both reduction
strategies finish quickly."""

import random

from btarski.knowledge import atom_new, state_of
from btarski.library import default_registry
from btarski.terms import (
    App, Arrow, BOOL, CUP, FALSE, If, Lam, Learn, LEARN_ADD, LEARN_CHI,
    LEARN_PHI, NAT, numeral, Pair, Prod, Proj, Rec, STATE, StateConst, TRUE,
    Var,
)

_REG = default_registry()
LT = _REG.predicates["lt"]
ATOM_POOL = [atom_new(LT, (x,), y)
             for x, y in ((2, 0), (3, 1), (4, 2), (5, 0), (6, 5))]

ATOMICS = (NAT, BOOL, STATE)


def gen_type(rng, depth=1):
    if depth <= 0 or rng.random() < 0.7:
        return rng.choice(ATOMICS)
    if rng.random() < 0.5:
        return Prod(gen_type(rng, depth - 1), gen_type(rng, depth - 1))
    return Arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1))


def _random_state(rng):
    take = rng.randrange(0, 3)
    return state_of(rng.sample(ATOM_POOL, take))


def _leaf(rng, ty, ctx, fresh):
    options = [name for name, t in ctx if t == ty]
    if options and rng.random() < 0.5:
        return Var(rng.choice(options))
    if ty == NAT:
        return numeral(rng.randrange(0, 4))
    if ty == BOOL:
        return rng.choice((TRUE, FALSE))
    if ty == STATE:
        return StateConst(_random_state(rng))
    if isinstance(ty, Prod):
        return Pair(_leaf(rng, ty.left, ctx, fresh),
                    _leaf(rng, ty.right, ctx, fresh))
    name = "g%d" % next(fresh)
    return Lam(name, ty.arg, _leaf(rng, ty.res, ctx + [(name, ty.arg)], fresh))


def gen_term(rng, ty, ctx=None, depth=3, fresh=None):
    if ctx is None:
        ctx = []
    if fresh is None:
        fresh = iter(range(10_000))
    if depth <= 0:
        return _leaf(rng, ty, ctx, fresh)

    def sub(t, d=depth - 1):
        return gen_term(rng, t, ctx, d, fresh)

    options = ["leaf", "if"]
    if isinstance(ty, Arrow):
        options += ["lam", "lam", "lam"]
    if isinstance(ty, Prod):
        options += ["pair", "pair"]
    options += ["app", "proj", "rec"]
    if ty == STATE:
        options += ["cup", "add"]
    if ty == BOOL:
        options += ["chi"]
    if ty == NAT:
        options += ["phi"]
    pick = rng.choice(options)
    if pick == "leaf":
        return _leaf(rng, ty, ctx, fresh)
    if pick == "lam":
        name = "g%d" % next(fresh)
        return Lam(name, ty.arg,
                   gen_term(rng, ty.res, ctx + [(name, ty.arg)], depth - 1,
                            fresh))
    if pick == "pair":
        return Pair(sub(ty.left), sub(ty.right))
    if pick == "if":
        return If(sub(BOOL), sub(ty), sub(ty))
    if pick == "app":
        sigma = gen_type(rng)
        return App(sub(Arrow(sigma, ty)), sub(sigma))
    if pick == "proj":
        other = gen_type(rng)
        if rng.random() < 0.5:
            return Proj(0, sub(Prod(ty, other)))
        return Proj(1, sub(Prod(other, ty)))
    if pick == "rec":
        return Rec(ty, sub(ty), sub(Arrow(NAT, Arrow(ty, ty))),
                   sub(NAT))
    if pick == "cup":
        return App(App(CUP, sub(STATE)), sub(STATE))
    if pick == "add":
        return App(App(App(Learn(LEARN_ADD, LT), sub(STATE)), sub(NAT)),
                   sub(NAT))
    if pick == "chi":
        return App(App(Learn(LEARN_CHI, LT), sub(STATE)), sub(NAT))
    if pick == "phi":
        return App(App(Learn(LEARN_PHI, LT), sub(STATE)), sub(NAT))
    raise AssertionError(pick)


def gen_closed_atomic(rng, depth=3):
    return gen_term(rng, rng.choice(ATOMICS), depth=depth)
