"""Normalization, state-indexed approximation, and value extraction.

Reduction implements the usual beta / projection / conditional / recursor
rules together with the state rules: guard and witness lookups, single-atom
add, and left-biased merge.  The state rules fire only once their state
argument is a literal state constant and their numeric arguments are literal
numerals; anything else is left stuck, which is what makes reduction under
binders well behaved.

Two full-normalization strategies are provided (leftmost-outermost and
innermost); on closed terms of atomic type they must agree, and the test
suite samples that agreement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EngineError, FuelExhausted, OracleNotApproximated, TypeCheckError
from .formulas import AtomF
from .knowledge import KnowledgeState, add_semantics, consistent_union, lookup
from .terms import (
    App, CupConst, FALSE, If, Lam, Learn, LEARN_ADD, LEARN_CHI, LEARN_PHI,
    numeral, numeral_value, Oracle, ORACLE_ADD, ORACLE_PHI, ORACLE_X, Pair,
    Predicate, Proj, Rec, StateConst, Succ, Term, TFalse, TRUE, TTrue, Var,
    Zero, apply_all, bool_value, contains_oracle, free_vars, print_term,
    subst,
)
from .typecheck import typecheck
from .terms import arrows, BOOL, NAT

__all__ = [
    "DEFAULT_FUEL", "normalize", "approximate", "Value", "NumV", "BoolV",
    "StateV", "PairV", "eval_closed", "eval_atom", "make_predicate",
    "neg_pred",
]

DEFAULT_FUEL = 10_000_000


class _Fuel:
    __slots__ = ("remaining",)

    def __init__(self, budget):
        self.remaining = budget

    def spend(self):
        self.remaining -= 1
        if self.remaining < 0:
            raise FuelExhausted("reduction step budget exhausted")


def _learn_argcount(t: Learn) -> int:
    # State argument plus the numeric arguments the rule consumes.
    if t.kind == LEARN_ADD:
        return 1 + t.pred.arity
    return 1 + (t.pred.arity - 1)


def _fire_state_rule(head, args):
    """Apply a state rule to fully normalized arguments, or None if stuck."""
    if isinstance(head, CupConst):
        s1, s2 = args
        if isinstance(s1, StateConst) and isinstance(s2, StateConst):
            return StateConst(consistent_union(s1.state, s2.state))
        return None
    if not isinstance(args[0], StateConst):
        return None
    state = args[0].state
    nums = [numeral_value(a) for a in args[1:]]
    if any(n is None for n in nums):
        return None
    if head.kind == LEARN_CHI:
        return TRUE if lookup(state, head.pred, nums) is not None else FALSE
    if head.kind == LEARN_PHI:
        w = lookup(state, head.pred, nums)
        return numeral(w if w is not None else 0)
    if head.kind == LEARN_ADD:
        return StateConst(add_semantics(state, head.pred, nums[:-1], nums[-1]))
    raise EngineError("unknown learn constant %r" % head.kind)


def _whnf(t, fuel):
    """Weak head normal form; leaves a stuck application re-assembled."""
    stack = []
    while True:
        if isinstance(t, App):
            stack.append(t.arg)
            t = t.fn
            continue
        if isinstance(t, Lam) and stack:
            fuel.spend()
            t = subst(t.body, t.var, stack.pop())
            continue
        if isinstance(t, Proj):
            inner = _whnf(t.arg, fuel)
            if isinstance(inner, Pair):
                fuel.spend()
                t = inner.fst if t.index == 0 else inner.snd
                continue
            t = Proj(t.index, inner)
            break
        if isinstance(t, If):
            cond = _whnf(t.cond, fuel)
            if isinstance(cond, TTrue):
                fuel.spend()
                t = t.then
                continue
            if isinstance(cond, TFalse):
                fuel.spend()
                t = t.orelse
                continue
            t = If(cond, t.then, t.orelse)
            break
        if isinstance(t, Rec):
            arg = _whnf(t.arg, fuel)
            if isinstance(arg, Zero):
                fuel.spend()
                t = t.base
                continue
            if isinstance(arg, Succ):
                fuel.spend()
                t = App(App(t.step, arg.arg), Rec(t.ty, t.base, t.step, arg.arg))
                continue
            t = Rec(t.ty, t.base, t.step, arg)
            break
        if isinstance(t, Learn) or isinstance(t, CupConst):
            need = 2 if isinstance(t, CupConst) else _learn_argcount(t)
            if len(stack) >= need:
                args = [
                    _nf(stack.pop(), fuel)
                    for _ in range(need)
                ]
                fired = _fire_state_rule(t, args)
                if fired is not None:
                    fuel.spend()
                    t = fired
                    continue
                # Stuck: keep the normalized arguments in place.
                for a in reversed(args):
                    stack.append(a)
            break
        break
    while stack:
        t = App(t, stack.pop())
    return t


def _nf(t, fuel):
    """Full normal form by leftmost-outermost reduction."""
    t = _whnf(t, fuel)
    if isinstance(t, Succ):
        return Succ(_nf(t.arg, fuel))
    if isinstance(t, Pair):
        return Pair(_nf(t.fst, fuel), _nf(t.snd, fuel))
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, _nf(t.body, fuel))
    if isinstance(t, If):
        return If(_nf(t.cond, fuel), _nf(t.then, fuel), _nf(t.orelse, fuel))
    if isinstance(t, Proj):
        return Proj(t.index, _nf(t.arg, fuel))
    if isinstance(t, Rec):
        return Rec(t.ty, _nf(t.base, fuel), _nf(t.step, fuel), _nf(t.arg, fuel))
    if isinstance(t, App):
        return App(_nf(t.fn, fuel), _nf(t.arg, fuel))
    return t


def _nf_inner(t, fuel):
    """Full normal form by innermost (applicative-order) reduction."""
    if isinstance(t, Succ):
        return Succ(_nf_inner(t.arg, fuel))
    if isinstance(t, Pair):
        return Pair(_nf_inner(t.fst, fuel), _nf_inner(t.snd, fuel))
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, _nf_inner(t.body, fuel))
    if isinstance(t, Proj):
        arg = _nf_inner(t.arg, fuel)
        if isinstance(arg, Pair):
            fuel.spend()
            return arg.fst if t.index == 0 else arg.snd
        return Proj(t.index, arg)
    if isinstance(t, If):
        cond = _nf_inner(t.cond, fuel)
        if isinstance(cond, TTrue):
            fuel.spend()
            return _nf_inner(t.then, fuel)
        if isinstance(cond, TFalse):
            fuel.spend()
            return _nf_inner(t.orelse, fuel)
        return If(cond, _nf_inner(t.then, fuel), _nf_inner(t.orelse, fuel))
    if isinstance(t, Rec):
        base = _nf_inner(t.base, fuel)
        step = _nf_inner(t.step, fuel)
        arg = _nf_inner(t.arg, fuel)
        if isinstance(arg, Zero):
            fuel.spend()
            return base
        if isinstance(arg, Succ):
            fuel.spend()
            return _nf_inner(
                App(App(step, arg.arg), Rec(t.ty, base, step, arg.arg)), fuel)
        return Rec(t.ty, base, step, arg)
    if isinstance(t, App):
        fn = _nf_inner(t.fn, fuel)
        arg = _nf_inner(t.arg, fuel)
        if isinstance(fn, Lam):
            fuel.spend()
            return _nf_inner(subst(fn.body, fn.var, arg), fuel)
        out = App(fn, arg)
        head = out
        args = []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        if isinstance(head, (Learn, CupConst)):
            need = 2 if isinstance(head, CupConst) else _learn_argcount(head)
            if len(args) == need:
                fired = _fire_state_rule(head, args)
                if fired is not None:
                    fuel.spend()
                    return _nf_inner(fired, fuel)
        return out
    return t


def normalize(t: Term, fuel: int = DEFAULT_FUEL, strategy: str = "normal",
              check_oracles: bool = True) -> Term:
    """The unique normal form of an oracle-free term.

    ``check_oracles=False`` skips the oracle scan; callers may do that only
    when the input provably has none (e.g. it came out of ``approximate``).
    """
    if check_oracles and contains_oracle(t):
        raise OracleNotApproximated(
            "term contains oracle constants; approximate it at a state first")
    cell = _Fuel(fuel)
    if strategy == "normal":
        return _nf(t, cell)
    if strategy == "innermost":
        return _nf_inner(t, cell)
    raise ValueError("unknown strategy %r" % strategy)


def eval_at_state(t: Term, state: KnowledgeState, fuel: int = DEFAULT_FUEL) -> "Value":
    """Approximate at ``state``, normalize, and read the value back."""
    return _readback(normalize(approximate(t, state), fuel=fuel,
                               check_oracles=False))


def approximate(t: Term, state: KnowledgeState) -> Term:
    """Replace every oracle constant by its learnable counterpart at ``state``."""
    sc = StateConst(state)

    def go(u):
        if isinstance(u, Oracle):
            kind = {ORACLE_X: LEARN_CHI, ORACLE_PHI: LEARN_PHI,
                    ORACLE_ADD: LEARN_ADD}[u.kind]
            return App(Learn(kind, u.pred), sc)
        if isinstance(u, Succ):
            return Succ(go(u.arg))
        if isinstance(u, Pair):
            return Pair(go(u.fst), go(u.snd))
        if isinstance(u, Proj):
            return Proj(u.index, go(u.arg))
        if isinstance(u, If):
            return If(go(u.cond), go(u.then), go(u.orelse))
        if isinstance(u, Rec):
            return Rec(u.ty, go(u.base), go(u.step), go(u.arg))
        if isinstance(u, Lam):
            return Lam(u.var, u.ty, go(u.body))
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg))
        return u

    return go(t)


# ---------------------------------------------------------------------------
# Values


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class NumV(Value):
    value: int


@dataclass(frozen=True)
class BoolV(Value):
    value: bool


@dataclass(frozen=True)
class StateV(Value):
    state: KnowledgeState


@dataclass(frozen=True)
class PairV(Value):
    fst: Value
    snd: Value


def _readback(t: Term) -> Value:
    n = numeral_value(t)
    if n is not None:
        return NumV(n)
    b = bool_value(t)
    if b is not None:
        return BoolV(b)
    if isinstance(t, StateConst):
        return StateV(t.state)
    if isinstance(t, Pair):
        return PairV(_readback(t.fst), _readback(t.snd))
    raise EngineError("normal form is not a first-order value: %s" % print_term(t))


def eval_closed(t: Term, fuel: int = DEFAULT_FUEL,
                check_oracles: bool = True) -> Value:
    """Normalize a closed oracle-free term of atomic or product type."""
    return _readback(normalize(t, fuel=fuel, check_oracles=check_oracles))


def eval_atom(f: AtomF, env=None, fuel: int = DEFAULT_FUEL) -> bool:
    """Truth of an atomic formula with free variables bound to numerals."""
    args = list(f.args)
    if env:
        for name, k in env.items():
            args = [subst(a, name, numeral(k)) for a in args]
    if any(contains_oracle(a) for a in args):
        raise OracleNotApproximated("atom arguments contain oracle constants")
    applied = apply_all(f.pred.body, args)
    if free_vars(applied):
        raise EngineError("atom %s has unbound variables %s"
                          % (f.pred.display(), sorted(free_vars(applied))))
    # predicate bodies are validated pure at construction: skip the scan
    nf = normalize(applied, fuel=fuel, check_oracles=False)
    b = bool_value(nf)
    if b is None:
        raise EngineError("atom for %s did not normalize to a boolean: %s"
                          % (f.pred.display(), print_term(nf)))
    return b


# ---------------------------------------------------------------------------
# Predicate construction


def _pure_t_term(t: Term) -> bool:
    if isinstance(t, (Oracle, Learn, CupConst, StateConst)):
        return False
    if isinstance(t, Succ):
        return _pure_t_term(t.arg)
    if isinstance(t, Pair):
        return _pure_t_term(t.fst) and _pure_t_term(t.snd)
    if isinstance(t, Proj):
        return _pure_t_term(t.arg)
    if isinstance(t, If):
        return (_pure_t_term(t.cond) and _pure_t_term(t.then)
                and _pure_t_term(t.orelse))
    if isinstance(t, Rec):
        return (_pure_t_term(t.base) and _pure_t_term(t.step)
                and _pure_t_term(t.arg))
    if isinstance(t, Lam):
        return _pure_t_term(t.body)
    if isinstance(t, App):
        return _pure_t_term(t.fn) and _pure_t_term(t.arg)
    return True


def make_predicate(arity: int, body: Term, name: str | None = None) -> Predicate:
    """Validate, normalize, and wrap a boolean test on ``arity`` naturals."""
    if arity < 1:
        raise ValueError("predicate arity must be at least 1")
    if free_vars(body):
        raise TypeCheckError("predicate body must be closed; free: %s"
                             % sorted(free_vars(body)))
    if not _pure_t_term(body):
        raise TypeCheckError("predicate body must be a pure T term")
    want = arrows([NAT] * arity, BOOL)
    got = typecheck(body)
    if got != want:
        raise TypeCheckError("predicate body has type %s, expected %s"
                             % (got, want))
    return Predicate(arity, normalize(body), name=name)


def neg_pred(pred: Predicate, name: str | None = None) -> Predicate:
    """The boolean negation of a predicate, again in normal form."""
    names = ["x%d" % i for i in range(pred.arity)]
    applied = apply_all(pred.body, [Var(n) for n in names])
    body: Term = If(applied, FALSE, TRUE)
    for n in reversed(names):
        body = Lam(n, NAT, body)
    if name is None and pred.name is not None:
        name = "not-" + pred.name
    return make_predicate(pred.arity, body, name=name)
