"""Bounded realizability checking, convergence, and the learning loop.

The realizability relation is undecidable as stated (the universal clause
ranges over all numerals and the implication clause over all realizers), so
the checker is three-valued: Holds and Fails are definitive for everything it
actually inspected, Unknown records why it could not decide.  Universal
formulas are tested on the instances below ``bound``; implications are tested
only against caller-supplied candidate realizers for the antecedent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EngineError, FuelExhausted, InconsistentUpdate, PreconditionError
from .evaluate import (
    BoolV, NumV, StateV, approximate, eval_atom, eval_closed, normalize,
)
from .formulas import (
    And, AtomF, Exists, Forall, Formula, formula_closed, Imp, Or,
    print_formula, realizer_type,
)
from .knowledge import EMPTY_STATE, KnowledgeState, state_leq, state_of
from .terms import (
    App, numeral, Proj, STATE, Term, has_empty_state, is_closed,
)
from .typecheck import typecheck

__all__ = [
    "Verdict", "Holds", "Fails", "Unknown", "HOLDS", "Chain", "realizes",
    "converges_on", "fixpoint_learn",
]


class Verdict:
    __slots__ = ()


@dataclass(frozen=True)
class Holds(Verdict):
    def __repr__(self):
        return "Holds"


@dataclass(frozen=True)
class Fails(Verdict):
    path: tuple  # of strings, outermost clause first

    def __repr__(self):
        return "Fails(%s)" % " / ".join(self.path)


@dataclass(frozen=True)
class Unknown(Verdict):
    reason: str

    def __repr__(self):
        return "Unknown(%s)" % self.reason


HOLDS = Holds()


@dataclass(frozen=True)
class Chain:
    """A weakly increasing, finite sequence of knowledge states."""

    states: tuple

    def __post_init__(self):
        for a, b in zip(self.states, self.states[1:]):
            if not state_leq(a, b):
                raise ValueError("chain is not weakly increasing")

    def __len__(self):
        return len(self.states)


def _proj0(t):
    return Proj(0, t)


def _proj1(t):
    return Proj(1, t)


def _tern(t, i):
    # Ternary projections over <a, <b, c>>: 0 -> a, 1 -> b, 2 -> c.
    if i == 0:
        return Proj(0, t)
    return Proj(i - 1, Proj(1, t))


def realizes(t: Term, s: KnowledgeState, a: Formula, bound: int,
             candidates=()) -> Verdict:
    """Decide (boundedly) whether ``t`` carries evidence for ``a`` at ``s``."""
    if not is_closed(t):
        raise PreconditionError("open-term", "realizer must be closed")
    if not has_empty_state(t):
        raise PreconditionError(
            "embedded-state", "realizer must contain only empty state constants")
    if not formula_closed(a):
        raise PreconditionError("open-formula", "formula must be closed")
    want = realizer_type(a)
    got = typecheck(t)
    if got != want:
        raise PreconditionError(
            "type-mismatch",
            "realizer has type %r but the formula needs %r" % (got, want))
    tn = normalize(approximate(t, s), check_oracles=False)
    cands = tuple(normalize(approximate(u, s), check_oracles=False)
                  for u in candidates
                  if is_closed(u) and has_empty_state(u))
    return _check(tn, s, a, bound, cands, ())


def _combine(*verdicts):
    unknown = None
    for v in verdicts:
        if isinstance(v, Fails):
            return v
        if isinstance(v, Unknown) and unknown is None:
            unknown = v
    return unknown if unknown is not None else HOLDS


def _check(tn, s, a, bound, candidates, path) -> Verdict:
    # tn is the evidence already approximated at s and normalized; clause
    # descent works on its components, so shared prefixes evaluate once.
    if isinstance(a, AtomF):
        v = _readback_state(tn)
        if not v.is_empty():
            return HOLDS
        if eval_atom(a):
            return HOLDS
        return Fails(path + (
            "atom %s is false but the evidence is empty at %s"
            % (print_formula(a), s.to_sexpr()),))
    if isinstance(a, And):
        return _combine(
            _check(_component(tn, _proj0(tn)), s, a.left, bound, candidates,
                   path + ("and-left",)),
            _check(_component(tn, _proj1(tn), second=True), s, a.right, bound,
                   candidates, path + ("and-right",)))
    if isinstance(a, Or):
        flag = eval_closed(_tern(tn, 0), check_oracles=False)
        if not isinstance(flag, BoolV):
            raise EngineError("disjunction flag did not evaluate to a boolean")
        if flag.value:
            return _check(normalize(_tern(tn, 1), check_oracles=False), s, a.left, bound, candidates,
                          path + ("or-left",))
        return _check(normalize(_tern(tn, 2), check_oracles=False), s, a.right, bound, candidates,
                      path + ("or-right",))
    if isinstance(a, Imp):
        if not candidates:
            return Unknown("implication not checkable without candidate "
                           "antecedent realizers")
        want = realizer_type(a.left)
        verdicts = []
        relevant = [u for u in candidates if typecheck(u) == want]
        if not relevant:
            return Unknown("no candidate has the antecedent's realizer type")
        for u in relevant:
            pre = _check(u, s, a.left, bound, candidates,
                         path + ("imp-antecedent",))
            if isinstance(pre, Holds):
                verdicts.append(
                    _check(normalize(App(tn, u), check_oracles=False), s, a.right, bound, candidates,
                           path + ("imp-consequent",)))
        return _combine(*verdicts)
    if isinstance(a, Forall):
        if bound <= 0:
            return Unknown("universal quantifier bound reached")
        verdicts = []
        for n in range(bound):
            inst = _subst_inst(a, n)
            v = _check(normalize(App(tn, numeral(n)), check_oracles=False),
                       s, inst, bound,
                       candidates, path + ("forall n=%d" % n,))
            if isinstance(v, Fails):
                return v
            verdicts.append(v)
        return _combine(*verdicts)
    if isinstance(a, Exists):
        w = eval_closed(_proj0(tn), check_oracles=False)
        if not isinstance(w, NumV):
            raise EngineError("existential witness did not evaluate to a numeral")
        inst = _subst_inst(a, w.value)
        return _check(_component(tn, _proj1(tn), second=True), s, inst, bound,
                      candidates, path + ("exists n=%d" % w.value,))
    raise EngineError("not a formula: %r" % (a,))


def _component(tn, projected, second=False):
    from .terms import Pair
    if isinstance(tn, Pair):
        return tn.snd if second else tn.fst
    return normalize(projected)


def _readback_state(tn):
    v = eval_closed(tn)
    if not isinstance(v, StateV):
        raise EngineError("atom evidence did not evaluate to a state")
    return v.state


def _subst_inst(a, n):
    from .formulas import subst_formula
    return subst_formula(a.body, a.var, numeral(n))


def converges_on(t: Term, chain: Chain):
    """Smallest index from which the approximations along the chain agree.

    None when the last two values differ, in which case the finite chain
    cannot certify stabilization.
    """
    from .terms import BoolTy, NatTy, StateTy

    if not is_closed(t):
        raise PreconditionError("open-term", "probe must be closed")
    ty = typecheck(t)
    if not isinstance(ty, (NatTy, BoolTy, StateTy)):
        raise PreconditionError("non-atomic",
                                "probe must have atomic type, got %r" % ty)
    from .evaluate import eval_at_state
    values = [eval_at_state(t, s) for s in chain.states]
    if len(values) >= 2 and values[-1] != values[-2]:
        return None
    i = len(values) - 1
    while i > 0 and values[i - 1] == values[-1]:
        i -= 1
    return i


def fixpoint_learn(t: Term, s0: KnowledgeState = EMPTY_STATE,
                   fuel: int = 10_000, on_step=None) -> KnowledgeState:
    """Grow a state until the approximation of ``t`` evaluates to the empty
    state, taking the plain union at each step.

    The union is validated against the left-biased merge: a divergence means
    the input does not behave like evidence and is reported instead of being
    silently resolved.
    """
    if not is_closed(t):
        raise PreconditionError("open-term", "term must be closed")
    if not has_empty_state(t):
        raise PreconditionError(
            "embedded-state", "term must contain only empty state constants")
    if typecheck(t) != STATE:
        raise PreconditionError("type-mismatch", "term must have type state")
    state = s0
    for iteration in range(fuel + 1):
        from .evaluate import eval_at_state
        tau = eval_at_state(t, state)
        if not isinstance(tau, StateV):
            raise EngineError("approximation did not evaluate to a state")
        if on_step is not None:
            on_step(iteration, tau.state, state)
        if tau.state.is_empty():
            return state
        merged_atoms = set(state.atoms) | set(tau.state.atoms)
        try:
            merged = state_of(merged_atoms)
        except EngineError as err:
            raise InconsistentUpdate(
                "update conflicts with the current state: %s" % err) from err
        from .knowledge import consistent_union
        if merged != consistent_union(state, tau.state):
            raise InconsistentUpdate(
                "plain union and left-biased merge disagree at %s"
                % state.to_sexpr())
        state = merged
    raise FuelExhausted(
        "no fixed point within %d iterations; input is likely not evidence" % fuel)
