import random

import pytest

from btarski.errors import FuelExhausted, PreconditionError
from btarski.evaluate import eval_closed, StateV
from btarski.formulas import AtomF, Exists, Forall, Imp
from btarski.knowledge import EMPTY_STATE, atom_new, state_of
from btarski.library import (
    em1_formula, em1_realizer, probe_atom_pool, random_chain,
    stability_probes,
)
from btarski.realizability import (
    Chain, Fails, Holds, realizes, converges_on, fixpoint_learn, Unknown,
)
from btarski.terms import (
    App, Lam, NAT, numeral, Oracle, ORACLE_ADD, ORACLE_X, Pair, STATE,
    StateConst, Var, ZERO, apply_all,
)


def Var_(name):
    return Var(name)


def _add_oracle(pred, *nums):
    return apply_all(Oracle(ORACLE_ADD, pred), [numeral(n) for n in nums])


# ---------------------------------------------------------------------------
# Independent ground-truth checker for the excluded-middle example.
# Implements the realizability clauses for
#   forall x (exists y P(x,y) or forall y notP(x,y))
# against the three-component realizer, with the state machinery simulated
# directly on python dicts (a state maps the key n to its witness).


def _em1_holds_bruteforce(n_bound, m_bound, p):
    state = {}  # the check runs at the empty state

    def chi(s, n):
        return n in s

    def phi(s, n):
        return s.get(n, 0)

    def add(s, n, m):
        if n in s or not p(n, m):
            return {}
        return {n: m}

    for n in range(n_bound):
        if chi(state, n):
            # left branch: witness phi, then the atom clause
            m = phi(state, n)
            if not p(n, m):  # evidence below is the empty padding
                return False
        else:
            # right branch: every instance of the universal
            for m in range(m_bound):
                if add(state, n, m) == {} and p(n, m):  # notP(n,m) is false
                    return False
    return True


def test_em1_realizer_holds_matches_bruteforce(lt):
    # the oracle says the check must succeed at the empty state
    assert _em1_holds_bruteforce(10, 10, lambda n, m: m < n)
    verdict = realizes(em1_realizer(lt), EMPTY_STATE, em1_formula(lt), 10)
    assert verdict == Holds()


def test_realizes_vacuous_when_evidence_nonempty(lt):
    # evidence evaluating to a non-empty state realizes even a false atom
    t = _add_oracle(lt, 3, 1)
    false_atom = AtomF(lt, (numeral(3), numeral(5)))
    assert realizes(t, EMPTY_STATE, false_atom, 4) == Holds()


def test_realizes_fails_on_false_witness(lt):
    t = Pair(ZERO, StateConst(EMPTY_STATE))
    f = Exists("x", AtomF(lt, (Var_("x"), ZERO)))
    verdict = realizes(t, EMPTY_STATE, f, 4)
    assert isinstance(verdict, Fails)
    assert any("atom" in step for step in verdict.path)


def test_realizes_preconditions(lt):
    with pytest.raises(PreconditionError, match="type-mismatch"):
        realizes(ZERO, EMPTY_STATE, AtomF(lt, (ZERO, ZERO)), 2)
    dirty = StateConst(state_of([atom_new(lt, (2,), 1)]))
    with pytest.raises(PreconditionError, match="embedded-state"):
        realizes(dirty, EMPTY_STATE, AtomF(lt, (ZERO, ZERO)), 2)


def test_implication_unknown_without_candidates(lt):
    atom = AtomF(lt, (numeral(2), numeral(1)))
    ident = Lam("s", STATE, Var_("s"))
    verdict = realizes(ident, EMPTY_STATE, Imp(atom, atom), 4)
    assert isinstance(verdict, Unknown)
    assert "implication" in verdict.reason


def test_implication_with_candidates(lt):
    atom = AtomF(lt, (numeral(2), numeral(1)))
    ident = Lam("s", STATE, Var_("s"))
    cand = _add_oracle(lt, 2, 1)
    assert realizes(ident, EMPTY_STATE, Imp(atom, atom), 4,
                    candidates=[cand]) == Holds()


def test_forall_bound_zero_is_unknown(lt):
    t = Lam("n", NAT, StateConst(EMPTY_STATE))
    f = Forall("x", AtomF(lt, (Var_("x"), ZERO)))
    verdict = realizes(t, EMPTY_STATE, f, 0)
    assert isinstance(verdict, Unknown)
    assert "bound" in verdict.reason


def test_verdict_monotone_under_bound(lt):
    # Holds persists for the genuine realizer, Fails persists for a broken one.
    e, a = em1_realizer(lt), em1_formula(lt)
    seen = []
    for bound in (2, 4, 6, 9):
        seen.append(realizes(e, EMPTY_STATE, a, bound))
    assert all(v == Holds() for v in seen)

    broken = Lam("n", NAT, StateConst(EMPTY_STATE))
    f = Forall("x", AtomF(lt, (Var_("x"), ZERO)))  # 0 < x fails at x=0
    first = realizes(broken, EMPTY_STATE, f, 1)
    assert isinstance(first, Fails)
    for bound in (2, 5):
        assert isinstance(realizes(broken, EMPTY_STATE, f, bound), Fails)


# ---------------------------------------------------------------------------
# Convergence


def test_converges_on_guard_probe(lt):
    t = App(Oracle(ORACLE_X, lt), numeral(3))
    chain = Chain((EMPTY_STATE,
                   state_of([atom_new(lt, (3,), 1)]),
                   state_of([atom_new(lt, (3,), 1), atom_new(lt, (5,), 2)])))
    # values: False, True, True -> stabilizes from index 1
    assert converges_on(t, chain) == 1


def test_converges_on_constant_term(lt):
    chain = Chain((EMPTY_STATE, state_of([atom_new(lt, (3,), 1)])))
    assert converges_on(numeral(7), chain) == 0


def test_converges_on_missed_key(lt):
    t = App(Oracle(ORACLE_X, lt), numeral(3))
    chain = Chain((EMPTY_STATE, state_of([atom_new(lt, (5,), 2)])))
    # the key (3) is never learned: False, False -> index 0
    assert converges_on(t, chain) == 0


def test_converges_on_cannot_certify(lt):
    t = App(Oracle(ORACLE_X, lt), numeral(3))
    chain = Chain((EMPTY_STATE, state_of([atom_new(lt, (3,), 1)])))
    # last two values differ: no certificate from this finite chain
    assert converges_on(t, chain) is None


def test_chain_must_be_weakly_increasing(lt):
    with pytest.raises(ValueError):
        Chain((state_of([atom_new(lt, (3,), 1)]), EMPTY_STATE))


def test_stability_sampling_small():
    pool = probe_atom_pool()
    probes = stability_probes()
    rng = random.Random(20240810)
    for name, term in probes:
        for _ in range(5):
            chain = Chain(tuple(random_chain(rng, pool, 30)))
            assert converges_on(term, chain) is not None, name


# ---------------------------------------------------------------------------
# The learning loop


def test_fixpoint_learn_single_true_atom(lt):
    steps = []
    out = fixpoint_learn(_add_oracle(lt, 3, 1), EMPTY_STATE,
                         on_step=lambda i, tau, s: steps.append((i, tau, s)))
    assert out == state_of([atom_new(lt, (3,), 1)])
    assert steps[0][1] == state_of([atom_new(lt, (3,), 1)])
    assert steps[1][1] == EMPTY_STATE
    assert len(steps) == 2


def test_fixpoint_learn_false_atom_is_immediate(lt):
    steps = []
    out = fixpoint_learn(_add_oracle(lt, 3, 5), EMPTY_STATE,
                         on_step=lambda i, tau, s: steps.append(i))
    assert out == EMPTY_STATE
    assert steps == [0]


def test_fixpoint_learn_constant_empty(lt):
    s0 = state_of([atom_new(lt, (2,), 1)])
    assert fixpoint_learn(StateConst(EMPTY_STATE), s0) == s0


def test_fixpoint_learn_postcondition(lt):
    from btarski.evaluate import approximate
    from btarski.knowledge import state_leq
    t = _add_oracle(lt, 4, 2)
    s0 = state_of([atom_new(lt, (9,), 3)])
    out = fixpoint_learn(t, s0)
    assert state_leq(s0, out)
    final = eval_closed(approximate(t, out))
    assert final == StateV(EMPTY_STATE)


def test_fixpoint_learn_fuel(lt):
    # a term whose value never becomes empty: a literal non-empty... not
    # expressible with empty-state terms, so exhaust fuel via a fresh add
    # that can always re-add after lookups -- impossible; instead check the
    # fuel guard with fuel=0 on a term needing one step.
    with pytest.raises(FuelExhausted):
        fixpoint_learn(_add_oracle(lt, 3, 1), EMPTY_STATE, fuel=0)


def test_fixpoint_learn_preconditions(lt):
    with pytest.raises(PreconditionError, match="type-mismatch"):
        fixpoint_learn(ZERO, EMPTY_STATE)
