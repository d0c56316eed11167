"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
report.  Budgets and sample sizes are fixed here, not tuned at runtime.
"""

import random
import time

import pytest

from btarski.evaluate import BoolV, eval_closed, normalize, NumV, StateV
from btarski.knowledge import EMPTY_STATE, atom_new, state_of
from btarski.library import (
    coquand_formula, coquand_oracle, coquand_realizer,
    default_registry, em1_formula, em1_realizer, f_value, minimum_formula,
    minimum_realizer, probe_atom_pool, random_chain, stability_probes,
    table_fun,
)
from btarski.realizability import Chain, converges_on, Fails, fixpoint_learn
from btarski.session import Session, SessionConfig
from btarski.strategy import RandomAbelard, run_game, ScriptedAbelard
from btarski.terms import (
    CUP, App, numeral, Oracle, ORACLE_ADD, StateConst, apply_all,
)
from btarski.typecheck import typecheck
from genterms import gen_closed_atomic
from randstates import random_state


def _report(name, detail=""):
    print("[PASS] %s%s" % (name, " -- " + detail if detail else ""))


REGISTRY = default_registry()
LT = REGISTRY.predicates["lt"]

MIN_TABLES = ([1, 0], [2, 3, 1, 0], [3, 2, 1, 0, 0], [5, 4, 4, 2, 0],
              [8, 7, 5, 2, 1, 0, 0])
COQ_TABLES = ([1, 0], [3, 2, 1, 0, 0], [4, 4, 2, 2, 0], [5, 1, 3, 0, 0],
              [2, 0, 1, 0])

EM1_EXPECTED_MOVES = [
    {"ev": "extend", "by": "A", "choice": 2,
     "pos": "(or (exists y (atom lt (S (S 0)) y)) "
            "(forall y (atom not-lt (S (S 0)) y)))"},
    {"ev": "extend", "by": "E", "choice": "R",
     "pos": "(forall y (atom not-lt (S (S 0)) y))"},
    {"ev": "extend", "by": "A", "choice": 1,
     "pos": "(atom not-lt (S (S 0)) (S 0))"},
    {"ev": "backtrack", "to": 2, "state": "(state ((lt ((S (S 0))) (S 0))))"},
    {"ev": "extend", "by": "E", "choice": "L",
     "pos": "(exists y (atom lt (S (S 0)) y))"},
    {"ev": "extend", "by": "E", "choice": 1,
     "pos": "(atom lt (S (S 0)) (S 0))"},
    {"ev": "result", "winner": "E"},
]


def test_em1_trace_reproduction():
    """The worked excluded-middle game, refuter playing n=2 then m=1."""
    started = time.time()
    trace = run_game(em1_formula(LT), em1_realizer(LT), ScriptedAbelard([2, 1]))
    elapsed = time.time() - started
    assert trace.move_events() == EM1_EXPECTED_MOVES
    assert trace.backtracks == 1
    assert trace.winner == "E"
    assert elapsed < 1.0
    _report("em1 trace reproduction", "%.3fs, 1 backtrack" % elapsed)


def test_minimum_principle_backtrack_bound():
    """125 games; the prover always wins within f(0) backtracks."""
    started = time.time()
    games = 0
    for values in MIN_TABLES:
        f = table_fun(values)
        formula, realizer = minimum_formula(f), minimum_realizer(f)
        for seed in range(25):
            trace = run_game(formula, realizer, RandomAbelard(seed, 20))
            assert trace.winner == "E", (values, seed)
            assert trace.backtracks <= values[0], (values, seed)
            games += 1
    elapsed = time.time() - started
    assert elapsed < 30.0
    _report("minimum-principle bound",
            "%d games, %.1fs, zero violations" % (games, elapsed))


def test_coquand_oracle_agreement():
    """Greedy refuter: the committed witness equals the ground-search value;
    random refuter: the committed witness satisfies the atom."""
    started = time.time()
    checked = 0
    for values in COQ_TABLES:
        f = table_fun(values)
        formula, realizer = coquand_formula(f), coquand_realizer(f)
        for step in range(1, 6):
            trace = run_game(formula, realizer, ScriptedAbelard([step]))
            assert trace.winner == "E"
            witness = [e["choice"] for e in trace.events
                       if e["ev"] == "extend" and e["by"] == "E"][-1]
            assert witness == coquand_oracle(f, step), (values, step)
            checked += 1
        for seed in range(5):
            trace = run_game(formula, realizer, RandomAbelard(seed, 6))
            assert trace.winner == "E"
            witness = [e["choice"] for e in trace.events
                       if e["ev"] == "extend" and e["by"] == "E"][-1]
            chosen = [e["choice"] for e in trace.events
                      if e["ev"] == "extend" and e["by"] == "A"][0]
            assert f_value(f, witness) <= f_value(f, witness + chosen)
    elapsed = time.time() - started
    assert elapsed < 10.0
    _report("coquand oracle agreement",
            "%d greedy checks exact, %.1fs" % (checked, elapsed))


def test_fixed_point_learning():
    """Folding the atom-adder over k distinct true atoms fixes in <= k+1
    passes of the learning loop."""
    rng = random.Random(11)
    for k in range(0, 11):
        keys = rng.sample(range(1, 30), k)
        atoms = [(x, rng.randrange(0, x)) for x in keys]
        term = StateConst(EMPTY_STATE)
        for x, y in atoms:
            added = apply_all(Oracle(ORACLE_ADD, LT), [numeral(x), numeral(y)])
            term = App(App(CUP, added), term)
        iterations = []
        out = fixpoint_learn(term, EMPTY_STATE,
                             on_step=lambda i, tau, s: iterations.append(i))
        assert len(iterations) - 1 <= k + 1
        assert out == state_of([atom_new(LT, (x,), y) for x, y in atoms])
    _report("fixed-point learning", "k = 0..10, all within k+1 iterations")


def test_stability_sampling():
    """Every library probe stabilizes along 100 seeded chains (length 50)."""
    pool = probe_atom_pool(REGISTRY)
    assert len(pool) <= 12
    probes = stability_probes(REGISTRY)
    failures = []
    for name, term in probes:
        for seed in range(100):
            rng = random.Random(1000 + seed)
            chain = Chain(tuple(random_chain(rng, pool, 50)))
            if converges_on(term, chain) is None:
                failures.append((name, seed))
    assert not failures
    _report("stability sampling",
            "%d probes x 100 chains, zero failures" % len(probes))


def test_lemma38_monitoring():
    """The mid-game check never returns Fails at any prover turn, across all
    acceptance games, at bound 8."""
    verdicts = 0

    def assert_clean(trace):
        nonlocal verdicts
        assert trace.monitor_verdicts
        for keep, pos, verdict in trace.monitor_verdicts:
            assert not isinstance(verdict, Fails), (pos, verdict)
            verdicts += 1

    assert_clean(run_game(em1_formula(LT), em1_realizer(LT),
                          ScriptedAbelard([2, 1]), monitor_bound=8))
    for values in MIN_TABLES:
        f = table_fun(values)
        formula, realizer = minimum_formula(f), minimum_realizer(f)
        for seed in range(25):
            assert_clean(run_game(formula, realizer, RandomAbelard(seed, 20),
                                  monitor_bound=8))
    for values in COQ_TABLES:
        f = table_fun(values)
        formula, realizer = coquand_formula(f), coquand_realizer(f)
        for step in range(1, 6):
            assert_clean(run_game(formula, realizer, ScriptedAbelard([step]),
                                  monitor_bound=8))
        for seed in range(5):
            assert_clean(run_game(formula, realizer, RandomAbelard(seed, 6),
                                  monitor_bound=8))
    _report("lemma-3.8 monitoring", "%d prover turns, never Fails" % verdicts)


def test_normalizer_confluence_sampling():
    """1000 random closed terms of atomic type: both strategies agree and
    every normal form reads back as a first-order value."""
    rng = random.Random(20240810)
    mismatches = 0
    for i in range(1000):
        term = gen_closed_atomic(rng)
        outer = normalize(term, strategy="normal")
        inner = normalize(term, strategy="innermost")
        if outer != inner:
            mismatches += 1
        value = eval_closed(term)
        assert isinstance(value, (NumV, BoolV, StateV))
    assert mismatches == 0
    _report("normalizer confluence sampling", "1000 terms, zero mismatches")


def test_state_algebra_laws():
    """Idempotence, empty identity, left bias, and left monotonicity over
    10000 random state pairs."""
    from btarski.knowledge import consistent_union, state_leq
    rng = random.Random(77)
    for _ in range(10_000):
        s1 = random_state(rng, LT)
        s2 = random_state(rng, LT)
        merged = consistent_union(s1, s2)
        assert consistent_union(s1, s1) == s1
        assert consistent_union(EMPTY_STATE, s1) == s1
        assert consistent_union(s1, EMPTY_STATE) == s1
        assert state_leq(s1, merged)
        witnesses = {a.key(): a.witness for a in s1}
        for atom in s2:
            in_merge = atom in merged
            conflicts = atom.key() in witnesses \
                and witnesses[atom.key()] != atom.witness
            assert in_merge != conflicts
    _report("state-algebra laws", "10000 pairs, zero failures")


def test_differential_replay():
    """Concatenated session event diffs equal the batch trace."""
    formula = em1_formula(LT)
    realizer = em1_realizer(LT)
    batch = run_game(formula, realizer, ScriptedAbelard([2, 1]))
    from btarski.formulas import print_formula
    from btarski.terms import print_term
    session = Session(SessionConfig(formula=print_formula(formula),
                                    realizer=print_term(realizer)), REGISTRY)
    diffs = []
    for choice in (2, 1):
        diffs += session.move(choice)
    assert diffs == batch.events
    _report("differential replay", "session diffs == batch trace")
