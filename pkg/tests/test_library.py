import random

import pytest

from btarski.evaluate import approximate, eval_closed, normalize, NumV
from btarski.formulas import print_formula, realizer_type
from btarski.knowledge import EMPTY_STATE, atom_new, state_of
from btarski.library import (
    coquand_formula, coquand_oracle, coquand_realizer, counterexample_refuter,
    em1_formula, em1_realizer, f_value, minimum_formula,
    minimum_oracle, minimum_pred, minimum_realizer, probe_atom_pool,
    random_chain, realizer_builders, stability_probes, table_fun,
    EQ_T, LEQ_T, LT_T, PLUS_T, SUB_T,
)
from btarski.realizability import Chain, converges_on, Holds, realizes
from btarski.sexpr import load_prelude
from btarski.strategy import RandomAbelard, run_game, ScriptedAbelard
from btarski.terms import (
    Arrow, Lam, NAT, numeral, Pair, Prod, Proj, STATE, StateConst,
    apply_all, has_empty_state, Learn, LEARN_ADD,
)
from btarski.typecheck import typecheck


# ---------------------------------------------------------------------------
# Arithmetic combinators against plain integer arithmetic


def _num2(t, a, b):
    v = eval_closed(apply_all(t, [numeral(a), numeral(b)]))
    return v.value


@pytest.mark.parametrize("a", range(0, 6))
@pytest.mark.parametrize("b", range(0, 6))
def test_combinators_match_python(a, b):
    assert _num2(SUB_T, a, b) == max(a - b, 0)
    assert _num2(PLUS_T, a, b) == a + b
    assert _num2(LEQ_T, a, b) == (a <= b)
    assert _num2(LT_T, a, b) == (a < b)
    assert _num2(EQ_T, a, b) == (a == b)


def test_table_fun_matches_table():
    values = [3, 1, 4, 1, 5]
    f = table_fun(values)
    for n in range(9):
        expected = values[n] if n < len(values) else values[-1]
        assert f_value(f, n) == expected


# ---------------------------------------------------------------------------
# Excluded middle


def test_em1_realizer_shape(lt):
    e = em1_realizer(lt)
    assert typecheck(e) == realizer_type(em1_formula(lt))
    assert has_empty_state(e)
    assert realizes(e, EMPTY_STATE, em1_formula(lt), 10) == Holds()


def test_em1_needs_binary_predicate(leq):
    from btarski.evaluate import make_predicate
    from btarski.sexpr import parse_term
    unary = make_predicate(1, parse_term("(lam (n nat) true)"))
    with pytest.raises(ValueError):
        em1_realizer(unary)


# ---------------------------------------------------------------------------
# Minimum principle: the three normal-form cases of the recursor


def test_minimum_realizer_constant_zero_base_case():
    f = table_fun([0])
    m = minimum_realizer(f)
    nf = normalize(approximate(m, EMPTY_STATE))
    expected = Pair(numeral(0),
                    Pair(Lam("a", NAT, StateConst(EMPTY_STATE)),
                         Pair(numeral(0), StateConst(EMPTY_STATE))))
    assert nf == expected


def test_minimum_realizer_stuck_case_at_empty_state():
    f = table_fun([2, 1, 0])
    p = minimum_pred(f)
    m = minimum_realizer(f)
    nf = normalize(approximate(m, EMPTY_STATE))
    adder = Lam("b", NAT, apply_all(Learn(LEARN_ADD, p),
                                    [StateConst(EMPTY_STATE), numeral(2),
                                     __import__("btarski.terms",
                                                fromlist=["Var"]).Var("b")]))
    expected = Pair(numeral(2), Pair(adder,
                                     Pair(numeral(0), StateConst(EMPTY_STATE))))
    assert nf == expected


def test_minimum_realizer_descends_with_knowledge():
    # both atoms known: the claim drops to 0 and the point is the witness
    # carried down from the last hit key
    f = table_fun([2, 1, 0, 0])
    p = minimum_pred(f)
    m = minimum_realizer(f)
    s = state_of([atom_new(p, (2,), 1), atom_new(p, (1,), 2)])
    nf = normalize(approximate(m, s))
    assert eval_closed(Proj(0, nf)) == NumV(0)
    point = eval_closed(Proj(0, Proj(1, Proj(1, nf))))
    assert point == NumV(2)
    assert f_value(f, 2) == 0


def test_minimum_realizer_type(lt):
    f = table_fun([3, 2, 1, 0])
    assert typecheck(minimum_realizer(f)) == realizer_type(minimum_formula(f))
    assert has_empty_state(minimum_realizer(f))


def test_minimum_oracle():
    assert minimum_oracle(table_fun([3, 2, 1, 0, 0]), 5) == 0
    assert minimum_oracle(table_fun([4]), 5) == 4          # constant
    assert minimum_oracle(table_fun([1, 2, 3, 4]), 4) == 1  # increasing


# ---------------------------------------------------------------------------
# Shift comparison


def test_coquand_realizer_type():
    f = table_fun([3, 2, 1, 0])
    c = coquand_realizer(f)
    assert typecheck(c) == Arrow(NAT, Prod(NAT, STATE))
    assert typecheck(c) == realizer_type(coquand_formula(f))
    assert has_empty_state(c)


def test_coquand_oracle():
    f = table_fun([3, 2, 1, 0, 0])
    assert coquand_oracle(f, 1) == 3
    assert coquand_oracle(table_fun([4]), 5) == 0
    assert coquand_oracle(table_fun([1, 2, 3]), 2) == 0
    with pytest.raises(ValueError):
        coquand_oracle(f, 0)


# ---------------------------------------------------------------------------
# Game / oracle agreement


def _claimed_minimum(trace):
    """The instance the prover finally committed for the minimum claim."""
    for event in reversed(trace.events):
        if event["ev"] == "extend" and event["by"] == "E" \
                and event["pos"].startswith("(and"):
            return event["choice"]
    raise AssertionError("no conjunction instance in the final play")


MIN_TABLES = ([1, 0], [2, 3, 1, 0], [3, 2, 1, 0, 0], [5, 4, 4, 2, 0],
              [8, 7, 5, 2, 1, 0, 0])


@pytest.mark.parametrize("values", MIN_TABLES)
def test_minimum_agreement_against_pressing_refuter(values):
    f = table_fun(values)
    a = minimum_formula(f)
    m = minimum_realizer(f)
    oracle = minimum_oracle(f, len(values) + 3)
    for seed in range(25):
        trace = run_game(a, m, counterexample_refuter(seed))
        assert trace.winner == "E"
        assert trace.backtracks <= values[0]
        assert _claimed_minimum(trace) == oracle


@pytest.mark.parametrize("values", MIN_TABLES[:3])
def test_minimum_random_refuter_soundness(values):
    f = table_fun(values)
    a = minimum_formula(f)
    m = minimum_realizer(f)
    for seed in range(10):
        trace = run_game(a, m, RandomAbelard(seed, 20))
        assert trace.winner == "E"
        assert trace.backtracks <= values[0]


def test_coquand_agreement_greedy_and_random():
    f = table_fun([3, 2, 1, 0, 0])
    a = coquand_formula(f)
    c = coquand_realizer(f)
    for step in range(1, 5):
        trace = run_game(a, c, ScriptedAbelard([step]))
        assert trace.winner == "E"
        witness = [e["choice"] for e in trace.events
                   if e["ev"] == "extend" and e["by"] == "E"][-1]
        assert witness == coquand_oracle(f, step)
    for seed in range(8):
        trace = run_game(a, c, RandomAbelard(seed, 6))
        assert trace.winner == "E"
        witness = [e["choice"] for e in trace.events
                   if e["ev"] == "extend" and e["by"] == "E"][-1]
        chosen = [e["choice"] for e in trace.events
                  if e["ev"] == "extend" and e["by"] == "A"][0]
        assert f_value(f, witness) <= f_value(f, witness + chosen)


def test_backtrack_bound_on_minimum_games():
    values = [4, 2, 5, 1, 0]
    f = table_fun(values)
    a, m = minimum_formula(f), minimum_realizer(f)
    for seed in range(15):
        trace = run_game(a, m, counterexample_refuter(seed))
        assert trace.backtracks <= values[0]


# ---------------------------------------------------------------------------
# Probes and stability (the acceptance suite runs the full sampling)


def test_probes_are_closed_atomic():
    from btarski.terms import BoolTy, NatTy, StateTy
    for name, term in stability_probes():
        assert has_empty_state(term), name
        assert isinstance(typecheck(term), (NatTy, BoolTy, StateTy)), name


def test_probe_pool_is_consistent():
    state_of(probe_atom_pool())
    assert len(probe_atom_pool()) <= 12


def test_probe_convergence_sample():
    rng = random.Random(3)
    pool = probe_atom_pool()
    for name, term in stability_probes()[:4]:
        chain = Chain(tuple(random_chain(rng, pool, 50)))
        assert converges_on(term, chain) is not None, name


# ---------------------------------------------------------------------------
# All stock realizers pass the bounded check


def test_stock_realizers_realize_their_formulas(lt):
    f = table_fun([3, 2, 1, 0])
    cases = [
        (em1_realizer(lt), em1_formula(lt)),
        (minimum_realizer(f), minimum_formula(f)),
        (coquand_realizer(f), coquand_formula(f)),
    ]
    for term, formula in cases:
        verdict = realizes(term, EMPTY_STATE, formula, 8)
        assert verdict == Holds(), print_formula(formula)


# ---------------------------------------------------------------------------
# Prelude integration


def test_prelude_file_builders(registry):
    text = open("prelude/standard.sexp", encoding="utf-8").read()
    reg = load_prelude(text, registry, realizer_builders())
    assert "gt" in reg.predicates
    assert reg.realizers["ep"] == em1_realizer(reg.predicates["lt"])
    fs = reg.terms["fsample"]
    assert [f_value(fs, i) for i in range(5)] == [3, 2, 1, 0, 0]
    assert typecheck(reg.realizers["minf"]) == \
        realizer_type(minimum_formula(fs))
