"""Stock material: arithmetic combinators, registered comparison predicates,
the excluded-middle / minimum-principle / shift-comparison realizers, and the
ground-search oracles the game traces are checked against.

The comparison predicate ``lt`` is deliberately witness-oriented:
``lt x y`` holds when y < x, so the atom key is the bound and the witness is
the smaller point.  ``leq`` and ``geq`` read in the usual direction.
"""

from __future__ import annotations

import random

from .errors import EngineError
from .evaluate import NumV, eval_closed, make_predicate, neg_pred
from .formulas import And, AtomF, Exists, Forall, Formula, Or
from .games import TPosition
from .knowledge import EMPTY_STATE, atom_new, state_of
from .sexpr import Registry
from .strategy import CallbackAbelard
from .terms import (
    App, Arrow, BOOL, CUP, FALSE, If, Lam, NAT, Oracle, ORACLE_ADD,
    ORACLE_PHI, ORACLE_X, Pair, Predicate, Prod, Proj, Rec, STATE,
    StateConst, Succ, Term, TRUE, Var, ZERO, numeral,
)

__all__ = [
    "PRED_T", "SUB_T", "ISZERO_T", "NOT_T", "AND_T", "LEQ_T", "LT_T", "EQ_T",
    "PLUS_T", "default_registry", "table_fun", "f_value",
    "em1_formula", "em1_realizer",
    "minimum_pred", "minimum_formula", "minimum_realizer", "minimum_oracle",
    "coquand_formula", "coquand_realizer", "coquand_oracle",
    "counterexample_refuter", "stability_probes", "probe_atom_pool",
    "realizer_builders",
]

_EMPTY = StateConst(EMPTY_STATE)


def _lam(name, ty, body):
    return Lam(name, ty, body)


# Closed arithmetic combinators, recursor-defined.
PRED_T = _lam("n", NAT, Rec(NAT, ZERO, _lam("k", NAT, _lam("r", NAT, Var("k"))),
                            Var("n")))
SUB_T = _lam("x", NAT, _lam("y", NAT,
             Rec(NAT, Var("x"),
                 _lam("k", NAT, _lam("r", NAT, App(PRED_T, Var("r")))),
                 Var("y"))))
ISZERO_T = _lam("n", NAT, Rec(BOOL, TRUE,
                              _lam("k", NAT, _lam("r", BOOL, FALSE)), Var("n")))
NOT_T = _lam("b", BOOL, If(Var("b"), FALSE, TRUE))
AND_T = _lam("p", BOOL, _lam("q", BOOL, If(Var("p"), Var("q"), FALSE)))
# a <= b and a < b in the usual reading.
LEQ_T = _lam("a", NAT, _lam("b", NAT,
             App(ISZERO_T, App(App(SUB_T, Var("a")), Var("b")))))
LT_T = _lam("a", NAT, _lam("b", NAT,
            App(ISZERO_T, App(App(SUB_T, Succ(Var("a"))), Var("b")))))
EQ_T = _lam("a", NAT, _lam("b", NAT,
            App(App(AND_T, App(App(LEQ_T, Var("a")), Var("b"))),
                App(App(LEQ_T, Var("b")), Var("a")))))
PLUS_T = _lam("x", NAT, _lam("y", NAT,
              Rec(NAT, Var("x"),
                  _lam("k", NAT, _lam("r", NAT, Succ(Var("r")))), Var("y"))))


def default_registry() -> Registry:
    """Predicates and helper terms every CLI invocation starts from."""
    reg = Registry()
    # lt x y  <=>  y < x : atom key is x, witness is y.
    reg.register_predicate(make_predicate(
        2, _lam("x", NAT, _lam("y", NAT, App(App(LT_T, Var("y")), Var("x")))),
        name="lt"))
    reg.register_predicate(make_predicate(
        2, _lam("x", NAT, _lam("y", NAT, App(App(LEQ_T, Var("x")), Var("y")))),
        name="leq"))
    reg.register_predicate(make_predicate(
        2, _lam("x", NAT, _lam("y", NAT, App(App(LEQ_T, Var("y")), Var("x")))),
        name="geq"))
    for name in ("lt", "leq", "geq"):
        reg.register_predicate(neg_pred(reg.predicates[name]))
    for name, term in (("not", NOT_T), ("and", AND_T), ("iszero", ISZERO_T),
                       ("pred", PRED_T), ("sub", SUB_T), ("plus", PLUS_T),
                       ("ltb", LT_T), ("leqb", LEQ_T), ("eqb", EQ_T)):
        reg.register_term(name, term)
    return reg


def table_fun(values) -> Term:
    """Compile a finite value table (constant beyond its end) to a closed
    nat -> nat term."""
    values = list(values)
    if not values:
        raise ValueError("table needs at least one value")
    body: Term = numeral(values[-1])
    for i in reversed(range(len(values) - 1)):
        body = If(App(App(EQ_T, Var("x")), numeral(i)), numeral(values[i]), body)
    return _lam("x", NAT, body)


def f_value(f: Term, n: int) -> int:
    v = eval_closed(App(f, numeral(n)))
    if not isinstance(v, NumV):
        raise EngineError("function term did not evaluate to a numeral")
    return v.value


# ---------------------------------------------------------------------------
# Excluded middle over existential sentences


def em1_formula(pred: Predicate) -> Formula:
    """forall x (exists y P(x,y)  or  forall y notP(x,y)) for a binary P."""
    if pred.arity != 2:
        raise ValueError("the excluded-middle example needs a binary predicate")
    np = neg_pred(pred)
    return Forall("x", Or(
        Exists("y", AtomF(pred, (Var("x"), Var("y")))),
        Forall("y", AtomF(np, (Var("x"), Var("y"))))))


def em1_realizer(pred: Predicate) -> Term:
    """The three-component evidence: truth guess, witness guess with empty
    padding, and the atom-adder for the universal branch."""
    if pred.arity != 2:
        raise ValueError("the excluded-middle realizer needs a binary predicate")
    return _lam("a", NAT, Pair(
        App(Oracle(ORACLE_X, pred), Var("a")),
        Pair(Pair(App(Oracle(ORACLE_PHI, pred), Var("a")), _EMPTY),
             _lam("m", NAT,
                  App(App(Oracle(ORACLE_ADD, pred), Var("a")), Var("m"))))))


# ---------------------------------------------------------------------------
# Minimum principle


def minimum_pred(f: Term) -> Predicate:
    """The learned predicate: key y, witness x, holding when f(x) < y."""
    body = _lam("y", NAT, _lam("x", NAT,
                App(App(LT_T, App(f, Var("x"))), Var("y"))))
    return make_predicate(2, body)


_GEQ = None
_LEQ = None


def _cmp_preds():
    global _GEQ, _LEQ
    if _GEQ is None:
        _GEQ = make_predicate(
            2, _lam("x", NAT, _lam("y", NAT,
                    App(App(LEQ_T, Var("y")), Var("x")))), name="geq")
        _LEQ = make_predicate(
            2, _lam("x", NAT, _lam("y", NAT,
                    App(App(LEQ_T, Var("x")), Var("y")))), name="leq")
    return _GEQ, _LEQ


def minimum_formula(f: Term) -> Formula:
    """exists y (forall a f(a) >= y  and  exists b f(b) <= y)."""
    geq, leq = _cmp_preds()
    return Exists("y", And(
        Forall("a", AtomF(geq, (App(f, Var("a")), Var("y")))),
        Exists("b", AtomF(leq, (App(f, Var("b")), Var("y"))))))


def minimum_realizer(f: Term) -> Term:
    """Recursor-built evidence descending from f(0) while the state knows a
    smaller value; carries the atom-adder for the universal conjunct and the
    witness pair for the existential one."""
    p = minimum_pred(f)
    h = Prod(NAT, Prod(Arrow(NAT, STATE), Prod(NAT, STATE)))
    t_step = Arrow(Prod(NAT, STATE), h)
    base = _lam("w", Prod(NAT, STATE), Pair(
        App(f, Proj(0, Var("w"))),
        Pair(_lam("a", NAT, Proj(1, Var("w"))),
             Pair(Proj(0, Var("w")), _EMPTY))))
    branch_found = App(Var("w1"),
                       Pair(App(Oracle(ORACLE_PHI, p), Succ(Var("n"))), _EMPTY))
    branch_stuck = Pair(Succ(Var("n")), Pair(
        _lam("b", NAT, App(App(Oracle(ORACLE_ADD, p), Succ(Var("n"))), Var("b"))),
        Var("w2")))
    d = If(App(Oracle(ORACLE_X, p), Succ(Var("n"))), branch_found, branch_stuck)
    step = _lam("n", NAT, _lam("w1", t_step,
                _lam("w2", Prod(NAT, STATE), d)))
    return App(Rec(t_step, base, step, App(f, ZERO)), Pair(ZERO, _EMPTY))


def minimum_oracle(f: Term, search_bound: int) -> int:
    """Ground search: the least value f takes on 0..search_bound-1."""
    return min(f_value(f, n) for n in range(search_bound))


# ---------------------------------------------------------------------------
# Shift comparison (finding x with f(x) <= f(x+a))


def coquand_formula(f: Term) -> Formula:
    _, leq = _cmp_preds()
    shifted = App(f, App(App(PLUS_T, Var("x")), Var("a")))
    return Forall("a", Exists("x", AtomF(leq, (App(f, Var("x")), shifted))))


def coquand_realizer(f: Term) -> Term:
    m = minimum_realizer(f)
    point = Proj(0, Proj(1, Proj(1, m)))        # where the claimed minimum sits
    adder = Proj(0, Proj(1, m))                  # the universal conjunct's adder
    padding = Proj(1, Proj(1, Proj(1, m)))       # always the empty state
    update = App(App(CUP, App(adder, App(App(PLUS_T, point), Var("a")))),
                 padding)
    return _lam("a", NAT, Pair(point, update))


def coquand_oracle(f: Term, a: int) -> int:
    """Walk in steps of a until the function stops decreasing."""
    if a < 1:
        raise ValueError("the step must be at least 1")
    n = 0
    while f_value(f, n) > f_value(f, n + a):
        n += a
    return n


# ---------------------------------------------------------------------------
# Opponents and probes used by the verification suites

# instance-truth scans keyed by the universal formula; shared across refuters
_FALSIFIABLE_CACHE = {}


def counterexample_refuter(seed: int, search_range: int = 30) -> CallbackAbelard:
    """A refuter that always presses a falsifiable branch: at a conjunction it
    picks a side whose universal body has a counterexample below the search
    range; at a universal it plays a (seeded) random counterexample."""
    rng = random.Random(seed)

    def falsifiable(formula):
        if isinstance(formula, Forall) and isinstance(formula.body, AtomF):
            entry = _FALSIFIABLE_CACHE.get(formula)
            if entry is None or entry[0] < search_range:
                bad = [n for n in range(search_range)
                       if not _instance_true(formula, n)]
                _FALSIFIABLE_CACHE[formula] = (search_range, bad)
                return bad
            return [n for n in entry[1] if n < search_range]
        return []

    def choose(position: TPosition, arena):
        formula = position.formula
        if isinstance(formula, And):
            left_bad = falsifiable(formula.left)
            right_bad = falsifiable(formula.right)
            if left_bad and not right_bad:
                return "L"
            if right_bad and not left_bad:
                return "R"
            return rng.choice(("L", "R"))
        if isinstance(formula, Forall):
            bad = falsifiable(formula)
            if bad:
                return rng.choice(bad)
            return rng.randrange(search_range)
        raise EngineError("refuter asked to move at a prover position")

    return CallbackAbelard(choose)


def _instance_true(forall: Forall, n: int) -> bool:
    from .evaluate import eval_atom
    from .formulas import subst_formula
    inst = subst_formula(forall.body, forall.var, numeral(n))
    return eval_atom(inst)


def stability_probes(registry: Registry | None = None):
    """Closed atomic-type probe terms drawn from the library realizers."""
    reg = registry if registry is not None else default_registry()
    lt = reg.predicates["lt"]
    f = table_fun([3, 2, 1, 0])
    e = em1_realizer(lt)
    m = minimum_realizer(f)
    c = coquand_realizer(f)
    e2 = App(e, numeral(2))
    return [
        ("truth-guess", App(Oracle(ORACLE_X, lt), numeral(3))),
        ("witness-guess", App(Oracle(ORACLE_PHI, lt), numeral(3))),
        ("atom-add", App(App(Oracle(ORACLE_ADD, lt), numeral(3)), numeral(1))),
        ("em1-flag", Proj(0, e2)),
        ("em1-witness", Proj(0, Proj(0, Proj(1, e2)))),
        ("em1-update", App(Proj(1, Proj(1, e2)), numeral(1))),
        ("min-claim", Proj(0, m)),
        ("min-point", Proj(0, Proj(1, Proj(1, m)))),
        ("min-padding", Proj(1, Proj(1, Proj(1, m)))),
        ("shift-witness", Proj(0, App(c, numeral(1)))),
        ("shift-update", Proj(1, App(c, numeral(1)))),
    ]


def probe_atom_pool(registry: Registry | None = None):
    """A pairwise-consistent pool of true atoms for random chains (<= 12)."""
    reg = registry if registry is not None else default_registry()
    lt = reg.predicates["lt"]
    f = table_fun([3, 2, 1, 0])
    pf = minimum_pred(f)
    pool = [atom_new(lt, (x,), y)
            for x, y in ((2, 1), (3, 0), (4, 2), (5, 4), (6, 2), (7, 0),
                         (8, 3), (9, 8), (10, 5))]
    # f(1)=2<3, f(2)=1<2, f(3)=0<1: distinct keys, all true.
    pool += [atom_new(pf, (3,), 1), atom_new(pf, (2,), 2), atom_new(pf, (1,), 3)]
    return pool


def random_chain(rng: random.Random, pool, length: int):
    """A weakly increasing chain of states over a consistent atom pool."""
    order = list(pool)
    rng.shuffle(order)
    states = []
    take = 0
    current = []
    for _ in range(length):
        if take < len(order) and rng.random() < 0.35:
            grow = rng.randrange(1, 3)
            for _ in range(grow):
                if take < len(order):
                    current.append(order[take])
                    take += 1
        states.append(state_of(current))
    return states


# ---------------------------------------------------------------------------
# Prelude realizer builders (for defrealizer entries)


def realizer_builders():
    """Builders keyed by the name used in (defrealizer name (builder ...))."""

    def build_em1(registry, args, term_of, pred_of):
        if len(args) != 1:
            raise ValueError("em1 builder takes one predicate")
        return em1_realizer(pred_of(args[0], registry))

    def build_minimum(registry, args, term_of, pred_of):
        if len(args) != 1:
            raise ValueError("minimum builder takes one function term")
        return minimum_realizer(term_of(args[0], registry, {}))

    def build_coquand(registry, args, term_of, pred_of):
        if len(args) != 1:
            raise ValueError("coquand builder takes one function term")
        return coquand_realizer(term_of(args[0], registry, {}))

    return {"em1": build_em1, "minimum": build_minimum,
            "coquand": build_coquand}
