"""Syntax of the term calculus: simple types, terms, and predicates.

The calculus is Goedel's T extended with a ``state`` base type, state
constants, the state operations (guard, witness, single-atom add, merge) in
their learnable form, and the three oracle constants indexed by a predicate.
A term built only from the T fragment plus oracle constants is the
non-computable layer; replacing each oracle with its state-indexed
approximation (see ``evaluate.approximate``) lands in the computable layer.

This module is purely syntactic: no reduction happens here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# Types


class Ty:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class NatTy(Ty):
    def __repr__(self):
        return "nat"


@dataclass(frozen=True, slots=True)
class BoolTy(Ty):
    def __repr__(self):
        return "bool"


@dataclass(frozen=True, slots=True)
class StateTy(Ty):
    def __repr__(self):
        return "state"


@dataclass(frozen=True, slots=True)
class Prod(Ty):
    left: Ty
    right: Ty

    def __repr__(self):
        return "(prod %r %r)" % (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Arrow(Ty):
    arg: Ty
    res: Ty

    def __repr__(self):
        return "(arrow %r %r)" % (self.arg, self.res)


NAT = NatTy()
BOOL = BoolTy()
STATE = StateTy()


def arrows(args, res):
    """Right-nested arrow type args[0] -> ... -> args[-1] -> res."""
    for a in reversed(list(args)):
        res = Arrow(a, res)
    return res


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Zero(Term):
    pass


@dataclass(frozen=True, slots=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class TTrue(Term):
    pass


@dataclass(frozen=True, slots=True)
class TFalse(Term):
    pass


@dataclass(frozen=True, slots=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True, slots=True)
class Proj(Term):
    index: int  # 0 or 1
    arg: Term


@dataclass(frozen=True, slots=True)
class If(Term):
    cond: Term
    then: Term
    orelse: Term


@dataclass(frozen=True, slots=True)
class Rec(Term):
    # Recursor at value type ty: base : ty, step : nat -> ty -> ty, arg : nat.
    ty: Ty
    base: Term
    step: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Lam(Term):
    var: str
    ty: Ty
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class StateConst(Term):
    # The state is a knowledge.KnowledgeState; typed loosely to keep the
    # syntax module free of an import cycle.
    state: object


# Oracle kinds: X (truth guess), Phi (witness guess), AddBig (constant-empty add).
ORACLE_X = "X"
ORACLE_PHI = "Phi"
ORACLE_ADD = "AddBig"

# Learnable kinds: chi/phi/add take an explicit state argument first.
LEARN_CHI = "chi"
LEARN_PHI = "phi"
LEARN_ADD = "add"


@dataclass(frozen=True, slots=True)
class Oracle(Term):
    kind: str  # ORACLE_X | ORACLE_PHI | ORACLE_ADD
    pred: "Predicate"


@dataclass(frozen=True, slots=True)
class Learn(Term):
    kind: str  # LEARN_CHI | LEARN_PHI | LEARN_ADD
    pred: "Predicate"


@dataclass(frozen=True, slots=True)
class CupConst(Term):
    pass


ZERO = Zero()
TRUE = TTrue()
FALSE = TFalse()
CUP = CupConst()


# ---------------------------------------------------------------------------
# Predicates


@dataclass(frozen=True, eq=False, slots=True)
class Predicate:
    """A closed beta-normal boolean test on ``arity`` naturals.

    Identity is alpha-equivalence of the normal-form body, captured by the
    canonical ``key`` string; the optional ``name`` is only used for printing
    and prelude lookup.  Use ``evaluate.make_predicate`` to build one from an
    arbitrary body: it normalizes and type-checks first.
    """

    arity: int
    body: Term
    key: str = field(default="", compare=False)
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.key:
            object.__setattr__(self, "key", canonical_print(self.body))

    def __eq__(self, other):
        return isinstance(other, Predicate) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "Predicate(%s/%d)" % (self.name or self.key, self.arity)

    def display(self):
        return self.name if self.name is not None else print_term(self.body)


# ---------------------------------------------------------------------------
# Numerals


def numeral(k: int) -> Term:
    if k < 0:
        raise ValueError("numerals are non-negative")
    t: Term = ZERO
    for _ in range(k):
        t = Succ(t)
    return t


def numeral_value(t: Term):
    """The integer a closed numeral denotes, or None if t is not a numeral."""
    k = 0
    while isinstance(t, Succ):
        k += 1
        t = t.arg
    return k if isinstance(t, Zero) else None


def bool_value(t: Term):
    if isinstance(t, TTrue):
        return True
    if isinstance(t, TFalse):
        return False
    return None


# ---------------------------------------------------------------------------
# Variables and substitution

_fresh_counter = itertools.count()


def fresh_name(base: str) -> str:
    root = base.split("_")[0] or "x"
    return "%s_%d" % (root, next(_fresh_counter))


def free_vars(t: Term) -> frozenset:
    out = set()
    bound = {}

    def walk(u):
        tu = type(u)
        if tu is Var:
            if not bound.get(u.name):
                out.add(u.name)
        elif tu is App:
            walk(u.fn)
            walk(u.arg)
        elif tu is Lam:
            bound[u.var] = bound.get(u.var, 0) + 1
            walk(u.body)
            bound[u.var] -= 1
        elif tu is Succ:
            walk(u.arg)
        elif tu is Pair:
            walk(u.fst)
            walk(u.snd)
        elif tu is Proj:
            walk(u.arg)
        elif tu is If:
            walk(u.cond)
            walk(u.then)
            walk(u.orelse)
        elif tu is Rec:
            walk(u.base)
            walk(u.step)
            walk(u.arg)

    walk(t)
    return frozenset(out)


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution of ``value`` for free ``name`` in ``t``."""
    return _subst(t, name, value, free_vars(value))


def _subst(t, name, value, value_fvs):
    tt = type(t)
    if tt is Var:
        return value if t.name == name else t
    if tt is App:
        fn = _subst(t.fn, name, value, value_fvs)
        arg = _subst(t.arg, name, value, value_fvs)
        return t if fn is t.fn and arg is t.arg else App(fn, arg)
    if tt is Lam:
        if t.var == name:
            return t
        if t.var in value_fvs:
            renamed = fresh_name(t.var)
            body = _subst(t.body, t.var, Var(renamed), frozenset((renamed,)))
            return Lam(renamed, t.ty, _subst(body, name, value, value_fvs))
        body = _subst(t.body, name, value, value_fvs)
        return t if body is t.body else Lam(t.var, t.ty, body)
    if tt is Succ:
        arg = _subst(t.arg, name, value, value_fvs)
        return t if arg is t.arg else Succ(arg)
    if tt is Pair:
        fst = _subst(t.fst, name, value, value_fvs)
        snd = _subst(t.snd, name, value, value_fvs)
        return t if fst is t.fst and snd is t.snd else Pair(fst, snd)
    if tt is Proj:
        arg = _subst(t.arg, name, value, value_fvs)
        return t if arg is t.arg else Proj(t.index, arg)
    if tt is If:
        cond = _subst(t.cond, name, value, value_fvs)
        then = _subst(t.then, name, value, value_fvs)
        orelse = _subst(t.orelse, name, value, value_fvs)
        if cond is t.cond and then is t.then and orelse is t.orelse:
            return t
        return If(cond, then, orelse)
    if tt is Rec:
        base = _subst(t.base, name, value, value_fvs)
        step = _subst(t.step, name, value, value_fvs)
        arg = _subst(t.arg, name, value, value_fvs)
        if base is t.base and step is t.step and arg is t.arg:
            return t
        return Rec(t.ty, base, step, arg)
    return t


def app_spine(t: Term):
    """Unwind nested applications into (head, [args])."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def apply_all(head: Term, args) -> Term:
    for a in args:
        head = App(head, a)
    return head


def contains_oracle(t: Term) -> bool:
    if isinstance(t, Oracle):
        return True
    if isinstance(t, Succ):
        return contains_oracle(t.arg)
    if isinstance(t, Pair):
        return contains_oracle(t.fst) or contains_oracle(t.snd)
    if isinstance(t, Proj):
        return contains_oracle(t.arg)
    if isinstance(t, If):
        return (contains_oracle(t.cond) or contains_oracle(t.then)
                or contains_oracle(t.orelse))
    if isinstance(t, Rec):
        return (contains_oracle(t.base) or contains_oracle(t.step)
                or contains_oracle(t.arg))
    if isinstance(t, Lam):
        return contains_oracle(t.body)
    if isinstance(t, App):
        return contains_oracle(t.fn) or contains_oracle(t.arg)
    return False


def has_empty_state(t: Term) -> bool:
    """True iff every state constant inside ``t`` denotes the empty state."""
    if isinstance(t, StateConst):
        return len(t.state.atoms) == 0
    if isinstance(t, Succ):
        return has_empty_state(t.arg)
    if isinstance(t, Pair):
        return has_empty_state(t.fst) and has_empty_state(t.snd)
    if isinstance(t, Proj):
        return has_empty_state(t.arg)
    if isinstance(t, If):
        return (has_empty_state(t.cond) and has_empty_state(t.then)
                and has_empty_state(t.orelse))
    if isinstance(t, Rec):
        return (has_empty_state(t.base) and has_empty_state(t.step)
                and has_empty_state(t.arg))
    if isinstance(t, Lam):
        return has_empty_state(t.body)
    if isinstance(t, App):
        return has_empty_state(t.fn) and has_empty_state(t.arg)
    return True


# ---------------------------------------------------------------------------
# Printing (the grammar's exact surface syntax)


def print_type(ty: Ty) -> str:
    if isinstance(ty, NatTy):
        return "nat"
    if isinstance(ty, BoolTy):
        return "bool"
    if isinstance(ty, StateTy):
        return "state"
    if isinstance(ty, Prod):
        return "(prod %s %s)" % (print_type(ty.left), print_type(ty.right))
    if isinstance(ty, Arrow):
        return "(arrow %s %s)" % (print_type(ty.arg), print_type(ty.res))
    raise TypeError("not a type: %r" % (ty,))


_ORACLE_SYNTAX = {ORACLE_X: "X", ORACLE_PHI: "Phi", ORACLE_ADD: "AddP"}
_LEARN_SYNTAX = {LEARN_CHI: "chi", LEARN_PHI: "phi", LEARN_ADD: "add"}


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Succ):
        return "(S %s)" % print_term(t.arg)
    if isinstance(t, TTrue):
        return "true"
    if isinstance(t, TFalse):
        return "false"
    if isinstance(t, Pair):
        return "(pair %s %s)" % (print_term(t.fst), print_term(t.snd))
    if isinstance(t, Proj):
        return "(%s %s)" % ("fst" if t.index == 0 else "snd", print_term(t.arg))
    if isinstance(t, If):
        return "(if %s %s %s)" % (print_term(t.cond), print_term(t.then),
                                  print_term(t.orelse))
    if isinstance(t, Rec):
        return "(rec %s %s %s %s)" % (print_type(t.ty), print_term(t.base),
                                      print_term(t.step), print_term(t.arg))
    if isinstance(t, Lam):
        return "(lam (%s %s) %s)" % (t.var, print_type(t.ty), print_term(t.body))
    if isinstance(t, App):
        return "(app %s %s)" % (print_term(t.fn), print_term(t.arg))
    if isinstance(t, StateConst):
        return t.state.to_sexpr()
    if isinstance(t, Oracle):
        return "(%s %s)" % (_ORACLE_SYNTAX[t.kind], t.pred.display())
    if isinstance(t, Learn):
        return "(%s %s)" % (_LEARN_SYNTAX[t.kind], t.pred.display())
    if isinstance(t, CupConst):
        return "cup"
    raise TypeError("not a term: %r" % (t,))


def canonical_print(t: Term) -> str:
    """Print with binders renamed v0, v1, ... so alpha-equal terms agree."""
    return print_term(_alpha_canonical(t, {}, itertools.count()))


def _alpha_canonical(t: Term, env, counter):
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Succ):
        return Succ(_alpha_canonical(t.arg, env, counter))
    if isinstance(t, Pair):
        return Pair(_alpha_canonical(t.fst, env, counter),
                    _alpha_canonical(t.snd, env, counter))
    if isinstance(t, Proj):
        return Proj(t.index, _alpha_canonical(t.arg, env, counter))
    if isinstance(t, If):
        return If(_alpha_canonical(t.cond, env, counter),
                  _alpha_canonical(t.then, env, counter),
                  _alpha_canonical(t.orelse, env, counter))
    if isinstance(t, Rec):
        return Rec(t.ty, _alpha_canonical(t.base, env, counter),
                   _alpha_canonical(t.step, env, counter),
                   _alpha_canonical(t.arg, env, counter))
    if isinstance(t, Lam):
        name = "v%d" % next(counter)
        inner = dict(env)
        inner[t.var] = name
        return Lam(name, t.ty, _alpha_canonical(t.body, inner, counter))
    if isinstance(t, App):
        return App(_alpha_canonical(t.fn, env, counter),
                   _alpha_canonical(t.arg, env, counter))
    return t


def alpha_equal(a: Term, b: Term) -> bool:
    return canonical_print(a) == canonical_print(b)
