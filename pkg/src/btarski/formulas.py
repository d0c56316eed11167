"""Arithmetical formulas and the realizer-type translation.

Atoms apply a closed boolean predicate to numeric terms; the other
connectives are conjunction, disjunction, implication, and the two
quantifiers over naturals.  Games are restricted to implication-free closed
formulas; the realizability checker additionally handles implication.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Arrow, BOOL, NAT, Predicate, Prod, STATE, Term, Ty, free_vars,
    print_term, subst,
)

__all__ = [
    "Formula", "AtomF", "And", "Or", "Imp", "Forall", "Exists",
    "formula_free_vars", "formula_closed", "subst_formula", "print_formula",
    "realizer_type", "implication_free", "formula_depth",
]


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class AtomF(Formula):
    pred: Predicate
    args: tuple  # terms of type nat, possibly with free numeric variables

    def __post_init__(self):
        if len(self.args) != self.pred.arity:
            raise ValueError("atom for %s needs %d argument(s), got %d"
                             % (self.pred.display(), self.pred.arity,
                                len(self.args)))


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


def formula_free_vars(f: Formula) -> frozenset:
    if isinstance(f, AtomF):
        out = frozenset()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, (And, Or, Imp)):
        return formula_free_vars(f.left) | formula_free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return formula_free_vars(f.body) - {f.var}
    raise TypeError("not a formula: %r" % (f,))


def formula_closed(f: Formula) -> bool:
    return not formula_free_vars(f)


def subst_formula(f: Formula, name: str, value: Term) -> Formula:
    if isinstance(f, AtomF):
        return AtomF(f.pred, tuple(subst(a, name, value) for a in f.args))
    if isinstance(f, And):
        return And(subst_formula(f.left, name, value),
                   subst_formula(f.right, name, value))
    if isinstance(f, Or):
        return Or(subst_formula(f.left, name, value),
                  subst_formula(f.right, name, value))
    if isinstance(f, Imp):
        return Imp(subst_formula(f.left, name, value),
                   subst_formula(f.right, name, value))
    if isinstance(f, Forall):
        if f.var == name:
            return f
        return Forall(f.var, subst_formula(f.body, name, value))
    if isinstance(f, Exists):
        if f.var == name:
            return f
        return Exists(f.var, subst_formula(f.body, name, value))
    raise TypeError("not a formula: %r" % (f,))


def print_formula(f: Formula) -> str:
    if isinstance(f, AtomF):
        parts = " ".join(print_term(a) for a in f.args)
        return "(atom %s %s)" % (f.pred.display(), parts)
    if isinstance(f, And):
        return "(and %s %s)" % (print_formula(f.left), print_formula(f.right))
    if isinstance(f, Or):
        return "(or %s %s)" % (print_formula(f.left), print_formula(f.right))
    if isinstance(f, Imp):
        return "(imp %s %s)" % (print_formula(f.left), print_formula(f.right))
    if isinstance(f, Forall):
        return "(forall %s %s)" % (f.var, print_formula(f.body))
    if isinstance(f, Exists):
        return "(exists %s %s)" % (f.var, print_formula(f.body))
    raise TypeError("not a formula: %r" % (f,))


def realizer_type(f: Formula) -> Ty:
    """The type of evidence for ``f``: atoms carry a state, conjunction a
    pair, disjunction a flagged pair of alternatives, implication a function,
    the universal a function from naturals, the existential a witness pair."""
    if isinstance(f, AtomF):
        return STATE
    if isinstance(f, And):
        return Prod(realizer_type(f.left), realizer_type(f.right))
    if isinstance(f, Or):
        return Prod(BOOL, Prod(realizer_type(f.left), realizer_type(f.right)))
    if isinstance(f, Imp):
        return Arrow(realizer_type(f.left), realizer_type(f.right))
    if isinstance(f, Forall):
        return Arrow(NAT, realizer_type(f.body))
    if isinstance(f, Exists):
        return Prod(NAT, realizer_type(f.body))
    raise TypeError("not a formula: %r" % (f,))


def implication_free(f: Formula) -> bool:
    if isinstance(f, AtomF):
        return True
    if isinstance(f, Imp):
        return False
    if isinstance(f, (And, Or)):
        return implication_free(f.left) and implication_free(f.right)
    if isinstance(f, (Forall, Exists)):
        return implication_free(f.body)
    raise TypeError("not a formula: %r" % (f,))


def formula_depth(f: Formula) -> int:
    if isinstance(f, AtomF):
        return 1
    if isinstance(f, (And, Or, Imp)):
        return 1 + max(formula_depth(f.left), formula_depth(f.right))
    if isinstance(f, (Forall, Exists)):
        return 1 + formula_depth(f.body)
    raise TypeError("not a formula: %r" % (f,))
