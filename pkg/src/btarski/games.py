"""Verification games on closed implication-free formulas, and their
1-backtracking extension.

Positions are (instantiated) subformulas of the root.  The prover moves at
disjunctions and existentials, the refuter at conjunctions and universals;
atomic positions end the underlying play and the prover wins exactly the
plays ending in a true atom.  In the backtracking game a position is a finite
play; on top of the ordinary extension moves, the prover may retract a
complete lost play to any proper prefix ending in one of her own positions,
or stay in place (retract to the lost play itself), which is what lets her
commit a state update and try again.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IllegalChoice
from .evaluate import eval_atom
from .formulas import (
    And, AtomF, Exists, Forall, Formula, formula_closed, Or, print_formula,
    subst_formula,
)
from .terms import numeral, numeral_value, Term

__all__ = [
    "TPosition", "Mover", "ELOISE", "ABELARD", "Terminal", "Play", "BtMove",
    "Extend", "Backtrack", "LegalMoves", "mover_of", "tarski_children",
    "legal_bt_moves", "is_won", "infer_choice", "play_valid",
]


@dataclass(frozen=True)
class TPosition:
    formula: Formula

    def __repr__(self):
        return "TPosition(%s)" % print_formula(self.formula)


class Mover:
    __slots__ = ()


@dataclass(frozen=True)
class _Eloise(Mover):
    pass


@dataclass(frozen=True)
class _Abelard(Mover):
    pass


@dataclass(frozen=True)
class Terminal(Mover):
    win: bool


ELOISE = _Eloise()
ABELARD = _Abelard()


def mover_of(pos: TPosition) -> Mover:
    f = pos.formula
    if isinstance(f, (Exists, Or)):
        return ELOISE
    if isinstance(f, (Forall, And)):
        return ABELARD
    if isinstance(f, AtomF):
        return Terminal(eval_atom(f))
    raise IllegalChoice("implication has no mover in a verification game")


def tarski_children(pos: TPosition, choice) -> TPosition:
    """The position reached from ``pos`` by the given move.

    ``choice`` is a non-negative integer at quantifiers and "L"/"R" at
    connectives.
    """
    f = pos.formula
    if isinstance(f, (Forall, Exists)):
        if not isinstance(choice, int) or choice < 0:
            raise IllegalChoice("quantifier move needs a numeral, got %r" % (choice,))
        return TPosition(subst_formula(f.body, f.var, numeral(choice)))
    if isinstance(f, (And, Or)):
        if choice == "L":
            return TPosition(f.left)
        if choice == "R":
            return TPosition(f.right)
        raise IllegalChoice("connective move needs L or R, got %r" % (choice,))
    raise IllegalChoice("no moves from an atomic position")


@dataclass(frozen=True)
class Play:
    positions: tuple  # of TPosition, non-empty, starting at the root

    def __len__(self):
        return len(self.positions)

    def last(self) -> TPosition:
        return self.positions[-1]

    def prefix(self, keep: int) -> "Play":
        return Play(self.positions[:keep])


class BtMove:
    __slots__ = ()


@dataclass(frozen=True)
class Extend(BtMove):
    choice: object  # int or "L"/"R"
    next: TPosition


@dataclass(frozen=True)
class Backtrack(BtMove):
    keep: int  # number of positions preserved; keep == len(play) stays in place


@dataclass(frozen=True)
class LegalMoves:
    to_move: str | None        # "E", "A", or None when the game is over
    extend_from: TPosition | None  # position offering extensions, if any
    backtracks: tuple          # legal prefix lengths (stay-in-place included)

    def allows_backtrack(self, keep):
        return keep in self.backtracks


def is_won(play: Play) -> bool:
    m = mover_of(play.last())
    return isinstance(m, Terminal) and m.win


def legal_bt_moves(play: Play) -> LegalMoves:
    last = play.last()
    m = mover_of(last)
    if isinstance(m, Terminal):
        if m.win:
            return LegalMoves(None, None, ())
        # Complete lost play: retract to any proper prefix ending in a prover
        # position, or stay in place.
        targets = [
            k for k in range(1, len(play))
            if mover_of(play.positions[k - 1]) is ELOISE
        ]
        targets.append(len(play))
        return LegalMoves("E", None, tuple(targets))
    if m is ELOISE:
        return LegalMoves("E", last, ())
    return LegalMoves("A", last, ())


def infer_choice(parent: Formula, child: Formula):
    """Recover the move that produced ``child`` from ``parent``.

    Raises IllegalChoice when ``child`` is not reachable in one move.
    """
    if isinstance(parent, (And, Or)):
        if child == parent.left:
            return "L"
        if child == parent.right:
            return "R"
        raise IllegalChoice("%s is not a side of %s"
                            % (print_formula(child), print_formula(parent)))
    if isinstance(parent, (Forall, Exists)):
        n = _instantiation_of(parent, child)
        if n is None:
            raise IllegalChoice("%s is not an instance of %s"
                                % (print_formula(child), print_formula(parent)))
        return n
    raise IllegalChoice("no moves from %s" % print_formula(parent))


def _instantiation_of(parent, child):
    witness = _first_substituted(parent.body, parent.var, child)
    if witness is None:
        # Vacuous quantifier: any numeral yields the same instance.
        if subst_formula(parent.body, parent.var, numeral(0)) == child:
            return 0
        return None
    if subst_formula(parent.body, parent.var, numeral(witness)) == child:
        return witness
    return None


def _first_substituted(body, var, inst):
    """The numeral sitting in ``inst`` where ``body`` has the variable."""
    from .terms import Var, Succ, Pair, Proj, If, Rec, Lam, App

    def term_probe(b, i):
        if isinstance(b, Var) and b.name == var:
            return numeral_value(i)
        if type(b) is not type(i):
            return None
        if isinstance(b, Succ):
            return term_probe(b.arg, i.arg)
        if isinstance(b, Pair):
            got = term_probe(b.fst, i.fst)
            return got if got is not None else term_probe(b.snd, i.snd)
        if isinstance(b, Proj):
            return term_probe(b.arg, i.arg)
        if isinstance(b, If):
            for x, y in ((b.cond, i.cond), (b.then, i.then), (b.orelse, i.orelse)):
                got = term_probe(x, y)
                if got is not None:
                    return got
            return None
        if isinstance(b, Rec):
            for x, y in ((b.base, i.base), (b.step, i.step), (b.arg, i.arg)):
                got = term_probe(x, y)
                if got is not None:
                    return got
            return None
        if isinstance(b, Lam):
            if b.var == var:
                return None
            return term_probe(b.body, i.body)
        if isinstance(b, App):
            got = term_probe(b.fn, i.fn)
            return got if got is not None else term_probe(b.arg, i.arg)
        return None

    def formula_probe(b, i):
        if isinstance(b, AtomF):
            for x, y in zip(b.args, i.args):
                got = term_probe(x, y)
                if got is not None:
                    return got
            return None
        if isinstance(b, (And, Or)):
            got = formula_probe(b.left, i.left)
            return got if got is not None else formula_probe(b.right, i.right)
        if isinstance(b, (Forall, Exists)):
            if b.var == var:
                return None
            return formula_probe(b.body, i.body)
        return None

    if type(body) is not type(inst) and not isinstance(body, AtomF):
        return None
    try:
        return formula_probe(body, inst)
    except AttributeError:
        return None


def play_valid(play: Play) -> bool:
    """Every consecutive pair is a legal move and the first position is closed."""
    if not play.positions:
        return False
    if not formula_closed(play.positions[0].formula):
        return False
    for a, b in zip(play.positions, play.positions[1:]):
        try:
            choice = infer_choice(a.formula, b.formula)
        except IllegalChoice:
            return False
        if tarski_children(a, choice) != b:
            return False
    return True
