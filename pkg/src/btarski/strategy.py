"""From realizers to winning strategies: the adapted realizer along a play,
the state learned along a backtracking history, and the induced prover moves.

The arena owns one running game.  It memoizes the adapted realizer for every
prefix of the current play (truncation on backtrack keeps the memo valid),
keeps the learned state, and appends every move, state update, and diagnostic
to an event log in the JSON-lines trace schema.  Identical inputs produce
byte-identical traces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import (
    EngineError, FuelExhausted, IllegalChoice, NotImplicationFree,
    PreconditionError, TypeCheckError,
)
from .evaluate import BoolV, NumV, StateV, eval_at_state
from .formulas import (
    And, AtomF, Exists, Forall, Formula, formula_closed, implication_free,
    Or, print_formula, realizer_type,
)
from .games import (
    ABELARD, Backtrack, BtMove, Extend, infer_choice, mover_of, Play,
    Terminal, TPosition, tarski_children,
)
from .knowledge import EMPTY_STATE, consistent_union, state_leq
from .realizability import realizes, Verdict
from .terms import (
    App, numeral, Proj, STATE, Term, has_empty_state, is_closed,
)
from .typecheck import typecheck

__all__ = [
    "AbelardStrategy", "RandomAbelard", "ScriptedAbelard", "CallbackAbelard",
    "Arena", "GameTrace", "adapt", "sigma_step", "omega", "run_game",
    "lemma38_monitor", "DEFAULT_MOVE_FUEL",
]

DEFAULT_MOVE_FUEL = 10_000


# ---------------------------------------------------------------------------
# Opponent models


class AbelardStrategy:
    def choose(self, position: TPosition, arena: "Arena"):
        """A legal choice at a refuter position, or None to forfeit."""
        raise NotImplementedError


class RandomAbelard(AbelardStrategy):
    """Uniform choices with a recorded seed; numerals from 0..range-1."""

    def __init__(self, seed: int, choice_range: int = 20):
        self.seed = seed
        self.choice_range = choice_range
        self._rng = random.Random(seed)

    def choose(self, position, arena):
        if isinstance(position.formula, Forall):
            return self._rng.randrange(self.choice_range)
        return self._rng.choice(("L", "R"))


class ScriptedAbelard(AbelardStrategy):
    def __init__(self, choices):
        self.choices = list(choices)
        self._next = 0

    def choose(self, position, arena):
        if self._next >= len(self.choices):
            return None  # forfeit
        choice = self.choices[self._next]
        self._next += 1
        return choice


class CallbackAbelard(AbelardStrategy):
    def __init__(self, fn):
        self.fn = fn

    def choose(self, position, arena):
        return self.fn(position, arena)


# ---------------------------------------------------------------------------
# The adapted realizer and the learned state (standalone definitions)


def _tern(t, i):
    if i == 0:
        return Proj(0, t)
    return Proj(i - 1, Proj(1, t))


def _step_realizer(t: Term, parent: Formula, child: Formula) -> Term:
    if isinstance(parent, Exists):
        return Proj(1, t)
    if isinstance(parent, Forall):
        n = infer_choice(parent, child)
        return App(t, numeral(n))
    if isinstance(parent, And):
        return Proj(0 if child == parent.left else 1, t)
    if isinstance(parent, Or):
        return _tern(t, 1 if child == parent.left else 2)
    raise EngineError("cannot adapt across an atomic position")


def adapt(u: Term, play: Play) -> Term:
    """The realizer adapted to a play, by recursion on its length."""
    root = play.positions[0].formula
    if typecheck(u) != realizer_type(root):
        raise PreconditionError(
            "type-mismatch", "realizer does not fit the play's root formula")
    t = u
    for a, b in zip(play.positions, play.positions[1:]):
        t = _step_realizer(t, a.formula, b.formula)
    return t


def sigma_step(prev_state, event: str, t: Term = None):
    """One step of the learned state: unchanged on extensions; on a
    backtrack, merge in the evaluated evidence of the abandoned play when it
    has state type."""
    if event == "extend":
        return prev_state
    if event != "backtrack":
        raise ValueError("event must be 'extend' or 'backtrack'")
    if t is None or typecheck(t) != STATE:
        return prev_state
    v = eval_at_state(t, prev_state)
    if not isinstance(v, StateV):
        raise EngineError("abandoned evidence did not evaluate to a state")
    return consistent_union(prev_state, v.state)


# ---------------------------------------------------------------------------
# Arena


@dataclass
class GameTrace:
    root: Formula
    events: list
    winner: str  # "E" | "A" | "timeout"
    backtracks: int
    final_state: object
    monitor_verdicts: list = field(default_factory=list)

    def move_events(self):
        return [e for e in self.events
                if e["ev"] in ("extend", "backtrack", "result")]


class Arena:
    """One running backtracking game driven by a realizer."""

    def __init__(self, formula: Formula, realizer: Term,
                 fuel: int = DEFAULT_MOVE_FUEL, monitor_bound: int | None = None,
                 validate: bool = True):
        if validate:
            if not formula_closed(formula):
                raise PreconditionError("open-formula", "formula must be closed")
            if not implication_free(formula):
                raise NotImplicationFree(
                    "games are defined for implication-free formulas only")
            if not is_closed(realizer):
                raise PreconditionError("open-term", "realizer must be closed")
            if not has_empty_state(realizer):
                raise PreconditionError(
                    "embedded-state",
                    "realizer must contain only empty state constants")
            want = realizer_type(formula)
            got = typecheck(realizer)
            if got != want:
                raise TypeCheckError(
                    "realizer has type %r but the formula needs %r"
                    % (got, want))
        self.root = formula
        self.realizer = realizer
        self.play = Play((TPosition(formula),))
        self._rho = [realizer]  # adapted realizer per prefix length
        self.state = EMPTY_STATE
        self.events = []
        self.backtracks = 0
        self.fuel = fuel
        self.monitor_bound = monitor_bound
        self.monitor_verdicts = []
        self.winner = None
        self._last_was_stay = False
        self._stay_state = None

    # -- accessors

    def rho(self, keep: int | None = None) -> Term:
        """Memoized adapted realizer of the play prefix of the given length."""
        if keep is None:
            keep = len(self.play)
        return self._rho[keep - 1]

    def finished(self) -> bool:
        return self.winner is not None

    def position(self) -> TPosition:
        return self.play.last()

    # -- evaluation helpers

    def _value_at(self, term: Term, state):
        return eval_at_state(term, state)

    # -- event emission

    def _emit(self, ev: dict):
        self.events.append(ev)

    def _emit_result(self, winner: str):
        self.winner = winner
        self._emit({"ev": "result", "winner": winner})

    def _spend_move(self) -> bool:
        if self.fuel <= 0:
            self._emit_result("timeout")
            return False
        self.fuel -= 1
        return True

    # -- moves

    def _apply_extend(self, by: str, choice, nxt: TPosition):
        self.play = Play(self.play.positions + (nxt,))
        self._rho.append(_step_realizer(self._rho[-1],
                                        self.play.positions[-2].formula,
                                        nxt.formula))
        self._emit({"ev": "extend", "by": by, "choice": choice,
                    "pos": print_formula(nxt.formula)})
        if by == "A":
            self._last_was_stay = False

    def _apply_backtrack(self, keep: int, new_state):
        stayed = keep == len(self.play)
        if stayed:
            if self._last_was_stay and not (
                    state_leq(self._stay_state, new_state)
                    and self._stay_state != new_state):
                raise FuelExhausted(
                    "state stopped growing across consecutive stay-in-place "
                    "backtracks; the input does not behave like a realizer")
            self._last_was_stay = True
            self._stay_state = new_state
        else:
            self._last_was_stay = False
        self.state = new_state
        self.play = self.play.prefix(keep)
        del self._rho[keep:]
        self.backtracks += 1
        self._emit({"ev": "backtrack", "to": keep,
                    "state": new_state.to_sexpr()})
        self._emit({"ev": "sigma", "state": new_state.to_sexpr()})

    def abelard_move(self, choice):
        """Apply a refuter extension at the current position."""
        pos = self.position()
        if mover_of(pos) is not ABELARD:
            raise IllegalChoice("it is not the refuter's turn")
        nxt = tarski_children(pos, choice)
        if not self._spend_move():
            return
        self._apply_extend("A", choice, nxt)

    def _monitor(self):
        if self.monitor_bound is None:
            return
        verdict = lemma38_monitor(self, self.monitor_bound)
        self.monitor_verdicts.append(
            (len(self.play), print_formula(self.position().formula), verdict))

    def eloise_step(self) -> bool:
        """Apply one prover move per the strategy; False if it is not her turn
        or the game ended."""
        if self.finished():
            return False
        pos = self.position()
        m = mover_of(pos)
        if isinstance(m, Terminal) and m.win:
            self._emit_result("E")
            return False
        if m is ABELARD:
            return False
        self._monitor()
        move = omega(self)
        if not self._spend_move():
            return False
        if isinstance(move, Extend):
            self._apply_extend("E", move.choice, move.next)
        else:
            t = self.rho()
            new_state = sigma_step(self.state, "backtrack", t)
            self._apply_backtrack(move.keep, new_state)
        return True

    def advance(self):
        """Run prover moves until the refuter's turn, a win, or timeout."""
        while self.eloise_step():
            pass


def omega(arena: Arena) -> BtMove:
    """The prover's move at the current position, per the adapted realizer."""
    pos = arena.position()
    f = pos.formula
    t = arena.rho()
    s = arena.state
    if isinstance(f, Exists):
        v = arena._value_at(Proj(0, t), s)
        if not isinstance(v, NumV):
            raise EngineError("existential witness did not evaluate to a numeral")
        arena._emit({"ev": "omega_clause", "clause": 1, "j": None})
        return Extend(v.value, tarski_children(pos, v.value))
    if isinstance(f, Or):
        v = arena._value_at(_tern(t, 0), s)
        if not isinstance(v, BoolV):
            raise EngineError("disjunction flag did not evaluate to a boolean")
        choice = "L" if v.value else "R"
        arena._emit({"ev": "omega_clause", "clause": 2, "j": None})
        return Extend(choice, tarski_children(pos, choice))
    if isinstance(f, AtomF):
        m = mover_of(pos)
        if not isinstance(m, Terminal) or m.win:
            raise IllegalChoice("omega only moves at lost atomic positions")
        prospective = sigma_step(s, "backtrack", t)
        positions = arena.play.positions
        n = len(positions)
        target = n
        for j in range(1, n):
            parent = positions[j - 1].formula
            child = positions[j].formula
            w = arena.rho(j)
            if isinstance(parent, Exists):
                chosen = infer_choice(parent, child)
                v = arena._value_at(Proj(0, w), prospective)
                if not isinstance(v, NumV):
                    raise EngineError(
                        "existential witness did not evaluate to a numeral")
                if v.value != chosen:
                    target = j
                    break
            elif isinstance(parent, Or):
                v = arena._value_at(_tern(w, 0), prospective)
                if not isinstance(v, BoolV):
                    raise EngineError(
                        "disjunction flag did not evaluate to a boolean")
                went_left = child == parent.left
                if went_left != v.value:
                    target = j
                    break
        arena._emit({"ev": "omega_clause", "clause": 3, "j": target})
        return Backtrack(target)
    raise IllegalChoice("it is not the prover's turn at %s" % print_formula(f))


def lemma38_monitor(arena: Arena, bound: int) -> Verdict:
    """Check the adapted realizer against the current position at the learned
    state; anything but Holds/Unknown flags an engine bug or a non-realizer."""
    return realizes(arena.rho(), arena.state,
                    arena.position().formula, bound)


def run_game(formula: Formula, realizer: Term, abelard: AbelardStrategy,
             fuel: int = DEFAULT_MOVE_FUEL,
             monitor_bound: int | None = None) -> GameTrace:
    """Play the backtracking game to completion against the given refuter."""
    arena = Arena(formula, realizer, fuel=fuel, monitor_bound=monitor_bound)
    while True:
        arena.advance()
        if arena.finished():
            break
        choice = abelard.choose(arena.position(), arena)
        if choice is None:
            arena._emit_result("E")  # refuter forfeits
            break
        arena.abelard_move(choice)
        if arena.finished():
            break
    return GameTrace(root=formula, events=arena.events, winner=arena.winner,
                     backtracks=arena.backtracks, final_state=arena.state,
                     monitor_verdicts=arena.monitor_verdicts)
