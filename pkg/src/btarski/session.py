"""Game sessions: a stepwise wrapper around an arena through which an
external client plays the refuter.

A session auto-applies every forced prover move, so from the outside the game
alternates between "awaiting a refuter choice" and "finished".  Trace export
captures the creation config plus the full event log; importing a trace
replays the recorded refuter choices through a fresh session and must
reproduce the identical event sequence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EngineError, IllegalChoice, ParseError, SessionFinished
from .formulas import And, Forall, print_formula
from .library import default_registry, realizer_builders
from .sexpr import Registry, load_prelude, parse_formula, parse_term
from .strategy import Arena, DEFAULT_MOVE_FUEL

AWAITING_ABELARD = "AwaitingAbelard"
AWAITING_ADVANCE = "AwaitingAdvance"
FINISHED = "Finished"

_ids = itertools.count(1)


@dataclass
class SessionConfig:
    formula: str                 # formula source text
    realizer: str                # realizer source text or @name reference
    fuel: int = DEFAULT_MOVE_FUEL
    display_range: int = 100
    monitor_bound: int | None = None
    prelude: str | None = None   # extra prelude entries, loaded over defaults

    def to_json(self):
        return {"formula": self.formula, "realizer": self.realizer,
                "fuel": self.fuel, "display_range": self.display_range,
                "monitor_bound": self.monitor_bound, "prelude": self.prelude}

    @staticmethod
    def from_json(data):
        return SessionConfig(
            formula=data["formula"], realizer=data["realizer"],
            fuel=data.get("fuel", DEFAULT_MOVE_FUEL),
            display_range=data.get("display_range", 100),
            monitor_bound=data.get("monitor_bound"),
            prelude=data.get("prelude"))


def _resolve(config: SessionConfig, registry: Registry | None):
    reg = registry if registry is not None else default_registry()
    if config.prelude:
        reg = load_prelude(config.prelude, reg, realizer_builders())
    formula = parse_formula(config.formula, reg)
    if config.realizer.startswith("@"):
        name = config.realizer[1:]
        if name not in reg.realizers:
            raise ParseError("unknown realizer reference %r" % name)
        realizer = reg.realizers[name]
    else:
        realizer = parse_term(config.realizer, reg)
    return reg, formula, realizer


class Session:
    def __init__(self, config: SessionConfig, registry: Registry | None = None):
        self.id = "g%d" % next(_ids)
        self.config = config
        self.registry, formula, realizer = _resolve(config, registry)
        self.arena = Arena(formula, realizer, fuel=config.fuel,
                           monitor_bound=config.monitor_bound)
        self.status = AWAITING_ADVANCE
        self._advance()

    # -- state machine

    def _advance(self):
        assert self.status == AWAITING_ADVANCE
        self.arena.advance()
        if self.arena.finished():
            self.status = FINISHED
        else:
            self.status = AWAITING_ABELARD

    def move(self, choice):
        """Apply one refuter choice, then every forced prover response.

        Returns the list of events the move produced.
        """
        if self.status == FINISHED:
            raise SessionFinished("the game is over")
        if self.status != AWAITING_ABELARD:
            raise EngineError("session is mid-advance")  # unreachable by API
        before = len(self.arena.events)
        self.arena.abelard_move(_coerce_choice(choice))
        self.status = AWAITING_ADVANCE
        self._advance()
        return self.arena.events[before:]

    # -- views

    def view(self):
        arena = self.arena
        pos = arena.position()
        choice_kind = None
        display = []
        if self.status == AWAITING_ABELARD:
            if isinstance(pos.formula, Forall):
                choice_kind = "numeral"
                display = list(range(self.config.display_range))
            elif isinstance(pos.formula, And):
                choice_kind = "binary"
                display = ["L", "R"]
        return {
            "v": 1,
            "id": self.id,
            "status": self.status,
            "winner": arena.winner,
            "root": print_formula(arena.root),
            "play": [print_formula(p.formula) for p in arena.play.positions],
            "state": arena.state.to_sexpr(),
            "backtracks": arena.backtracks,
            "events_len": len(arena.events),
            "choice_kind": choice_kind,
            "display_choices": display,
        }

    # -- trace export / import

    def export_trace(self):
        return {"v": 1, "config": self.config.to_json(),
                "events": list(self.arena.events)}

    @staticmethod
    def from_trace(trace, registry: Registry | None = None) -> "Session":
        config = SessionConfig.from_json(trace["config"])
        session = Session(config, registry)
        replayed = [e["choice"] for e in trace["events"]
                    if e["ev"] == "extend" and e["by"] == "A"]
        for choice in replayed:
            session.move(choice)
        got = session.arena.events
        want = list(trace["events"])
        if got[:len(want)] != want:
            raise EngineError("trace replay diverged; refusing the import")
        return session


def _coerce_choice(choice):
    if isinstance(choice, bool):
        raise IllegalChoice("choice must be a numeral or L/R")
    if isinstance(choice, int):
        return choice
    if isinstance(choice, str):
        if choice in ("L", "R"):
            return choice
        if choice.isdigit():
            return int(choice)
    raise IllegalChoice("choice must be a numeral or L/R, got %r" % (choice,))
