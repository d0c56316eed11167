"""S-expression surface syntax: terms, types, formulas, states, preludes.

The grammar is fully parenthesized; numerals are written as iterated
successor applications.  Predicates appearing inside oracle constants, state
literals, and formula atoms may be referenced by a registered name or spelled
out as a term literal.  A prelude file is a sequence of

    (defpred name arity term)
    (defterm name term)
    (defrealizer name (builder arg ...))

entries; ``defterm`` names splice into later entries wherever an identifier
would otherwise be unbound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .evaluate import make_predicate
from .formulas import (
    And, AtomF, Exists, Forall, Formula, Imp, Or,
)
from .knowledge import KnowledgeState, atom_new, state_of
from .terms import (
    App, Arrow, BOOL, CUP, FALSE, If, Lam, Learn, LEARN_ADD, LEARN_CHI,
    LEARN_PHI, NAT, numeral_value, Oracle, ORACLE_ADD, ORACLE_PHI, ORACLE_X,
    Pair, Predicate, Prod, Proj, Rec, STATE, StateConst, Succ, Term, TRUE,
    Ty, Var, ZERO,
)
from .typecheck import typecheck

__all__ = [
    "Registry", "parse_term", "parse_type", "parse_formula", "parse_state",
    "load_prelude", "RESERVED",
]

RESERVED = frozenset({
    "0", "S", "true", "false", "lam", "app", "pair", "fst", "snd", "if",
    "rec", "state", "X", "Phi", "AddP", "chi", "phi", "add", "cup",
    "nat", "bool", "prod", "arrow",
    "atom", "and", "or", "imp", "forall", "exists",
    "defpred", "defterm", "defrealizer",
})


@dataclass
class Registry:
    """Named predicates, terms, and realizers available to the parser."""

    predicates: dict = field(default_factory=dict)
    terms: dict = field(default_factory=dict)
    realizers: dict = field(default_factory=dict)

    def register_predicate(self, pred: Predicate):
        if pred.name is None:
            raise ValueError("only named predicates can be registered")
        self.predicates[pred.name] = pred
        return pred

    def register_term(self, name: str, term: Term):
        self.terms[name] = term
        return term

    def register_realizer(self, name: str, term: Term):
        self.realizers[name] = term
        return term

    def copy(self):
        return Registry(dict(self.predicates), dict(self.terms),
                        dict(self.realizers))


# ---------------------------------------------------------------------------
# Reader


@dataclass
class _SNode:
    value: object  # str for atoms, list of _SNode for lists
    pos: int

    def is_atom(self):
        return isinstance(self.value, str)


def _read_all(text: str):
    nodes, i = [], 0
    n = len(text)
    stack = []
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == ";":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            node = _SNode([], i)
            (stack[-1].value if stack else nodes).append(node)
            stack.append(node)
            i += 1
            continue
        if c == ")":
            if not stack:
                raise ParseError("unbalanced ')'", i)
            stack.pop()
            i += 1
            continue
        j = i
        while j < n and text[j] not in " \t\r\n();":
            j += 1
        node = _SNode(text[i:j], i)
        (stack[-1].value if stack else nodes).append(node)
        i = j
    if stack:
        raise ParseError("unbalanced '('", stack[-1].pos)
    return nodes


def _read_one(text: str) -> _SNode:
    nodes = _read_all(text)
    if len(nodes) != 1:
        raise ParseError("expected exactly one expression, found %d" % len(nodes),
                         nodes[1].pos if len(nodes) > 1 else 0)
    return nodes[0]


def _expect_list(node, what, length=None):
    if node.is_atom():
        raise ParseError("expected %s, got atom %r" % (what, node.value), node.pos)
    if length is not None and len(node.value) != length:
        raise ParseError("%s takes %d item(s), got %d"
                         % (what, length - 1, len(node.value) - 1), node.pos)
    return node.value


def _head(node):
    items = _expect_list(node, "a form")
    if not items or not items[0].is_atom():
        raise ParseError("form must start with a keyword", node.pos)
    return items[0].value, items


# ---------------------------------------------------------------------------
# Types


def _type_of(node) -> Ty:
    if node.is_atom():
        if node.value == "nat":
            return NAT
        if node.value == "bool":
            return BOOL
        if node.value == "state":
            return STATE
        raise ParseError("unknown type %r" % node.value, node.pos)
    head, items = _head(node)
    if head == "prod":
        _expect_list(node, "prod", 3)
        return Prod(_type_of(items[1]), _type_of(items[2]))
    if head == "arrow":
        _expect_list(node, "arrow", 3)
        return Arrow(_type_of(items[1]), _type_of(items[2]))
    raise ParseError("unknown type form %r" % head, node.pos)


def parse_type(text: str) -> Ty:
    return _type_of(_read_one(text))


# ---------------------------------------------------------------------------
# Terms


def _identifier(name, pos):
    if name in RESERVED:
        raise ParseError("%r is reserved" % name, pos)
    return name


def _pred_of(node, registry, arity_hint=None) -> Predicate:
    if node.is_atom():
        name = node.value
        if registry is not None and name in registry.predicates:
            return registry.predicates[name]
        raise ParseError("unknown predicate %r" % name, node.pos)
    body = _term_of(node, registry, {})
    if arity_hint is not None:
        return make_predicate(arity_hint, body)
    ty = typecheck(body)
    arity = 0
    while isinstance(ty, Arrow) and ty.arg == NAT:
        arity += 1
        ty = ty.res
    if ty != BOOL or arity < 1:
        raise ParseError("predicate literal must have type nat^k -> bool",
                         node.pos)
    return make_predicate(arity, body)


def _numeral_of(node, registry, bound) -> int:
    t = _term_of(node, registry, bound)
    k = numeral_value(t)
    if k is None:
        raise ParseError("expected a numeral", node.pos)
    return k


def _state_of(node, registry) -> KnowledgeState:
    items = _expect_list(node, "state body")
    atoms = []
    for entry in items:
        parts = _expect_list(entry, "state atom", 3)
        pred = _pred_of(parts[0], registry,
                        arity_hint=len(_expect_list(parts[1], "atom args")) + 1)
        args = [_numeral_of(x, registry, {}) for x in
                _expect_list(parts[1], "atom args")]
        witness = _numeral_of(parts[2], registry, {})
        atoms.append(atom_new(pred, args, witness))
    return state_of(atoms)


_LEARN_HEADS = {"chi": LEARN_CHI, "phi": LEARN_PHI, "add": LEARN_ADD}
_ORACLE_HEADS = {"X": ORACLE_X, "Phi": ORACLE_PHI, "AddP": ORACLE_ADD}


def _term_of(node, registry, bound) -> Term:
    if node.is_atom():
        word = node.value
        if word == "0":
            return ZERO
        if word == "true":
            return TRUE
        if word == "false":
            return FALSE
        if word == "cup":
            return CUP
        name = _identifier(word, node.pos)
        if name in bound:
            return Var(name)
        if registry is not None and name in registry.terms:
            return registry.terms[name]
        raise ParseError("unknown identifier %r" % name, node.pos)
    head, items = _head(node)
    if head == "S":
        _expect_list(node, "S", 2)
        return Succ(_term_of(items[1], registry, bound))
    if head == "lam":
        _expect_list(node, "lam", 3)
        binder = _expect_list(items[1], "lam binder", 2)
        if not binder[0].is_atom():
            raise ParseError("lam binder must be a name", items[1].pos)
        var = _identifier(binder[0].value, binder[0].pos)
        ty = _type_of(binder[1])
        inner = dict(bound)
        inner[var] = True
        return Lam(var, ty, _term_of(items[2], registry, inner))
    if head == "app":
        _expect_list(node, "app", 3)
        return App(_term_of(items[1], registry, bound),
                   _term_of(items[2], registry, bound))
    if head == "pair":
        _expect_list(node, "pair", 3)
        return Pair(_term_of(items[1], registry, bound),
                    _term_of(items[2], registry, bound))
    if head == "fst":
        _expect_list(node, "fst", 2)
        return Proj(0, _term_of(items[1], registry, bound))
    if head == "snd":
        _expect_list(node, "snd", 2)
        return Proj(1, _term_of(items[1], registry, bound))
    if head == "if":
        _expect_list(node, "if", 4)
        return If(_term_of(items[1], registry, bound),
                  _term_of(items[2], registry, bound),
                  _term_of(items[3], registry, bound))
    if head == "rec":
        _expect_list(node, "rec", 5)
        return Rec(_type_of(items[1]),
                   _term_of(items[2], registry, bound),
                   _term_of(items[3], registry, bound),
                   _term_of(items[4], registry, bound))
    if head == "state":
        _expect_list(node, "state", 2)
        return StateConst(_state_of(items[1], registry))
    if head in _ORACLE_HEADS:
        _expect_list(node, head, 2)
        return Oracle(_ORACLE_HEADS[head], _pred_of(items[1], registry))
    if head in _LEARN_HEADS:
        _expect_list(node, head, 2)
        return Learn(_LEARN_HEADS[head], _pred_of(items[1], registry))
    raise ParseError("unknown term form %r" % head, node.pos)


def parse_term(text: str, registry: Registry | None = None, bound=()) -> Term:
    return _term_of(_read_one(text), registry, {v: True for v in bound})


def parse_state(text: str, registry: Registry | None = None) -> KnowledgeState:
    node = _read_one(text)
    head, items = _head(node)
    if head != "state":
        raise ParseError("expected a (state ...) literal", node.pos)
    _expect_list(node, "state", 2)
    return _state_of(items[1], registry)


# ---------------------------------------------------------------------------
# Formulas


def _formula_of(node, registry, bound) -> Formula:
    head, items = _head(node)
    if head == "atom":
        if len(items) < 3:
            raise ParseError("atom needs a predicate and arguments", node.pos)
        args = tuple(_term_of(x, registry, bound) for x in items[2:])
        pred = _pred_of(items[1], registry, arity_hint=None
                        if items[1].is_atom() else len(args))
        return AtomF(pred, args)
    if head in ("and", "or", "imp"):
        _expect_list(node, head, 3)
        ctor = {"and": And, "or": Or, "imp": Imp}[head]
        return ctor(_formula_of(items[1], registry, bound),
                    _formula_of(items[2], registry, bound))
    if head in ("forall", "exists"):
        _expect_list(node, head, 3)
        if not items[1].is_atom():
            raise ParseError("quantifier variable must be a name", items[1].pos)
        var = _identifier(items[1].value, items[1].pos)
        inner = dict(bound)
        inner[var] = True
        ctor = Forall if head == "forall" else Exists
        return ctor(var, _formula_of(items[2], registry, inner))
    raise ParseError("unknown formula form %r" % head, node.pos)


def parse_formula(text: str, registry: Registry | None = None, bound=()) -> Formula:
    return _formula_of(_read_one(text), registry, {v: True for v in bound})


# ---------------------------------------------------------------------------
# Preludes


def load_prelude(text: str, registry: Registry | None = None,
                 realizer_builders=None) -> Registry:
    """Load defpred/defterm/defrealizer entries into (a copy of) a registry."""
    registry = registry.copy() if registry is not None else Registry()
    for node in _read_all(text):
        head, items = _head(node)
        if head == "defpred":
            _expect_list(node, "defpred", 4)
            if not items[1].is_atom():
                raise ParseError("defpred name must be an atom", items[1].pos)
            name = _identifier(items[1].value, items[1].pos)
            if not items[2].is_atom() or not items[2].value.isdigit():
                raise ParseError("defpred arity must be a decimal count",
                                 items[2].pos)
            arity = int(items[2].value)
            body = _term_of(items[3], registry, {})
            registry.register_predicate(make_predicate(arity, body, name=name))
        elif head == "defterm":
            _expect_list(node, "defterm", 3)
            if not items[1].is_atom():
                raise ParseError("defterm name must be an atom", items[1].pos)
            name = _identifier(items[1].value, items[1].pos)
            registry.register_term(name, _term_of(items[2], registry, {}))
        elif head == "defrealizer":
            _expect_list(node, "defrealizer", 3)
            if not items[1].is_atom():
                raise ParseError("defrealizer name must be an atom",
                                 items[1].pos)
            name = _identifier(items[1].value, items[1].pos)
            builder_head, builder_items = _head(items[2])
            if not realizer_builders or builder_head not in realizer_builders:
                raise ParseError("unknown realizer builder %r" % builder_head,
                                 items[2].pos)
            build = realizer_builders[builder_head]
            registry.register_realizer(
                name, build(registry, builder_items[1:], _term_of, _pred_of))
        else:
            raise ParseError("unknown prelude form %r" % head, node.pos)
    return registry
