"""Knowledge states: finite consistent sets of learned witnesses.

An atom <P, args, m> records that the predicate P holds on args with witness
m appended; a knowledge state is a finite set of atoms in which no two atoms
bind the same (P, args) key to different witnesses.  The merge operation is
left-biased: atoms of the right operand that conflict with the left are
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PredicateFalse
from .terms import Predicate, numeral, print_term

__all__ = [
    "Atom", "KnowledgeState", "EMPTY_STATE", "atom_new", "consistent_union",
    "add_semantics", "lookup", "state_leq", "state_of", "pred_holds",
]


@dataclass(frozen=True, order=False)
class Atom:
    pred: Predicate
    args: tuple  # numerals as machine ints, length = pred.arity - 1
    witness: int

    def sort_key(self):
        return (self.pred.key, self.args, self.witness)

    def key(self):
        return (self.pred, self.args)

    def to_sexpr(self):
        args = " ".join(print_term(numeral(n)) for n in self.args)
        return "(%s (%s) %s)" % (self.pred.display(), args,
                                 print_term(numeral(self.witness)))


@dataclass(frozen=True)
class KnowledgeState:
    atoms: tuple  # canonically ordered, pairwise consistent

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, atom):
        return atom in self.atoms

    def to_sexpr(self):
        return "(state (%s))" % " ".join(a.to_sexpr() for a in self.atoms)

    def is_empty(self):
        return not self.atoms


EMPTY_STATE = KnowledgeState(())


def state_of(atoms) -> KnowledgeState:
    """Canonicalize and validate a collection of atoms into a state."""
    ordered = sorted(set(atoms), key=Atom.sort_key)
    seen = {}
    for a in ordered:
        k = a.key()
        if k in seen and seen[k] != a.witness:
            raise PredicateFalse(
                "inconsistent atoms for %s%s: witnesses %d and %d"
                % (a.pred.display(), a.args, seen[k], a.witness))
        seen[k] = a.witness
    return KnowledgeState(tuple(ordered))


def pred_holds(pred: Predicate, nums) -> bool:
    """Normalize pred applied to the given machine-int numerals."""
    # Imported here: evaluate depends on this module for the state algebra.
    from .evaluate import normalize
    from .terms import TRUE, FALSE, apply_all

    nums = list(nums)
    if len(nums) != pred.arity:
        raise ValueError("predicate %s expects %d arguments, got %d"
                         % (pred.display(), pred.arity, len(nums)))
    nf = normalize(apply_all(pred.body, [numeral(n) for n in nums]),
                   check_oracles=False)
    if nf == TRUE:
        return True
    if nf == FALSE:
        return False
    raise PredicateFalse("predicate %s did not normalize to a boolean"
                         % pred.display())


def atom_new(pred: Predicate, args, witness: int) -> Atom:
    args = tuple(args)
    if len(args) != pred.arity - 1:
        raise ValueError("atom for %s needs %d argument(s), got %d"
                         % (pred.display(), pred.arity - 1, len(args)))
    if not pred_holds(pred, args + (witness,)):
        raise PredicateFalse("%s%s with witness %d is false"
                             % (pred.display(), args, witness))
    return Atom(pred, args, witness)


def consistent_union(s1: KnowledgeState, s2: KnowledgeState) -> KnowledgeState:
    """All of s1 plus the atoms of s2 consistent with every atom of s1."""
    bound = {a.key(): a.witness for a in s1.atoms}
    merged = list(s1.atoms)
    for a in s2.atoms:
        w = bound.get(a.key())
        if w is None:
            merged.append(a)
        elif w == a.witness and a not in s1.atoms:
            merged.append(a)  # same fact spelled twice; harmless
    return KnowledgeState(tuple(sorted(set(merged), key=Atom.sort_key)))


def lookup(s: KnowledgeState, pred: Predicate, args):
    """The witness bound to (pred, args) in s, or None."""
    args = tuple(args)
    for a in s.atoms:
        if a.pred == pred and a.args == args:
            return a.witness
    return None


def add_semantics(s: KnowledgeState, pred: Predicate, args, witness: int) -> KnowledgeState:
    """Set-level meaning of the single-atom add at state s.

    Empty when (pred, args) is already bound in s (to any witness) or the
    candidate atom is false; the singleton of the new atom otherwise.
    """
    args = tuple(args)
    if lookup(s, pred, args) is not None:
        return EMPTY_STATE
    if not pred_holds(pred, args + (witness,)):
        return EMPTY_STATE
    return KnowledgeState((Atom(pred, args, witness),))


def state_leq(s1: KnowledgeState, s2: KnowledgeState) -> bool:
    return set(s1.atoms) <= set(s2.atoms)
