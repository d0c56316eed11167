"""Type checking for the full calculus.

Simply typed rules plus the signatures of the state and oracle constants.
For a predicate of arity k+1 the truth and witness constants consume the k
leading arguments; the add constants consume all k+1 (the witness included).
"""

from __future__ import annotations

from .errors import TypeCheckError
from .terms import (
    App, Arrow, BOOL, CupConst, If, Lam, Learn, LEARN_ADD, LEARN_CHI,
    LEARN_PHI, NAT, Oracle, ORACLE_ADD, ORACLE_PHI, ORACLE_X, Pair, Proj,
    Prod, Rec, STATE, StateConst, Succ, Term, TFalse, TTrue, Ty, Var, Zero,
    arrows, print_type,
)

__all__ = ["typecheck", "oracle_type", "learn_type"]


def oracle_type(kind: str, arity: int) -> Ty:
    if kind == ORACLE_X:
        return arrows([NAT] * (arity - 1), BOOL)
    if kind == ORACLE_PHI:
        return arrows([NAT] * (arity - 1), NAT)
    if kind == ORACLE_ADD:
        return arrows([NAT] * arity, STATE)
    raise ValueError("unknown oracle kind %r" % kind)


def learn_type(kind: str, arity: int) -> Ty:
    if kind == LEARN_CHI:
        return Arrow(STATE, arrows([NAT] * (arity - 1), BOOL))
    if kind == LEARN_PHI:
        return Arrow(STATE, arrows([NAT] * (arity - 1), NAT))
    if kind == LEARN_ADD:
        return Arrow(STATE, arrows([NAT] * arity, STATE))
    raise ValueError("unknown learn kind %r" % kind)


def typecheck(t: Term, ctx=None) -> Ty:
    """The unique simple type of ``t`` under ``ctx`` (name -> Ty)."""
    return _check(t, dict(ctx) if ctx else {}, "term")


def _fail(path, message):
    raise TypeCheckError("%s: %s" % (path, message))


def _check(t, ctx, path) -> Ty:
    if isinstance(t, Var):
        ty = ctx.get(t.name)
        if ty is None:
            _fail(path, "unbound variable %s" % t.name)
        return ty
    if isinstance(t, Zero):
        return NAT
    if isinstance(t, Succ):
        arg = _check(t.arg, ctx, path + ".S")
        if arg != NAT:
            _fail(path, "S expects nat, got %s" % print_type(arg))
        return NAT
    if isinstance(t, (TTrue, TFalse)):
        return BOOL
    if isinstance(t, Pair):
        return Prod(_check(t.fst, ctx, path + ".fst"),
                    _check(t.snd, ctx, path + ".snd"))
    if isinstance(t, Proj):
        arg = _check(t.arg, ctx, path + ".proj")
        if not isinstance(arg, Prod):
            _fail(path, "projection from non-product %s" % print_type(arg))
        return arg.left if t.index == 0 else arg.right
    if isinstance(t, If):
        cond = _check(t.cond, ctx, path + ".cond")
        if cond != BOOL:
            _fail(path, "if condition must be bool, got %s" % print_type(cond))
        then = _check(t.then, ctx, path + ".then")
        orelse = _check(t.orelse, ctx, path + ".else")
        if then != orelse:
            _fail(path, "if branches disagree: %s vs %s"
                  % (print_type(then), print_type(orelse)))
        return then
    if isinstance(t, Rec):
        base = _check(t.base, ctx, path + ".base")
        if base != t.ty:
            _fail(path, "rec base has type %s, annotation says %s"
                  % (print_type(base), print_type(t.ty)))
        step = _check(t.step, ctx, path + ".step")
        want = Arrow(NAT, Arrow(t.ty, t.ty))
        if step != want:
            _fail(path, "rec step has type %s, expected %s"
                  % (print_type(step), print_type(want)))
        arg = _check(t.arg, ctx, path + ".arg")
        if arg != NAT:
            _fail(path, "rec argument must be nat, got %s" % print_type(arg))
        return t.ty
    if isinstance(t, Lam):
        saved = ctx.get(t.var)
        ctx[t.var] = t.ty
        body = _check(t.body, ctx, path + ".body")
        if saved is None:
            del ctx[t.var]
        else:
            ctx[t.var] = saved
        return Arrow(t.ty, body)
    if isinstance(t, App):
        fn = _check(t.fn, ctx, path + ".fn")
        arg = _check(t.arg, ctx, path + ".arg")
        if not isinstance(fn, Arrow):
            _fail(path, "applying non-function of type %s" % print_type(fn))
        if fn.arg != arg:
            _fail(path, "argument type %s does not match expected %s"
                  % (print_type(arg), print_type(fn.arg)))
        return fn.res
    if isinstance(t, StateConst):
        return STATE
    if isinstance(t, Oracle):
        return oracle_type(t.kind, t.pred.arity)
    if isinstance(t, Learn):
        return learn_type(t.kind, t.pred.arity)
    if isinstance(t, CupConst):
        return Arrow(STATE, Arrow(STATE, STATE))
    raise TypeCheckError("%s: not a term: %r" % (path, t))
