"""Command line interface.

Term, formula, and state arguments accept either a file path or literal
source text (anything that starts with a parenthesis, or a bare token like
``0``/``true``, is treated as source).  Realizer arguments additionally
accept ``@name`` references to prelude-registered realizers.

Exit status: 0 on success, 1 on a domain error (printed as
``error[CODE]: message``), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import EngineError
from .evaluate import approximate, normalize
from .library import default_registry, realizer_builders
from .realizability import fixpoint_learn, realizes
from .sexpr import load_prelude, parse_formula, parse_state, parse_term
from .strategy import (
    DEFAULT_MOVE_FUEL, RandomAbelard, run_game, ScriptedAbelard,
)
from .terms import print_term, print_type
from .typecheck import typecheck


def _source(arg: str) -> str:
    text = arg.strip()
    if text.startswith("(") or text in ("0", "true", "false", "cup"):
        return text
    path = Path(arg)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    return text  # let the parser report the problem with positions


def _registry(args):
    reg = default_registry()
    if getattr(args, "prelude", None):
        reg = load_prelude(Path(args.prelude).read_text(encoding="utf-8"),
                           reg, realizer_builders())
    return reg


def _realizer(arg: str, reg):
    if arg.startswith("@"):
        name = arg[1:]
        if name not in reg.realizers:
            raise EngineError("unknown realizer reference %r" % name)
        return reg.realizers[name]
    return parse_term(_source(arg), reg)


def _abelard(spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "scripted":
        choices = []
        for item in rest.split(","):
            item = item.strip()
            if item in ("L", "R"):
                choices.append(item)
            elif item:
                choices.append(int(item))
        return ScriptedAbelard(choices)
    if kind == "random":
        parts = [p for p in rest.split(":") if p]
        seed = int(parts[0]) if parts else 0
        rng = int(parts[1]) if len(parts) > 1 else 20
        return RandomAbelard(seed, rng)
    if kind == "greedy":
        from .library import counterexample_refuter
        parts = [p for p in rest.split(":") if p]
        seed = int(parts[0]) if parts else 0
        rng = int(parts[1]) if len(parts) > 1 else 30
        return counterexample_refuter(seed, rng)
    raise EngineError("unknown abelard spec %r; use scripted:..., random:..., "
                      "or greedy:..." % spec)


def _cmd_normalize(args):
    reg = _registry(args)
    term = parse_term(_source(args.term), reg)
    print(print_term(normalize(term, strategy=args.strategy)))
    return 0


def _cmd_typecheck(args):
    reg = _registry(args)
    term = parse_term(_source(args.term), reg)
    print(print_type(typecheck(term)))
    return 0


def _cmd_approx(args):
    reg = _registry(args)
    term = parse_term(_source(args.term), reg)
    state = parse_state(_source(args.state), reg)
    print(print_term(approximate(term, state)))
    return 0


def _cmd_check(args):
    reg = _registry(args)
    realizer = _realizer(args.realizer, reg)
    formula = parse_formula(_source(args.formula), reg)
    state = parse_state(_source(args.state), reg)
    candidates = [parse_term(_source(c), reg) for c in args.candidate or []]
    verdict = realizes(realizer, state, formula, args.bound, candidates)
    print(repr(verdict))
    return 0


def _cmd_fixpoint(args):
    reg = _registry(args)
    term = parse_term(_source(args.term), reg)
    state = parse_state(_source(args.state), reg)

    def emit(iteration, tau, current):
        print(json.dumps({"iter": iteration, "tau": tau.to_sexpr(),
                          "state": current.to_sexpr()}))

    final = fixpoint_learn(term, state, fuel=args.fuel, on_step=emit)
    print(json.dumps({"fixed_point": final.to_sexpr()}))
    return 0


def _cmd_play(args):
    reg = _registry(args)
    formula = parse_formula(_source(args.formula), reg)
    realizer = _realizer(args.realizer, reg)
    trace = run_game(formula, realizer, _abelard(args.abelard),
                     fuel=args.fuel, monitor_bound=args.monitor)
    lines = [json.dumps(e) for e in trace.events]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if trace.winner == "E" else 1


def _cmd_serve(args):
    from .service import serve_forever
    serve_forever(args.port, bind=args.bind, registry=_registry(args),
                  ui_dir=args.ui)
    return 0


def _cmd_report(args):
    from .report import write_report
    for path in write_report(args.trace, args.out):
        print(path)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="btarski",
        description="Normalize terms, check realizability, and play "
                    "1-backtracking verification games.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--prelude", help="extra prelude file to load")

    p = sub.add_parser("normalize", help="normalize a term")
    p.add_argument("term", help="term file or literal")
    p.add_argument("--strategy", choices=("normal", "innermost"),
                   default="normal")
    common(p)
    p.set_defaults(fn=_cmd_normalize)

    p = sub.add_parser("typecheck", help="print the type of a term")
    p.add_argument("term")
    common(p)
    p.set_defaults(fn=_cmd_typecheck)

    p = sub.add_parser("approx", help="approximate oracles at a state")
    p.add_argument("term")
    p.add_argument("--state", required=True, help="state file or literal")
    common(p)
    p.set_defaults(fn=_cmd_approx)

    p = sub.add_parser("check", help="bounded realizability check")
    p.add_argument("--realizer", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--state", default="(state ())")
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--candidate", action="append",
                   help="candidate antecedent realizer (repeatable)")
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("fixpoint", help="run the learning loop on a state term")
    p.add_argument("--term", required=True)
    p.add_argument("--state", default="(state ())")
    p.add_argument("--fuel", type=int, default=10_000)
    common(p)
    p.set_defaults(fn=_cmd_fixpoint)

    p = sub.add_parser("play", help="play a batch game, emit a JSON-lines trace")
    p.add_argument("--formula", required=True)
    p.add_argument("--realizer", required=True)
    p.add_argument("--abelard", default="random:0",
                   help="scripted:c1,c2,... | random:seed[:range] | "
                        "greedy:seed[:range]")
    p.add_argument("--fuel", type=int, default=DEFAULT_MOVE_FUEL)
    p.add_argument("--monitor", type=int, default=None,
                   help="run the mid-game realizability monitor at this bound")
    p.add_argument("--out", help="write the trace here instead of stdout")
    common(p)
    p.set_defaults(fn=_cmd_play)

    p = sub.add_parser("serve", help="start the HTTP session service")
    p.add_argument("--port", type=int, default=8350)
    p.add_argument("--bind", default=None,
                   help="bind address (default: BTARSKI_BIND or 127.0.0.1)")
    p.add_argument("--ui", default=None, help="static UI directory to mount")
    common(p)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("report", help="render figures and a CSV from a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except EngineError as err:
        print("error[%s]: %s" % (err.code, err.message), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
