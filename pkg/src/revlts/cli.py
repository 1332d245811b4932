"""Command-line front end: check, run, normalize, equiv, explore."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from revlts import core
from revlts.reversible import (
    Configuration,
    NotEnabled,
    NotUndoable,
    ReversibleError,
    ReversibleLts,
    bwd,
    fwd,
    loop_check,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Model:
    path: str
    kind: str
    instance: object
    roots: list
    initial: object

    def label(self, u) -> str:
        fmt = getattr(self.instance, "format_label", None)
        return fmt(u) if fmt else self.instance.label_key(u)

    def term(self, m) -> str:
        return self.instance.format_term(m)


def detect_kind(path: str) -> str:
    if path.endswith(".ccs"):
        return "ccs"
    if path.endswith(".xm.json"):
        return "xmachine"
    raise UsageError(f"cannot tell the model kind of {path!r}; pass --kind")


def load_model(path: str, kind: str | None = None) -> Model:
    kind = kind or detect_kind(path)
    try:
        if kind == "ccs":
            from revlts import ccs
            p = ccs.load(path)
            return Model(path, kind, ccs.RefinedCcs(), [p], p)
        from revlts import xmachine
        system = xmachine.load(path)
        return Model(path, kind, system, system.roots(), system.initial_term())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:  # ParseError, ModelError, ExpressionError
        raise UsageError(f"{path}: {exc}") from None


def read_script(rlts: ReversibleLts, arg: str) -> list:
    """`arg` names a script file if one exists, otherwise it is the script text."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            arg = fh.read()
    try:
        return rlts.parse_script(arg)
    except ValueError as exc:
        raise UsageError(f"bad script: {exc}") from None


def show_trace(model: Model, r: Configuration) -> str:
    return "[" + ", ".join(model.label(u) for u in r.trace.canonical) + "]"


def show_signed(model: Model, seq) -> str:
    return "[" + ", ".join(model.label(g.label) + ("^-1" if g.backward else "") for g in seq) + "]"


def describe(model: Model, exc: ReversibleError) -> str:
    if isinstance(exc.__cause__, ReversibleError):
        exc = exc.__cause__
    if isinstance(exc, NotEnabled):
        return f"label not enabled: {model.label(exc.label)}"
    if isinstance(exc, NotUndoable):
        return f"label cannot be undone (not a last event of the history): {model.label(exc.label)}"
    return str(exc)


def emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


# -- commands -------------------------------------------------------------------


def cmd_check(args, model: Model) -> int:
    inst = model.instance
    report = core.check_theory(inst, model.roots, args.depth, args.cap)
    loops = loop_check(ReversibleLts(inst), model.roots, args.depth, args.cap)
    doc = report.to_json(inst)
    doc["loop"] = {
        "checked": loops.checked,
        "configurations": loops.configurations,
        "violations": [
            {"configuration": show_trace(model, r) + " " + model.term(r.current),
             "step": show_signed(model, [g]), "detail": detail}
            for r, g, detail in loops.violations
        ],
    }
    failed = not report.ok or not loops.ok
    if failed:
        status, verdict = EXIT_FAIL, "violations found"
    elif report.caveat:
        status, verdict = EXIT_INCONCLUSIVE, "inconclusive (unexplored frontier, no violations)"
    else:
        status, verdict = EXIT_OK, "ok"
    doc["verdict"] = {EXIT_OK: "ok", EXIT_FAIL: "violations", EXIT_INCONCLUSIVE: "inconclusive"}[status]

    lines = [
        f"model: {model.path} ({model.kind}), {len(model.roots)} root(s)",
        f"explored: {report.states} states, {report.transitions} transitions, "
        f"{'exhaustive' if not report.caveat else 'frontier left at depth %d' % args.depth}",
        f"determinism:     {report.deterministic}",
    ]
    for d in doc["deterministic"]:
        lines.append(f"  {d['term']} --{d['label']}--> {' / '.join(d['successors'])}")
    lines.append(f"co-determinism:  {report.codeterministic}")
    for d in doc["codeterministic"]:
        lines.append(f"  {' / '.join(d['sources'])} --{d['label']}--> {d['target']}")
    lines.append(f"co-diamond:      {report.codiamond}")
    for d in doc["codiamond"]:
        m1, u, m2, v, m3 = d["path"]
        lines.append(f"  {m1} --{u}--> {m2} --{v}--> {m3}, no {v} then {u}")
    lines.append(f"independence symmetric: {report.symmetric}")
    for u, v in doc["symmetric"]:
        lines.append(f"  {u} / {v}")
    loop_state = "pass" if loops.ok else f"violated ({len(loops.violations)})"
    lines.append(f"loop lemma:      {loop_state} ({loops.checked} moves over "
                 f"{loops.configurations} configurations)")
    for d in doc["loop"]["violations"]:
        lines.append(f"  {d['step']} at {d['configuration']}: {d['detail']}")
    lines.append(f"verdict: {verdict}")
    emit(args, doc, lines)
    return status


def cmd_run(args, model: Model) -> int:
    rlts = ReversibleLts(model.instance)
    seq = read_script(rlts, args.script)
    r = rlts.init(model.initial)
    steps, lines = [], []
    for i, g in enumerate(seq):
        try:
            r = rlts.apply(r, g)
        except ReversibleError as exc:
            msg = describe(model, exc)
            print(f"error at step {i}: {msg}", file=sys.stderr)
            if args.json:
                print(json.dumps({"steps": steps, "error": {"index": i, "message": msg}},
                                 indent=2, sort_keys=True))
            else:
                for ln in lines:
                    print(ln)
            return EXIT_FAIL
        direction = "back" if g.backward else "fwd"
        steps.append({"label": model.label(g.label), "direction": direction,
                      "term": model.term(r.current)})
        lines.append(f"{i}: {direction} {model.label(g.label)} -> {model.term(r.current)}")
    doc = {
        "steps": steps,
        "trace": [model.label(u) for u in r.trace.canonical],
        "initial": model.term(r.initial),
        "final": model.term(r.current),
    }
    lines += [f"trace: {show_trace(model, r)}", f"initial: {doc['initial']}", f"final: {doc['final']}"]
    emit(args, doc, lines)
    return EXIT_OK


def cmd_normalize(args, model: Model) -> int:
    rlts = ReversibleLts(model.instance)
    seq = read_script(rlts, args.script)
    try:
        l1, l2 = rlts.normalize(rlts.init(model.initial), seq)
    except ReversibleError as exc:
        print(f"error at step {exc.index}: {describe(model, exc)}", file=sys.stderr)
        return EXIT_FAIL
    undo = [bwd(u) for u in reversed(l1)]
    doc = {"undo": [model.label(g.label) for g in undo], "redo": [model.label(u) for u in l2]}
    emit(args, doc, [f"({show_signed(model, undo)}, [{', '.join(doc['redo'])}])"])
    return EXIT_OK


def cmd_equiv(args, model: Model) -> int:
    rlts = ReversibleLts(model.instance)
    r0 = rlts.init(model.initial)
    runs = []
    for text in (args.script1, args.script2):
        seq = read_script(rlts, text)
        try:
            runs.append(rlts.run(r0, seq))
        except ReversibleError as exc:
            print(f"error: invalid sequence at step {exc.index}: {describe(model, exc)}",
                  file=sys.stderr)
            return EXIT_USAGE
    same = rlts.causally_equivalent(*runs)
    doc = {
        "equivalent": same,
        "finals": [{"trace": [model.label(u) for u in s.final.trace.canonical],
                    "term": model.term(s.final.current)} for s in runs],
    }
    emit(args, doc, ["true" if same else "false"])
    return EXIT_OK if same else EXIT_FAIL


EXPLORE_HELP = "commands: f <n>, b <n>, hist, norm, init, help, quit"


def cmd_explore(args, model: Model, stdin=None, out=None) -> int:
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    rlts = ReversibleLts(model.instance)
    r = rlts.init(model.initial)
    history: list = []

    def say(text=""):
        print(text, file=out)

    while True:
        fwd_moves = rlts.enabled_forward(r)
        undoable = rlts.enabled_backward(r)
        say(f"term:  {model.term(r.current)}")
        say(f"trace: {show_trace(model, r)}")
        for n, (u, m2) in enumerate(fwd_moves, start=1):
            say(f"  f {n}: {model.label(u)} -> {model.term(m2)}")
        for n, u in enumerate(undoable, start=1):
            say(f"  b {n}: {model.label(u)}")
        if not fwd_moves and not undoable:
            say("  (no moves)")
        while True:
            out.write("> ")
            out.flush()
            line = stdin.readline()
            if not line:
                say()
                return EXIT_OK
            word, _, rest = line.strip().partition(" ")
            if word in ("quit", "q", "exit"):
                return EXIT_OK
            if word in ("f", "b"):
                options = [u for u, _ in fwd_moves] if word == "f" else undoable
                try:
                    n = int(rest)
                    if not 1 <= n <= len(options):
                        raise ValueError
                except ValueError:
                    say(f"pick a number between 1 and {len(options)}" if options else "nothing to pick")
                    continue
                g = fwd(options[n - 1]) if word == "f" else bwd(options[n - 1])
                r = rlts.apply(r, g)
                history.append(g)
                break
            if word == "hist":
                say(show_signed(model, history))
            elif word == "norm":
                l1, l2 = rlts.normalize(rlts.init(model.initial), history)
                undo = [bwd(u) for u in reversed(l1)]
                say(f"({show_signed(model, undo)}, [{', '.join(model.label(u) for u in l2)}])")
            elif word == "init":
                r, history = rlts.init(model.initial), []
                break
            elif word in ("help", "?"):
                say(EXPLORE_HELP)
            elif word:
                say(f"unknown command {word!r}; {EXPLORE_HELP}")


# -- entry point ----------------------------------------------------------------


def _flags(suppress: bool) -> argparse.ArgumentParser:
    # the flags are accepted before or after the command name; the copy on the
    # subcommands must not reset values given before it
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--depth", type=int, default=dflt(core.DEFAULT_DEPTH),
                   help=f"exploration depth (default {core.DEFAULT_DEPTH})")
    p.add_argument("--cap", type=int, default=dflt(core.DEFAULT_CAP),
                   help=f"state cap for exploration (default {core.DEFAULT_CAP})")
    p.add_argument("--json", action="store_true", default=dflt(False),
                   help="machine-readable output")
    p.add_argument("--kind", choices=("ccs", "xmachine"), default=dflt(None),
                   help="model kind, instead of guessing from the extension")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _flags(suppress=True)
    ap = argparse.ArgumentParser(prog="revlts", parents=[_flags(suppress=False)],
                                 description="Reversible, causally consistent LTS toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="verify the LTS axioms and the loop lemma")
    p.add_argument("model")
    p = sub.add_parser("run", parents=[common], help="apply a signed script")
    p.add_argument("model")
    p.add_argument("script", help="script file or inline text")
    p = sub.add_parser("normalize", parents=[common], help="rewrite a script as undo then redo")
    p.add_argument("model")
    p.add_argument("script")
    p = sub.add_parser("equiv", parents=[common], help="decide causal equivalence of two scripts")
    p.add_argument("model")
    p.add_argument("script1")
    p.add_argument("script2")
    p = sub.add_parser("explore", parents=[common], help="step interactively")
    p.add_argument("model")
    return ap


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "normalize": cmd_normalize,
    "equiv": cmd_equiv,
    "explore": cmd_explore,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    if args.depth < 0 or args.cap < 1:
        print("error: --depth must be >= 0 and --cap >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        model = load_model(args.model, args.kind)
        return COMMANDS[args.command](args, model)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
