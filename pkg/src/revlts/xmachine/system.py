"""Refined X-machines running concurrently over one shared memory."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from revlts._frozen import node
from revlts.xmachine.actions import (
    UNIT,
    Memory,
    RefinedAction,
    make_add_assign,
    make_assign,
    make_test,
    syntactic_independent,
)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Machine:
    states: tuple
    initial: tuple
    finals: tuple
    delta: tuple  # of (q, action id, q')

    def __post_init__(self):
        known = set(self.states)
        for q in (*self.initial, *self.finals):
            if q not in known:
                raise ModelError(f"state {q!r} is not declared")
        for q, _, q2 in self.delta:
            if q not in known or q2 not in known:
                raise ModelError(f"transition {q!r} -> {q2!r} uses an undeclared state")

    def edges_from(self, q) -> list:
        return [e for e in self.delta if e[0] == q]


@node
class SystemTerm:
    states: tuple
    memory: Memory


@node
class SystemLabel:
    k: int  # 1-based machine number
    source: str
    action: str
    target: str
    index: Hashable


def encode_index(i) -> str:
    if i == UNIT:
        return "_"
    if isinstance(i, bool):
        raise TypeError(i)
    if isinstance(i, int):
        return str(i)
    if isinstance(i, tuple):
        return "<" + ";".join(encode_index(x) for x in i) + ">"
    if isinstance(i, str) and re.fullmatch(r"[A-Za-z][\w']*", i):
        return i
    raise TypeError(f"cannot encode refinement index {i!r}")


def decode_index(text: str):
    text = text.strip()
    if text == "_":
        return UNIT
    if text.isdigit():
        return int(text)
    if text.startswith("<") and text.endswith(">"):
        body = text[1:-1]
        parts, depth, cur = [], 0, ""
        for ch in body:
            if ch == "<":
                depth += 1
            elif ch == ">":
                depth -= 1
            if ch == ";" and depth == 0:
                parts.append(cur)
                cur = ""
            else:
                cur += ch
        if cur or parts:
            parts.append(cur)
        return tuple(decode_index(p) for p in parts)
    return text


class SharedSystem:
    """n machines sharing a memory; an LTS instance over SystemTerm."""

    def __init__(self, actions: Iterable[RefinedAction], machines: Sequence[Machine],
                 memory: Memory | Mapping | None = None, domain: Mapping | None = None):
        self.actions = {a.id: a for a in actions}
        self.machines = list(machines)
        self.memory = memory if isinstance(memory, Memory) else Memory(memory or {})
        self.domain = dict(domain or {})
        for m in self.machines:
            for _, a, _ in m.delta:
                if a not in self.actions:
                    raise ModelError(f"unknown action {a!r}")

    # -- LTS instance ---------------------------------------------------------

    def enumerate(self, t: SystemTerm):
        out = []
        for k, (machine, q) in enumerate(zip(self.machines, t.states), start=1):
            for _, a, q2 in machine.edges_from(q):
                for i, mem2 in self.actions[a].applicable(t.memory):
                    states = t.states[:k - 1] + (q2,) + t.states[k:]
                    out.append((SystemLabel(k, q, a, q2, i), SystemTerm(states, mem2)))
        return out

    def independent(self, u: SystemLabel, v: SystemLabel) -> bool:
        if u.k == v.k:
            return False
        a, b = self.actions[u.action], self.actions[v.action]
        if a.rv is None or b.rv is None:
            return False
        return syntactic_independent(a, b)

    def label_key(self, u: SystemLabel) -> str:
        return f"({u.k},{u.source},{u.action},{u.target},{encode_index(u.index)})"

    format_label = label_key

    def format_term(self, t: SystemTerm) -> str:
        return "(" + ", ".join(t.states) + ", " + repr(t.memory) + ")"

    def parse_label(self, text: str) -> SystemLabel:
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"expected (k,q,action,q',index), got {text!r}")
        parts = [p.strip() for p in text[1:-1].split(",")]
        if len(parts) != 5 or not parts[0].isdigit():
            raise ValueError(f"expected (k,q,action,q',index), got {text!r}")
        return SystemLabel(int(parts[0]), parts[1], parts[2], parts[3], decode_index(parts[4]))

    # -- roots ------------------------------------------------------------------

    def initial_term(self) -> SystemTerm:
        return SystemTerm(tuple(m.initial[0] for m in self.machines), self.memory)

    def roots(self) -> list[SystemTerm]:
        """Every combination of initial states and, if a domain is given, of memory values."""
        state_combos = list(itertools.product(*(m.initial for m in self.machines)))
        if not self.domain:
            mems = [self.memory]
        else:
            names = sorted(self.domain)
            mems = [
                Memory({**dict(self.memory), **dict(zip(names, vals))})
                for vals in itertools.product(*(self.domain[n] for n in names))
            ]
        return [SystemTerm(s, m) for s in state_combos for m in mems]

    def final_status(self, t: SystemTerm) -> list[bool]:
        return [q in m.finals for m, q in zip(self.machines, t.states)]


def enumerate_system(sys: SharedSystem, t: SystemTerm):
    return sys.enumerate(t)


def independent_labels(sys: SharedSystem, u: SystemLabel, v: SystemLabel) -> bool:
    return sys.independent(u, v)


# -- model files ----------------------------------------------------------------


def _action_from_json(entry: Mapping) -> RefinedAction:
    try:
        kind = entry["kind"]
        aid = entry["id"]
        expr = entry["expr"]
    except KeyError as exc:
        raise ModelError(f"action is missing {exc.args[0]!r}: {entry}") from None
    sources = entry.get("sources")
    try:
        if kind == "assign":
            return make_assign(entry["target"], expr, sources, id=aid,
                               refined=entry.get("refined", True))
        if kind == "addassign":
            return make_add_assign(entry["target"], expr, sources, id=aid)
        if kind == "test":
            return make_test(sources, expr, id=aid)
    except KeyError as exc:
        raise ModelError(f"action {aid!r} is missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ModelError(f"action {aid!r}: {exc}") from None
    raise ModelError(f"action {aid!r} has unknown kind {kind!r}")


def _machine_from_json(entry: Mapping) -> Machine:
    try:
        return Machine(
            tuple(entry["states"]),
            tuple(entry["initial"]),
            tuple(entry.get("finals", ())),
            tuple((t["from"], t["action"], t["to"]) for t in entry["transitions"]),
        )
    except KeyError as exc:
        raise ModelError(f"machine is missing {exc.args[0]!r}") from None


def system_from_json(doc: Mapping) -> SharedSystem:
    if not isinstance(doc, Mapping):
        raise ModelError("model must be a JSON object")
    actions = [_action_from_json(a) for a in doc.get("actions", [])]
    machines = [_machine_from_json(m) for m in doc.get("machines", [])]
    if not machines:
        raise ModelError("model declares no machines")
    for m in machines:
        if not m.initial:
            raise ModelError("every machine needs an initial state")
    try:
        memory = Memory(doc.get("memory", {}))
    except ValueError as exc:
        raise ModelError(str(exc)) from None
    return SharedSystem(actions, machines, memory, doc.get("domain"))


def load(path) -> SharedSystem:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: {exc}") from None
    return system_from_json(doc)
