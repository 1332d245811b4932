"""Instance contract for labelled transition systems and bounded checkers.

An instance is any object providing::

    enumerate(term)        -> iterable of (label, term)
    independent(u, v)      -> bool
    label_key(u)           -> str     # injective textual encoding, used for ordering
    format_term(m)         -> str
    parse_label(text)      -> label

Labels and terms must be hashable and immutable.  Checks here only ever look
at the fragment of the state space reachable within the given bounds, so a
passing report is evidence, not proof; a violation is always genuine.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Protocol

DEFAULT_DEPTH = 6
DEFAULT_CAP = 10_000

Label = Hashable
Term = Hashable


class LtsInstance(Protocol):
    def enumerate(self, term: Term) -> Iterable[tuple[Label, Term]]: ...

    def independent(self, u: Label, v: Label) -> bool: ...

    def label_key(self, u: Label) -> str: ...

    def format_term(self, m: Term) -> str: ...

    def parse_label(self, text: str) -> Label: ...


class DeterminismViolation(Exception):
    def __init__(self, term, label, successors):
        self.term = term
        self.label = label
        self.successors = successors
        super().__init__(
            f"label {label!r} has {len(successors)} distinct successors from {term!r}"
        )


def successors(instance: LtsInstance, m: Term, u: Label) -> set:
    return {m2 for lab, m2 in instance.enumerate(m) if lab == u}


def step(instance: LtsInstance, m: Term, u: Label):
    """Return the unique `u`-successor of `m`, or None when `u` is not enabled."""
    found = successors(instance, m, u)
    if len(found) > 1:
        raise DeterminismViolation(m, u, sorted(found, key=repr))
    return next(iter(found), None)


def sorted_moves(instance: LtsInstance, m: Term) -> list[tuple[Label, Term]]:
    """Moves of `m` in label-serialization order (ties broken by term text)."""
    return sorted(
        set(instance.enumerate(m)),
        key=lambda lt: (instance.label_key(lt[0]), instance.format_term(lt[1])),
    )


@dataclass
class Fragment:
    root: Any
    states: set = field(default_factory=set)
    transitions: set = field(default_factory=set)
    frontier: set = field(default_factory=set)
    depth: dict = field(default_factory=dict)

    @property
    def exhaustive(self) -> bool:
        return not self.frontier


def reachable(
    instance: LtsInstance,
    root: Term,
    depth: int = DEFAULT_DEPTH,
    state_cap: int = DEFAULT_CAP,
) -> Fragment:
    """Breadth-first expansion from `root`.

    States at distance `depth`, or discovered after the cap is reached, are
    not expanded; those with a move leading outside the explored set end up
    in the frontier.
    """
    frag = Fragment(root=root, states={root}, depth={root: 0})
    queue = deque([root])
    while queue:
        m = queue.popleft()
        moves = list(instance.enumerate(m))
        if not moves:
            continue
        if frag.depth[m] >= depth:
            # everything up to this depth is known by now; keep edges among
            # known states and only count unseen successors as frontier
            for u, m2 in moves:
                if m2 in frag.states:
                    frag.transitions.add((m, u, m2))
                else:
                    frag.frontier.add(m)
            continue
        for u, m2 in moves:
            if m2 not in frag.states:
                if len(frag.states) >= state_cap:
                    # the source keeps its other edges, the target stays unexplored
                    frag.frontier.add(m)
                    continue
                frag.states.add(m2)
                frag.depth[m2] = frag.depth[m] + 1
                queue.append(m2)
            frag.transitions.add((m, u, m2))
    return frag


@dataclass
class Verdict:
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def __str__(self) -> str:
        return "pass" if self.ok else f"violated ({len(self.counterexamples)})"


@dataclass
class TheoryReport:
    deterministic: Verdict = field(default_factory=Verdict)
    codeterministic: Verdict = field(default_factory=Verdict)
    codiamond: Verdict = field(default_factory=Verdict)
    symmetric: Verdict = field(default_factory=Verdict)
    states: int = 0
    transitions: int = 0
    caveat: bool = False

    @property
    def ok(self) -> bool:
        return all(
            v.ok for v in (self.deterministic, self.codeterministic, self.codiamond, self.symmetric)
        )

    def to_json(self, instance: LtsInstance) -> dict:
        fmt_t = instance.format_term
        fmt_l = instance.label_key
        return {
            "states": self.states,
            "transitions": self.transitions,
            "exhaustive": not self.caveat,
            "deterministic": [
                {"term": fmt_t(m), "label": fmt_l(u), "successors": [fmt_t(s) for s in ss]}
                for m, u, ss in self.deterministic.counterexamples
            ],
            "codeterministic": [
                {"label": fmt_l(u), "target": fmt_t(t), "sources": [fmt_t(s) for s in ss]}
                for u, t, ss in self.codeterministic.counterexamples
            ],
            "codiamond": [
                {"path": [fmt_t(m1), fmt_l(u), fmt_t(m2), fmt_l(v), fmt_t(m3)]}
                for m1, u, m2, v, m3 in self.codiamond.counterexamples
            ],
            "symmetric": [[fmt_l(u), fmt_l(v)] for u, v in self.symmetric.counterexamples],
        }


def check_theory(
    instance: LtsInstance,
    roots: Iterable[Term],
    depth: int = DEFAULT_DEPTH,
    state_cap: int = DEFAULT_CAP,
) -> TheoryReport:
    """Check determinism, co-determinism and the co-diamond property.

    Co-determinism is tested as a collision among explored transitions that
    share a (label, target) pair.  For the co-diamond property the missing
    side of a square is computed directly with `enumerate`, so intermediate
    states outside the fragment are expanded on demand.
    """
    report = TheoryReport()
    states: set = set()
    transitions: set = set()
    frontier: set = set()
    for root in roots:
        frag = reachable(instance, root, depth, state_cap)
        states |= frag.states
        transitions |= frag.transitions
        frontier |= frag.frontier
    report.states = len(states)
    report.transitions = len(transitions)
    report.caveat = bool(frontier)

    out = defaultdict(list)
    for m, u, m2 in transitions:
        out[m].append((u, m2))

    cache: dict = {}

    def moves(m):
        if m not in cache:
            by_label = defaultdict(set)
            for u, m2 in instance.enumerate(m):
                by_label[u].add(m2)
            cache[m] = by_label
        return cache[m]

    for m in states:
        for u, targets in moves(m).items():
            if len(targets) > 1:
                report.deterministic.counterexamples.append((m, u, sorted(targets, key=repr)))

    sources = defaultdict(set)
    for m, u, m2 in transitions:
        sources[(u, m2)].add(m)
    for (u, m2), ms in sources.items():
        if len(ms) > 1:
            report.codeterministic.counterexamples.append((u, m2, sorted(ms, key=repr)))

    labels = {u for _, u, _ in transitions}
    sym_cache: dict = {}

    def indep(u, v):
        key = (u, v)
        if key not in sym_cache:
            sym_cache[key] = instance.independent(u, v)
        return sym_cache[key]

    for u in labels:
        for v in labels:
            if indep(u, v) != indep(v, u) and instance.label_key(u) < instance.label_key(v):
                report.symmetric.counterexamples.append((u, v))

    for m1, u, m2 in transitions:
        for v, m3s in moves(m2).items():
            if not indep(u, v):
                continue
            for m3 in m3s:
                if not any(m3 in moves(m2p).get(u, ()) for m2p in moves(m1).get(v, ())):
                    report.codiamond.counterexamples.append((m1, u, m2, v, m3))
    return report
