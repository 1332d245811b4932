"""Causal-consistent reversible extension of a conforming LTS.

A configuration pairs a trace of past labels with the current term.  Forward
steps are the instance's own moves; a label can be undone whenever some
representative of the trace ends with it.  The predecessor term is obtained
by replaying the shortened trace from the initial term, which only needs the
instance's forward enumeration.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from revlts import core
from revlts._frozen import node
from revlts.traces import Trace, decode_sequence


class ReversibleError(Exception):
    index: int | None = None


class NotEnabled(ReversibleError):
    def __init__(self, label, term=None):
        self.label = label
        self.term = term
        super().__init__(f"label not enabled: {label!r}")


class NotUndoable(ReversibleError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"label is not a maximal event of the history: {label!r}")


class InvalidSequence(ReversibleError):
    pass


@dataclass(frozen=True)
class Configuration:
    trace: Trace
    current: object
    initial: object

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        # initial is determined by the other two when the instance is
        # co-deterministic; comparing it keeps broken instances apart
        return (self.trace == other.trace and self.current == other.current
                and self.initial == other.initial)

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.trace, self.current))
            object.__setattr__(self, "_hash", h)
            return h


@node
class SignedLabel:
    label: object
    backward: bool = False

    def inverse(self) -> "SignedLabel":
        return SignedLabel(self.label, not self.backward)


def fwd(u) -> SignedLabel:
    return SignedLabel(u, False)


def bwd(u) -> SignedLabel:
    return SignedLabel(u, True)


def inverse(seq: Sequence[SignedLabel]) -> tuple[SignedLabel, ...]:
    return tuple(g.inverse() for g in reversed(seq))


@node
class ValidSequence:
    seq: tuple
    final: Configuration


class ReversibleLts:
    """The reversible system built over `instance`.

    Holds memo tables for replays and single steps; a session object should
    not be shared across threads.
    """

    def __init__(self, instance: core.LtsInstance):
        self.instance = instance
        self._replays: dict = {}
        self._steps: dict = {}
        self._succ: dict = {}
        self._moves: dict = {}
        self._initials: dict = {}
        # the oracle works on small ints; code ^ 1 is the inverse's code
        self._codes: dict = {}
        self._signed: list = []
        self._indep: dict = {}

    def _step(self, m, u):
        table = self._succ.get(m)
        if table is None:
            table = {}
            for lab, m2 in self.instance.enumerate(m):
                table.setdefault(lab, set()).add(m2)
            self._succ[m] = table
        found = table.get(u, ())
        if len(found) > 1:
            raise core.DeterminismViolation(m, u, sorted(found, key=repr))
        return next(iter(found), None)

    # -- configurations ---------------------------------------------------

    def init(self, m) -> Configuration:
        return Configuration(Trace((), self.instance.independent, self.instance.label_key), m, m)

    @staticmethod
    def initial_term(r: Configuration):
        return r.initial

    @staticmethod
    def project(r: Configuration):
        return r.current

    def replay(self, m, labels: tuple):
        """Term reached from `m` along `labels`, or None if some step is disabled."""
        key = (m, labels)
        if key in self._replays:
            return self._replays[key]
        if not labels:
            out = m
        else:
            prev = self.replay(m, labels[:-1])
            out = None if prev is None else self._step(prev, labels[-1])
        self._replays[key] = out
        return out

    def forward(self, r: Configuration, u) -> Configuration:
        m2 = self._step(r.current, u)
        if m2 is None:
            raise NotEnabled(u, r.current)
        return Configuration(r.trace.append(u), m2, r.initial)

    def backward(self, r: Configuration, u) -> Configuration:
        shorter = r.trace.remove_last(u)
        if shorter is None:
            raise NotUndoable(u)
        m = self.replay(r.initial, shorter.canonical)
        if m is None or self._step(m, u) != r.current:
            raise AssertionError(f"history replay is inconsistent when undoing {u!r}")
        return Configuration(shorter, m, r.initial)

    def apply(self, r: Configuration, g: SignedLabel) -> Configuration:
        key = (r, g)
        out = self._steps.get(key)
        if out is None:
            out = self.backward(r, g.label) if g.backward else self.forward(r, g.label)
            self._steps[key] = out
        return out

    def enabled_forward(self, r: Configuration) -> list:
        return core.sorted_moves(self.instance, r.current)

    def enabled_backward(self, r: Configuration) -> list:
        return sorted(r.trace.maximal_labels(), key=self.instance.label_key)

    def moves(self, r: Configuration) -> list[tuple[SignedLabel, Configuration]]:
        """All reversible moves from `r`: undos first, then forward steps."""
        out = self._moves.get(r)
        if out is None:
            out = [(bwd(u), self.apply(r, bwd(u))) for u in self.enabled_backward(r)]
            out += [(fwd(u), self.apply(r, fwd(u))) for u, _ in self.enabled_forward(r)]
            self._moves[r] = out
        return out

    def apply_signed(self, r: Configuration, seq: Iterable[SignedLabel]) -> Configuration:
        for i, g in enumerate(seq):
            try:
                r = self.apply(r, g)
            except ReversibleError as exc:
                exc.index = i
                raise
        return r

    def run(self, r: Configuration, seq: Iterable[SignedLabel]) -> ValidSequence:
        seq = tuple(seq)
        return ValidSequence(seq, self.apply_signed(r, seq))

    def initial_configuration(self, s: ValidSequence) -> Configuration:
        out = self._initials.get(s)
        if out is None:
            try:
                out = self.apply_signed(s.final, inverse(s.seq))
            except ReversibleError as exc:
                raise InvalidSequence(
                    f"sequence is not valid at its final configuration: {exc}") from None
            self._initials[s] = out
        return out

    # -- normal forms and causal equivalence -------------------------------

    def normalize(self, r: Configuration, seq: Sequence[SignedLabel]) -> tuple[tuple, tuple]:
        """Rewrite `seq` into undo steps followed by forward steps.

        Returns (L1, L2) with the sequence undo(L1) ++ L2 reaching the same
        configuration from `r`, where undo(L1) undoes L1 from its end.
        Adjacent inverse pairs are cancelled first; otherwise the leftmost
        forward step followed by a different undo is swapped past it.
        """
        seq = list(seq)
        try:
            self.apply_signed(r, seq)
        except ReversibleError as exc:
            err = InvalidSequence(str(exc))
            err.index = exc.index
            raise err from exc
        while True:
            for i in range(len(seq) - 1):
                a, b = seq[i], seq[i + 1]
                if a.label == b.label and a.backward != b.backward:
                    del seq[i:i + 2]
                    break
            else:
                for i in range(len(seq) - 1):
                    a, b = seq[i], seq[i + 1]
                    if not a.backward and b.backward:
                        seq[i], seq[i + 1] = b, a
                        break
                else:
                    break
        undo = [g.label for g in seq if g.backward]
        redo = [g.label for g in seq if not g.backward]
        return tuple(reversed(undo)), tuple(redo)

    def causally_equivalent(self, s1: ValidSequence, s2: ValidSequence) -> bool:
        """Coinitial and cofinal, which characterises causal equivalence."""
        r1 = self.initial_configuration(s1)
        r2 = self.initial_configuration(s2)
        return r1 == r2 and s1.final == s2.final

    def _code(self, g: SignedLabel) -> int:
        c = self._codes.get(g)
        if c is None:
            f = fwd(g.label)
            self._codes[f] = len(self._signed)
            self._codes[f.inverse()] = len(self._signed) + 1
            self._signed += [f, f.inverse()]
            c = self._codes[g]
        return c

    def _independent_codes(self, a: int, b: int) -> bool:
        key = (a, b)
        out = self._indep.get(key)
        if out is None:
            u, v = self._signed[a].label, self._signed[b].label
            out = u != v and self.instance.independent(u, v)
            self._indep[key] = out
        return out

    def _rewrites(self, seq: tuple, path: tuple, cap: int):
        """Single validity-preserving rewrites of `seq` (a tuple of label codes).

        `path` holds the configurations visited, path[i] being the one before
        seq[i] and path[-1] the final configuration.
        """
        signed = self._signed
        n = len(seq)
        for i in range(n - 1):
            a, b = seq[i], seq[i + 1]
            if a == b ^ 1:
                yield seq[:i] + seq[i + 2:], path[:i + 1] + path[i + 2:]
                continue
            if not self._independent_codes(a, b):
                continue
            try:
                mid = self.apply(path[i], signed[b])
                end = self.apply(mid, signed[a])
            except ReversibleError:
                continue
            if end == path[i + 2]:
                yield seq[:i] + (b, a) + seq[i + 2:], path[:i + 1] + (mid,) + path[i + 2:]
        if n + 2 <= cap:
            for i in range(n + 1):
                r = path[i]
                for g, r2 in self.moves(r):
                    c = self._code(g)
                    yield seq[:i] + (c, c ^ 1) + seq[i:], path[:i + 1] + (r2, r) + path[i + 1:]

    def oracle_distances(self, s: ValidSequence, targets: Iterable[tuple], bound: int, cap: int):
        """Breadth-first search over rewrites of `s`.

        Returns (distances, exhausted): the rewrite distance of every target
        sequence found within `bound`, and whether the closure was fully
        explored.
        """
        enc = lambda seq: tuple(self._code(g) for g in seq)
        targets = {enc(t) for t in targets}
        start = enc(s.seq)
        path = [self.initial_configuration(s)]
        for g in s.seq:
            path.append(self.apply(path[-1], g))
        seen = {start: 0}
        found = {start: 0} if start in targets else {}
        queue = deque([(start, tuple(path))])
        exhausted = True
        while queue and len(found) < len(targets):
            seq, p = queue.popleft()
            d = seen[seq]
            if d >= bound:
                exhausted = False
                continue
            for seq2, p2 in self._rewrites(seq, p, cap):
                if seq2 in seen:
                    continue
                seen[seq2] = d + 1
                if seq2 in targets:
                    found[seq2] = d + 1
                queue.append((seq2, p2))
        if queue:
            exhausted = False
        signed = self._signed
        return {tuple(signed[c] for c in k): v for k, v in found.items()}, exhausted

    def equiv_oracle(self, s1: ValidSequence, s2: ValidSequence, bound: int) -> bool | None:
        """Search for a chain of at most `bound` rewrites from `s1` to `s2`.

        Returns True when a chain is found, False when the (length-capped)
        rewrite closure is exhausted without one, None when the bound cut the
        search short.
        """
        self.initial_configuration(s2)
        if s1.final != s2.final:
            return False
        cap = max(len(s1.seq), len(s2.seq)) + 2
        found, exhausted = self.oracle_distances(s1, [tuple(s2.seq)], bound, cap)
        if found:
            return True
        return False if exhausted else None

    # -- text ---------------------------------------------------------------

    def encode_signed(self, seq: Iterable[SignedLabel]) -> str:
        key = self.instance.label_key
        return "[" + ", ".join(key(g.label) + ("^-1" if g.backward else "") for g in seq) + "]"

    def parse_signed_label(self, text: str) -> SignedLabel:
        text = text.strip()
        if text.endswith("^-1"):
            return bwd(self.instance.parse_label(text[:-3].strip()))
        return fwd(self.instance.parse_label(text))

    def parse_signed(self, text: str) -> list[SignedLabel]:
        return decode_sequence(text, self.parse_signed_label)

    def parse_script(self, text: str) -> list[SignedLabel]:
        """A bracketed signed sequence, or `fwd <label>` / `back <label>` lines."""
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        body = "\n".join(ln for ln in lines if ln)
        if not body:
            return []
        if body.startswith("["):
            return self.parse_signed(body)
        out = []
        for ln in body.splitlines():
            word, _, rest = ln.partition(" ")
            if word in ("fwd", "f", "forward"):
                out.append(fwd(self.instance.parse_label(rest.strip())))
            elif word in ("back", "b", "backward"):
                out.append(bwd(self.instance.parse_label(rest.strip())))
            else:
                raise ValueError(f"unknown script step: {ln!r}")
        return out



@dataclass
class LoopReport:
    checked: int = 0
    configurations: int = 0
    truncated: bool = False
    violations: list = field(default_factory=list)  # (configuration, signed label, detail)

    @property
    def ok(self) -> bool:
        return not self.violations


def loop_check(rlts: ReversibleLts, roots: Iterable, depth: int = core.DEFAULT_DEPTH,
               cap: int = core.DEFAULT_CAP) -> LoopReport:
    """Check that every move explored from `roots` is undone by its inverse.

    Explores configurations breadth-first up to `depth` steps (forward and
    backward moves both count) and at most `cap` configurations.
    """
    report = LoopReport()
    seen: dict = {}
    queue: deque = deque()
    for m in roots:
        r = rlts.init(m)
        if r not in seen:
            seen[r] = 0
            queue.append(r)
    while queue:
        r = queue.popleft()
        d = seen[r]
        if d >= depth:
            continue
        for g, r2 in rlts.moves(r):
            report.checked += 1
            try:
                back = rlts.apply(r2, g.inverse())
            except ReversibleError as exc:
                report.violations.append((r, g, str(exc)))
                continue
            if back != r:
                report.violations.append((r, g, "inverse step lands elsewhere"))
            if r2 not in seen:
                if len(seen) >= cap:
                    report.truncated = True
                    continue
                seen[r2] = d + 1
                queue.append(r2)
    report.configurations = len(seen)
    return report
