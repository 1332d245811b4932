"""Refined and standard transition relations for CCS."""

from __future__ import annotations

from functools import lru_cache

from revlts.ccs import parser
from revlts.ccs.syntax import (
    TAU,
    Act,
    LeftL,
    Nil,
    Nu,
    NuL,
    Par,
    Pick,
    Process,
    Rec,
    RecL,
    RightL,
    Sum,
    SyncL,
    Tau,
    Var,
    canonical_text,
    label_text,
    pretty,
    pretty_label,
    unfold,
)


def interpret_label(u):
    """The standard action a label stands for, or None when undefined."""
    if isinstance(u, Pick):
        return u.summands[u.index - 1][0]
    if isinstance(u, RecL):
        return TAU
    if isinstance(u, (LeftL, RightL)):
        return interpret_label(u.inner)
    if isinstance(u, SyncL):
        if interpret_label(u.left) is None or interpret_label(u.right) is None:
            return None
        return TAU
    if isinstance(u, NuL):
        return _restrict(interpret_label(u.inner))
    raise TypeError(u)


def _restrict(a):
    # action seen from outside a binder for channel 0
    if a is None or isinstance(a, Tau):
        return a
    if a.chan == 0:
        return None
    if isinstance(a.chan, int):
        return Act(a.chan - 1, a.co)
    return a


def _complementary(a, b) -> bool:
    return isinstance(a, Act) and isinstance(b, Act) and a.chan == b.chan and a.co != b.co


@lru_cache(maxsize=200_000)
def enumerate_refined(p: Process) -> frozenset:
    """All (label, successor) pairs derivable for `p`."""
    if isinstance(p, (Nil, Var)):
        return frozenset()
    if isinstance(p, Sum):
        return frozenset((Pick(p.summands, i + 1), q) for i, (_, q) in enumerate(p.summands))
    if isinstance(p, Par):
        left = enumerate_refined(p.left)
        right = enumerate_refined(p.right)
        out = {(LeftL(u), Par(p2, p.right)) for u, p2 in left}
        out |= {(RightL(v), Par(p.left, q2)) for v, q2 in right}
        if left and right:
            lact = [(u, p2, interpret_label(u)) for u, p2 in left]
            ract = [(v, q2, interpret_label(v)) for v, q2 in right]
            for u, p2, a in lact:
                for v, q2, b in ract:
                    if _complementary(a, b):
                        out.add((SyncL(u, v), Par(p2, q2)))
        return frozenset(out)
    if isinstance(p, Nu):
        out = set()
        for u, p2 in enumerate_refined(p.body):
            if _restrict(interpret_label(u)) is not None:
                out.add((NuL(u, p.name), Nu(p2, p.name)))
        return frozenset(out)
    if isinstance(p, Rec):
        return frozenset({(RecL(p), unfold(p))})
    raise TypeError(p)


def independent(u, v) -> bool:
    """Independence of refined labels.

    Derived only from: u indep *, * indep u, componentwise on parallel
    labels, and congruence under a common restriction.  A bullet facing a
    bullet is not independent.
    """
    pu, pv = _sides(u), _sides(v)
    if pu is not None and pv is not None:
        return _slot_indep(pu[0], pv[0]) and _slot_indep(pu[1], pv[1])
    if isinstance(u, NuL) and isinstance(v, NuL):
        return independent(u.inner, v.inner)
    return False


def _sides(u):
    if isinstance(u, LeftL):
        return u.inner, None
    if isinstance(u, RightL):
        return None, u.inner
    if isinstance(u, SyncL):
        return u.left, u.right
    return None


def _slot_indep(x, y) -> bool:
    if x is None and y is None:
        return False
    if x is None or y is None:
        return True
    return independent(x, y)


@lru_cache(maxsize=200_000)
def enumerate_standard(p: Process) -> frozenset:
    """Plain CCS transitions with actions a, ~a and tau.

    Recursion unfolds through a tau step, matching the refined rule.  Kept
    separate from the refined relation so each can check the other.
    """
    if isinstance(p, (Nil, Var)):
        return frozenset()
    if isinstance(p, Sum):
        return frozenset(p.summands)
    if isinstance(p, Par):
        left = enumerate_standard(p.left)
        right = enumerate_standard(p.right)
        out = {(a, Par(p2, p.right)) for a, p2 in left}
        out |= {(b, Par(p.left, q2)) for b, q2 in right}
        for a, p2 in left:
            for b, q2 in right:
                if _complementary(a, b):
                    out.add((TAU, Par(p2, q2)))
        return frozenset(out)
    if isinstance(p, Nu):
        out = set()
        for a, p2 in enumerate_standard(p.body):
            a2 = _restrict(a)
            if a2 is not None:
                out.add((a2, Nu(p2, p.name)))
        return frozenset(out)
    if isinstance(p, Rec):
        return frozenset({(TAU, unfold(p))})
    raise TypeError(p)


def action_text(a) -> str:
    if isinstance(a, Tau):
        return "tau"
    return ("~" if a.co else "") + str(a.chan)


@lru_cache(maxsize=200_000)
def _label_key(u) -> str:
    return label_text(u)


class RefinedCcs:
    """CCS with refined labels, as an LTS instance."""

    def enumerate(self, p):
        return enumerate_refined(p)

    def independent(self, u, v) -> bool:
        return independent(u, v)

    def label_key(self, u) -> str:
        return _label_key(u)

    def format_label(self, u) -> str:
        return pretty_label(u)

    def format_term(self, p) -> str:
        return pretty(p)

    def term_key(self, p) -> str:
        return canonical_text(p)

    def parse_label(self, text: str):
        return parser.parse_label(text)

    def parse_term(self, text: str):
        return parser.parse(text)


class StandardCcs:
    """Unrefined CCS; generally neither deterministic nor co-deterministic."""

    def enumerate(self, p):
        return enumerate_standard(p)

    def independent(self, u, v) -> bool:
        return False

    def label_key(self, a) -> str:
        return action_text(a)

    def format_label(self, a) -> str:
        return action_text(a)

    def format_term(self, p) -> str:
        return pretty(p)

    def parse_label(self, text: str):
        text = text.strip()
        if text == "tau":
            return TAU
        if text.startswith("~"):
            return Act(text[1:].strip(), True)
        return Act(text)

    def parse_term(self, text: str):
        return parser.parse(text)
