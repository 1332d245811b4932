"""Shared fixtures-by-function: random processes, oracles, sample systems."""

from __future__ import annotations

import itertools
import random
from collections import deque

from revlts import ccs
from revlts.reversible import ReversibleLts, ValidSequence
from revlts.xmachine import Machine, Memory, SharedSystem, make_add_assign, make_assign, make_test

EXAMPLE = "a.b.0 | ~b.c.0"
U1 = "(pick(1){a.b.0} | *)"
U2 = "(* | pick(1){~b.c.0})"
SYNC = "(pick(1){b.0} | pick(1){~b.c.0})"
C_STEP = "(* | pick(1){c.0})"

X3 = [0, 1, 2]


# -- random CCS -------------------------------------------------------------------


def random_process_text(rng: random.Random, depth: int = 4, chans=("a", "b"),
                        vars_=()) -> str:
    """A closed process of syntactic depth at most `depth`, as source text.

    Variables only occur under a prefix, so every recursion is guarded.
    """

    def act(names):
        return rng.choice(["", "~"]) + rng.choice(names)

    def proc(d, names, vs):
        if d <= 0:
            return "0"
        kind = rng.choices(["sum", "par", "nu", "rec", "nil"], weights=[6, 3, 1, 1, 1])[0]
        if kind == "nil":
            return "0"
        if kind == "par":
            return f"({proc(d - 1, names, vs)} | {proc(d - 1, names, vs)})"
        if kind == "nu":
            n = f"n{d}"
            return f"(nu {n}. {proc(d - 1, names + (n,), vs)})"
        if kind == "rec":
            v = f"X{d}"
            return f"(rec {v}. {prefixes(d - 1, names, vs + (v,))})"
        return prefixes(d, names, vs)

    def prefixes(d, names, vs):
        k = rng.choice([1, 1, 2, 3])
        parts = []
        for _ in range(k):
            if vs and rng.random() < 0.3:
                cont = rng.choice(vs)
            else:
                cont = proc(d - 1, names, vs)
            parts.append(f"{act(names)}.({cont})")
        return " + ".join(parts)

    return proc(depth, tuple(chans), tuple(vars_))


def random_processes(n: int, seed: int, depth: int = 4) -> list:
    rng = random.Random(seed)
    return [ccs.parse(random_process_text(rng, depth)) for _ in range(n)]


# -- trace oracle -----------------------------------------------------------------


def swap_closure(seq, indep) -> set:
    """Every sequence reachable from `seq` by swapping adjacent independent labels."""
    start = tuple(seq)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i in range(len(s) - 1):
            u, v = s[i], s[i + 1]
            if u != v and indep(u, v):
                t = s[:i] + (v, u) + s[i + 2:]
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return seen


def random_relation(rng: random.Random, alphabet, p: float = 0.5):
    """A random symmetric irreflexive relation, as a predicate."""
    pairs = set()
    for u, v in itertools.combinations(alphabet, 2):
        if rng.random() < p:
            pairs |= {(u, v), (v, u)}
    return lambda u, v: (u, v) in pairs


# -- sample systems ---------------------------------------------------------------


def copy_system(values=X3, memory=None) -> SharedSystem:
    """Two machines, one copying x to y and one copying x to z, forever."""
    a = make_assign("y", "x", ["x"], id="a")
    b = make_assign("z", "x", ["x"], id="b")
    m1 = Machine(("q0", "q1"), ("q0",), ("q1",), (("q0", "a", "q1"), ("q1", "a", "q0")))
    m2 = Machine(("q0", "q1"), ("q0",), ("q1",), (("q0", "b", "q1"), ("q1", "b", "q0")))
    domain = None if values is None else {v: list(values) for v in "xyz"}
    return SharedSystem([a, b], [m1, m2], memory or {}, domain)


def imperative_system() -> SharedSystem:
    """A loop adding x into s while counting i down, next to a guarded copy."""
    acts = [
        make_test(["i"], "i > 0", id="more"),
        make_test(["i"], "i == 0", id="done"),
        make_add_assign("s", "x", id="acc"),
        make_assign("i", "i - 1", id="dec"),
        make_test(["x"], "x < 2", id="small"),
        make_assign("t", "x + 1", id="cp"),
        make_add_assign("u", "t", id="bump"),
    ]
    loop = Machine(
        ("l0", "l1", "l2", "end"), ("l0",), ("end",),
        (("l0", "more", "l1"), ("l1", "acc", "l2"), ("l2", "dec", "l0"), ("l0", "done", "end")),
    )
    side = Machine(("p0", "p1", "p2", "p3"), ("p0",), ("p3",),
                   (("p0", "small", "p1"), ("p1", "cp", "p2"), ("p2", "bump", "p3")))
    return SharedSystem(acts, [loop, side], {"i": 2, "x": 1},
                        {"i": [0, 1, 2], "x": [0, 1, 2]})


# -- populations of valid sequences -------------------------------------------------


def population(rlts: ReversibleLts, root, length: int) -> list[ValidSequence]:
    """All valid signed sequences of at most `length` steps from init(root)."""
    out = []

    def go(r, seq):
        out.append(ValidSequence(tuple(seq), r))
        if len(seq) == length:
            return
        for g, r2 in rlts.moves(r):
            seq.append(g)
            go(r2, seq)
            seq.pop()

    go(rlts.init(root), [])
    return out
