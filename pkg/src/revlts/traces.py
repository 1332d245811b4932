"""Label sequences up to permutation of adjacent independent labels.

Equivalence classes are kept in Foata normal form: each label is assigned to
the block right after the last earlier label it depends on, blocks are sorted
by the label key and concatenated.  A label is always treated as dependent on
itself, whatever the instance's relation says about reflexive pairs.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence

Indep = Callable[[Hashable, Hashable], bool]
Key = Callable[[Hashable], str]


def _dependent(indep: Indep, u, v) -> bool:
    return u == v or not indep(u, v)


def _levels(seq: Sequence, indep: Indep) -> list[int]:
    # a label depends on itself, so its latest occurrence has the highest
    # level among its occurrences; one entry per distinct label is enough
    last: dict = {}
    levels: list[int] = []
    for u in seq:
        lvl = 0
        for w, l in last.items():
            if l >= lvl and (w == u or not indep(w, u)):
                lvl = l + 1
        last[u] = lvl
        levels.append(lvl)
    return levels


def _foata(seq: Sequence, indep: Indep, key: Key) -> tuple[tuple, tuple]:
    levels = _levels(seq, indep)
    keys = {u: key(u) for u in set(seq)}
    order = sorted(range(len(seq)), key=lambda i: (levels[i], keys[seq[i]]))
    return tuple(seq[i] for i in order), tuple(levels[i] for i in order)


def canonicalize(seq: Iterable, indep: Indep, key: Key = str) -> tuple:
    """Foata normal form of `seq`; equivalent sequences share it."""
    return _foata(tuple(seq), indep, key)[0]


def equivalent(l1: Iterable, l2: Iterable, indep: Indep, key: Key = str) -> bool:
    l1, l2 = tuple(l1), tuple(l2)
    if len(l1) != len(l2):
        return False
    return canonicalize(l1, indep, key) == canonicalize(l2, indep, key)


class Trace:
    """An equivalence class of label sequences, stored as its normal form."""

    __slots__ = ("canonical", "levels", "indep", "key", "_hash")

    def __init__(self, labels: Iterable = (), indep: Indep = None, key: Key = str):
        if indep is None:
            raise TypeError("Trace needs an independence predicate")
        self.indep = indep
        self.key = key
        self.canonical, self.levels = _foata(tuple(labels), indep, key)
        self._hash = hash(self.canonical)

    @classmethod
    def _raw(cls, canonical: tuple, levels: tuple, indep: Indep, key: Key) -> "Trace":
        t = cls.__new__(cls)
        t.canonical, t.levels, t.indep, t.key = canonical, levels, indep, key
        t._hash = hash(canonical)
        return t

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self._hash == other._hash and self.canonical == other.canonical

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.canonical)

    def __iter__(self):
        return iter(self.canonical)

    def __repr__(self) -> str:
        return f"Trace({list(self.canonical)!r})"

    def encode(self) -> str:
        return encode_sequence(self.canonical, self.key)

    def append(self, u) -> "Trace":
        """The class of any representative followed by `u`."""
        seq, levels = self.canonical, self.levels
        lvl = 0
        for w, l in zip(seq, levels):
            if l >= lvl and _dependent(self.indep, w, u):
                lvl = l + 1
        k = self.key(u)
        pos = len(seq)
        for i, (w, l) in enumerate(zip(seq, levels)):
            if l > lvl or (l == lvl and self.key(w) > k):
                pos = i
                break
        return Trace._raw(
            seq[:pos] + (u,) + seq[pos:],
            levels[:pos] + (lvl,) + levels[pos:],
            self.indep,
            self.key,
        )

    def _maximal_position(self, u) -> int | None:
        seq = self.canonical
        for p in range(len(seq) - 1, -1, -1):
            if seq[p] == u:
                if all(not _dependent(self.indep, u, w) for w in seq[p + 1:]):
                    return p
                return None
        return None

    def maximal_labels(self) -> set:
        """Labels that some representative of the class ends with."""
        seq = self.canonical
        out = set()
        for p, u in enumerate(seq):
            if all(not _dependent(self.indep, u, w) for w in seq[p + 1:]):
                out.add(u)
        return out

    def remove_last(self, u) -> "Trace | None":
        p = self._maximal_position(u)
        if p is None:
            return None
        return Trace(self.canonical[:p] + self.canonical[p + 1:], self.indep, self.key)


def append(t: Trace, u) -> Trace:
    return t.append(u)


def maximal_labels(t: Trace) -> set:
    return t.maximal_labels()


def remove_last(t: Trace, u) -> Trace | None:
    return t.remove_last(u)


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split `text` on `sep` occurrences outside (), [] and {}."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def encode_sequence(labels: Iterable, key: Key = str) -> str:
    return "[" + ", ".join(key(u) for u in labels) + "]"


def decode_sequence(text: str, parse_label: Callable[[str], Hashable]) -> list:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected a bracketed sequence, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    return [parse_label(part) for part in split_top_level(body)]
