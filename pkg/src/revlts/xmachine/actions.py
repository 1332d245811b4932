"""Memories and refined actions.

A refined action is split into pieces indexed by some set; each piece is a
partial function on memories whose inverse is also a partial function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from revlts.xmachine.expr import Expr, parse_expr

UNIT = ()


class Memory(Mapping):
    """Total map from variables to naturals, zero outside a finite support."""

    __slots__ = ("_d", "_hash")

    def __init__(self, values: Mapping[str, int] | Iterable = (), **kw):
        d = dict(values, **kw)
        for k, v in d.items():
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"memory values are naturals, got {k}={v!r}")
        self._d = {k: v for k, v in d.items() if v != 0}
        self._hash = hash(frozenset(self._d.items()))

    def __getitem__(self, var: str) -> int:
        return self._d.get(var, 0)

    def __iter__(self):
        return iter(sorted(self._d))

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, var) -> bool:
        return True

    def __eq__(self, other) -> bool:
        if isinstance(other, Memory):
            return self._d == other._d
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def set(self, var: str, value: int) -> "Memory":
        d = dict(self._d)
        d[var] = value
        return Memory(d)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{k}={self._d[k]}" for k in sorted(self._d)) + "}"


@dataclass(frozen=True, eq=False)
class RefinedAction:
    id: str
    index_domain: str  # "N", "unit" or "finite"
    apply: Callable[[Hashable, Memory], Memory | None] = field(repr=False)
    unapply: Callable[[Hashable, Memory], Memory | None] = field(repr=False)
    candidates: Callable[[Memory], Iterable] = field(repr=False)
    rv: frozenset | None = None
    wv: frozenset | None = None
    text: str = ""

    def applicable(self, mem: Memory) -> list[tuple[Hashable, Memory]]:
        """Pieces defined at `mem`, with their results."""
        out = []
        for i in self.candidates(mem):
            m2 = self.apply(i, mem)
            if m2 is not None:
                out.append((i, m2))
        return out

    def __str__(self) -> str:
        return self.text or self.id


def _expr(e: str | Expr, boolean: bool = False) -> Expr:
    return e if isinstance(e, Expr) else parse_expr(e, boolean)


def _sources(xs, e: Expr) -> frozenset:
    xs = frozenset(e.variables if xs is None else xs)
    missing = e.variables - xs
    if missing:
        raise ValueError(f"expression {e.text!r} reads undeclared variables {sorted(missing)}")
    return xs


def make_assign(y: str, f: str | Expr, xs: Iterable[str] | None = None, *, id: str | None = None,
                refined: bool = True) -> RefinedAction:
    """`y := f(xs)`, split by the value of `y` it overwrites.

    With `refined=False` the plain relation is returned under a unit index;
    it is not co-deterministic unless `f` happens to be injective in `y`.
    """
    f = _expr(f)
    xs = _sources(xs, f)
    text = f"{y} := {f.text}"

    def apply(v, mem):
        if mem[y] != v:
            return None
        return mem.set(y, f(mem))

    def unapply(v, mem):
        prev = mem.set(y, v)
        return prev if f(prev) == mem[y] else None

    if not refined:
        return RefinedAction(
            id or text, "unit",
            lambda _i, mem: mem.set(y, f(mem)),
            lambda _i, mem: None,
            lambda mem: (UNIT,),
            xs, frozenset({y}), text,
        )
    return RefinedAction(id or text, "N", apply, unapply, lambda mem: (mem[y],), xs,
                         frozenset({y}), text)


class YInSources(ValueError):
    pass


def make_add_assign(y: str, f: str | Expr, xs: Iterable[str] | None = None, *,
                    id: str | None = None) -> RefinedAction:
    """`y += f(xs)` with `y` not among the sources; needs no splitting."""
    f = _expr(f)
    xs = _sources(xs, f)
    if y in xs:
        raise YInSources(f"{y} += ... may not read {y}")

    def apply(_i, mem):
        return mem.set(y, mem[y] + f(mem))

    def unapply(_i, mem):
        d = f(mem)
        return mem.set(y, mem[y] - d) if mem[y] >= d else None

    text = f"{y} += {f.text}"
    return RefinedAction(id or text, "unit", apply, unapply, lambda mem: (UNIT,), xs,
                         frozenset({y}), text)


def make_test(xs: Iterable[str] | None, pred: str | Expr, *, id: str | None = None) -> RefinedAction:
    """Identity on memories satisfying `pred`, undefined elsewhere."""
    pred = _expr(pred, boolean=True)
    xs = _sources(xs, pred)

    def guard(_i, mem):
        return mem if pred(mem) else None

    text = f"test {pred.text}"
    return RefinedAction(id or text, "unit", guard, guard, lambda mem: (UNIT,), xs,
                         frozenset(), text)


def from_table(id: str, pieces: Mapping[Hashable, Mapping[Memory, Memory]]) -> RefinedAction:
    """A refined action given piece by piece as finite tables.

    Raises ValueError if some piece is not injective.
    """
    inverse = {}
    where: dict = {}
    for i, table in pieces.items():
        inv = {}
        for src, dst in table.items():
            if dst in inv:
                raise ValueError(f"piece {i!r} of {id} maps {inv[dst]} and {src} to {dst}")
            inv[dst] = src
            where.setdefault(src, []).append(i)
        inverse[i] = inv
    return RefinedAction(
        id, "finite",
        lambda i, mem: pieces.get(i, {}).get(mem),
        lambda i, mem: inverse.get(i, {}).get(mem),
        lambda mem: where.get(mem, ()),
        text=id,
    )


def syntactic_independent(a: RefinedAction, b: RefinedAction) -> bool:
    """No variable written by both, and none written by one and read by the other."""
    if a.rv is None or b.rv is None:
        raise ValueError("syntactic independence needs read/write sets on both actions")
    return not (a.rv & b.wv) and not (b.rv & a.wv) and not (a.wv & b.wv)


@dataclass
class CommutationVerdict:
    witnesses: list = field(default_factory=list)  # (memory, a-then-b, b-then-a)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.witnesses


def commutation_check(a: RefinedAction, i, b: RefinedAction, j,
                      memories: Iterable[Memory]) -> CommutationVerdict:
    """Compare a(i) then b(j) with b(j) then a(i) on every sample memory."""
    verdict = CommutationVerdict()
    for mem in memories:
        verdict.checked += 1
        m1 = a.apply(i, mem)
        ab = None if m1 is None else b.apply(j, m1)
        m2 = b.apply(j, mem)
        ba = None if m2 is None else a.apply(i, m2)
        if ab != ba:
            verdict.witnesses.append((mem, ab, ba))
    return verdict
