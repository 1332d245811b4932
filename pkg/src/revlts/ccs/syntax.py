"""CCS processes and refined labels in nameless form.

Bound channels and bound process variables are de Bruijn indices (ints);
free ones keep their names (strs).  The two sorts have independent index
spaces: `Nu` binds channel 0, `Rec` binds variable 0.  Binder names are
kept only as printing hints and take no part in equality, so equality is
alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Union

from revlts._frozen import node

Chan = Union[str, int]


@dataclass(frozen=True)
class Act:
    chan: Chan
    co: bool = False

    def complement(self) -> "Act":
        return Act(self.chan, not self.co)


@dataclass(frozen=True)
class Tau:
    def __repr__(self):
        return "tau"


TAU = Tau()


class Process:
    __slots__ = ()


@node
class Nil(Process):
    pass


@node
class Sum(Process):
    summands: tuple  # of (Act, Process), never empty


@node
class Par(Process):
    left: Process
    right: Process


@node
class Nu(Process):
    body: Process
    name: str = field(default="a", compare=False)


@node
class Var(Process):
    ref: Union[str, int]


@node
class Rec(Process):
    body: Process
    name: str = field(default="X", compare=False)


NIL = Nil()


class Label:
    __slots__ = ()


@node
class Pick(Label):
    summands: tuple
    index: int  # 1-based


@node
class LeftL(Label):
    inner: Label


@node
class RightL(Label):
    inner: Label


@node
class SyncL(Label):
    left: Label
    right: Label


@node
class NuL(Label):
    inner: Label
    name: str = field(default="a", compare=False)


@node
class RecL(Label):
    proc: Rec


def prefix(act: Act, cont: Process = NIL) -> Sum:
    return Sum(((act, cont),))


# -- index manipulation ------------------------------------------------------


def _shift_chan(c: Chan, d: int, cut: int) -> Chan:
    if isinstance(c, int) and c >= cut:
        return c + d
    return c


def shift(p: Process, dc: int = 0, dv: int = 0, cc: int = 0, cv: int = 0) -> Process:
    """Add `dc`/`dv` to bound channel/variable indices at or above the cutoffs."""
    if dc == 0 and dv == 0:
        return p
    if isinstance(p, Nil):
        return p
    if isinstance(p, Sum):
        return Sum(
            tuple(
                (Act(_shift_chan(a.chan, dc, cc), a.co), shift(q, dc, dv, cc, cv))
                for a, q in p.summands
            )
        )
    if isinstance(p, Par):
        return Par(shift(p.left, dc, dv, cc, cv), shift(p.right, dc, dv, cc, cv))
    if isinstance(p, Nu):
        return Nu(shift(p.body, dc, dv, cc + 1, cv), p.name)
    if isinstance(p, Rec):
        return Rec(shift(p.body, dc, dv, cc, cv + 1), p.name)
    if isinstance(p, Var):
        if isinstance(p.ref, int) and p.ref >= cv:
            return Var(p.ref + dv)
        return p
    raise TypeError(p)


def _subst(p: Process, target, q: Process, dc: int, dv: int) -> Process:
    # `target` is a free name, or a bound index relative to the top of `p`
    if isinstance(p, Nil):
        return p
    if isinstance(p, Sum):
        return Sum(tuple((a, _subst(r, target, q, dc, dv)) for a, r in p.summands))
    if isinstance(p, Par):
        return Par(_subst(p.left, target, q, dc, dv), _subst(p.right, target, q, dc, dv))
    if isinstance(p, Nu):
        return Nu(_subst(p.body, target, q, dc + 1, dv), p.name)
    if isinstance(p, Rec):
        return Rec(_subst(p.body, target, q, dc, dv + 1), p.name)
    if isinstance(p, Var):
        if isinstance(target, str):
            hit = p.ref == target
        else:
            hit = p.ref == target + dv
        return shift(q, dc, dv) if hit else p
    raise TypeError(p)


def substitute(p: Process, x: str, q: Process) -> Process:
    """Replace the free variable named `x` in `p` by `q` without capture."""
    return _subst(p, x, q, 0, 0)


def unfold(r: Rec) -> Process:
    """The body of `r` with its bound variable replaced by `r` itself."""
    return shift(_subst(r.body, 0, shift(r, dv=1), 0, 0), dv=-1)


# -- names -------------------------------------------------------------------


def free_names(p) -> set[str]:
    out: set[str] = set()
    _free(p, out)
    return out


def _free(p, out: set) -> None:
    if isinstance(p, Sum):
        for a, q in p.summands:
            if isinstance(a.chan, str):
                out.add(a.chan)
            _free(q, out)
    elif isinstance(p, Par):
        _free(p.left, out)
        _free(p.right, out)
    elif isinstance(p, (Nu, Rec)):
        _free(p.body, out)
    elif isinstance(p, Var):
        if isinstance(p.ref, str):
            out.add(p.ref)
    elif isinstance(p, Pick):
        for a, q in p.summands:
            if isinstance(a.chan, str):
                out.add(a.chan)
            _free(q, out)
    elif isinstance(p, (LeftL, RightL, NuL)):
        _free(p.inner, out)
    elif isinstance(p, SyncL):
        _free(p.left, out)
        _free(p.right, out)
    elif isinstance(p, RecL):
        _free(p.proc, out)


def free_chans(p: Process) -> set[str]:
    return {n for n in free_names(p) if n[:1].islower()}


def free_vars(p: Process) -> set[str]:
    return {n for n in free_names(p) if n[:1].isupper()}


_CHAN_BASE = "abcdefghijklmnopqrstuvwxyz"
_VAR_BASE = ["X", "Y", "Z", "W", "V", "U"]


def _pick_name(hint: str | None, avoid: set[str], sort: str) -> str:
    if hint is not None and hint not in avoid:
        return hint
    if hint is not None:
        for i in count(1):
            if f"{hint}{i}" not in avoid:
                return f"{hint}{i}"
    base = list(_CHAN_BASE) if sort == "chan" else _VAR_BASE
    for n in base:
        if n not in avoid:
            return n
    for i in count(1):
        for n in base:
            if f"{n}{i}" not in avoid:
                return f"{n}{i}"


# -- printing ----------------------------------------------------------------


class _Printer:
    def __init__(self, canonical: bool):
        self.canonical = canonical

    def chan(self, c: Chan, cenv: list) -> str:
        return c if isinstance(c, str) else cenv[-1 - c]

    def act(self, a: Act, cenv: list) -> str:
        return ("~" if a.co else "") + self.chan(a.chan, cenv)

    def bind(self, hint: str, body, cenv: list, venv: list, sort: str) -> str:
        avoid = free_names(body) | set(cenv) | set(venv)
        return _pick_name(None if self.canonical else hint, avoid, sort)

    def proc(self, p: Process, cenv: list, venv: list, ctx: str = "top") -> str:
        if isinstance(p, Nil):
            return "0"
        if isinstance(p, Var):
            return p.ref if isinstance(p.ref, str) else venv[-1 - p.ref]
        if isinstance(p, Sum):
            s = " + ".join(self.summand(a, q, cenv, venv) for a, q in p.summands)
            return f"({s})" if ctx == "cont" and len(p.summands) > 1 else s
        if isinstance(p, Par):
            s = f"{self.proc(p.left, cenv, venv, 'par_left')} | {self.proc(p.right, cenv, venv, 'par_right')}"
            return f"({s})" if ctx in ("cont", "par_right") else s
        if isinstance(p, Nu):
            n = self.bind(p.name, p.body, cenv, venv, "chan")
            s = f"nu {n}. {self.proc(p.body, cenv + [n], venv)}"
            return s if ctx == "top" else f"({s})"
        if isinstance(p, Rec):
            n = self.bind(p.name, p.body, cenv, venv, "var")
            s = f"rec {n}. {self.proc(p.body, cenv, venv + [n])}"
            return s if ctx == "top" else f"({s})"
        raise TypeError(p)

    def summand(self, a: Act, q: Process, cenv: list, venv: list) -> str:
        return f"{self.act(a, cenv)}.{self.proc(q, cenv, venv, 'cont')}"

    def label(self, u: Label, cenv: list, venv: list) -> str:
        if isinstance(u, Pick):
            return f"pick({u.index}){{{self.proc(Sum(u.summands), cenv, venv)}}}"
        if isinstance(u, LeftL):
            return f"({self.slot(u.inner, cenv, venv)} | *)"
        if isinstance(u, RightL):
            return f"(* | {self.slot(u.inner, cenv, venv)})"
        if isinstance(u, SyncL):
            return f"({self.slot(u.left, cenv, venv)} | {self.slot(u.right, cenv, venv)})"
        if isinstance(u, NuL):
            n = self.bind(u.name, u.inner, cenv, venv, "chan")
            return f"nu {n}.({self.label(u.inner, cenv + [n], venv)})"
        if isinstance(u, RecL):
            return self.proc(u.proc, cenv, venv)
        raise TypeError(u)

    def slot(self, u: Label, cenv: list, venv: list) -> str:
        s = self.label(u, cenv, venv)
        return f"({s})" if isinstance(u, RecL) else s


def pretty(p: Process) -> str:
    """Display text using the binder names given at parse time when possible."""
    return _Printer(False).proc(p, [], [])


def canonical_text(p: Process) -> str:
    """Text that depends only on the alpha-equivalence class of `p`."""
    return _Printer(True).proc(p, [], [])


def pretty_label(u: Label) -> str:
    return _Printer(False).label(u, [], [])


def label_text(u: Label) -> str:
    """Injective encoding of a label; also fixes the label order."""
    return _Printer(True).label(u, [], [])
