"""Recursive-descent parser for CCS processes and refined labels.

Concrete syntax::

    P ::= P | P            parallel, left associative, loosest
        | P + P            guarded choice, every operand a prefix
        | a.P  | ~a.P      input / output prefix; a bare `a` means a.0
        | nu a. P          restriction, extends as far right as possible
        | rec X. P         recursion, likewise
        | 0 | X | (P)

    u ::= pick(i){a1.P1 + ... + an.Pn}
        | (u | *) | (* | u) | (u | v)
        | nu a.(u) | rec X. P | (u)

Channels start with a lowercase letter, process variables with an uppercase
one.  `#` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re

from revlts.ccs.syntax import (
    NIL,
    Act,
    LeftL,
    NuL,
    Par,
    Pick,
    Process,
    Rec,
    RecL,
    RightL,
    Sum,
    SyncL,
    Nu,
    Var,
)

KEYWORDS = {"nu", "rec", "pick"}

_TOKEN = re.compile(
    r"\s*(?:(?P<comment>\#[^\n]*)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[().{}+|~*]))"
)


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected):
        self.text = text
        self.pos = pos
        self.expected = sorted(set(expected))
        got = text[pos:pos + 12] or "end of input"
        super().__init__(f"at position {pos}: expected {' or '.join(self.expected)}, got {got!r}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:]
            if rest.strip():
                raise ParseError(text, pos + len(rest) - len(rest.lstrip()), ["token"])
            break
        pos = m.end()
        kind = m.lastgroup
        if kind == "comment":
            continue
        toks.append((kind, m.group(kind), m.start(kind)))
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind in ("sym", "ident") and v == value

    def fail(self, expected):
        raise ParseError(self.text, self.peek()[2], expected)

    def expect(self, value: str) -> None:
        if not self.at(value):
            self.fail([repr(value)])
        self.i += 1

    def ident(self, kind: str) -> str:
        k, v, _ = self.peek()
        if k != "ident" or v in KEYWORDS:
            self.fail([kind])
        if kind == "channel" and not v[0].islower():
            self.fail(["channel (lowercase)"])
        if kind == "variable" and not v[0].isupper():
            self.fail(["variable (uppercase)"])
        self.i += 1
        return v

    def end(self) -> None:
        if self.peek()[0] != "eof":
            self.fail(["end of input", "'|'", "'+'"])

    # -- names ----------------------------------------------------------------

    @staticmethod
    def lookup(name: str, env: tuple):
        for k, n in enumerate(reversed(env)):
            if n == name:
                return k
        return name

    # -- processes ----------------------------------------------------------

    def proc(self, cenv: tuple, venv: tuple) -> Process:
        p = self.sum(cenv, venv)
        while self.at("|"):
            self.i += 1
            p = Par(p, self.sum(cenv, venv))
        return p

    def sum(self, cenv: tuple, venv: tuple) -> Process:
        start = self.peek()[2]
        p = self.unary(cenv, venv)
        if not self.at("+"):
            return p
        parts = [p]
        while self.at("+"):
            self.i += 1
            parts.append(self.unary(cenv, venv))
        summands = []
        for q in parts:
            if q == NIL:
                continue
            if not isinstance(q, Sum):
                raise ParseError(self.text, start, ["guarded summand"])
            summands.extend(q.summands)
        return Sum(tuple(summands)) if summands else NIL

    def unary(self, cenv: tuple, venv: tuple) -> Process:
        kind, v, _ = self.peek()
        if kind == "ident" and v == "nu":
            self.i += 1
            a = self.ident("channel")
            self.expect(".")
            return Nu(self.proc(cenv + (a,), venv), a)
        if kind == "ident" and v == "rec":
            self.i += 1
            x = self.ident("variable")
            self.expect(".")
            return Rec(self.proc(cenv, venv + (x,)), x)
        if kind == "int":
            if v != "0":
                self.fail(["'0'"])
            self.i += 1
            return NIL
        if self.at("("):
            self.i += 1
            p = self.proc(cenv, venv)
            self.expect(")")
            return p
        if self.at("~") or (kind == "ident" and v[0].islower() and v not in KEYWORDS):
            co = self.at("~")
            if co:
                self.i += 1
            a = self.ident("channel")
            act = Act(self.lookup(a, cenv), co)
            cont = NIL
            if self.at("."):
                self.i += 1
                cont = self.unary(cenv, venv)
            return Sum(((act, cont),))
        if kind == "ident" and v[0].isupper():
            self.i += 1
            return Var(self.lookup(v, venv))
        self.fail(["'0'", "'('", "'~'", "channel", "variable", "'nu'", "'rec'"])

    # -- labels ---------------------------------------------------------------

    def label(self, cenv: tuple, venv: tuple):
        kind, v, _ = self.peek()
        if kind == "ident" and v == "pick":
            self.i += 1
            self.expect("(")
            k, num, pos = self.peek()
            if k != "int":
                self.fail(["index"])
            self.i += 1
            self.expect(")")
            self.expect("{")
            body = self.proc(cenv, venv)
            self.expect("}")
            if not isinstance(body, Sum):
                raise ParseError(self.text, pos, ["non-empty guarded sum"])
            idx = int(num)
            if not 1 <= idx <= len(body.summands):
                raise ParseError(self.text, pos, [f"index in 1..{len(body.summands)}"])
            return Pick(body.summands, idx)
        if kind == "ident" and v == "nu":
            self.i += 1
            a = self.ident("channel")
            self.expect(".")
            self.expect("(")
            inner = self.label(cenv + (a,), venv)
            self.expect(")")
            return NuL(inner, a)
        if kind == "ident" and v == "rec":
            self.i += 1
            x = self.ident("variable")
            self.expect(".")
            return RecL(Rec(self.proc(cenv, venv + (x,)), x))
        if self.at("("):
            self.i += 1
            left = self.slot(cenv, venv)
            if self.at(")") and left is not None:
                self.i += 1
                return left
            self.expect("|")
            right = self.slot(cenv, venv)
            self.expect(")")
            if left is None and right is None:
                raise ParseError(self.text, self.peek()[2], ["a label on at least one side"])
            if right is None:
                return LeftL(left)
            if left is None:
                return RightL(right)
            return SyncL(left, right)
        self.fail(["'pick'", "'('", "'nu'", "'rec'"])

    def slot(self, cenv: tuple, venv: tuple):
        if self.at("*"):
            self.i += 1
            return None
        return self.label(cenv, venv)


def parse(text: str) -> Process:
    p = _Parser(text)
    out = p.proc((), ())
    p.end()
    return out


def parse_label(text: str):
    p = _Parser(text)
    out = p.label((), ())
    if p.peek()[0] != "eof":
        p.fail(["end of label"])
    return out
