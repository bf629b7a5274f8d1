"""Linear elevator expressions for 2-cells.

Grammar::

    expr   := term | expr "v" term        vertical, top operand first
    term   := factor | term "." factor    horizontal, right operand applied first
    factor := IDENT | "id" "(" IDENT ")" | "(" expr ")"

So ``a v b`` is "b after a" and ``b . a`` is the juxtaposition "b a".
An identifier bound to a 1-cell stands for its identity 2-cell (whiskering).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .errors import BoundaryMismatch, ElevatorSyntaxError, UnknownAtom

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[().]))")


@dataclass(frozen=True)
class Atom:
    name: str
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Ident:
    name: str
    pos: int = field(default=0, compare=False)

    def __str__(self):
        return f"id({self.name})"


@dataclass(frozen=True)
class VComp:
    top: object
    bottom: object

    def __str__(self):
        return f"({self.top} v {self.bottom})"


@dataclass(frozen=True)
class HComp:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} . {self.right})"


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ElevatorSyntaxError(f"unexpected character {text[i]!r}", i)
        start = m.start("ident") if m.group("ident") else m.start("sym")
        out.append((m.group("ident") or m.group("sym"), start))
        i = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, want=None):
        tok, pos = self.peek()
        if want is not None and tok != want:
            raise ElevatorSyntaxError(f"expected {want!r}, found {tok!r}", pos)
        self.i += 1
        return tok, pos

    def expr(self):
        node = self.term()
        while self.peek()[0] == "v":
            self.take()
            node = VComp(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == ".":
            self.take()
            node = HComp(node, self.factor())
        return node

    def factor(self):
        tok, pos = self.peek()
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok == "id" and self.peek(1)[0] == "(":
            self.take()
            self.take("(")
            name, p = self.take()
            if not _is_ident(name):
                raise ElevatorSyntaxError(f"expected a 1-cell name, found {name!r}", p)
            self.take(")")
            return Ident(name, p)
        if _is_ident(tok):
            self.take()
            return Atom(tok, pos)
        raise ElevatorSyntaxError(f"unexpected {tok!r}", pos)


def _is_ident(tok):
    return tok not in ("v", "<end>") and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) is not None


@dataclass
class CellEnv:
    """A 2-category plus name bindings for 2-cells and 1-cells."""

    K: object
    cells: Mapping = field(default_factory=dict)
    ones: Mapping = field(default_factory=dict)

    def bind(self, **kw):
        return CellEnv(self.K, {**self.cells, **kw}, self.ones)

    def bind1(self, **kw):
        return CellEnv(self.K, self.cells, {**self.ones, **kw})


def atoms(e):
    if isinstance(e, (Atom, Ident)):
        return [e]
    if isinstance(e, VComp):
        return atoms(e.top) + atoms(e.bottom)
    return atoms(e.left) + atoms(e.right)


def parse_elevator(text: str, env: CellEnv | None = None):
    p = _Parser(text)
    node = p.expr()
    tok, pos = p.peek()
    if tok != "<end>":
        raise ElevatorSyntaxError(f"unexpected {tok!r}", pos)
    if env is not None:
        for a in atoms(node):
            if isinstance(a, Ident) and a.name not in env.ones:
                raise UnknownAtom(a.name)
            if isinstance(a, Atom) and a.name not in env.cells and a.name not in env.ones:
                raise UnknownAtom(a.name)
    return node


def evaluate(e, env: CellEnv):
    if isinstance(e, str):
        e = parse_elevator(e)
    K = env.K
    if isinstance(e, Atom):
        if e.name in env.cells:
            return env.cells[e.name]
        if e.name in env.ones:
            return K.id2(env.ones[e.name])
        raise UnknownAtom(e.name)
    if isinstance(e, Ident):
        if e.name not in env.ones:
            raise UnknownAtom(e.name)
        return K.id2(env.ones[e.name])
    if isinstance(e, VComp):
        top = evaluate(e.top, env)
        bottom = evaluate(e.bottom, env)
        if K.tgt2(top) != K.src2(bottom):
            raise BoundaryMismatch(f"vertical boundary mismatch in {e}", e)
        return K.vcomp(bottom, top)
    left = evaluate(e.left, env)
    right = evaluate(e.right, env)
    if K.tgt1(K.src2(right)) != K.src1(K.src2(left)):
        raise BoundaryMismatch(f"horizontal boundary mismatch in {e}", e)
    return K.hcomp(left, right)


def boundary(e, env: CellEnv):
    c = evaluate(e, env)
    return env.K.src2(c), env.K.tgt2(c)


def equal(e1, e2, env: CellEnv) -> bool:
    c1 = evaluate(e1, env)
    c2 = evaluate(e2, env)
    K = env.K
    if (K.src2(c1), K.tgt2(c1)) != (K.src2(c2), K.tgt2(c2)):
        raise BoundaryMismatch("the two sides have different boundaries", (e1, e2))
    return c1 == c2


# the three evaluations of the interchange identity for a: f => g, a2: f2 => g2
ELEVATOR_FORMS = (
    "(id(f2) . a) v (a2 . id(g))",
    "(a2 . id(f)) v (id(g2) . a)",
    "a2 . a",
)


def elevator_evaluations(K, a, a2):
    """Evaluate the three forms of the interchange identity on a composable pair."""
    f, g = K.src2(a), K.tgt2(a)
    f2, g2 = K.src2(a2), K.tgt2(a2)
    env = CellEnv(K, {"a": a, "a2": a2}, {"f": f, "g": g, "f2": f2, "g2": g2})
    return tuple(evaluate(_PARSED[i], env) for i in range(3))


_PARSED = tuple(parse_elevator(t) for t in ELEVATOR_FORMS)
