"""Formulas, contexts and sequents.

Formulas are binary trees of atoms under a non-associative product ``*``.
Contexts are tuples of formulas; sequents pair a context with a goal.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


class ParseError(ValueError):
    """Malformed formula, context or sequent text."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Prod:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return print_formula(self)


Formula = Union[Atom, Prod]
Context = tuple  # tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Sequent:
    context: tuple
    goal: Formula

    def __post_init__(self):
        if not isinstance(self.context, tuple):
            object.__setattr__(self, "context", tuple(self.context))

    def __str__(self):
        return print_sequent(self)


class Kind(enum.Enum):
    LEFT_INVERTING = "left-inverting"
    RIGHT_FOCUSING = "right-focusing"
    ATOMIC = "atomic"
    EMPTY_CONTEXT = "empty-context"


def atom(name: str) -> Atom:
    return Atom(name)


def prod(*fs: Formula) -> Formula:
    """Left-nested product of one or more formulas."""
    if not fs:
        raise ValueError("prod needs at least one formula")
    out = fs[0]
    for f in fs[1:]:
        out = Prod(out, f)
    return out


def size(f: Formula) -> int:
    """Number of ``*`` nodes."""
    n = 0
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prod):
            n += 1
            stack.append(g.left)
            stack.append(g.right)
    return n


def frontier(x: Formula | Sequence[Formula]) -> tuple:
    """Left-to-right atoms of a formula, or of a context by concatenation."""
    out: list[Atom] = []

    def go(f):
        if isinstance(f, Atom):
            out.append(f)
        else:
            go(f.left)
            go(f.right)

    if isinstance(x, (Atom, Prod)):
        go(x)
    else:
        for f in x:
            go(f)
    return tuple(out)


def relabel(sigma: Callable[[Atom], Atom] | dict, x):
    """Apply an atom relabelling to a formula or context, keeping shape."""
    if isinstance(sigma, dict):
        table = sigma
        sigma = lambda a: table.get(a, a)  # noqa: E731

    def go(f):
        if isinstance(f, Atom):
            return sigma(f)
        return Prod(go(f.left), go(f.right))

    if isinstance(x, (Atom, Prod)):
        return go(x)
    return tuple(go(f) for f in x)


def shape(f: Formula, name: str = "p") -> Formula:
    """Relabel every leaf with the same atom."""
    a = Atom(name)
    return relabel(lambda _: a, f)


def with_frontier(f: Formula, atoms: Sequence[Atom]) -> Formula:
    """Replace the leaves of ``f`` positionally by ``atoms``."""
    it = iter(atoms)

    def go(g):
        if isinstance(g, Atom):
            return next(it)
        return Prod(go(g.left), go(g.right))

    out = go(f)
    if next(it, None) is not None:
        raise ValueError("too many atoms for formula frontier")
    return out


def context_with_frontier(ctx: Sequence[Formula], atoms: Sequence[Atom]) -> tuple:
    out = []
    i = 0
    for f in ctx:
        k = size(f) + 1
        out.append(with_frontier(f, atoms[i:i + k]))
        i += k
    if i != len(atoms):
        raise ValueError("atom count does not match context frontier")
    return tuple(out)


def context_to_formula(ctx: Sequence[Formula]) -> Formula:
    """Left-associated product of a nonempty context."""
    if not ctx:
        raise ValueError("cannot interpret the empty context as a formula")
    return right_action(ctx[0], ctx[1:])


def right_action(a: Formula, delta: Iterable[Formula]) -> Formula:
    for b in delta:
        a = Prod(a, b)
    return a


def max_decomposition(f: Formula) -> tuple:
    """Unfold the left-branching spine: ``(A*B)`` becomes ``decomp(A), B``."""
    rights = []
    while isinstance(f, Prod):
        rights.append(f.right)
        f = f.left
    return (f, *reversed(rights))


def is_reducible(ctx: Sequence[Formula]) -> bool:
    return bool(ctx) and isinstance(ctx[0], Prod)


def classify(s: Sequent) -> Kind:
    if not s.context:
        return Kind.EMPTY_CONTEXT
    if isinstance(s.context[0], Prod):
        return Kind.LEFT_INVERTING
    if isinstance(s.goal, Prod):
        return Kind.RIGHT_FOCUSING
    return Kind.ATOMIC


# ---------------------------------------------------------------------------
# text syntax

_TOKEN_RE = re.compile(r"\s*(?:(?P<atom>[a-z][a-zA-Z0-9_]*)|(?P<sym>[()*,])|(?P<bad>\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = "atom" if m.group("atom") is not None else m.group("sym")
        start = m.start("atom") if kind == "atom" else m.start("sym")
        toks.append((kind, m.group(kind if kind == "atom" else "sym"), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "atom" if kind == "atom" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        """formula := operand ['*' operand]"""
        left = self.operand()
        if self.peek()[0] == "*":
            self.take("*")
            right = self.operand()
            if self.peek()[0] == "*":
                raise ParseError("ambiguous: parenthesize", self.text, self.peek()[2])
            return Prod(left, right)
        return left

    def operand(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "atom":
            self.take()
            return Atom(value)
        if kind == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        got = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected formula, got {got}", self.text, pos)

    def context(self) -> tuple:
        if self.peek()[0] == "eof":
            return ()
        fs = [self.formula()]
        while self.peek()[0] == ",":
            self.take(",")
            fs.append(self.formula())
        return tuple(fs)

    def end(self):
        kind, value, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {value!r}", self.text, pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.end()
    return f


def parse_context(text: str) -> tuple:
    p = _Parser(text)
    ctx = p.context()
    p.end()
    return ctx


def parse_sequent(text: str) -> Sequent:
    if text.count("|-") != 1:
        raise ParseError("sequent must contain exactly one '|-'", text)
    lhs, rhs = text.split("|-")
    try:
        ctx = parse_context(lhs)
    except ParseError as e:
        raise ParseError(f"in context: {e}", text) from None
    try:
        goal = parse_formula(rhs)
    except ParseError as e:
        raise ParseError(f"in goal: {e}", text) from None
    return Sequent(ctx, goal)


def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    return f"{_operand(f.left)}*{_operand(f.right)}"


def _operand(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    return f"({print_formula(f)})"


def print_context(ctx: Sequence[Formula]) -> str:
    return ", ".join(print_formula(f) for f in ctx)


def print_sequent(s: Sequent) -> str:
    lhs = print_context(s.context)
    return f"{lhs} |- {print_formula(s.goal)}" if lhs else f"|- {print_formula(s.goal)}"


# ---------------------------------------------------------------------------
# JSON form

def formula_to_json(f: Formula):
    if isinstance(f, Atom):
        return {"atom": f.name}
    return {"prod": [formula_to_json(f.left), formula_to_json(f.right)]}


def formula_from_json(obj) -> Formula:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"bad formula JSON: {obj!r}")
    if "atom" in obj:
        return Atom(obj["atom"])
    if "prod" in obj and isinstance(obj["prod"], list) and len(obj["prod"]) == 2:
        return Prod(formula_from_json(obj["prod"][0]), formula_from_json(obj["prod"][1]))
    raise ValueError(f"bad formula JSON: {obj!r}")


def context_to_json(ctx):
    return [formula_to_json(f) for f in ctx]


def context_from_json(obj) -> tuple:
    if not isinstance(obj, list):
        raise ValueError("context JSON must be an array")
    return tuple(formula_from_json(f) for f in obj)


def sequent_to_json(s: Sequent):
    return {"context": context_to_json(s.context), "goal": formula_to_json(s.goal)}


def sequent_from_json(obj) -> Sequent:
    if not isinstance(obj, dict) or set(obj) != {"context", "goal"}:
        raise ValueError(f"bad sequent JSON: {obj!r}")
    return Sequent(context_from_json(obj["context"]), formula_from_json(obj["goal"]))
