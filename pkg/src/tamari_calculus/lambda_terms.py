"""Linear and planar lambda terms, and their link to Tamari intervals.

A closed indecomposable planar term has an application tree and a binding
tree; the binding tree is always below the application tree, and on
beta-normal terms the pair is a bijection onto Tamari intervals.

Terms are written ``\\x.x(\\y.y)``: abstraction scopes as far right as
possible, application is juxtaposition (left associative), and ``λ`` may be
used instead of the backslash. Size is the number of applications.
"""

from __future__ import annotations

import itertools
from collections import Counter
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from . import calculus as calc
from .calculus import Derivation, Rule
from .syntax import Atom, Formula, ParseError, Prod, Sequent, frontier, shape

DEFAULT_LIMIT = 6

BINDER_POOL = ("x", "y", "z", "w", "u", "v")
FREE_POOL = ("a", "b", "c", "d", "e", "f")


def binder_name(k: int) -> str:
    return BINDER_POOL[k] if k < len(BINDER_POOL) else f"x{k}"


def free_name(k: int) -> str:
    return FREE_POOL[k] if k < len(FREE_POOL) else f"a{k}"


class TermError(ValueError):
    pass


class PlanarityError(TermError):
    pass


class NotAnInterval(TermError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str
    body: "Term"

    def __str__(self):
        return print_term(self)


Term = Union[Var, App, Abs]


# ---------------------------------------------------------------------------
# parsing and printing

_TOK_RE = re.compile(r"\s*(?:(?P<var>[a-z][a-zA-Z0-9_]*)|(?P<sym>[\\λ.()])|(?P<bad>\S))")


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOK_RE.match(text, pos)
        if m is None:
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        if m.group("var") is not None:
            out.append(("var", m.group("var"), m.start("var")))
        else:
            sym = m.group("sym")
            out.append(("lam" if sym in "\\λ" else sym, sym, m.start("sym")))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def term(self) -> Term:
        if self.peek() == "lam":
            self.take("lam")
            x = self.take("var")[1]
            self.take(".")
            return Abs(x, self.term())
        return self.app()

    def app(self) -> Term:
        head = self.atom()
        while self.peek() in ("var", "(", "lam"):
            if self.peek() == "lam":
                head = App(head, self.term())
                break
            head = App(head, self.atom())
        return head

    def atom(self) -> Term:
        kind = self.peek()
        if kind == "var":
            return Var(self.take("var")[1])
        if kind == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        tok = self.toks[self.i]
        got = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise ParseError(f"expected term, got {got}", self.text, tok[2])


def parse_term(text: str, check: bool = True) -> Term:
    p = _TermParser(text)
    t = p.term()
    if p.peek() != "eof":
        tok = p.toks[p.i]
        raise ParseError(f"unexpected {tok[1]!r}", text, tok[2])
    if check:
        problem = barendregt_violation(t)
        if problem:
            raise ParseError(f"{problem}; rename bound variables apart", text)
    return t


def print_term(m: Term, lam: str = "\\") -> str:
    if isinstance(m, Var):
        return m.name
    if isinstance(m, Abs):
        return f"{lam}{m.binder}.{print_term(m.body, lam)}"
    head = print_term(m.fun, lam)
    if isinstance(m.fun, Abs):
        head = f"({head})"
    return f"{head}({print_term(m.arg, lam)})"


def term_to_json(m: Term):
    if isinstance(m, Var):
        return {"var": m.name}
    if isinstance(m, App):
        return {"app": [term_to_json(m.fun), term_to_json(m.arg)]}
    return {"abs": [m.binder, term_to_json(m.body)]}


def term_from_json(obj) -> Term:
    if isinstance(obj, dict) and len(obj) == 1:
        if "var" in obj:
            return Var(obj["var"])
        if "app" in obj and len(obj["app"]) == 2:
            return App(term_from_json(obj["app"][0]), term_from_json(obj["app"][1]))
        if "abs" in obj and len(obj["abs"]) == 2:
            return Abs(obj["abs"][0], term_from_json(obj["abs"][1]))
    raise ValueError(f"bad term JSON: {obj!r}")


# ---------------------------------------------------------------------------
# basic structure

def free_occurrences(m: Term) -> list:
    """Free variable occurrences, left to right, with multiplicity."""
    out = []

    def go(m, bound):
        if isinstance(m, Var):
            if m.name not in bound:
                out.append(m.name)
        elif isinstance(m, App):
            go(m.fun, bound)
            go(m.arg, bound)
        else:
            go(m.body, bound | {m.binder})

    go(m, frozenset())
    return out


def free_vars(m: Term) -> list:
    return list(dict.fromkeys(free_occurrences(m)))


def binders(m: Term) -> list:
    out = []

    def go(m):
        if isinstance(m, Abs):
            out.append(m.binder)
            go(m.body)
        elif isinstance(m, App):
            go(m.fun)
            go(m.arg)

    go(m)
    return out


def barendregt_violation(m: Term) -> Optional[str]:
    bs = binders(m)
    dup = [b for b, c in Counter(bs).items() if c > 1]
    if dup:
        return f"variable {dup[0]!r} is bound twice"
    clash = set(bs) & set(free_occurrences(m))
    if clash:
        return f"variable {sorted(clash)[0]!r} is both free and bound"
    return None


def term_size(m: Term) -> int:
    if isinstance(m, Var):
        return 0
    if isinstance(m, Abs):
        return term_size(m.body)
    return 1 + term_size(m.fun) + term_size(m.arg)


def subterms(m: Term):
    yield m
    if isinstance(m, App):
        yield from subterms(m.fun)
        yield from subterms(m.arg)
    elif isinstance(m, Abs):
        yield from subterms(m.body)


def is_linear(m: Term) -> bool:
    for s in subterms(m):
        if isinstance(s, Abs) and free_occurrences(s.body).count(s.binder) != 1:
            return False
    occ = free_occurrences(m)
    return len(occ) == len(set(occ))


def is_closed(m: Term) -> bool:
    return not free_occurrences(m)


def is_indecomposable(m: Term) -> bool:
    """No closed proper subterm."""
    it = subterms(m)
    next(it)
    return all(free_occurrences(s) for s in it)


def is_beta_normal(m: Term) -> bool:
    return not any(isinstance(s, App) and isinstance(s.fun, Abs) for s in subterms(m))


def is_planar(m: Term) -> bool:
    return is_linear(m) and barendregt_violation(m) is None and diagram_checks(binddiag(m)).planar


@dataclass(frozen=True)
class Analysis:
    linear: bool
    closed: bool
    indecomposable: bool
    planar: bool
    beta_normal: bool


def analyze(m: Term) -> Analysis:
    return Analysis(
        linear=is_linear(m),
        closed=is_closed(m),
        indecomposable=is_indecomposable(m),
        planar=is_planar(m),
        beta_normal=is_beta_normal(m),
    )


def canonical(m: Term, rename_free: bool = False) -> Term:
    """Alpha-normal representative: binders renamed in diagram order.

    With ``rename_free`` the free variables are also renamed, by first
    occurrence, so that terms equal up to free-variable renaming coincide.
    """
    free = free_vars(m)
    free_map = {v: free_name(i) for i, v in enumerate(free)} if rename_free else {v: v for v in free}
    taken = set(free_map.values())
    counter = itertools.count()

    def fresh():
        while True:
            name = binder_name(next(counter))
            if name not in taken:
                return name

    def go(m, env):
        if isinstance(m, Var):
            return Var(env.get(m.name, free_map.get(m.name, m.name)))
        if isinstance(m, App):
            f = go(m.fun, env)
            return App(f, go(m.arg, env))
        x = fresh()
        return Abs(x, go(m.body, {**env, m.binder: x}))

    return go(m, {})


def alpha_eq(m: Term, n: Term) -> bool:
    return canonical(m) == canonical(n)


# ---------------------------------------------------------------------------
# application trees and binding diagrams

def apptree(m: Term) -> Formula:
    if isinstance(m, Var):
        return Atom(m.name)
    if isinstance(m, App):
        return Prod(apptree(m.fun), apptree(m.arg))
    return apptree(m.body)


def _diagram(m: Term, rl: bool) -> tuple:
    if not is_linear(m):
        raise TermError("binding diagram needs a linear term")
    out = []

    def go(m):
        if isinstance(m, Var):
            out.append(m.name)
        elif isinstance(m, App):
            go(m.fun)
            go(m.arg)
        elif rl:
            go(m.body)
            out.append(m.binder)
        else:
            out.append(m.binder)
            go(m.body)

    go(m)
    return tuple(out)


def binddiag(m: Term) -> tuple:
    """Binders and uses in reading order, abstraction before body."""
    return _diagram(m, rl=False)


def binddiag_rl(m: Term) -> tuple:
    """Mirror convention: the binder is written after its body."""
    return _diagram(m, rl=True)


def _is_dow(word) -> bool:
    counts = Counter(word)
    return all(c == 2 for c in counts.values())


@dataclass(frozen=True)
class DiagramChecks:
    double_occurrence: bool
    planar: bool
    indecomposable: bool
    outer_chord: bool  # first letter equals last letter


def diagram_checks(word) -> DiagramChecks:
    word = tuple(word)
    counts = Counter(word)
    dow = bool(word) and all(c == 2 for c in counts.values())
    planar = all(c in (1, 2) for c in counts.values())
    if planar:
        first = {}
        for j, x in enumerate(word):
            if x in first and not _is_dow(word[first[x] + 1:j]):
                planar = False
                break
            first.setdefault(x, j)
    indecomposable = dow and not any(_is_dow(word[:k]) for k in range(2, len(word), 2))
    outer = bool(word) and word[0] == word[-1]
    return DiagramChecks(dow, planar, indecomposable, outer)


def full_and_free_chords(word) -> tuple:
    counts = Counter(word)
    return sum(1 for c in counts.values() if c == 2), sum(1 for c in counts.values() if c == 1)


def diagram_text(word) -> str:
    return " ".join(word)


# ---------------------------------------------------------------------------
# beta and rho

def substitute(m: Term, x: str, n: Term) -> Term:
    """``m[n/x]``; assumes bound names are apart from the free names of ``n``."""
    if isinstance(m, Var):
        return n if m.name == x else m
    if isinstance(m, App):
        return App(substitute(m.fun, x, n), substitute(m.arg, x, n))
    if m.binder == x:
        return m
    return Abs(m.binder, substitute(m.body, x, n))


def _steps(m: Term, contract) -> list:
    out = []
    top = contract(m)
    if top is not None:
        out.append(top)
    if isinstance(m, App):
        out += [App(f, m.arg) for f in _steps(m.fun, contract)]
        out += [App(m.fun, a) for a in _steps(m.arg, contract)]
    elif isinstance(m, Abs):
        out += [Abs(m.binder, b) for b in _steps(m.body, contract)]
    return out


def _beta_contract(m):
    if isinstance(m, App) and isinstance(m.fun, Abs):
        return substitute(m.fun.body, m.fun.binder, m.arg)
    return None


def _rho_contract(m):
    if isinstance(m, App) and isinstance(m.fun, Abs):
        return Abs(m.fun.binder, App(m.fun.body, m.arg))
    return None


def beta_step(m: Term) -> list:
    """All one-step beta reducts."""
    return _steps(m, _beta_contract)


def rho_step(m: Term) -> list:
    """All one-step reducts of ``(\\x.M)(N) -> \\x.M(N)``."""
    return _steps(m, _rho_contract)


def is_rho_normal(m: Term) -> bool:
    return not rho_step(m)


def rho_normalize(m: Term) -> Term:
    while True:
        steps = rho_step(m)
        if not steps:
            return m
        m = steps[0]


def rho_invariant(m: Term) -> tuple:
    c = canonical(m)
    return apptree(c), binddiag(c)


def rho_equiv(m: Term, n: Term) -> bool:
    """Equal application trees and binding diagrams, up to alpha."""
    return rho_invariant(m) == rho_invariant(n)


# ---------------------------------------------------------------------------
# binding forests and derivations

def binding_forest(m: Term) -> tuple:
    if isinstance(m, Var):
        return (Atom(m.name),)
    if isinstance(m, App):
        return binding_forest(m.fun) + binding_forest(m.arg)
    forest = binding_forest(m.body)
    if len(forest) < 2:
        raise PlanarityError(f"not planar/indecomposable at binder {m.binder}: body has {len(forest)} tree")
    a, b = forest[0], forest[1]
    if frontier(a)[-1] != Atom(m.binder):
        raise PlanarityError(f"not planar/indecomposable at binder {m.binder}")
    return (Prod(a, b),) + forest[2:]


def binding_tree(m: Term) -> Formula:
    if not isinstance(m, Abs):
        raise TermError("binding tree needs a closed term of the form \\x.M")
    forest = binding_forest(m.body)
    if len(forest) != 1 or free_occurrences(m):
        raise TermError("binding tree needs a closed indecomposable planar term")
    return forest[0]


def term_to_derivation(m: Term) -> Derivation:
    """Derivation of ``binding_forest(M) |- apptree(M)``.

    Abstractions become ``L``, applications ``R`` (``Rfoc`` whenever the
    left context is irreducible), variables ``id_atm``. A closed term is
    unwrapped first.
    """
    if is_closed(m):
        if not isinstance(m, Abs):
            raise TermError("closed term is not an abstraction")
        m = m.body

    def go(m):
        if isinstance(m, Var):
            return calc.id_atm(Atom(m.name))
        if isinstance(m, App):
            return calc.star_r_canonical(go(m.fun), go(m.arg))
        d = go(m.body)
        ctx = d.context
        if len(ctx) < 2 or frontier(ctx[0])[-1] != Atom(m.binder):
            raise PlanarityError(f"not planar/indecomposable at binder {m.binder}")
        return calc.star_l(d)

    return go(m)


def _fresh_atoms(k: int) -> tuple:
    return tuple(Atom(f"v{i}") for i in range(k))


def derivation_to_term(d: Derivation) -> Term:
    """Read ``L`` as abstraction, ``R`` as application, ``id_atm`` as a variable.

    Atoms are renamed apart first if the frontier repeats a name.
    """
    bad = {n.rule for n in d.nodes()} - {Rule.STAR_L, Rule.STAR_R, Rule.STAR_R_FOC, Rule.ID_ATM}
    if bad:
        raise TermError(f"derivation uses {sorted(r.value for r in bad)}; only L, R, id_atm allowed")
    errors = calc.derivation_errors(d)
    if errors:
        raise TermError("invalid derivation: " + errors[0])
    atoms = frontier(d.context)
    if len(set(atoms)) != len(atoms):
        d = calc.relabel_derivation(d, _fresh_atoms(len(atoms)))

    def go(d):
        if d.rule is Rule.ID_ATM:
            return Var(d.goal.name)
        if d.rule is Rule.STAR_L:
            (p,) = d.premises
            x = frontier(p.context[0])[-1].name
            return Abs(x, go(p))
        return App(go(d.premises[0]), go(d.premises[1]))

    return go(d)


def term_to_interval(m: Term) -> tuple:
    """(binding tree, application tree) of a closed indecomposable planar term."""
    if not is_closed(m):
        raise TermError("term_to_interval needs a closed term")
    return binding_tree(m), apptree(m)


def interval_to_term(a: Formula, b: Formula) -> Term:
    """The closed indecomposable beta-normal planar term with binding tree
    ``a`` and application tree ``b``, up to alpha."""
    if frontier(a) != frontier(b):
        raise NotAnInterval("formulas have different frontiers")
    d = calc.decide_focused(Sequent((a,), b))
    if d is None:
        raise NotAnInterval("not a Tamari interval")
    n = len(frontier(a))
    d = calc.relabel_derivation(d, _fresh_atoms(n))
    body = derivation_to_term(d)
    (x,) = free_vars(body)
    return canonical(Abs(x, body))


def interval_shapes(m: Term) -> tuple:
    a, b = term_to_interval(m)
    return shape(a), shape(b)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_terms(n: int, closed: bool = False, planar: bool = False,
                    indecomposable: bool = False, normal: bool = False,
                    limit: int | None = None) -> list:
    """Linear terms with ``n`` applications, canonical up to alpha.

    Open terms are canonical up to renaming of free variables as well, so
    the list is finite. Planar families are generated directly by filling
    skeletons along the unique non-crossing assignment.
    """
    limit = DEFAULT_LIMIT if limit is None else limit
    if n < 0:
        raise ValueError("size must be nonnegative")
    if n > limit:
        raise ValueError(f"n={n} exceeds the enumeration limit {limit}")
    if planar:
        terms = [t for t, *_ in _planar(n, (), 0, 0, 0, closed, normal)]
    else:
        terms = _linear_all(n, closed, normal)
    if indecomposable:
        terms = [t for t in terms if is_indecomposable(t)]
    return terms


def _planar(n, stack, nb, nf, chain, closed, normal, head=False):
    """Yield (term, stack, nb, nf) in diagram order.

    ``stack`` holds binders still waiting for their use; a use must take the
    top one (anything else crosses a chord), and may be free only when the
    stack is empty.
    """
    if n == 0:
        if stack:
            yield Var(stack[-1]), stack[:-1], nb, nf
        elif not closed:
            yield Var(free_name(nf)), stack, nb, nf + 1
    if not (normal and head) and chain + 1 <= n + 1:
        x = binder_name(nb)
        for body, st, nb2, nf2 in _planar(n, stack + (x,), nb + 1, nf, chain + 1, closed, normal):
            if len(st) <= len(stack):
                yield Abs(x, body), st, nb2, nf2
    for k in range(n):
        for f, st1, nb1, nf1 in _planar(k, stack, nb, nf, 0, closed, normal, head=True):
            for a, st2, nb2, nf2 in _planar(n - 1 - k, st1, nb1, nf1, 0, closed, normal):
                yield App(f, a), st2, nb2, nf2


def _linear_all(n, closed, normal):
    out = {}
    ks = [0] if closed else range(n + 2)
    for k in ks:
        fv = tuple(f"f{i}" for i in range(k))
        for t in _linear(n, fv, 0, normal, False):
            c = canonical(t, rename_free=True)
            out.setdefault(c, None)
    return list(out)


@lru_cache(maxsize=None)
def _linear(n, fv, depth, normal, head):
    """Linear terms of size n using each name in ``fv`` exactly once, free."""
    out = []
    if n == 0 and len(fv) == 1:
        out.append(Var(fv[0]))
    if not (normal and head) and len(fv) + 1 <= n + 1:
        x = f"b{depth}"
        out += [Abs(x, body) for body in _linear(n, tuple(sorted(fv + (x,))), depth + 1, normal, False)]
    for k in range(n):
        for r in range(len(fv) + 1):
            for left in itertools.combinations(fv, r):
                right = tuple(v for v in fv if v not in left)
                if len(left) > k + 1 or len(right) > n - k:
                    continue
                fs = _linear(k, left, depth, normal, True)
                if not fs:
                    continue
                for a in _linear(n - 1 - k, right, depth, normal, False):
                    out += [App(f, a) for f in fs]
    return tuple(out)
