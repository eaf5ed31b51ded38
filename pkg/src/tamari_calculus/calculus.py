"""Derivations in the Tamari sequent calculus.

Rules::

    A, B, D |- C              G |- A    D |- B
    ------------ L            ----------------- R          ----- id
    A*B, D |- C                 G, D |- A*B                A |- A

    T |- A    G, A, D |- B
    ---------------------- cut
        G, T, D |- B

``L`` only ever decomposes the *leftmost* formula; that restriction is what
makes the calculus capture the Tamari order instead of associativity.
``Rfoc`` and ``id_atm`` are the focused instances of ``R`` and ``id``
(irreducible left premise context, atomic identity). A derivation is focused
when it uses only ``L``, ``Rfoc`` and ``id_atm``; every derivable sequent has
exactly one such derivation, and :func:`decide_focused` finds it.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .syntax import (
    Atom,
    Formula,
    Kind,
    Prod,
    Sequent,
    classify,
    context_with_frontier,
    formula_from_json,
    formula_to_json,
    frontier,
    is_reducible,
    parse_sequent,
    print_sequent,
    sequent_from_json,
    sequent_to_json,
    size,
    with_frontier,
)

DEFAULT_ENUM_LIMIT = 10


class Rule(enum.Enum):
    STAR_L = "L"
    STAR_R = "R"
    STAR_R_FOC = "Rfoc"
    ID = "id"
    ID_ATM = "id_atm"
    CUT = "cut"


FOCUSED_RULES = frozenset({Rule.STAR_L, Rule.STAR_R_FOC, Rule.ID_ATM})
_ARITY = {Rule.STAR_L: 1, Rule.STAR_R: 2, Rule.STAR_R_FOC: 2, Rule.ID: 0, Rule.ID_ATM: 0, Rule.CUT: 2}


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    rule: Rule
    conclusion: Sequent
    premises: tuple = ()
    cut_formula: Optional[Formula] = None
    splits: Optional[tuple] = None  # (i, j): context[:i], context[i:j], context[j:]

    @property
    def context(self) -> tuple:
        return self.conclusion.context

    @property
    def goal(self) -> Formula:
        return self.conclusion.goal

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def __str__(self):
        return format_derivation(self)


# ---------------------------------------------------------------------------
# rule constructors

def id_atm(p: Atom) -> Derivation:
    if not isinstance(p, Atom):
        raise DerivationError("id_atm needs an atom")
    return Derivation(Rule.ID_ATM, Sequent((p,), p))


def identity(a: Formula) -> Derivation:
    """Unrestricted identity ``A |- A``."""
    return Derivation(Rule.ID, Sequent((a,), a))


def star_l(d: Derivation) -> Derivation:
    ctx = d.context
    if len(ctx) < 2:
        raise DerivationError("L needs a premise context of length >= 2")
    return Derivation(Rule.STAR_L, Sequent((Prod(ctx[0], ctx[1]),) + ctx[2:], d.goal), (d,))


def star_r(d: Derivation, e: Derivation) -> Derivation:
    """Unrestricted ``R``."""
    return Derivation(Rule.STAR_R, Sequent(d.context + e.context, Prod(d.goal, e.goal)), (d, e))


def star_r_foc(d: Derivation, e: Derivation) -> Derivation:
    if is_reducible(d.context):
        raise DerivationError("Rfoc needs an irreducible left premise context")
    return Derivation(Rule.STAR_R_FOC, Sequent(d.context + e.context, Prod(d.goal, e.goal)), (d, e))


def star_r_canonical(d: Derivation, e: Derivation) -> Derivation:
    """``Rfoc`` when its side condition holds, plain ``R`` otherwise."""
    if is_reducible(d.context):
        return star_r(d, e)
    return star_r_foc(d, e)


def cut(d: Derivation, e: Derivation, position: int) -> Derivation:
    """Cut ``d : T |- A`` into ``e : G, A, D |- B`` at ``A = e.context[position]``."""
    ctx = e.context
    if not 0 <= position < len(ctx) or ctx[position] != d.goal:
        raise DerivationError("cut formula does not occur at the given position")
    new = ctx[:position] + d.context + ctx[position + 1:]
    splits = (position, position + len(d.context))
    return Derivation(Rule.CUT, Sequent(new, e.goal), (d, e), d.goal, splits)


# ---------------------------------------------------------------------------
# checking

def derivation_errors(d: Derivation) -> list:
    """Every schema violation in ``d``, as ``path: message`` strings."""
    errors = []

    def err(path, msg):
        errors.append(f"{path or 'root'}: {msg}")

    def go(d, path):
        if not isinstance(d.rule, Rule):
            err(path, f"unknown rule {d.rule!r}")
            return
        if len(d.premises) != _ARITY[d.rule]:
            err(path, f"{d.rule.value} expects {_ARITY[d.rule]} premises, got {len(d.premises)}")
            return
        ctx, goal = d.context, d.goal
        ps = d.premises
        if d.rule in (Rule.CUT,) and (d.cut_formula is None or d.splits is None):
            err(path, "cut node lacks cut formula or splits")
        elif d.rule is not Rule.CUT and (d.cut_formula is not None or d.splits is not None):
            err(path, "cut annotations on a non-cut node")
        if d.rule is Rule.ID_ATM:
            if not isinstance(goal, Atom) or ctx != (goal,):
                err(path, "id_atm must conclude p |- p")
        elif d.rule is Rule.ID:
            if ctx != (goal,):
                err(path, "id must conclude A |- A")
        elif d.rule is Rule.STAR_L:
            (p,) = ps
            pc = p.context
            if len(pc) < 2 or ctx != (Prod(pc[0], pc[1]),) + pc[2:]:
                err(path, "L: conclusion context is not A*B, D for premise A, B, D")
            if p.goal != goal:
                err(path, "L: goal changed")
        elif d.rule in (Rule.STAR_R, Rule.STAR_R_FOC):
            p, q = ps
            if goal != Prod(p.goal, q.goal):
                err(path, "R: goal is not the product of the premise goals")
            if ctx != p.context + q.context:
                err(path, "R: conclusion context is not the concatenation of the premise contexts")
            if d.rule is Rule.STAR_R_FOC and is_reducible(p.context):
                err(path, "Rfoc: left premise context is reducible")
        elif d.rule is Rule.CUT:
            p, q = ps
            if d.splits is not None and d.cut_formula is not None:
                i, j = d.splits
                if not 0 <= i <= j <= len(ctx):
                    err(path, "cut: splits out of range")
                else:
                    gamma, theta, delta = ctx[:i], ctx[i:j], ctx[j:]
                    if p.context != theta or p.goal != d.cut_formula:
                        err(path, "cut: left premise is not T |- A")
                    if q.context != gamma + (d.cut_formula,) + delta or q.goal != goal:
                        err(path, "cut: right premise is not G, A, D |- B")
        if frontier(ctx) != frontier(goal):
            err(path, "frontier of context and goal differ")
        for k, p in enumerate(ps):
            go(p, f"{path}.{k}" if path else str(k))

    go(d, "")
    return errors


def check_derivation(d: Derivation) -> bool:
    return not derivation_errors(d)


def is_focused(d: Derivation) -> bool:
    """Only ``L``, ``Rfoc`` and ``id_atm`` occur."""
    return all(n.rule in FOCUSED_RULES for n in d.nodes())


def placement_focused(d: Derivation) -> bool:
    """Conclusion-placement test: left-inverting sequents only under ``L``,
    right-focusing only under an ``R`` rule, atomic only under identity."""
    for n in d.nodes():
        kind = classify(n.conclusion)
        if n.rule is Rule.CUT or kind is Kind.EMPTY_CONTEXT:
            return False
        if kind is Kind.LEFT_INVERTING and n.rule is not Rule.STAR_L:
            return False
        if kind is Kind.RIGHT_FOCUSING and n.rule not in (Rule.STAR_R, Rule.STAR_R_FOC):
            return False
        if kind is Kind.ATOMIC and n.rule not in (Rule.ID, Rule.ID_ATM):
            return False
    return True


# ---------------------------------------------------------------------------
# proof search

def decide_focused(s: Sequent) -> Optional[Derivation]:
    """The focused derivation of ``s``, or None when ``s`` is underivable.

    No backtracking: frontier refinement pins the ``Rfoc`` split.
    """
    return _decide(s.context, s.goal)


def _decide(ctx: tuple, goal: Formula) -> Optional[Derivation]:
    if not ctx:
        return None
    first = ctx[0]
    if isinstance(first, Prod):
        sub = _decide((first.left, first.right) + ctx[1:], goal)
        return None if sub is None else Derivation(Rule.STAR_L, Sequent(ctx, goal), (sub,))
    if isinstance(goal, Atom):
        if len(ctx) == 1 and first == goal:
            return Derivation(Rule.ID_ATM, Sequent(ctx, goal))
        return None
    # right-focusing: the left premise takes exactly frontier(goal.left) worth of atoms
    need = size(goal.left) + 1
    have = 0
    for i, f in enumerate(ctx):
        have += size(f) + 1
        if have >= need:
            break
    if have != need or i + 1 == len(ctx):
        return None
    d1 = _decide(ctx[:i + 1], goal.left)
    if d1 is None:
        return None
    d2 = _decide(ctx[i + 1:], goal.right)
    if d2 is None:
        return None
    return Derivation(Rule.STAR_R_FOC, Sequent(ctx, goal), (d1, d2))


def derivable(s: Sequent) -> bool:
    return decide_focused(s) is not None


def enumerate_focused(s: Sequent, limit: int | None = None) -> list:
    """All focused derivations of ``s`` by exhaustive backtracking.

    Tries every context split for ``Rfoc``; independent of the frontier
    argument that :func:`decide_focused` relies on.
    """
    limit = DEFAULT_ENUM_LIMIT if limit is None else limit
    n = max(len(frontier(s.context)), len(frontier(s.goal)))
    if n > limit:
        raise ValueError(f"sequent frontier length {n} exceeds limit {limit}")
    return list(_enumerate(s.context, s.goal))


@lru_cache(maxsize=200_000)
def _enumerate(ctx: tuple, goal: Formula) -> tuple:
    out = []
    conc = Sequent(ctx, goal)
    if ctx and isinstance(ctx[0], Prod):
        for sub in _enumerate((ctx[0].left, ctx[0].right) + ctx[1:], goal):
            out.append(Derivation(Rule.STAR_L, conc, (sub,)))
        return tuple(out)
    if isinstance(goal, Atom):
        if ctx == (goal,):
            out.append(Derivation(Rule.ID_ATM, conc))
        return tuple(out)
    for i in range(len(ctx) + 1):
        lefts = _enumerate(ctx[:i], goal.left)
        if not lefts:
            continue
        for d2 in _enumerate(ctx[i:], goal.right):
            for d1 in lefts:
                out.append(Derivation(Rule.STAR_R_FOC, conc, (d1, d2)))
    return tuple(out)


# ---------------------------------------------------------------------------
# admissible rules

def derive_semiassoc(a: Formula, b: Formula, c: Formula) -> Derivation:
    """``(A*B)*C |- A*(B*C)`` with unrestricted ``R`` and ``id``."""
    core = star_r(identity(a), star_r(identity(b), identity(c)))
    return star_l(star_l(core))


def deduction(a: Formula, k: Callable[[Derivation], Derivation]) -> Derivation:
    """Turn ``k`` (focused ``G |- A`` to focused ``G, D |- B`` for irreducible
    ``G``) into a focused derivation of ``A, D |- B``."""
    if isinstance(a, Atom):
        return k(id_atm(a))
    a1, a2 = a.left, a.right
    d2 = admit_id(a2)
    return star_l(deduction(a1, lambda d1: k(star_r_foc(d1, d2))))


def admit_id(a: Formula) -> Derivation:
    return deduction(a, lambda d: d)


def admit_cut(d: Derivation, e: Derivation, position: int) -> Derivation:
    """Focused ``G, T, D |- B`` from focused ``d : T |- A`` and
    ``e : G, A, D |- B`` (``A`` at ``position`` in ``e``)."""
    a = d.goal
    if not 0 <= position < len(e.context) or e.context[position] != a:
        raise DerivationError("cut formula does not occur at the given position")
    if isinstance(a, Atom):
        if d.context != (a,):
            raise DerivationError("atomic cut with a non-identity left derivation")
        return e
    if e.rule is Rule.ID_ATM:
        raise DerivationError("compound cut formula cannot be an atomic identity")
    if e.rule is Rule.STAR_R_FOC:
        e1, e2 = e.premises
        k = len(e1.context)
        if position < k:
            return star_r_foc(admit_cut(d, e1, position), e2)
        return star_r_foc(e1, admit_cut(d, e2, position - k))
    if e.rule is Rule.STAR_L:
        (e1,) = e.premises
        if position > 0:
            return star_l(admit_cut(d, e1, position + 1))
        # the cut formula itself is being decomposed
        if d.rule is Rule.STAR_L:
            (d1,) = d.premises
            return star_l(admit_cut(d1, e, 0))
        if d.rule is Rule.STAR_R_FOC:
            d1, d2 = d.premises
            mid = admit_cut(d1, e1, 0)
            return admit_cut(d2, mid, len(d1.context))
        raise DerivationError(f"left derivation is not focused (root {d.rule.value})")
    raise DerivationError(f"right derivation is not focused (root {e.rule.value})")


def admit_star_r(d: Derivation, e: Derivation) -> Derivation:
    """Focused ``G, D |- A*B`` from focused ``G |- A`` and ``D |- B``."""
    a, b = d.goal, e.goal
    pair = deduction(a, lambda d1: star_r_foc(d1, admit_id(b)))  # A, B |- A*B
    step = admit_cut(d, pair, 0)
    return admit_cut(e, step, len(d.context))


def focus(d: Derivation) -> Derivation:
    """A focused derivation with the same conclusion.

    Premises are focused first; cut, unrestricted id and unrestricted R are
    then replaced by their admissible counterparts.
    """
    errors = derivation_errors(d)
    if errors:
        raise DerivationError("invalid derivation: " + "; ".join(errors[:3]))
    return _focus(d)


def _focus(d: Derivation) -> Derivation:
    r = d.rule
    if r is Rule.ID_ATM:
        return d
    if r is Rule.ID:
        return admit_id(d.goal)
    ps = [_focus(p) for p in d.premises]
    if r is Rule.STAR_L:
        return star_l(ps[0])
    if r is Rule.STAR_R_FOC:
        return star_r_foc(ps[0], ps[1])
    if r is Rule.STAR_R:
        return admit_star_r(ps[0], ps[1])
    if r is Rule.CUT:
        return admit_cut(ps[0], ps[1], d.splits[0])
    raise DerivationError(f"unknown rule {r!r}")


# ---------------------------------------------------------------------------
# permuting L under R

def _is_lr_redex(d: Derivation) -> bool:
    return d.rule in (Rule.STAR_R, Rule.STAR_R_FOC) and d.premises[0].rule is Rule.STAR_L


def permute_L_under_R(d: Derivation) -> Derivation:  # noqa: N802
    """Rewrite ``R(L(D1), D2)`` at the root to ``L(R(D1, D2))``."""
    if not _is_lr_redex(d):
        raise DerivationError("root is not R with an L left premise")
    (inner,), right = d.premises[0].premises, d.premises[1]
    return star_l(star_r_canonical(inner, right))


def _rebuild(d: Derivation, premises) -> Derivation:
    premises = tuple(premises)
    if d.rule is Rule.STAR_L:
        return star_l(premises[0])
    if d.rule in (Rule.STAR_R, Rule.STAR_R_FOC):
        return star_r_canonical(*premises)
    if d.rule is Rule.CUT:
        return cut(premises[0], premises[1], d.splits[0])
    return d


def permute_steps(d: Derivation) -> list:
    """Every derivation one L-under-R permutation away from ``d``."""
    out = []
    if _is_lr_redex(d):
        out.append(permute_L_under_R(d))
    for k, p in enumerate(d.premises):
        for p2 in permute_steps(p):
            ps = list(d.premises)
            ps[k] = p2
            out.append(_rebuild(d, ps))
    return out


def normalize_permutations(d: Derivation, max_steps: int = 100_000) -> Derivation:
    for _ in range(max_steps):
        steps = permute_steps(d)
        if not steps:
            return d
        d = steps[0]
    raise RuntimeError("permutation normalization did not terminate")


# ---------------------------------------------------------------------------
# relabelling

def relabel_derivation(d: Derivation, atoms) -> Derivation:
    """Rename the atoms of a cut-free derivation positionally.

    ``atoms`` replaces the conclusion frontier; premises inherit the
    matching segments.
    """
    atoms = tuple(atoms)
    ctx = context_with_frontier(d.context, atoms)
    goal = with_frontier(d.goal, atoms)
    conc = Sequent(ctx, goal)
    if d.rule in (Rule.ID, Rule.ID_ATM):
        return Derivation(d.rule, conc)
    if d.rule is Rule.STAR_L:
        return Derivation(d.rule, conc, (relabel_derivation(d.premises[0], atoms),))
    if d.rule in (Rule.STAR_R, Rule.STAR_R_FOC):
        p, q = d.premises
        k = len(frontier(p.context))
        return Derivation(d.rule, conc, (relabel_derivation(p, atoms[:k]), relabel_derivation(q, atoms[k:])))
    raise DerivationError("cannot relabel through a cut")


# ---------------------------------------------------------------------------
# serialization

def derivation_to_json(d: Derivation) -> dict:
    out = {
        "rule": d.rule.value,
        "sequent": sequent_to_json(d.conclusion),
        "premises": [derivation_to_json(p) for p in d.premises],
    }
    if d.rule is Rule.CUT:
        out["cut_formula"] = formula_to_json(d.cut_formula)
        out["splits"] = list(d.splits)
    return out


def derivation_from_json(obj) -> Derivation:
    if not isinstance(obj, dict):
        raise ValueError("derivation JSON must be an object")
    try:
        rule = Rule(obj["rule"])
    except (KeyError, ValueError):
        raise ValueError(f"bad rule in derivation JSON: {obj.get('rule')!r}") from None
    conc = sequent_from_json(obj["sequent"])
    premises = tuple(derivation_from_json(p) for p in obj.get("premises", []))
    cut_formula = splits = None
    if rule is Rule.CUT:
        cut_formula = formula_from_json(obj["cut_formula"])
        splits = tuple(int(x) for x in obj["splits"])
        if len(splits) != 2:
            raise ValueError("cut splits must have two entries")
    return Derivation(rule, conc, premises, cut_formula, splits)


def format_derivation(d: Derivation, indent: str = "  ") -> str:
    """Proof tree as indented text, conclusion first."""
    lines = []

    def go(d, depth):
        tag = d.rule.value
        if d.rule is Rule.CUT:
            tag = f"cut {d.splits[0]} {d.splits[1]}"
        lines.append(f"{indent * depth}{print_sequent(d.conclusion)}   [{tag}]")
        for p in d.premises:
            go(p, depth + 1)

    go(d, 0)
    return "\n".join(lines)


_LINE_RE = re.compile(r"^(?P<ind> *)(?P<seq>.*?)\s+\[(?P<rule>\w+)(?: (?P<i>\d+) (?P<j>\d+))?\]\s*$")


def parse_derivation_text(text: str, indent: int = 2) -> Derivation:
    """Inverse of :func:`format_derivation`."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if m is None or len(m.group("ind")) % indent:
            raise ValueError(f"line {lineno}: not a derivation line")
        rule = Rule(m.group("rule"))
        splits = (int(m.group("i")), int(m.group("j"))) if m.group("i") else None
        entries.append((len(m.group("ind")) // indent, parse_sequent(m.group("seq")), rule, splits))
    if not entries:
        raise ValueError("empty derivation text")
    pos = 0

    def build(depth):
        nonlocal pos
        d_depth, seq, rule, splits = entries[pos]
        if d_depth != depth:
            raise ValueError("bad indentation in derivation text")
        pos += 1
        kids = []
        while pos < len(entries) and entries[pos][0] == depth + 1:
            kids.append(build(depth + 1))
        cut_formula = kids[0].goal if rule is Rule.CUT and kids else None
        return Derivation(rule, seq, tuple(kids), cut_formula, splits)

    d = build(0)
    if pos != len(entries):
        raise ValueError("trailing lines after derivation")
    return d
