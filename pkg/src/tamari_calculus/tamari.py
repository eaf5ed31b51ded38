"""The Tamari order by rotation closure.

This module knows nothing about sequents: it is the brute-force reference
that the calculus is checked against. Rotations point upward,
``(A*B)*C <= A*(B*C)``.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import Atom, Formula, Prod, frontier, print_formula, shape, size, with_frontier

DEFAULT_LIMIT = 10


class LimitExceeded(ValueError):
    pass


def _check_limit(n: int, limit: int | None):
    limit = DEFAULT_LIMIT if limit is None else limit
    if n < 0:
        raise ValueError("size must be nonnegative")
    if n > limit:
        raise LimitExceeded(f"n={n} exceeds the configured limit {limit}")


def rotation_successors(f: Formula) -> list:
    """Every formula obtained by one right rotation of one subterm."""
    out = []
    if isinstance(f, Atom):
        return out
    if isinstance(f.left, Prod):
        a, b, c = f.left.left, f.left.right, f.right
        out.append(Prod(a, Prod(b, c)))
    for g in rotation_successors(f.left):
        out.append(Prod(g, f.right))
    for g in rotation_successors(f.right):
        out.append(Prod(f.left, g))
    # rotations at distinct positions never coincide, but stay defensive
    return list(dict.fromkeys(out))


def leq_bruteforce(a: Formula, b: Formula) -> bool:
    """Is ``b`` reachable from ``a`` by right rotations?"""
    if frontier(a) != frontier(b):
        return False
    seen = {a}
    queue = deque([a])
    while queue:
        f = queue.popleft()
        if f == b:
            return True
        for g in rotation_successors(f):
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return False


@lru_cache(maxsize=None)
def shapes(n: int, name: str = "p") -> tuple:
    """All formulas with ``n`` products over the constant frontier.

    Ordered by root split, smaller left subtrees first.
    """
    if n == 0:
        return (Atom(name),)
    out = []
    for k in range(n):
        for left in shapes(k, name):
            for right in shapes(n - 1 - k, name):
                out.append(Prod(left, right))
    return tuple(out)


def catalan(n: int) -> int:
    from math import comb
    return comb(2 * n, n) // (n + 1)


@dataclass(frozen=True)
class TamariPoset:
    n: int
    elements: tuple
    up: tuple  # up[i] is a bitset of all j with elements[i] <= elements[j]
    covers: tuple  # (lower, upper) index pairs
    index: dict = field(repr=False, compare=False)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq_matrix(self) -> list:
        m = len(self.elements)
        return [[self.leq(i, j) for j in range(m)] for i in range(m)]

    def interval_count(self) -> int:
        return sum(bin(u).count("1") for u in self.up)

    def intervals(self):
        for i in range(len(self.elements)):
            for j in range(len(self.elements)):
                if self.leq(i, j):
                    yield self.elements[i], self.elements[j]

    def to_dot(self) -> str:
        lines = [f"digraph Y{self.n} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
        for i, f in enumerate(self.elements):
            lines.append(f'  n{i} [label="{print_formula(f)}"];')
        for i, j in self.covers:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        labels = [print_formula(f) for f in self.elements]
        w.writerow([""] + labels)
        for i, label in enumerate(labels):
            w.writerow([label] + [int(self.leq(i, j)) for j in range(len(labels))])
        return buf.getvalue()


def build_poset(n: int, limit: int | None = None) -> TamariPoset:
    _check_limit(n, limit)
    return _build_poset(n)


@lru_cache(maxsize=None)
def _build_poset(n: int) -> TamariPoset:
    elements = shapes(n)
    index = {f: i for i, f in enumerate(elements)}
    succ = [[index[g] for g in rotation_successors(f)] for f in elements]

    up: list[int | None] = [None] * len(elements)

    def upset(i):
        # rotation graph is acyclic; chains have length <= n(n-1)/2
        if up[i] is None:
            bits = 1 << i
            for j in succ[i]:
                bits |= upset(j)
            up[i] = bits
        return up[i]

    for i in range(len(elements)):
        upset(i)

    # every strict relation factors through a rotation, so covers are the
    # rotation edges not implied by another rotation out of the same element
    covers = []
    for i, js in enumerate(succ):
        for j in js:
            if not any(k != j and up[k] >> j & 1 for k in js):
                covers.append((i, j))
    return TamariPoset(n, elements, tuple(up), tuple(covers), index)


def count_intervals_bruteforce(n: int, limit: int | None = None) -> int:
    return build_poset(n, limit).interval_count()


def _bound(a: Formula, b: Formula, lower: bool) -> Formula:
    fa, fb = frontier(a), frontier(b)
    if fa != fb:
        raise ValueError("meet/join need formulas with equal frontiers")
    poset = build_poset(size(a))
    i, j = poset.index[shape(a)], poset.index[shape(b)]
    m = len(poset.elements)
    if lower:
        common = [k for k in range(m) if poset.leq(k, i) and poset.leq(k, j)]
        best = [k for k in common if all(poset.leq(c, k) for c in common)]
    else:
        common = [k for k in range(m) if poset.leq(i, k) and poset.leq(j, k)]
        best = [k for k in common if all(poset.leq(k, c) for c in common)]
    if len(best) != 1:
        raise AssertionError(f"no unique {'meet' if lower else 'join'}: lattice property fails")
    return with_frontier(poset.elements[best[0]], fa)


def meet(a: Formula, b: Formula) -> Formula:
    return _bound(a, b, lower=True)


def join(a: Formula, b: Formula) -> Formula:
    return _bound(a, b, lower=False)
