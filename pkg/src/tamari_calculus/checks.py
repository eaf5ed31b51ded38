"""Exhaustive verification suites shared by the CLI and the test-suite."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import calculus as calc
from . import counting
from . import lambda_terms as lam
from .syntax import Sequent, max_decomposition
from .tamari import build_poset, shapes


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name} ({self.checked} cases){extra}"


def _result(name, checked, failures):
    return CheckResult(name, not failures, checked, failures[:20])


def check_oracle(n_max: int = 6, limit: int | None = None) -> CheckResult:
    """decide_focused on ``[A] |- B`` against rotation closure, all pairs."""
    checked, failures = 0, []
    for n in range(n_max + 1):
        poset = build_poset(n, limit)
        elems = poset.elements
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                checked += 1
                ok = calc.decide_focused(Sequent((a,), b)) is not None
                if ok != poset.leq(i, j):
                    failures.append(f"{a} <= {b}: calculus {ok}, rotations {poset.leq(i, j)}")
    return _result(f"oracle n<={n_max}", checked, failures)


def coherence_sequents(n_max: int):
    for n in range(n_max + 1):
        elems = shapes(n)
        for a in elems:
            for b in elems:
                yield Sequent((a,), b)
                yield Sequent(max_decomposition(a), b)


def check_coherence(n_max: int = 5) -> CheckResult:
    """Exactly one focused derivation per derivable sequent, none otherwise."""
    checked, failures = 0, []
    for s in coherence_sequents(n_max):
        checked += 1
        found = calc.enumerate_focused(s)
        d = calc.decide_focused(s)
        expected = [] if d is None else [d]
        if found != expected:
            failures.append(f"{s}: {len(found)} focused derivations, decide={'yes' if d else 'no'}")
    return _result(f"coherence n<={n_max}", checked, failures)


def check_bijection(n_max: int = 5) -> CheckResult:
    checked, failures = 0, []
    for n in range(1, n_max + 1):
        terms = lam.enumerate_terms(n, closed=True, planar=True, indecomposable=True, normal=True)
        expected = counting.closed_formula(n)
        if len(terms) != expected:
            failures.append(f"n={n}: {len(terms)} terms, expected {expected}")
        seen = {}
        for t in terms:
            checked += 1
            iv = lam.interval_shapes(t)
            if iv in seen:
                failures.append(f"{lam.print_term(t)} and {lam.print_term(seen[iv])} share an interval")
            seen[iv] = t
            back = lam.interval_to_term(*iv)
            if lam.canonical(back) != lam.canonical(t):
                failures.append(f"{lam.print_term(t)} does not round-trip")
        intervals = set(build_poset(n).intervals())
        if set(seen) != intervals:
            failures.append(f"n={n}: image is not the set of intervals")
    return _result(f"bijection n<={n_max}", checked, failures)


def check_series(n_max: int = 30) -> CheckResult:
    failures = []
    l, r = counting.solve_series(n_max)
    counts = r.at_x1()
    for n in range(n_max + 1):
        if counts[n] != counting.closed_formula(n):
            failures.append(f"n={n}: series {counts[n]} != closed {counting.closed_formula(n)}")
    if not counting.l_equation_residual(l, r).is_zero():
        failures.append("L equation residual is nonzero")
    if l.x_slice(1) != counts:
        failures.append("x^1 slice of L differs from R(z,1)")
    if not counting.phi_equation_residual(counting.phi_series(n_max)).is_zero():
        failures.append("Phi equation residual is nonzero")
    return _result(f"series n<={n_max}", n_max + 1, failures)


SUITES = {
    "oracle": (check_oracle, 5),
    "coherence": (check_coherence, 4),
    "bijection": (check_bijection, 4),
    "series": (check_series, 30),
}
