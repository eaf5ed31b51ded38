"""Exact interval counts from the focused-derivation generating functions.

``R(z, x)`` counts focused derivations with an irreducible context and
``L(z, x)`` those with any context; ``z`` marks the goal size and ``x`` the
context length. They are determined by

    R = z R L + x
    L = x (R(z, x) - R(z, 1)) / (x - 1)

and solved one ``z``-degree at a time with exact integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial

from .calculus import decide_focused
from .syntax import Sequent
from .tamari import LimitExceeded, count_intervals_bruteforce, shapes

FOCUSED_ORACLE_LIMIT = 6


# ---------------------------------------------------------------------------
# polynomials in x: tuples of ints, index = power of x, trailing zeros trimmed

def trim(p) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(p, q) -> tuple:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def psub(p, q) -> tuple:
    return padd(p, tuple(-c for c in q))


def pmul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def pshift(p, k: int = 1) -> tuple:
    """Multiply by x**k; negative k divides and requires exactness."""
    if not p:
        return ()
    if k >= 0:
        return (0,) * k + tuple(p)
    if any(p[:-k]):
        raise ArithmeticError("division by x is not exact")
    return tuple(p[-k:])


def peval1(p) -> int:
    return sum(p)


def difference_quotient(p) -> tuple:
    """(p(x) - p(1)) / (x - 1) by synthetic division."""
    if not p:
        return ()
    num = list(p)
    num[0] -= peval1(p)
    # divide by (x - 1) from the top coefficient down
    out = [0] * (len(num) - 1)
    carry = 0
    for i in range(len(num) - 1, 0, -1):
        carry += num[i]
        out[i - 1] = carry
    if carry + num[0] != 0:
        raise ArithmeticError("nonzero remainder in difference quotient")
    return trim(out)


def pformat(p, var: str = "x") -> str:
    terms = []
    for k, c in enumerate(p):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono:
            terms.append(f"{c}{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class SeriesLX:
    """Truncated series in z whose coefficients are polynomials in x."""

    by_z_degree: tuple

    @property
    def order(self) -> int:
        return len(self.by_z_degree) - 1

    def __getitem__(self, n: int) -> tuple:
        return self.by_z_degree[n]

    def coeff(self, n: int, k: int) -> int:
        p = self.by_z_degree[n]
        return p[k] if k < len(p) else 0

    def x_slice(self, k: int) -> tuple:
        return tuple(self.coeff(n, k) for n in range(self.order + 1))

    def at_x1(self) -> tuple:
        return tuple(peval1(p) for p in self.by_z_degree)

    def __add__(self, other: "SeriesLX") -> "SeriesLX":
        return SeriesLX(tuple(padd(p, q) for p, q in zip(self.by_z_degree, other.by_z_degree)))

    def __sub__(self, other: "SeriesLX") -> "SeriesLX":
        return SeriesLX(tuple(psub(p, q) for p, q in zip(self.by_z_degree, other.by_z_degree)))

    def __mul__(self, other: "SeriesLX") -> "SeriesLX":
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = ()
            for i in range(k + 1):
                acc = padd(acc, pmul(self[i], other[k - i]))
            out.append(acc)
        return SeriesLX(tuple(out))

    def map(self, f) -> "SeriesLX":
        return SeriesLX(tuple(trim(f(p)) for p in self.by_z_degree))

    def times_z(self) -> "SeriesLX":
        return SeriesLX(((),) + self.by_z_degree[:-1])

    def is_zero(self) -> bool:
        return all(not p for p in self.by_z_degree)

    def format(self, zvar: str = "z") -> str:
        parts = []
        for n, p in enumerate(self.by_z_degree):
            if not p:
                continue
            body = pformat(p)
            if n == 0:
                parts.append(body)
            else:
                zz = zvar if n == 1 else f"{zvar}^{n}"
                parts.append(f"({body}){zz}" if "+" in body else f"{body}{zz}")
        return " + ".join(parts) if parts else "0"


def constant(p, order: int) -> SeriesLX:
    return SeriesLX((trim(p),) + ((),) * order)


def solve_series(order: int) -> tuple:
    """(L, R) through z**order."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    r_coeffs: list[tuple] = []
    l_coeffs: list[tuple] = []
    for n in range(order + 1):
        acc = (0, 1) if n == 0 else ()
        for i in range(n):
            acc = padd(acc, pmul(r_coeffs[i], l_coeffs[n - 1 - i]))
        assert len(acc) <= n + 2, "x-degree bound violated"
        assert all(c >= 0 for c in acc)
        r_coeffs.append(acc)
        l_coeffs.append(pshift(difference_quotient(acc), 1))
    return SeriesLX(tuple(l_coeffs)), SeriesLX(tuple(r_coeffs))


def intervals_count(n: int) -> int:
    _, r = solve_series(n)
    return r.at_x1()[n]


def interval_counts(order: int) -> tuple:
    return solve_series(order)[1].at_x1()


def closed_formula(n: int) -> int:
    num = 2 * factorial(4 * n + 1)
    den = factorial(n + 1) * factorial(3 * n + 2)
    q, rem = divmod(num, den)
    assert rem == 0
    return q


def l_equation_residual(l: SeriesLX, r: SeriesLX) -> SeriesLX:
    """L - ((L - x L1)/x + R), coefficient-wise."""
    l1 = l.x_slice(1)
    inner = SeriesLX(tuple(pshift(psub(p, (0, c)), -1) for p, c in zip(l.by_z_degree, l1)))
    return l - (inner + r)


def phi_series(order: int) -> SeriesLX:
    _, r = solve_series(order)
    return r - constant((0, 1), order)


def phi_equation_residual(phi: SeriesLX) -> SeriesLX:
    """Phi - x^2 z (1 + Phi/x) (1 + (Phi(z,x) - Phi(z,1))/(x-1))."""
    order = phi.order
    one = constant((1,), order)
    phi_over_x = phi.map(lambda p: pshift(p, -1))
    dq = phi.map(difference_quotient)
    rhs = ((one + phi_over_x) * (one + dq)).map(lambda p: pshift(p, 2)).times_z()
    return phi - rhs


def focused_count_oracle(n: int, limit: int = FOCUSED_ORACLE_LIMIT) -> int:
    """Count pairs of size-n shapes whose sequent has a focused derivation."""
    if n > limit:
        raise LimitExceeded(f"n={n} exceeds the focused-count limit {limit}")
    elems = shapes(n)
    return sum(1 for a in elems for b in elems if decide_focused(Sequent((a,), b)) is not None)


def count_table(upto: int, brute_limit: int = FOCUSED_ORACLE_LIMIT) -> list:
    """Rows of series / closed formula / brute-force counts for 0..upto."""
    series = interval_counts(upto)
    rows = []
    for n in range(upto + 1):
        closed = closed_formula(n)
        brute = count_intervals_bruteforce(n) if n <= brute_limit else None
        focused = focused_count_oracle(n) if n <= brute_limit else None
        ok = series[n] == closed and brute in (None, series[n]) and focused in (None, series[n])
        rows.append({"n": n, "series": series[n], "closed": closed,
                     "bruteforce": brute, "focused": focused, "match": ok})
    return rows


def triangle_json(order: int) -> str:
    """R's coefficients r[n][k] (z-degree n, context length k) as JSON."""
    _, r = solve_series(order)
    return json.dumps({"R": [list(p) for p in r.by_z_degree]})
