import itertools
import json
from collections import defaultdict
from functools import lru_cache

import pytest

from tamari_calculus import calculus as calc
from tamari_calculus import lambda_terms as lam
from tamari_calculus.counting import closed_formula
from tamari_calculus.lambda_terms import Abs, App, Var
from tamari_calculus.syntax import Atom, ParseError, Sequent, parse_formula, shape
from tamari_calculus.tamari import build_poset, leq_bruteforce, shapes

P = lam.parse_term
F = parse_formula
CROSSING_TERM = r"\x.\y.\z.\w.z(\u.w(u))(y(x))"


def closed_planar(n, **kw):
    return lam.enumerate_terms(n, closed=True, planar=True, indecomposable=True, **kw)


# ---------------------------------------------------------------------------
# syntax

def test_parse_examples():
    assert P(r"\x.x(\y.y)") == Abs("x", App(Var("x"), Abs("y", Var("y"))))
    assert P(r"(\x.x)(\y.y)") == App(Abs("x", Var("x")), Abs("y", Var("y")))
    assert P("λx.x y z") == Abs("x", App(App(Var("x"), Var("y")), Var("z")))
    assert P(r"f \x.x") == App(Var("f"), Abs("x", Var("x")))


@pytest.mark.parametrize("text", [CROSSING_TERM, r"\x.\y.y(x)", r"(\x.x)(y)", "a(b)(c(d))", r"\x.(\y.y)(x)"])
def test_print_parse_round_trip(text):
    m = P(text)
    assert P(lam.print_term(m)) == m
    assert lam.term_from_json(json.loads(json.dumps(lam.term_to_json(m)))) == m


def test_print_style():
    assert lam.print_term(P(CROSSING_TERM)) == CROSSING_TERM
    assert lam.print_term(P(r"\x.x"), lam="λ") == "λx.x"


@pytest.mark.parametrize("text", [r"\x.\x.x", r"\x.x(\x.x)", r"(\x", r"\.x", "x)", ""])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        P(text)


def test_barendregt_hint():
    with pytest.raises(ParseError, match="rename"):
        P(r"(\x.x)(\x.x)")
    assert P(r"(\x.x)(\x.x)", check=False)


# ---------------------------------------------------------------------------
# predicates

@pytest.mark.parametrize("text, flags", [
    (r"\x.\y.y(x)", dict(linear=True, closed=True, indecomposable=True, planar=True, beta_normal=True)),
    (r"\x.x(\y.y)", dict(linear=True, closed=True, indecomposable=False)),
    (r"\x.x(x)", dict(linear=False)),
    (r"\x.\y.y", dict(linear=False)),
    (r"\x.(\y.y)(x)", dict(linear=True, closed=True, indecomposable=False, beta_normal=False)),
    (CROSSING_TERM, dict(linear=True, closed=True, indecomposable=True, planar=False, beta_normal=True)),
])
def test_analyze(text, flags):
    a = lam.analyze(P(text))
    for k, v in flags.items():
        assert getattr(a, k) is v, k


def test_prop_19_counterexample():
    m = P(r"\x.(\y.y)(x)")
    assert not lam.is_indecomposable(m)
    assert lam.diagram_checks(lam.binddiag(m)).indecomposable


# ---------------------------------------------------------------------------
# trees and diagrams

@pytest.mark.parametrize("text, tree", [
    (r"\x.\y.y(x)", "y*x"),
    (CROSSING_TERM, "(z*(w*u))*(y*x)"),
    ("x", "x"),
])
def test_apptree(text, tree):
    assert lam.apptree(P(text)) == F(tree)


@pytest.mark.parametrize("text, word", [
    (CROSSING_TERM, "x y z w z u w u y x"),
    (r"\x.\y.y(x)", "x y y x"),
    ("y(x)", "y x"),
])
def test_binddiag(text, word):
    assert lam.diagram_text(lam.binddiag(P(text))) == word


def test_binddiag_rejects_nonlinear():
    with pytest.raises(lam.TermError):
        lam.binddiag(P(r"\x.x(x)"))


@pytest.mark.parametrize("word, dow, planar, indec", [
    ("xyyx", True, True, True),
    ("xxyy", True, True, False),
    ("xyxy", True, False, True),
    ("yx", False, True, False),
])
def test_diagram_checks(word, dow, planar, indec):
    c = lam.diagram_checks(tuple(word))
    assert (c.double_occurrence, c.planar, c.indecomposable) == (dow, planar, indec)


def test_lr_rl_contrast():
    lr, rl = P(r"\x.\y.y(\z.z(x))"), P(r"\x.\y.x(\z.y(z))")
    assert lam.diagram_checks(lam.binddiag(lr)).planar
    assert not lam.diagram_checks(lam.binddiag_rl(lr)).planar
    assert not lam.diagram_checks(lam.binddiag(rl)).planar
    assert lam.diagram_checks(lam.binddiag_rl(rl)).planar


@pytest.mark.parametrize("n", range(5))
def test_chord_counts(n):
    for m in lam.enumerate_terms(n):
        word = lam.binddiag(m)
        k = len(lam.free_vars(m))
        assert len(word) == 2 * (n + 1) - k
        assert lam.full_and_free_chords(word) == (n + 1 - k, k)


@pytest.mark.parametrize("n", range(5))
def test_outer_chord_of_indecomposable_planar_words(n):
    for m in closed_planar(n):
        c = lam.diagram_checks(lam.binddiag(m))
        assert c.indecomposable and c.planar and c.outer_chord


@pytest.mark.parametrize("n", range(5))
def test_closed_indecomposable_has_indecomposable_diagram(n):
    for m in lam.enumerate_terms(n, closed=True, indecomposable=True):
        assert lam.diagram_checks(lam.binddiag(m)).indecomposable


# ---------------------------------------------------------------------------
# reduction

def test_beta_examples():
    assert lam.beta_step(P(r"(\x.x)(y)")) == [Var("y")]
    assert lam.beta_step(P(r"\x.\y.y(x)")) == []
    assert lam.beta_step(P(r"\z.z((\x.x)(y))")) == [P(r"\z.z(y)")]


def test_rho_examples():
    assert lam.rho_step(P(r"(\x.x)(y)")) == [P(r"\x.x(y)")]
    m = P(r"\a.(\x.\y.y(x))(a)")
    assert lam.rho_normalize(m) == P(r"\a.\x.\y.y(x)(a)")


def planar_linear_upto(n_max):
    for n in range(n_max + 1):
        yield from lam.enumerate_terms(n, planar=True)


def test_rho_preserves_invariants():
    for m in planar_linear_upto(4):
        for m2 in lam.rho_step(m):
            assert lam.apptree(m2) == lam.apptree(m)
            assert lam.binddiag(m2) == lam.binddiag(m)
            assert lam.is_planar(m2)


def test_beta_normal_iff_rho_normal():
    for m in planar_linear_upto(4):
        assert lam.is_beta_normal(m) == lam.is_rho_normal(m)


def test_complete_invariant():
    terms = list(planar_linear_upto(4))
    by_invariant, by_normal_form = defaultdict(set), defaultdict(set)
    for m in terms:
        by_invariant[lam.rho_invariant(m)].add(m)
        by_normal_form[lam.canonical(lam.rho_normalize(m))].add(m)
    assert set(map(frozenset, by_invariant.values())) == set(map(frozenset, by_normal_form.values()))
    for m, m2 in itertools.product(terms[:40], repeat=2):
        assert lam.rho_equiv(m, m2) == (lam.canonical(lam.rho_normalize(m)) == lam.canonical(lam.rho_normalize(m2)))


# ---------------------------------------------------------------------------
# binding forests, derivations, intervals

def test_binding_forest_examples():
    assert lam.binding_forest(P("y(x)")) == (Atom("y"), Atom("x"))
    assert lam.binding_tree(P(r"\x.\y.y(x)")) == F("y*x")
    with pytest.raises(lam.PlanarityError):
        lam.binding_tree(P(CROSSING_TERM))
    with pytest.raises(lam.TermError):
        lam.binding_tree(P("x"))


def test_term_to_derivation_example():
    d = lam.term_to_derivation(P(r"\y.y(x)"))
    assert d.conclusion == Sequent((F("y*x"),), F("y*x"))
    assert calc.check_derivation(d) and calc.is_focused(d)
    assert lam.term_to_derivation(P(r"\x.\y.y(x)")) == d


def test_derivation_to_term_examples():
    assert lam.derivation_to_term(calc.id_atm(Atom("p"))) == Var("p")
    d = calc.decide_focused(Sequent((F("y*x"),), F("y*x")))
    assert lam.alpha_eq(Abs("x", lam.derivation_to_term(d)), P(r"\x.\y.y(x)"))
    with pytest.raises(lam.TermError):
        lam.derivation_to_term(calc.identity(F("p*q")))


@pytest.mark.parametrize("n", range(5))
def test_derivation_term_round_trip(n):
    for a in shapes(n):
        for b in shapes(n):
            d = calc.decide_focused(Sequent((a,), b))
            if d is None:
                continue
            m = lam.derivation_to_term(d)
            d2 = lam.term_to_derivation(m)
            assert shape(d2.goal) == b and shape(d2.context[0]) == a
            assert lam.derivation_to_term(d2) == m


@pytest.mark.parametrize("n", range(6))
def test_binding_tree_below_apptree(n):
    for m in closed_planar(n):
        a, b = lam.term_to_interval(m)
        assert leq_bruteforce(a, b)
        d = lam.term_to_derivation(m)
        assert calc.check_derivation(d)
        assert calc.is_focused(d) == lam.is_beta_normal(m)


@pytest.mark.parametrize("n", range(1, 5))
def test_rho_steps_are_permutations(n):
    for m in closed_planar(n):
        d = lam.term_to_derivation(m)
        assert {lam.term_to_derivation(m2) for m2 in lam.rho_step(m)} == set(calc.permute_steps(d))


def test_interval_examples():
    assert lam.term_to_interval(P(r"\x.\y.y(x)")) == (F("y*x"), F("y*x"))
    assert lam.alpha_eq(lam.interval_to_term(F("y*x"), F("y*x")), P(r"\x.\y.y(x)"))
    with pytest.raises(lam.NotAnInterval):
        lam.interval_to_term(F("p*(q*r)"), F("(p*q)*r"))
    with pytest.raises(lam.NotAnInterval):
        lam.interval_to_term(F("p*q"), F("q*p"))


def test_size_three_gives_the_thirteen_intervals():
    terms = closed_planar(3, normal=True)
    assert len(terms) == 13
    assert {lam.interval_shapes(m) for m in terms} == set(build_poset(3).intervals())


def test_shared_apptree_terms_have_distinct_binding_trees():
    groups = defaultdict(list)
    for m in closed_planar(4, normal=True):
        groups[shape(lam.apptree(m))].append(m)
    b, terms = max(groups.items(), key=lambda kv: len(kv[1]))
    lows = [shape(lam.binding_tree(m)) for m in terms]
    assert len(set(lows)) == len(lows) > 1
    assert all(leq_bruteforce(a, b) for a in lows)


@pytest.mark.parametrize("n", range(6))
def test_bijection(n):
    terms = closed_planar(n, normal=True)
    assert len(terms) == closed_formula(n)
    image = [lam.interval_shapes(m) for m in terms]
    assert len(set(image)) == len(image)
    assert set(image) == set(build_poset(n).intervals())
    for m, (a, b) in zip(terms, image):
        assert lam.interval_to_term(a, b) == lam.canonical(m)


@pytest.mark.parametrize("n", range(1, 5))
def test_all_planar_terms_surject_onto_intervals(n):
    terms = closed_planar(n)
    image = [lam.interval_shapes(m) for m in terms]
    assert set(image) == set(build_poset(n).intervals())
    if n >= 2:
        assert len(set(image)) < len(image)


# ---------------------------------------------------------------------------
# enumeration

@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 3), (3, 13), (4, 68), (5, 399)])
def test_enumeration_counts(n, count):
    assert len(closed_planar(n, normal=True)) == count


@pytest.mark.parametrize("n, planar_closed, linear_closed", [
    (0, 1, 1), (1, 4, 5), (2, 32, 60), (3, 336, 1105)])
def test_planar_is_filter_of_linear(n, planar_closed, linear_closed):
    linear = lam.enumerate_terms(n, closed=True)
    planar = lam.enumerate_terms(n, closed=True, planar=True)
    assert len(linear) == linear_closed and len(planar) == planar_closed
    assert set(planar) == {m for m in linear if lam.is_planar(m)}


@pytest.mark.parametrize("n", range(4))
def test_enumeration_filters_agree(n):
    terms = lam.enumerate_terms(n)
    assert len(set(terms)) == len(terms)
    for m in terms:
        assert lam.is_linear(m) and lam.term_size(m) == n
        assert lam.canonical(m, rename_free=True) == m
    normal = lam.enumerate_terms(n, normal=True)
    assert set(normal) == {m for m in terms if lam.is_beta_normal(m)}
    indec = lam.enumerate_terms(n, indecomposable=True, planar=True)
    assert set(indec) == {m for m in terms if lam.is_planar(m) and lam.is_indecomposable(m)}


def test_enumeration_is_deterministic():
    assert closed_planar(4) == closed_planar(4)


def test_enumeration_limit():
    with pytest.raises(ValueError):
        lam.enumerate_terms(7)
    with pytest.raises(ValueError):
        lam.enumerate_terms(-1)


# ---------------------------------------------------------------------------
# unique name filling, checked by brute force over skeletons

HOLE = None


@lru_cache(maxsize=None)
def skeletons(n, abstractions):
    """Abstraction/application skeletons with unnamed variables."""
    out = []
    if n == 0 and abstractions == 0:
        out.append(HOLE)
    if abstractions:
        out += [("abs", s) for s in skeletons(n, abstractions - 1)]
    for k in range(n):
        for b in range(abstractions + 1):
            for f in skeletons(k, b):
                for a in skeletons(n - 1 - k, abstractions - b):
                    out.append(("app", f, a))
    return tuple(out)


def linear_fillings(sk):
    """Every linear naming: each binder used once, leftover uses free."""
    scopes, binders = [], []

    def walk(s, scope):
        if s is HOLE:
            scopes.append(scope)
        elif s[0] == "abs":
            binders.append(f"b{len(binders)}")
            walk(s[1], scope + (binders[-1],))
        else:
            walk(s[1], scope)
            walk(s[2], scope)

    walk(sk, ())
    for choice in itertools.product(*[sc + (None,) for sc in scopes]):
        used = [c for c in choice if c is not None]
        if len(used) != len(set(used)) or len(used) != len(binders):
            continue
        uses, names, frees = iter(choice), iter(binders), itertools.count()

        def build(s):
            if s is HOLE:
                c = next(uses)
                return Var(f"a{next(frees)}" if c is None else c)
            if s[0] == "abs":
                return Abs(next(names), build(s[1]))
            return App(build(s[1]), build(s[2]))

        yield build(sk)


@pytest.mark.parametrize("n", range(5))
def test_unique_planar_filling(n):
    fillable = 0
    for b in range(n + 2):
        for sk in skeletons(n, b):
            fills = list(linear_fillings(sk))
            lr = {lam.canonical(m) for m in fills if lam.is_planar(m)}
            assert len(lr) == (1 if fills else 0)
            if n <= 3:
                rl = {lam.canonical(m) for m in fills if lam.diagram_checks(lam.binddiag_rl(m)).planar}
                assert len(rl) == (1 if fills else 0)
            fillable += bool(fills)
    # the stack-discipline generator produces exactly one term per fillable skeleton
    assert fillable == len(lam.enumerate_terms(n, planar=True))
