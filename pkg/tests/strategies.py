"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from tamari_calculus.syntax import Atom, Prod

ATOM_NAMES = ("p", "q", "r", "s", "t")

atoms = st.sampled_from(ATOM_NAMES).map(Atom)
formulas = st.recursive(atoms, lambda inner: st.builds(Prod, inner, inner), max_leaves=8)
contexts = st.lists(formulas, min_size=0, max_size=4).map(tuple)
nonempty_contexts = st.lists(formulas, min_size=1, max_size=4).map(tuple)
