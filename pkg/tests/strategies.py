"""Hypothesis strategies for small linear systems."""

from hypothesis import strategies as st

from bisyz.core import Ambient, Polarization, enumerate_monomials, pure_powers
from bisyz.linsys import monomial_system, random_general_system

SHAPES = [(1, 1, 1, 1), (1, 1, 2, 1), (1, 1, 2, 2), (1, 1, 3, 1), (1, 2, 1, 1), (2, 1, 1, 1), (1, 1, 3, 2)]


@st.composite
def bpf_monomial_systems(draw, shapes=SHAPES, max_extra=4):
    m, n, a, b = draw(st.sampled_from(shapes))
    amb, L = Ambient(m, n), Polarization(a, b)
    pure = pure_powers(amb, L)
    rest = [u for u in enumerate_monomials(amb, (a, b)) if u not in pure]
    extra = draw(st.lists(st.sampled_from(rest), unique=True, max_size=min(max_extra, len(rest)))) if rest else []
    return monomial_system(amb, L, pure + extra)


@st.composite
def monomial_systems(draw, shapes=SHAPES, min_size=2, max_size=6):
    m, n, a, b = draw(st.sampled_from(shapes))
    amb, L = Ambient(m, n), Polarization(a, b)
    monos = enumerate_monomials(amb, (a, b))
    picked = draw(st.lists(st.sampled_from(monos), unique=True, min_size=min(min_size, len(monos)),
                           max_size=min(max_size, len(monos))))
    return monomial_system(amb, L, picked)


@st.composite
def general_systems(draw, shapes=((1, 1, 1, 1), (1, 1, 2, 1), (1, 2, 1, 1)), max_r=4):
    m, n, a, b = draw(st.sampled_from(shapes))
    amb, L = Ambient(m, n), Polarization(a, b)
    monos = enumerate_monomials(amb, (a, b))
    r = draw(st.integers(2, min(max_r, len(monos))))
    return random_general_system(amb, L, monos, r, seed=draw(st.integers(0, 10**6)))


twists = st.tuples(st.integers(0, 2), st.integers(0, 2))
