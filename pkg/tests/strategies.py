"""Shared hypothesis strategies for exact algebra objects."""

from fractions import Fraction

import hypothesis.strategies as st

from metalie.metabelian import LieContext
from metalie.poly import Poly, var_key
from metalie.sl2 import ModuleSpec

rationals = st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=3)
nonzero_rationals = rationals.filter(bool)


@st.composite
def monomials(draw, variables, max_degree=3, min_degree=0):
    degree = draw(st.integers(min_degree, max_degree))
    exps = [0] * len(variables)
    for _ in range(degree):
        exps[draw(st.integers(0, len(variables) - 1))] += 1
    return tuple(sorted(((v, e) for v, e in zip(variables, exps) if e),
                        key=lambda item: var_key(item[0])))


@st.composite
def polys(draw, variables=("x1", "x2", "x3"), max_degree=3, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials(variables, max_degree), rationals),
                          max_size=max_terms))
    acc = Poly.zero()
    for m, c in terms:
        acc = acc + Poly.monomial(m, c)
    return acc


@st.composite
def homogeneous_polys(draw, variables=("x1", "x2", "x3"), degree=2, max_terms=4):
    terms = draw(st.lists(
        st.tuples(monomials(variables, max_degree=degree, min_degree=degree), rationals),
        min_size=1, max_size=max_terms))
    acc = Poly.zero()
    for m, c in terms:
        acc = acc + Poly.monomial(m, c)
    return acc


@st.composite
def envelope_basis_elements(draw, dim=3, max_y_degree=3):
    """Monomial basis element of the Poisson envelope: Y^q or a_i * Y^q."""
    ctx = LieContext(dim)
    exps = [draw(st.integers(0, max_y_degree)) for _ in range(dim)]
    a_index = draw(st.one_of(st.none(), st.integers(1, dim)))
    return ctx.monomial_element(a_index, exps)


@st.composite
def envelope_elements(draw, dim=3, max_y_degree=3, max_terms=3):
    ctx = LieContext(dim)
    acc = ctx.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        acc = acc + draw(rationals) * draw(envelope_basis_elements(dim, max_y_degree))
    return acc


@st.composite
def commutator_combinations(draw, dim=3, max_word_length=4, max_terms=3):
    """Random rational combination of normal-form basis words."""
    from metalie.metabelian import words_of_degree

    pool = []
    for n in range(2, max_word_length + 1):
        pool.extend(words_of_degree(dim, n))
    picks = draw(st.lists(st.tuples(st.sampled_from(pool), rationals),
                          min_size=0, max_size=max_terms))
    return picks


@st.composite
def module_specs(draw, max_blocks=3, max_k=3):
    blocks = draw(st.lists(st.integers(0, max_k), min_size=1, max_size=max_blocks))
    return ModuleSpec(tuple(blocks))
