"""Wreath envelope arithmetic, the Poisson axioms, and the word basis."""

import random
from fractions import Fraction

import pytest
from hypothesis import given

import strategies as strat
from metalie.metabelian import (
    CommutatorWord,
    ContextMismatch,
    LieContext,
    NotInCommutatorIdeal,
    WreathElement,
    eval_lie_expr,
    format_commutator_expansion,
    from_commutator_basis,
    lie_normal_form,
    parse_lie_expr,
    to_commutator_basis,
    words_of_degree,
    words_of_multidegree,
)
from metalie.poly import ParseError, Poly


def wreath(ctx, text):
    return parse_lie_expr(text).evaluate(ctx)


class TestGenerators:
    def test_generator_form(self):
        ctx = LieContext(2)
        assert ctx.generator(1) == WreathElement(ctx, Poly.parse("a1 + y1"))

    def test_index_validation(self):
        ctx = LieContext(3)
        with pytest.raises(IndexError):
            ctx.generator(0)
        with pytest.raises(IndexError):
            ctx.generator(4)
        assert ctx.generator(3).poly == Poly.parse("a3 + y3")

    def test_context_mixing_rejected(self):
        u = LieContext(2).generator(1)
        v = LieContext(3).generator(1)
        with pytest.raises(ContextMismatch):
            u + v


class TestBracket:
    def test_basic_commutator(self):
        ctx = LieContext(2)
        value = ctx.generator(2).bracket(ctx.generator(1))
        assert value == WreathElement(ctx, Poly.parse("a2*y1 - a1*y2"))

    @given(u=strat.envelope_elements())
    def test_skew_symmetry(self, u):
        assert u.bracket(u).is_zero()

    def test_metabelian_identity(self):
        ctx = LieContext(3)
        u = wreath(ctx, "[x2,x1]")
        v = wreath(ctx, "[x3,x1]")
        assert u.bracket(v).is_zero()

    @given(u1=strat.envelope_basis_elements(), u2=strat.envelope_basis_elements(),
           u3=strat.envelope_basis_elements())
    def test_jacobi_identity(self, u1, u2, u3):
        total = (u1.bracket(u2).bracket(u3)
                 + u2.bracket(u3).bracket(u1)
                 + u3.bracket(u1).bracket(u2))
        assert total.is_zero()

    @given(u1=strat.envelope_basis_elements(), u2=strat.envelope_basis_elements(),
           u3=strat.envelope_basis_elements())
    def test_leibniz_rule(self, u1, u2, u3):
        lhs = u1.bracket(u2 * u3)
        rhs = u1.bracket(u2) * u3 + u2 * u1.bracket(u3)
        assert lhs == rhs

    @given(u=strat.envelope_elements(), v=strat.envelope_elements(),
           w=strat.envelope_elements())
    def test_bilinearity(self, u, v, w):
        assert (u + v).bracket(w) == u.bracket(w) + v.bracket(w)

    def test_commutator_ideal_is_abelian(self):
        ctx = LieContext(4)
        u = wreath(ctx, "[x2,x1].(x3*x4)")
        v = wreath(ctx, "[x4,x3,x3]")
        assert u.bracket(v).is_zero()

    @given(picks1=strat.commutator_combinations(), picks2=strat.commutator_combinations())
    def test_metabelian_law_on_random_ideal_elements(self, picks1, picks2):
        ctx = LieContext(3)
        u = from_commutator_basis(ctx, [(c, w) for w, c in picks1])
        v = from_commutator_basis(ctx, [(c, w) for w, c in picks2])
        assert u.bracket(v).is_zero()


class TestAdAction:
    def test_single_step(self):
        ctx = LieContext(3)
        u = wreath(ctx, "[x2,x1]")
        expected = WreathElement(ctx, Poly.parse("(a2*y1 - a1*y2)*y3"))
        assert u.ad_action(Poly.variable("x3")) == expected

    def test_identity_action(self):
        ctx = LieContext(2)
        u = wreath(ctx, "[x2,x1]")
        assert u.ad_action(Poly.one()) == u

    def test_module_axiom(self):
        ctx = LieContext(2)
        u = wreath(ctx, "[x2,x1]")
        x1 = Poly.variable("x1")
        assert u.ad_action(x1).ad_action(x1) == u.ad_action(x1 ** 2)

    def test_requires_commutator_ideal(self):
        ctx = LieContext(2)
        with pytest.raises(NotInCommutatorIdeal):
            ctx.generator(1).ad_action(Poly.variable("x2"))

    def test_permuted_tail_is_equal(self):
        rng = random.Random(7)
        ctx = LieContext(4)
        for _ in range(25):
            length = rng.randint(3, 6)
            j2 = rng.randint(1, 3)
            j1 = rng.randint(j2 + 1, 4)
            indices = [j1, j2] + [rng.randint(1, 4) for _ in range(length - 2)]
            word = CommutatorWord(tuple(indices))
            tail = indices[2:]
            rng.shuffle(tail)
            permuted = CommutatorWord(tuple(indices[:2] + tail))
            assert word.to_wreath(ctx) == permuted.to_wreath(ctx)


class TestMembership:
    def test_image_of_bracket(self):
        ctx = LieContext(2)
        u = WreathElement(ctx, Poly.parse("a1*y2 - a2*y1"))
        assert u.is_in_commutator_ideal()

    def test_bare_a_is_not_lie(self):
        ctx = LieContext(2)
        u = WreathElement(ctx, Poly.parse("a1"))
        assert not u.is_in_commutator_ideal()
        assert not u.is_lie_element()

    def test_zero_is_in_ideal(self):
        assert LieContext(2).zero().is_in_commutator_ideal()

    def test_generator_is_lie_but_not_in_ideal(self):
        ctx = LieContext(2)
        x1 = ctx.generator(1)
        assert x1.is_lie_element()
        assert not x1.is_in_commutator_ideal()


class TestWordBasis:
    def test_single_word_multidegree(self):
        words = words_of_multidegree((1, 1))
        assert [w.indices for w in words] == [(2, 1)]
        words = words_of_multidegree((2, 1))
        assert [w.indices for w in words] == [(2, 1, 1)]

    def test_count_is_support_minus_one(self):
        assert len(words_of_multidegree((1, 1, 1))) == 2
        assert len(words_of_multidegree((3, 0, 0))) == 0
        assert len(words_of_multidegree((2, 2, 1, 1))) == 3

    def test_normal_form_flags(self):
        assert CommutatorWord((2, 1, 1)).is_normal()
        assert not CommutatorWord((1, 2)).is_normal()
        assert not CommutatorWord((4, 3, 1)).is_normal()
        with pytest.raises(ValueError):
            CommutatorWord((2,))

    def test_words_of_degree_are_independent(self):
        ctx = LieContext(3)
        for n in (2, 3, 4):
            words = words_of_degree(3, n)
            images = [w.to_wreath(ctx) for w in words]
            from metalie.linalg import rank
            assert rank([u.coordinates() for u in images]) == len(words)

    def test_basis_round_trip_simple(self):
        ctx = LieContext(2)
        u = wreath(ctx, "[x2,x1]")
        assert to_commutator_basis(u) == [(Fraction(1), CommutatorWord((2, 1)))]
        u = wreath(ctx, "[x2,x1,x1]")
        assert to_commutator_basis(u) == [(Fraction(1), CommutatorWord((2, 1, 1)))]

    @given(picks=strat.commutator_combinations())
    def test_basis_round_trip_random(self, picks):
        ctx = LieContext(3)
        combined = {}
        for word, coeff in picks:
            combined[word] = combined.get(word, Fraction(0)) + coeff
        combined = {w: c for w, c in combined.items() if c}
        u = from_commutator_basis(ctx, [(c, w) for w, c in combined.items()])
        recovered = dict()
        for c, w in to_commutator_basis(u):
            recovered[w] = c
        assert recovered == combined

    def test_non_member_rejected(self):
        ctx = LieContext(2)
        with pytest.raises(NotInCommutatorIdeal):
            to_commutator_basis(WreathElement(ctx, Poly.parse("a1*y1")))

    def test_pi_image_expansion(self):
        # pi(x4, x2^2 - x1 x3) in normal form; the left-normed rewrite of
        # 2[x4,x2,x2] - [x4,x1,x3] - [x4,x3,x1]
        from metalie.invariants import pi

        ctx = LieContext(4)
        value = pi(Poly.variable("x4"), Poly.parse("x2^2 - x1*x3"), ctx)
        assert value == wreath(ctx, "2*[x4,x2,x2] - [x4,x1,x3] - [x4,x3,x1]")
        expansion = to_commutator_basis(value)
        assert format_commutator_expansion(expansion) == \
            "[x3,x1,x4] - 2[x4,x1,x3] + 2[x4,x2,x2]"


class TestLieExpressions:
    def test_eval_bracket(self):
        ctx = LieContext(2)
        assert eval_lie_expr(parse_lie_expr("[x2,x1]"), ctx) == \
            WreathElement(ctx, Poly.parse("a2*y1 - a1*y2"))

    def test_skew_cancellation(self):
        ctx = LieContext(2)
        assert wreath(ctx, "[x1,x2] + [x2,x1]").is_zero()

    def test_degree_two_invariant_of_paired_blocks(self):
        ctx = LieContext(6)
        u = wreath(ctx, "[x6,x1] - 2*[x5,x2] + [x4,x3]")
        v = wreath(ctx, "[x1,x6] - 2*[x2,x5] + [x3,x4]")
        assert u == -1 * v
        assert not u.is_zero()

    def test_unbound_generator(self):
        with pytest.raises(ContextMismatch):
            wreath(LieContext(2), "[x3,x1]")

    def test_nested_and_flat_brackets_agree(self):
        ctx = LieContext(3)
        assert wreath(ctx, "[[x2,x1],x3]") == wreath(ctx, "[x2,x1,x3]")

    def test_ad_action_grammar(self):
        ctx = LieContext(3)
        by_dot = wreath(ctx, "[x2,x1].(x3^2 - x1)")
        by_star = wreath(ctx, "[x2,x1]*x3^2 - [x2,x1]*x1")
        assert by_dot == by_star

    def test_scalar_grammar(self):
        ctx = LieContext(2)
        assert wreath(ctx, "3/2*[x2,x1]") == Fraction(3, 2) * wreath(ctx, "[x2,x1]")
        assert wreath(ctx, "2[x2,x1]") == 2 * wreath(ctx, "[x2,x1]")

    @pytest.mark.parametrize("text", ["[x1]", "[x1,", "x1+", "[x1,x2]]", "[y1,x2]"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_lie_expr(text)

    def test_normal_form_printer_round_trip(self):
        ctx = LieContext(4)
        u = wreath(ctx, "x3 + 2*[x4,x2,x2] - [x4,x1,x3]")
        text = lie_normal_form(u)
        assert wreath(ctx, text) == u
        assert lie_normal_form(wreath(ctx, text)) == text

    def test_normal_form_rejects_non_lie_elements(self):
        ctx = LieContext(2)
        with pytest.raises(NotInCommutatorIdeal):
            lie_normal_form(WreathElement(ctx, Poly.parse("a1")))
        with pytest.raises(NotInCommutatorIdeal):
            lie_normal_form(WreathElement(ctx, Poly.parse("y1^2")))

    def test_y_linear_view(self):
        ctx = LieContext(3)
        u = ctx.generator(2) - 3 * ctx.generator(3)
        assert u.y_linear == [0, 1, -3]
        with pytest.raises(ValueError):
            WreathElement(ctx, Poly.parse("y1*y2")).y_linear


class TestGrading:
    def test_multidegree_split(self):
        ctx = LieContext(2)
        u = wreath(ctx, "[x2,x1] + [x2,x1,x1]")
        comps = u.multidegree_components()
        assert set(comps) == {(1, 1), (2, 1)}

    @given(u=strat.envelope_elements(), v=strat.envelope_elements())
    def test_product_is_commutative_and_truncates_a(self, u, v):
        assert u * v == v * u
        for m in (u * v).poly.terms:
            a_deg = sum(e for name, e in m if name.startswith("a"))
            assert a_deg <= 1
