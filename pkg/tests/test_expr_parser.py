from fractions import Fraction

import pytest

from expr_parser import (
    CH, Num, Product, Sigma, Sum, Var, evaluate, parse, parse_and_evaluate, render, tokenize,
)
from modules.errors import EmptyWordError, ExprSyntaxError
from modules.free_sigma import NCPoly, ch_polynomial
from modules.sigma_ring import SigmaPoly, normalize_sigma
from tests.helpers import s, x

A, B = NCPoly.var(0), NCPoly.var(1)


# ─────────────────────────────────────────────────────────────────
# TOKENS / AST
# ─────────────────────────────────────────────────────────────────
def test_tokenize_keeps_positions():
    kinds = [(t.kind, t.pos) for t in tokenize("s2(ab) - x3")]
    assert kinds == [("SIGMA", 0), ("VAR", 3), ("VAR", 4), ("RPAREN", 5),
                     ("OP", 7), ("VAR", 9), ("END", 11)]


def test_parse_two_term_difference():
    ast = parse("s2(ab) - s2(a)s2(b)")
    assert len(ast.terms) == 2
    sign, product = ast.terms[1]
    assert sign == -1
    assert all(isinstance(f, Sigma) and f.index == 2 for f in product.factors)


def test_parse_leading_sign_and_fraction():
    ast = parse("-1/2ab")
    assert ast.terms[0][0] == -1
    first = ast.terms[0][1].factors[0]
    assert isinstance(first, Num) and first.value.denominator == 2


def test_parse_ch_and_indexed_variables():
    ast = parse("ch3(x0 + x12)")
    (_, product), = ast.terms
    ch, = product.factors
    assert isinstance(ch, CH) and ch.degree == 3
    assert ch.arg == Sum(((1, Product((Var(0),))), (1, Product((Var(12),)))))


def test_spaced_sigma_is_not_a_keyword():
    (_, product), = parse("s 2(ab)").terms
    assert isinstance(product.factors[0], Var)
    assert isinstance(product.factors[1], Num)


@pytest.mark.parametrize("signed, plain", [
    ("a + -b", "a - b"),
    ("2 - -a", "2 + a"),
    ("a - - - b", "a - b"),
    ("-a - +b", "-a - b"),
    ("(a + -b)c", "(a - b)c"),
    ("s1(a + -b)", "s1(a - b)"),
])
def test_each_term_takes_its_own_sign(signed, plain):
    assert parse(signed) == parse(plain)


def test_signed_term_evaluates_like_a_difference():
    assert parse_and_evaluate("2 - -a") == NCPoly.scalar(2) + A
    assert parse_and_evaluate("a + -b", 2) == A - B


def test_sign_without_a_term_still_fails():
    with pytest.raises(ExprSyntaxError) as info:
        parse("a + -")
    assert info.value.position == 5


# ─────────────────────────────────────────────────────────────────
# ERRORS
# ─────────────────────────────────────────────────────────────────
@pytest.mark.parametrize("text, position", [
    ("s0(a)", 0),
    ("ch0(a)", 0),
    ("a +", 3),
    ("a $ b", 2),
    ("s2(ab", 5),
    ("(a))", 3),
    ("", 0),
    ("1/0", 2),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.position == position


def test_error_pointer_marks_the_column():
    with pytest.raises(ExprSyntaxError) as info:
        parse("a $ b")
    assert info.value.pointer().splitlines()[1] == "    ^"


def test_sigma_of_sum_with_sigma_is_rejected():
    with pytest.raises(ExprSyntaxError) as info:
        parse_and_evaluate("s1(s1(a)b + a)", 2)
    assert info.value.position == 0


def test_evaluation_error_points_at_the_offending_sigma():
    with pytest.raises(ExprSyntaxError) as info:
        parse_and_evaluate("ab + 2s1(s1(a)b + a)", 2)
    assert info.value.position == 6
    assert info.value.pointer().splitlines() == ["  ab + 2s1(s1(a)b + a)", "        ^"]


def test_untruncated_sigma_of_scalar_needs_a_level():
    with pytest.raises(EmptyWordError):
        parse_and_evaluate("s1(1)")


# ─────────────────────────────────────────────────────────────────
# EVALUATION
# ─────────────────────────────────────────────────────────────────
def test_evaluate_products_and_sums():
    f = parse_and_evaluate("2ab - ba + 3")
    assert f == x("ab") * 2 - x("ba") + NCPoly.scalar(3)


def test_sigma_argument_is_rotated():
    assert parse_and_evaluate("s1(ba)").constant_term() == s(1, "ab")


def test_sigma_of_power_is_reduced():
    got = parse_and_evaluate("s1(abab)", 2).constant_term()
    assert got == normalize_sigma(1, "abab", 2)
    assert got == s(1, "ab") ** 2 - s(2, "ab") * 2


def test_sigma_above_level_vanishes():
    assert not parse_and_evaluate("s3(ab)", 2)


def test_sigma_of_scalars():
    assert parse_and_evaluate("s1(1)", 2).constant_term() == SigmaPoly.constant(2)
    assert parse_and_evaluate("s2(3)", 2).constant_term() == SigmaPoly.constant(9)
    assert parse_and_evaluate("s1(s1(a))", 2).constant_term() == s(1, "a") * 2


def test_sigma_of_scaled_word_is_homogeneous():
    got = parse_and_evaluate("s2(s1(a)b)", 2).constant_term()
    assert got == s(1, "a") ** 2 * s(2, "b")


def test_ch_matches_library_polynomial():
    assert parse_and_evaluate("ch2(a + b)", 2) == ch_polynomial(2, A + B, 2)


def test_ch_of_a_variable():
    got = parse_and_evaluate("ch2(a)", 2)
    expected = x("aa") - A * s(1, "a") + NCPoly.scalar(s(2, "a"))
    assert got == expected


def test_untruncated_ch_reduces_at_its_own_degree():
    got = parse_and_evaluate("ch2(aa)")
    indices = {g.index for _, c in got.items() for g in c.generators()}
    assert indices <= {1, 2}
    assert got == ch_polynomial(2, x("aa"), 2)
    assert got == parse_and_evaluate("ch2(aa)", 2)


def test_ch_inside_a_larger_expression_uses_its_degree():
    got = parse_and_evaluate("b + ch3(ab)")
    assert all(g.index <= 3 for _, c in got.items() for g in c.generators())
    assert got == NCPoly.var(1) + ch_polynomial(3, x("ab"), 3)


def test_evaluate_accepts_ast_nodes():
    assert evaluate(Num(Fraction(7))) == NCPoly.scalar(7)
    assert evaluate(Var(1)) == B


# ─────────────────────────────────────────────────────────────────
# RENDER
# ─────────────────────────────────────────────────────────────────
ROUND_TRIP_CORPUS = [
    "a",
    "-a",
    "7",
    "-1/5 + a",
    "ab - ba",
    "a + -b",
    "2 - -a",
    "-a - -b + +c",
    "a - - - b",
    "3/4ab - 1/2ba",
    "x0x1 + x12",
    "x3 4",
    "x30 2",
    "1/2a",
    "-ab + 3ba",
    "s 2(ab)",
    "c h2(a)",
    "s1(a)",
    "s2(ab)",
    "s1(ba) + -s1(ab)",
    "s1(abab)",
    "s2(aabb)",
    "s3(aab) - s1(a)s2(ab)",
    "s2(ab) - s2(a)s2(b)",
    "s2(2a)",
    "s1(a + b)",
    "s2(a - b)",
    "s2(-a + b)",
    "s1(s1(a)b)",
    "s2(s1(a)b)",
    "s1(a)2",
    "2s1(a)b",
    "s1(a)s1(b)ab",
    "as1(b)(a - b)",
    "a s1(b) - s1(b) a",
    "s2(ab)s1(c) - -s1(abc)",
    "(a + b)(a - b)",
    "((a))",
    "(a - -b)c",
    "-(a + b)",
    "2(a + 1/3b)a",
    "ch1(a)",
    "ch2(a)",
    "ch2(aa)",
    "ch2(a + b)",
    "ch2(a - b)",
    "ch2(ab + -ba)",
    "ch2(2a)b",
    "ch2(a)b - bch2(a)",
    "ch3(a)",
]


@pytest.mark.parametrize("text", ROUND_TRIP_CORPUS)
def test_render_reparses_to_the_same_ast(text):
    ast = parse(text)
    rendered = render(ast)
    assert parse(rendered) == ast
    assert render(parse(rendered)) == rendered


@pytest.mark.parametrize("text", ROUND_TRIP_CORPUS)
def test_rendered_text_evaluates_to_the_same_polynomial(text):
    assert parse_and_evaluate(render(parse(text)), 2) == parse_and_evaluate(text, 2)


def test_corpus_covers_fifty_distinct_expressions():
    assert len(set(ROUND_TRIP_CORPUS)) == 50
