import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netlimit.errors import ParseError, UnknownFunction
from netlimit.expr import (
    BUILTINS,
    Binary,
    Call,
    Number,
    Unary,
    Var,
    compile_expr,
    evaluate,
    parse,
    to_text,
)


def value(text, x=0.0):
    return evaluate(parse(text), x)


class TestParse:
    def test_affine(self):
        assert parse("2*x+1") == Binary("+", Binary("*", Number(2.0), Var("x")), Number(1.0))

    def test_call(self):
        assert parse("sin(1/x)") == Call("sin", Binary("/", Number(1.0), Var("x")))

    def test_constants_become_numbers(self):
        assert parse("pi") == Number(math.pi)
        assert parse("e") == Number(math.e)

    def test_sequence_variable(self):
        assert parse("(1+1/n)^n") == Binary("^", Binary("+", Number(1.0), Binary("/", Number(1.0), Var("n"))),
                                            Var("n"))

    def test_scientific_literals(self):
        assert parse("1e-3") == Number(1e-3)
        assert parse("2.5E2") == Number(250.0)
        assert parse(".5") == Number(0.5)

    def test_whitespace_is_ignored(self):
        assert parse("  2 *  x\t+ 1 ") == parse("2*x+1")


class TestPrecedence:
    @pytest.mark.parametrize("text, expected", [
        ("2+3*4", 14.0),
        ("2^3^2", 512.0),
        ("(2^3)^2", 64.0),
        ("2*3^2", 18.0),
        ("-2^2", -4.0),
        ("2^-1", 0.5),
        ("8/4/2", 1.0),
        ("8-4-2", 2.0),
        ("--3", 3.0),
        ("2*-3", -6.0),
        ("-3+5", 2.0),
        ("(1+2)*(3+4)", 21.0),
    ])
    def test_exact(self, text, expected):
        assert value(text) == expected

    def test_power_is_right_associative(self):
        assert parse("2^3^2") == Binary("^", Number(2.0), Binary("^", Number(3.0), Number(2.0)))

    def test_unary_minus_binds_looser_than_power(self):
        assert parse("-x^2") == Unary("-", Binary("^", Var("x"), Number(2.0)))


class TestParseErrors:
    @pytest.mark.parametrize("text, offset", [
        ("1/(x", 4),
        ("", 0),
        ("2+", 2),
        ("2*)", 2),
        ("sin x", 4),
        ("x $ 1", 2),
        ("foo(x)", 0),
        ("(x))", 3),
        ("2 3", 2),
        ("sin(x", 5),
        ("x^", 2),
    ])
    def test_offset(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == offset

    def test_expected_token_named(self):
        with pytest.raises(ParseError) as info:
            parse("1/(x")
        assert ")" in info.value.expected

    def test_unknown_function_at_eval(self):
        with pytest.raises(UnknownFunction):
            evaluate(Call("erf", Var("x")), 1.0)


class TestEvaluate:
    def test_affine(self):
        assert value("2*x+1", 3.0) == 7.0

    def test_sin_reciprocal(self):
        assert value("sin(1/x)", 2 / math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_log_of_negative_is_nan(self):
        assert math.isnan(value("ln(x)", -1.0))

    def test_negative_base_fractional_power_nonfinite(self):
        assert not math.isfinite(value("x^0.5", -4.0))

    def test_division_by_zero_is_inf(self):
        assert value("1/x", 0.0) == math.inf

    def test_builtins_match_numpy(self):
        for name, fn in BUILTINS.items():
            assert value(f"{name}(x)", 0.7) == float(fn(0.7))

    def test_vector_matches_scalar(self):
        ast = parse("x^2 - 3*sin(x) + 1")
        xs = np.linspace(-2, 2, 17)
        vec = evaluate(ast, xs)
        assert vec.tolist() == [evaluate(ast, float(x)) for x in xs]

    def test_constant_broadcasts_over_arrays(self):
        out = evaluate(parse("7"), np.zeros(5))
        assert out.shape == (5,) and (out == 7).all()

    def test_deterministic(self):
        ast = parse("exp(sin(x))/(1+x^2)")
        assert evaluate(ast, 0.3) == evaluate(ast, 0.3)

    def test_compile_expr(self):
        f = compile_expr("(x^2-1)/(x-1)")
        assert f(3.0) == 4.0
        assert f.ast == parse("(x^2-1)/(x-1)")


def _random_expression(rng: random.Random, depth: int) -> str:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["x", "n", "pi", "e", "2", "0.5", "3.25", "1e-3", "10"])
    kind = rng.randrange(4)
    if kind == 0:
        op = rng.choice(["+", "-", "*", "/", "^"])
        left, right = _random_expression(rng, depth - 1), _random_expression(rng, depth - 1)
        if rng.random() < 0.5:
            return f"({left}){op}({right})"
        return f"{left} {op} {right}"
    if kind == 1:
        return "-" + _random_expression(rng, depth - 1)
    if kind == 2:
        return f"{rng.choice(sorted(BUILTINS))}({_random_expression(rng, depth - 1)})"
    return f"({_random_expression(rng, depth - 1)})"


def _corpus(size: int = 50, seed: int = 7) -> list[str]:
    rng, out = random.Random(seed), []
    while len(out) < size:
        text = _random_expression(rng, 4)
        if len(text) > 6 and text not in out:
            out.append(text)
    return out


ROUNDTRIP_CORPUS = _corpus()


class TestRoundtrip:
    def test_corpus_is_fifty_distinct_expressions(self):
        assert len(set(ROUNDTRIP_CORPUS)) == 50

    @pytest.mark.parametrize("text", ROUNDTRIP_CORPUS)
    def test_parse_print_parse(self, text):
        ast = parse(text)
        assert parse(to_text(ast)) == ast


_leaves = st.one_of(
    st.floats(min_value=0, max_value=1e6, allow_nan=False).map(Number),
    st.sampled_from(["x", "n"]).map(Var),
)
_asts = st.recursive(
    _leaves,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from("+-*/^"), kids, kids).map(lambda t: Binary(*t)),
        kids.map(lambda k: Unary("-", k)),
        st.tuples(st.sampled_from(sorted(BUILTINS)), kids).map(lambda t: Call(*t)),
    ),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(_asts)
def test_printed_ast_reparses_to_itself(ast):
    assert parse(to_text(ast)) == ast
