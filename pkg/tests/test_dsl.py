from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from superkit.cli import dsl
from superkit.cli.interp import EvaluationError, SemanticError, run_model
from superkit.vectorfield import SuperVectorField
from superkit.algebra import ODD

MODELS = ["n1.sk", "n2.sk", "n1_perturbed.sk"]


def _bundled(name):
    return resources.files("superkit.cli").joinpath("models", name).read_text()


def test_parse_vector_field_declaration():
    prog = dsl.parse_model("coord t: even; coord theta: odd; vf Q = d/d(theta) + (1/4)*theta*d/d(t);")
    assert [type(s).__name__ for s in prog.stmts] == ["Decl", "Decl", "VfDecl"]
    interp = run_model("coord t: even; coord theta: odd; vf Q = d/d(theta) + (1/4)*theta*d/d(t);")
    Q = interp.env["Q"]
    assert isinstance(Q, SuperVectorField) and Q.parity == ODD


def test_parse_bracket_check():
    (stmt,) = dsl.parse_model("check bracket(Q,Q) == (1/2)*P;").stmts
    assert isinstance(stmt, dsl.Check) and stmt.op == "=="
    assert stmt.lhs == dsl.Call("bracket", [dsl.Name("Q"), dsl.Name("Q")])
    assert stmt.rhs == dsl.BinOp("*", dsl.BinOp("/", dsl.Num(Fraction(1)), dsl.Num(Fraction(2))),
                                 dsl.Name("P"))


def test_parity_mismatch_is_semantic_error():
    with pytest.raises(SemanticError) as info:
        run_model("coord t: even; coord theta: odd; vf Q = theta + t;")
    assert "parity" in str(info.value)
    assert info.value.line == 1


def test_undeclared_symbol():
    with pytest.raises(SemanticError) as info:
        run_model("coord t: even;\nvf P = d/d(s);")
    assert info.value.line == 2 and "undeclared" in str(info.value)


@pytest.mark.parametrize("text,line,col,expected", [
    ("coord t even;", 1, 9, ":"),
    ("coord t: even\ncoord s: odd;", 2, 1, ";"),
    ("check 1 +;", 1, 10, "("),
    ("vf P = 2^x;", 1, 10, "integer"),
])
def test_syntax_errors_have_positions(text, line, col, expected):
    with pytest.raises(dsl.ParseError) as info:
        dsl.parse_model(text)
    err = info.value
    assert (err.line, err.col) == (line, col)
    assert expected in err.expected


def test_unexpected_character():
    with pytest.raises(dsl.ParseError) as info:
        dsl.parse_model("coord t: even;\n  @")
    assert (info.value.line, info.value.col) == (2, 3)


@pytest.mark.parametrize("name", MODELS)
def test_round_trip_fixed_point(name):
    once = dsl.pretty(dsl.parse_model(_bundled(name)))
    assert dsl.pretty(dsl.parse_model(once)) == once
    assert dsl.parse_model(once) == dsl.parse_model(_bundled(name))


_names = st.sampled_from(["x", "theta", "q'", "eps1"])
_exprs = st.recursive(
    st.one_of(_names.map(dsl.Name), st.integers(0, 9).map(lambda n: dsl.Num(Fraction(n))),
              _names.map(lambda n: dsl.Deriv(n.rstrip("'")))),
    lambda sub: st.one_of(
        st.tuples(st.sampled_from("+-*/"), sub, sub).map(lambda t: dsl.BinOp(*t)),
        sub.map(dsl.Neg),
        st.tuples(sub, st.integers(1, 3)).map(lambda t: dsl.Pow(*t)),
        st.lists(sub, min_size=1, max_size=3).map(lambda a: dsl.Call("f", a)),
        sub.map(lambda b: dsl.Integrate(["t", "theta"], b)),
    ),
    max_leaves=8,
)


@given(_exprs)
def test_pretty_parse_round_trip_on_random_ast(expr):
    text = f"check {dsl.pretty(expr)} == 0;"
    (stmt,) = dsl.parse_model(text).stmts
    assert dsl.pretty(stmt.lhs) == dsl.pretty(expr)
    again = dsl.parse_model(dsl.pretty(dsl.parse_model(text)))
    assert again == dsl.parse_model(text)


def test_bundled_models_pass():
    for name in ("n1.sk", "n2.sk"):
        result = run_model(_bundled(name), name)
        assert result.checks and all(c.passed for c in result.checks), \
            [c.label for c in result.checks if not c.passed]


def test_perturbed_model_fails():
    result = run_model(_bundled("n1_perturbed.sk"))
    assert not all(c.passed for c in result.checks)


def test_check_errors_are_reported_not_raised():
    text = "coord t: even; coord theta: odd; check map(theta -> 0*theta) ber_eq 1;"
    (c,) = run_model(text).checks
    assert not c.passed and "SingularBlock" in c.error


def test_division_by_odd_is_semantic_error():
    with pytest.raises(SemanticError):
        run_model("coord t: even; coord theta: odd; check 1/theta == 0;")
