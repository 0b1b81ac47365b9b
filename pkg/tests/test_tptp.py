import pytest

from eqimp.terms import Const, Op, Var, parse_equation
from eqimp.tptp import GroundDiseq, export_pair, problem_filename, skolemize

# frozen reference output for the commutativity-implies-associativity problem
GOLDEN = (
    "cnf(lhs, axiom, m(X, Y) = m(Y, X)).\n"
    "cnf(rhs, negated_conjecture, m(a, m(b, c)) != m(m(a, b), c)).\n"
)


def test_skolemize_grounds_each_variable():
    diseq = skolemize(parse_equation("x*y=y*x"))
    assert diseq == GroundDiseq(Op(Const(0), Const(1)), Op(Const(1), Const(0)))


def test_skolemize_is_ground_even_when_nested():
    diseq = skolemize(parse_equation("x*(y*z)=(x*y)*z"))
    assert diseq.left == Op(Const(0), Op(Const(1), Const(2)))
    assert diseq.right == Op(Op(Const(0), Const(1)), Const(2))


def test_export_pair_golden_bytes():
    text = export_pair(parse_equation("x*y=y*x"), parse_equation("x*(y*z)=(x*y)*z"))
    assert text == GOLDEN
    assert text.encode() == GOLDEN.encode()


def test_export_pair_two_lines_each_terminated():
    text = export_pair(parse_equation("x*x=x"), parse_equation("x=x"))
    lines = text.split("\n")
    assert len(lines) == 3 and lines[2] == ""
    assert lines[0] == "cnf(lhs, axiom, m(X, X) = X)."
    assert lines[1] == "cnf(rhs, negated_conjecture, a != a)."


def test_export_pair_variable_alphabet():
    text = export_pair(parse_equation("x*(y*(z*(w*(u*v))))=x"), parse_equation("x=y"))
    assert "m(X, m(Y, m(Z, m(W, m(U, V)))))" in text
    assert "a != b" in text


def test_export_pair_rejects_seven_variables():
    wide = parse_equation("x*(y*(z*(w*(u*(v*v6)))))=x")
    with pytest.raises(ValueError, match="alphabet"):
        export_pair(wide, parse_equation("x=x"))
    with pytest.raises(ValueError, match="alphabet"):
        export_pair(parse_equation("x=x"), wide)


def test_problem_filename():
    assert problem_filename(12, 345) == "p12_345.p"
