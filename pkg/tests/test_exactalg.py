from fractions import Fraction

import pytest

from almost_rigid.errors import DivisionByZero, MathError, ParseError, SpecError
from almost_rigid.exactalg import (
    PolyRing,
    cyclotomic_context,
    cyclotomic_polynomial,
    euler_phi,
    exact_divide,
    exponent_gcd,
    format_poly,
    monic_divide,
    parse_poly,
    parse_scalar,
    partial_derivative,
    scalar_order,
    substitute,
)

# reference values computed with sympy (tests/oracles/sympy_oracle.py)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)
    assert len(cyclotomic_polynomial(70)) - 1 == 24 == euler_phi(70)


def test_invalid_conductor():
    with pytest.raises(SpecError, match="invalid conductor"):
        cyclotomic_polynomial(0)


def test_field_inverse_matches_reference(ctx12):
    z = ctx12.zeta
    inv = (z + 1).inverse()
    assert inv.coeffs == (0, 0, 1, -1)
    assert (z * z + 2).inverse().coeffs == (Fraction(3, 7), 0, Fraction(-1, 7), 0)
    assert z ** 7 == -z


def test_pentagonal_power():
    c5 = cyclotomic_context(5)
    assert ((c5.zeta + 1) ** 5).coeffs == (-3, 0, 5, 5)


def test_division_by_zero(ctx12):
    with pytest.raises(DivisionByZero, match="division by zero"):
        ctx12.zero.inverse()


def test_rational_field():
    c1 = cyclotomic_context(1)
    assert c1.rational(Fraction(2, 3)) + c1.rational(Fraction(1, 6)) == c1.rational(Fraction(5, 6))


def test_orders(ctx12):
    z = ctx12.zeta
    assert scalar_order(z) == 12
    assert scalar_order(-ctx12.one) == 2
    assert scalar_order(ctx12.coerce(2)) is None
    c6 = cyclotomic_context(6)
    assert (-c6.zeta).multiplicative_order() == 3


def test_primitive_roots_odd_conductor():
    c35 = cyclotomic_context(35)
    assert c35.primitive_root(70).multiplicative_order() == 70
    with pytest.raises(MathError):
        c35.primitive_root(4)


def test_context_mismatch():
    with pytest.raises(SpecError, match="context mismatch"):
        cyclotomic_context(12).zeta + cyclotomic_context(5).zeta


def test_scalar_text(ctx12):
    z = ctx12.zeta
    assert (z ** 3 - z).to_text() == "zeta^3 - zeta"
    assert ctx12.coerce(Fraction(-1, 4)).to_text() == "-1/4"


@pytest.fixture()
def ring(ctx12):
    return PolyRing(ctx12, ("x", "y2", "y1"), {"x"})


def test_print_order(ctx12):
    R = PolyRing(ctx12, ("x", "y1", "y2"), {"x"})
    f = parse_poly("x^2 - 1 + 2*y1 + y2", R)
    assert format_poly(f) == "y2 + 2*y1 + x^2 - 1"


def test_coefficient_formats(ctx12):
    R = PolyRing(ctx12, ("x", "y1"), {"x"})
    assert format_poly(parse_poly("1/4*x", R)) == "1/4*x"
    assert format_poly(parse_poly("-x", R)) == "-x"
    assert format_poly(parse_poly("zeta^2*x", R)) == "zeta^2*x"
    assert format_poly(parse_poly("(zeta+1)*x", R)) == "(zeta + 1)*x"
    assert format_poly(parse_poly("(1-zeta)*x", R)) == "-(zeta - 1)*x"
    assert format_poly(parse_poly("x^-2*y1^2", R)) == "x^-2*y1^2"


@pytest.mark.parametrize(
    "text, message",
    [
        ("y1 +", "end of input"),
        ("y1^-1", "negative exponent on a non-Laurent expression"),
        ("(x+1)^-1", "negative exponent on a non-Laurent expression"),
        ("1/0", "zero denominator"),
        ("foo", "unknown variable 'foo'"),
        ("(x + 1", "expected"),
        ("x $ 1", "unexpected character"),
        ("", "empty expression"),
    ],
)
def test_parse_errors(ring, text, message):
    with pytest.raises(ParseError, match=message.replace("(", r"\(").replace("^", r"\^")):
        parse_poly(text, ring)


def test_parse_laurent_and_parenthesised_exponent(ring):
    f = parse_poly("x^(-2)*y1 + x^-1", ring)
    assert f.valuation("x") == -2
    assert parse_poly("x^-1", ring) * parse_poly("x", ring) == ring.one


def test_parse_scalar(ctx12):
    assert parse_scalar("-zeta^2", ctx12) == -ctx12.zeta ** 2
    with pytest.raises(ParseError):
        parse_scalar("x", ctx12)


def test_substitute_and_derivative(ring):
    f = parse_poly("y1^2*x^-1 + 3*y2", ring)
    img = {"y1": parse_poly("y1 + x", ring), "x": parse_poly("2*x", ring)}
    g = substitute(f, img)
    assert g == parse_poly("1/2*x^-1*y1^2 + y1 + 1/2*x + 3*y2", ring)
    assert partial_derivative(f, "x") == parse_poly("-x^-2*y1^2", ring)


def test_substitute_needs_unit_for_negative_power(ring):
    f = parse_poly("x^-1", ring)
    with pytest.raises(MathError, match="non-invertible image"):
        substitute(f, {"x": parse_poly("x + 1", ring)})


def test_division(ring):
    f = parse_poly("(y1 + x)*(y1^2 - x*y2)", ring)
    g = parse_poly("y1 + x", ring)
    assert exact_divide(f, g) == parse_poly("y1^2 - x*y2", ring)
    assert exact_divide(f + 1, g) is None
    q, r = monic_divide(parse_poly("y1^3 + 1", ring), parse_poly("y1 + 1", ring), "y1")
    assert r.is_zero() and q == parse_poly("y1^2 - y1 + 1", ring)
    with pytest.raises(MathError, match="not monic"):
        monic_divide(f, parse_poly("2*y1", ring), "y1")


def test_exponent_gcd():
    assert exponent_gcd([4, 6]) == 2
    assert exponent_gcd([]) == 0
    assert exponent_gcd([90, 110]) == 10
