"""Expression ring: parsing, canonicalization, calculus, evaluation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parasol.chart import Chart, ChartError
from parasol.symexpr import (
    DegenerateEvaluationError,
    DivisionByZeroExprError,
    Expr,
    NonLinearExpArgumentError,
    ParseError,
    UnknownCoordinateError,
    parse,
)

CHART = Chart.make(["x", "y", "z"])
CHART5 = Chart.make(["x", "y", "z", "t", "s"])


def P(source, chart=CHART):
    return parse(source, chart)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_exp_sugar_matches_exp_function():
    assert P("e^(2*z)") == P("exp(2*z)")


def test_parse_polynomial():
    assert P("1 - y^2") == Expr.one(CHART) - Expr.coordinate(CHART, "y") ** 2


def test_parse_cancels_common_factor():
    assert str(P("x/(x)")) == "1"


def test_parse_decimal_is_exact():
    assert P("0.5") == Expr.constant(CHART, Fraction(1, 2))
    assert P("2.25*x") == P("9/4*x")


def test_parse_negative_exponent():
    assert P("x^-2") == 1 / (Expr.coordinate(CHART, "x") ** 2)


def test_parse_rational_coefficient():
    e = P("3/2*x")
    assert e == Expr.constant(CHART, Fraction(3, 2)) * Expr.coordinate(CHART, "x")


def test_parse_unary_minus():
    assert P("-x + 1") == 1 - Expr.coordinate(CHART, "x")


def test_parse_exp_with_rational_coefficients():
    e = P("exp(1/2*x - 3*z)")
    assert e == Expr.exponential(CHART, [Fraction(1, 2), 0, Fraction(-3)])


def test_parse_syntax_error_carries_position():
    with pytest.raises(ParseError) as info:
        P("x + * y")
    assert info.value.position == 4


def test_parse_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier 'w'"):
        P("x + w")


def test_parse_nonlinear_exp_argument():
    with pytest.raises(NonLinearExpArgumentError):
        P("exp(x*y)")
    with pytest.raises(NonLinearExpArgumentError):
        P("exp(x + 1)")
    with pytest.raises(NonLinearExpArgumentError):
        P("exp(x^2)")


def test_parse_non_integer_exponent():
    with pytest.raises(ParseError, match="integer"):
        P("x^1.5")
    with pytest.raises(ParseError):
        P("x^y")


def test_parse_trailing_input():
    with pytest.raises(ParseError):
        P("x + 1) * 2")


def test_parse_division_by_zero():
    with pytest.raises(ParseError, match="division by zero"):
        P("1/(x - x)")


def test_reserved_coordinate_names_rejected():
    with pytest.raises(ChartError):
        Chart.make(["e", "y"])
    with pytest.raises(ChartError):
        Chart.make(["exp", "y"])


# ---------------------------------------------------------------------------
# arithmetic and canonical form
# ---------------------------------------------------------------------------


def test_exponential_atoms_merge():
    assert str(P("exp(z)*exp(-z)")) == "1"


def test_binomial_expansion_cancels():
    assert P("(x+y)^2 - (x^2 + 2*x*y + y^2)").is_zero()


def test_quotient_with_nontrivial_denominator():
    # denominator fixed by the 5-dimensional example metric: det g2 = 1 + y^2 - t^2
    e = 1 / parse("1 + y^2 - t^2", CHART5)
    assert e.den_string() == "y^2 - t^2 + 1"
    assert not e.denominator_is_one


def test_division_by_canonical_zero_raises():
    zero = P("exp(2*z)*exp(-2*z) - 1")
    with pytest.raises(DivisionByZeroExprError):
        P("x") / zero


def test_integer_power_negative_inverts():
    e = P("(1 + x)")
    assert e ** -2 == 1 / (e * e)


def test_denominator_is_monic_and_content_free():
    e = P("1/(2*x^2 + 2*x^3)")
    # leading coefficient normalized to 1, monomial content cancelled upward
    assert e.den_string() == "x^3 + x^2"
    assert str(e) == "(1/2)/(x^3 + x^2)"


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------


def test_differentiate_exponential():
    assert P("exp(2*z)").differentiate("z") == P("2*exp(2*z)")


def test_differentiate_monomial():
    assert P("y*x^2").differentiate("x") == P("2*x*y")


def test_differentiate_product_with_exponential():
    assert P("z*exp(2*z)").differentiate("z") == P("(2*z + 1)*exp(2*z)")


def test_differentiate_quotient_rule():
    e = 1 / P("1 + y^2")
    expected = P("-2*y") / (P("1 + y^2") ** 2)
    assert e.differentiate("y") == expected


def test_differentiate_unknown_coordinate():
    with pytest.raises(UnknownCoordinateError):
        P("x").differentiate("w")


def test_differentiate_is_linear_seeded():
    rng = random.Random(7)
    for _ in range(50):
        a = _random_expr(rng)
        b = _random_expr(rng)
        name = rng.choice(CHART.coordinates)
        lhs = (a + b).differentiate(name)
        rhs = a.differentiate(name) + b.differentiate(name)
        assert (lhs - rhs).is_zero(guard=False)


def test_product_rule_symbolic_100_seeded_pairs():
    rng = random.Random(42)
    for _ in range(100):
        a = _random_expr(rng)
        b = _random_expr(rng)
        name = rng.choice(CHART.coordinates)
        lhs = (a * b).differentiate(name)
        rhs = a.differentiate(name) * b + a * b.differentiate(name)
        assert (lhs - rhs).is_zero(guard=False)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def test_evaluate_exponential_at_origin():
    assert P("exp(2*z)").evaluate({"x": 0.0, "y": 0.0, "z": 0.0}) == 1.0


def test_evaluate_linear():
    assert P("x + 2*y").evaluate({"x": 1.0, "y": 2.0, "z": 0.0}) == 5.0


def test_evaluate_example_determinant_value():
    # det g2 = 1 + y^2 - t^2 evaluated at (y, t) = (0, 2)
    e = parse("1 + y^2 - t^2", CHART5)
    assert e.evaluate({"x": 0.0, "y": 0.0, "z": 0.0, "t": 2.0, "s": 0.0}) == -3.0


def test_evaluate_near_zero_denominator_raises():
    e = 1 / P("x")
    with pytest.raises(DegenerateEvaluationError):
        e.evaluate({"x": 0.0, "y": 0.0, "z": 0.0})


def test_evaluate_exact_rational():
    e = P("(1 - y^2)/(1 + y^2)")
    value = e.evaluate_exact([Fraction(0), Fraction(1, 2), Fraction(0)])
    assert value == Fraction(3, 5)


def test_as_rational_constant_sees_through_quotients():
    assert P("(x+1)/(x+1)").as_rational_constant() == 1
    assert P("x").as_rational_constant() is None


# ---------------------------------------------------------------------------
# zero testing and equality
# ---------------------------------------------------------------------------


def test_is_zero_on_atom_cancellation():
    assert P("exp(2*z)*exp(-2*z) - 1").is_zero()


def test_is_zero_false_on_difference():
    assert not P("x - y").is_zero()


def test_canonical_equality_is_numerically_sound():
    rng = random.Random(11)
    pairs = [
        (P("(x+y)^2"), P("x^2 + 2*x*y + y^2")),
        (P("exp(z)*exp(z)"), P("exp(2*z)")),
        (P("(1 - y^2)/(1 - y)") * P("1 - y"), P("1 - y^2")),
    ]
    for a, b in pairs:
        assert (a - b).is_zero()
        for _ in range(20):
            point = {c: rng.uniform(-1, 1) for c in CHART.coordinates}
            va, vb = a.evaluate(point), b.evaluate(point)
            assert abs(va - vb) <= 1e-9 * (1 + abs(va))


def test_evaluation_homomorphism_100_seeded_triples():
    rng = random.Random(42)
    checked = 0
    while checked < 100:
        a = _random_expr(rng)
        b = _random_expr(rng)
        point = {c: rng.uniform(-1, 1) for c in CHART.coordinates}
        try:
            va, vb = a.evaluate(point), b.evaluate(point)
            vsum = (a + b).evaluate(point)
            vprod = (a * b).evaluate(point)
        except DegenerateEvaluationError:
            continue
        scale = max(1.0, abs(va) + abs(vb))
        assert abs(vsum - (va + vb)) <= 1e-12 * scale
        assert abs(vprod - va * vb) <= 1e-12 * max(1.0, abs(va) * abs(vb))
        checked += 1


# ---------------------------------------------------------------------------
# printing round trip
# ---------------------------------------------------------------------------


def test_roundtrip_on_fixture_style_expressions():
    for source in (
        "exp(2*z)",
        "1 - y^2",
        "-y*z",
        "(1 - y^2)/(1 + y^2 - z^2)",
        "3/2*x^2*exp(-2*z) - 1/2",
        "exp(1/2*x - 3*z) + x*y*z",
    ):
        e = P(source)
        printed = str(e)
        reparsed = parse(printed, CHART)
        assert str(reparsed) == printed
        assert reparsed == e


def test_roundtrip_on_random_expressions():
    rng = random.Random(2024)
    for _ in range(60):
        e = _random_expr(rng)
        printed = str(e)
        reparsed = parse(printed, CHART)
        assert str(reparsed) == printed
        assert reparsed == e


@settings(derandomize=True, max_examples=60, deadline=None)
@given(
    coeffs=st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=3, max_size=3
    ),
    exponents=st.lists(st.integers(min_value=0, max_value=3), min_size=3, max_size=3),
)
def test_roundtrip_single_term_property(coeffs, exponents):
    term = Expr.constant(CHART, Fraction(7, 3))
    for name, k, lam in zip(CHART.coordinates, exponents, coeffs):
        term = term * Expr.coordinate(CHART, name) ** k
    term = term * Expr.exponential(CHART, coeffs)
    printed = str(term)
    assert parse(printed, CHART) == term


@settings(derandomize=True, max_examples=40, deadline=None)
@given(k=st.integers(min_value=0, max_value=5))
def test_integer_power_matches_repeated_multiplication(k):
    e = P("1 + x - 2*y + exp(z)")
    by_pow = e**k
    by_mul = Expr.one(CHART)
    for _ in range(k):
        by_mul = by_mul * e
    assert by_pow == by_mul


# ---------------------------------------------------------------------------
# seeded random expressions
# ---------------------------------------------------------------------------


def _random_poly(rng: random.Random) -> Expr:
    total = Expr.zero(CHART)
    for _ in range(rng.randint(1, 4)):
        term = Expr.constant(CHART, Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        for name in CHART.coordinates:
            power = rng.choice((0, 0, 0, 1, 1, 2))
            if power:
                term = term * Expr.coordinate(CHART, name) ** power
        if rng.random() < 0.4:
            term = term * Expr.exponential(
                CHART, [Fraction(rng.randint(-2, 2)) for _ in CHART.coordinates]
            )
        total = total + term
    return total


def _random_expr(rng: random.Random) -> Expr:
    num = _random_poly(rng)
    if rng.random() < 0.3:
        den = _random_poly(rng)
        if not den.is_symbolically_zero:
            return num / den
    return num


def test_provably_nonvanishing_certificates():
    assert P("exp(4*z)").provably_nonvanishing()
    assert P("-3/2*exp(z - x)").provably_nonvanishing()
    assert not P("x*exp(z)").provably_nonvanishing()  # vanishes on x = 0
    assert not P("1 + y^2 - z^2").provably_nonvanishing()  # sum: unknown
    assert not P("x - x").provably_nonvanishing()


def test_canonical_form_independent_of_construction_order():
    rng = random.Random(17)
    for _ in range(40):
        terms = []
        for _ in range(rng.randint(2, 5)):
            term = Expr.constant(CHART, Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
            for name in CHART.coordinates:
                power = rng.choice((0, 0, 1, 2))
                if power:
                    term = term * Expr.coordinate(CHART, name) ** power
            if rng.random() < 0.5:
                term = term * Expr.exponential(
                    CHART, [Fraction(rng.randint(-1, 1)) for _ in CHART.coordinates]
                )
            terms.append(term)
        forward = Expr.zero(CHART)
        for term in terms:
            forward = forward + term
        shuffled = list(terms)
        rng.shuffle(shuffled)
        backward = Expr.zero(CHART)
        for term in shuffled:
            backward = backward + term
        assert str(forward) == str(backward)
        # and through a quotient: (sum)/d built two ways prints identically
        denominator = P("1 + x^2")
        assert str(forward / denominator) == str(backward / denominator)
