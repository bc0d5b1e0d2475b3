"""Tensor fields, metric inversion, signatures, brackets, frames."""

import random
from fractions import Fraction

import numpy as np
import pytest

from parasol.chart import Chart, ChartError, ChartMismatchError
from parasol.symexpr import Expr, parse
from parasol.tensor import (
    DegenerateMetricError,
    Frame,
    FrameError,
    Metric,
    TensorField,
    ValenceError,
    kronecker,
    lie_bracket,
    signature_at,
)

CHART = Chart.make(["x", "y", "z"])


def P(source, chart=CHART):
    return parse(source, chart)


def euclidean(chart=CHART) -> Metric:
    n = chart.dimension
    one, zero = Expr.one(chart), Expr.zero(chart)
    return Metric(
        TensorField(chart, 0, 2, [one if i == j else zero for i in range(n) for j in range(n)])
    )


# ---------------------------------------------------------------------------
# chart validation
# ---------------------------------------------------------------------------


def test_chart_requires_two_coordinates():
    with pytest.raises(ChartError):
        Chart.make(["x"])


def test_chart_rejects_duplicates():
    with pytest.raises(ChartError):
        Chart.make(["x", "x"])


def test_chart_base_point_must_lie_in_box():
    with pytest.raises(ChartError):
        Chart.make(["x", "y"], base_point=["2", "0"], domain_box=[["-1", "1"], ["-1", "1"]])


def test_chart_mismatch_detected():
    other = Chart.make(["u", "v"])
    with pytest.raises(ChartMismatchError):
        Expr.coordinate(CHART, "x") + Expr.coordinate(other, "u")


# ---------------------------------------------------------------------------
# metric inversion
# ---------------------------------------------------------------------------


def test_diagonal_exponential_metric_inverts(ex1):
    inv = ex1.metric.inverse
    assert inv[0, 0] == P("exp(-2*z)")
    assert inv[1, 1] == P("exp(2*z)")
    assert inv[2, 2] == Expr.one(CHART)
    assert inv[0, 1].is_zero()


def test_euclidean_metric_inverts_to_identity():
    g = euclidean()
    for i in range(3):
        for j in range(3):
            expected = Expr.one(CHART) if i == j else Expr.zero(CHART)
            assert g.inverse[i, j] == expected


def test_g2_inverse_has_example_denominator(structures):
    # det g2 = 1 + y^2 - t^2 by cofactor expansion; the inverse is adjugate/det
    g2 = structures["ex5d_r5_g2"].metric
    chart = g2.chart
    assert g2.determinant == parse("1 + y^2 - t^2", chart)
    entry = g2.inverse[2, 2]
    assert entry.den_string() == "y^2 - t^2 + 1"


def test_g2_inverse_matches_numeric_inversion(structures):
    g2 = structures["ex5d_r5_g2"].metric
    chart = g2.chart
    points = chart.sample_points(10, seed=42)
    for point in points:
        matrix = g2.numeric_at(point)
        expected = np.linalg.inv(matrix)
        actual = g2.inverse.numeric_at(point)
        assert np.max(np.abs(actual - expected)) <= 1e-9


def test_g1_determinant_is_minus_one(structures):
    g1 = structures["ex5d_r5_g1"].metric
    assert g1.determinant == Expr.constant(g1.chart, -1)


def test_metric_product_identity_all_fixtures(structures):
    for structure in structures.values():
        g = structure.metric
        n = g.chart.dimension
        for i in range(n):
            for j in range(n):
                total = Expr.zero(g.chart)
                for m in range(n):
                    total = total + g.field[i, m] * g.inverse[m, j]
                expected = Expr.one(g.chart) if i == j else Expr.zero(g.chart)
                assert (total - expected).is_zero(guard=False)


def test_singular_metric_rejected():
    zero = Expr.zero(CHART)
    one = Expr.one(CHART)
    comps = [one, zero, zero, zero, one, zero, zero, zero, zero]
    from parasol.tensor import SingularMetricError

    with pytest.raises(SingularMetricError):
        Metric(TensorField(CHART, 0, 2, comps))


# ---------------------------------------------------------------------------
# signature
# ---------------------------------------------------------------------------


def test_g1_signature_is_lorentzian_everywhere(structures):
    g1 = structures["ex5d_r5_g1"].metric
    for point in g1.chart.sample_points(10, seed=42):
        signature = signature_at(g1, point)
        assert (signature.n_plus, signature.n_minus) == (4, 1)
        assert signature.index == 1


def test_g2_signature_changes_across_degeneracy_locus(structures):
    g2 = structures["ex5d_r5_g2"].metric
    origin = [0.0, 0.0, 0.0, 0.0, 0.0]
    assert signature_at(g2, origin).index == 2
    beyond = {"x": 0.0, "y": 0.0, "z": 0.0, "t": 2.0, "s": 0.0}
    assert signature_at(g2, beyond).index == 3


def test_g2_degenerate_point_reports_determinant(structures):
    g2 = structures["ex5d_r5_g2"].metric
    with pytest.raises(DegenerateMetricError) as info:
        signature_at(g2, {"x": 0.0, "y": 0.0, "z": 0.0, "t": 1.0, "s": 0.0})
    assert abs(info.value.det_value) <= 1e-9


def test_euclidean_signature():
    g = euclidean()
    assert signature_at(g, [0.3, -0.2, 0.9]) == signature_at(g, [0.0, 0.0, 0.0])
    assert signature_at(g, [0.0, 0.0, 0.0]).n_plus == 3


def test_signature_locally_constant_on_fixtures(structures):
    for structure in structures.values():
        signatures = {
            signature_at(structure.metric, point)
            for point in structure.chart.sample_points(10, seed=7)
        }
        assert len(signatures) == 1


# ---------------------------------------------------------------------------
# index gymnastics
# ---------------------------------------------------------------------------


def test_lower_xi_gives_eps_eta(ex1, ex2):
    for structure in (ex1, ex2):
        flat = structure.metric.lower(structure.xi)
        expected = structure.eta.scale(Fraction(structure.epsilon))
        assert (flat - expected).is_zero()


def test_raise_after_lower_roundtrip(ex1):
    rng = random.Random(3)
    g = ex1.metric
    for _ in range(20):
        comps = []
        for _ in range(3):
            coeff = Fraction(rng.randint(-3, 3))
            name = rng.choice(CHART.coordinates)
            comps.append(Expr.constant(CHART, coeff) * Expr.coordinate(CHART, name))
        vec = TensorField.vector(CHART, comps)
        back = g.raise_index(g.lower(vec))
        assert (back - vec).is_zero(guard=False)


def test_trace_of_phi_vanishes(ex1):
    assert ex1.phi.trace().is_zero()


def test_phi_square_trace_is_n_minus_one(ex1, ex2, flat):
    for structure in (ex1, ex2, flat):
        n = structure.chart.dimension
        assert structure.phi_squared().trace() == Expr.constant(structure.chart, n - 1)


def test_contract_valence_checks():
    vec = TensorField.vector(CHART, [Expr.one(CHART)] * 3)
    with pytest.raises(ValenceError):
        vec.contract(0, 0)


def test_kronecker_trace():
    assert kronecker(CHART).trace() == Expr.constant(CHART, 3)


# ---------------------------------------------------------------------------
# Lie brackets
# ---------------------------------------------------------------------------


def test_bracket_of_frame_fields_reproduces_e1(ex1):
    e1, e3 = ex1.frame[0], ex1.frame[2]
    # [E1, E3]^x = -d_z(e^-z) = e^-z, i.e. [E1, E3] = E1
    assert (lie_bracket(e1, e3) - e1).is_zero()


def test_bracket_of_coordinate_fields_vanishes():
    dx = TensorField.vector(CHART, [Expr.one(CHART), Expr.zero(CHART), Expr.zero(CHART)])
    dy = TensorField.vector(CHART, [Expr.zero(CHART), Expr.one(CHART), Expr.zero(CHART)])
    assert lie_bracket(dx, dy).is_zero()


def test_bracket_antisymmetry_seeded():
    rng = random.Random(5)
    for _ in range(10):
        comps = [
            Expr.constant(CHART, Fraction(rng.randint(-2, 2)))
            * Expr.coordinate(CHART, rng.choice(CHART.coordinates))
            for _ in range(3)
        ]
        other = [
            parse(rng.choice(["exp(z)", "x*y", "1", "z^2"]), CHART) for _ in range(3)
        ]
        x = TensorField.vector(CHART, comps)
        y = TensorField.vector(CHART, other)
        assert (lie_bracket(x, y) + lie_bracket(y, x)).is_zero(guard=False)


def test_jacobi_identity_on_fixture_frames(ex1, ex2, warped):
    for structure in (ex1, ex2, warped):
        e1, e2, e3 = structure.frame
        total = lie_bracket(lie_bracket(e1, e2), e3)
        total = total + lie_bracket(lie_bracket(e2, e3), e1)
        total = total + lie_bracket(lie_bracket(e3, e1), e2)
        assert total.is_zero()


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


def test_frame_signs(ex1, ex2):
    assert ex1.frame_signs() == (1, 1, 1)
    assert ex2.frame_signs() == (1, 1, -1)


def test_non_orthonormal_frame_rejected(ex1):
    dx = TensorField.vector(CHART, [Expr.one(CHART), Expr.zero(CHART), Expr.zero(CHART)])
    dy = TensorField.vector(CHART, [Expr.zero(CHART), Expr.one(CHART), Expr.zero(CHART)])
    dz = TensorField.vector(CHART, [Expr.zero(CHART), Expr.zero(CHART), Expr.one(CHART)])
    frame = Frame([dx, dy, dz])
    with pytest.raises(FrameError):
        frame.orthonormal_signs(ex1.metric)


def test_dependent_frame_rejected():
    dx = TensorField.vector(CHART, [Expr.one(CHART), Expr.zero(CHART), Expr.zero(CHART)])
    with pytest.raises(FrameError):
        Frame([dx, dx, dx])


def test_phi_square_trace_on_five_dimensional_structures(structures):
    for name in ("ex5d_r5_g1", "ex5d_r5_g2"):
        structure = structures[name]
        n = structure.chart.dimension
        assert structure.phi_squared().trace() == Expr.constant(structure.chart, n - 1)


def test_g2_determinant_matches_numpy_at_sample_points(structures):
    g2 = structures["ex5d_r5_g2"].metric
    for point in g2.chart.sample_points(10, seed=42):
        symbolic = g2.determinant.evaluate(point)
        numeric = float(np.linalg.det(g2.numeric_at(point)))
        assert abs(symbolic - numeric) <= 1e-9 * max(1.0, abs(numeric))
