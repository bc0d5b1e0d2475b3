"""Levi-Civita connection, curvature and Lie derivatives of the metric.

Conventions (pinned by reproducing the bundled 3-dimensional example tables
exactly):

* Christoffel symbols ``G^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)``
  stored as a (1, 2) tensor ``gamma[k, i, j]``.
* Curvature ``R(X, Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z``; components
  ``riem[l, i, j, k] = dx^l(R(d_i, d_j) d_k)``, i.e.
  ``d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik``.
* Two Ricci contractions: the signature-weighted trace
  ``S(X, Y) = trace(Z -> R(Z, X)Y)`` (the tensorial default, frame
  independent) and the plain orthonormal-frame sum
  ``sum_i g(R(E_i, X)Y, E_i)`` without the signature weights, kept only to
  reproduce published tables that use it.  Every report states which mode
  produced which number.
* Covariant derivatives append the differentiation slot as the last
  covariant index.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chart import Chart
from .symexpr import Expr
from .tensor import Frame, Metric, TensorField, ValenceError

__all__ = [
    "ConnectionData",
    "CurvatureData",
    "RICCI_MODES",
    "christoffel",
    "covariant_derivative",
    "covariant_derivative_along",
    "riemann",
    "ricci",
    "scalar_curvature",
    "lie_derivative_metric",
    "lie_derivative_two_ways",
]

WEIGHTED_TRACE = "weighted_trace"
PAPER_FRAME_SUM = "paper_frame_sum"
RICCI_MODES = (WEIGHTED_TRACE, PAPER_FRAME_SUM)


@dataclass(frozen=True)
class ConnectionData:
    """Christoffel symbols of a metric, gamma[k, i, j] symmetric in (i, j)."""

    gamma: TensorField

    @property
    def chart(self) -> Chart:
        return self.gamma.chart


@dataclass(frozen=True)
class CurvatureData:
    """Riemann, Ricci, scalar curvature and the Ricci operator of a metric."""

    riemann: TensorField  # (1, 3): riem[l, i, j, k] = dx^l(R(d_i, d_j) d_k)
    ricci: TensorField  # (0, 2)
    scalar: Expr
    q_operator: TensorField  # (1, 1): Q[k, j] = g^{ki} S_ij
    ricci_mode: str

    @property
    def chart(self) -> Chart:
        return self.riemann.chart


def christoffel(metric: Metric) -> ConnectionData:
    """Levi-Civita Christoffel symbols of an invertible metric."""
    chart = metric.chart
    n = chart.dimension
    coords = chart.coordinates
    dg = [
        [[metric[i, j].differentiate(coords[l]) for l in range(n)] for j in range(n)]
        for i in range(n)
    ]
    half = Expr.constant(chart, "1/2")

    def entry(idx: tuple[int, ...]) -> Expr:
        k, i, j = idx
        total = Expr.zero(chart)
        for l in range(n):
            total = total + metric.inverse[k, l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
        return half * total

    return ConnectionData(TensorField.build(chart, 1, 2, entry))


def covariant_derivative(tensor: TensorField, connection: ConnectionData) -> TensorField:
    """nabla T with the derivative slot appended as the last covariant index."""
    tensor.chart.require_same(connection.chart)
    chart = tensor.chart
    n = chart.dimension
    coords = chart.coordinates
    gamma = connection.gamma
    p, q = tensor.p, tensor.q

    def entry(idx: tuple[int, ...]) -> Expr:
        ups = idx[:p]
        downs = idx[p : p + q]
        c = idx[p + q]
        total = tensor[ups + downs].differentiate(coords[c])
        for slot in range(p):
            for m in range(n):
                replaced = ups[:slot] + (m,) + ups[slot + 1 :]
                total = total + gamma[ups[slot], c, m] * tensor[replaced + downs]
        for slot in range(q):
            for m in range(n):
                replaced = downs[:slot] + (m,) + downs[slot + 1 :]
                total = total - gamma[m, c, downs[slot]] * tensor[ups + replaced]
        return total

    return TensorField.build(chart, p, q + 1, entry)


def covariant_derivative_along(
    tensor: TensorField, connection: ConnectionData, direction: TensorField
) -> TensorField:
    """nabla_X T: contract the derivative slot of nabla T with a vector field."""
    if direction.valence != (1, 0):
        raise ValenceError("direction must be a vector field")
    nabla = covariant_derivative(tensor, connection)
    chart = tensor.chart
    n = chart.dimension

    def entry(idx: tuple[int, ...]) -> Expr:
        total = Expr.zero(chart)
        for c in range(n):
            total = total + direction[c] * nabla[idx + (c,)]
        return total

    return TensorField.build(chart, tensor.p, tensor.q, entry)


def riemann(connection: ConnectionData) -> TensorField:
    """Riemann tensor riem[l, i, j, k] = dx^l(R(d_i, d_j) d_k)."""
    chart = connection.chart
    n = chart.dimension
    coords = chart.coordinates
    gamma = connection.gamma
    dgamma = [
        [
            [[gamma[l, j, k].differentiate(coords[i]) for k in range(n)] for j in range(n)]
            for l in range(n)
        ]
        for i in range(n)
    ]

    def entry(idx: tuple[int, ...]) -> Expr:
        l, i, j, k = idx
        total = dgamma[i][l][j][k] - dgamma[j][l][i][k]
        for m in range(n):
            total = total + gamma[l, i, m] * gamma[m, j, k] - gamma[l, j, m] * gamma[m, i, k]
        return total

    return TensorField.build(chart, 1, 3, entry)


def ricci(
    riem: TensorField,
    mode: str = WEIGHTED_TRACE,
    metric: Metric | None = None,
    frame: Frame | None = None,
) -> TensorField:
    """Ricci tensor in one of the two supported contraction modes.

    ``weighted_trace`` is the coordinate contraction S_jk = R^i_ijk,
    equivalently the signature-weighted orthonormal frame sum; it is frame
    independent.  ``paper_frame_sum`` needs a symbolically orthonormal frame
    and a metric and omits the signature weights.
    """
    chart = riem.chart
    n = chart.dimension
    if mode == WEIGHTED_TRACE:

        def entry(idx: tuple[int, ...]) -> Expr:
            j, k = idx
            total = Expr.zero(chart)
            for i in range(n):
                total = total + riem[i, i, j, k]
            return total

        return TensorField.build(chart, 0, 2, entry)
    if mode == PAPER_FRAME_SUM:
        if frame is None or metric is None:
            raise ValenceError("paper_frame_sum Ricci needs an orthonormal frame and a metric")
        frame.orthonormal_signs(metric)  # raises if not orthonormal

        def entry(idx: tuple[int, ...]) -> Expr:
            j, k = idx
            total = Expr.zero(chart)
            for vec in frame:
                for a in range(n):
                    for l in range(n):
                        for m in range(n):
                            total = total + vec[a] * riem[l, a, j, k] * metric[l, m] * vec[m]
            return total

        return TensorField.build(chart, 0, 2, entry)
    raise ValueError("unknown ricci mode %r" % mode)


def scalar_curvature(ricci_tensor: TensorField, metric: Metric) -> Expr:
    """r = g^{jk} S_jk."""
    chart = metric.chart
    n = chart.dimension
    total = Expr.zero(chart)
    for j in range(n):
        for k in range(n):
            total = total + metric.inverse[j, k] * ricci_tensor[j, k]
    return total


def lie_derivative_two_ways(
    metric: Metric, direction: TensorField, connection: ConnectionData
) -> tuple[TensorField, TensorField]:
    """(L_V g) by the coordinate formula and by the connection formula.

    Returns (V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k,
    g(nabla_X V, Y) + g(X, nabla_Y V)); the two must agree symbolically and
    callers cross-check them, since the Lie derivative is the highest-risk
    term of the soliton residual.
    """
    if direction.valence != (1, 0):
        raise ValenceError("Lie derivative direction must be a vector field")
    chart = metric.chart
    n = chart.dimension
    coords = chart.coordinates

    def coordinate_entry(idx: tuple[int, ...]) -> Expr:
        i, j = idx
        total = Expr.zero(chart)
        for k in range(n):
            total = total + direction[k] * metric[i, j].differentiate(coords[k])
            total = total + metric[k, j] * direction[k].differentiate(coords[i])
            total = total + metric[i, k] * direction[k].differentiate(coords[j])
        return total

    via_coordinates = TensorField.build(chart, 0, 2, coordinate_entry)

    nabla_v = covariant_derivative(direction, connection)  # (1, 1): nabla_v[k, i]

    def nabla_entry(idx: tuple[int, ...]) -> Expr:
        i, j = idx
        total = Expr.zero(chart)
        for k in range(n):
            total = total + metric[k, j] * nabla_v[k, i] + metric[i, k] * nabla_v[k, j]
        return total

    via_connection = TensorField.build(chart, 0, 2, nabla_entry)
    return via_coordinates, via_connection


def lie_derivative_metric(
    metric: Metric, direction: TensorField, connection: ConnectionData
) -> TensorField:
    """(L_V g)(X, Y); both formulas are computed and asserted equal."""
    via_coordinates, via_connection = lie_derivative_two_ways(metric, direction, connection)
    assert (via_coordinates - via_connection).is_zero(guard=False), (
        "Lie derivative formulas disagree"
    )
    return via_coordinates
