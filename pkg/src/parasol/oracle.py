"""Finite-difference cross-validation of the symbolic geometry.

The oracle recomputes Christoffel symbols, Riemann and Ricci tensors from
central differences of numerically evaluated metric components.  It shares
nothing with the symbolic derivative code paths except ``Expr.evaluate``,
which keeps it an independent witness.  Central differences are O(h^2):
halving the step should shrink the deviation by roughly 4x, and that scaling
is itself a checkable property.  One optional Richardson extrapolation level
is supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .chart import Chart
from .symexpr import DegenerateEvaluationError
from .tensor import Metric, TensorField

__all__ = [
    "OracleConfig",
    "StencilDegeneracyError",
    "fd_christoffel",
    "fd_riemann",
    "fd_ricci",
    "oracle_sample_points",
    "compare",
    "CompareReport",
]

CENTRAL = "central"
RICHARDSON = "richardson"
DEGENERACY_CUTOFF = 1e-6


class StencilDegeneracyError(ValueError):
    """A finite-difference stencil crosses a metric degeneracy locus."""


@dataclass(frozen=True)
class OracleConfig:
    h: float = 1e-4
    scheme: str = CENTRAL
    sample_count: int = 10
    seed: int = 42
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError("step h must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.scheme not in (CENTRAL, RICHARDSON):
            raise ValueError("unknown scheme %r" % self.scheme)


def _point_list(chart: Chart, point: Mapping[str, float] | Sequence[float]) -> list[float]:
    if isinstance(point, Mapping):
        return [float(point[c]) for c in chart.coordinates]
    return [float(v) for v in point]


def _metric_at(metric: Metric, xs: Sequence[float], center_det_sign: float | None = None) -> np.ndarray:
    matrix = np.array(
        [[comp.evaluate(xs) for comp in row] for row in _metric_rows(metric)]
    )
    det = float(np.linalg.det(matrix))
    if abs(det) < DEGENERACY_CUTOFF or (
        center_det_sign is not None and det * center_det_sign < 0
    ):
        raise StencilDegeneracyError(
            "metric determinant %.3e degenerates inside the stencil at %r" % (det, list(xs))
        )
    return matrix


def _metric_rows(metric: Metric):
    n = metric.chart.dimension
    return [[metric[i, j] for j in range(n)] for i in range(n)]


def _fd_christoffel_once(metric: Metric, xs: list[float], h: float) -> np.ndarray:
    n = metric.chart.dimension
    center = _metric_at(metric, xs)
    sign = float(np.sign(np.linalg.det(center)))
    ginv = np.linalg.inv(center)
    dg = np.empty((n, n, n))
    for i in range(n):
        plus = list(xs)
        minus = list(xs)
        plus[i] += h
        minus[i] -= h
        dg[i] = (_metric_at(metric, plus, sign) - _metric_at(metric, minus, sign)) / (2.0 * h)
    # gamma[k, i, j] = 1/2 g^{kl} (dg_i[j, l] + dg_j[i, l] - dg_l[i, j])
    gamma = 0.5 * (
        np.einsum("kl,ijl->kij", ginv, dg)
        + np.einsum("kl,jil->kij", ginv, dg)
        - np.einsum("kl,lij->kij", ginv, dg)
    )
    return gamma


def _richardson(values: Callable[[float], np.ndarray], h: float) -> np.ndarray:
    coarse = values(h)
    fine = values(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def fd_christoffel(
    metric: Metric, point: Mapping[str, float] | Sequence[float], cfg: OracleConfig
) -> np.ndarray:
    """Christoffel symbols gamma[k, i, j] from central differences of g."""
    xs = _point_list(metric.chart, point)
    if cfg.scheme == RICHARDSON:
        return _richardson(lambda h: _fd_christoffel_once(metric, xs, h), cfg.h)
    return _fd_christoffel_once(metric, xs, cfg.h)


def _fd_riemann_once(metric: Metric, xs: list[float], h: float) -> np.ndarray:
    n = metric.chart.dimension
    gamma = _fd_christoffel_once(metric, xs, h)
    dgamma = np.empty((n, n, n, n))
    for i in range(n):
        plus = list(xs)
        minus = list(xs)
        plus[i] += h
        minus[i] -= h
        dgamma[i] = (
            _fd_christoffel_once(metric, plus, h) - _fd_christoffel_once(metric, minus, h)
        ) / (2.0 * h)
    # riem[l, i, j, k] = d_i gamma[l, j, k] - d_j gamma[l, i, k]
    #                    + gamma[l, i, m] gamma[m, j, k] - gamma[l, j, m] gamma[m, i, k]
    riem = np.einsum("iljk->lijk", dgamma) - np.einsum("jlik->lijk", dgamma)
    riem += np.einsum("lim,mjk->lijk", gamma, gamma)
    riem -= np.einsum("ljm,mik->lijk", gamma, gamma)
    return riem


def fd_riemann(
    metric: Metric, point: Mapping[str, float] | Sequence[float], cfg: OracleConfig
) -> np.ndarray:
    """Riemann tensor riem[l, i, j, k] from nested central differences."""
    xs = _point_list(metric.chart, point)
    if cfg.scheme == RICHARDSON:
        return _richardson(lambda h: _fd_riemann_once(metric, xs, h), cfg.h)
    return _fd_riemann_once(metric, xs, cfg.h)


def fd_ricci(
    metric: Metric, point: Mapping[str, float] | Sequence[float], cfg: OracleConfig
) -> np.ndarray:
    """Ricci tensor S[j, k] = riem[i, i, j, k] (weighted trace only)."""
    riem = fd_riemann(metric, point, cfg)
    return np.einsum("iijk->jk", riem)


def oracle_sample_points(
    chart: Chart, metric: Metric, cfg: OracleConfig
) -> list[dict[str, float]]:
    """Seeded sample points from the domain box, avoiding degeneracy loci.

    A point is rejected when |det g| < 1e-6 at the point or anywhere on its
    finite-difference stencil, or when the determinant changes sign there.
    """

    def reject(point: dict[str, float]) -> bool:
        xs = [point[c] for c in chart.coordinates]
        try:
            center = _metric_at(metric, xs)
            sign = float(np.sign(np.linalg.det(center)))
            for i in range(chart.dimension):
                for offset in (-2.0 * cfg.h, 2.0 * cfg.h):
                    shifted = list(xs)
                    shifted[i] += offset
                    _metric_at(metric, shifted, sign)
        except (StencilDegeneracyError, DegenerateEvaluationError):
            return True
        return False

    return chart.sample_points(cfg.sample_count, cfg.seed, reject=reject)


@dataclass
class CompareReport:
    max_relative_deviation: float
    per_point: list[float] = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return self.max_relative_deviation <= self.tolerance


def compare(
    symbolic: TensorField,
    oracle_fn: Callable[[Mapping[str, float]], np.ndarray],
    points: Iterable[Mapping[str, float]],
    cfg: OracleConfig,
) -> CompareReport:
    """Max relative deviation between a symbolic tensor and an oracle.

    Relative deviation uses max(1, |reference|) as denominator so that
    zero-valued components do not produce spurious failures.
    """
    per_point: list[float] = []
    for point in points:
        reference = oracle_fn(point)
        values = symbolic.numeric_at(point)
        if values.shape != reference.shape:
            raise ValueError(
                "shape mismatch: symbolic %r vs oracle %r" % (values.shape, reference.shape)
            )
        deviation = np.abs(values - reference) / np.maximum(1.0, np.abs(reference))
        per_point.append(float(deviation.max()))
    worst = max(per_point) if per_point else 0.0
    return CompareReport(worst, per_point, cfg.tolerance)
