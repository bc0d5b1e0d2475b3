"""Tensor fields, metrics, frames and index gymnastics on a chart.

Components are exact :class:`~parasol.symexpr.Expr` values stored flat in
row-major order with contravariant slots first: a valence-(p, q) field is
indexed ``T[i1, ..., ip, j1, ..., jq]``.  Raising an index appends the new
contravariant slot after the existing ones; lowering appends the new
covariant slot last.  Metric inverses are exact adjugate-over-determinant
quotients so that downstream identities can be checked symbolically rather
than numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .chart import Chart
from .symexpr import DegenerateEvaluationError, Expr

__all__ = [
    "TensorField",
    "Metric",
    "Frame",
    "ValenceError",
    "SingularMetricError",
    "DegenerateMetricError",
    "FrameError",
    "SignatureResult",
    "lie_bracket",
    "signature_at",
    "kronecker",
]


class ValenceError(ValueError):
    pass


class SingularMetricError(ValueError):
    """Metric determinant is canonically zero."""


class DegenerateMetricError(ValueError):
    """Metric degenerates numerically at a specific point."""

    def __init__(self, message: str, det_value: float):
        super().__init__(message)
        self.det_value = det_value


class FrameError(ValueError):
    pass


class TensorField:
    """Valence-(p, q) tensor field with exact symbolic components."""

    __slots__ = ("chart", "p", "q", "_comps")

    def __init__(self, chart: Chart, p: int, q: int, comps: Sequence[Expr]):
        n = chart.dimension
        expected = n ** (p + q)
        if len(comps) != expected:
            raise ValenceError(
                "component count %d does not match valence (%d, %d) in dimension %d"
                % (len(comps), p, q, n)
            )
        self.chart = chart
        self.p = p
        self.q = q
        self._comps = list(comps)

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, chart: Chart, p: int, q: int, fn: Callable[[tuple[int, ...]], Expr]) -> "TensorField":
        n = chart.dimension
        return cls(chart, p, q, [fn(idx) for idx in product(range(n), repeat=p + q)])

    @classmethod
    def filled(cls, chart: Chart, p: int, q: int, value: Expr) -> "TensorField":
        n = chart.dimension
        return cls(chart, p, q, [value] * (n ** (p + q)))

    @classmethod
    def zero(cls, chart: Chart, p: int, q: int) -> "TensorField":
        return cls.filled(chart, p, q, Expr.zero(chart))

    @classmethod
    def vector(cls, chart: Chart, comps: Sequence[Expr]) -> "TensorField":
        return cls(chart, 1, 0, list(comps))

    @classmethod
    def oneform(cls, chart: Chart, comps: Sequence[Expr]) -> "TensorField":
        return cls(chart, 0, 1, list(comps))

    # -- access ---------------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.p + self.q

    @property
    def valence(self) -> tuple[int, int]:
        return self.p, self.q

    def _flat(self, idx: tuple[int, ...]) -> int:
        n = self.chart.dimension
        flat = 0
        for k in idx:
            flat = flat * n + k
        return flat

    def __getitem__(self, idx) -> Expr:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise ValenceError("index %r has wrong length for valence %r" % (idx, self.valence))
        return self._comps[self._flat(tuple(idx))]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.chart.dimension), repeat=self.rank)

    def components(self) -> Iterator[tuple[tuple[int, ...], Expr]]:
        for idx, comp in zip(self.indices(), self._comps):
            yield idx, comp

    # -- pointwise algebra ----------------------------------------------------

    def _check_compatible(self, other: "TensorField") -> None:
        self.chart.require_same(other.chart)
        if self.valence != other.valence:
            raise ValenceError("valence mismatch: %r vs %r" % (self.valence, other.valence))

    def map(self, fn: Callable[[Expr], Expr]) -> "TensorField":
        return TensorField(self.chart, self.p, self.q, [fn(c) for c in self._comps])

    def zip_with(self, other: "TensorField", fn: Callable[[Expr, Expr], Expr]) -> "TensorField":
        self._check_compatible(other)
        return TensorField(
            self.chart, self.p, self.q, [fn(a, b) for a, b in zip(self._comps, other._comps)]
        )

    def __add__(self, other: "TensorField") -> "TensorField":
        return self.zip_with(other, lambda a, b: a + b)

    def __sub__(self, other: "TensorField") -> "TensorField":
        return self.zip_with(other, lambda a, b: a - b)

    def __neg__(self) -> "TensorField":
        return self.map(lambda a: -a)

    def scale(self, factor) -> "TensorField":
        if not isinstance(factor, Expr):
            factor = Expr.constant(self.chart, Fraction(factor))
        return self.map(lambda a: a * factor)

    # -- tensor algebra ---------------------------------------------------------

    def tensor_product(self, other: "TensorField") -> "TensorField":
        self.chart.require_same(other.chart)
        p, q = self.p + other.p, self.q + other.q

        def entry(idx: tuple[int, ...]) -> Expr:
            ups, downs = idx[:p], idx[p:]
            left = ups[: self.p] + downs[: self.q]
            right = ups[self.p :] + downs[self.q :]
            return self[left] * other[right]

        return TensorField.build(self.chart, p, q, entry)

    def contract(self, up_slot: int, down_slot: int) -> "TensorField":
        """Contract one contravariant slot against one covariant slot."""
        if not (0 <= up_slot < self.p and 0 <= down_slot < self.q):
            raise ValenceError(
                "cannot contract slots (%d, %d) of a (%d, %d) tensor"
                % (up_slot, down_slot, self.p, self.q)
            )
        n = self.chart.dimension
        p, q = self.p - 1, self.q - 1

        def entry(idx: tuple[int, ...]) -> Expr:
            ups, downs = list(idx[:p]), list(idx[p:])
            total = Expr.zero(self.chart)
            for m in range(n):
                full_ups = ups[:up_slot] + [m] + ups[up_slot:]
                full_downs = downs[:down_slot] + [m] + downs[down_slot:]
                total = total + self[tuple(full_ups + full_downs)]
            return total

        return TensorField.build(self.chart, p, q, entry)

    def trace(self) -> Expr:
        """Trace of a (1, 1) tensor."""
        if self.valence != (1, 1):
            raise ValenceError("trace needs a (1, 1) tensor, got %r" % (self.valence,))
        n = self.chart.dimension
        total = Expr.zero(self.chart)
        for i in range(n):
            total = total + self[i, i]
        return total

    def swap_down(self, a: int, b: int) -> "TensorField":
        """Transpose two covariant slots."""

        def entry(idx: tuple[int, ...]) -> Expr:
            ups, downs = list(idx[: self.p]), list(idx[self.p :])
            downs[a], downs[b] = downs[b], downs[a]
            return self[tuple(ups + downs)]

        return TensorField.build(self.chart, self.p, self.q, entry)

    # -- predicates and evaluation ----------------------------------------------

    def is_zero(self, guard: bool = True) -> bool:
        return all(c.is_zero(guard=guard) for c in self._comps)

    def is_symmetric_down(self, a: int, b: int, guard: bool = True) -> bool:
        return (self - self.swap_down(a, b)).is_zero(guard=guard)

    def max_abs(self, points: Iterable[Mapping[str, float]]) -> float:
        """Largest |component| over the sample points; degenerate points skipped."""
        worst = 0.0
        for point in points:
            for comp in self._comps:
                try:
                    value = abs(comp.evaluate(point))
                except DegenerateEvaluationError:
                    continue
                if value > worst:
                    worst = value
        return worst

    def numeric_at(self, point: Mapping[str, float] | Sequence[float]) -> np.ndarray:
        n = self.chart.dimension
        values = [comp.evaluate(point) for comp in self._comps]
        return np.array(values, dtype=float).reshape((n,) * self.rank) if self.rank else np.array(values[0])

    def __repr__(self) -> str:
        return "TensorField(p=%d, q=%d, dim=%d)" % (self.p, self.q, self.chart.dimension)


def kronecker(chart: Chart) -> TensorField:
    """Identity (1, 1) tensor."""
    one = Expr.one(chart)
    zero = Expr.zero(chart)
    return TensorField.build(chart, 1, 1, lambda idx: one if idx[0] == idx[1] else zero)


def _det(matrix: list[list[Expr]], chart: Chart) -> Expr:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = Expr.zero(chart)
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_symbolically_zero:
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        cof = entry * _det(minor, chart)
        total = total + (cof if j % 2 == 0 else -cof)
    return total


class Metric:
    """Symmetric (0, 2) metric with eagerly cached exact inverse and determinant."""

    def __init__(self, field: TensorField):
        if field.valence != (0, 2):
            raise ValenceError("metric must be a (0, 2) tensor")
        if not field.is_symmetric_down(0, 1, guard=False):
            raise ValenceError("metric components are not symmetric")
        self.field = field
        self.chart = field.chart
        n = self.chart.dimension
        matrix = [[field[i, j] for j in range(n)] for i in range(n)]
        self.determinant = _det(matrix, self.chart)
        if self.determinant.is_symbolically_zero:
            raise SingularMetricError("metric determinant is canonically zero")
        inverse_entries = []
        for i in range(n):
            for j in range(n):
                minor = [
                    [matrix[r][c] for c in range(n) if c != i]
                    for r in range(n)
                    if r != j
                ]
                cof = _det(minor, self.chart) if n > 1 else Expr.one(self.chart)
                sign = 1 if (i + j) % 2 == 0 else -1
                entry = cof / self.determinant
                inverse_entries.append(entry if sign > 0 else -entry)
        self.inverse = TensorField(self.chart, 2, 0, inverse_entries)
        identity = self._product_with_inverse()
        assert identity.is_zero(guard=False), "metric inverse failed g * g^-1 = I"

    def _product_with_inverse(self) -> TensorField:
        n = self.chart.dimension

        def entry(idx: tuple[int, ...]) -> Expr:
            i, j = idx
            total = Expr.zero(self.chart)
            for m in range(n):
                total = total + self.inverse[i, m] * self.field[m, j]
            expected = Expr.one(self.chart) if i == j else Expr.zero(self.chart)
            return total - expected

        return TensorField.build(self.chart, 1, 1, entry)

    def __getitem__(self, idx) -> Expr:
        return self.field[idx]

    def inner(self, x: TensorField, y: TensorField) -> Expr:
        """g(X, Y) for vector fields X, Y."""
        if x.valence != (1, 0) or y.valence != (1, 0):
            raise ValenceError("inner product needs two vector fields")
        n = self.chart.dimension
        total = Expr.zero(self.chart)
        for i in range(n):
            for j in range(n):
                total = total + self.field[i, j] * x[i] * y[j]
        return total

    def lower(self, tensor: TensorField, up_slot: int = 0) -> TensorField:
        """Lower one contravariant slot; the new covariant slot goes last."""
        if not 0 <= up_slot < tensor.p:
            raise ValenceError("no contravariant slot %d to lower" % up_slot)
        n = self.chart.dimension
        p, q = tensor.p - 1, tensor.q + 1

        def entry(idx: tuple[int, ...]) -> Expr:
            ups, downs = list(idx[:p]), list(idx[p:])
            a = downs[-1]
            downs = downs[:-1]
            total = Expr.zero(self.chart)
            for m in range(n):
                full = ups[:up_slot] + [m] + ups[up_slot:]
                total = total + self.field[a, m] * tensor[tuple(full + downs)]
            return total

        return TensorField.build(self.chart, p, q, entry)

    def raise_index(self, tensor: TensorField, down_slot: int = 0) -> TensorField:
        """Raise one covariant slot; the new contravariant slot goes last."""
        if not 0 <= down_slot < tensor.q:
            raise ValenceError("no covariant slot %d to raise" % down_slot)
        n = self.chart.dimension
        p, q = tensor.p + 1, tensor.q - 1

        def entry(idx: tuple[int, ...]) -> Expr:
            ups, downs = list(idx[:p]), list(idx[p:])
            a = ups[-1]
            ups = ups[:-1]
            total = Expr.zero(self.chart)
            for m in range(n):
                full = downs[:down_slot] + [m] + downs[down_slot:]
                total = total + self.inverse[a, m] * tensor[tuple(ups + full)]
            return total

        return TensorField.build(self.chart, p, q, entry)

    def numeric_at(self, point: Mapping[str, float] | Sequence[float]) -> np.ndarray:
        return self.field.numeric_at(point)


@dataclass(frozen=True)
class SignatureResult:
    n_plus: int
    n_minus: int

    @property
    def index(self) -> int:
        return self.n_minus


def signature_at(
    metric: Metric,
    point: Mapping[str, float] | Sequence[float],
    det_tolerance: float = 1e-9,
) -> SignatureResult:
    """Pointwise signature (eigenvalue sign counts) of the metric matrix.

    By Sylvester's law of inertia the sign counts equal the pivot signs of a
    symmetric pivoted elimination; the counts are computed from the symmetric
    eigenvalue decomposition of the numeric matrix.  Signature is reported
    per point only: metrics whose determinant changes sign across the chart
    have no global signature.
    """
    matrix = metric.numeric_at(point)
    det = float(np.linalg.det(matrix))
    if abs(det) <= det_tolerance:
        raise DegenerateMetricError(
            "metric is degenerate at the point (det = %.3e)" % det, det
        )
    eigenvalues = np.linalg.eigvalsh(matrix)
    n_plus = int(np.sum(eigenvalues > 0.0))
    n_minus = int(np.sum(eigenvalues < 0.0))
    if n_plus + n_minus != metric.chart.dimension:
        raise DegenerateMetricError(
            "eigenvalue signs did not split cleanly (det = %.3e)" % det, det
        )
    return SignatureResult(n_plus, n_minus)


def lie_bracket(x: TensorField, y: TensorField) -> TensorField:
    """[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k."""
    if x.valence != (1, 0) or y.valence != (1, 0):
        raise ValenceError("lie_bracket needs two vector fields")
    x.chart.require_same(y.chart)
    chart = x.chart
    coords = chart.coordinates

    def entry(idx: tuple[int, ...]) -> Expr:
        (k,) = idx
        total = Expr.zero(chart)
        for i, name in enumerate(coords):
            total = total + x[i] * y[k].differentiate(name) - y[i] * x[k].differentiate(name)
        return total

    return TensorField.build(chart, 1, 0, entry)


class Frame:
    """Ordered list of n vector fields, numerically independent at the base point."""

    def __init__(self, vectors: Sequence[TensorField]):
        if not vectors:
            raise FrameError("empty frame")
        chart = vectors[0].chart
        n = chart.dimension
        if len(vectors) != n:
            raise FrameError("frame needs %d vectors, got %d" % (n, len(vectors)))
        for vec in vectors:
            chart.require_same(vec.chart)
            if vec.valence != (1, 0):
                raise FrameError("frame entries must be vector fields")
        self.chart = chart
        self.vectors = tuple(vectors)
        base = {name: float(v) for name, v in zip(chart.coordinates, chart.base_point)}
        matrix = np.array([[vec[i].evaluate(base) for i in range(n)] for vec in vectors])
        if abs(np.linalg.det(matrix)) <= 1e-9:
            raise FrameError("frame vectors are numerically dependent at the base point")

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i: int) -> TensorField:
        return self.vectors[i]

    def orthonormal_signs(self, metric: Metric) -> tuple[int, ...]:
        """Verify g(E_i, E_j) = +/- delta_ij symbolically and return the signs."""
        n = self.chart.dimension
        signs: list[int] = []
        for i in range(n):
            for j in range(i, n):
                value = metric.inner(self.vectors[i], self.vectors[j])
                if i == j:
                    constant = value.as_rational_constant()
                    if constant == 1:
                        signs.append(1)
                    elif constant == -1:
                        signs.append(-1)
                    else:
                        raise FrameError(
                            "frame is not orthonormal: g(E_%d, E_%d) = %s" % (i + 1, i + 1, value)
                        )
                elif not value.is_symbolically_zero:
                    raise FrameError(
                        "frame is not orthonormal: g(E_%d, E_%d) = %s" % (i + 1, j + 1, value)
                    )
        return tuple(signs)
