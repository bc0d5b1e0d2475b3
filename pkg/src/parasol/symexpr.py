"""Exact scalar expressions on a chart.

The expression class is deliberately small: quotients N/D where N and D are
finite sums of terms

    coefficient * x1^a1 * ... * xn^an * exp(l1*x1 + ... + ln*xn)

with exact rational coefficients, non-negative integer exponents and rational
linear forms inside ``exp``.  Sums with these term keys form an integral
domain, so equality of quotients is decidable by cross multiplication; that
is what makes symbolic identity checks on tensors trustworthy.

Canonical form
--------------
* the zero expression is the empty sum over denominator 1;
* terms are keyed by (monomial, exponential atom); no key repeats;
* the denominator is monic (leading coefficient 1), carries no exponential
  factor (exponentials are units and are moved into the numerator) and shares
  no single-term factor with the numerator: common monomial content is
  cancelled.

Internally a denominator is stored factored as ``x^d * B^e`` with B a monic,
content-free sum.  Derivatives and products of quotients with the same B then
grow the power e instead of multiplying expanded sums, which keeps curvature
pipelines (where every denominator is a power of det g) small.  The printed
and parsed form is always the expanded single-sum denominator.

Grammar (shared with the manifest format)::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' signed-integer)?
    base   := integer | decimal | identifier | '(' expr ')' | 'exp' '(' expr ')'

``e^(...)`` is accepted as sugar for ``exp(...)`` as long as no chart
coordinate is named ``e``.  Arguments of ``exp`` must be linear forms in the
coordinates with rational coefficients (no constant part, since exp of a
nonzero rational is irrational and would break exactness).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from .chart import Chart

__all__ = [
    "Expr",
    "ExprError",
    "ParseError",
    "UnknownCoordinateError",
    "NonLinearExpArgumentError",
    "DivisionByZeroExprError",
    "DegenerateEvaluationError",
    "ExactEvaluationError",
    "parse",
]

Mono = tuple  # tuple[int, ...]
Atom = tuple  # tuple[Fraction, ...]
Key = tuple  # (Mono, Atom)
Sum = dict  # dict[Key, Fraction]

ZERO_GUARD_POINTS = 20
ZERO_GUARD_SEED = 42
ZERO_GUARD_DEN_CUTOFF = 1e-6


class ExprError(ValueError):
    """Base class for expression errors."""


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class UnknownCoordinateError(ExprError):
    pass


class NonLinearExpArgumentError(ExprError):
    pass


class DivisionByZeroExprError(ExprError):
    pass


class DegenerateEvaluationError(ExprError):
    """Denominator numerically vanishes at the evaluation point."""


class ExactEvaluationError(ExprError):
    """Exact evaluation impossible (nonzero exponential atom or zero denominator)."""


# ---------------------------------------------------------------------------
# sum-of-terms helpers (plain dicts keyed by (monomial, atom))
# ---------------------------------------------------------------------------


def _szero() -> Sum:
    return {}


def _sconst(n: int, value: Fraction) -> Sum:
    if value == 0:
        return {}
    return {((0,) * n, (_F0,) * n): value}


def _sadd(a: Sum, b: Sum) -> Sum:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for key, coeff in b.items():
        new = out.get(key, _F0) + coeff
        if new == 0:
            out.pop(key, None)
        else:
            out[key] = new
    return out


def _sneg(a: Sum) -> Sum:
    return {key: -coeff for key, coeff in a.items()}


def _smul(a: Sum, b: Sum) -> Sum:
    if not a or not b:
        return {}
    out: Sum = {}
    for (ma, ea), ca in a.items():
        for (mb, eb), cb in b.items():
            key = (
                tuple(x + y for x, y in zip(ma, mb)),
                tuple(x + y for x, y in zip(ea, eb)),
            )
            new = out.get(key, _F0) + ca * cb
            if new == 0:
                out.pop(key, None)
            else:
                out[key] = new
    return out


def _sscale(a: Sum, coeff: Fraction, mono_shift: Mono | None = None, atom_shift: Atom | None = None) -> Sum:
    if coeff == 0:
        return {}
    out: Sum = {}
    for (mono, atom), c in a.items():
        if mono_shift is not None:
            mono = tuple(x + y for x, y in zip(mono, mono_shift))
        if atom_shift is not None:
            atom = tuple(x + y for x, y in zip(atom, atom_shift))
        out[(mono, atom)] = c * coeff
    return out


def _spow(a: Sum, k: int, n: int) -> Sum:
    result = _sconst(n, _F1)
    base = a
    while k > 0:
        if k & 1:
            result = _smul(result, base)
        k >>= 1
        if k:
            base = _smul(base, base)
    return result


def _sdiff(a: Sum, i: int) -> Sum:
    """d/dx_i of a sum: power rule on the monomial plus the atom coefficient."""
    out: Sum = {}
    for (mono, atom), coeff in a.items():
        if mono[i] > 0:
            key = (mono[:i] + (mono[i] - 1,) + mono[i + 1 :], atom)
            new = out.get(key, _F0) + coeff * mono[i]
            if new == 0:
                out.pop(key, None)
            else:
                out[key] = new
        lam = atom[i]
        if lam != 0:
            key = (mono, atom)
            new = out.get(key, _F0) + coeff * lam
            if new == 0:
                out.pop(key, None)
            else:
                out[key] = new
    return out


def _scontent(a: Sum) -> tuple[Mono, Atom]:
    """Componentwise minimum of monomial exponents and atom coefficients."""
    keys = iter(a)
    first_mono, first_atom = next(keys)
    mono = list(first_mono)
    atom = list(first_atom)
    for m, e in keys:
        for i, v in enumerate(m):
            if v < mono[i]:
                mono[i] = v
        for i, v in enumerate(e):
            if v < atom[i]:
                atom[i] = v
    return tuple(mono), tuple(atom)


def _seval(a: Sum, xs: Sequence[float]) -> float:
    total = 0.0
    for (mono, atom), coeff in a.items():
        value = float(coeff)
        for x, k in zip(xs, mono):
            if k:
                value *= x**k
        arg = 0.0
        for x, lam in zip(xs, atom):
            if lam:
                arg += float(lam) * x
        if arg:
            value *= math.exp(arg)
        total += value
    return total


def _seval_exact(a: Sum, xs: Sequence[Fraction]) -> Fraction:
    total = _F0
    for (mono, atom), coeff in a.items():
        arg = _F0
        for x, lam in zip(xs, atom):
            arg += lam * x
        if arg != 0:
            raise ExactEvaluationError(
                "exponential atom does not vanish at the point (value %s)" % arg
            )
        value = coeff
        for x, k in zip(xs, mono):
            if k:
                value *= x**k
        total += value
    return total


_F0 = Fraction(0)
_F1 = Fraction(1)


# ---------------------------------------------------------------------------
# the expression class
# ---------------------------------------------------------------------------


class Expr:
    """Immutable exact scalar function on a chart.

    Supports +, -, *, /, ** (integer powers), exact differentiation and both
    floating and exact evaluation.  Equality (``==``) is semantic: it cross
    multiplies and tests whether the canonical difference is the empty sum.
    """

    __slots__ = ("chart", "_num", "_dmono", "_dbase", "_dexp")

    def __init__(self, chart: Chart, num: Sum, dmono: Mono, dbase: Sum | None, dexp: int):
        # Internal constructor: callers go through _make/_from_num_den.
        self.chart = chart
        self._num = num
        self._dmono = dmono
        self._dbase = dbase
        self._dexp = dexp

    # -- constructors -------------------------------------------------------

    @classmethod
    def _make(cls, chart: Chart, num: Sum, dmono: Mono, dbase: Sum | None, dexp: int) -> "Expr":
        num = {key: coeff for key, coeff in num.items() if coeff != 0}
        n = chart.dimension
        zero_mono = (0,) * n
        if not num:
            return cls(chart, {}, zero_mono, None, 0)
        if dbase is not None and dexp == 0:
            dbase = None
        if any(dmono):
            mins = list(next(iter(num))[0])
            for mono, _atom in num:
                for i, v in enumerate(mono):
                    if v < mins[i]:
                        mins[i] = v
            cancel = tuple(min(a, b) for a, b in zip(mins, dmono))
            if any(cancel):
                shift = tuple(-c for c in cancel)
                num = _sscale(num, _F1, mono_shift=shift)
                dmono = tuple(a - b for a, b in zip(dmono, cancel))
        return cls(chart, num, dmono, dbase, dexp)

    @classmethod
    def _from_num_den(cls, chart: Chart, num: Sum, den: Sum) -> "Expr":
        """Quotient of two raw sums, normalizing the denominator."""
        den = {key: coeff for key, coeff in den.items() if coeff != 0}
        if not den:
            raise DivisionByZeroExprError("division by canonical zero")
        num = {key: coeff for key, coeff in num.items() if coeff != 0}
        n = chart.dimension
        if not num:
            return cls.zero(chart)
        mono_c, atom_c = _scontent(den)
        neg_atom = tuple(-a for a in atom_c)
        stripped = _sscale(den, _F1, mono_shift=tuple(-m for m in mono_c), atom_shift=neg_atom)
        lead = stripped[max(stripped)]
        if lead != 1:
            stripped = _sscale(stripped, _F1 / lead)
        # num / (lead * exp(atom_c) * x^mono_c * stripped)
        num = _sscale(num, _F1 / lead, atom_shift=neg_atom)
        if len(stripped) == 1:
            # after content stripping a single-term denominator is exactly 1
            return cls._make(chart, num, mono_c, None, 0)
        return cls._make(chart, num, mono_c, stripped, 1)

    @classmethod
    def zero(cls, chart: Chart) -> "Expr":
        n = chart.dimension
        return cls(chart, {}, (0,) * n, None, 0)

    @classmethod
    def constant(cls, chart: Chart, value) -> "Expr":
        n = chart.dimension
        return cls._make(chart, _sconst(n, Fraction(value)), (0,) * n, None, 0)

    @classmethod
    def one(cls, chart: Chart) -> "Expr":
        return cls.constant(chart, 1)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "Expr":
        try:
            i = chart.axis(name)
        except KeyError:
            raise UnknownCoordinateError("unknown coordinate %r" % name) from None
        n = chart.dimension
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls(chart, {(mono, (_F0,) * n): _F1}, (0,) * n, None, 0)

    @classmethod
    def exponential(cls, chart: Chart, coefficients: Sequence) -> "Expr":
        """exp of the linear form sum(coefficients[i] * x_i)."""
        n = chart.dimension
        atom = tuple(Fraction(c) for c in coefficients)
        if len(atom) != n:
            raise ExprError("exponential atom needs %d coefficients" % n)
        return cls(chart, {((0,) * n, atom): _F1}, (0,) * n, None, 0)

    # -- structure ----------------------------------------------------------

    @property
    def is_symbolically_zero(self) -> bool:
        return not self._num

    @property
    def denominator_is_one(self) -> bool:
        return self._dbase is None and not any(self._dmono)

    def _den_sum(self) -> Sum:
        """Expanded single-sum denominator (monic, content = x^dmono)."""
        n = self.chart.dimension
        out = _sconst(n, _F1)
        if self._dbase is not None:
            out = _spow(self._dbase, self._dexp, n)
        if any(self._dmono):
            out = _sscale(out, _F1, mono_shift=self._dmono)
        return out

    def is_zero(self, guard: bool = True) -> bool:
        """True iff the canonical numerator is the empty sum.

        A positive answer is additionally sanity-checked by evaluating the
        expression at seeded sample points near the base point (an assertion
        against canonicalization bugs, not a change of the return value).
        """
        result = not self._num
        if result and guard:
            for point in self._guard_points():
                value = self.evaluate(point)
                assert abs(value) <= 1e-9, (
                    "canonical zero evaluated to %r at %r" % (value, point)
                )
        return result

    def _guard_points(self) -> list[dict[str, float]]:
        def bad_denominator(point: dict[str, float]) -> bool:
            xs = [point[c] for c in self.chart.coordinates]
            return abs(self._den_eval(xs)) < ZERO_GUARD_DEN_CUTOFF

        return self.chart.sample_points(
            ZERO_GUARD_POINTS,
            ZERO_GUARD_SEED,
            box=self.chart.unit_box_around_base(),
            reject=bad_denominator,
        )

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Expr | None":
        if isinstance(other, Expr):
            self.chart.require_same(other.chart)
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.constant(self.chart, other)
        return None

    def __add__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num:
            return other
        if not other._num:
            return self
        a, b = self, other
        if a._dmono == b._dmono and a._dbase == b._dbase and a._dexp == b._dexp:
            return Expr._make(a.chart, _sadd(a._num, b._num), a._dmono, a._dbase, a._dexp)
        if a._dbase is None or b._dbase is None or a._dbase == b._dbase:
            base = a._dbase if a._dbase is not None else b._dbase
            ea = a._dexp if a._dbase is not None else 0
            eb = b._dexp if b._dbase is not None else 0
            e = max(ea, eb)
            dmono = tuple(max(x, y) for x, y in zip(a._dmono, b._dmono))
            n = a.chart.dimension
            num = _szero()
            for part, ep, dm in ((a, ea, a._dmono), (b, eb, b._dmono)):
                term = part._num
                if base is not None and e - ep:
                    term = _smul(term, _spow(base, e - ep, n))
                shift = tuple(x - y for x, y in zip(dmono, dm))
                if any(shift):
                    term = _sscale(term, _F1, mono_shift=shift)
                num = _sadd(num, term)
            return Expr._make(a.chart, num, dmono, base, e)
        da, db = a._den_sum(), b._den_sum()
        if da == db:
            return Expr._from_num_den(a.chart, _sadd(a._num, b._num), da)
        num = _sadd(_smul(a._num, db), _smul(b._num, da))
        return Expr._from_num_den(a.chart, num, _smul(da, db))

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.chart, _sneg(self._num), self._dmono, self._dbase, self._dexp)

    def __sub__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self, other
        if not a._num or not b._num:
            return Expr.zero(a.chart)
        num = _smul(a._num, b._num)
        dmono = tuple(x + y for x, y in zip(a._dmono, b._dmono))
        if a._dbase is None or b._dbase is None or a._dbase == b._dbase:
            base = a._dbase if a._dbase is not None else b._dbase
            e = (a._dexp if a._dbase is not None else 0) + (b._dexp if b._dbase is not None else 0)
            return Expr._make(a.chart, num, dmono, base, e)
        n = a.chart.dimension
        den = _smul(_spow(a._dbase, a._dexp, n), _spow(b._dbase, b._dexp, n))
        return Expr._make(a.chart, num, dmono, den, 1)

    __rmul__ = __mul__

    def _reciprocal(self) -> "Expr":
        if not self._num:
            raise DivisionByZeroExprError("division by canonical zero")
        n = self.chart.dimension
        num = _sconst(n, _F1)
        if self._dbase is not None:
            num = _spow(self._dbase, self._dexp, n)
        if any(self._dmono):
            num = _sscale(num, _F1, mono_shift=self._dmono)
        return Expr._from_num_den(self.chart, num, self._num)

    def __truediv__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other._reciprocal()

    def __rtruediv__(self, other) -> "Expr":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self._reciprocal()

    def __pow__(self, k) -> "Expr":
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer, got %r" % (k,))
        if k == 0:
            return Expr.one(self.chart)
        if k < 0:
            return self._reciprocal() ** (-k)
        n = self.chart.dimension
        return Expr._make(
            self.chart,
            _spow(self._num, k, n),
            tuple(v * k for v in self._dmono),
            self._dbase,
            self._dexp * k,
        )

    def __eq__(self, other) -> bool:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return (self - coerced).is_symbolically_zero

    __hash__ = None  # semantic equality is incompatible with hashing

    def equals(self, other) -> bool:
        return bool(self == other)

    # -- calculus ------------------------------------------------------------

    def differentiate(self, name: str) -> "Expr":
        """Exact partial derivative with respect to a chart coordinate."""
        try:
            i = self.chart.axis(name)
        except KeyError:
            raise UnknownCoordinateError("unknown coordinate %r" % name) from None
        if not self._num:
            return self
        if self._dbase is None and not any(self._dmono):
            return Expr._make(self.chart, _sdiff(self._num, i), self._dmono, None, 0)
        n = self.chart.dimension
        unit = tuple(1 if j == i else 0 for j in range(n))
        xi: Sum = {(unit, (_F0,) * n): _F1}
        num = _smul(_sdiff(self._num, i), xi)
        if self._dmono[i]:
            num = _sadd(num, _sscale(self._num, Fraction(-self._dmono[i])))
        if self._dbase is not None:
            num_b = _smul(num, self._dbase) if num else {}
            dbprime = _sdiff(self._dbase, i)
            correction = _sscale(_smul(_smul(self._num, xi), dbprime), Fraction(-self._dexp))
            num = _sadd(num_b, correction)
            dexp = self._dexp + 1
        else:
            dexp = 0
        dmono = tuple(v + u for v, u in zip(self._dmono, unit))
        return Expr._make(self.chart, num, dmono, self._dbase, dexp)

    def gradient(self) -> list["Expr"]:
        return [self.differentiate(c) for c in self.chart.coordinates]

    # -- evaluation ----------------------------------------------------------

    def _den_eval(self, xs: Sequence[float]) -> float:
        value = 1.0
        for x, k in zip(xs, self._dmono):
            if k:
                value *= x**k
        if self._dbase is not None:
            value *= _seval(self._dbase, xs) ** self._dexp
        return value

    def evaluate(self, point: Mapping[str, float] | Sequence[float], den_tolerance: float = 1e-12) -> float:
        """Floating evaluation; raises if the denominator nearly vanishes."""
        if isinstance(point, Mapping):
            xs = [float(point[c]) for c in self.chart.coordinates]
        else:
            xs = [float(v) for v in point]
            if len(xs) != self.chart.dimension:
                raise ExprError("point has wrong dimension")
        if not self._num:
            return 0.0
        den = self._den_eval(xs)
        if abs(den) <= den_tolerance:
            raise DegenerateEvaluationError(
                "denominator %r vanishes at %r (|value| = %g)" % (self.den_string(), xs, abs(den))
            )
        return _seval(self._num, xs) / den

    def evaluate_exact(self, point: Sequence) -> Fraction:
        """Exact rational evaluation; only possible where every atom vanishes."""
        xs = [Fraction(v) for v in point]
        if len(xs) != self.chart.dimension:
            raise ExprError("point has wrong dimension")
        if not self._num:
            return _F0
        den = _F1
        for x, k in zip(xs, self._dmono):
            if k:
                den *= x**k
        if self._dbase is not None:
            den *= _seval_exact(self._dbase, xs) ** self._dexp
        if den == 0:
            raise ExactEvaluationError("denominator vanishes at the point")
        return _seval_exact(self._num, xs) / den

    def provably_nonvanishing(self) -> bool:
        """True when the expression provably has no real zeros.

        Only the easy certificate is attempted: a single-term numerator with
        no monomial part (a nonzero rational times an exponential) never
        vanishes.  Multi-term sums may or may not have zeros; False means
        "unknown", not "has a zero".
        """
        if not self._num:
            return False
        if len(self._num) != 1:
            return False
        (mono, _atom), _coeff = next(iter(self._num.items()))
        return not any(mono)

    def as_rational_constant(self) -> Fraction | None:
        """The exact rational value if the expression is constant, else None."""
        if not self._num:
            return _F0
        if self.denominator_is_one and len(self._num) == 1:
            (mono, atom), coeff = next(iter(self._num.items()))
            if not any(mono) and not any(atom):
                return coeff
        try:
            guess = self.evaluate_exact(self.chart.base_point)
        except ExactEvaluationError:
            return None
        return guess if (self - guess).is_symbolically_zero else None

    # -- printing ------------------------------------------------------------

    def num_string(self) -> str:
        return _format_sum(self._num, self.chart)

    def den_string(self) -> str:
        return _format_sum(self._den_sum(), self.chart)

    def __str__(self) -> str:
        num = self.num_string()
        if self.denominator_is_one:
            return num
        return "(%s)/(%s)" % (num, self.den_string())

    def __repr__(self) -> str:
        return "Expr(%s)" % self


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------


def _format_linear_form(atom: Atom, chart: Chart) -> str:
    parts: list[str] = []
    for lam, name in zip(atom, chart.coordinates):
        if lam == 0:
            continue
        magnitude = abs(lam)
        body = name if magnitude == 1 else "%s*%s" % (magnitude, name)
        if not parts:
            parts.append("-" + body if lam < 0 else body)
        else:
            parts.append((" - " if lam < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def _format_term(coeff: Fraction, mono: Mono, atom: Atom, chart: Chart) -> str:
    factors: list[str] = []
    magnitude = abs(coeff)
    for k, name in zip(mono, chart.coordinates):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append("%s^%d" % (name, k))
    if any(atom):
        factors.append("exp(%s)" % _format_linear_form(atom, chart))
    if magnitude != 1 or not factors:
        factors.insert(0, str(magnitude))
    return "*".join(factors)


def _format_sum(terms: Sum, chart: Chart) -> str:
    if not terms:
        return "0"
    parts: list[str] = []
    for key in sorted(terms, reverse=True):
        mono, atom = key
        coeff = terms[key]
        body = _format_term(coeff, mono, atom, chart)
        if not parts:
            parts.append("-" + body if coeff < 0 else body)
        else:
            parts.append((" - " if coeff < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_SYMBOLS = set("+-*/^()")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
                tokens.append(("decimal", source[i:j], i))
            else:
                tokens.append(("int", source[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("ident", source[i:j], i))
            i = j
            continue
        raise ParseError("unexpected character %r" % ch, i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str, chart: Chart):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.chart = chart

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_op(self, op: str) -> None:
        kind, text, location = self.next()
        if kind != "op" or text != op:
            raise ParseError("expected %r, found %r" % (op, text or "end of input"), location)

    def parse(self) -> Expr:
        value = self.expr()
        kind, text, location = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input %r" % text, location)
        return value

    def expr(self) -> Expr:
        kind, text, _ = self.peek()
        negate = False
        if kind == "op" and text in "+-":
            self.next()
            negate = text == "-"
        value = self.term()
        if negate:
            value = -value
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if text == "+" else value - rhs
            else:
                return value

    def term(self) -> Expr:
        value = self.factor()
        while True:
            kind, text, location = self.peek()
            if kind == "op" and text in "*/":
                self.next()
                rhs = self.factor()
                if text == "*":
                    value = value * rhs
                else:
                    if rhs.is_symbolically_zero:
                        raise ParseError("division by zero", location)
                    value = value / rhs
            else:
                return value

    def factor(self) -> Expr:
        base = self.base()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.next()
            base = base ** self.signed_integer()
        return base

    def signed_integer(self) -> int:
        kind, text, location = self.next()
        sign = 1
        if kind == "op" and text in "+-":
            sign = -1 if text == "-" else 1
            kind, text, location = self.next()
        if kind == "decimal":
            raise ParseError("exponent must be an integer, found %r" % text, location)
        if kind != "int":
            raise ParseError("expected integer exponent, found %r" % (text or "end of input"), location)
        return sign * int(text)

    def base(self) -> Expr:
        kind, text, location = self.next()
        if kind == "int":
            return Expr.constant(self.chart, Fraction(int(text)))
        if kind == "decimal":
            return Expr.constant(self.chart, Fraction(text))
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "ident":
            if text == "exp":
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return self._exp_atom(inner, location)
            if text == "e" and "e" not in self.chart.coordinates:
                kind2, text2, _ = self.peek()
                if kind2 == "op" and text2 == "^":
                    self.next()
                    kind3, text3, loc3 = self.peek()
                    if not (kind3 == "op" and text3 == "("):
                        raise ParseError(
                            "exponent of e must be a parenthesized linear form", loc3
                        )
                    self.next()
                    inner = self.expr()
                    self.expect_op(")")
                    return self._exp_atom(inner, location)
                raise ParseError("identifier 'e' is only valid in e^(...)", location)
            if text in self.chart.coordinates:
                return Expr.coordinate(self.chart, text)
            raise ParseError("unknown identifier %r" % text, location)
        raise ParseError("expected a value, found %r" % (text or "end of input"), location)

    def _exp_atom(self, inner: Expr, location: int) -> Expr:
        if not inner.denominator_is_one:
            raise NonLinearExpArgumentError(
                "argument of exp must be a linear form in the coordinates, got %s" % inner
            )
        n = self.chart.dimension
        coefficients = [_F0] * n
        for (mono, atom), coeff in inner._num.items():
            if any(atom) or sum(mono) != 1:
                raise NonLinearExpArgumentError(
                    "argument of exp must be a linear form in the coordinates "
                    "with no constant part, got %s" % inner
                )
            coefficients[mono.index(1)] += coeff
        return Expr.exponential(self.chart, coefficients)


def parse(source: str, chart: Chart) -> Expr:
    """Parse an expression string against a chart's coordinates."""
    return _Parser(source, chart).parse()
