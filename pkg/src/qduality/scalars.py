"""Exact scalars: the truncated ring R_N = Q[[h]]/(h^N) and its h-inverted window.

Everything is built on :class:`fractions.Fraction`; nothing here ever touches
floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

INF = math.inf


class ContextMismatch(ValueError):
    """Raised when two values from different truncation contexts meet."""


class NotInvertible(ArithmeticError):
    pass


@dataclass(frozen=True)
class TruncationParams:
    """hbar_order N (series kept mod h^N) and filtration_degree D."""
    hbar_order: int
    filtration_degree: int

    def __post_init__(self):
        if int(self.hbar_order) < 1 or int(self.filtration_degree) < 1:
            raise ValueError("need N >= 1 and D >= 1")

    @property
    def N(self):
        return self.hbar_order

    @property
    def D(self):
        return self.filtration_degree


def frac(x) -> Fraction:
    """Any exact rational (int, str, Fraction, gmpy2 mpq) as a plain Fraction."""
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def frac_to_str(x: Fraction) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    p, _, q = s.partition("/")
    return Fraction(int(p), int(q or 1))


class TruncatedSeries:
    """sum_i coeffs[i] h^i modulo h^N."""

    __slots__ = ("coeffs", "N")

    def __init__(self, coeffs, N: int | None = None):
        cs = [frac(c) for c in coeffs]
        if N is None:
            N = len(cs)
        if N < 1:
            raise ValueError("N must be positive")
        cs = cs[:N] + [Fraction(0)] * (N - len(cs))
        self.coeffs = tuple(cs)
        self.N = N

    # constructors
    @classmethod
    def const(cls, c, N):
        return cls([c], N)

    @classmethod
    def hbar(cls, N, power=1):
        cs = [0] * N
        if power < N:
            cs[power] = 1
        return cls(cs, N)

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.const(other, self.N)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.N != self.N:
            raise ContextMismatch(f"series mod h^{self.N} vs mod h^{other.N}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.N)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.N)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(series_mul(self.coeffs, other.coeffs, self.N), self.N)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.const(other, self.N)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.N))

    def is_zero(self):
        return not any(self.coeffs)

    def shift(self, k=1):
        """Multiply by h^k (k >= 0)."""
        cs = [Fraction(0)] * k + list(self.coeffs)
        return TruncatedSeries(cs[: self.N], self.N)

    def truncate(self, N):
        return TruncatedSeries(self.coeffs[:N], N)

    def __repr__(self):
        terms = [f"{c}*h^{i}" for i, c in enumerate(self.coeffs) if c]
        return "TS(" + (" + ".join(terms) or "0") + f"; N={self.N})"

    def to_json(self):
        return [frac_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([frac_from_str(s) for s in data], len(data))


def series_mul(a, b, N):
    out = [Fraction(0)] * N
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), N - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def valuation(s) -> float:
    """Index of the first nonzero coefficient; +inf for zero."""
    if isinstance(s, LaurentSeries):
        v = valuation(s.body)
        return v - s.shift if v != INF else INF
    for i, c in enumerate(s.coeffs):
        if c:
            return i
    return INF


def _invert_unit(cs, N):
    if not cs[0]:
        raise NotInvertible("constant term is zero")
    inv0 = 1 / cs[0]
    out = [inv0] + [Fraction(0)] * (N - 1)
    for n in range(1, N):
        acc = sum((cs[k] * out[n - k] for k in range(1, n + 1) if k < len(cs)), Fraction(0))
        out[n] = -acc * inv0
    return out


def invert(s):
    if isinstance(s, LaurentSeries):
        return s.inverse()
    if valuation(s) != 0:
        raise NotInvertible("series is not a unit of k[[h]]/(h^N)")
    return TruncatedSeries(_invert_unit(s.coeffs, s.N), s.N)


def exp_series(s: TruncatedSeries) -> TruncatedSeries:
    """exp(s) for s of positive valuation; the sum is finite mod h^N."""
    if s.coeffs[0]:
        raise ValueError("exp needs an argument of valuation >= 1")
    N = s.N
    out = TruncatedSeries.const(1, N)
    term = TruncatedSeries.const(1, N)
    for i in range(1, N):
        term = term * s * Fraction(1, i)
        out = out + term
    return out


class LaurentSeries:
    """h^{-shift} * body, exact on the window [-shift, N - shift)."""

    __slots__ = ("shift", "body")

    def __init__(self, shift: int, body: TruncatedSeries):
        if shift < 0:
            raise ValueError("shift must be nonnegative")
        # normalise: strip leading zeros while shift > 0
        cs = list(body.coeffs)
        N = body.N
        if not any(cs):
            shift = 0
        while shift > 0 and not cs[0]:
            cs = cs[1:] + [Fraction(0)]
            shift -= 1
        self.shift = shift
        self.body = TruncatedSeries(cs, N)

    @classmethod
    def from_series(cls, s: TruncatedSeries):
        return cls(0, s)

    @property
    def N(self):
        return self.body.N

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            other = LaurentSeries(0, other)
        elif isinstance(other, (int, Fraction)):
            other = LaurentSeries(0, TruncatedSeries.const(other, self.N))
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if other.N != self.N:
            raise ContextMismatch(f"Laurent window N={self.N} vs N={other.N}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = (self, other) if self.shift >= other.shift else (other, self)
        body = a.body + b.body.shift(a.shift - b.shift)
        return LaurentSeries(a.shift, body)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.shift, -self.body)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentSeries(self.shift + other.shift, self.body * other.body)

    __rmul__ = __mul__

    def inverse(self):
        v = valuation(self.body)
        if v == INF:
            raise NotInvertible("zero is not invertible")
        if self.shift > 0:
            # body is a unit, result is h^shift * body^{-1}
            inv = invert(self.body).shift(self.shift)
            return LaurentSeries(0, inv)
        cs = list(self.body.coeffs[v:]) + [Fraction(0)] * v
        unit = TruncatedSeries(cs, self.N)
        return LaurentSeries(v, invert(unit))

    def coefficient(self, i: int) -> Fraction:
        """Coefficient of h^i (i in the window)."""
        j = i + self.shift
        if 0 <= j < self.N:
            return self.body.coeffs[j]
        return Fraction(0)

    def to_series(self) -> TruncatedSeries:
        if self.shift:
            raise ValueError("value has a pole in h")
        return self.body

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.shift == other.shift and self.body == other.body

    def __hash__(self):
        return hash((self.shift, self.body))

    def __repr__(self):
        return f"LS(h^-{self.shift} * {self.body!r})"
