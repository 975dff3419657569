from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from qduality.scalars import (INF, ContextMismatch, LaurentSeries, NotInvertible, TruncatedSeries,
                              exp_series, frac, frac_from_str, frac_to_str, invert, valuation)


def S(*cs, N=None):
    return TruncatedSeries(list(cs), N)


h = lambda N, p=1: TruncatedSeries.hbar(N, p)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, N=None):
    N = N or draw(st.integers(1, 6))
    return TruncatedSeries(draw(st.lists(rationals, min_size=N, max_size=N)), N)


@st.composite
def series_triple(draw):
    N = draw(st.integers(1, 6))
    return tuple(draw(series(N)) for _ in range(3))


def test_ring_ops_examples():
    assert (S(1, 1, N=3) * S(1, -1, N=3)) == S(1, 0, -1)
    s = S(3, Fr(1, 2), 7)
    assert S(0, N=3) + s == s
    a = LaurentSeries(1, S(0, 2, 0, Fr(1, 3)))
    b = LaurentSeries(1, S(0, 2, 0, 0))
    ab = a * b
    # h^-2 (4h^2 + 2/3 h^4) = 4 + 2/3 h^2
    assert [ab.coefficient(i) for i in range(0, 3)] == [4, 0, Fr(2, 3)]
    assert ab.to_series().coeffs[:3] == (4, 0, Fr(2, 3))


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        S(1, N=2) + S(1, N=3)
    with pytest.raises(ContextMismatch):
        LaurentSeries(0, S(1, N=2)) * LaurentSeries(0, S(1, N=3))


def test_valuation_examples():
    assert valuation(S(0, 0, Fr(3, 2), 0)) == 2
    assert valuation(S(0, N=4)) == INF
    q = exp_series(h(4))
    qi = exp_series(-h(4))
    d = q - qi
    assert valuation(d) == 1
    assert d == S(0, 2, 0, Fr(1, 3))


def test_invert_examples():
    assert invert(S(1, 1, N=3)) == S(1, -1, 1)
    assert invert(S(2)) == S(Fr(1, 2))
    with pytest.raises(NotInvertible):
        invert(h(3))
    # q - q^-1 with q = exp(h): h^-1 (1/2 - h^2/12 + ...), body coefficient checked by multiplying back
    N = 4
    d = LaurentSeries.from_series(exp_series(h(N)) - exp_series(-h(N)))
    di = d.inverse()
    assert di.shift == 1
    assert di.coefficient(-1) == Fr(1, 2)
    prod = d * di
    assert prod.to_series() == S(1, 0, 0, 0)


def test_exp_examples():
    assert exp_series(h(3)) == S(1, 1, Fr(1, 2))
    assert exp_series(S(0, N=3)) == S(1, 0, 0)
    assert exp_series(h(5)) * exp_series(-h(5)) == S(1, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        exp_series(S(1, 1))


def test_serialization_roundtrip():
    s = S(Fr(-3, 4), 0, 5)
    assert s.to_json() == ["-3/4", "0/1", "5/1"]
    assert TruncatedSeries.from_json(s.to_json()) == s
    assert frac_from_str(frac_to_str(Fr(6, -4))) == Fr(-3, 2)


@given(rationals)
def test_frac_accepts_mpq(x):
    gmpy2 = pytest.importorskip("gmpy2")
    assert frac(gmpy2.mpq(x.numerator, x.denominator)) == x
    assert frac(str(x)) == x


@settings(max_examples=60)
@given(series_triple())
def test_ring_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60)
@given(series_triple())
def test_valuation_of_product(t):
    a, b, _ = t
    if not a.is_zero() and not b.is_zero():
        v = min(valuation(a) + valuation(b), a.N)
        assert valuation(a * b) == (INF if v >= a.N else v)


@settings(max_examples=60)
@given(series())
def test_invert_two_sided(a):
    if a.coeffs[0] == 0:
        with pytest.raises(NotInvertible):
            invert(a)
        return
    one = TruncatedSeries.const(1, a.N)
    assert a * invert(a) == one and invert(a) * a == one


@settings(max_examples=60)
@given(series(), st.integers(0, 3))
def test_laurent_inverse(a, k):
    if a.is_zero():
        return
    x = LaurentSeries(k, a)
    y = x.inverse()
    p = x * y
    # x = h^(v-k) * unit is known to relative precision N - v; y is stored mod h^N,
    # so x*y is exact below h^min(N - v, N + v - k)
    v = valuation(a)
    top = min(a.N - v, a.N + v - k)
    assert all(p.coefficient(i) == (1 if i == 0 else 0) for i in range(0, top))


@settings(max_examples=40)
@given(series(), series())
def test_laurent_embedding_is_ring_hom(a, b):
    if a.N != b.N:
        return
    A, B = LaurentSeries.from_series(a), LaurentSeries.from_series(b)
    assert (A * B).to_series() == a * b
    assert (A + B).to_series() == a + b
