from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from qduality.linalg import (Chart, ChartMismatch, ClassicalSubspace, Echelon, HSubmodule, PreconditionError,
                             annihilator, equal, intersect, kernel, module_generators, module_sum,
                             saturation_check, shift_module, span, specialize_submodule)


def u(i):
    return tuple(int(j == i) for j in range(3))


def free(d, N):
    """R_N^d with coordinates (u(i), k) = h^k e_i (e_i labelled by a monomial)."""
    return Chart(f"R{N}^{d}", [(u(i), k) for i in range(d) for k in range(N)])


def mod(chart, *vecs):
    return span(chart, [chart.vec(v) for v in vecs])


def e(i, k=0, c=1):
    return {(u(i), k): c}


def test_span_examples():
    R = free(2, 2)
    S = mod(R, e(0, 1))
    assert S.dim == 1
    T = mod(R, e(0))
    assert T.dim == 2 and T.contains(R.vec(e(0, 1)))


def test_membership_and_intersection():
    R = free(2, 2)
    assert not mod(R, e(0, 1)).contains(R.vec(e(0)))
    S = mod(R, e(0), e(1, 1))
    assert intersect(S, S) == S
    a = mod(R, {(u(0), 0): 1, (u(1), 0): 1})
    b = mod(R, e(0), e(1))
    assert intersect(a, b) == a
    with pytest.raises(ChartMismatch):
        intersect(a, mod(free(2, 3), e(0)))


def test_saturation_examples():
    R = free(2, 2)
    assert saturation_check(mod(R, e(0)))
    assert not saturation_check(mod(R, e(0, 1)))
    with pytest.raises(PreconditionError):
        saturation_check(mod(R, e(0)), mod(R, e(1)))


def test_specialize_examples():
    R = free(2, 3)
    s = specialize_submodule(mod(R, {(u(0), 0): 1, (u(1), 1): 1}))
    assert s.vectors() == [{u(0): 1}]
    assert specialize_submodule(mod(R, e(0, 1)), check=False).dim == 0
    with pytest.raises(PreconditionError):
        specialize_submodule(mod(R, e(0, 1)))


def test_module_generators():
    R = free(3, 3)
    S = mod(R, e(0), e(1, 1), {(u(2), 0): 1, (u(0), 2): 5})
    gens = module_generators(S)
    assert len(gens) == 3
    assert span(R, gens) == S


def test_dump_is_pivot_ordered():
    R = free(2, 2)
    d = mod(R, e(1), {(u(0), 0): Fr(1, 2), (u(1), 1): 3}).dump()
    assert d["chart"] == {"name": "R2^2", "dim": 4}
    pivots = [row[0][0] for row in d["rows"]]
    assert pivots == sorted(pivots, key=lambda s: [str(c) for c in R.coords].index(s))


def test_kernel_by_hand():
    # images of e0, e1, e2: e0 -> (1, 0), e1 -> (0, 1), e2 -> (1, 1)
    ker = kernel([{0: 1}, {1: 1}, {0: 1, 1: 1}])
    assert len(ker) == 1
    (k,) = ker
    assert k[0] == k[1] == -k[2]


# ---------------------------------------------------------------- properties

@st.composite
def submodules(draw, d=3, N=3, count=2):
    R = free(d, N)
    out = []
    for _ in range(count):
        vecs = draw(st.lists(st.dictionaries(st.sampled_from(R.coords), st.integers(-2, 2), max_size=3),
                             max_size=3))
        out.append(span(R, [R.vec(v) for v in vecs]))
    return out


@settings(max_examples=60, deadline=None)
@given(submodules(count=3))
def test_lattice_laws(mods):
    S, T, U = mods
    assert S.is_shift_closed() and shift_module(S) <= S
    assert intersect(S, T) == intersect(T, S)
    assert module_sum(S, T) == module_sum(T, S)
    assert intersect(S, module_sum(S, T)) == S
    assert module_sum(S, intersect(S, T)) == S
    assert intersect(intersect(S, T), U) == intersect(S, intersect(T, U))
    assert equal(S, S) and (equal(S, T) == equal(T, S))


@settings(max_examples=60, deadline=None)
@given(submodules(count=1), st.permutations(range(3)))
def test_canonical_form(mods, perm):
    (S,) = mods
    # any spanning list gives identical RREF rows
    rows = list(reversed(S.rows))
    assert span(S.chart, rows) == S
    assert HSubmodule.from_echelon(S.chart, _ech(rows)).rows == S.rows


def _ech(rows):
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech


@settings(max_examples=60, deadline=None)
@given(submodules(count=1))
def test_saturated_dimension_bound(mods):
    (S,) = mods
    N = 3
    if saturation_check(S):
        spec = specialize_submodule(S)
        assert spec.dim * N >= S.dim
        # saturated submodules of a free module are free
        assert spec.dim * N == S.dim


@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=4), max_size=5))
def test_annihilator_rank_nullity(vecs):
    rows = [{i: Fr(x) for i, x in v.items() if x} for v in vecs]
    rows = [r for r in rows if r]
    rank = len(_ech(rows).rref())
    ann = annihilator(rows, 6)
    assert len(ann) + rank == 6
    for a in ann:
        for r in rows:
            assert sum(a.get(i, 0) * x for i, x in r.items()) == 0


def test_classical_restrict_degree():
    monos = [(0,), (1,), (2,)]
    V = ClassicalSubspace.from_vectors(monos, [{(1,): 1, (2,): 1}, {(0,): 1}])
    assert V.restrict_degree(1).vectors() == [{(0,): 1}]
    assert V.restrict_degree(2) == V
