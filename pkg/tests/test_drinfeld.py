import pytest

from qduality import catalog
from qduality.drinfeld import (curlyvee, lsh, prime_membership, rees_lattice, shriek, triangledown,
                               uprime_basis, vee, vee_pointed)
from qduality.dual import augmentation_part, get_ambient, is_left_ideal, is_subalgebra, transfer
from qduality.linalg import HSubmodule, intersect, span, PreconditionError, saturation_check, shift_module
from qduality.quadruple import classical_subspace
from qduality.semiclassics import lie_bialgebra_extract

SL2 = catalog.builtin("sl2_standard").presentation
AB = catalog.builtin("abelian2").presentation
F_, H_, E_ = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def scalars(ch):
    return span(ch, [ch.vec({((0,) * 3, 0): 1})])


@pytest.fixture(scope="module")
def cartan():
    return catalog.builtin("sl2_standard").quadruple("cartan", 3, 4)


def test_prime_membership_examples():
    U = get_ambient(SL2, 3, 4).U
    ok, cert = prime_membership(U.parse("h*E"), certificate=True)
    assert ok and cert["tail_vanishes"]
    assert not prime_membership(U.parse("E"))
    assert prime_membership(U.scalar(1))
    assert prime_membership(U.parse("h^2*E*F"))
    assert not prime_membership(U.parse("h*E*F"))


@pytest.mark.parametrize("N, D", [(1, 2), (2, 3), (3, 4)])
def test_uprime_is_rees_lattice(N, D):
    amb = get_ambient(SL2, N, D)
    V = uprime_basis(amb)
    assert V == rees_lattice(amb)
    ch = amb.chart("U")
    for x in ("h*E", "h*F", "h*H", "h^2*E*F"):
        if N > 1 and (N > 2 or x.count("h") == 1):
            assert V.contains(ch.vec(amb.element_labels(amb.U.parse(x))))
    if N == 1:
        # classical shadow: only the scalars survive delta_1(a) = a - eps(a) = 0
        assert V.dim == 1


def test_uprime_saturation_semantics():
    amb = get_ambient(SL2, 3, 4)
    V = uprime_basis(amb)
    ch = amb.chart("U")
    hE = ch.vec({(E_, 1): 1})
    # h E lies in U' and in h U, but E is not in U': U' is not saturated inside U
    assert V.contains(hE) and not V.contains(ch.vec({(E_, 0): 1}))
    assert not saturation_check(V)
    # inside its own lattice chart it is
    Y = transfer(V, amb.y_chart("U"), "restrict")
    assert saturation_check(Y)


def test_vee_abelian_is_symmetric_algebra():
    v = vee(get_ambient(AB, 2, 3), "F")
    assert v.closes_linearly
    assert all(not c for c in v.brackets.values())


def test_vee_brackets_are_dual_lie_bracket():
    g = lie_bialgebra_extract(SL2)
    amb = get_ambient(SL2, 2, 3)
    v = vee(amb, "F")
    assert v.closes_linearly
    assert v.structure_constants() == g.dual().bracket
    w = vee(amb, "Up")
    assert w.closes_linearly
    assert w.structure_constants() == g.bracket
    # (U')^vee recovers the whole enveloping window
    assert w.algebra == HSubmodule.whole(amb.chart("U"))


def test_functor_trivial_cases():
    amb = get_ambient(SL2, 3, 3)
    out = get_ambient(SL2, 2, 3)
    F, U = amb.chart("F"), amb.chart("U")
    zeroF, wholeF = HSubmodule.zero(F), HSubmodule.whole(F)
    assert curlyvee(zeroF).dim == 0
    J = augmentation_part(wholeF)
    assert curlyvee(J) == augmentation_part(HSubmodule.whole(out.chart("Fv")))
    assert triangledown(scalars(F)) == scalars(out.chart("Fv"))
    assert triangledown(wholeF) == HSubmodule.whole(out.chart("Fv"))
    assert shriek(HSubmodule.zero(U)).dim == 0
    Y = amb.y_chart("U")
    assert lsh(scalars(U)) == scalars(Y)
    assert lsh(HSubmodule.whole(U)) == HSubmodule.whole(Y)


def test_shriek_equals_intersection_with_uprime():
    amb = get_ambient(SL2, 3, 3)
    U = amb.chart("U")
    aug = augmentation_part(HSubmodule.whole(U))
    V = uprime_basis(amb)
    assert shriek(aug) == transfer(intersect(aug, V), amb.y_chart("U"), "project")


def test_functors_on_cartan(cartan):
    q = cartan
    Iv, Ct = curlyvee(q.I), triangledown(q.C)
    fIs, fCl = shriek(q.fI), lsh(q.fC)
    # flavor transport
    assert is_left_ideal(Iv) and is_subalgebra(Ct)
    # monotone inclusions: I sits inside I^curlyvee, X^! inside X
    Yv = Iv.chart.meta["ambient"].y_chart("Fv")
    low = transfer(q.I, Yv, "project")
    assert Iv.contains(transfer(low, Iv.chart, "project"))
    assert transfer(Ct, Yv, "restrict") == transfer(q.C, Yv, "project")
    for S, X in ((fIs, q.fI), (fCl, q.fC)):
        for r in S.labelled_rows():
            assert X.contains(X.chart.vec(r))
    # shriek and lsh agree with the intersection with U'
    V = uprime_basis(q.ambient)
    Y = q.ambient.y_chart("U")
    assert fIs == transfer(intersect(q.fI, V), Y, "project")
    assert fCl == transfer(intersect(q.fC, V), Y, "project")
    assert fIs.transcript["certificates"]["rows_pass_delta_test"]
    assert fCl.transcript["certificates"]["last_leg"]


def test_transcripts_are_recorded(cartan):
    S = curlyvee(cartan.I)
    t = S.transcript
    assert t["functor"] == "curlyvee" and t["certificates"]["input_saturated"]
    assert len(t["input"]) == len(t["output"]) == 16
    assert curlyvee(cartan.I).transcript == t


def test_functors_refuse_unsaturated(cartan):
    for f, role in ((curlyvee, "I"), (triangledown, "C"), (shriek, "fI"), (lsh, "fC")):
        with pytest.raises(PreconditionError):
            f(shift_module(cartan.member(role)))


def test_vee_pointed_cartan_quotient():
    C = catalog.pointed_quotient(catalog.builtin("sl2_standard"), "cartan", 4, 4)
    v = vee_pointed(C)
    assert v.closes_linearly and len(v.names) == 2
    dims = [classical_subspace(v.algebra, d, "restrict").dim for d in range(4)]
    assert dims == [1, 3, 6, 10]


def test_vee_pointed_commutative_and_group_case():
    amb = get_ambient(AB, 3, 3)
    v = vee_pointed(HSubmodule.whole(amb.chart("F")))
    assert v.closes_linearly and all(not c for c in v.brackets.values())
    amb = get_ambient(SL2, 3, 3)
    vp = vee_pointed(HSubmodule.whole(amb.chart("F")))
    vg = vee(get_ambient(SL2, 2, 3), "F")
    assert vp.structure_constants() == vg.structure_constants()


def test_vee_pointed_needs_unit():
    amb = get_ambient(SL2, 3, 3)
    J = augmentation_part(HSubmodule.whole(amb.chart("F")))
    with pytest.raises(PreconditionError, match="augmentation"):
        vee_pointed(J)
