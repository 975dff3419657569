import json

import pytest

from qduality import catalog
from qduality.dual import augmentation_part, get_ambient, perp
from qduality.linalg import HSubmodule, PreconditionError, span
from qduality.quadruple import (ROLES, coinvariants, complete_from_one, ideal_from_invariants, mutate_hbar,
                                orthogonality_transport, qdp_roundtrip_check, qdp_transform,
                                verify_quadruple)

SL2 = catalog.builtin("sl2_standard")


def scalars(ch):
    return span(ch, [ch.vec({((0,) * 3, 0): 1})])


@pytest.fixture(scope="module")
def cartan():
    return SL2.quadruple("cartan", 3, 4)


@pytest.fixture(scope="module")
def amb():
    return get_ambient(SL2.presentation, 2, 3)


@pytest.mark.parametrize("side", ["U", "F"])
def test_coinvariants_edges(amb, side):
    ch = amb.chart(side)
    whole = HSubmodule.whole(ch)
    assert coinvariants(HSubmodule.zero(ch)) == scalars(ch)
    assert coinvariants(augmentation_part(whole)) == whole


@pytest.mark.parametrize("side", ["U", "F"])
def test_ideal_from_invariants_edges(amb, side):
    ch = amb.chart(side)
    whole = HSubmodule.whole(ch)
    assert ideal_from_invariants(scalars(ch)) == HSubmodule.zero(ch)
    assert ideal_from_invariants(whole) == augmentation_part(whole)


def test_cartan_relations(cartan):
    assert coinvariants(cartan.fI) == cartan.fC
    assert coinvariants(cartan.I) == cartan.C
    assert ideal_from_invariants(cartan.C) == cartan.I
    assert ideal_from_invariants(cartan.fC) == cartan.fI
    # the Cartan subalgebra is commutative: frakC = k[H] truncated, one monomial per degree
    assert cartan.fC.dim < cartan.fI.dim


def test_complete_from_one_edges(amb):
    U, F = amb.chart("U"), amb.chart("F")
    q = complete_from_one(HSubmodule.whole(U), "fC")
    assert q.I == HSubmodule.zero(F) and q.C == scalars(F)
    q = complete_from_one(scalars(U), "fC")
    assert q.I == augmentation_part(HSubmodule.whole(F)) and q.C == HSubmodule.whole(F)
    assert q.fI == HSubmodule.zero(U)


def test_complete_from_one_errors(amb, cartan):
    U = amb.chart("U")
    with pytest.raises(ValueError):
        complete_from_one(HSubmodule.whole(U), "J")
    # frakI is a left ideal, not a subalgebra
    with pytest.raises(PreconditionError):
        complete_from_one(cartan.fI, "fC")
    with pytest.raises(PreconditionError):
        complete_from_one(mutate_hbar(cartan, "fC").fC, "fC")


@pytest.mark.parametrize("role", ROLES)
def test_complete_from_any_member_is_idempotent(cartan, role):
    q = complete_from_one(cartan.member(role), role, cartan.shadow)
    for r in ROLES:
        assert q.member(r) == cartan.member(r), r


def test_verify_cartan(cartan):
    rep = verify_quadruple(cartan)
    assert rep.ok, [r for r in rep.rows if not r[1]]
    names = [n for n, _, _ in rep.rows]
    assert "rel(iv) frakI = U.frakC^+, frakC = U^cofrakI" in names
    assert any(n.startswith("specialization[") for n in names)


@pytest.mark.parametrize("role", ROLES)
def test_verify_detects_hbar_mutation(cartan, role):
    rep = verify_quadruple(mutate_hbar(cartan, role))
    failed = {n for n, ok, _ in rep.rows if not ok}
    assert f"saturation[{dict(I='I', C='C', fI='frakI', fC='frakC')[role]}]" in failed


def test_verify_trivial_and_whole():
    for seed in ("trivial", "whole"):
        rep = verify_quadruple(SL2.quadruple(seed, 2, 3))
        assert rep.ok, (seed, [r for r in rep.rows if not r[1]])


def test_qdp_transform_edges():
    q = SL2.quadruple("trivial", 3, 3)
    dq = qdp_transform(q)
    Fv = dq.fI.chart
    # k = 0 has complementary dual g*: the dual quadruple is the "whole" one
    assert dq.fC == HSubmodule.whole(Fv)
    assert dq.fI == augmentation_part(HSubmodule.whole(Fv))
    assert dq.kind == "dual" and not dq.partial
    with pytest.raises(ValueError):
        qdp_transform(dq)


def test_qdp_cartan_dual_verifies(cartan):
    dq = qdp_transform(cartan)
    rep = verify_quadruple(dq)
    assert rep.ok, [r for r in rep.rows if not r[1]]
    assert dq.shadow.k.dim == 2  # h^perp inside sl2^*


def test_roundtrip_and_transport(cartan):
    dq = qdp_transform(cartan)
    rt = qdp_roundtrip_check(cartan, dq)
    assert rt.ok and len(rt.rows) == 4
    assert orthogonality_transport(cartan, dq).ok


def test_double_perp_stable(cartan):
    for r in ROLES:
        S = cartan.member(r)
        assert perp(perp(S)) == S


def test_bundle_is_json(cartan):
    b = cartan.to_bundle()
    text = json.dumps(b, sort_keys=True)
    assert json.loads(text)["members"]["frakC"]["dim"] == cartan.fC.dim
    assert b["truncation"] == {"N": 3, "D": 4}
    assert set(b["members"]) == {"I", "C", "frakI", "frakC"}


def test_uprime_coinvariants_non_homogeneous():
    # the twisted seed is not graded: U'-side coinvariants must read the
    # coproduct degree-split, as on F
    q = SL2.quadruple("twisted_primitive(0)", 3, 4)
    dq = qdp_transform(q)
    Ifull, Cfull = perp(dq.fC), perp(dq.fI)
    assert coinvariants(Ifull) == Cfull
    assert ideal_from_invariants(Cfull) == Ifull
