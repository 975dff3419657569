import json
import os
import shutil
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from qduality import catalog
from qduality.quadruple import verify_quadruple
from qduality.semiclassics import coisotropy_check, specialize
from conftest import hopf

F_, H_, E_ = (1, 0, 0), (0, 1, 0), (0, 0, 1)


@pytest.mark.parametrize("name", catalog.names())
def test_entry_certificates(name):
    certs = catalog.builtin(name).certificates()
    assert certs == {"hopf_axioms": True, "confluence": True, "lie_bialgebra": True}


def test_unknown_names():
    with pytest.raises(catalog.CatalogError):
        catalog.builtin("sl3")
    with pytest.raises(catalog.CatalogError):
        catalog.builtin("axb").seed("twisted_primitive(1)")
    with pytest.raises(catalog.CatalogError):
        catalog.builtin("sl2_standard").seed("nope")


def test_abelian2_structures_vanish():
    g = catalog.builtin("abelian2").lie
    zero = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    assert [[list(map(Fr, r)) for r in t] for t in g.bracket] == zero
    assert [[list(map(Fr, r)) for r in t] for t in g.cobracket] == zero


@pytest.mark.parametrize("rho", [Fr(0), Fr(1), Fr(-2), Fr(1, 3)])
def test_twisted_primitive_specializes(rho):
    A = hopf("sl2_standard", 3)
    x = catalog.twisted_primitive_element(rho, A)
    want = {F_: Fr(1), E_: Fr(1)}
    if rho:
        want[H_] = -rho
    assert specialize(x) == want
    # X_rho is primitive mod h, so delta_2 starts at order h
    assert A.delta_n(x, 2).valuation() >= 1


def test_twisted_primitive_rho0_closed_form():
    A = hopf("sl2_standard", 4)
    x = catalog.twisted_primitive_element(0, A)
    assert x == A.parse("exp(-h*H/2)*E + F*exp(h*H/2)")


def test_twisted_seed_shadow_is_coisotropic():
    e = catalog.builtin("sl2_standard")
    s = e.seed("twisted_primitive(0)")
    k = e.subalgebra_datum(s)
    assert k.basis() == [[Fr(1), Fr(0), Fr(1)]]
    assert coisotropy_check(k, e.lie)["coisotropic"]


@settings(max_examples=25, deadline=None)
@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20))
def test_rho_to_line_is_injective(r1, r2):
    e = catalog.builtin("sl2_standard")
    k1 = e.subalgebra_datum(catalog.twisted_seed(r1))
    k2 = e.subalgebra_datum(catalog.twisted_seed(r2))
    assert (k1 == k2) == (r1 == r2)


@settings(max_examples=25, deadline=None)
@given(st.fractions(max_denominator=20))
def test_every_twisted_line_is_coisotropic(rho):
    e = catalog.builtin("sl2_standard")
    assert coisotropy_check(e.subalgebra_datum(catalog.twisted_seed(rho)), e.lie)["coisotropic"]


SEEDS = [(n, s) for n in catalog.names() for s in sorted(catalog.builtin(n).seeds)]


@pytest.mark.parametrize("name, seed", SEEDS)
def test_seed_coisotropic(name, seed):
    e = catalog.builtin(name)
    assert coisotropy_check(e.subalgebra_datum(e.seed(seed)), e.lie)["coisotropic"]


@pytest.mark.parametrize("name, seed", SEEDS)
def test_seed_quadruple_verifies(name, seed):
    rep = verify_quadruple(catalog.builtin(name).quadruple(seed, 3, 4))
    assert rep.ok, [r for r in rep.rows if not r[1]]


def test_mutation_is_not_coisotropic():
    k, g = catalog.mutation_datum("heis3_line_a")
    chk = coisotropy_check(k, g)
    assert chk["subalgebra"] and not chk["coideal"]


def test_pointed_quotient_is_C():
    e = catalog.builtin("sl2_standard")
    assert catalog.pointed_quotient(e, "cartan", 2, 3) == e.quadruple("cartan", 2, 3).C


def test_env_override(tmp_path, monkeypatch):
    src = catalog.catalog_dir()
    dst = tmp_path / "cat"
    shutil.copytree(src, dst)
    man = json.loads((dst / "manifest.json").read_text())
    man["version"] = "test"
    man["entries"]["axb"]["seeds"]["extra"] = {"k": [[1, 0]], "role": "fC", "generators": ["H"]}
    (dst / "manifest.json").write_text(json.dumps(man))
    monkeypatch.setenv(catalog.ENV_VAR, os.fspath(dst))
    assert catalog.load_manifest()["version"] == "test"
    assert "extra" in catalog.builtin("axb").seeds
    monkeypatch.delenv(catalog.ENV_VAR)
    assert "extra" not in catalog.builtin("axb").seeds
