"""Built-in presentations, subgroup seeds and their quantisation recipes.

Entries are read from a manifest (data/manifest.json, or the directory
named by the QDUALITY_CATALOG environment variable).  A seed gives k inside
g and generators of one quadruple member; the rest of the quadruple follows
from complete_from_one.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .algebra import (AlgebraElement, HopfAlgebra, Presentation, check_confluence, check_hopf_axioms,
                      load_presentation)
from .dual import Ambient, get_ambient, left_ideal, subalgebra
from .quadruple import QuantizationQuadruple, SubgroupDatumClassical, complete_from_one
from .scalars import frac, frac_to_str
from .semiclassics import LieBialgebraData, LieSubalgebraDatum, lie_bialgebra_extract

ENV_VAR = "QDUALITY_CATALOG"
_TWISTED = re.compile(r"^twisted_primitive\((.+)\)$")


class CatalogError(LookupError):
    pass


def catalog_dir():
    return os.environ.get(ENV_VAR) or os.path.join(os.path.dirname(__file__), "data")


def load_manifest(path=None):
    with open(os.path.join(path or catalog_dir(), "manifest.json")) as fh:
        return json.load(fh)


@dataclass
class Seed:
    """k (rows in generator coordinates) and a recipe: the member ``role``
    generated by ``generators`` (expressions, or a callable alg -> elements)."""
    name: str
    k: List[List[Fraction]]
    role: str
    generators: object
    notes: str = ""

    def elements(self, alg: HopfAlgebra) -> List[AlgebraElement]:
        if callable(self.generators):
            return self.generators(alg)
        return [alg.parse(t) for t in self.generators]


@dataclass
class CatalogEntry:
    name: str
    presentation: Presentation
    seeds: Dict[str, Seed]
    notes: str = ""
    version: str = "1"
    _lie: Optional[LieBialgebraData] = field(default=None, repr=False)

    @property
    def lie(self) -> LieBialgebraData:
        if self._lie is None:
            self._lie = lie_bialgebra_extract(self.presentation)
        return self._lie

    def seed(self, name) -> Seed:
        if name in self.seeds:
            return self.seeds[name]
        m = _TWISTED.match(name)
        if m and self.name == "sl2_standard":
            try:
                rho = Fraction(m.group(1))
            except ValueError:
                raise CatalogError(f"twisted_primitive needs a rational, got {m.group(1)!r}") from None
            return twisted_seed(rho)
        raise CatalogError(f"unknown seed {name!r} for {self.name}")

    def certificates(self):
        return {"hopf_axioms": check_hopf_axioms(self.presentation).ok,
                "confluence": check_confluence(self.presentation) == [],
                "lie_bialgebra": all(self.lie.certificate.values())}

    def subalgebra_datum(self, seed: Seed) -> LieSubalgebraDatum:
        return LieSubalgebraDatum(seed.k, len(self.presentation.generators), seed.name)

    def quadruple(self, seed_name, N, D) -> QuantizationQuadruple:
        """The seed's quadruple at (N, D) with its classical shadow."""
        seed = self.seed(seed_name)
        amb = get_ambient(self.presentation, N, D)
        return build_quadruple(amb, seed, SubgroupDatumClassical(self.subalgebra_datum(seed), self.lie, D))


def seed_member(amb: Ambient, seed: Seed):
    gens = [amb.element_labels(x) for x in seed.elements(amb.U)]
    if seed.role == "fC":
        return subalgebra(amb, "U", gens)
    if seed.role == "fI":
        return left_ideal(amb, "U", gens)
    raise CatalogError(f"unsupported recipe role {seed.role!r}")


def build_quadruple(amb, seed, shadow=None) -> QuantizationQuadruple:
    return complete_from_one(seed_member(amb, seed), seed.role, shadow)


def twisted_primitive_element(rho, alg: HopfAlgebra) -> AlgebraElement:
    """X_rho rescaled to rational coefficients:
    L^-1 E + F L - rho q^(1/2) ((q + q^-1)/(q - q^-1)) (L - L^-1),
    L = exp(h H / 2), q = exp(h); the pole cancels against L - L^-1."""
    r = frac_to_str(rho)
    text = ("exp(-h*H/2)*E + F*exp(h*H/2) - (" + r + ")*exp(h/2)*(exp(h) + exp(-h))"
            "*inv((exp(h) - exp(-h))/h)*((exp(h*H/2) - exp(-h*H/2))/h)")
    return alg.parse(text)


def twisted_seed(rho) -> Seed:
    """k_rho = span{E + F - rho H}; frakI = U.S(X_rho), the left mirror of
    the right ideal X_rho.U (S reverses products and preserves coideals)."""
    rho = frac(rho)
    return Seed(f"twisted_primitive({frac_to_str(rho)})", [[Fraction(1), -rho, Fraction(1)]], "fI",
                lambda alg: [alg.antipode(twisted_primitive_element(rho, alg))],
                "left-converted through the antipode")


def pointed_quotient(entry: "CatalogEntry", seed_name, N, D):
    """The invariant functions C_h of a seed: a pointed (augmented, commutative
    mod h) subalgebra of F, the input of vee_pointed."""
    return entry.quadruple(seed_name, N, D).C


_ENTRIES: Dict = {}


def builtin(name) -> CatalogEntry:
    path = catalog_dir()
    key = (path, name)
    if key in _ENTRIES:
        return _ENTRIES[key]
    man = load_manifest(path)
    if name not in man["entries"]:
        raise CatalogError(f"unknown catalog entry {name!r}")
    e = man["entries"][name]
    pres = load_presentation(os.path.join(path, e["file"]))
    seeds = {s: Seed(s, [[Fraction(x) for x in v] for v in d["k"]], d["role"], list(d["generators"]),
                     d.get("notes", ""))
             for s, d in e["seeds"].items()}
    entry = CatalogEntry(name, pres, seeds, e.get("notes", ""), man.get("version", "1"))
    _ENTRIES[key] = entry
    return entry


def names():
    return sorted(load_manifest()["entries"])


def mutations():
    return load_manifest().get("mutations", {})


def mutation_datum(name):
    """(LieSubalgebraDatum, LieBialgebraData) of a stored non-coisotropic mutation."""
    m = mutations()[name]
    entry = builtin(m["algebra"])
    k = LieSubalgebraDatum([[Fraction(x) for x in v] for v in m["k"]], entry.lie.n, name)
    return k, entry.lie
