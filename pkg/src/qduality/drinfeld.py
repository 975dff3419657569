"""Drinfeld's functors ( )' and ( )^vee and their four restrictions to
subgroup data: curlyvee, triangledown (function side -> enveloping side) and
shriek, lsh (enveloping side -> its lattice).

Truncation bookkeeping: multiplying by h^-1 costs one h-order, so curlyvee
and triangledown read inputs at precision N + 1 and produce outputs at N.
shriek and lsh intersect with the lattice {|m| <= k < N} (the "Y" chart).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from .algebra import AlgebraElement, monomials_up_to
from .dual import (Ambient, get_ambient, side_of, left_ideal, subalgebra, hbar_inverse, transfer,
                   augmentation_part, from_labels, QUEA_SIDES)
from .linalg import HSubmodule, Echelon, kernel, saturation_check, PreconditionError
from .scalars import frac_to_str

ZERO = Fraction(0)
ONE = Fraction(1)

# lattice side -> the enveloping side its h^-1 multiples live in
VEE_TARGET = {"F": "Fv", "Up": "U", "YFv": "Fv", "YU": "U"}


def _digest(S: HSubmodule) -> str:
    data = json.dumps(S.dump(repr), sort_keys=True).encode()
    return hashlib.sha256(data).hexdigest()[:16]


def _record(name, S_in, S_out, certificates):
    S_out.transcript = {
        "functor": name,
        "input": _digest(S_in),
        "input_chart": S_in.chart.name,
        "output_chart": S_out.chart.name,
        "certificates": certificates,
        "flags": sorted(S_out.flags),
        "output": _digest(S_out),
    }
    return S_out


def _require_saturated(S: HSubmodule, what):
    if not saturation_check(S):
        raise PreconditionError(f"{what}: input is not saturated")


# ---------------------------------------------------------------- ( )'

def prime_membership(u: AlgebraElement, certificate=False):
    """delta_n(u) in h^n U^(x)n for all n, read modulo h^N.

    The scan runs n = 1 .. N + deg(u); the extra step n_max + 1 is checked to
    vanish modulo h^N as a certificate that the finite scan sufficed."""
    alg = u.alg
    N = alg.N
    deg = max((sum(m) for m in u.terms), default=0)
    n_max = N + deg
    ok = True
    for n in range(1, n_max + 1):
        if alg.delta_n_terms(u.terms, n, min(n, N)):
            ok = False
            break
    cert = not alg.delta_n_terms(u.terms, n_max + 1, N)
    if certificate:
        return ok, {"n_max": n_max, "tail_vanishes": cert}
    return ok


def _terms_of(amb: Ambient, labelled: Dict):
    N = amb.N
    terms = {}
    for (m, k), x in labelled.items():
        c = terms.setdefault(m, [ZERO] * N)
        c[k] += x
    return terms


def uprime_basis(amb: Ambient) -> HSubmodule:
    """All elements of the window X(N, D) of U with delta_n divisible by h^n,
    solved degree by degree: each n cuts the current solution space."""
    chart = amb.chart("U")
    U = amb.U
    N = amb.N
    basis = [{i: ONE} for i in range(len(chart))]
    n = 1
    while True:
        top = max((sum(chart.coords[i][0]) for v in basis for i in v), default=0)
        if n > N + top:
            break
        images = []
        for v in basis:
            t = U.delta_n_terms(_terms_of(amb, chart.labelled(v)), n, min(n, N))
            images.append({(key, s): c[s] for key, c in t.items() for s in range(N) if c[s]})
        ker = kernel(images)
        new = []
        for comb in ker:
            w = {}
            for j, c in comb.items():
                for i, x in basis[j].items():
                    w[i] = w.get(i, ZERO) + c * x
            new.append({i: x for i, x in w.items() if x})
        ech = Echelon()
        for w in new:
            ech.add(w)
        basis = ech.rref()
        n += 1
    return HSubmodule.from_echelon(chart, _ech_of(basis), {"uprime"})


def _ech_of(rows):
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech


def rees_lattice(amb: Ambient, side="U") -> HSubmodule:
    """Span of h^k x_m with k >= |m| inside the enveloping window."""
    chart = amb.chart(side)
    return from_labels(chart, [{c: ONE} for c in chart.coords if c[1] >= sum(c[0])])


# ---------------------------------------------------------------- ( )^vee

@dataclass
class VeeRealization:
    """Generators jv_s = h^-1 j_s of H^vee, their brackets modulo h, and the
    algebra they generate in the enveloping window."""
    names: List[str]
    generators: List[Dict]           # labelled vectors in the target chart
    brackets: Dict                   # (mu, nu) -> {s: c}: [jv_mu, jv_nu] = sum c_s jv_s mod h
    closes_linearly: bool
    algebra: HSubmodule
    side: str
    residues: Dict = field(default_factory=dict)   # nonlinear parts of brackets mod h, if any

    def structure_constants(self):
        n = len(self.names)
        return [[[self.brackets.get((i, j), {}).get(s, ZERO) for s in range(n)] for j in range(n)]
                for i in range(n)]


def _bracket_mod_h(amb, side, x, y):
    xy = amb.mul_labelled(side, x, y)
    yx = amb.mul_labelled(side, y, x)
    out = {}
    for lab in set(xy) | set(yx):
        if lab[1] == 0:
            v = xy.get(lab, ZERO) - yx.get(lab, ZERO)
            if v:
                out[lab[0]] = v
    return out


def _realize(amb, side, names, gens, algebra):
    """Brackets of the generators mod h, expressed back in the generators
    through their h^0 parts (which must be linearly independent)."""
    k0 = [{lab[0]: x for lab, x in g.items() if lab[1] == 0} for g in gens]
    keys = sorted({m for v in k0 for m in v})
    kidx = {m: i for i, m in enumerate(keys)}
    ech = Echelon(track=True)
    for s, v in enumerate(k0):
        if ech.add({kidx[m]: x for m, x in v.items()}, {s: ONE}) is None:
            raise PreconditionError("parameter set is not independent modulo J^2")
    brackets, residues, linear = {}, {}, True
    for i in range(len(gens)):
        for j in range(len(gens)):
            br = _bracket_mod_h(amb, side, gens[i], gens[j])
            vec = {}
            extra = {}
            for m, x in br.items():
                if m in kidx:
                    vec[kidx[m]] = x
                else:
                    extra[m] = x
            r, tag = ech.reduce(vec, {})
            if r or extra:
                linear = False
                residues[(i, j)] = {"unexpressed": {str(m): frac_to_str(x) for m, x in extra.items()}}
            brackets[(i, j)] = {s: -c for s, c in tag.items() if c}
    return VeeRealization(names, gens, brackets, linear, algebra, side, residues)


def vee(amb: Ambient, side="F") -> VeeRealization:
    """H^vee for the function side H (F or U') at the truncation of ``amb``,
    on the parameters dual to / given by the generators: jv_g has label (g, 0)."""
    target = VEE_TARGET[side]
    names = [f"j{g}" for g in amb.pres.generators]
    gens = [{(amb.gen_label(g), 0): ONE} for g in range(amb.k)]
    alg = subalgebra(amb, target, gens)
    return _realize(amb, target, names, gens, alg)


def vee_pointed(A: HSubmodule, amb_out: Ambient = None) -> VeeRealization:
    """A^vee for a pointed (augmented, commutative mod h) subalgebra A of a
    function side: the algebra generated by h^-1 (A cap Ker eps).  Parameters
    are chosen among h^-1 (A cap Ker eps) with independent linear parts."""
    side, amb = side_of(A)
    if side not in ("F", "Up"):
        raise PreconditionError("vee_pointed needs a subalgebra of a function side")
    if not A.contains(A.chart.vec({amb.one_label(): ONE})):
        raise PreconditionError("missing augmentation: A is not unital")
    target = VEE_TARGET[side]
    out = amb_out or get_ambient(amb.pres, amb.N - 1, amb.D)
    Aplus = augmentation_part(A)
    gens_all = hbar_inverse(Aplus, out.chart(target))
    alg = subalgebra(out, target, gens_all.labelled_rows())
    # parameters: rows whose h^0 part is linear, independent mod decomposables
    chosen, names = [], []
    ech = Echelon()
    lin = {c: i for i, c in enumerate(monomials_up_to(amb.k, 1)) if sum(c) == 1}
    for r in gens_all.labelled_rows():
        v = {lin[m]: x for (m, kk), x in r.items() if kk == 0 and m in lin}
        if v and ech.add(v) is not None:
            chosen.append(r)
            names.append(f"jv{len(names)}")
    return _realize(out, target, names, chosen, alg)


# ---------------------------------------------------------------- the four functors

def curlyvee(I: HSubmodule, margin=1) -> HSubmodule:
    """I^curlyvee = sum_n h^-n I_H^(n-1) I, i.e. the left ideal of H^vee
    generated by h^-1 I; input at precision N + 1, output at N."""
    side, amb = side_of(I)
    _require_saturated(I, "curlyvee")
    target = VEE_TARGET[side]
    out = get_ambient(amb.pres, amb.N - 1, amb.D)
    gens = hbar_inverse(I, out.chart(target))
    S = left_ideal(out, target, gens.labelled_rows(), margin)
    return _record("curlyvee", I, S, {"input_saturated": True})


def triangledown(C: HSubmodule, margin=1) -> HSubmodule:
    """C^triangledown = k[[h]] 1 + sum_n h^-n (C cap J)^n."""
    side, amb = side_of(C)
    _require_saturated(C, "triangledown")
    target = VEE_TARGET[side]
    out = get_ambient(amb.pres, amb.N - 1, amb.D)
    gens = hbar_inverse(augmentation_part(C), out.chart(target))
    S = subalgebra(out, target, gens.labelled_rows(), margin)
    return _record("triangledown", C, S, {"input_saturated": True})


def _lattice_part(X: HSubmodule) -> HSubmodule:
    side, amb = side_of(X)
    if side not in QUEA_SIDES:
        raise PreconditionError("shriek/lsh act on an enveloping side")
    return transfer(X, amb.y_chart(side), "restrict")


def shriek(X: HSubmodule, certify=True) -> HSubmodule:
    """X^! = X cap U' (left ideal and two-sided coideal X)."""
    _require_saturated(X, "shriek")
    S = _lattice_part(X)
    certs = {"input_saturated": True}
    if certify:
        certs.update(_prime_certificates(X, S))
    return _record("shriek", X, S, certs)


def lsh(X: HSubmodule, certify=True) -> HSubmodule:
    """X^lsh = X cap U' (subalgebra and left coideal X); the certificate also
    checks delta_n(x) in h^n U^(x)(n-1) (x) X for n < N."""
    _require_saturated(X, "lsh")
    S = _lattice_part(X)
    certs = {"input_saturated": True}
    if certify:
        certs.update(_prime_certificates(X, S))
        certs["last_leg"] = _last_leg_certificate(X, S)
    return _record("lsh", X, S, certs)


def _row_element(amb, side, labelled):
    if side != "U":
        return None
    U = amb.U
    return AlgebraElement(U, _terms_of(amb, labelled))


def _prime_certificates(X, S):
    """Each lattice row lies in X and passes the delta_n test (U side only;
    on the F^vee side the lattice is F by construction)."""
    side, amb = side_of(X)
    if side != "U":
        return {"rows_in_input": all(X.contains(X.chart.vec(r)) for r in S.labelled_rows())}
    ok = True
    for r in S.labelled_rows():
        if not prime_membership(_row_element(amb, side, r)):
            ok = False
            break
    return {"rows_in_input": all(X.contains(X.chart.vec(r)) for r in S.labelled_rows()),
            "rows_pass_delta_test": ok}


def _last_leg_certificate(X, S):
    side, amb = side_of(X)
    if side != "U":
        return None
    U = amb.U
    N = amb.N
    for n in range(2, N):
        low = get_ambient(amb.pres, N - n, amb.D)
        Xlow = transfer(X, low.chart("U"), "project")
        for r in S.labelled_rows():
            t = U.delta_n_terms(_terms_of(amb, r), n, N)
            groups = {}
            for key, c in t.items():
                if any(c[:n]):
                    return False
                g = groups.setdefault(key[:-1], {})
                for s in range(n, N):
                    if c[s]:
                        lab = (key[-1], s - n)
                        g[lab] = g.get(lab, ZERO) + c[s]
            for g in groups.values():
                v = {lab: x for lab, x in g.items() if lab in Xlow.chart.index}
                if not Xlow.contains(Xlow.chart.vec(v)):
                    return False
    return True
