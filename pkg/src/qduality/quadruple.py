"""Quantisation quadruples (I, C, frakI, frakC) of a subgroup and their
transformation under the Drinfeld functors.

Members: I (left ideal, two-sided coideal of F), C (subalgebra, left coideal
of F), frakI (left ideal, two-sided coideal of U), frakC (subalgebra, left
coideal of U).  Coideal flavours are checked on the partner side, where
they become multiplicative closure: X is a coideal iff X^perp is a
subalgebra, and a left coideal iff X^perp is a left ideal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .algebra import Report, deg_lex_key, monomials_up_to
from .dual import (Ambient, get_ambient, side_of, perp, left_ideal, subalgebra, transfer,
                   augmentation_part, is_left_ideal, is_subalgebra, QUEA_SIDES, LATTICE_SIDES)
from .drinfeld import curlyvee, triangledown, shriek, lsh
from .linalg import (HSubmodule, Echelon, Chart, ClassicalSubspace, Q, kernel, saturation_check,
                     specialize_submodule, shift_module, PreconditionError)
from .semiclassics import LieBialgebraData, LieSubalgebraDatum, classical_presentation, complementary_dual_lie
from . import dual as _dual
from .scalars import frac

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------- coinvariants

def _coproduct_labels(amb: Ambient, side, coord):
    """Delta of one coordinate as {left monomial: right labelled vector}.
    Left legs are the basis x_a (label (a, 0) on quea sides, (a, |a|) on
    function sides); powers of h are carried by the right leg."""
    m, k = coord
    out = {}

    def put(a, lab, c):
        d = out.setdefault(a, {})
        d[lab] = d.get(lab, ZERO) + c

    if side == "U":
        for (a, b), c in amb.U.cop_mono(m).items():
            for s, x in enumerate(c):
                if x:
                    put(a, (b, k + s), x)
    elif side == "Up":
        base = k - sum(m)
        for (a, b), c in amb.R.cop_mono(m).items():
            for s, x in enumerate(c):
                if x:
                    put(a, (b, sum(b) + base + s), x)
    elif side == "Fv":
        for a, b, c in _inverse_product(amb, "R").get(m, ()):
            for s, x in enumerate(c):
                if x:
                    put(a, (b, k + s), x)
    elif side == "F":
        base = k - sum(m)
        for a, b, c in _inverse_product(amb, "U").get(m, ()):
            for s, x in enumerate(c):
                if x:
                    put(a, (b, sum(b) + base + s), x)
    return out


def _inverse_product(amb, which):
    key = ("invprod", which)
    idx = amb._index.get(key)
    if idx is None:
        alg = amb.R if which == "R" else amb.U
        top = amb.D + amb.N - 1
        monos = monomials_up_to(amb.k, top)
        idx = {}
        for a in monos:
            for b in monos:
                if sum(a) + sum(b) > top + amb.N:
                    continue
                for o, c in alg._mono_mul(a, b).items():
                    if sum(o) <= top:
                        idx.setdefault(o, []).append((a, b, c))
        amb._index[key] = idx
    return idx


def _right_charts(amb, side, a, K):
    """(h-power on the left leg, chart) pairs against which right legs paired
    with x_a are tested.  On the lattice sides F and U' the coproduct is only
    defined degree-split: h^i x_a (x) psi is read on elements of total degree
    <= D, so psi is multiplied by h^i and read on degree <= D - |a| + i."""
    if side not in LATTICE_SIDES:
        return [(0, K.chart)]
    out = []
    for i in range(max(0, sum(a) - amb.D), amb.N):
        Da = min(amb.D, amb.D - sum(a) + i)
        key = (side + "split", Da)
        ch = amb._index.get(key)
        if ch is None:
            ch = Chart(f"{side}{amb.pres.name}[N={amb.N},D={Da}]split", _dual.lattice_coords(amb.k, amb.N, Da),
                       lambda m: sum(m), {"side": side, "N": amb.N, "D": Da, "ambient": amb})
            amb._index[key] = ch
        out.append((i, ch))
    return out


def coinvariants(K: HSubmodule) -> HSubmodule:
    """H^{co K} = {y : Delta(y) - y (x) 1 in H (x) K}, solved linearly."""
    side, amb = side_of(K)
    chart = K.chart
    one = (0,) * amb.k
    quea = side in QUEA_SIDES
    projected = {chart.name: K}
    images = []
    for coord in chart.coords:
        m, k = coord
        legs = _coproduct_labels(amb, side, coord)
        # subtract y (x) 1: left leg m, right leg the unit with y's h-power
        unit_lab = (one, k if quea else k - sum(m))
        d = legs.setdefault(m, {})
        d[unit_lab] = d.get(unit_lab, ZERO) - ONE
        img = {}
        for a, vec in legs.items():
            for i, rc in _right_charts(amb, side, a, K):
                Ka = projected.get(rc.name)
                if Ka is None:
                    Ka = projected[rc.name] = transfer(K, rc, "project")
                v = rc.vec({(b, kb + i): x for (b, kb), x in vec.items()})
                r, _ = Ka._echelon().reduce(v)
                for j, x in r.items():
                    img[(a, i, j)] = x
        images.append(img)
    ech = Echelon()
    for comb in kernel(images):
        ech.add(comb)
    return HSubmodule.from_echelon(chart, ech)


def ideal_from_invariants(A: HSubmodule, margin=1) -> HSubmodule:
    """H . A^+ (left ideal generated by the augmentation part of A)."""
    side, amb = side_of(A)
    return left_ideal(amb, side, augmentation_part(A).labelled_rows(), margin)


# ---------------------------------------------------------------- classical shadows

_CLASSICAL = {}


def classical_ambient(g: LieBialgebraData, D: int) -> Ambient:
    """Ambient of U(g) (primitive generators) at h-order 1: plain vector spaces."""
    key = repr(g.to_json())
    pres = _CLASSICAL.get(key)
    if pres is None:
        pres = _CLASSICAL[key] = classical_presentation(g)
    return get_ambient(pres, 1, D)


def _gen_vector(amb, v, label_k=0):
    return {(amb.gen_label(i), label_k): frac(x) for i, x in enumerate(v) if x}


@dataclass
class SubgroupDatumClassical:
    """k inside a Lie bialgebra g and the four classical objects to degree D:
    I (vanishing ideal), C (invariant functions), frakI = U(g).k, frakC = U(k)."""
    k: LieSubalgebraDatum
    g: LieBialgebraData
    D: int
    members: Dict[str, HSubmodule] = field(default_factory=dict)

    def __post_init__(self):
        amb = classical_ambient(self.g, self.D)
        gens = [_gen_vector(amb, v) for v in self.k.basis()]
        fI = left_ideal(amb, "U", gens)
        fC = subalgebra(amb, "U", gens)
        self.members = {"I": perp(fC), "C": perp(fI), "fI": fI, "fC": fC}
        self.ambient = amb

    def relations(self) -> Report:
        """Orthogonality (1) and the subgroup-space correspondence (2)."""
        m = self.members
        rep = Report()
        rep.add("classical(1) I = frakC^perp, C = frakI^perp",
                perp(m["fC"]) == m["I"] and perp(m["fI"]) == m["C"])
        rep.add("classical(2) I = F.C^+, frakI = U.frakC^+",
                ideal_from_invariants(m["C"]) == m["I"] and ideal_from_invariants(m["fC"]) == m["fI"])
        rep.add("classical(2) C = F^coI, frakC = U^cofrakI",
                coinvariants(m["I"]) == m["C"] and coinvariants(m["fI"]) == m["fC"])
        return rep

    def to_json(self):
        return {"k": [[str(x) for x in v] for v in self.k.basis()], "lie_bialgebra": self.g.to_json(),
                "D": self.D, "dims": {r: S.dim for r, S in sorted(self.members.items())}}


def classical_subspace(S: HSubmodule, d: int, mode: str) -> ClassicalSubspace:
    """h = 0 image of S cut to degree <= d: 'restrict' (subspace of an
    enveloping algebra) or 'project' (functionals read on degree <= d)."""
    sp = specialize_submodule(S)
    monos = sorted((m for m in monomials_up_to(len(sp.monos[0]) if sp.monos else 0, d)), key=deg_lex_key)
    if mode == "restrict":
        sp = sp.restrict_degree(d)
    vecs = [{m: x for m, x in v.items() if sum(m) <= d} for v in sp.vectors()]
    return ClassicalSubspace.from_vectors(monos, vecs)


def _vee_pbw(amb: Ambient, n):
    """Ordered product of the generators j_mu of F^vee, mod h, as {phi monomial: coeff}."""
    cur = {amb.one_label(): ONE}
    for g, e in enumerate(n):
        for _ in range(e):
            cur = amb.mul_labelled("Fv", cur, {(amb.gen_label(g), 0): ONE})
            cur = {lab: x for lab, x in cur.items() if lab[1] == 0}
    return {m: x for (m, _), x in cur.items()}


def classical_in_vee(S_classical: HSubmodule, amb: Ambient, d: int, mode: str) -> ClassicalSubspace:
    """Transport a classical object of U(g*) (enveloping, mode 'restrict') or
    of its dual (functions, mode 'project') into the h = 0 coordinates of
    F^vee (phi_m) or of U' (u_m), through the PBW products of the j_mu."""
    k = amb.k
    monos = sorted(monomials_up_to(k, d), key=deg_lex_key)
    T = {n: _vee_pbw(amb, n) for n in monos}
    cl = classical_subspace(S_classical, d, mode)
    vecs = []
    for v in cl.vectors():
        if mode == "restrict":
            out = {}
            for n, x in v.items():
                for m, y in T[n].items():
                    out[m] = out.get(m, ZERO) + x * y
            vecs.append(out)
        else:
            vecs.append(v)
    if mode == "restrict":
        return ClassicalSubspace.from_vectors(monos, vecs)
    # functions: a polynomial s in the u_m takes the value sum_m s_m T(n)_m on
    # PBW n, so a classical functional f has u-coordinates s = T^-1 f
    ech_rows = []
    Tmat = [[T[n].get(m, ZERO) for m in monos] for n in monos]
    inv = _invert(Tmat)
    for v in vecs:
        f = [v.get(n, ZERO) for n in monos]
        s = [sum(f[i] * inv[j][i] for i in range(len(monos))) for j in range(len(monos))]
        ech_rows.append({monos[j]: s[j] for j in range(len(monos)) if s[j]})
    return ClassicalSubspace.from_vectors(monos, ech_rows)


def _invert(M):
    n = len(M)
    A = [[Q(x) for x in r] + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [r[n:] for r in A]


# ---------------------------------------------------------------- quadruples

ROLES = ("I", "C", "fI", "fC")
ROLE_NAMES = {"I": "I", "C": "C", "fI": "frakI", "fC": "frakC"}


@dataclass
class QuantizationQuadruple:
    """Four explicit members.  kind 'base': I, C in F and frakI, frakC in U at
    (N, D).  kind 'dual': frakI, frakC in F^vee at (N-1, D) and I, C in the
    lattice chart of U' at N (the output of qdp_transform)."""
    I: HSubmodule
    C: HSubmodule
    fI: HSubmodule
    fC: HSubmodule
    shadow: Optional[SubgroupDatumClassical] = None
    kind: str = "base"
    certificates: Dict = field(default_factory=dict)
    partial: bool = False

    def member(self, role):
        return getattr(self, role)

    @property
    def ambient(self) -> Ambient:
        return side_of(self.fI)[1]

    def replace(self, **members):
        d = {r: self.member(r) for r in ROLES}
        d.update(members)
        return QuantizationQuadruple(shadow=self.shadow, kind=self.kind, **d)

    def to_bundle(self):
        amb = self.ambient
        return {
            "kind": self.kind,
            "algebra": amb.pres.name,
            "truncation": {"N": amb.N, "D": amb.D},
            "members": {ROLE_NAMES[r]: dict(self.member(r).dump(_fmt_label), dim=self.member(r).dim,
                                            transcript=getattr(self.member(r), "transcript", None))
                        for r in ROLES},
            "shadow": self.shadow.to_json() if self.shadow else None,
            "certificates": self.certificates,
            "partial": self.partial,
        }


def _fmt_label(c):
    m, k = c
    return "x" + ".".join(map(str, m)) + f"@{k}"


def _flavor_checks(role, S):
    """(left ideal | subalgebra) on S itself, coideal flavour through S^perp."""
    if role in ("I", "fI"):
        return is_left_ideal(S) and is_subalgebra(perp(S))
    return is_subalgebra(S) and is_left_ideal(perp(S))


def complete_from_one(x: HSubmodule, which: str, shadow=None) -> QuantizationQuadruple:
    """The whole quadruple from one member via perps, H.A^+ and coinvariants."""
    if which not in ROLES:
        raise ValueError(f"unknown member {which!r}")
    if not saturation_check(x):
        raise PreconditionError(f"{ROLE_NAMES[which]}: not saturated")
    if not _flavor_checks(which, x):
        raise PreconditionError(f"{ROLE_NAMES[which]}: wrong flavour")
    if which == "fC":
        fC = x
        fI = ideal_from_invariants(fC)
    elif which == "fI":
        fI = x
        fC = coinvariants(fI)
    elif which == "I":
        fC = perp(x)
        fI = ideal_from_invariants(fC)
    else:
        fI = perp(x)
        fC = coinvariants(fI)
    I = x if which == "I" else perp(fC)
    C = x if which == "C" else perp(fI)
    return QuantizationQuadruple(I, C, fI, fC, shadow)


def _spec_compare(S, classical, d, mode):
    return classical_subspace(S, d, mode) == classical_subspace(classical, d, mode)


def verify_quadruple(q: QuantizationQuadruple) -> Report:
    """Flavour, saturation and specialisation of every member, the four
    relations (i)-(iv), and the classical relations of the shadow."""
    if q.kind == "dual":
        return _verify_dual(q)
    rep = Report()
    for r in ROLES:
        rep.add(f"flavor[{ROLE_NAMES[r]}]", _flavor_checks(r, q.member(r)))
    sat = {r: saturation_check(q.member(r)) for r in ROLES}
    for r in ROLES:
        rep.add(f"saturation[{ROLE_NAMES[r]}]", sat[r])
    if q.shadow is not None:
        D = q.ambient.D
        for r in ROLES:
            mode = "project" if r in ("I", "C") else "restrict"
            ok = sat[r] and _spec_compare(q.member(r), q.shadow.members[r], D, mode)
            rep.add(f"specialization[{ROLE_NAMES[r]}]", ok)
    rep.add("rel(i) I = frakC^perp, frakC = I^perp", perp(q.fC) == q.I and perp(q.I) == q.fC)
    rep.add("rel(ii) frakI = C^perp, C = frakI^perp", perp(q.C) == q.fI and perp(q.fI) == q.C)
    rep.add("rel(iii) I = F.C^+, C = F^coI",
            ideal_from_invariants(q.C) == q.I and coinvariants(q.I) == q.C)
    rep.add("rel(iv) frakI = U.frakC^+, frakC = U^cofrakI",
            ideal_from_invariants(q.fC) == q.fI and coinvariants(q.fI) == q.fC)
    if q.shadow is not None:
        for row in q.shadow.relations().rows:
            rep.add(*row)
    return rep


def mutate_hbar(q: QuantizationQuadruple, role="I") -> QuantizationQuadruple:
    """The quadruple with one member replaced by h times itself."""
    return q.replace(**{role: shift_module(q.member(role))})


# ---------------------------------------------------------------- the duality principle

def _dual_shadow(q: QuantizationQuadruple, D):
    if q.shadow is None:
        return None
    kp = complementary_dual_lie(q.shadow.k, q.shadow.g)
    return SubgroupDatumClassical(kp, q.shadow.g.dual(), D)


def qdp_transform(q: QuantizationQuadruple) -> QuantizationQuadruple:
    """(I, C, frakI, frakC) at (N, D) -> (frakI^!, frakC^lsh, I^curlyvee, C^triangledown),
    a quadruple for the complementary dual subgroup over (F^vee, U')."""
    if q.kind != "base":
        raise ValueError("qdp_transform acts on base quadruples")
    amb = q.ambient
    Iv, Ct = curlyvee(q.I), triangledown(q.C)
    Ish, Cl = shriek(q.fI), lsh(q.fC)
    partial = any("partial" in S.flags for S in (Iv, Ct, Ish, Cl))
    out = QuantizationQuadruple(Ish, Cl, Iv, Ct, _dual_shadow(q, amb.D), kind="dual", partial=partial)
    out.certificates = {ROLE_NAMES[r]: getattr(out.member(r), "transcript", None) for r in ROLES}
    return out


def _lattice_full(q):
    """Members I, C of a dual quadruple as full U'-window objects (perps of
    the F^vee members) and the lattice chart they are compared in."""
    amb_v = side_of(q.fI)[1]
    Ifull, Cfull = perp(q.fC), perp(q.fI)
    return Ifull, Cfull, amb_v.y_chart("U")


def _verify_dual(q: QuantizationQuadruple) -> Report:
    rep = Report()
    Ifull, Cfull, Y = _lattice_full(q)
    same = lambda S, T: transfer(S, Y, "project") == transfer(T, Y, "project")
    rep.add("flavor[I]", _flavor_checks("I", Ifull) and same(q.I, Ifull))
    rep.add("flavor[C]", _flavor_checks("C", Cfull) and same(q.C, Cfull))
    rep.add("flavor[frakI]", _flavor_checks("fI", q.fI))
    rep.add("flavor[frakC]", _flavor_checks("fC", q.fC))
    sat = {r: saturation_check(q.member(r)) for r in ROLES}
    for r in ROLES:
        rep.add(f"saturation[{ROLE_NAMES[r]}]", sat[r])
    if q.shadow is not None:
        amb_v = side_of(q.fI)[1]
        D = amb_v.D
        dl = min(D, side_of(q.I)[1].N - 1)
        for r in ROLES:
            if r in ("I", "C"):
                ok = sat[r] and (classical_subspace(q.member(r), dl, "project")
                                 == classical_in_vee(q.shadow.members[r], amb_v, dl, "project"))
            else:
                ok = sat[r] and (classical_subspace(q.member(r), D, "restrict")
                                 == classical_in_vee(q.shadow.members[r], amb_v, D, "restrict"))
            rep.add(f"specialization[{ROLE_NAMES[r]}]", ok)
    rep.add("rel(i) I = frakC^perp, frakC = I^perp", same(q.I, Ifull) and perp(Ifull) == q.fC)
    rep.add("rel(ii) frakI = C^perp, C = frakI^perp", same(q.C, Cfull) and perp(Cfull) == q.fI)
    rep.add("rel(iii) I = U'.C^+, C = U'^coI",
            ideal_from_invariants(Cfull) == Ifull and coinvariants(Ifull) == Cfull)
    rep.add("rel(iv) frakI = Fv.frakC^+, frakC = Fv^cofrakI",
            ideal_from_invariants(q.fC) == q.fI and coinvariants(q.fI) == q.fC)
    if q.shadow is not None:
        for row in q.shadow.relations().rows:
            rep.add(*row)
    return rep


def qdp_roundtrip_check(q: QuantizationQuadruple, dq: QuantizationQuadruple = None) -> Report:
    """Round trips at precision N - 1:
    shriek o curlyvee, lsh o triangledown on I, C and curlyvee o shriek,
    triangledown o lsh on frakI, frakC."""
    dq = dq or qdp_transform(q)
    amb = q.ambient
    low = get_ambient(amb.pres, amb.N - 1, amb.D)
    YF, U = low.y_chart("Fv"), low.chart("U")
    rep = Report()
    if dq.partial:
        rep.add("insufficient truncation", False, "a component functor reported a partial result")
        return rep
    rep.add("shriek(curlyvee(I)) = I", shriek(dq.fI, certify=False) == transfer(q.I, YF, "project"))
    rep.add("lsh(triangledown(C)) = C", lsh(dq.fC, certify=False) == transfer(q.C, YF, "project"))
    rep.add("curlyvee(shriek(frakI)) = frakI", curlyvee(dq.I) == transfer(q.fI, U, "project"))
    rep.add("triangledown(lsh(frakC)) = frakC", triangledown(dq.C) == transfer(q.fC, U, "project"))
    return rep


def orthogonality_transport(q: QuantizationQuadruple, dq: QuantizationQuadruple = None) -> Report:
    """shriek(frakI) = triangledown(C)^perp and lsh(frakC) = curlyvee(I)^perp,
    compared in the lattice chart at precision N - 1."""
    dq = dq or qdp_transform(q)
    Y = side_of(dq.fI)[1].y_chart("U")
    rep = Report()
    rep.add("shriek(frakI) = triangledown(C)^perp",
            transfer(dq.I, Y, "project") == transfer(perp(dq.fC), Y, "project"))
    rep.add("lsh(frakC) = curlyvee(I)^perp",
            transfer(dq.C, Y, "project") == transfer(perp(dq.fI), Y, "project"))
    return rep
