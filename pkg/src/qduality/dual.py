"""The function side: functionals on a presented QUEA, the Hopf pairing, and
the coordinate windows shared by the Drinfeld functors.

Four coordinate spaces are used, all indexed by PBW monomials m:

    U       h^k m                      quantised enveloping algebra
    F = U*  h^i m*                     its dual (functions)
    F^vee   h^k phi_m,  phi_m = h^-|m| m*
    U'      h^e u_m,    u_m = h^|m| m

Every coordinate is labelled (m, k) with k the power of h in front of m
(for U, U') or of phi_m (for F, F^vee); so m* = h^|m| phi_m has label
(m, |m|).  With this convention the adjusted degree of (m, k) is |m| - k,
the function lattice (F inside F^vee, U' inside U) is "degree <= 0", and
multiplying by h^-1 is (m, k) -> (m, k - 1).

Windows at truncation (N, D):
    enveloping side ("quea"):  max(0, |m| - D) <= k < N
        the degree <= D part modulo h^N, a subspace;
    function side ("lattice"): |m| <= k < |m| + N - max(0, |m| - D)
        a quotient algebra, dual to the enveloping window.
The pairing of (m, k) with (m, k') has value h^(k + k' - |m|); its top
coefficient (k + k' - |m| = N - 1) is a perfect pairing of the two windows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .algebra import (HopfAlgebra, ReesAlgebra, monomials_up_to, deg_lex_key, add_into,
                      AlgebraElement)
from .linalg import Chart, Echelon, HSubmodule, Q, annihilator, module_generators, span
from .scalars import TruncatedSeries, TruncationParams, frac, series_mul

ZERO = Fraction(0)
ONE = Fraction(1)


class DegreeOverflow(ValueError):
    pass


# ---------------------------------------------------------------- functionals

class DualFunctional:
    """A linear functional on the degree <= D part of U: values[m] is f(m)."""

    def __init__(self, alg: HopfAlgebra, values: Dict, D: int, saturated=False):
        self.alg = alg
        self.D = D
        N = alg.N
        vals = {}
        for m, v in values.items():
            if sum(m) > D:
                raise DegreeOverflow(f"monomial {m} above degree {D}")
            c = list(v.coeffs) if isinstance(v, TruncatedSeries) else list(v)
            c = [frac(x) for x in c[:N]] + [ZERO] * (N - len(c))
            if any(c):
                vals[m] = c
        self.values = vals
        self.saturated = saturated

    @classmethod
    def unit(cls, alg, D):
        """eps_U: value 1 on the unit monomial."""
        return cls(alg, {alg.one_mono(): [ONE]}, D)

    @classmethod
    def coordinate(cls, alg, m, D):
        return cls(alg, {m: [ONE]}, D)

    def __call__(self, m) -> TruncatedSeries:
        return TruncatedSeries(self.values.get(m, [ZERO]), self.alg.N)

    def counit(self) -> TruncatedSeries:
        return self(self.alg.one_mono())

    def __add__(self, other):
        vals = {m: list(c) for m, c in self.values.items()}
        for m, c in other.values.items():
            add_into(vals, m, c)
        return DualFunctional(self.alg, vals, min(self.D, other.D), self.saturated or other.saturated)

    def scale(self, s):
        s = list(s.coeffs) if isinstance(s, TruncatedSeries) else [frac(s)]
        N = self.alg.N
        return DualFunctional(self.alg, {m: series_mul(s, c, N) for m, c in self.values.items()},
                              self.D, self.saturated)

    def __eq__(self, other):
        return isinstance(other, DualFunctional) and self.D == other.D and self.values == other.values

    def dump(self):
        return [[list(m), [str(x) for x in c]] for m, c in sorted(self.values.items(),
                                                                   key=lambda t: deg_lex_key(t[0]))]

    def __repr__(self):
        return f"DualFunctional({len(self.values)} values, D={self.D})"


def pair(f: DualFunctional, u: AlgebraElement) -> TruncatedSeries:
    """<f, u>; u must have degree <= f.D."""
    N = f.alg.N
    acc = [ZERO] * N
    for m, c in u.terms.items():
        if sum(m) > f.D:
            raise DegreeOverflow(f"element has degree {sum(m)} > {f.D}")
        v = f.values.get(m)
        if v:
            acc = [a + b for a, b in zip(acc, series_mul(v, c, N))]
    return TruncatedSeries(acc, N)


def convolve(f: DualFunctional, g: DualFunctional) -> DualFunctional:
    """(f*g)(m) = (f (x) g)(Delta m) for |m| <= D."""
    alg = f.alg
    N = alg.N
    D = min(f.D, g.D)
    out = {}
    sat = f.saturated or g.saturated
    for m in monomials_up_to(alg.k, D):
        acc = [ZERO] * N
        for (a, b), c in alg.cop_mono(m).items():
            fa, gb = f.values.get(a), g.values.get(b)
            if sum(a) > f.D or sum(b) > g.D:
                sat = True
                continue
            if fa and gb:
                acc = [x + y for x, y in zip(acc, series_mul(series_mul(fa, gb, N), c, N))]
        if any(acc):
            out[m] = acc
    return DualFunctional(alg, out, D, sat)


def dual_coproduct(f: DualFunctional) -> Dict:
    """(Delta f)(m1 (x) m2) = f(m1 m2) for |m1| + |m2| <= D, as a dict of series.

    Returns (values, saturated); saturated is set when some product needed
    values above degree D."""
    alg = f.alg
    N = alg.N
    out = {}
    sat = f.saturated
    monos = monomials_up_to(alg.k, f.D)
    for a in monos:
        for b in monos:
            if sum(a) + sum(b) > f.D:
                continue
            acc = [ZERO] * N
            for o, c in alg._mono_mul(a, b).items():
                if sum(o) > f.D:
                    sat = True
                    continue
                v = f.values.get(o)
                if v:
                    acc = [x + y for x, y in zip(acc, series_mul(v, c, N))]
            if any(acc):
                out[(a, b)] = acc
    return out, sat


# ---------------------------------------------------------------- windows

QUEA_SIDES = ("U", "Fv")
LATTICE_SIDES = ("F", "Up")
PARTNER = {"U": "F", "F": "U", "Fv": "Up", "Up": "Fv"}


def adj_degree(c):
    return sum(c[0]) - c[1]


def _coord_key(c):
    return (-adj_degree(c), deg_lex_key(c[0]), c[1])


def quea_coords(k, N, D):
    return sorted(((m, j) for m in monomials_up_to(k, D + N - 1) for j in range(max(0, sum(m) - D), N)),
                  key=_coord_key)


def lattice_coords(k, N, D):
    out = []
    for m in monomials_up_to(k, D + N - 1):
        d = sum(m)
        out.extend((m, j) for j in range(d, d + N - max(0, d - D)))
    return sorted(out, key=_coord_key)


def y_coords(k, N):
    return sorted(((m, j) for m in monomials_up_to(k, N - 1) for j in range(sum(m), N)), key=_coord_key)


class Ambient:
    """The four coordinate spaces of one presentation at truncation (N, D),
    with their products and coproducts on coordinates."""

    def __init__(self, pres, N: int, D: int):
        self.pres = pres
        self.N, self.D = N, D
        self.k = len(pres.generators)
        params = TruncationParams(N, D)
        self.U = HopfAlgebra(pres, params)
        self.R = ReesAlgebra(pres, params)
        tag = f"{pres.name}[N={N},D={D}]"
        q = quea_coords(self.k, N, D)
        lat = lattice_coords(self.k, N, D)
        zero = lambda m: 0
        deg = lambda m: sum(m)
        self.charts = {
            "U": Chart("U" + tag, q, zero, {"side": "U", "N": N, "D": D}),
            "Fv": Chart("Fv" + tag, q, zero, {"side": "Fv", "N": N, "D": D}),
            "F": Chart("F" + tag, lat, deg, {"side": "F", "N": N, "D": D}),
            "Up": Chart("Up" + tag, lat, deg, {"side": "Up", "N": N, "D": D}),
        }
        for c in self.charts.values():
            c.meta["ambient"] = self
        self._index = {}
        self._mp = {}

    def __repr__(self):
        return f"Ambient({self.pres.name}, N={self.N}, D={self.D})"

    def chart(self, side):
        return self.charts[side]

    def y_chart(self, side):
        """Lattice part h^k x_m with |m| <= k < N of a quea side, shared
        with the corresponding function side modulo its deep part."""
        key = ("Y", side)
        ch = self._index.get(key)
        if ch is None:
            ch = Chart(f"Y{side}{self.pres.name}[N={self.N}]", y_coords(self.k, self.N), lambda m: sum(m),
                       {"side": "Y" + side, "N": self.N, "D": self.D, "ambient": self})
            self._index[key] = ch
        return ch

    # -- coordinate products
    def _inverse_cop(self, which):
        key = ("inv", which)
        idx = self._index.get(key)
        if idx is None:
            alg = self.R if which == "Fv" else self.U
            idx = {}
            for o in monomials_up_to(self.k, self.D + self.N - 1):
                for ab, c in alg.cop_mono(o).items():
                    idx.setdefault(ab, []).append((o, c))
            self._index[key] = idx
        return idx

    def mono_product(self, side, a, b):
        """List of (o, series, offset): x_a x_b = sum h^(s + offset) x_o."""
        key = (side, a, b)
        res = self._mp.get(key)
        if res is None:
            res = self._mp[key] = [(o, [Q(x) for x in c], off) for o, c, off in self._mono_product(side, a, b)]
        return res

    def _mono_product(self, side, a, b):
        if side == "U":
            return [(o, c, 0) for o, c in self.U._mono_mul(a, b).items()]
        if side == "Up":
            da = sum(a) + sum(b)
            return [(o, c, sum(o) - da) for o, c in self.R._mono_mul(a, b).items()]
        if side == "Fv":
            return [(o, c, 0) for o, c in self._inverse_cop("Fv").get((a, b), ())]
        if side == "F":
            da = sum(a) + sum(b)
            return [(o, c, sum(o) - da) for o, c in self._inverse_cop("F").get((a, b), ())]
        raise ValueError(side)

    def mul_labelled(self, side, x: Dict, y: Dict) -> Dict:
        """Product of two labelled vectors {(m, k): coeff}; the result keeps
        every label with k < N + |m| (callers restrict to their window)."""
        out = {}
        for (a, ka), xa in x.items():
            for (b, kb), yb in y.items():
                xy = xa * yb
                for o, c, off in self.mono_product(side, a, b):
                    for s, cs in enumerate(c):
                        if cs:
                            lab = (o, ka + kb + s + off)
                            out[lab] = out.get(lab, ZERO) + xy * cs
        return {lab: v for lab, v in out.items() if v}

    def mul_vec(self, side, chart, u, v):
        lu, lv = chart.labelled(u), chart.labelled(v)
        return chart.vec(self.mul_labelled(side, lu, lv))

    def counit_labelled(self, side, x: Dict) -> TruncatedSeries:
        """Counit as a series mod h^N (lattice sides: label k means h^(k-|m|))."""
        N = self.N
        acc = [ZERO] * N
        one = (0,) * self.k
        for (m, kk), v in x.items():
            if side in ("U", "Up"):
                e = (self.U if side == "U" else self.R).eps_mono(m)
                shift = kk if side == "U" else kk - sum(m)
                for s, c in enumerate(e):
                    if c and s + shift < N:
                        acc[s + shift] += v * c
            elif m == one and kk < N:
                acc[kk] += v
        return TruncatedSeries(acc, N)

    # -- conversions
    def element_labels(self, x: AlgebraElement) -> Dict:
        """U element (or U' element of the Rees algebra) -> labelled vector."""
        lattice = isinstance(x.alg, ReesAlgebra)
        out = {}
        for m, c in x.terms.items():
            for s, v in enumerate(c):
                if v:
                    out[(m, s + sum(m) if lattice else s)] = v
        return out

    def functional_labels(self, f: DualFunctional) -> Dict:
        return {(m, s + sum(m)): v for m, c in f.values.items() for s, v in enumerate(c) if v}

    def gen_label(self, g):
        """Label of the algebra generator of index g on any side: x_g on the
        quea sides, the lattice generators g* = h phi_g and u_g = h g."""
        m = tuple(1 if t == g else 0 for t in range(self.k))
        return m

    def one_label(self):
        return ((0,) * self.k, 0)


_AMBIENTS = {}


def get_ambient(pres, N, D) -> Ambient:
    key = (id(pres), N, D)
    amb = _AMBIENTS.get(key)
    if amb is None or amb.pres is not pres:
        amb = _AMBIENTS[key] = Ambient(pres, N, D)
    return amb


def side_of(S: HSubmodule):
    return S.chart.meta["side"], S.chart.meta["ambient"]


def _module(chart, vectors, flags=None):
    ech = Echelon()
    for v in vectors:
        if v:
            ech.add(v)
    return HSubmodule.from_echelon(chart, ech, flags)


def from_labels(chart, labelled_vectors, flags=None, strict=True):
    vecs = []
    for lv in labelled_vectors:
        if strict:
            missing = [c for c, x in lv.items() if x and c not in chart.index]
            if missing:
                raise DegreeOverflow(f"coordinates outside the window of {chart.name}: {missing[:3]}")
        vecs.append(chart.vec(lv))
    return _module(chart, vecs, flags)


def transfer(S: HSubmodule, chart: Chart, mode="project") -> HSubmodule:
    """Move S to another chart with the same labels.

    mode="project": drop coordinates missing from the target (a quotient map;
    callers only use it where the dropped span is a submodule);
    mode="restrict": intersect with the span of the target coordinates."""
    if mode == "project":
        return from_labels(chart, S.labelled_rows(), S.flags, strict=False)
    keep = [i for i, c in enumerate(S.chart.coords) if c in chart.index]
    keep_set = set(keep)
    n = len(S.chart)
    drop = [{i: ONE} for i in range(n) if i not in keep_set]
    rows = annihilator(annihilator(S.rows, n) + drop, n)
    return from_labels(chart, [S.chart.labelled(r) for r in rows], S.flags)


def restrict_degree(S: HSubmodule, chart: Chart) -> HSubmodule:
    """S intersected with the span of coordinates present in ``chart``; with
    the degree-descending coordinate order these are whole echelon rows."""
    rows = [r for r in S.rows if all(S.chart.coords[i] in chart.index for i in r)]
    if len(rows) == len(S.rows) or _degree_ordered(S.chart, chart):
        return from_labels(chart, [S.chart.labelled(r) for r in rows], S.flags)
    return transfer(S, chart, "restrict")


def _degree_ordered(big, small):
    """True when ``small`` is the set of coordinates of ``big`` up to some adjusted degree."""
    dmax = max((adj_degree(c) for c in small.coords), default=0)
    return all((c in small.index) == (adj_degree(c) <= dmax) for c in big.coords)


def hbar_inverse(S: HSubmodule, chart: Chart) -> HSubmodule:
    """h^-1 S, read in ``chart`` (labels (m, k) -> (m, k - 1), out-of-window
    labels dropped: they are zero modulo h^N)."""
    rows = []
    for r in S.labelled_rows():
        rows.append({(m, k - 1): x for (m, k), x in r.items() if (m, k - 1) in chart.index})
        if any(k - 1 < 0 for (m, k) in r):
            raise ValueError("h^-1 of a vector with an h^0 coordinate")
    return from_labels(chart, rows, S.flags)


def perp(S: HSubmodule) -> HSubmodule:
    """Annihilator of S under the Hopf pairing, on the partner side of the same ambient."""
    side, amb = side_of(S)
    other = amb.chart(PARTNER[side])
    N = amb.N
    rows = []
    for r in S.labelled_rows():
        rows.append(other.vec({(m, N - 1 + sum(m) - k): x for (m, k), x in r.items()}))
    return _module(other, annihilator(rows, len(other)), S.flags)


def pairing_value(amb: Ambient, x: Dict, y: Dict) -> TruncatedSeries:
    """<x, y> for labelled vectors on partner sides (quea x, lattice y)."""
    N = amb.N
    acc = [ZERO] * N
    for (m, k), a in x.items():
        for kk in range(sum(m), sum(m) + N):
            b = y.get((m, kk))
            if b:
                e = k + kk - sum(m)
                if e < N:
                    acc[e] += a * b
    return TruncatedSeries(acc, N)


# ---------------------------------------------------------------- closures

def _vec_degree(chart, v):
    return max(adj_degree(chart.coords[i]) for i in v)


def _gen_vectors(amb, chart):
    return [chart.vec({(amb.gen_label(g), 0 if chart.meta["side"] in QUEA_SIDES else 1): ONE})
            for g in range(amb.k)]


def _closure(amb, side, gens_labels, seeds_labels, margin):
    """Span of seeds closed under left multiplication by ``gens``; on quea
    sides the work is done with ``margin`` extra degrees and cut back to D."""
    quea = side in QUEA_SIDES
    work = get_ambient(amb.pres, amb.N, amb.D + margin) if quea else amb
    chart = work.chart(side)
    Dw = work.D
    gens = [chart.vec(g) for g in gens_labels]
    gens = [g for g in gens if g]
    gdeg = [_vec_degree(chart, g) for g in gens]

    def op(r):
        out = []
        rd = _vec_degree(chart, r) if quea else None
        for g, dg in zip(gens, gdeg):
            if quea and rd + dg > Dw:
                continue
            out.append(work.mul_vec(side, chart, g, r))
        return out

    S = span(chart, [chart.vec(s) for s in seeds_labels], [op])
    if work is amb:
        return S
    return restrict_degree(S, amb.chart(side))


def left_ideal(amb: Ambient, side: str, generators, margin=1) -> HSubmodule:
    """Left ideal generated by labelled vectors (a left-ideal window of the
    quea sides is computed ``margin`` degrees higher and then cut)."""
    gens = [{c: ONE} for c in [(amb.gen_label(g), 0 if side in QUEA_SIDES else 1) for g in range(amb.k)]]
    return _closure(amb, side, gens, list(generators), margin)


def subalgebra(amb: Ambient, side: str, generators, margin=1) -> HSubmodule:
    """Unital subalgebra generated by labelled vectors."""
    gens = [g for g in generators if g]
    return _closure(amb, side, gens, [{amb.one_label(): ONE}] + gens, margin)


def _test_rows(S, quea):
    """Rows whose products must be tested: all rows on the quea sides (where
    products above degree D are skipped), R_N-generators on lattice sides."""
    return S.rows if quea else module_generators(S)


def is_left_ideal(S: HSubmodule) -> bool:
    side, amb = side_of(S)
    chart = S.chart
    quea = side in QUEA_SIDES
    rows = _test_rows(S, quea)
    for g in _gen_vectors(amb, chart):
        dg = _vec_degree(chart, g)
        for r in rows:
            if quea and _vec_degree(chart, r) + dg > amb.D:
                continue
            if not S.contains(amb.mul_vec(side, chart, g, r)):
                return False
    return True


def is_subalgebra(S: HSubmodule) -> bool:
    side, amb = side_of(S)
    chart = S.chart
    quea = side in QUEA_SIDES
    if not S.contains(chart.vec({amb.one_label(): ONE})):
        return False
    rows = _test_rows(S, quea)
    for a in rows:
        da = _vec_degree(chart, a)
        for b in rows:
            if quea and da + _vec_degree(chart, b) > amb.D:
                continue
            if not S.contains(amb.mul_vec(side, chart, a, b)):
                return False
    return True


def augmentation_part(S: HSubmodule) -> HSubmodule:
    """S intersected with the kernel of the counit."""
    side, amb = side_of(S)
    chart = S.chart
    n = len(chart)
    conds = []
    for i in range(amb.N):
        row = {}
        for j, c in enumerate(chart.coords):
            e = amb.counit_labelled(side, {c: ONE}).coeffs[i]
            if e:
                row[j] = e
        if row:
            conds.append(row)
    rows = annihilator(annihilator(S.rows, n) + conds, n)
    return _module(chart, rows, S.flags)
