"""Exact linear algebra for R_N-submodules.

A submodule of a truncated free (or window-truncated) R_N-module is stored as
a rational subspace of the coordinate space that is closed under the
nilpotent shift "multiply by h".  Coordinates are pairs (m, k) standing for
h^k * b_m for some basis b_m; a chart fixes a finite window of them.
"""
from __future__ import annotations

import heapq
from fractions import Fraction

try:  # exact rationals; gmpy2's mpq is a drop-in, much faster Fraction
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .algebra import deg_lex_key

ZERO = Q(0)
ONE = Q(1)


class ChartMismatch(ValueError):
    pass


class Chart:
    """Ordered finite set of coordinates (m, k) closed under k -> k+1 up to a
    per-monomial top; ``lattice`` (optional) maps m to the h-order at which
    the reference lattice starts, used by specialisation."""

    def __init__(self, name: str, coords: Sequence, lattice: Optional[Callable] = None, meta=None):
        self.name = name
        self.meta = dict(meta or {})
        self.coords = list(coords)
        self.index = {c: i for i, c in enumerate(self.coords)}
        if len(self.index) != len(self.coords):
            raise ValueError("duplicate coordinates")
        self.lattice = lattice or (lambda m: 0)
        self._shift = [self.index.get((m, k + 1)) for (m, k) in self.coords]

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.name == other.name and self.coords == other.coords

    def __hash__(self):
        return hash((self.name, len(self.coords)))

    def shift_vec(self, v: Dict[int, Fraction]):
        out = {}
        for i, x in v.items():
            j = self._shift[i]
            if j is not None:
                out[j] = x
        return out

    def vec(self, d: Dict) -> Dict[int, Fraction]:
        """Coordinate-labelled dict -> index dict (dropping out-of-window labels)."""
        out = {}
        for c, x in d.items():
            i = self.index.get(c)
            if i is not None and x:
                out[i] = out.get(i, ZERO) + Q(x)
        return {i: x for i, x in out.items() if x}

    def labelled(self, v: Dict[int, Fraction]):
        return {self.coords[i]: x for i, x in v.items()}

    def descriptor(self):
        return {"name": self.name, "dim": len(self.coords)}


class Echelon:
    """Incremental row echelon form over Q with sparse rows.

    Keys are integers (column order).  ``tags`` optionally track how each row
    was formed from the inputs, which gives kernels of linear maps."""

    def __init__(self, track=False):
        self.rows: Dict[int, Dict[int, Fraction]] = {}
        self.track = track
        self.tags: Dict[int, Dict[int, Fraction]] = {}

    def reduce(self, v, tag=None):
        v = dict(v)
        tag = dict(tag) if tag is not None else None
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            p = heapq.heappop(heap)
            c = v.get(p)
            if not c or p not in self.rows:
                continue
            row = self.rows[p]
            for j, x in row.items():
                y = v.get(j, ZERO) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
                if j not in seen:
                    seen.add(j)
                    heapq.heappush(heap, j)
            if tag is not None:
                for j, x in self.tags[p].items():
                    y = tag.get(j, ZERO) - c * x
                    if y:
                        tag[j] = y
                    else:
                        tag.pop(j, None)
        return v, tag

    def add(self, v, tag=None):
        """Insert; returns the new (normalised) row or None if dependent.
        With tracking, a dependent vector returns its reduced tag via .last_tag."""
        r, t = self.reduce(v, tag)
        self.last_tag = t
        if not r:
            return None
        p = min(r)
        inv = ONE / r[p]
        r = {j: x * inv for j, x in r.items()}
        self.rows[p] = r
        if self.track:
            self.tags[p] = {j: x * inv for j, x in t.items()}
        return r

    def rref(self):
        """Fully reduced rows sorted by pivot (canonical form)."""
        piv = sorted(self.rows)
        rows = {p: dict(self.rows[p]) for p in piv}
        for p in reversed(piv):
            rp = rows[p]
            for q in piv:
                if q >= p:
                    break
                rq = rows[q]
                c = rq.get(p)
                if c:
                    for j, x in rp.items():
                        y = rq.get(j, ZERO) - c * x
                        if y:
                            rq[j] = y
                        else:
                            rq.pop(j, None)
        return [rows[p] for p in piv]


def kernel(images: Sequence[Dict], ) -> List[Dict[int, Fraction]]:
    """Basis of {c : sum_i c_i images[i] = 0}; images are dicts with hashable keys."""
    keymap = {}
    ech = Echelon(track=True)
    out = []
    for i, img in enumerate(images):
        v = {}
        for key, x in img.items():
            if x:
                j = keymap.setdefault(key, len(keymap))
                v[j] = v.get(j, ZERO) + x
        v = {j: x for j, x in v.items() if x}
        r = ech.add(v, {i: ONE})
        if r is None:
            out.append(ech.last_tag)
    return out


def annihilator(rows: Sequence[Dict[int, Fraction]], dim: int) -> List[Dict[int, Fraction]]:
    """Basis of the standard-dot-product annihilator of span(rows) in Q^dim."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    rref = ech.rref()
    pivots = {min(r): r for r in rref}
    out = []
    for f in range(dim):
        if f in pivots:
            continue
        v = {f: ONE}
        for p, r in pivots.items():
            x = r.get(f)
            if x:
                v[p] = -x
        out.append(v)
    return out


class HSubmodule:
    """Shift-closed rational subspace of a chart, kept in canonical RREF."""

    def __init__(self, chart: Chart, rows: List[Dict[int, Fraction]], flags=None):
        self.chart = chart
        self.rows = rows
        self.flags = set(flags or ())
        self._ech = None

    # -- construction
    @classmethod
    def from_echelon(cls, chart, ech, flags=None):
        obj = cls(chart, ech.rref(), flags)
        return obj

    @classmethod
    def zero(cls, chart):
        return cls(chart, [])

    @classmethod
    def whole(cls, chart):
        return cls(chart, [{i: ONE} for i in range(len(chart))])

    def _echelon(self):
        if self._ech is None:
            ech = Echelon()
            for r in self.rows:
                ech.rows[min(r)] = r
            self._ech = ech
        return self._ech

    @property
    def dim(self):
        return len(self.rows)

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart.name} vs {other.chart.name}")

    def contains(self, v) -> bool:
        if isinstance(v, HSubmodule):
            self._check(v)
            return all(self.contains(r) for r in v.rows)
        r, _ = self._echelon().reduce(v)
        return not r

    def __eq__(self, other):
        return isinstance(other, HSubmodule) and self.chart == other.chart and self.rows == other.rows

    def __hash__(self):
        return hash((self.chart.name, len(self.rows)))

    def __le__(self, other):
        return other.contains(self)

    def is_shift_closed(self):
        return all(self.contains(self.chart.shift_vec(r)) for r in self.rows)

    def labelled_rows(self):
        return [self.chart.labelled(r) for r in self.rows]

    def dump(self, fmt_label=str):
        from .scalars import frac_to_str
        return {
            "chart": self.chart.descriptor(),
            "rows": [[[fmt_label(self.chart.coords[i]), frac_to_str(x)] for i, x in sorted(r.items())]
                     for r in self.rows],
        }

    def __repr__(self):
        return f"HSubmodule({self.chart.name}, dim={self.dim})"


def span(chart: Chart, generators: Iterable, closure_ops: Sequence[Callable] = (), flags=None) -> HSubmodule:
    """Smallest shift-closed subspace containing generators and closed under
    closure_ops (each op maps an index-vector to an iterable of index-vectors).

    Breadth-first: vectors are processed in insertion order, which keeps the
    result deterministic."""
    ech = Echelon()
    queue = []
    for g in generators:
        queue.append(g)
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        r = ech.add(v)
        if r is None:
            continue
        queue.append(chart.shift_vec(r))
        for op in closure_ops:
            for w in op(r):
                if w:
                    queue.append(w)
        if head > 4096:
            queue = queue[head:]
            head = 0
    return HSubmodule.from_echelon(chart, ech, flags)


def module_sum(S: HSubmodule, T: HSubmodule) -> HSubmodule:
    S._check(T)
    ech = Echelon()
    for r in S.rows + T.rows:
        ech.add(r)
    return HSubmodule.from_echelon(S.chart, ech, S.flags | T.flags)


def intersect(S: HSubmodule, T: HSubmodule) -> HSubmodule:
    S._check(T)
    n = len(S.chart)
    ann = annihilator(S.rows, n) + annihilator(T.rows, n)
    rows = annihilator(ann, n)
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return HSubmodule.from_echelon(S.chart, ech, S.flags | T.flags)


def equal(S: HSubmodule, T: HSubmodule) -> bool:
    S._check(T)
    return S.rows == T.rows


def contains(S: HSubmodule, v) -> bool:
    return S.contains(v)


def shift_module(S: HSubmodule) -> HSubmodule:
    """h * S."""
    ech = Echelon()
    for r in S.rows:
        ech.add(S.chart.shift_vec(r))
    return HSubmodule.from_echelon(S.chart, ech, S.flags)


def module_generators(S: HSubmodule) -> List[Dict[int, Fraction]]:
    """Rows of S spanning a complement of h*S: generators of S over R_N."""
    ech = Echelon()
    for r in S.rows:
        ech.add(S.chart.shift_vec(r))
    return [r for r in S.rows if ech.add(r) is not None]


class PreconditionError(ValueError):
    pass


def saturation_check(S: HSubmodule, ambient: HSubmodule = None) -> bool:
    """S cap h*ambient == h*S."""
    ambient = ambient if ambient is not None else HSubmodule.whole(S.chart)
    S._check(ambient)
    if not ambient.contains(S):
        raise PreconditionError("S is not contained in the ambient module")
    return equal(intersect(S, shift_module(ambient)), shift_module(S))


def specialize_submodule(S: HSubmodule, ambient: HSubmodule = None, check=True):
    """Image of S in the h = 0 quotient, as a list of RREF rows over the order-0
    coordinates (labelled by monomial).  The order of a coordinate (m, k) is
    k - chart.lattice(m)."""
    if check and not saturation_check(S, ambient):
        raise PreconditionError("submodule is not saturated; its h=0 image is not the classical object")
    chart = S.chart
    zero_coords = [c for c in chart.coords if c[1] == chart.lattice(c[0])]
    zindex = {c[0]: i for i, c in enumerate(sorted(zero_coords, key=lambda c: deg_lex_key(c[0])))}
    ech = Echelon()
    for r in S.rows:
        v = {}
        for i, x in r.items():
            m, k = chart.coords[i]
            if k == chart.lattice(m):
                v[zindex[m]] = x
        if v:
            ech.add(v)
    monos = sorted(zindex, key=zindex.get)
    return ClassicalSubspace(monos, ech.rref())


class ClassicalSubspace:
    """A rational subspace of the span of the given monomials."""

    def __init__(self, monos, rows):
        self.monos = list(monos)
        self.rows = rows

    @classmethod
    def from_vectors(cls, monos, vectors):
        idx = {m: i for i, m in enumerate(monos)}
        ech = Echelon()
        for v in vectors:
            w = {idx[m]: Q(x) for m, x in v.items() if x}
            if w:
                ech.add(w)
        return cls(monos, ech.rref())

    @property
    def dim(self):
        return len(self.rows)

    def restrict_degree(self, d):
        """Intersection with the span of monomials of degree <= d (same index set)."""
        n = len(self.monos)
        high = [i for i, m in enumerate(self.monos) if sum(m) > d]
        ann = annihilator(self.rows, n) + [{i: ONE} for i in high]
        rows = annihilator(ann, n)
        ech = Echelon()
        for r in rows:
            ech.add(r)
        return ClassicalSubspace(self.monos, ech.rref())

    def vectors(self):
        return [{self.monos[i]: x for i, x in r.items()} for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, ClassicalSubspace) and self.monos == other.monos and self.rows == other.rows

    def __repr__(self):
        return f"ClassicalSubspace(dim={self.dim} in {len(self.monos)})"
