"""Presented topological Hopf algebras over R_N (the QUEA side).

A presentation lists ordered generators g_1 < ... < g_k, one straightening
rule g_j*g_i = lam*g_i*g_j + T for every out-of-order pair, and the Hopf
structure on generators.  Normal monomials are PBW monomials
g_1^{e_1} ... g_k^{e_k}, stored as exponent tuples.

Coefficients are plain lists of N Fractions internally (series mod h^N);
:class:`AlgebraElement` exposes them as :class:`TruncatedSeries`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from . import _expr
from .scalars import TruncatedSeries, TruncationParams, ContextMismatch, series_mul

Mono = Tuple[int, ...]
ZERO = Fraction(0)
ONE = Fraction(1)


class PresentationError(ValueError):
    """Malformed presentation file; carries the offending line number."""

    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


# ---------------------------------------------------------------- coeff lists

def c_add(a, b):
    return [x + y for x, y in zip(a, b)]


def c_iszero(a):
    return not any(a)


def add_into(d, key, c):
    cur = d.get(key)
    if cur is None:
        if any(c):
            d[key] = list(c)
    else:
        s = [x + y for x, y in zip(cur, c)]
        if any(s):
            d[key] = s
        else:
            del d[key]


def mono_degree(m: Mono) -> int:
    return sum(m)


def monomials_up_to(k: int, d: int) -> List[Mono]:
    """All exponent vectors of length k and total degree <= d, deg-lex sorted."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    for deg in range(d + 1):
        if k == 0:
            if deg == 0:
                out.append(())
            continue
        rec((), deg, k)
    out.sort(key=deg_lex_key)
    return out


def word_of(m: Mono):
    w = []
    for i, e in enumerate(m):
        w.extend([i] * e)
    return tuple(w)


def deg_lex_key(m: Mono):
    return (sum(m), word_of(m))


# ---------------------------------------------------------------- presentation

SECTIONS = ("meta", "generators", "relations", "coproduct", "counit", "antipode", "cobracket")


@dataclass
class Presentation:
    """Parsed presentation text (precision independent)."""
    name: str
    generators: List[str]
    relations: Dict[Tuple[int, int], Tuple[str, int]]  # (j, i) -> (rhs text, line)
    coproduct: Dict[int, Tuple[str, int]]
    counit: Dict[int, Tuple[str, int]]
    antipode: Dict[int, Tuple[str, int]]
    cobracket: Dict[int, Tuple[str, int]] = field(default_factory=dict)
    source: str = ""

    @property
    def index(self):
        return {g: i for i, g in enumerate(self.generators)}

    def replace_relation(self, j, i, rhs):
        """Copy with one straightening rule swapped (used for mutation tests)."""
        rel = dict(self.relations)
        rel[(j, i)] = (rhs, rel.get((j, i), ("", 0))[1])
        return Presentation(self.name, self.generators, rel, self.coproduct, self.counit,
                            self.antipode, self.cobracket, self.source)


def parse_presentation(text: str, name: str = "anonymous") -> Presentation:
    section = None
    gens: List[str] = []
    raw = {s: [] for s in SECTIONS}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise PresentationError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise PresentationError("content before any section header", lineno)
        if section == "generators":
            for g in line.replace(",", " ").split():
                if g in _expr.RESERVED or not g.isidentifier():
                    raise PresentationError(f"illegal generator name {g!r}", lineno)
                gens.append(g)
        else:
            if "=" not in line:
                raise PresentationError("expected 'lhs = rhs'", lineno)
            lhs, rhs = line.split("=", 1)
            raw[section].append((lhs.strip(), rhs.strip(), lineno))
    for _, _, ln in raw["meta"]:
        pass
    meta = {l: r for l, r, _ in raw["meta"]}
    name = meta.get("name", name)
    if not gens:
        raise PresentationError("no generators declared")
    idx = {g: i for i, g in enumerate(gens)}
    relations = {}
    for lhs, rhs, ln in raw["relations"]:
        parts = [p.strip() for p in lhs.split("*")]
        if len(parts) != 2 or any(p not in idx for p in parts):
            raise PresentationError(f"relation left side must be 'gj*gi', got {lhs!r}", ln)
        j, i = idx[parts[0]], idx[parts[1]]
        if j <= i:
            raise PresentationError(
                f"left side {lhs!r} is not out of order (need {parts[0]} > {parts[1]})", ln)
        relations[(j, i)] = (rhs, ln)

    def per_gen(sec):
        out = {}
        for lhs, rhs, ln in raw[sec]:
            if lhs not in idx:
                raise PresentationError(f"unknown generator {lhs!r} in [{sec}]", ln)
            out[idx[lhs]] = (rhs, ln)
        return out

    pres = Presentation(name, gens, relations, per_gen("coproduct"), per_gen("counit"),
                        per_gen("antipode"), per_gen("cobracket"), text)
    for sec in ("coproduct", "counit", "antipode"):
        missing = [gens[i] for i in range(len(gens)) if i not in getattr(pres, sec)]
        if missing:
            raise PresentationError(f"[{sec}] missing generators {missing}")
    # syntax and PBW-type validation at a small precision
    HopfAlgebra(pres, TruncationParams(3, 2))
    return pres


def load_presentation(path) -> Presentation:
    with open(path) as fh:
        text = fh.read()
    import os
    return parse_presentation(text, os.path.splitext(os.path.basename(path))[0])


# ---------------------------------------------------------------- elements

class AlgebraElement:
    """Finite map normal monomial -> series mod h^N (immutable by convention)."""

    __slots__ = ("alg", "terms", "saturated")

    def __init__(self, alg, terms, saturated=False):
        self.alg = alg
        self.terms = {m: list(c) for m, c in terms.items() if any(c)}
        self.saturated = saturated

    def coeff(self, m) -> TruncatedSeries:
        return TruncatedSeries(self.terms.get(tuple(m), [ZERO] * self.alg.N), self.alg.N)

    def _same(self, other):
        if isinstance(other, (int, Fraction)):
            return self.alg.scalar(other)
        if other.alg is not self.alg:
            raise ContextMismatch("elements of different algebras/contexts")
        return other

    def __add__(self, other):
        other = self._same(other)
        d = {m: list(c) for m, c in self.terms.items()}
        for m, c in other.terms.items():
            add_into(d, m, c)
        return AlgebraElement(self.alg, d, self.saturated or other.saturated)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        if isinstance(s, TruncatedSeries):
            if s.N != self.alg.N:
                raise ContextMismatch("scalar from another context")
            s = list(s.coeffs)
        elif not isinstance(s, list):
            s = [Fraction(s)] + [ZERO] * (self.alg.N - 1)
        N = self.alg.N
        return AlgebraElement(self.alg, {m: series_mul(c, s, N) for m, c in self.terms.items()},
                              self.saturated)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TruncatedSeries)):
            return self.scale(other)
        return self.alg.multiply(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((m, tuple(c)) for m, c in self.terms.items())))

    def is_zero(self):
        return not self.terms

    def valuation(self):
        vs = [next(i for i, x in enumerate(c) if x) for c in self.terms.values()]
        return min(vs) if vs else float("inf")

    def max_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def specialize(self):
        """h = 0 part as {monomial: Fraction}."""
        return {m: c[0] for m, c in self.terms.items() if c[0]}

    def __repr__(self):
        return "AE(" + self.alg.format(self.terms) + ")"


class TensorElement:
    """Finite map (m_1, ..., m_n) -> series mod h^N."""

    __slots__ = ("alg", "arity", "terms")

    def __init__(self, alg, arity, terms):
        self.alg = alg
        self.arity = arity
        self.terms = {k: list(c) for k, c in terms.items() if any(c)}

    def valuation(self):
        vs = [next(i for i, x in enumerate(c) if x) for c in self.terms.values()]
        return min(vs) if vs else float("inf")

    def __eq__(self, other):
        return (isinstance(other, TensorElement) and self.arity == other.arity
                and self.terms == other.terms)

    def __sub__(self, other):
        d = {k: list(c) for k, c in self.terms.items()}
        for k, c in other.terms.items():
            add_into(d, k, [-x for x in c])
        return TensorElement(self.alg, self.arity, d)

    def __add__(self, other):
        d = {k: list(c) for k, c in self.terms.items()}
        for k, c in other.terms.items():
            add_into(d, k, c)
        return TensorElement(self.alg, self.arity, d)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        parts = []
        for k, c in sorted(self.terms.items()):
            parts.append(f"{_fmt_series(c)}*" + " (x) ".join(self.alg.mono_str(m) for m in k))
        return f"TE[{self.arity}](" + (" + ".join(parts) or "0") + ")"


def _fmt_series(c):
    ts = [f"{x}" + (f"h^{i}" if i else "") for i, x in enumerate(c) if x]
    return "(" + " + ".join(ts) + ")"


# ---------------------------------------------------------------- the engine

_MARGIN = 4  # extra h-orders used while evaluating presentation expressions


class HopfAlgebra:
    """A presentation realised at truncation (N, D): rewriting plus Hopf maps.

    Products are exact modulo h^N.  Public results drop monomials of total
    degree above ``degree_cap`` (default D + N - 1) and mark themselves
    ``saturated`` when that happens.
    """

    windowed = False

    def __init__(self, pres: Presentation, params: TruncationParams, degree_cap=None):
        self.pres = pres
        self.params = params
        self.N = params.hbar_order
        self.k = len(pres.generators)
        self.degree_cap = degree_cap if degree_cap is not None else params.D + self.N - 1
        self._gm_memo = {}
        self._mm_memo = {}
        self._cop_memo = {}
        self._delta_memo = {}
        self._eps_memo = {}
        self._anti_memo = {}
        self.rules = {}
        self.rule_bounds = {}
        self._build()

    # -- construction
    def _eval(self, text, line, arity):
        P = self.N + _MARGIN
        try:
            v = _expr.evaluate(text, self.pres.index, P)
        except _expr.ExprError as e:
            raise PresentationError(str(e), line) from None
        if v.terms and v.arity != arity:
            raise PresentationError(f"expected arity {arity}, got {v.arity}", line)
        if v.prec < self.N:
            raise PresentationError("too many divisions by h for this precision", line)
        return v

    def _normal_mono(self, word, line):
        if list(word) != sorted(word):
            raise PresentationError("right side must be written in normal (PBW) order", line)
        m = [0] * self.k
        for g in word:
            m[g] += 1
        return tuple(m)

    def _build(self):
        N, k = self.N, self.k
        for j in range(k):
            for i in range(j):
                if (j, i) not in self.pres.relations:
                    raise PresentationError(
                        f"missing straightening rule for {self.pres.generators[j]}*{self.pres.generators[i]}")
        for (j, i), (text, line) in sorted(self.pres.relations.items()):
            v = self._eval(text, line, 1)
            target = tuple(1 if t in (i, j) else 0 for t in range(k))
            lam = [ZERO] * N
            T = {}
            bound = 2
            for (w,), c in v.terms.items():
                m = self._normal_mono(w, line)
                c = c[:N]
                if m == target:
                    lam = c
                    continue
                smaller = deg_lex_key(m) < deg_lex_key(target)
                if not smaller and not c[0] == 0:
                    raise PresentationError("PBW-type condition fails: term not smaller and of valuation 0", line)
                if any(c):
                    T[m] = c
                    bound = max(bound, sum(m))
            if not lam[0]:
                raise PresentationError("coefficient of the reordered monomial must be a unit", line)
            self.rules[(j, i)] = (lam, T)
            self.rule_bounds[(j, i)] = bound
        self.eps_gen = {}
        for g, (text, line) in self.pres.counit.items():
            v = self._eval(text, line, 1)
            if not v.is_scalar():
                raise PresentationError("counit must be a scalar", line)
            self.eps_gen[g] = v.terms.get(((),), [ZERO] * (N + _MARGIN))[:N]
        self.cop_gen = {}
        for g, (text, line) in self.pres.coproduct.items():
            v = self._eval(text, line, 2)
            self.cop_gen[g] = self._normalize_tensor(v)
        self.anti_gen = {}
        for g, (text, line) in self.pres.antipode.items():
            v = self._eval(text, line, 1)
            self.anti_gen[g] = self._normalize_tensor(v)
        self.cobracket_gen = {}
        for g, (text, line) in self.pres.cobracket.items():
            v = self._eval(text, line, 2)
            self.cobracket_gen[g] = {key: c[0] for key, c in self._normalize_tensor(v).items() if c[0]}

    def _normalize_tensor(self, v):
        """FreeVal (any arity) -> dict tuple-of-monos -> coeff list."""
        out = {}
        for key, c in v.terms.items():
            c = c[: self.N]
            legs = [self.normal_word(w) for w in key]
            acc = {(): c}
            for leg in legs:
                nxt = {}
                for k0, c0 in acc.items():
                    for m, c1 in leg.items():
                        add_into(nxt, k0 + (m,), series_mul(c0, c1, self.N))
                acc = nxt
            for k1, c1 in acc.items():
                add_into(out, k1, c1)
        return out

    # -- basic elements
    def one_mono(self):
        return (0,) * self.k

    def gen_mono(self, g):
        return tuple(1 if t == g else 0 for t in range(self.k))

    def scalar(self, c):
        if isinstance(c, TruncatedSeries):
            c = list(c.coeffs)
        elif not isinstance(c, list):
            c = [Fraction(c)] + [ZERO] * (self.N - 1)
        return AlgebraElement(self, {self.one_mono(): c})

    def gen(self, name):
        g = self.pres.index[name] if isinstance(name, str) else name
        return AlgebraElement(self, {self.gen_mono(g): [ONE] + [ZERO] * (self.N - 1)})

    def hbar(self, power=1):
        c = [ZERO] * self.N
        if power < self.N:
            c[power] = ONE
        return AlgebraElement(self, {self.one_mono(): c})

    def element(self, terms):
        return AlgebraElement(self, terms)

    def parse(self, text):
        """Evaluate an expression in this algebra (normal ordering it)."""
        v = self._eval(text, None, 1)
        return AlgebraElement(self, {k[0]: c for k, c in self._normalize_tensor(v).items()})

    # -- rewriting
    def _gm(self, g, m):
        """Normal form of generator g times normal monomial m (memoised)."""
        key = (g, m)
        res = self._gm_memo.get(key)
        if res is not None:
            return res
        N = self.N
        first = next((i for i, e in enumerate(m) if e), None)
        if first is None or g <= first:
            mm = list(m)
            mm[g] += 1
            res = {tuple(mm): [ONE] + [ZERO] * (N - 1)}
        else:
            h = first
            rest = list(m)
            rest[h] -= 1
            rest = tuple(rest)
            lam, T = self.rules[(g, h)]
            res = {}
            for m1, c1 in self._gm(g, rest).items():
                c1 = series_mul(lam, c1, N)
                for m2, c2 in self._gm(h, m1).items():
                    add_into(res, m2, series_mul(c1, c2, N))
            for t, ct in T.items():
                for m2, c2 in self._mono_mul(t, rest).items():
                    add_into(res, m2, series_mul(ct, c2, N))
        if self.windowed:
            res = self._window(res)
        self._gm_memo[key] = res
        return res

    def _mono_mul(self, a, b):
        key = (a, b)
        res = self._mm_memo.get(key)
        if res is not None:
            return res
        N = self.N
        last = next((i for i in range(self.k - 1, -1, -1) if a[i]), None)
        if last is None:
            res = {b: [ONE] + [ZERO] * (N - 1)}
        else:
            a1 = list(a)
            a1[last] -= 1
            a1 = tuple(a1)
            res = {}
            for m1, c1 in self._gm(last, b).items():
                for m2, c2 in self._mono_mul(a1, m1).items():
                    add_into(res, m2, series_mul(c1, c2, N))
        if self.windowed:
            res = self._window(res)
        self._mm_memo[key] = res
        return res

    def mul_terms(self, x, y):
        """Raw product of coefficient dicts (no degree cap)."""
        N = self.N
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                cab = series_mul(ca, cb, N)
                if not any(cab):
                    continue
                for m, c in self._mono_mul(a, b).items():
                    add_into(out, m, series_mul(cab, c, N))
        return out

    def normal_word(self, word):
        """Normal form of a word (sequence of generator indices) as a coeff dict."""
        cur = {self.one_mono(): [ONE] + [ZERO] * (self.N - 1)}
        for g in reversed(word):
            nxt = {}
            for m, c in cur.items():
                for m2, c2 in self._gm(g, m).items():
                    add_into(nxt, m2, series_mul(c, c2, self.N))
            cur = nxt
        return cur

    def _cap(self, terms):
        cap = self.degree_cap
        kept = {m: c for m, c in terms.items() if sum(m) <= cap}
        return AlgebraElement(self, kept, saturated=len(kept) != len(terms))

    def normalize(self, word, scalar=1):
        """normalize(sequence of generator names or indices, scalar)."""
        idx = [self.pres.index[g] if isinstance(g, str) else g for g in word]
        el = self._cap(self.normal_word(idx))
        return el.scale(scalar) if scalar != 1 else el

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.alg is not self or b.alg is not self:
            raise ContextMismatch("elements of different algebras/contexts")
        el = self._cap(self.mul_terms(a.terms, b.terms))
        el.saturated = el.saturated or a.saturated or b.saturated
        return el

    def power(self, a, n):
        out = self.scalar(1)
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    def format(self, terms):
        parts = []
        for m in sorted(terms, key=deg_lex_key):
            parts.append(f"{_fmt_series(terms[m])}*{self.mono_str(m)}")
        return " + ".join(parts) or "0"

    def mono_str(self, m):
        s = "*".join(f"{g}^{e}" if e > 1 else g for g, e in zip(self.pres.generators, m) if e)
        return s or "1"

    # -- Hopf structure on monomials
    def eps_mono(self, m):
        res = self._eps_memo.get(m)
        if res is None:
            res = [ONE] + [ZERO] * (self.N - 1)
            for g, e in enumerate(m):
                for _ in range(e):
                    res = series_mul(res, self.eps_gen[g], self.N)
            self._eps_memo[m] = res
        return res

    def counit(self, a: AlgebraElement) -> TruncatedSeries:
        acc = [ZERO] * self.N
        for m, c in a.terms.items():
            acc = c_add(acc, series_mul(c, self.eps_mono(m), self.N))
        return TruncatedSeries(acc, self.N)

    def tensor_mul(self, x, y):
        """Leg-wise product of two tensor coefficient dicts of equal arity."""
        N = self.N
        out = {}
        for ka, ca in x.items():
            for kb, cb in y.items():
                c0 = series_mul(ca, cb, N)
                if not any(c0):
                    continue
                acc = {(): c0}
                for a, b in zip(ka, kb):
                    nxt = {}
                    prod = self._mono_mul(a, b)
                    for k0, cc in acc.items():
                        for m, c1 in prod.items():
                            add_into(nxt, k0 + (m,), series_mul(cc, c1, N))
                    acc = nxt
                for k1, c1 in acc.items():
                    add_into(out, k1, c1)
        if self.windowed:
            out = self._window(out, tensor=True)
        return out

    def cop_mono(self, m):
        """Delta(m) as dict (a, b) -> coeff, exact mod h^N."""
        res = self._cop_memo.get(m)
        if res is not None:
            return res
        last = next((i for i in range(self.k - 1, -1, -1) if m[i]), None)
        if last is None:
            one = self.one_mono()
            res = {(one, one): [ONE] + [ZERO] * (self.N - 1)}
        else:
            m1 = list(m)
            m1[last] -= 1
            res = self.tensor_mul(self.cop_mono(tuple(m1)), self.cop_gen[last])
        self._cop_memo[m] = res
        return res

    def coproduct_terms(self, terms):
        out = {}
        for m, c in terms.items():
            for k, c1 in self.cop_mono(m).items():
                add_into(out, k, series_mul(c, c1, self.N))
        return out

    def coproduct(self, a: AlgebraElement) -> TensorElement:
        return TensorElement(self, 2, self.coproduct_terms(a.terms))

    def apply_cop_leg(self, t, leg):
        """Apply Delta to one leg of a tensor coefficient dict."""
        out = {}
        for key, c in t.items():
            for (a, b), c1 in self.cop_mono(key[leg]).items():
                add_into(out, key[:leg] + (a, b) + key[leg + 1:], series_mul(c, c1, self.N))
        return out

    def coproduct_n(self, a: AlgebraElement, n: int) -> TensorElement:
        """Delta^n = (Delta (x) id^{n-2}) o Delta^{n-1}; Delta^1 = id."""
        if n < 1:
            raise ValueError("n >= 1 required")
        t = {(m,): c for m, c in a.terms.items()}
        for _ in range(n - 1):
            t = self.apply_cop_leg(t, 0)
        return TensorElement(self, n, t)

    def _delta_mono(self, m, n, prec):
        """delta_n(m) mod h^prec, via delta_n = ((id - eps) (x) delta_{n-1}) o Delta."""
        key = (m, n, prec)
        res = self._delta_memo.get(key)
        if res is not None:
            return res
        N = self.N
        one = self.one_mono()

        def cut(c):
            return c[:prec] + [ZERO] * (N - prec)

        if n == 0:
            res = {(): cut(self.eps_mono(m))}
        elif n == 1:
            res = {}
            if m != one:
                add_into(res, (m,), cut([ONE] + [ZERO] * (N - 1)))
                e = self.eps_mono(m)
                if any(e):
                    add_into(res, (one,), cut([-x for x in e]))
        else:
            res = {}
            for (a, b), c in self.cop_mono(m).items():
                c = cut(c)
                if not any(c):
                    continue
                left = {a: [ONE] + [ZERO] * (N - 1)}
                ea = self.eps_mono(a)
                if any(ea):
                    add_into(left, one, [-x for x in ea])
                if not left:
                    continue
                rest = self._delta_mono(b, n - 1, prec)
                for l, cl in left.items():
                    cl = series_mul(cl, c, N)
                    for k1, c1 in rest.items():
                        add_into(res, (l,) + k1, cut(series_mul(cl, c1, N)))
        self._delta_memo[key] = res
        return res

    def delta_n_terms(self, terms, n, prec=None):
        prec = self.N if prec is None else min(prec, self.N)
        out = {}
        for m, c in terms.items():
            for k, c1 in self._delta_mono(m, n, prec).items():
                cc = series_mul(c, c1, self.N)
                add_into(out, k, cc[:prec] + [ZERO] * (self.N - prec))
        return out

    def delta_n(self, a: AlgebraElement, n: int, prec=None) -> TensorElement:
        """delta_n(a) = (id - eps)^{(x) n} o Delta^n (a); delta_0 = eps."""
        if n < 0:
            raise ValueError("n >= 0 required")
        return TensorElement(self, n, self.delta_n_terms(a.terms, n, prec))

    def anti_mono(self, m):
        res = self._anti_memo.get(m)
        if res is None:
            res = {self.one_mono(): [ONE] + [ZERO] * (self.N - 1)}
            for g in word_of(m):
                sg = {k[0]: c for k, c in self.anti_gen[g].items()}
                res = self.mul_terms(sg, res)
            self._anti_memo[m] = res
        return res

    def antipode(self, a: AlgebraElement) -> AlgebraElement:
        out = {}
        for m, c in a.terms.items():
            for m2, c2 in self.anti_mono(m).items():
                add_into(out, m2, series_mul(c, c2, self.N))
        return self._cap(out)

    def opposite(self, t: TensorElement) -> TensorElement:
        return TensorElement(self, t.arity, {k[::-1]: c for k, c in t.terms.items()})


class LatticeError(ValueError):
    """The Rees lattice spanned by h^|m| m is not closed under the structure maps."""


class ReesAlgebra(HopfAlgebra):
    """The lattice U' = span of u_m := h^|m| m, as a quotient algebra.

    Coefficient lists are indexed by the power e of h in front of u_m.  The
    quotient keeps h^e u_m with e < N - max(0, |m| - D); the discarded span is
    a two-sided ideal (weight e + |m| is superadditive), so products are exact.
    Coproducts land in the tensor square of the quotient.
    """

    windowed = True

    def __init__(self, pres: Presentation, params: TruncationParams):
        self.window_D = params.D
        super().__init__(pres, params, degree_cap=params.D + params.N - 1)

    def cut_len(self, m):
        return self.N - max(0, sum(m) - self.window_D)

    def _window(self, d, tensor=False):
        out = {}
        for key, c in d.items():
            n = min(self.cut_len(m) for m in key) if tensor else self.cut_len(key)
            if n > 0:
                c = c[:n] + [ZERO] * (self.N - n)
                if any(c):
                    out[key] = c
        return out

    def _rescale(self, raw, shift_of, what):
        """Raw h-series (index i) -> lattice series (index i + shift)."""
        N = self.N
        out = []
        for key, c in raw.items():
            s = shift_of(key)
            if any(c[: max(0, -s)]):
                raise LatticeError(f"{what}: term {key} leaves the lattice")
            cc = [ZERO] * N
            for i, x in enumerate(c):
                if x and 0 <= i + s < N:
                    cc[i + s] = x
            out.append((key, cc))
        return out

    def _build(self):
        N, D = self.N, self.window_D
        P = 3 * N + 2 * D  # enough raw orders for every retained lattice term
        base = HopfAlgebra(self.pres, TruncationParams(P, D))
        self.base = base
        deg = sum
        for key, (lam, T) in base.rules.items():
            lam = lam[:N]
            Tr = dict(self._rescale(T, lambda t: 2 - deg(t), "relation"))
            self.rules[key] = (lam, self._window(Tr))
            self.rule_bounds[key] = base.rule_bounds[key]
        self.eps_gen = {g: c for (g, c) in self._rescale({g: c for g, c in base.eps_gen.items()},
                                                         lambda g: 1, "counit")}
        self.cop_gen = {
            g: self._window(dict(self._rescale(t, lambda k: 1 - deg(k[0]) - deg(k[1]), "coproduct")), tensor=True)
            for g, t in base.cop_gen.items()}
        self.anti_gen = {
            g: self._window(dict(self._rescale(t, lambda k: 1 - deg(k[0]), "antipode")), tensor=True)
            for g, t in base.anti_gen.items()}
        self.cobracket_gen = dict(base.cobracket_gen)


# ---------------------------------------------------------------- checks

@dataclass
class Report:
    """Ordered list of (condition, passed, detail) rows."""
    rows: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.rows.append((name, bool(ok), detail))

    @property
    def ok(self):
        return all(r[1] for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r[1]]

    def to_json(self):
        return [{"condition": n, "passed": ok, "detail": d} for n, ok, d in self.rows]


def check_hopf_axioms(pres: Presentation, params=None) -> Report:
    """Coassociativity, counit, antipode and compatibility of Delta, eps, S
    with every straightening rule, checked on generators at truncation."""
    params = params or TruncationParams(3, 3)
    A = HopfAlgebra(pres, params)
    N = A.N
    rep = Report()
    one = A.one_mono()
    unit = [ONE] + [ZERO] * (N - 1)
    for g, name in enumerate(pres.generators):
        cop = A.cop_gen[g]
        left = A.apply_cop_leg(cop, 0)
        right = A.apply_cop_leg(cop, 1)
        rep.add(f"coassociativity[{name}]", left == right)
        # counit laws
        l1, r1 = {}, {}
        for (a, b), c in cop.items():
            add_into(l1, b, series_mul(c, A.eps_mono(a), N))
            add_into(r1, a, series_mul(c, A.eps_mono(b), N))
        target = {A.gen_mono(g): unit}
        rep.add(f"counit[{name}]", l1 == target and r1 == target)
        # antipode laws
        e = A.eps_mono(A.gen_mono(g))
        expect = {one: e} if any(e) else {}
        s_left, s_right = {}, {}
        for (a, b), c in cop.items():
            for m, c1 in A.mul_terms(A.anti_mono(a), {b: c}).items():
                add_into(s_left, m, c1)
            for m, c1 in A.mul_terms({a: c}, A.anti_mono(b)).items():
                add_into(s_right, m, c1)
        rep.add(f"antipode[{name}]", s_left == expect and s_right == expect)
    for (j, i), (lam, T) in sorted(A.rules.items()):
        gj, gi = pres.generators[j], pres.generators[i]
        rhs = dict(T)
        add_into(rhs, A.gen_mono(i) if i == j else tuple(
            1 if t in (i, j) else 0 for t in range(A.k)), lam)
        lhs_cop = A.tensor_mul(A.cop_gen[j], A.cop_gen[i])
        rhs_cop = A.coproduct_terms(rhs)
        rep.add(f"coproduct-compatibility[{gj}*{gi}]", lhs_cop == rhs_cop)
        lhs_eps = series_mul(A.eps_gen[j], A.eps_gen[i], N)
        rhs_eps = [ZERO] * N
        for m, c in rhs.items():
            rhs_eps = c_add(rhs_eps, series_mul(c, A.eps_mono(m), N))
        rep.add(f"counit-compatibility[{gj}*{gi}]", lhs_eps == rhs_eps)
        s_lhs = A.mul_terms(A.anti_mono(A.gen_mono(i)), A.anti_mono(A.gen_mono(j)))
        s_rhs = {}
        for m, c in rhs.items():
            for m2, c2 in A.anti_mono(m).items():
                add_into(s_rhs, m2, series_mul(c, c2, N))
        rep.add(f"antipode-compatibility[{gj}*{gi}]", s_lhs == s_rhs)
    return rep


def check_confluence(pres: Presentation, params=None) -> list:
    """Resolve every overlap g_c g_b g_a (c > b > a) both ways.

    Returns the list of unresolved overlaps as generator-name triples."""
    k = len(pres.generators)
    triples = [(c, b, a) for c in range(k) for b in range(c) for a in range(b)
               if {(c, b), (b, a), (c, a)} <= set(pres.relations)]
    if not triples:
        return []
    A = HopfAlgebra(pres, params or TruncationParams(3, 3))
    bad = []
    for c, b, a in triples:
        lam_cb, T_cb = A.rules[(c, b)]
        cb = dict(T_cb)
        add_into(cb, tuple(1 if t in (b, c) else 0 for t in range(k)), lam_cb)
        lam_ba, T_ba = A.rules[(b, a)]
        ba = dict(T_ba)
        add_into(ba, tuple(1 if t in (a, b) else 0 for t in range(k)), lam_ba)
        ga = {A.gen_mono(a): [ONE] + [ZERO] * (A.N - 1)}
        gc = {A.gen_mono(c): [ONE] + [ZERO] * (A.N - 1)}
        way1 = A.mul_terms(cb, ga)
        way2 = A.mul_terms(gc, ba)
        if way1 != way2:
            bad.append(tuple(pres.generators[t] for t in (c, b, a)))
    return bad
