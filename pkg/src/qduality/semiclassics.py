"""Semiclassical limits: specialisation at h = 0, the induced Poisson bracket
and co-Poisson cobracket, Lie bialgebra data, coisotropy and complementary
duals at the Lie level, and classical enveloping algebras used as oracles.

Conventions: delta = h^-1 (Delta - Delta^op) mod h, and x^y = x(x)y - y(x)x.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, Sequence

from .algebra import AlgebraElement, HopfAlgebra, Presentation, TensorElement, parse_presentation
from .dual import DualFunctional, convolve
from .linalg import Echelon, annihilator
from .scalars import TruncationParams, frac

ZERO = Fraction(0)
ONE = Fraction(1)


class SemiclassicalError(ValueError):
    pass


# ---------------------------------------------------------------- specialisation

def specialize(x):
    """h = 0 part: {monomial: Fraction} for elements and functionals,
    {(m1, ..., mn): Fraction} for tensors."""
    if isinstance(x, AlgebraElement):
        return x.specialize()
    if isinstance(x, TensorElement):
        return {k: c[0] for k, c in x.terms.items() if c[0]}
    if isinstance(x, DualFunctional):
        return {m: c[0] for m, c in x.values.items() if c[0]}
    raise TypeError(f"cannot specialize {type(x).__name__}")


def _shift_down(terms, what):
    out = {}
    for key, c in terms.items():
        if c[0]:
            raise SemiclassicalError(f"{what}: the h^0 part does not vanish")
        if len(c) < 2:
            raise SemiclassicalError(f"{what}: need precision N >= 2")
        if c[1]:
            out[key] = c[1]
    return out


def poisson_bracket(x, y):
    """{x, y} = h^-1 (x y - y x) mod h for lifts x, y in an algebra that is
    commutative modulo h (elements of a Rees algebra U', or functionals)."""
    if isinstance(x, DualFunctional):
        xy, yx = convolve(x, y), convolve(y, x)
        diff = {m: [a - b for a, b in zip(xy(m).coeffs, yx(m).coeffs)]
                for m in set(xy.values) | set(yx.values)}
        return _shift_down(diff, "poisson_bracket (noncommutative specialisation)")
    c = x * y - y * x
    return _shift_down(c.terms, "poisson_bracket (noncommutative specialisation)")


def copoisson_cobracket(x: AlgebraElement):
    """delta(x) = h^-1 (Delta(x) - Delta^op(x)) mod h, as {(a, b): Fraction}."""
    A = x.alg
    t = A.coproduct(x)
    d = t - A.opposite(t)
    return _shift_down(d.terms, "copoisson_cobracket (non-cocommutative specialisation)")


# ---------------------------------------------------------------- Lie bialgebras

def _zeros3(n):
    return [[[ZERO] * n for _ in range(n)] for _ in range(n)]


class LieBialgebraData:
    """bracket[i][j][k] = c^k_ij ([x_i, x_j] = sum_k c^k_ij x_k);
    cobracket[i][j][k] = d^jk_i (delta(x_i) = sum d^jk_i x_j (x) x_k)."""

    def __init__(self, names: Sequence[str], bracket, cobracket):
        self.names = list(names)
        self.n = len(self.names)
        self.bracket = [[[frac(v) for v in r] for r in M] for M in bracket]
        self.cobracket = [[[frac(v) for v in r] for r in M] for M in cobracket]
        self.certificate = {}

    @property
    def dimension(self):
        return self.n

    def br(self, u, v):
        """Bracket of coordinate vectors."""
        n = self.n
        out = [ZERO] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if v[j]:
                    c = u[i] * v[j]
                    for k in range(n):
                        out[k] += c * self.bracket[i][j][k]
        return out

    def cobr(self, u):
        n = self.n
        out = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            if u[i]:
                for j in range(n):
                    for k in range(n):
                        out[j][k] += u[i] * self.cobracket[i][j][k]
        return out

    def dual(self) -> "LieBialgebraData":
        """g* in the dual basis: bracket = transposed cobracket and vice versa."""
        n = self.n
        b = _zeros3(n)
        d = _zeros3(n)
        for i, j, k in product(range(n), repeat=3):
            b[j][k][i] = self.cobracket[i][j][k]
            d[k][i][j] = self.bracket[i][j][k]
        return LieBialgebraData([f"d{x}" for x in self.names], b, d)

    def check(self) -> Dict[str, bool]:
        n = self.n
        e = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        anti = all(self.bracket[i][j][k] == -self.bracket[j][i][k] for i, j, k in product(range(n), repeat=3))
        coanti = all(self.cobracket[i][j][k] == -self.cobracket[i][k][j] for i, j, k in product(range(n), repeat=3))

        def jacobi(lb):
            for i, j, k in product(range(n), repeat=3):
                a = lb.br(e[i], lb.br(e[j], e[k]))
                b = lb.br(e[j], lb.br(e[k], e[i]))
                c = lb.br(e[k], lb.br(e[i], e[j]))
                if any(x + y + z for x, y, z in zip(a, b, c)):
                    return False
            return True

        def act(x, T):
            # x . T under the adjoint action on g (x) g
            out = [[ZERO] * n for _ in range(n)]
            for a in range(n):
                for b in range(n):
                    t = T[a][b]
                    if not t:
                        continue
                    xa = self.br(x, e[a])
                    xb = self.br(x, e[b])
                    for c in range(n):
                        out[c][b] += t * xa[c]
                        out[a][c] += t * xb[c]
            return out

        cocycle = True
        for i, j in product(range(n), repeat=2):
            lhs = self.cobr(self.br(e[i], e[j]))
            r1, r2 = act(e[i], self.cobr(e[j])), act(e[j], self.cobr(e[i]))
            if any(lhs[a][b] != r1[a][b] - r2[a][b] for a in range(n) for b in range(n)):
                cocycle = False
                break
        self.certificate = {"antisymmetry": anti, "jacobi": jacobi(self), "co_antisymmetry": coanti,
                            "co_jacobi": jacobi(self.dual()), "cocycle": cocycle}
        return dict(self.certificate)

    def to_json(self):
        flat = lambda T: [str(v) for M in T for r in M for v in r]
        return {"dimension": self.n, "names": self.names, "bracket": flat(self.bracket),
                "cobracket": flat(self.cobracket)}

    def __eq__(self, other):
        return (isinstance(other, LieBialgebraData) and self.bracket == other.bracket
                and self.cobracket == other.cobracket)


def lie_bialgebra_extract(p: Presentation) -> LieBialgebraData:
    """g and delta from the h -> 0 limit of commutators and coproducts of generators."""
    A = HopfAlgebra(p, TruncationParams(2, 2))
    n = A.k
    gen_of = {A.gen_mono(g): g for g in range(n)}
    bracket = _zeros3(n)
    for i, j in product(range(n), repeat=2):
        x, y = A.gen(p.generators[i]), A.gen(p.generators[j])
        for m, v in specialize(x * y - y * x).items():
            if m not in gen_of:
                raise SemiclassicalError(f"[{p.generators[i]},{p.generators[j]}] is not linear mod h")
            bracket[i][j][gen_of[m]] = v
    cobracket = _zeros3(n)
    for i in range(n):
        for (a, b), v in copoisson_cobracket(A.gen(p.generators[i])).items():
            if a not in gen_of or b not in gen_of:
                raise SemiclassicalError(f"delta({p.generators[i]}) is not in g (x) g")
            cobracket[i][gen_of[a]][gen_of[b]] = v
    lb = LieBialgebraData(p.generators, bracket, cobracket)
    cert = lb.check()
    if p.cobracket:
        declared = True
        for g, _ in p.cobracket.items():
            decl = A.cobracket_gen.get(g, {})
            got = {(A.gen_mono(j), A.gen_mono(k)): cobracket[g][j][k]
                   for j in range(n) for k in range(n) if cobracket[g][j][k]}
            declared &= decl == got
        cert["matches_declared_cobracket"] = declared
    lb.certificate = cert
    return lb


# ---------------------------------------------------------------- subalgebras of g

class LieSubalgebraDatum:
    """Subspace of g (or g*) given by a rational basis, kept in RREF."""

    def __init__(self, basis, dim: int, label=""):
        self.ambient_dim = dim
        self.label = label
        ech = Echelon()
        for v in basis:
            w = {i: frac(x) for i, x in enumerate(v) if x}
            if w:
                ech.add(w)
        self.rows = ech.rref()
        self.certificate = {}

    @property
    def dim(self):
        return len(self.rows)

    def basis(self):
        return [[frac(r.get(i, ZERO)) for i in range(self.ambient_dim)] for r in self.rows]

    def contains(self, v):
        ech = Echelon()
        for r in self.rows:
            ech.rows[min(r)] = r
        rest, _ = ech.reduce({i: frac(x) for i, x in enumerate(v) if x})
        return not rest

    def annihilator(self):
        return [[frac(r.get(i, ZERO)) for i in range(self.ambient_dim)]
                for r in annihilator(self.rows, self.ambient_dim)]

    def __eq__(self, other):
        return isinstance(other, LieSubalgebraDatum) and self.rows == other.rows

    def __repr__(self):
        return f"LieSubalgebraDatum({self.label or '?'}, dim={self.dim} in {self.ambient_dim})"


def is_lie_subalgebra(k: LieSubalgebraDatum, g: LieBialgebraData) -> bool:
    B = k.basis()
    return all(k.contains(g.br(u, v)) for u in B for v in B)


def coisotropy_check(k: LieSubalgebraDatum, g: LieBialgebraData) -> Dict[str, bool]:
    """subalgebra: [k, k] in k; coideal: delta(k) in k^g = k(x)g + g(x)k, i.e.
    (alpha (x) beta)(delta(x)) = 0 for x in k and alpha, beta in k^perp."""
    sub = is_lie_subalgebra(k, g)
    ann = k.annihilator()
    coideal = True
    for x in k.basis():
        d = g.cobr(x)
        for a in ann:
            for b in ann:
                if sum(a[i] * b[j] * d[i][j] for i in range(g.n) for j in range(g.n)):
                    coideal = False
    return {"subalgebra": sub, "coideal": coideal, "coisotropic": sub and coideal}


def complementary_dual_lie(k: LieSubalgebraDatum, g: LieBialgebraData) -> LieSubalgebraDatum:
    """k^perp in g* (dual basis), certified to be a Lie subalgebra of g*."""
    chk = coisotropy_check(k, g)
    if not chk["coisotropic"]:
        raise SemiclassicalError(f"complementary dual needs a coisotropic subalgebra, got {chk}")
    kp = LieSubalgebraDatum(k.annihilator(), g.n, f"({k.label})^perp" if k.label else "")
    kp.certificate = {"subalgebra_of_dual": is_lie_subalgebra(kp, g.dual())}
    if not kp.certificate["subalgebra_of_dual"]:
        raise SemiclassicalError("k^perp is not a subalgebra of g*")
    return kp


# ---------------------------------------------------------------- classical enveloping algebras

def _lin(coeffs, names):
    parts = [f"({c})*{names[k]}" for k, c in enumerate(coeffs) if c]
    return " + ".join(parts)


def classical_presentation(g: LieBialgebraData, name=None) -> Presentation:
    """U(g) with primitive generators, as a presentation text (h absent)."""
    nm = g.names
    lines = ["[meta]", f"name = {name or 'U_' + '_'.join(nm)}", "[generators]", " ".join(nm), "[relations]"]
    for j in range(g.n):
        for i in range(j):
            extra = _lin([-x for x in g.bracket[i][j]], nm)  # x_j x_i = x_i x_j + [x_j, x_i]
            lines.append(f"{nm[j]}*{nm[i]} = {nm[i]}*{nm[j]}" + (f" + {extra}" if extra else ""))
    lines.append("[coproduct]")
    lines += [f"{x} = {x} (x) 1 + 1 (x) {x}" for x in nm]
    lines.append("[counit]")
    lines += [f"{x} = 0" for x in nm]
    lines.append("[antipode]")
    lines += [f"{x} = -{x}" for x in nm]
    return parse_presentation("\n".join(lines) + "\n")
