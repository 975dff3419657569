"""Tiny expression language for presentation files.

Values are finite sums of tensor words over the free algebra on the
declared generators, with coefficients in Q[h]/(h^P).  The evaluator tracks
how many trailing h-orders are still trustworthy (division by h loses one).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .scalars import series_mul, _invert_unit

RESERVED = {"h", "exp", "inv", "x"}

_TOKEN = re.compile(r"\s*(\(x\)|\d+|[A-Za-z_][A-Za-z_0-9]*|[-+*/^()])")


class ExprError(ValueError):
    pass


def tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class FreeVal:
    """sum of coeff * (w_1 (x) ... (x) w_n); coeff is a list of P Fractions."""

    def __init__(self, terms, arity, P, prec):
        self.terms = {k: v for k, v in terms.items() if any(v)}
        self.arity = arity
        self.P = P
        self.prec = prec

    @classmethod
    def scalar(cls, coeffs, P):
        cs = list(coeffs) + [Fraction(0)] * (P - len(coeffs))
        return cls({((),): cs[:P]}, 1, P, P)

    def is_scalar(self):
        return self.arity == 1 and all(k == ((),) for k in self.terms)

    def __add__(self, other):
        if self.arity != other.arity:
            if not other.terms:
                return self
            if not self.terms:
                return other
            raise ExprError("adding tensors of different arity")
        terms = {k: list(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            cur = terms.setdefault(k, [Fraction(0)] * self.P)
            terms[k] = [a + b for a, b in zip(cur, v)]
        return FreeVal(terms, self.arity, self.P, min(self.prec, other.prec))

    def scale(self, coeffs):
        terms = {k: series_mul(v, coeffs, self.P) for k, v in self.terms.items()}
        return FreeVal(terms, self.arity, self.P, self.prec)

    def __neg__(self):
        return self.scale([Fraction(-1)])

    def __mul__(self, other):
        if self.is_scalar() and other.arity != 1:
            return other.scale(self.terms.get(((),), [Fraction(0)]))._with_prec(min(self.prec, other.prec))
        if other.is_scalar() and self.arity != 1:
            return self.scale(other.terms.get(((),), [Fraction(0)]))._with_prec(min(self.prec, other.prec))
        if self.arity != other.arity:
            raise ExprError("multiplying tensors of different arity")
        terms = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                c = series_mul(v1, v2, self.P)
                cur = terms.get(key)
                terms[key] = c if cur is None else [a + b for a, b in zip(cur, c)]
        return FreeVal(terms, self.arity, self.P, min(self.prec, other.prec))

    def tensor(self, other):
        terms = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                terms[k1 + k2] = series_mul(v1, v2, self.P)
        return FreeVal(terms, self.arity + other.arity, self.P, min(self.prec, other.prec))

    def _with_prec(self, p):
        self.prec = min(self.prec, p)
        return self

    def div_h(self):
        terms = {}
        for k, v in self.terms.items():
            if v[0]:
                raise ExprError("division by h of a term with nonzero constant part")
            terms[k] = list(v[1:]) + [Fraction(0)]
        return FreeVal(terms, self.arity, self.P, self.prec - 1)

    def power(self, n):
        out = FreeVal.scalar([1], self.P)
        if self.arity != 1:
            out = FreeVal({((),) * self.arity: [Fraction(1)] + [Fraction(0)] * (self.P - 1)},
                          self.arity, self.P, self.P)
        for _ in range(n):
            out = out * self
        return out


class Parser:
    def __init__(self, text, gen_index, P):
        self.toks = tokenize(text)
        self.i = 0
        self.gens = gen_index
        self.P = P

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        t = self.peek()
        if t is None or (expected is not None and t != expected):
            raise ExprError(f"expected {expected or 'token'}, got {t!r}")
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            raise ExprError(f"trailing input at {self.peek()!r}")
        return v

    def expr(self):
        v = self.tensor_term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.tensor_term()
            v = v + (-w if op == "-" else w)
        return v

    def tensor_term(self):
        v = self.term()
        while self.peek() == "(x)":
            self.take()
            v = v.tensor(self.term())
        return v

    def term(self):
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            if op == "*":
                v = v * self.unary()
            else:
                t = self.take()
                if t == "h":
                    v = v.div_h()
                elif t.isdigit():
                    v = v.scale([Fraction(1, int(t))])
                else:
                    raise ExprError("can only divide by h or an integer")
        return v

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == "^":
            self.take()
            n = self.take()
            if not n.isdigit():
                raise ExprError("exponent must be a nonnegative integer")
            v = v.power(int(n))
        return v

    def atom(self):
        t = self.take()
        P = self.P
        if t.isdigit():
            return FreeVal.scalar([Fraction(int(t))], P)
        if t == "h":
            return FreeVal.scalar([0, 1], P)
        if t == "(":
            v = self.expr()
            self.take(")")
            return v
        if t in ("exp", "inv"):
            self.take("(")
            v = self.expr()
            self.take(")")
            return _exp(v) if t == "exp" else _inv(v)
        if t in self.gens:
            return FreeVal({((self.gens[t],),): [Fraction(1)] + [Fraction(0)] * (P - 1)}, 1, P, P)
        raise ExprError(f"unknown symbol {t!r}")


def _exp(v):
    if v.arity != 1:
        raise ExprError("exp of a tensor")
    if any(c[0] for c in v.terms.values()):
        raise ExprError("exp needs an argument of h-valuation >= 1")
    out = FreeVal.scalar([1], v.P)
    term = FreeVal.scalar([1], v.P)
    for n in range(1, v.P):
        term = (term * v).scale([Fraction(1, n)])
        out = out + term
    out.prec = min(out.prec, v.prec)
    return out


def _inv(v):
    if not v.is_scalar():
        raise ExprError("inv only applies to scalar units")
    cs = v.terms.get(((),))
    if not cs or not cs[0]:
        raise ExprError("inv of a non-unit")
    out = FreeVal.scalar(_invert_unit(cs, v.P), v.P)
    out.prec = v.prec
    return out


def evaluate(text, gen_index, P):
    return Parser(text, gen_index, P).parse()
