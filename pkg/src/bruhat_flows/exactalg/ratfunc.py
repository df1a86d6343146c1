"""Rational functions num/den over Q, kept in lowest terms.

Multivariate gcd is delegated to sympy; everything else stays in Poly.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .poly import Poly


def _to_sympy(p, syms):
    expr = sympy.Integer(0)
    for mono, c in p.terms():
        t = sympy.Rational(c.numerator, c.denominator)
        for n, e in mono.items():
            t *= syms[n] ** e
        expr += t
    return expr


def _from_sympy(expr, names):
    poly = sympy.Poly(expr, *[sympy.Symbol(n) for n in names]) if names else None
    if poly is None:
        return Poly.const(Fraction(str(sympy.nsimplify(expr))))
    out = Poly.const(0)
    for exps, c in poly.terms():
        c = sympy.Rational(c)
        out = out + Poly.monomial(dict(zip(names, exps)), Fraction(int(c.p), int(c.q)))
    return out


def poly_gcd(a, b):
    names = sorted(set(a.variables()) | set(b.variables()))
    if not names:
        return Poly.const(1)
    syms = {n: sympy.Symbol(n) for n in names}
    g = sympy.gcd(_to_sympy(a, syms), _to_sympy(b, syms))
    return _from_sympy(g, names)


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num.has_negative_exponents() or den.has_negative_exponents():
            # clear Laurent monomials into the other side
            shift = {}
            for p in (num, den):
                for v in p.variables():
                    shift[v] = max(shift.get(v, 0), -p.min_degree_in(v))
            m = Poly.monomial(shift)
            num, den = num * m, den * m
        if reduce and not num:
            den = Poly.const(1)
        elif reduce and not den.is_const():
            g = poly_gcd(num, den)
            if not g.is_const():
                num, den = num.exact_div(g), den.exact_div(g)
        lead = next(iter(den.terms()))[1]
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    def __add__(self, o):
        o = _rf(o)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-_rf(o))

    def __rsub__(self, o):
        return _rf(o) - self

    def __mul__(self, o):
        o = _rf(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _rf(o)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return _rf(o) / self

    def __pow__(self, k):
        if k < 0:
            return RatFunc(self.den ** -k, self.num ** -k)
        return RatFunc(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, o):
        o = _rf(o)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_poly(self):
        return self.den.is_const()

    def as_poly(self):
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.const_value())

    def diff(self, name):
        return RatFunc(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den)

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def __str__(self):
        return str(self.num) if self.den == 1 else f"({self.num})/({self.den})"

    __repr__ = __str__


def _rf(x):
    return x if isinstance(x, RatFunc) else RatFunc(x, reduce=False)
