"""Quasi-polynomials  sum_k q_k(c) exp(a_k * rho * c).

``rho`` is a fixed rate shared by all terms: the constant 1 when the flow
starts at a rational point, or the symbol ``y0`` when a flow is kept symbolic
in its Hamiltonian value.  Exponent keys ``a_k`` are exact rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import Poly, fmt_q

T = "c"
_C = Poly.var(T)
ONE = Poly.const(1)


def _same_rate(a, b):
    if a.rate != b.rate:
        raise ValueError("quasi-polynomials with different rates")


class QuasiPoly:
    __slots__ = ("terms", "rate")

    def __init__(self, terms=None, rate=ONE):
        self.rate = rate if isinstance(rate, Poly) else Poly.const(rate)
        t = {}
        for a, q in (terms or {}).items():
            q = q if isinstance(q, Poly) else Poly.const(q)
            if q:
                a = Fraction(a)
                t[a] = t[a] + q if a in t else q
        self.terms = {a: q for a, q in t.items() if q}

    @classmethod
    def const(cls, value, rate=ONE):
        return cls({Fraction(0): value}, rate)

    @classmethod
    def exp(cls, a, rate=ONE, coeff=1):
        """coeff * exp(a * rate * c)"""
        return cls({Fraction(a): coeff}, rate)

    @classmethod
    def c(cls, rate=ONE):
        return cls({Fraction(0): _C}, rate)

    def _lift(self, other):
        if isinstance(other, QuasiPoly):
            _same_rate(self, other)
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return QuasiPoly.const(other, self.rate)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for a, q in other.terms.items():
            t[a] = t[a] + q if a in t else q
        return QuasiPoly(t, self.rate)

    __radd__ = __add__

    def __neg__(self):
        return QuasiPoly({a: -q for a, q in self.terms.items()}, self.rate)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return QuasiPoly({a: q * other for a, q in self.terms.items()}, self.rate)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        t = {}
        for a, q in self.terms.items():
            for b, r in other.terms.items():
                s = a + b
                t[s] = t[s] + q * r if s in t else q * r
        return QuasiPoly(t, self.rate)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = QuasiPoly.const(1, self.rate)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = QuasiPoly.const(other, self.rate)
        if not isinstance(other, QuasiPoly):
            return NotImplemented
        return self.rate == other.rate and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.rate))

    def is_zero(self):
        return not self.terms

    def exponents(self):
        return sorted(self.terms)

    def diff(self):
        """d/dc"""
        t = {}
        for a, q in self.terms.items():
            t[a] = q.diff(T) + q * self.rate * a
        return QuasiPoly(t, self.rate)

    def integrate(self, shift=0):
        """F with F(0) = 0 and F'(c) = self(c) * exp(shift * rate * c)."""
        shift = Fraction(shift)
        out = QuasiPoly({}, self.rate)
        for a, q in self.terms.items():
            b = a + shift
            parts = q.split_by(T)
            if b == 0:
                acc = Poly.const(0)
                for m, coef in parts.items():
                    if m < 0:
                        raise ValueError("negative power of c")
                    acc = acc + coef * Poly.var(T, m + 1) * Fraction(1, m + 1)
                out = out + QuasiPoly({Fraction(0): acc}, self.rate)
                continue
            inv = self.rate ** -1 * Fraction(1) / b if not self.rate.is_const() else Poly.const(1 / (b * self.rate.const_value()))
            # int_0^c s^m e^{Bs} ds = e^{Bc} sum_k (-1)^k m!/(m-k)! c^{m-k} B^{-k-1} - (-1)^m m! B^{-m-1}
            expo = Poly.const(0)
            const = Poly.const(0)
            for m, coef in parts.items():
                if m < 0:
                    raise ValueError("negative power of c")
                for k in range(m + 1):
                    fac = Fraction((-1) ** k * math.factorial(m), math.factorial(m - k))
                    expo = expo + coef * Poly.var(T, m - k) * (inv ** (k + 1)) * fac
                const = const - coef * (inv ** (m + 1)) * ((-1) ** m * math.factorial(m))
            out = out + QuasiPoly({b: expo, Fraction(0): const}, self.rate)
        return out

    def shifted(self, shift):
        """self * exp(shift * rate * c)"""
        shift = Fraction(shift)
        return QuasiPoly({a + shift: q for a, q in self.terms.items()}, self.rate)

    def at_zero(self):
        total = Poly.const(0)
        for q in self.terms.values():
            total = total + q.substitute({T: 0})
        return total

    def substitute(self, mapping):
        """Substitute base-point symbols inside the coefficients (not c)."""
        rate = self.rate.substitute(mapping) if mapping else self.rate
        return QuasiPoly({a: q.substitute(mapping) for a, q in self.terms.items()}, rate)

    def at(self, cval, env=None):
        """Evaluate at a float/rational c; ``env`` fills remaining symbols."""
        env = dict(env or {})
        rate = self.rate.evaluate(env) if not self.rate.is_const() else self.rate.const_value()
        env[T] = cval
        total = 0.0
        for a, q in self.terms.items():
            qv = float(q.evaluate(env))
            total += qv if a == 0 else qv * math.exp(float(a * rate) * float(cval))
        return total

    def exact_at(self, cval):
        """Exact value at a rational c; only allowed when no exponentials remain."""
        if any(a != 0 for a in self.terms):
            raise ValueError("transcendental value")
        return self.terms.get(Fraction(0), Poly.const(0)).substitute({T: Fraction(cval)})

    def is_structural(self):
        """Property Q, structurally: finite support, polynomial in c coefficients."""
        for a, q in self.terms.items():
            if not isinstance(a, Fraction) or not isinstance(q, Poly):
                return False
            if q.min_degree_in(T) < 0:
                return False
        return True

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for a in sorted(self.terms, key=lambda x: (x != 0, x)):
            q = self.terms[a]
            if a == 0:
                out.append(f"({q})")
            else:
                r = "" if self.rate == 1 else f"*{self.rate}"
                out.append(f"({q})*exp({_fq(a)}{r}*c)")
        return " + ".join(out)

    __repr__ = __str__

    def to_json(self, y0=None):
        """Terms as ``{"exp": ..., "poly": ...}``; exponents shown as multiples of y0 when known."""
        rows = []
        for a in sorted(self.terms):
            if self.rate != 1:
                e = f"{_pq(a)}·{self.rate}"
            elif y0 not in (None, 0) and a != 0:
                e = f"{_pq(Fraction(a) / Fraction(y0))}·y0"
            else:
                e = _pq(a)
            rows.append({"exp": e, "poly": str(self.terms[a])})
        return rows


def _fq(q):
    return fmt_q(Fraction(q))


def _pq(q):
    """Always p/q, as in the FlowCurve JSON schema."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
