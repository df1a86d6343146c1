"""Sparse multivariate (Laurent) polynomials with exact rational coefficients.

Variables are referred to by name (``x1``, ``xi0``, ``c`` ...).  Internally a
monomial is a tuple of ``(var_id, exponent)`` pairs sorted by id; the ids are
process-local, so anything user-visible goes through the name-ordered views.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from numbers import Rational

_IDS: dict[str, int] = {}
_NAMES: list[str] = []


def var_id(name):
    i = _IDS.get(name)
    if i is None:
        i = len(_NAMES)
        _IDS[name] = i
        _NAMES.append(name)
    return i


_KEY_RE = re.compile(r"^([A-Za-z_]+?)(\d*)$")


def name_key(name):
    """Sort key: alphabetic prefix, then numeric suffix (x2 < x10)."""
    m = _KEY_RE.match(name)
    if not m:
        return (name, -1)
    pre, num = m.groups()
    return (pre, int(num) if num else -1)


def fmt_q(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_deg(m):
    return sum(e for _, e in m)


def _order_key(m):
    # graded lex on internal ids; a total monomial order used for division
    return (_mono_deg(m), tuple((-v, e) for v, e in m))


def _print_key(m):
    named = sorted(((name_key(_NAMES[v]), e) for v, e in m))
    return (-_mono_deg(m), tuple((k, -e) for k, e in named))


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Poly.const(x)
    return NotImplemented


class Poly:
    __slots__ = ("_t", "_h")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for m, c in terms.items():
                if c:
                    t[m] = Fraction(c)
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t):
        p = cls.__new__(cls)
        p._t = t
        p._h = None
        return p

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name, power=1):
        if not power:
            return cls.const(1)
        return cls._raw({((var_id(name), power),): Fraction(1)})

    @classmethod
    def monomial(cls, exps, coeff=1):
        """Monomial from a ``{name: exponent}`` mapping."""
        m = tuple(sorted((var_id(n), e) for n, e in exps.items() if e))
        c = Fraction(coeff)
        return cls._raw({m: c} if c else {})

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self._t)

    def is_zero(self):
        return not self._t

    def is_const(self):
        return not self._t or (len(self._t) == 1 and () in self._t)

    def const_value(self):
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self._t.get((), Fraction(0))

    def constant_term(self):
        return self._t.get((), Fraction(0))

    def is_monomial(self):
        return len(self._t) == 1

    def nterms(self):
        return len(self._t)

    def terms(self):
        """Iterate ``({name: exp}, coeff)`` in canonical print order."""
        for m in sorted(self._t, key=_print_key):
            yield {_NAMES[v]: e for v, e in m}, self._t[m]

    def variables(self):
        vs = {v for m in self._t for v, _ in m}
        return sorted((_NAMES[v] for v in vs), key=name_key)

    def degree(self):
        if not self._t:
            return -1
        return max(_mono_deg(m) for m in self._t)

    def degree_in(self, name):
        i = _IDS.get(name)
        best = 0
        for m in self._t:
            for v, e in m:
                if v == i and e > best:
                    best = e
        return best

    def min_degree_in(self, name):
        i = _IDS.get(name)
        best = 0
        for m in self._t:
            for v, e in m:
                if v == i and e < best:
                    best = e
        return best

    def has_negative_exponents(self):
        return any(e < 0 for m in self._t for _, e in m)

    def coeff(self, exps):
        m = tuple(sorted((var_id(n), e) for n, e in exps.items() if e))
        return self._t.get(m, Fraction(0))

    def content(self):
        """Largest rational dividing every coefficient, positive."""
        from math import gcd

        num = 0
        den = 1
        for c in self._t.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._t.items()})

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(t)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) - c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(t)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw({})
            return Poly._raw({m: c * other for m, c in self._t.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                s = t.get(m, 0) + ca * cb
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (m, c), = self._t.items()
            return Poly._raw({tuple((v, e * k) for v, e in m): Fraction(1) / c ** (-k)})
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.exact_div(other)

    def exact_div(self, other):
        """Exact quotient; raises ValueError if ``other`` does not divide."""
        if not other._t:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_monomial():
            (m, c), = other._t.items()
            inv = tuple((v, -e) for v, e in m)
            return Poly._raw({_mono_mul(mm, inv): cc / c for mm, cc in self._t.items()})
        if self.has_negative_exponents() or other.has_negative_exponents():
            raise ValueError("general division needs ordinary polynomials")
        lt_m = max(other._t, key=_order_key)
        lt_c = other._t[lt_m]
        lt_inv = tuple((v, -e) for v, e in lt_m)
        rest = [(m, c) for m, c in other._t.items() if m != lt_m]
        rem = dict(self._t)
        heap = [(_neg_key(m), m) for m in rem]
        heapq.heapify(heap)
        quo = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = rem.pop(m, None)
            if not c:
                continue
            qm = _mono_mul(m, lt_inv)
            if any(e < 0 for _, e in qm):
                raise ValueError("polynomial division is not exact")
            qc = c / lt_c
            quo[qm] = quo.get(qm, 0) + qc
            for om, oc in rest:
                pm = _mono_mul(qm, om)
                s = rem.get(pm, 0) - qc * oc
                if s:
                    if pm not in rem:
                        heapq.heappush(heap, (_neg_key(pm), pm))
                    rem[pm] = s
                else:
                    rem.pop(pm, None)
        return Poly._raw({m: c for m, c in quo.items() if c})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_const() and self.constant_term() == other
        if not isinstance(other, Poly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # -- calculus and substitution -----------------------------------------

    def diff(self, name):
        i = _IDS.get(name)
        if i is None:
            return Poly._raw({})
        t = {}
        for m, c in self._t.items():
            for k, (v, e) in enumerate(m):
                if v == i:
                    nm = m[:k] + ((v, e - 1),) + m[k + 1:] if e != 1 else m[:k] + m[k + 1:]
                    t[nm] = t.get(nm, 0) + c * e
                    break
        return Poly._raw({m: c for m, c in t.items() if c})

    def euler(self, name):
        """x * d/dx; keeps Laurent support intact."""
        i = _IDS.get(name)
        t = {}
        for m, c in self._t.items():
            for v, e in m:
                if v == i:
                    t[m] = c * e
                    break
        return Poly._raw(t)

    def evaluate(self, values, zero=None):
        """Evaluate with ``values[name]`` in any ring that mixes with Fraction."""
        pw = {}
        total = zero
        for m, c in self._t.items():
            term = c
            for v, e in m:
                key = (v, e)
                val = pw.get(key)
                if val is None:
                    x = values[_NAMES[v]]
                    val = x ** e if e > 0 else _inv(x) ** (-e)
                    pw[key] = val
                term = term * val
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if zero is None else zero
        return total

    def __call__(self, **values):
        return self.evaluate(values)

    def substitute(self, mapping):
        """Replace the named variables by Polys (or scalars); others stay."""
        ids = {var_id(n): _coerce(p) for n, p in mapping.items()}
        cache = {}
        acc = Poly._raw({})
        for m, c in self._t.items():
            keep = []
            factor = Poly.const(c)
            for v, e in m:
                if v in ids:
                    key = (v, e)
                    val = cache.get(key)
                    if val is None:
                        val = ids[v] ** e
                        cache[key] = val
                    factor = factor * val
                else:
                    keep.append((v, e))
            if keep:
                factor = factor * Poly._raw({tuple(keep): Fraction(1)})
            acc = acc + factor
        return acc

    def rename(self, mapping):
        """Rename variables (a pure relabelling, no collisions checked)."""
        ids = {var_id(a): var_id(b) for a, b in mapping.items()}
        t = {}
        for m, c in self._t.items():
            nm = tuple(sorted((ids.get(v, v), e) for v, e in m))
            t[nm] = t.get(nm, 0) + c
        return Poly._raw({m: c for m, c in t.items() if c})

    def split_by(self, name):
        """Return ``{power: coefficient Poly}`` viewing self as a polynomial in ``name``."""
        i = var_id(name)
        parts = {}
        for m, c in self._t.items():
            e = 0
            rest = m
            for k, (v, ee) in enumerate(m):
                if v == i:
                    e = ee
                    rest = m[:k] + m[k + 1:]
                    break
            parts.setdefault(e, {})[rest] = c
        return {e: Poly._raw(t) for e, t in parts.items()}

    def map_monomials(self, fn):
        """Apply ``fn({name: exp}) -> {name: exp}`` to every monomial."""
        t = {}
        for m, c in self._t.items():
            new = fn({_NAMES[v]: e for v, e in m})
            nm = tuple(sorted((var_id(n), e) for n, e in new.items() if e))
            t[nm] = t.get(nm, 0) + c
        return Poly._raw({m: c for m, c in t.items() if c})

    # -- text -----------------------------------------------------------------

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for mono, c in self.terms():
            body = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in sorted(mono.items(), key=lambda kv: name_key(kv[0]))
            )
            a = abs(c)
            if body:
                txt = body if a == 1 else f"{fmt_q(a)}*{body}"
            else:
                txt = fmt_q(a)
            if not parts:
                parts.append(txt if c > 0 else "-" + txt)
            else:
                parts.append(("+ " if c > 0 else "- ") + txt)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def to_json(self):
        return [
            {"coeff": fmt_q(c), "mono": dict(sorted(m.items(), key=lambda kv: name_key(kv[0])))}
            for m, c in self.terms()
        ]

    @classmethod
    def from_json(cls, data):
        p = cls._raw({})
        for term in data:
            p = p + cls.monomial(term["mono"], Fraction(term["coeff"]))
        return p


def _neg_key(m):
    d, lex = _order_key(m)
    return (-d, tuple((-a, -b) for a, b in lex))


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, Poly):
        return x ** -1
    return 1 / x


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_poly(text):
    """Parse the canonical text form (also accepts ``**`` and parentheses)."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        num, name, op = m.groups()
        toks.append(("n", Fraction(num)) if num else ("v", name) if name else ("o", op))
        pos = m.end()
    toks.append(("end", None))
    k = 0

    def peek():
        return toks[k]

    def take():
        nonlocal k
        k += 1
        return toks[k - 1]

    def expr():
        sign = 1
        if peek() == ("o", "-"):
            take()
            sign = -1
        elif peek() == ("o", "+"):
            take()
        acc = term() * sign
        while peek() in (("o", "+"), ("o", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while peek() in (("o", "*"), ("o", "/")):
            op = take()[1]
            f = power()
            acc = acc * f if op == "*" else acc / f
        return acc

    def power():
        base = atom()
        if peek() in (("o", "^"), ("o", "**")):
            take()
            neg = False
            if peek() == ("o", "-"):
                take()
                neg = True
            kind, val = take()
            if kind != "n" or val.denominator != 1:
                raise ValueError("exponent must be an integer")
            return base ** (-int(val) if neg else int(val))
        return base

    def atom():
        kind, val = take()
        if kind == "n":
            return Poly.const(val)
        if kind == "v":
            return Poly.var(val)
        if (kind, val) == ("o", "("):
            e = expr()
            if take() != ("o", ")"):
                raise ValueError("unbalanced parentheses")
            return e
        if (kind, val) == ("o", "-"):
            return -power()
        raise ValueError(f"unexpected token {val!r}")

    out = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return out


P = parse_poly


def variables(*names):
    return [Poly.var(n) for n in names]
