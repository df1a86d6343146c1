"""Polynomial Poisson algebras given by a table of brackets of the generators."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .poly import Poly, parse_poly

ZERO = Poly.const(0)


class BracketTable:
    """Antisymmetric table {v_i, v_j} (i < j stored) on named generators.

    ``weights`` maps each generator to its T-weight (a tuple of rationals) or
    is None when no grading is attached.
    """

    def __init__(self, variables, entries, weights=None, meta=None):
        self.variables = list(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        self.entries = {}
        for (a, b), p in entries.items():
            i, j = self._ij(a), self._ij(b)
            if i == j:
                if p:
                    raise ValueError("diagonal bracket must vanish")
                continue
            if i > j:
                i, j, p = j, i, -p
            self.entries[(i, j)] = p
        self.weights = None if weights is None else {v: tuple(Fraction(c) for c in w) for v, w in zip(self.variables, weights)}
        self.meta = dict(meta or {})

    def _ij(self, a):
        return a if isinstance(a, int) else self.index[a]

    @property
    def n(self):
        return len(self.variables)

    def get(self, a, b):
        i, j = self._ij(a), self._ij(b)
        if i == j:
            return ZERO
        if i < j:
            return self.entries.get((i, j), ZERO)
        return -self.entries.get((j, i), ZERO)

    def bracket(self, f, g):
        return poisson_bracket(f, g, self)

    def __eq__(self, other):
        if not isinstance(other, BracketTable) or self.variables != other.variables:
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.entries.get(k, ZERO) == other.entries.get(k, ZERO) for k in keys)

    def differences(self, other):
        out = []
        for i, j in itertools.combinations(range(self.n), 2):
            a, b = self.get(i, j), other.get(self.variables[i], self.variables[j])
            if a != b:
                out.append((self.variables[i], self.variables[j], a, b))
        return out

    def weight_of(self, mono):
        w = None
        for v, e in mono.items():
            vw = self.weights[v]
            term = tuple(e * c for c in vw)
            w = term if w is None else tuple(a + b for a, b in zip(w, term))
        if w is None:
            r = len(next(iter(self.weights.values())))
            w = (Fraction(0),) * r
        return w

    def poly_weights(self, p):
        return {self.weight_of(m) for m, _ in p.terms()}

    def homogeneity_violations(self):
        bad = []
        for (i, j), p in self.entries.items():
            want = tuple(a + b for a, b in zip(self.weights[self.variables[i]], self.weights[self.variables[j]]))
            for m, _ in p.terms():
                if self.weight_of(m) != want:
                    bad.append((self.variables[i], self.variables[j], m))
                    break
        return bad

    def restricted(self, keep):
        keep = [v for v in self.variables if v in set(keep)]
        ents = {(a, b): self.get(a, b) for a, b in itertools.combinations(keep, 2)}
        w = None if self.weights is None else [self.weights[v] for v in keep]
        return BracketTable(keep, ents, w, self.meta)

    def to_json(self):
        out = {
            "variables": self.variables,
            "brackets": {f"{i + 1},{j + 1}": str(p) for (i, j), p in sorted(self.entries.items()) if p},
        }
        if self.weights is not None:
            out["weights"] = [[_q(c) for c in self.weights[v]] for v in self.variables]
        out.update({k: v for k, v in self.meta.items()})
        return out

    @classmethod
    def from_json(cls, data):
        variables = data["variables"]
        ents = {}
        for key, txt in data["brackets"].items():
            i, j = (int(s) - 1 for s in key.split(","))
            ents[(i, j)] = parse_poly(txt)
        w = data.get("weights")
        if w is not None:
            w = [[Fraction(c) for c in row] for row in w]
        meta = {k: v for k, v in data.items() if k not in ("variables", "brackets", "weights")}
        return cls(variables, ents, w, meta)


def _q(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _partials(f, bt):
    out = {}
    for v in f.variables():
        if v not in bt.index:
            raise KeyError(f"unknown variable {v!r}")
        d = f.diff(v)
        if d:
            out[v] = d
    return out


def poisson_bracket(f, g, bt):
    """Biderivation extension of the table."""
    if not isinstance(f, Poly):
        f = Poly.const(f)
    if not isinstance(g, Poly):
        g = Poly.const(g)
    df = _partials(f, bt)
    dg = _partials(g, bt)
    acc = ZERO
    for a, fa in df.items():
        inner = ZERO
        for b, gb in dg.items():
            e = bt.get(a, b)
            if e:
                inner = inner + gb * e
        if inner:
            acc = acc + fa * inner
    return acc


def jacobi_check(bt):
    """(True, None) or (False, first violating triple of generator names)."""
    gens = {v: Poly.var(v) for v in bt.variables}
    for i, j, k in itertools.combinations(bt.variables, 3):
        s = (
            poisson_bracket(gens[i], bt.get(j, k), bt)
            + poisson_bracket(gens[j], bt.get(k, i), bt)
            + poisson_bracket(gens[k], bt.get(i, j), bt)
        )
        if s:
            return False, (i, j, k)
    return True, None


def log_canonical_coefficient(f, g, bt):
    """kappa with {f,g} = kappa f g, or None if the pair is not log-canonical."""
    b = poisson_bracket(f, g, bt)
    if not b:
        return Fraction(0)
    fg = f * g
    (m0, c0), = [next(iter(fg.terms()))]
    kappa = b.coeff(m0) / c0
    return kappa if b == fg * kappa else None
