"""Exact multivariate interpolation from black-box rational evaluations."""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import IncrementalSolver
from .poly import Poly


class InterpolationError(ValueError):
    pass


def monomials_upto(nvars, bound):
    """All exponent tuples of total degree <= bound."""
    out = []

    def rec(prefix, left, k):
        if k == nvars:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            prefix.append(e)
            rec(prefix, left - e, k + 1)
            prefix.pop()

    rec([], bound, 0)
    return out


def _mono_value(point, exps):
    v = Fraction(1)
    for x, e in zip(point, exps):
        if e:
            v *= x ** e
    return v


class PointCache:
    """Memoized evaluation on a deterministic stream of nonzero integer points."""

    def __init__(self, evaluator, nvars, seed=0, radius=7):
        self.evaluator = evaluator
        self.nvars = nvars
        self.rng = random.Random(seed)
        self.radius = radius
        self.points = []
        self.values = []

    def _fresh(self):
        while True:
            p = tuple(Fraction(self.rng.choice([-1, 1]) * self.rng.randint(1, self.radius)) for _ in range(self.nvars))
            if p not in self.points:
                return p

    def get(self, k):
        while len(self.points) <= k:
            p = self._fresh()
            self.points.append(p)
            self.values.append(self.evaluator(p))
        return self.points[k], self.values[k]


def _fit(cache, pick, cands, extra):
    solver = IncrementalSolver(len(cands))
    k = 0
    misses = 0
    while not solver.full():
        pt, val = cache.get(k)
        k += 1
        if solver.add([_mono_value(pt, m) for m in cands], pick(val)):
            misses = 0
        else:
            misses += 1
            if misses > 4 * len(cands) + 20:
                raise InterpolationError("interpolation system stays singular")
    coef = solver.solution()
    # verification at points not used in the fit
    for t in range(extra):
        pt, val = cache.get(k + t)
        got = sum((c * _mono_value(pt, m) for c, m in zip(coef, cands) if c), Fraction(0))
        if got != pick(val):
            return None
    return coef


def _to_poly(varnames, cands, coef):
    p = Poly.const(0)
    for c, m in zip(coef, cands):
        if c:
            p = p + Poly.monomial({n: e for n, e in zip(varnames, m) if e}, c)
    return p


def interpolate_entries(evaluator, varnames, nentries, degree_bound=2, supports=None, max_bound=16, extra=5, seed=0):
    """Interpolate several polynomial entries sharing one evaluator.

    ``evaluator(point)`` returns a sequence of ``nentries`` exact values;
    ``supports[k]`` optionally filters candidate exponent tuples for entry k.
    Bounds double until two consecutive fits agree and pass verification.
    """
    n = len(varnames)
    cache = PointCache(evaluator, n, seed=seed)
    out = []
    mono_cache = {}
    for k in range(nentries):
        pick = (lambda v, k=k: Fraction(v[k]))
        flt = supports[k] if supports else None
        bound = max(1, degree_bound)
        prev = None
        while True:
            if bound not in mono_cache:
                mono_cache[bound] = monomials_upto(n, bound)
            cands = [m for m in mono_cache[bound] if flt is None or flt(m)]
            coef = _fit(cache, pick, cands, extra) if cands else []
            cur = None
            if coef is not None:
                cur = _to_poly(varnames, cands, coef)
                if not cands:
                    # nothing allowed: value must vanish everywhere
                    if any(pick(cache.get(t)[1]) for t in range(extra)):
                        cur = None
            if cur is not None and prev is not None and cur == prev:
                out.append(cur)
                break
            prev = cur
            if bound >= max_bound:
                raise InterpolationError(f"entry {k}: no polynomial fit up to degree {max_bound}")
            bound *= 2
    return out


def interpolate_poly(evaluator, varnames, degree_bound=2, support=None, max_bound=16, extra=5, seed=0):
    """Single-entry interface: ``evaluator(point) -> rational``."""
    return interpolate_entries(
        lambda p: (evaluator(p),), varnames, 1, degree_bound,
        supports=[support] if support else None, max_bound=max_bound, extra=extra, seed=seed,
    )[0]
