"""Closed-form Hamiltonian flows by the triangular cascade.

Convention: along the flow of y, dx/dc = {y, x}.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import Poly, QuasiPoly, poisson_bracket
from .exactalg.quasipoly import ONE

Y0 = "y0"


class NoTriangularOrder(ValueError):
    pass


@dataclass
class OrderStep:
    var: str
    kappa: Fraction
    f: Poly


@dataclass
class TriangularOrder:
    hamiltonian: Poly
    steps: list

    @property
    def variables(self):
        return [s.var for s in self.steps]

    def to_json(self):
        return [{"var": s.var, "kappa": _fq(s.kappa), "f": str(s.f)} for s in self.steps]


def _fq(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _as_poly(y):
    if isinstance(y, Poly):
        return y
    if hasattr(y, "poly"):
        p = y.poly
        return p if isinstance(p, Poly) else p()
    return Poly.const(y)


def _try_step(y, v, bracket, placed):
    """kappa with {y,v} - kappa v y free of unplaced variables, else None."""
    vy = Poly.var(v) * y
    kappa = Fraction(0)
    unplaced = [m for m, _ in bracket.terms() if any(n not in placed for n in m)]
    if unplaced:
        m0 = unplaced[0]
        c = vy.coeff(m0)
        if not c:
            return None
        kappa = bracket.coeff(m0) / c
    f = bracket - vy * kappa if kappa else bracket
    if any(n not in placed for n in f.variables()):
        return None
    return kappa, f


def find_triangular_order(y, bt, preferred=None):
    """Order the generators so that {y, x_j} = kappa_j x_j y + f_j(earlier)."""
    y = _as_poly(y)
    brackets = {v: poisson_bracket(y, Poly.var(v), bt) for v in bt.variables}
    if preferred:
        placed, steps = set(), []
        for v in list(preferred) + [v for v in bt.variables if v not in preferred]:
            got = _try_step(y, v, brackets[v], placed)
            if got is None:
                break
            steps.append(OrderStep(v, *got))
            placed.add(v)
        else:
            return TriangularOrder(y, steps)
    placed, steps = set(), []
    left = list(bt.variables)
    while left:
        for v in left:
            got = _try_step(y, v, brackets[v], placed)
            if got is not None:
                steps.append(OrderStep(v, *got))
                placed.add(v)
                left.remove(v)
                break
        else:
            raise NoTriangularOrder(f"no admissible next coordinate among {left}")
    return TriangularOrder(y, steps)


def interval_order(spec_vars, i, j):
    """The order x_i..x_j, x_{j+1}..x_n, x_{i-1}..x_1."""
    n = len(spec_vars)
    idx = list(range(i, j + 1)) + list(range(j + 1, n + 1)) + list(range(i - 1, 0, -1))
    return [spec_vars[k - 1] for k in idx]


# -- curves ---------------------------------------------------------------------


@dataclass
class FlowCurve:
    hamiltonian: Poly
    order: TriangularOrder
    base: dict
    y0: object
    coords: dict
    inverted: list = field(default_factory=list)  # (g, QuasiPoly of 1/g)

    @property
    def symbolic(self):
        return isinstance(self.y0, Poly) and not self.y0.is_const()

    def variables(self):
        return list(self.coords)

    def at(self, cval, env=None):
        """Float coordinates at parameter c (env fills symbols in symbolic mode)."""
        return {v: q.at(cval, env) for v, q in self.coords.items()}

    def to_json(self):
        y0 = None if self.symbolic else self.y0
        return {
            "hamiltonian": str(self.hamiltonian),
            "y0": str(self.y0) if self.symbolic else _fq(self.y0),
            "base": {v: str(b) if isinstance(b, Poly) else _fq(b) for v, b in self.base.items()},
            "order": self.order.to_json(),
            "coordinates": {v: q.to_json(y0) for v, q in self.coords.items()},
            "inverted": [{"g": str(g), "curve": q.to_json(y0)} for g, q in self.inverted],
        }

    def sample_csv(self, k, tmax, env=None):
        """k + 1 evenly spaced samples on [-tmax, tmax] (k >= 1)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = self.variables() + [f"1/({g})" for g, _ in self.inverted]
        w.writerow(["c"] + names)
        for s in range(k + 1):
            c = -tmax + 2 * tmax * s / k if k else 0.0
            row = [q.at(c, env) for q in self.coords.values()] + [q.at(c, env) for _, q in self.inverted]
            w.writerow([f"{c:.10g}"] + [f"{v:.12g}" for v in row])
        return buf.getvalue()


def solve_cascade(order, base, y0):
    """Integrate the cascade from ``base`` with Hamiltonian value ``y0``.

    ``y0`` is a rational (rate 1, exponents kappa*y0) or the symbol y0
    (rate y0, exponents kappa); ``base`` maps names to rationals or Polys.
    """
    if isinstance(y0, Poly) and not y0.is_const():
        rate, scale = y0, Fraction(1)
    else:
        rate = ONE
        scale = Fraction(y0.const_value() if isinstance(y0, Poly) else y0)
    coords = {}
    for st in order.steps:
        key = st.kappa * scale
        start = QuasiPoly.const(base[st.var], rate)
        if st.f:
            forcing = st.f.evaluate(coords, zero=QuasiPoly.const(0, rate))
            if not isinstance(forcing, QuasiPoly):
                forcing = QuasiPoly.const(forcing, rate)
            start = start + forcing.integrate(-key)
        coords[st.var] = start.shifted(key) if key else start
    ordered = {v: coords[v] for v in base if v in coords}
    ordered.update({v: q for v, q in coords.items() if v not in ordered})
    return FlowCurve(order.hamiltonian, order, dict(base), y0, ordered)


def complete_point(point, variables):
    """Fill xi0 = 1/(xi1...xir) when the table carries it."""
    pt = {k: (v if isinstance(v, Poly) else Fraction(v)) for k, v in point.items()}
    if "xi0" in variables and "xi0" not in pt:
        prod = Fraction(1)
        for v in variables:
            if v.startswith("xi") and v != "xi0":
                prod *= pt[v]
        pt["xi0"] = 1 / prod
    missing = [v for v in variables if v not in pt]
    if missing:
        raise ValueError(f"point lacks coordinates {missing}")
    return pt


def symbolic_point(variables):
    return {v: Poly.var(v) for v in variables}


def flow_of(y, bt, point=None, preferred=None, y0=None):
    """Closed-form flow of y through ``point`` (symbolic base point when None).

    In symbolic mode the Hamiltonian value is the symbol y0 unless ``y0`` is
    given (pass 0 for the polynomial branch).
    """
    y = _as_poly(y)
    order = find_triangular_order(y, bt, preferred)
    if point is None:
        base = symbolic_point(bt.variables)
        val = Poly.var(Y0) if y0 is None else Fraction(y0)
    else:
        base = complete_point(point, bt.variables)
        val = Fraction(y.evaluate(base))
        if y0 is not None and Fraction(y0) != val:
            raise ValueError("y0 does not match the Hamiltonian at the point")
    return solve_cascade(order, base, val)


def localized_flow(curve, g, bt):
    """Track 1/g along the curve when {y, g} = kappa y g."""
    from .exactalg import log_canonical_coefficient

    kappa = log_canonical_coefficient(curve.hamiltonian, g, bt)
    if kappa is None:
        raise ValueError("g is not log-canonical with the Hamiltonian")
    if curve.symbolic:
        rate, key = curve.y0, kappa
        g0 = g.evaluate(curve.base)
        if not g0.is_monomial():
            raise ValueError("1/g(p) is not a Laurent monomial in symbolic mode")
        inv = QuasiPoly.exp(-key, rate, g0 ** -1)
    else:
        g0 = Fraction(g.evaluate(curve.base))
        if not g0:
            raise ZeroDivisionError("g vanishes at the base point")
        key = kappa * Fraction(curve.y0)
        inv = QuasiPoly.exp(-key, ONE, 1 / g0)
        # certificate: g along the curve is g(p) e^{kappa y0 c}
        along = g.evaluate(curve.coords, zero=QuasiPoly.const(0))
        if along != QuasiPoly.exp(key, ONE, g0):
            raise ArithmeticError("g does not evolve log-canonically along the curve")
    curve.inverted.append((g, inv))
    return curve


# -- verification -----------------------------------------------------------------


def vector_field(y, bt):
    y = _as_poly(y)
    return {v: poisson_bracket(y, Poly.var(v), bt) for v in bt.variables}


def ode_residuals(curve, bt):
    """d/dc x_j - {y, x_j}(curve) for each coordinate (exact, numeric-mode curves)."""
    field_ = vector_field(curve.hamiltonian, bt)
    zero = QuasiPoly.const(0, curve.coords[next(iter(curve.coords))].rate)
    out = {}
    for v, q in curve.coords.items():
        rhs = field_[v].evaluate(curve.coords, zero=zero)
        out[v] = q.diff() - rhs
    return out


def cascade_residuals(curve):
    """d/dc x_j - (kappa_j y0 x_j + f_j(curve)); valid in symbolic mode as well."""
    rate = next(iter(curve.coords.values())).rate
    zero = QuasiPoly.const(0, rate)
    out = {}
    for st in curve.order.steps:
        q = curve.coords[st.var]
        drift = q * (curve.y0 if curve.symbolic else Fraction(curve.y0)) * st.kappa
        forcing = st.f.evaluate(curve.coords, zero=zero) if st.f else zero
        out[st.var] = q.diff() - drift - forcing
    return out


def hamiltonian_drift(curve):
    zero = QuasiPoly.const(0, next(iter(curve.coords.values())).rate)
    return curve.hamiltonian.evaluate(curve.coords, zero=zero) - curve.y0


def all_structural(curve):
    return all(isinstance(q, QuasiPoly) and q.is_structural() for q in curve.coords.values())


def _compile(p, variables):
    """Fast float evaluator for a Poly."""
    terms = []
    idx = {v: k for k, v in enumerate(variables)}
    for mono, c in p.terms():
        terms.append((float(c), [(idx[n], e) for n, e in mono.items()]))

    def f(x):
        tot = 0.0
        for c, ms in terms:
            t = c
            for k, e in ms:
                t *= x[k] ** e
            tot += t
        return tot

    return f


def numeric_check(curve, bt, c_range=(-2.0, 2.0), samples=21, rtol=1e-12, atol=1e-12, env=None):
    """Integrate dx/dc = {y, x} numerically and compare with the closed form.

    Returns {"max_deviation", "max_drift", "c_reached"}; deviation is relative
    to max(1, |exact|).
    """
    import numpy as np
    from scipy.integrate import solve_ivp

    variables = list(bt.variables)
    field_ = vector_field(curve.hamiltonian, bt)
    fs = [_compile(field_[v], variables) for v in variables]
    ham = _compile(curve.hamiltonian, variables)
    if curve.symbolic:
        base_env = dict(env)
        x0 = [float(base_env[v]) for v in variables]
        env_full = dict(base_env, **{Y0: ham(x0)})
    else:
        x0 = [float(curve.base[v]) for v in variables]
        env_full = None
    y_start = ham(x0)

    def rhs(_, x):
        return [f(x) for f in fs]

    dev, drift, reached = 0.0, 0.0, 0.0
    lo, hi = c_range
    for end in (hi, lo):
        if end == 0:
            continue
        ts = np.linspace(0.0, end, samples)
        sol = solve_ivp(rhs, (0.0, end), x0, method="DOP853", t_eval=ts, rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"integration failed near c={sol.t[-1] if len(sol.t) else 0}: {sol.message}")
        reached = max(reached, abs(sol.t[-1]))
        for k, c in enumerate(sol.t):
            for i, v in enumerate(variables):
                exact = curve.coords[v].at(float(c), env_full)
                dev = max(dev, abs(sol.y[i][k] - exact) / max(1.0, abs(exact)))
            drift = max(drift, abs(ham(sol.y[:, k]) - y_start))
    return {"max_deviation": dev, "max_drift": drift, "c_reached": reached}


def flows_commute(curve_a, curve_b, point, c1, c2):
    """Max |phi_a(c1) phi_b(c2) p - phi_b(c2) phi_a(c1) p| using symbolic curves at float points."""
    p = {k: float(v) for k, v in point.items()}

    def step(curve, c, pt):
        env = dict(pt)
        env[Y0] = float(curve.hamiltonian.evaluate(pt))
        return {v: q.at(c, env) for v, q in curve.coords.items()}

    ab = step(curve_a, c1, step(curve_b, c2, p))
    ba = step(curve_b, c2, step(curve_a, c1, p))
    return max(abs(ab[v] - ba[v]) / max(1.0, abs(ab[v])) for v in ab)


def is_finite(x):
    return not (math.isnan(x) or math.isinf(x))
