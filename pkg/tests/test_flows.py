import json
import random
from fractions import Fraction

import pytest

from bruhat_flows import fixtures as fx
from bruhat_flows.cells import laurent_torus, random_open_leaf_point
from bruhat_flows.exactalg import Poly, QuasiPoly, parse_poly
from bruhat_flows.flows import (
    NoTriangularOrder,
    all_structural,
    cascade_residuals,
    find_triangular_order,
    flow_of,
    flows_commute,
    hamiltonian_drift,
    interval_order,
    localized_flow,
    numeric_check,
    ode_residuals,
)


def _y(ds, k):
    return ds.hamiltonians[k - 1]


def _flow(ds, bt, k, **kw):
    y = _y(ds, k)
    return flow_of(y, bt, preferred=interval_order(bt.variables, y.i, y.j), **kw)


def test_a1_gamma1_order(a1_doubled):
    ds, bt = a1_doubled
    y = _y(ds, 1)
    order = find_triangular_order(y.poly, bt, interval_order(bt.variables, y.i, y.j))
    assert order.variables == ["x2", "x3", "x4", "x1"]
    assert [s.kappa for s in order.steps] == [-1, 1, 0, 0]
    assert [s.f for s in order.steps] == [0, 0, -Poly.var("x2"), Poly.var("x3")]


def test_interval_order():
    vs = [f"x{k}" for k in range(1, 7)]
    assert interval_order(vs, 3, 4) == ["x3", "x4", "x5", "x6", "x2", "x1"]


def test_no_order_for_generic_function(a1_tables):
    bt = a1_tables[3]
    with pytest.raises(NoTriangularOrder):
        find_triangular_order(parse_poly("x1*x2*x3 + x2^2"), bt)


def _fixture_cases():
    return [("a1", k, b) for (k, b) in fx.A1_FLOWS] + [("g2", k, b) for (k, b) in fx.G2_FLOWS]


@pytest.mark.parametrize("which,name,branch", _fixture_cases())
def test_doubled_flow_fixtures(which, name, branch, request):
    ds, bt = request.getfixturevalue(f"{which}_doubled")
    table = fx.A1_FLOWS if which == "a1" else fx.G2_FLOWS
    curve = _flow(ds, bt, int(name[-1]), y0=None if branch == "nonzero" else 0)
    want = fx.expected_curve(table[(name, branch)], bt.variables, branch)
    assert curve.coords == want


@pytest.mark.parametrize("name,branch", list(fx.A2_FLOWS))
def test_kz_flow_fixtures(a2_kz, name, branch):
    kz, tt = a2_kz
    h = kz.chain[int(name[-1]) - 1].minor.poly()
    curve = flow_of(h, tt, y0=None if branch == "nonzero" else 0)
    xs = [v for v in tt.variables if not v.startswith("xi")]
    want = fx.expected_curve(fx.A2_FLOWS[(name, branch)], xs, branch)
    for v in xs:
        got = QuasiPoly({a: laurent_torus(p, 2) for a, p in curve.coords[v].terms.items()}, curve.coords[v].rate)
        assert got == want[v]
    # the torus coordinates are Casimirs of these flows
    assert all(curve.coords[v] == QuasiPoly.const(Poly.var(v), curve.coords[v].rate) for v in ("xi1", "xi2"))


def test_phi5_has_two_forced_coordinates(a2_kz):
    kz, tt = a2_kz
    order = find_triangular_order(kz.chain[4].minor.poly(), tt)
    assert sum(1 for s in order.steps if s.f) == 2


@pytest.mark.parametrize("which", ["a1_doubled", "a2_doubled", "g2_doubled"])
def test_symbolic_cascade_is_exact(which, request):
    ds, bt = request.getfixturevalue(which)
    for k in range(1, len(ds.hamiltonians) + 1):
        for y0 in (None, 0):
            curve = _flow(ds, bt, k, y0=y0)
            assert all(r == 0 for r in cascade_residuals(curve).values())
            assert all_structural(curve)


@pytest.mark.parametrize("which", ["a1_doubled", "a2_doubled", "g2_doubled"])
def test_point_flows_solve_the_ode(which, request):
    ds, bt = request.getfixturevalue(which)
    rng = random.Random(11)
    for k in range(1, len(ds.hamiltonians) + 1):
        for _ in range(2):
            x = random_open_leaf_point(ds.spec, rng, radius=3)
            curve = _flow(ds, bt, k, point=dict(zip(bt.variables, x)))
            assert all(r == 0 for r in ode_residuals(curve, bt).values())
            assert hamiltonian_drift(curve) == 0
            assert curve.at(0.0) == {v: float(c) for v, c in zip(bt.variables, x)}


def test_point_flow_matches_numerics(a1_doubled):
    ds, bt = a1_doubled
    x = [Fraction(1, 2), Fraction(-1), Fraction(3, 2), Fraction(2)]
    curve = _flow(ds, bt, 1, point=dict(zip(bt.variables, x)))
    rep = numeric_check(curve, bt, (-2.0, 2.0), samples=41)
    assert rep["max_deviation"] < 1e-8 and rep["max_drift"] < 1e-8
    assert rep["c_reached"] == 2.0


def test_zero_level_point_uses_polynomial_branch(a1_doubled):
    ds, bt = a1_doubled
    point = {"x1": Fraction(1), "x2": Fraction(1), "x3": Fraction(1), "x4": Fraction(5)}
    curve = _flow(ds, bt, 1, point=point)
    assert curve.y0 == 0
    assert curve.coords["x1"] == QuasiPoly({0: 1 + Poly.var("c")})
    with pytest.raises(ValueError):
        _flow(ds, bt, 1, point=point, y0=3)


def test_localized_flow(a1_doubled):
    ds, bt = a1_doubled
    point = {"x1": Fraction(2), "x2": Fraction(3), "x3": Fraction(1, 2), "x4": Fraction(-1)}
    curve = _flow(ds, bt, 1, point=point)
    localized_flow(curve, Poly.var("x3"), bt)
    g, inv = curve.inverted[0]
    assert inv * curve.coords["x3"] == 1
    with pytest.raises(ValueError):
        localized_flow(curve, Poly.var("x1"), bt)


@pytest.mark.parametrize("which", ["a1_doubled", "g2_doubled"])
def test_flows_commute(which, request):
    ds, bt = request.getfixturevalue(which)
    curves = [_flow(ds, bt, k) for k in range(1, len(ds.hamiltonians) + 1)]
    rng = random.Random(12)
    x = random_open_leaf_point(ds.spec, rng, radius=2)
    point = dict(zip(bt.variables, x))
    for a in range(len(curves)):
        for b in range(a + 1, len(curves)):
            assert flows_commute(curves[a], curves[b], point, 0.3, -0.2) < 1e-9


def test_json_exponent_format(a1_doubled):
    ds, bt = a1_doubled
    data = _flow(ds, bt, 1).to_json()
    assert "-1/1·y0" in json.dumps(data["coordinates"]["x2"], ensure_ascii=False)
